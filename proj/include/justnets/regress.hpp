#pragma once

#include <string>
#include <vector>

namespace justnets::regress {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;  // what was observed
  double seconds = 0;
};

/// Exact-verdict checks on the hand-made corpus. Deterministic order.
std::vector<Check> run_corpus_checks();

/// Fixed-width table, one row per check, and a summary line.
std::string format_table(const std::vector<Check>& checks);

}  // namespace justnets::regress
