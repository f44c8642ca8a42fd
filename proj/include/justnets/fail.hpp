#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "justnets/exec.hpp"
#include "justnets/net.hpp"

namespace justnets::fail {

using exec::Criterion;
using exec::Mode;
using exec::Trace;
using exec::Word;

/// A complete path with trace `trace` whose path-enabled transitions carry exactly
/// the labels `enabled`. It witnesses every failure pair (trace, X) with X disjoint
/// from `enabled`.
struct FailureWitness {
  Trace trace;
  LabelSet enabled;
  auto operator<=>(const FailureWitness&) const = default;
};

struct Bounds {
  std::size_t max_trace_len = 6;   // finite traces
  std::size_t max_prefix_len = 6;  // stems of infinite traces
  std::size_t max_cycle_len = 8;   // closed walks generating loops of infinite traces
  std::size_t max_nodes = 10000;   // marking graph
};

struct WitnessSet {
  std::vector<FailureWitness> witnesses;  // sorted; per trace only minimal label sets
  bool truncated = false;                 // marking graph hit max_nodes
};

/// Witnesses for all finite traces up to max_trace_len and for the infinite traces
/// generated by stems and closed walks within the bounds. Per trace the label sets
/// are exact whenever the marking graph is complete.
WitnessSet failures(const Net& n, Criterion c, const Bounds& bounds = {}, Mode mode = Mode::individual);

struct Bases {
  std::vector<LabelSet> minimal;  // minimal label sets of complete paths with the trace
  bool truncated = false;
};

/// Exact minimal enabled-label sets of complete paths with trace sigma (product of
/// the marking graph with the trace).
Bases refusal_bases(const Net& n, Criterion c, const Trace& sigma, Mode mode = Mode::individual,
                    std::size_t max_nodes = 10000);

/// (sigma, x) is a failure pair. nullopt when the marking graph was truncated and no
/// witness was found in the explored part.
std::optional<bool> has_failure(const Net& n, Criterion c, const Trace& sigma, const LabelSet& x,
                                Mode mode = Mode::individual, std::size_t max_nodes = 10000);

/// Observable labels of a net: visible alphabet plus w when present.
LabelSet observable_alphabet(const Net& n);

enum class LeqVerdict { holds_within_bounds, fails, inconclusive };
std::string to_string(LeqVerdict v);

struct LeqResult {
  LeqVerdict verdict = LeqVerdict::holds_within_bounds;
  std::optional<Trace> trace;  // counterexample failure pair, present iff fails
  LabelSet refusal;
  Bounds bounds;
  std::size_t witnesses_left = 0;
  std::size_t witnesses_right = 0;
};

/// n below n2: every failure of n2 (restricted to the bounds) is a failure of n.
/// With `b`, only traces of b-complete paths are compared.
LeqResult leq(const Net& n, const Net& n2, Criterion c, const std::optional<LabelSet>& b = std::nullopt,
              const Bounds& bounds = {}, Mode mode = Mode::individual);

/// {"verdict", "bounds", "counterexample"?, "witness_counts"}.
std::string to_json(const LeqResult& r);

/// Interleavings of s and r synchronising on visible actions in a.
std::set<Word> merge_traces(const Word& s, const Word& r, const ActionSet& a);

struct Claim6Report {
  bool equal = true;
  std::vector<FailureWitness> only_direct;   // in the composed net, not the formula
  std::vector<FailureWitness> only_formula;  // built by the formula, not in the composed net
  std::size_t compared = 0;
  bool truncated = false;
};

/// Compares the finite-trace justness witnesses of parallel(n1, n2, a) with those
/// assembled from the components' witnesses.
Claim6Report claim6_check(const Net& n1, const Net& n2, const ActionSet& a, const Bounds& bounds = {});
std::string to_json(const Claim6Report& r, const Bounds& bounds);

std::string format_labels(const LabelSet& s);
std::string format_witness(const FailureWitness& w);

}  // namespace justnets::fail
