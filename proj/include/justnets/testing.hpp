#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "justnets/exec.hpp"
#include "justnets/fail.hpp"
#include "justnets/net.hpp"

namespace justnets::testing {

using exec::Criterion;
using exec::Mode;

// Tests are ordinary nets; a marking enabling a success transition is a success marking.

enum class Outcome { pass, fail, inconclusive };
std::string to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  /// Fail: an unsuccessful path of the composed net (may: a successful one on pass).
  std::optional<exec::Path> witness;
  std::size_t nodes = 0;  // markings explored
  bool truncated = false;

  bool pass() const { return outcome == Outcome::pass; }
  bool fail() const { return outcome == Outcome::fail; }
};

/// Hides every visible action of the composition of `test` and `n` synchronised on
/// all visible actions. Throws InvalidNet when n contains a success transition.
Net apply(const Net& test, const Net& n);

Verdict may(const Net& test, const Net& n, std::size_t max_nodes = 10000);

/// Every finite path of the composition extends to one that visits a success marking.
Verdict should(const Net& test, const Net& n, std::size_t max_nodes = 10000);

/// Every complete path of the composition visits a success marking.
Verdict must(const Net& test, const Net& n, Criterion c, Mode mode = Mode::individual,
             std::size_t max_nodes = 10000);

/// The same three verdicts on an already composed net.
Verdict may_composed(const Net& composed, std::size_t max_nodes = 10000);
Verdict should_composed(const Net& composed, std::size_t max_nodes = 10000);
Verdict must_composed(const Net& composed, Criterion c, Mode mode = Mode::individual, std::size_t max_nodes = 10000);

/// Test deciding the justness failure pair (sigma, x): composed with any net K it has
/// an unsuccessful just path iff (sigma, x) is a justness failure of K.
/// A chain of places follows sigma (closing into a cycle for infinite sigma); every
/// chain place except the last of a finite chain has a tau escape to a place e, and
/// each b in x leads from a marked monitor place to a place f. Success transitions
/// consume e and f; the test is safe.
/// Throws InvalidNet if sigma has non-visible labels or x contains `success`.
Net universal_test(const exec::Trace& sigma, const ActionSet& x, const Label& success = Label::success());

struct Separation {
  enum class Status { separated, not_separated, leq_holds, inconclusive };
  Status status = Status::inconclusive;
  std::optional<exec::Trace> sigma;  // failure pair of n2 that n lacks
  ActionSet refusal;
  std::string success_action;  // fresh visible action used as success
  fail::LeqResult composed;     // comparison of the two composed nets under b
};
std::string to_string(Separation::Status s);

/// Separates n and n2 by a context when n is not below n2 under justness: builds the
/// universal test of a distinguishing failure pair with a fresh visible success action,
/// composes with each net over all other actions, hides them, and compares the results
/// under justness with blocking set b.
Separation closure_separation(const Net& n, const Net& n2, const ActionSet& b, const fail::Bounds& bounds = {});

}  // namespace justnets::testing
