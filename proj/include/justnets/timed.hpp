#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "justnets/exec.hpp"
#include "justnets/net.hpp"
#include "justnets/testing.hpp"

namespace justnets::timed {

using Time = boost::rational<std::int64_t>;
std::string format_time(const Time& t);  // "p/q"

/// Marking plus the residual activation time of every enabled transition.
struct Cid {
  Marking marking;
  std::map<TransitionId, Time> clocks;
  bool operator==(const Cid&) const = default;
};

struct TimeStep {
  Time r;
  bool operator==(const TimeStep&) const = default;
};
using Event = std::variant<TransitionId, TimeStep>;

struct TimedStep {
  Event event;
  Cid cid;  // reached by the event
};

struct TimedPath {
  Cid start;
  std::vector<TimedStep> steps;
  /// Non-empty: these steps repeat forever after `steps`.
  std::vector<TimedStep> cycle;
};

/// Throws InvalidNet unless every reachable marking is 1-safe and no transition has an
/// empty preset; also when safety cannot be settled within max_nodes markings.
void check_timed_net(const Net& n, std::size_t max_nodes = 10000);

/// Initial marking with every enabled transition's clock at 1. Checks check_timed_net.
Cid initial_cid(const Net& n, std::size_t max_nodes = 10000);

/// Fires t: clocks of transitions still enabled under M - pre(t) are kept, every other
/// transition enabled afterwards gets 1. Throws NotEnabled.
Cid timed_fire(const Net& n, const Cid& c, TransitionId t);
/// Lets r > 0 time pass. Throws TimeExceedsDeadline when r exceeds a clock.
Cid timed_fire(const Net& n, const Cid& c, const Time& r);

/// Sum of the time steps; nullopt (infinite) when the cycle contains a time step.
std::optional<Time> duration(const TimedPath& p);

/// Throws InvalidPath unless every step follows from the previous CID.
void validate(const Net& n, const TimedPath& p);

/// Drops the time steps.
exec::FinPath untimed(const Net& n, const TimedPath& p);

/// Slowest timing of a finite path: one time unit passes whenever every transition
/// enabled at the start of the current round has fired or been disabled.
/// slowest_star stops right after the last transition.
TimedPath slowest_star(const Net& n, const exec::FinPath& p);
/// Includes the time after the last transition: one more unit if the round is over,
/// unbounded time (a repeating unit step) if the final marking is dead.
TimedPath slowest(const Net& n, const exec::FinPath& p);
/// Slowest timing of a lasso, itself ultimately periodic.
TimedPath slowest(const Net& n, const exec::Lasso& p);

struct TimedVerdict {
  testing::Outcome outcome = testing::Outcome::inconclusive;
  /// Supremum of the durations of timed paths without a success transition;
  /// nullopt means unbounded. Only meaningful when the graph was not truncated.
  std::optional<Time> max_duration;
  std::optional<exec::Path> witness;    // untimed path of the composed net
  std::optional<TimedPath> timed_path;  // its slowest timing
  std::size_t nodes = 0;
  bool truncated = false;
};

/// Every timed path of apply(test, n) lasting longer than d contains a success
/// transition. Decided exactly on the graph of markings paired with the set of
/// transitions still pending in the current slowest round.
TimedVerdict must_timed(const Net& n, const Net& test, const Time& d, std::size_t max_nodes = 10000);
TimedVerdict must_timed_composed(const Net& composed, const Time& d, std::size_t max_nodes = 10000);

struct EventualVerdict {
  /// Some duration bounds every success-free timed path (from the slowest-round graph).
  testing::Outcome outcome = testing::Outcome::inconclusive;
  /// Every just path fires a success transition (direct search for a success-free just path).
  testing::Outcome just_paths = testing::Outcome::inconclusive;
  /// must testing under justness on the same composition.
  testing::Outcome must_j = testing::Outcome::inconclusive;
  std::optional<Time> bound;  // max success-free duration when outcome is pass
  std::optional<exec::Path> witness;
};

EventualVerdict must_eventually(const Net& n, const Net& test, std::size_t max_nodes = 10000);

/// {"verdict", "max_duration", "witness": [{"fire": name} | {"time": "p/q"}], "cycle": [...]}.
std::string to_json(const Net& composed, const TimedVerdict& v);

}  // namespace justnets::timed
