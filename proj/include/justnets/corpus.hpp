#pragma once

#include <string>
#include <vector>

#include "justnets/net.hpp"

namespace justnets::corpus {

/// Nets used throughout the regression corpus. Each is small enough to check by hand.

/// Two marked places p, q; a consumes p, b loops on q.
Net justness_a();
/// One marked place consumed by a, with a b self-loop on it.
Net justness_b();
/// p marked; tau moves the token from p to q; b consumes q.
Net justness_c();
/// Place p with two tokens and marked place s; ta loops on {p,s}; tb consumes p.
Net individual_tokens();

/// Single marked place, no transitions (deadlock).
Net deadlock();
/// Single marked place with a tau self-loop (livelock).
Net livelock();
/// Marked place consumed by a w transition.
Net success_now();
/// Marked place, tau to a second place consumed by w.
Net tau_then_success();

/// a.(b.0 + c.0) and a.b.0 + a.c.0, and the test a.c.0 without success.
Net branching_n();
Net branching_n2();
Net branching_test();

/// tau.b.c.0 and tau.0 + tau.b.c.0.
Net abstraction_n();
Net abstraction_n2();

/// a.0 and tau.a.0.
Net a_then_stop();
Net tau_a_then_stop();

/// a.0 + tau-loop and b.0 + tau-loop on the same place.
Net choice_a_livelock();
Net choice_b_livelock();
/// An a-loop and a tau-loop on separate marked places, and both loops on one place.
Net loops_apart();
Net loops_together();
/// Both loops on one place, plus tau to a second place with its own tau-loop.
Net loops_together_escape();
/// c.0 + c.g.0 with a tau-loop on the start, and c.g.0 with a tau-loop on the start.
Net cg_choice_livelock();
Net cg_livelock();

/// The timed test a.w: a consumes the start place, then w.
Net timed_test_aw();

/// Traffic light source text: TL and Traffic composed over drive.
std::string traffic_source();

struct NamedNet {
  std::string name;
  Net net;
};

/// All hand-made corpus nets above that contain no success transition.
std::vector<NamedNet> example_nets();

}  // namespace justnets::corpus
