#include <random>

#include "catch_amalgamated.hpp"
#include "generators.hpp"
#include "justnets/corpus.hpp"
#include "justnets/lang.hpp"
#include "justnets/net_io.hpp"
#include "justnets/timed.hpp"
#include "oracles.hpp"

using namespace justnets;
using namespace justnets::timed;
using testing::Outcome;

namespace {

Net ccs(const char* src) { return lang::compile_source(src); }

bool w_free(const Net& n, const exec::Path& p) {
  auto ok = [&](const std::vector<exec::PathStep>& ss) {
    for (const auto& s : ss) {
      if (n.transition(s.transition).label.is_success()) return false;
    }
    return true;
  };
  if (const auto* f = std::get_if<exec::FinPath>(&p)) return ok(f->steps);
  const auto& l = std::get<exec::Lasso>(p);
  return ok(l.prefix.steps) && ok(l.cycle);
}

TimedPath slowest_of(const Net& n, const exec::Path& p) {
  if (const auto* f = std::get_if<exec::FinPath>(&p)) return slowest(n, *f);
  return slowest(n, std::get<exec::Lasso>(p));
}

// Random legal timed run: delays are fractions of the smallest clock.
TimedPath random_timed(const Net& n, std::mt19937& rng, int len) {
  TimedPath p;
  p.start = initial_cid(n);
  Cid c = p.start;
  for (int i = 0; i < len; ++i) {
    auto en = enabled_transitions(n, c.marking);
    Time r(1);
    for (const auto& [t, x] : c.clocks) r = std::min(r, x);
    if (en.empty() || (r > Time(0) && rng() % 3 == 0)) {
      r *= Time(static_cast<std::int64_t>(rng() % 4 + 1), 4);
      c = timed_fire(n, c, r);
      p.steps.push_back({TimeStep{r}, c});
    } else {
      // An expired clock forces a firing; pick among the expired ones.
      if (r == Time(0)) std::erase_if(en, [&](TransitionId t) { return c.clocks.at(t) > Time(0); });
      auto t = en[rng() % en.size()];
      c = timed_fire(n, c, t);
      p.steps.push_back({t, c});
    }
  }
  return p;
}

}  // namespace

TEST_CASE("time formatting") {
  CHECK(format_time(Time(3)) == "3/1");
  CHECK(format_time(Time(2, 4)) == "1/2");
}

TEST_CASE("firing resets clocks of disturbed transitions") {
  const Net n = corpus::justness_b();  // a consumes p, b loops on p
  Cid c = initial_cid(n);
  REQUIRE(c.clocks.size() == 2);
  c = timed_fire(n, c, Time(1, 2));
  for (const auto& [t, x] : c.clocks) CHECK(x == Time(1, 2));
  const auto b = n.find_transition("tb");
  REQUIRE(b);
  c = timed_fire(n, c, *b);
  for (const auto& [t, x] : c.clocks) CHECK(x == Time(1));
  CHECK_THROWS_AS(timed_fire(n, c, Time(3, 2)), TimeExceedsDeadline);
  CHECK_THROWS_AS(timed_fire(n, c, Time(0)), TimeExceedsDeadline);
}

TEST_CASE("undisturbed clocks keep running") {
  const Net n = corpus::justness_a();  // a on p, b loop on q
  Cid c = initial_cid(n);
  c = timed_fire(n, c, Time(1, 4));
  c = timed_fire(n, c, *n.find_transition("tb"));
  CHECK(c.clocks.at(*n.find_transition("ta")) == Time(3, 4));
  CHECK(c.clocks.at(*n.find_transition("tb")) == Time(1));
  CHECK_THROWS_AS(timed_fire(n, c, Time(1)), TimeExceedsDeadline);
}

TEST_CASE("timed nets must be safe and free of empty presets") {
  NetBuilder b("free");
  b.add_place("p", 1);
  b.add_transition("t", Label::tau());
  CHECK_THROWS_AS(initial_cid(std::move(b).build()), InvalidNet);
  CHECK_THROWS_AS(initial_cid(corpus::individual_tokens()), InvalidNet);
  CHECK_NOTHROW(initial_cid(corpus::justness_a()));
}

TEST_CASE("durations and slowest timings") {
  const Net n = corpus::tau_a_then_stop();
  const auto path = exec::make_path(n, n.initial_marking(), {TransitionId{0}, TransitionId{1}});
  const auto star = slowest_star(n, path);
  validate(n, star);
  CHECK(duration(star) == Time(2));
  const auto full = slowest(n, path);
  validate(n, full);
  CHECK_FALSE(duration(full).has_value());  // dead at the end
  CHECK(untimed(n, full).steps.size() == 2);

  const Net live = corpus::livelock();
  const auto l = exec::make_lasso(live, exec::FinPath{live.initial_marking(), {}}, {TransitionId{0}});
  const auto tl = slowest(live, l);
  validate(live, tl);
  CHECK_FALSE(duration(tl).has_value());
}

TEST_CASE("slowest timings replay and keep the untimed path") {
  std::mt19937 rng(5);
  int paths = 0;
  for (int i = 0; i < 60; ++i) {
    const Net n = gen::random_safe_net(rng, 4, 5);
    oracle::for_each_path(n, 4, 3, [&](const exec::Path& p) {
      const auto f = std::get_if<exec::FinPath>(&p);
      if (!f) return;
      ++paths;
      CHECK(*duration(slowest_star(n, *f)) <= Time(static_cast<std::int64_t>(f->steps.size())));
      for (const auto& tp : {slowest_star(n, *f), slowest(n, *f)}) {
        validate(n, tp);
        const auto u = untimed(n, tp);
        REQUIRE(u.steps.size() == f->steps.size());
        for (std::size_t k = 0; k < u.steps.size(); ++k) CHECK(u.steps[k].transition == f->steps[k].transition);
      }
    });
  }
  CHECK(paths > 500);
}

TEST_CASE("a path is just exactly when its slowest timing never ends") {
  std::mt19937 rng(8);
  int just = 0, unjust = 0;
  for (int i = 0; i < 80; ++i) {
    const Net n = gen::random_safe_net(rng, 4, 5);
    oracle::for_each_path(n, 3, 3, [&](const exec::Path& p) {
      const auto tp = slowest_of(n, p);
      validate(n, tp);
      const bool is_just = exec::is_b_just(n, p, {});
      CAPTURE(write_pnet(n), exec::format_path(n, p));
      CHECK(is_just == !duration(tp).has_value());
      (is_just ? just : unjust)++;
    });
  }
  CHECK(just > 100);
  CHECK(unjust > 100);
}

TEST_CASE("slowest timing is the slowest") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Net n = gen::random_safe_net(rng, 4, 5);
    const auto tp = random_timed(n, rng, 8);
    validate(n, tp);
    const auto slow = slowest(n, untimed(n, tp));
    const auto d = duration(slow);
    if (d) CHECK(*duration(tp) <= *d);
  }
}

TEST_CASE("timed must testing with a.w") {
  const Net t = corpus::timed_test_aw();
  auto v = must_timed(corpus::a_then_stop(), t, Time(2));
  CHECK(v.outcome == Outcome::pass);
  CHECK(v.max_duration == Time(2));

  v = must_timed(corpus::tau_a_then_stop(), t, Time(2));
  CHECK(v.outcome == Outcome::fail);
  CHECK(v.max_duration == Time(3));
  REQUIRE(v.timed_path);
  const Net c = testing::apply(t, corpus::tau_a_then_stop());
  validate(c, *v.timed_path);
  CHECK(duration(*v.timed_path) == Time(3));
  CHECK(must_timed(corpus::tau_a_then_stop(), t, Time(3)).outcome == Outcome::pass);

  const auto json = to_json(c, v);
  CHECK(json.find("\"max_duration\": \"3/1\"") != std::string::npos);
}

TEST_CASE("unbounded delays fail every deadline") {
  const Net t = ccs("T = a.w.0;");
  auto v = must_timed(corpus::deadlock(), t, Time(100));
  CHECK(v.outcome == Outcome::fail);
  CHECK_FALSE(v.max_duration);
  REQUIRE(v.timed_path);
  CHECK_FALSE(duration(*v.timed_path));

  // a.0 + tau-loop: every tau step disturbs a, so the loop is just and takes forever.
  v = must_timed(corpus::choice_a_livelock(), t, Time(100));
  CHECK(v.outcome == Outcome::fail);
  CHECK_FALSE(v.max_duration);
  // Separate loops leave a enabled, so a fires within bounded time.
  CHECK(must_timed(ccs("N = a.0 ||| L; L = tau.L; N"), t, Time(10)).outcome == Outcome::pass);
}

TEST_CASE("maximal durations agree with explicit paths") {
  std::mt19937 rng(21);
  int fails = 0;
  for (int i = 0; i < 150; ++i) {
    const Net n = gen::random_safe_net(rng, 3, 4);
    const Net t = gen::random_safe_test(rng, 3, 3);
    const Net c = testing::apply(t, n);
    const auto v = must_timed_composed(c, Time(2));
    REQUIRE_FALSE(v.truncated);
    CAPTURE(write_pnet(c));
    std::optional<Time> best = Time(0);
    oracle::for_each_path(c, 5, 3, [&](const exec::Path& p) {
      if (!w_free(c, p) || !best) return;
      const auto d = duration(slowest_of(c, p));
      if (!d) {
        best.reset();
      } else {
        best = std::max(*best, *d);
      }
    });
    if (!v.max_duration) {
      REQUIRE(v.timed_path);
      validate(c, *v.timed_path);
      CHECK_FALSE(duration(*v.timed_path));
    } else {
      REQUIRE(best);  // the explicit search cannot exceed the exact bound
      CHECK(*best <= *v.max_duration);
      for (int k = 0; k < 20; ++k) {
        const auto tp = random_timed(c, rng, 6);
        bool success = false;
        for (const auto& s : tp.steps) {
          if (const auto* u = std::get_if<TransitionId>(&s.event)) success |= c.transition(*u).label.is_success();
        }
        if (!success) CHECK(*duration(tp) <= *v.max_duration);
      }
    }
    CHECK((v.outcome == Outcome::fail) == (!v.max_duration || *v.max_duration > Time(2)));
    if (v.outcome == Outcome::fail) {
      ++fails;
      REQUIRE(v.timed_path);
      validate(c, *v.timed_path);
      const auto d = duration(*v.timed_path);
      CHECK(d == v.max_duration);
    }
  }
  CHECK(fails > 10);
}

TEST_CASE("eventual success matches just paths") {
  std::mt19937 rng(34);
  int agree_guarded = 0;
  for (int i = 0; i < 200; ++i) {
    const Net n = gen::random_safe_net(rng, 4, 4);
    const Net t = gen::random_safe_test(rng, 3, 3);
    CAPTURE(write_pnet(n), write_pnet(t));
    const auto e = must_eventually(n, t);
    REQUIRE(e.outcome != Outcome::inconclusive);
    CHECK(e.outcome == e.just_paths);
    const auto g = must_eventually(n, gen::guard_success(t));
    CHECK(g.outcome == g.just_paths);
    CHECK(g.outcome == g.must_j);
    agree_guarded += g.outcome == g.must_j;
    if (e.outcome == Outcome::pass) CHECK(e.bound);
  }
  CHECK(agree_guarded == 200);
}
