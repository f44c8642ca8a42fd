#include "justnets/regress.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include "justnets/corpus.hpp"
#include "justnets/fail.hpp"
#include "justnets/feas.hpp"
#include "justnets/lang.hpp"
#include "justnets/testing.hpp"
#include "justnets/timed.hpp"

namespace justnets::regress {

namespace {

using exec::Criterion;
using exec::Trace;
using Result = std::pair<bool, std::string>;

Label V(const char* a) { return Label::visible(a); }
Trace fin(std::vector<Label> w) { return Trace{std::move(w), {}}; }

// Traces of witnesses whose enabled set lies inside b.
std::set<Trace> traces_within(const fail::WitnessSet& ws, const LabelSet& b) {
  std::set<Trace> out;
  for (const auto& w : ws.witnesses) {
    if (std::includes(b.begin(), b.end(), w.enabled.begin(), w.enabled.end())) out.insert(w.trace);
  }
  return out;
}

std::string show(const std::set<Trace>& ts) {
  std::string s = "{";
  for (const auto& t : ts) s += (s.size() > 1 ? "," : "") + exec::format_trace(t);
  return s + "}";
}

Result no_congruence() {
  const Net n = corpus::deadlock(), n2 = corpus::livelock();
  const fail::FailureWitness eps{fin({}), {}};
  const auto wn = fail::failures(n, Criterion::progress), wn2 = fail::failures(n2, Criterion::progress);
  bool ok = wn.witnesses == std::vector{eps} && wn2.witnesses == std::vector{eps};
  const Net t = corpus::success_now();
  const auto r = fail::leq(parallel(t, n, {}), parallel(t, n2, {}), Criterion::progress, LabelSet{V("a")});
  ok = ok && r.verdict == fail::LeqVerdict::fails && r.trace == fin({});
  return {ok, "F^Pr both {(ε,{})}; composed leq " + fail::to_string(r.verdict) +
                  (r.trace ? " at " + exec::format_trace(*r.trace) : "")};
}

Result branching() {
  const Net n = corpus::branching_n(), n2 = corpus::branching_n2();
  bool ok = true;
  for (bool a_blocked : {false, true}) {
    const LabelSet b = a_blocked ? LabelSet{V("a")} : LabelSet{};
    std::set<Trace> expect{fin({V("a"), V("b")}), fin({V("a"), V("c")})};
    if (a_blocked) expect.insert(fin({}));
    ok = ok && traces_within(fail::failures(n, Criterion::justness), b) == expect &&
         traces_within(fail::failures(n2, Criterion::justness), b) == expect;
  }
  const ActionSet act{"a", "b", "c"};
  const Net tn = parallel(corpus::branching_test(), n, act), tn2 = parallel(corpus::branching_test(), n2, act);
  const bool sep = traces_within(fail::failures(tn2, Criterion::justness), {}).count(fin({V("a")})) &&
                   !traces_within(fail::failures(tn, Criterion::justness), {}).count(fin({V("a")}));
  return {ok && sep, std::string("sets ") + (ok ? "match" : "differ") + "; a separates the compositions: " +
                         (sep ? "yes" : "no")};
}

Result abstraction() {
  const Net n = corpus::abstraction_n(), n2 = corpus::abstraction_n2();
  const LabelSet b{V("b")};
  const std::set<Trace> expect{fin({}), fin({V("b"), V("c")})};
  const auto fn = traces_within(fail::failures(n, Criterion::justness), b);
  const auto fn2 = traces_within(fail::failures(n2, Criterion::justness), b);
  const bool ok = fn == expect && fn2 == expect;
  const bool sep = traces_within(fail::failures(abstract(n2, {"b"}), Criterion::justness), b).count(fin({})) &&
                   !traces_within(fail::failures(abstract(n, {"b"}), Criterion::justness), b).count(fin({}));
  return {ok && sep, "F^J_B = " + show(fn) + "; ε separates after hiding b: " + (sep ? "yes" : "no")};
}

Result spectrum() {
  auto equiv = [](const Net& a, const Net& b) {
    return fail::leq(a, b, Criterion::justness).verdict == fail::LeqVerdict::holds_within_bounds &&
           fail::leq(b, a, Criterion::justness).verdict == fail::LeqVerdict::holds_within_bounds;
  };
  const bool tau_a = equiv(corpus::tau_a_then_stop(), corpus::a_then_stop());
  const bool dl = equiv(corpus::deadlock(), corpus::livelock());
  const Net t = corpus::tau_then_success();
  const bool must_split = testing::must(t, corpus::deadlock(), Criterion::progress).pass() &&
                          testing::must(t, corpus::livelock(), Criterion::progress).fail();
  return {tau_a && dl && must_split, std::string("tau.a.0 =J a.0: ") + (tau_a ? "yes" : "no") +
                                         "; deadlock =J livelock: " + (dl ? "yes" : "no") +
                                         "; tau.w separates under must-pr: " + (must_split ? "yes" : "no")};
}

Result universal() {
  const Net t = testing::universal_test(fin({V("a"), V("b")}), ActionSet{"c"});
  const Net yes = lang::compile_source("N = a.b.0 + a.c.0; N");
  const Net no = lang::compile_source("N = a.b.c.0; N");
  const bool ok = testing::must(t, yes, Criterion::justness).fail() && testing::must(t, no, Criterion::justness).pass();
  return {ok, "T(ab,{c}) fails on a.b.0+a.c.0 and passes a.b.c.0: " + std::string(ok ? "yes" : "no")};
}

Result scheduler() {
  const Net n = corpus::justness_a();
  const auto ext = feas::extend_to_just(n, exec::FinPath{n.initial_marking(), {}}, {});
  const bool ok = std::string(ext.kind()) != "ongoing" && exec::is_b_just(n, ext.path(), {});
  return {ok, std::string("extension ") + ext.kind() + ", just: " + (ok ? "yes" : "no")};
}

Result timed_aw() {
  const Net t = corpus::timed_test_aw();
  const auto pass = timed::must_timed(corpus::a_then_stop(), t, timed::Time(2));
  const auto fail = timed::must_timed(corpus::tau_a_then_stop(), t, timed::Time(2));
  const bool ok = pass.outcome == testing::Outcome::pass && fail.outcome == testing::Outcome::fail;
  auto dur = [](const timed::TimedVerdict& v) {
    return v.max_duration ? timed::format_time(*v.max_duration) : std::string("infinity");
  };
  return {ok, "a.0: " + testing::to_string(pass.outcome) + " (max " + dur(pass) + "), tau.a.0: " +
                  testing::to_string(fail.outcome) + " (max " + dur(fail) + ")"};
}

Result traffic() {
  const Net n = lang::compile_source(corpus::traffic_source());
  int drives = 0, read_on_green = 0;
  for (const auto& t : n.transitions()) {
    if (t.label != V("drive")) continue;
    ++drives;
    // The green place is the one enabling the drive signal.
    for (auto p : t.read.elements()) read_on_green += n.place_name(p).rfind("(drive>", 0) == 0;
  }
  const bool ok = drives == 2 && read_on_green == 2;
  return {ok, std::to_string(drives) + " drive transitions, " + std::to_string(read_on_green) +
                  " reading the green place"};
}

}  // namespace

std::vector<Check> run_corpus_checks() {
  const std::vector<std::pair<std::string, std::function<Result()>>> all{
      {"no-congruence-progress", no_congruence},
      {"branching-justness", branching},
      {"abstraction-justness", abstraction},
      {"spectrum", spectrum},
      {"universal-test", universal},
      {"feasible-scheduler", scheduler},
      {"timed-a.w", timed_aw},
      {"traffic-light", traffic},
  };
  std::vector<Check> out;
  for (const auto& [name, run] : all) {
    const auto start = std::chrono::steady_clock::now();
    Check c{name, false, "", 0};
    try {
      std::tie(c.passed, c.detail) = run();
    } catch (const std::exception& e) {
      c.detail = std::string("error: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(c));
  }
  return out;
}

std::string format_table(const std::vector<Check>& checks) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.passed;
    os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(26) << c.name << c.detail << "\n";
  }
  os << passed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace justnets::regress
