// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "justnets/corpus.hpp"
#include "justnets/fail.hpp"
#include "justnets/feas.hpp"
#include "justnets/lang.hpp"
#include "justnets/net_io.hpp"
#include "justnets/testing.hpp"
#include "justnets/timed.hpp"
#include "oracles.hpp"
#include "term_oracle.hpp"

using namespace justnets;
using exec::Criterion;
using exec::Trace;
using testing::Outcome;

namespace {

Label V(const std::string& a) { return Label::visible(a); }
Trace fin(std::vector<Label> w) { return Trace{std::move(w), {}}; }

std::set<Trace> traces_within(const fail::WitnessSet& ws, const LabelSet& b) {
  std::set<Trace> out;
  for (const auto& w : ws.witnesses) {
    if (std::includes(b.begin(), b.end(), w.enabled.begin(), w.enabled.end())) out.insert(w.trace);
  }
  return out;
}

LabelSet labels_of(const ActionSet& as) {
  LabelSet out;
  for (const auto& a : as) out.insert(Label::visible(a));
  return out;
}

std::string key_of(const Trace& s, const ActionSet& x) {
  return exec::format_trace(s) + "|" + fail::format_labels(labels_of(x));
}

// Refusal set represented by a witness over the alphabet act.
ActionSet refusal_of(const fail::FailureWitness& w, const ActionSet& act) {
  ActionSet x;
  for (const auto& a : act) {
    if (!w.enabled.count(Label::visible(a))) x.insert(a);
  }
  return x;
}

struct Outcome_ {
  bool ok = true;
  std::string detail;
};

// ---- criteria ----

Outcome_ ac1() {
  const Net n = corpus::deadlock(), n2 = corpus::livelock();
  const std::vector<fail::FailureWitness> eps{{fin({}), {}}};
  Outcome_ r;
  r.ok = fail::failures(n, Criterion::progress).witnesses == eps &&
         fail::failures(n2, Criterion::progress).witnesses == eps;
  const Net t = corpus::success_now();
  const Net tn = parallel(t, n, {}), tn2 = parallel(t, n2, {});
  for (const LabelSet& b : {LabelSet{}, LabelSet{V("a")}}) {
    const auto l = fail::leq(tn, tn2, Criterion::progress, b);
    r.ok = r.ok && l.verdict == fail::LeqVerdict::fails && l.trace == fin({});
  }
  r.detail = "F^Pr(N) = F^Pr(N') = {(ε,∅)}; T||N not below T||N' at ε for w ∉ B";
  return r;
}

Outcome_ ac2() {
  const Net n = corpus::branching_n(), n2 = corpus::branching_n2();
  Outcome_ r;
  const auto wn = fail::failures(n, Criterion::justness), wn2 = fail::failures(n2, Criterion::justness);
  for (const LabelSet& b : {LabelSet{}, LabelSet{V("a")}, LabelSet{V("a"), V("d")}}) {
    std::set<Trace> expect{fin({V("a"), V("b")}), fin({V("a"), V("c")})};
    if (b.count(V("a"))) expect.insert(fin({}));
    r.ok = r.ok && traces_within(wn, b) == expect && traces_within(wn2, b) == expect;
  }
  const ActionSet act{"a", "b", "c"};
  const auto ft = fail::failures(parallel(corpus::branching_test(), n, act), Criterion::justness);
  const auto ft2 = fail::failures(parallel(corpus::branching_test(), n2, act), Criterion::justness);
  r.ok = r.ok && traces_within(ft2, {}).count(fin({V("a")})) && !traces_within(ft, {}).count(fin({V("a")}));
  r.detail = "F^J_B = {ε iff a∈B, ab, ac} for both (b,c ∉ B); a separates T||N' from T||N";
  return r;
}

Outcome_ ac3() {
  const Net n = corpus::abstraction_n(), n2 = corpus::abstraction_n2();
  Outcome_ r;
  for (const LabelSet& b : {LabelSet{V("b")}, LabelSet{V("a"), V("b")}}) {
    const std::set<Trace> expect{fin({}), fin({V("b"), V("c")})};
    r.ok = r.ok && traces_within(fail::failures(n, Criterion::justness), b) == expect &&
           traces_within(fail::failures(n2, Criterion::justness), b) == expect &&
           traces_within(fail::failures(abstract(n2, {"b"}), Criterion::justness), b).count(fin({})) &&
           !traces_within(fail::failures(abstract(n, {"b"}), Criterion::justness), b).count(fin({}));
  }
  r.detail = "F^J_B = {ε, bc} for b∈B, c∉B; ε separates after hiding b";
  return r;
}

Outcome_ ac4() {
  auto equiv = [](const Net& a, const Net& b) {
    return fail::leq(a, b, Criterion::justness).verdict == fail::LeqVerdict::holds_within_bounds &&
           fail::leq(b, a, Criterion::justness).verdict == fail::LeqVerdict::holds_within_bounds;
  };
  Outcome_ r;
  r.ok = equiv(corpus::tau_a_then_stop(), corpus::a_then_stop()) && equiv(corpus::deadlock(), corpus::livelock());
  const Net t = corpus::tau_then_success();
  r.ok = r.ok && testing::must(t, corpus::deadlock(), Criterion::progress).pass() &&
         testing::must(t, corpus::livelock(), Criterion::progress).fail();
  r.detail = "τ.a.0 ≡J a.0; deadlock ≡J livelock; test τ.w separates them under progress";
  return r;
}

// Preorder agreement: bounded failure inclusion versus must verdicts on a test suite.
Outcome_ ac5() {
  std::mt19937 rng(2024);
  std::vector<Net> nets;
  for (auto& nn : corpus::example_nets()) nets.push_back(nn.net);
  while (nets.size() < 26) nets.push_back(gen::random_net(rng, 4, 4));
  std::vector<Net> random_tests;
  for (int i = 0; i < 100; ++i) random_tests.push_back(gen::random_test(rng, 4, 4));

  std::vector<fail::WitnessSet> witnesses;
  for (const auto& n : nets) witnesses.push_back(fail::failures(n, Criterion::justness));

  std::map<std::string, Net> universal;
  std::map<std::pair<std::string, std::size_t>, bool> passes;
  auto must_pass = [&](const std::string& key, const Net& t, std::size_t net) {
    auto it = passes.find({key, net});
    if (it != passes.end()) return it->second;
    const auto v = testing::must(t, nets[net], Criterion::justness);
    if (v.outcome == Outcome::inconclusive) throw std::runtime_error("inconclusive must verdict");
    return passes[{key, net}] = v.pass();
  };

  std::size_t pairs = 0, holds = 0, discrepancies = 0, tests_run = 0;
  std::string first;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    for (std::size_t j = 0; j < nets.size(); ++j) {
      if (i == j) continue;
      ++pairs;
      const auto l = fail::leq(nets[i], nets[j], Criterion::justness);
      if (l.verdict == fail::LeqVerdict::inconclusive) throw std::runtime_error("inconclusive leq");
      std::vector<std::pair<std::string, const Net*>> suite;
      ActionSet act = nets[i].alphabet();
      act.merge(nets[j].alphabet());
      for (std::size_t k : {i, j}) {
        for (const auto& w : witnesses[k].witnesses) {
          const ActionSet x = refusal_of(w, act);
          const std::string key = key_of(w.trace, x);
          auto it = universal.find(key);
          if (it == universal.end()) it = universal.emplace(key, testing::universal_test(w.trace, x)).first;
          suite.emplace_back(key, &it->second);
        }
      }
      for (std::size_t k = 0; k < random_tests.size(); ++k) suite.emplace_back("random" + std::to_string(k), &random_tests[k]);
      bool separated = false;
      for (const auto& [key, t] : suite) {
        ++tests_run;
        if (must_pass(key, *t, i) && !must_pass(key, *t, j)) separated = true;
      }
      const bool below = l.verdict == fail::LeqVerdict::holds_within_bounds;
      holds += below;
      if (below == separated) {
        ++discrepancies;
        if (first.empty()) first = " first: nets " + std::to_string(i) + "," + std::to_string(j);
      }
    }
  }
  Outcome_ r;
  r.ok = discrepancies == 0;
  r.detail = std::to_string(nets.size()) + " nets, " + std::to_string(pairs) + " ordered pairs (" +
             std::to_string(holds) + " related), " + std::to_string(universal.size()) + " universal + 100 random tests, " +
             std::to_string(tests_run) + " comparisons, " + std::to_string(discrepancies) + " discrepancies" + first;
  return r;
}

// Universal tests against explicit path search.
Outcome_ ac6() {
  std::size_t checked = 0, failures = 0;
  std::string first;
  for (const auto& [name, k] : corpus::example_nets()) {
    const ActionSet act = k.alphabet();
    const std::vector<std::string> alpha(act.begin(), act.end());
    // Per explicit path without a path-enabled tau: its trace and path-enabled labels.
    std::map<Trace, std::set<LabelSet>> enabled_sets;
    oracle::for_each_path(k, 6, 4, [&](const exec::Path& p) {
      LabelSet c;
      for (auto t : k.transition_ids()) {
        const bool pe = std::holds_alternative<exec::FinPath>(p)
                            ? enabled(k, std::get<exec::FinPath>(p).final_marking(), t)
                            : oracle::literal_path_enables(k, std::get<exec::Lasso>(p), t, exec::Mode::individual);
        if (pe) c.insert(k.transition(t).label);
      }
      if (!c.count(Label::tau())) enabled_sets[exec::trace(k, p)].insert(c);
    });

    std::set<Trace> sigmas;
    std::function<void(std::vector<Label>&)> words = [&](std::vector<Label>& w) {
      sigmas.insert(fin(w));
      // Infinite traces u v^omega with |u v| <= 3.
      for (std::size_t cut = 0; cut < w.size(); ++cut) {
        sigmas.insert(exec::canonical(Trace{{w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cut)},
                                            {w.begin() + static_cast<std::ptrdiff_t>(cut), w.end()}}));
      }
      if (w.size() == 3) return;
      for (const auto& a : alpha) {
        w.push_back(V(a));
        words(w);
        w.pop_back();
      }
    };
    std::vector<Label> w;
    words(w);

    std::vector<ActionSet> xs{{}};
    for (std::size_t a = 0; a < alpha.size(); ++a) {
      xs.push_back({alpha[a]});
      for (std::size_t b = a + 1; b < alpha.size(); ++b) xs.push_back({alpha[a], alpha[b]});
    }
    for (const auto& s : sigmas) {
      for (const auto& x : xs) {
        // Member iff some path with trace s leaves only labels outside x path-enabled.
        bool member = false;
        if (auto it = enabled_sets.find(s); it != enabled_sets.end()) {
          for (const auto& c : it->second) {
            member = member || std::none_of(c.begin(), c.end(), [&](const Label& l) { return x.count(l.action); });
          }
        }
        const auto v = testing::must(testing::universal_test(s, x), k, Criterion::justness);
        ++checked;
        if (v.outcome == Outcome::inconclusive || v.fail() != member) {
          ++failures;
          if (first.empty()) first = " first: " + name + " " + key_of(s, x) + (member ? " member" : " non-member");
        }
      }
    }
  }
  return {failures == 0, std::to_string(checked) + " (net, σ, X) cases over the corpus, " + std::to_string(failures) +
                             " failures" + first};
}

Outcome_ ac7() {
  std::mt19937 rng(77);
  std::size_t discrepancies = 0, compared = 0;
  for (int i = 0; i < 50; ++i) {
    const Net a = gen::random_net(rng), b = gen::random_net(rng);
    ActionSet sync;
    for (const char* x : {"a", "b", "c"}) {
      if (rng() % 2) sync.insert(x);
    }
    const auto rep = fail::claim6_check(a, b, sync, {3, 3, 3, 5000});
    compared += rep.compared;
    if (!rep.equal || rep.truncated) ++discrepancies;
  }
  return {discrepancies == 0, "50 random pairs, " + std::to_string(compared) + " witnesses compared, " +
                                  std::to_string(discrepancies) + " discrepancies"};
}

Outcome_ ac8() {
  std::mt19937 rng(88);
  std::size_t checked = 0, failures = 0, ongoing = 0;
  for (int i = 0; i < 200; ++i) {
    const Net n = gen::random_net(rng, 4, 5);
    exec::FinPath prefix{n.initial_marking(), {}};
    const int len = static_cast<int>(rng() % 4);
    for (int k = 0; k < len; ++k) {
      auto en = enabled_transitions(n, prefix.final_marking());
      if (en.empty()) break;
      const auto t = en[rng() % en.size()];
      prefix.steps.push_back({t, fire(n, prefix.final_marking(), t)});
    }
    LabelSet b;
    for (const char* a : {"a", "b", "c"}) {
      if (rng() % 3 == 0) b.insert(V(a));
    }
    const auto ext = feas::extend_to_just(n, prefix, b);
    if (std::holds_alternative<feas::Ongoing>(ext.result)) {
      ++ongoing;
      continue;
    }
    ++checked;
    if (!exec::is_b_just(n, ext.path(), b)) ++failures;
  }
  return {failures == 0, "200 triples: " + std::to_string(checked) + " finite/periodic checked, " +
                             std::to_string(ongoing) + " out of fuel, " + std::to_string(failures) + " failures"};
}

Outcome_ ac9() {
  using timed::Time;
  Outcome_ r;
  const Net aw = corpus::timed_test_aw();
  const auto pass = timed::must_timed(corpus::a_then_stop(), aw, Time(2));
  const auto fail = timed::must_timed(corpus::tau_a_then_stop(), aw, Time(2));
  const bool example = pass.outcome == Outcome::pass && fail.outcome == Outcome::fail;

  // Slowest timing of a finite path lasts at most one unit per transition.
  std::mt19937 rng(99);
  std::size_t bound_violations = 0;
  for (int i = 0; i < 500; ++i) {
    const Net n = gen::random_safe_net(rng, 4, 5);
    exec::FinPath p{n.initial_marking(), {}};
    const int len = static_cast<int>(rng() % 10);
    for (int k = 0; k < len; ++k) {
      auto en = enabled_transitions(n, p.final_marking());
      if (en.empty()) break;
      const auto t = en[rng() % en.size()];
      p.steps.push_back({t, fire(n, p.final_marking(), t)});
    }
    const auto tp = timed::slowest_star(n, p);
    timed::validate(n, tp);
    if (*timed::duration(tp) > Time(static_cast<std::int64_t>(p.steps.size()))) ++bound_violations;
  }

  // Must-eventually against must under justness on the safe corpus.
  std::vector<Net> safe;
  for (auto& nn : corpus::example_nets()) {
    if (!nn.net.has_empty_preset() && exec::check_safe(nn.net, 10000) == exec::Safety::safe) safe.push_back(nn.net);
  }
  std::vector<Net> tests{aw, corpus::success_now(), corpus::tau_then_success()};
  std::set<std::string> seen;
  for (const auto& n : safe) {
    for (const auto& w : fail::failures(n, Criterion::justness).witnesses) {
      const ActionSet x = refusal_of(w, n.alphabet());
      if (seen.insert(key_of(w.trace, x)).second) {
        tests.push_back(testing::universal_test(w.trace, x));
      }
    }
  }
  for (int i = 0; i < 40; ++i) tests.push_back(gen::guard_success(gen::random_safe_test(rng, 4, 4)));
  std::size_t pairs = 0, disagreements = 0;
  for (const auto& n : safe) {
    for (const auto& t : tests) {
      const auto e = timed::must_eventually(n, t);
      ++pairs;
      if (e.outcome == Outcome::inconclusive || e.outcome != e.must_j || e.outcome != e.just_paths) ++disagreements;
    }
  }
  r.ok = example && bound_violations == 0 && disagreements == 0;
  r.detail = std::string("a.0 ") + testing::to_string(pass.outcome) + " / τ.a.0 " + testing::to_string(fail.outcome) +
             " at D=2; " + std::to_string(bound_violations) + "/500 bound violations; " + std::to_string(safe.size()) +
             " safe nets × " + std::to_string(tests.size()) + " tests, " + std::to_string(disagreements) +
             " disagreements in " + std::to_string(pairs);
  return r;
}

Outcome_ ac10() {
  const auto prog = lang::parse(corpus::traffic_source());
  const Net n = lang::compile(prog);
  bool reads = true;
  int drives = 0;
  for (const auto& t : n.transitions()) {
    if (t.label != V("drive")) continue;
    ++drives;
    const auto rd = t.read.elements();
    reads = reads && rd.size() == 1 && n.place_name(rd[0]).rfind("(drive>", 0) == 0;
  }
  bool traces = true;
  for (std::size_t len = 0; len <= 8; ++len) {
    traces = traces && oracle::net_traces(n, len) == oracle::term_traces(prog.main, prog.defs, len);
  }
  return {drives == 2 && reads && traces,
          std::to_string(drives) + " drive transitions reading the green place; traces up to length 8 " +
              (traces ? "match" : "differ")};
}

}  // namespace

int main() {
  struct Criterion_ {
    const char* id;
    std::function<Outcome_()> run;
    double limit;  // seconds; 0 = none
  };
  const std::vector<Criterion_> all{
      {"AC1", ac1, 1},  {"AC2", ac2, 1},  {"AC3", ac3, 1},    {"AC4", ac4, 0},  {"AC5", ac5, 300},
      {"AC6", ac6, 0},  {"AC7", ac7, 300}, {"AC8", ac8, 0},   {"AC9", ac9, 0},  {"AC10", ac10, 0},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome_ o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs >= c.limit) {
      o.ok = false;
      o.detail += "; over the time limit";
    }
    failed += !o.ok;
    std::printf("%-4s %s  %s (%.2f s)\n", c.id, o.ok ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
