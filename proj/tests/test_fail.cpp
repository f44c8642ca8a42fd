#include <random>

#include "catch_amalgamated.hpp"
#include "justnets/corpus.hpp"
#include "justnets/fail.hpp"
#include "justnets/net_io.hpp"
#include "oracles.hpp"

using namespace justnets;
using namespace justnets::fail;

namespace {

Label V(const char* a) { return Label::visible(a); }
Trace fin(Word w) { return Trace{std::move(w), {}}; }

// Traces of a witness set that are B-complete: some label set inside b.
std::set<Trace> traces_within(const WitnessSet& ws, const LabelSet& b) {
  std::set<Trace> out;
  for (const auto& w : ws.witnesses) {
    if (std::includes(b.begin(), b.end(), w.enabled.begin(), w.enabled.end())) out.insert(w.trace);
  }
  return out;
}

Net random_net(std::mt19937& rng, int max_places = 3) {
  std::uniform_int_distribution<int> np(1, max_places), nt(1, 4), coin(0, 1), lab(0, 3);
  NetBuilder b("rnd");
  int places = np(rng);
  std::uniform_int_distribution<int> pick(0, places - 1);
  for (int i = 0; i < places; ++i) b.add_place("p" + std::to_string(i), coin(rng));
  b.set_tokens(PlaceId{0}, 1);
  int trans = nt(rng);
  for (int i = 0; i < trans; ++i) {
    int l = lab(rng);
    auto t = b.add_transition("t" + std::to_string(i), l == 3 ? Label::tau() : Label::visible(std::string(1, 'a' + l)));
    b.add_arc(PlaceId{static_cast<std::uint32_t>(pick(rng))}, t);
    if (coin(rng)) b.add_arc(t, PlaceId{static_cast<std::uint32_t>(pick(rng))});
    if (coin(rng) && coin(rng)) b.add_read(PlaceId{static_cast<std::uint32_t>(pick(rng))}, t);
  }
  return std::move(b).build();
}

const Bounds small{4, 3, 4, 2000};

}  // namespace

TEST_CASE("deadlock and livelock have the same progress failures") {
  for (const Net& n : {corpus::deadlock(), corpus::livelock()}) {
    auto ws = failures(n, Criterion::progress);
    REQUIRE(ws.witnesses.size() == 1);
    CHECK(ws.witnesses[0] == FailureWitness{fin({}), {}});
  }
  CHECK(leq(corpus::deadlock(), corpus::livelock(), Criterion::progress).verdict == LeqVerdict::holds_within_bounds);
  CHECK(leq(corpus::livelock(), corpus::deadlock(), Criterion::progress).verdict == LeqVerdict::holds_within_bounds);
}

TEST_CASE("progress failures are not preserved by composing with a success test") {
  Net t = corpus::success_now();
  Net left = parallel(t, corpus::deadlock(), {}), right = parallel(t, corpus::livelock(), {});
  for (const LabelSet& b : {LabelSet{}, LabelSet{V("a")}}) {
    auto r = leq(left, right, Criterion::progress, b);
    REQUIRE(r.verdict == LeqVerdict::fails);
    CHECK(*r.trace == fin({}));
    CHECK(r.refusal == LabelSet{Label::success()});
  }
  auto blocked = leq(left, right, Criterion::progress, LabelSet{Label::success()});
  CHECK(blocked.verdict == LeqVerdict::holds_within_bounds);
}

TEST_CASE("branching example under justness") {
  Net n = corpus::branching_n(), n2 = corpus::branching_n2();
  auto wn = failures(n, Criterion::justness);
  CHECK(wn.witnesses == std::vector<FailureWitness>{{fin({}), {V("a")}},
                                                    {fin({V("a")}), {V("b"), V("c")}},
                                                    {fin({V("a"), V("b")}), {}},
                                                    {fin({V("a"), V("c")}), {}}});
  for (bool a_blocked : {false, true}) {
    LabelSet b = a_blocked ? LabelSet{V("a")} : LabelSet{};
    std::set<Trace> expect{fin({V("a"), V("b")}), fin({V("a"), V("c")})};
    if (a_blocked) expect.insert(fin({}));
    CHECK(traces_within(wn, b) == expect);
    CHECK(traces_within(failures(n2, Criterion::justness), b) == expect);
    CHECK(leq(n, n2, Criterion::justness, b).verdict == LeqVerdict::holds_within_bounds);
    CHECK(leq(n2, n, Criterion::justness, b).verdict == LeqVerdict::holds_within_bounds);
  }
  const ActionSet act{"a", "b", "c"};
  Net tn = parallel(corpus::branching_test(), n, act), tn2 = parallel(corpus::branching_test(), n2, act);
  CHECK(traces_within(failures(tn2, Criterion::justness), {}).count(fin({V("a")})));
  CHECK_FALSE(traces_within(failures(tn, Criterion::justness), {}).count(fin({V("a")})));
  auto r = leq(tn, tn2, Criterion::justness, LabelSet{});
  REQUIRE(r.verdict == LeqVerdict::fails);
  CHECK(*r.trace == fin({V("a")}));
  // Without b the nets differ already: (a, {b}) is a failure of n2 only.
  CHECK(leq(n, n2, Criterion::justness).verdict == LeqVerdict::fails);
}

TEST_CASE("abstraction example under justness") {
  Net n = corpus::abstraction_n(), n2 = corpus::abstraction_n2();
  const LabelSet b{V("b")};
  const std::set<Trace> expect{fin({}), fin({V("b"), V("c")})};
  CHECK(traces_within(failures(n, Criterion::justness), b) == expect);
  CHECK(traces_within(failures(n2, Criterion::justness), b) == expect);
  Net hn = abstract(n, {"b"}), hn2 = abstract(n2, {"b"});
  CHECK(traces_within(failures(hn2, Criterion::justness), b).count(fin({})));
  CHECK_FALSE(traces_within(failures(hn, Criterion::justness), b).count(fin({})));
}

TEST_CASE("spectrum identifications") {
  CHECK(leq(corpus::a_then_stop(), corpus::tau_a_then_stop(), Criterion::justness).verdict ==
        LeqVerdict::holds_within_bounds);
  CHECK(leq(corpus::tau_a_then_stop(), corpus::a_then_stop(), Criterion::justness).verdict ==
        LeqVerdict::holds_within_bounds);
  CHECK(leq(corpus::deadlock(), corpus::livelock(), Criterion::justness).verdict == LeqVerdict::holds_within_bounds);
  CHECK(leq(corpus::livelock(), corpus::deadlock(), Criterion::justness).verdict == LeqVerdict::holds_within_bounds);
}

TEST_CASE("infinite traces and divergence") {
  Net loops = corpus::loops_apart();
  auto ws = failures(loops, Criterion::justness);
  // Diverging on the tau loop leaves a enabled forever.
  CHECK(std::count(ws.witnesses.begin(), ws.witnesses.end(), FailureWitness{fin({}), {V("a")}}) == 1);
  CHECK(std::count(ws.witnesses.begin(), ws.witnesses.end(), FailureWitness{Trace{{}, {V("a")}}, {}}) == 1);
  auto together = failures(corpus::loops_together(), Criterion::justness);
  CHECK(std::count(together.witnesses.begin(), together.witnesses.end(), FailureWitness{fin({}), {}}) == 1);
  CHECK(*has_failure(loops, Criterion::justness, fin({}), {V("a")}) == false);
  CHECK(*has_failure(loops, Criterion::progress, fin({}), {V("a")}) == true);
  CHECK(*has_failure(loops, Criterion::justness, Trace{{V("a")}, {V("a")}}, {V("a")}) == true);
}

TEST_CASE("merging traces") {
  CHECK(merge_traces({V("a")}, {V("b")}, {}) == std::set<Word>{{V("a"), V("b")}, {V("b"), V("a")}});
  CHECK(merge_traces({V("a")}, {V("a")}, {"a"}) == std::set<Word>{{V("a")}});
  CHECK(merge_traces({V("a"), V("b")}, {V("b")}, {"b"}) == std::set<Word>{{V("a"), V("b")}});
  CHECK(merge_traces({V("a")}, {}, {"a"}).empty());
}

TEST_CASE("parallel decomposition of justness failures") {
  Net zero = corpus::deadlock();
  CHECK(claim6_check(zero, zero, {"a"}).equal);
  auto br = claim6_check(corpus::branching_test(), corpus::branching_n(), {"a", "b", "c"}, {2, 2, 2, 1000});
  CHECK(br.equal);
  std::mt19937 rng(3);
  for (int i = 0; i < 60; ++i) {
    Net a = random_net(rng), b = random_net(rng);
    auto rep = claim6_check(a, b, {"a"}, {3, 3, 3, 2000});
    CAPTURE(write_pnet(a), write_pnet(b));
    CHECK(rep.equal);
  }
}

TEST_CASE("failure membership matches explicit just paths") {
  std::mt19937 rng(11);
  const std::vector<LabelSet> xs{{}, {V("a")}, {V("b")}, {V("a"), V("c")}, {V("a"), V("b"), V("c")}};
  for (int i = 0; i < 80; ++i) {
    Net n = random_net(rng);
    std::map<std::pair<Trace, LabelSet>, bool> found;
    for (auto c : {Criterion::justness, Criterion::progress}) {
      found.clear();
      oracle::for_each_path(n, 4, 4, [&](const exec::Path& p) {
        for (const auto& x : xs) {
          LabelSet b;
          for (const char* a : {"a", "b", "c"}) {
            if (!x.count(V(a))) b.insert(V(a));
          }
          bool complete = c == Criterion::justness ? oracle::literal_just(n, p, b, Mode::individual)
                                                   : exec::is_b_progressing(n, p, b);
          if (complete) found[{exec::canonical(exec::trace(n, p)), x}] = true;
        }
      });
      for (const auto& [key, yes] : found) {
        CAPTURE(write_pnet(n), exec::format_trace(key.first), format_labels(key.second));
        CHECK(*has_failure(n, c, key.first, key.second) == yes);
      }
      // Conversely every finite witness of length <= 2 is realised by an explicit path.
      for (const auto& w : failures(n, c, {2, 2, 3, 1000}).witnesses) {
        if (w.trace.infinite()) continue;
        for (const auto& x : xs) {
          if (std::any_of(x.begin(), x.end(), [&](const Label& l) { return w.enabled.count(l); })) continue;
          CAPTURE(write_pnet(n), format_witness(w), format_labels(x));
          CHECK(found.count({w.trace, x}));
        }
      }
    }
  }
}

TEST_CASE("preorder laws on the corpus") {
  auto nets = corpus::example_nets();
  for (const auto& [na, a] : nets) {
    for (const auto& [nb, b] : nets) {
      CAPTURE(na, nb);
      const auto full = leq(a, b, Criterion::justness, std::nullopt, small);
      LabelSet act = observable_alphabet(a);
      for (const auto& l : observable_alphabet(b)) act.insert(l);
      if (full.verdict == LeqVerdict::holds_within_bounds) {
        for (const auto& l : act) {
          CHECK(leq(a, b, Criterion::justness, LabelSet{l}, small).verdict == LeqVerdict::holds_within_bounds);
        }
        CHECK(leq(a, b, Criterion::justness, LabelSet{}, small).verdict == LeqVerdict::holds_within_bounds);
        CHECK(leq(abstract(a, {"a"}), abstract(b, {"a"}), Criterion::justness, std::nullopt, small).verdict ==
              LeqVerdict::holds_within_bounds);
        CHECK(leq(relabel(a, {{"b", "c"}}), relabel(b, {{"b", "c"}}), Criterion::justness, std::nullopt, small)
                  .verdict == LeqVerdict::holds_within_bounds);
      }
      CHECK(leq(a, b, Criterion::justness, act, small).verdict ==
            leq(a, b, Criterion::progress, act, small).verdict);
    }
  }
}

TEST_CASE("leq report") {
  auto r = leq(parallel(corpus::success_now(), corpus::deadlock(), {}),
               parallel(corpus::success_now(), corpus::livelock(), {}), Criterion::progress, LabelSet{});
  const std::string j = to_json(r);
  CHECK(j.find("\"verdict\": \"fails\"") != std::string::npos);
  CHECK(j.find("\"refusal\"") != std::string::npos);
  CHECK(j.find("\"witness_counts\"") != std::string::npos);
}
