#include "justnets/testing.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <utility>
#include <vector>

namespace justnets::testing {

using exec::MarkingGraph;

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Separation::Status s) {
  switch (s) {
    case Separation::Status::separated: return "separated";
    case Separation::Status::not_separated: return "not separated";
    case Separation::Status::leq_holds: return "no separation (leq holds)";
    case Separation::Status::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

bool success_marking(const Net& n, const Marking& m) {
  for (auto t : n.transition_ids()) {
    if (n.transition(t).label.is_success() && enabled(n, m, t)) return true;
  }
  return false;
}

// Edge indices of a shortest route from `from` to the first node satisfying `goal`,
// moving only through nodes accepted by `inside`.
std::optional<std::vector<std::uint32_t>> route(const MarkingGraph& g, std::uint32_t from,
                                                const std::function<bool(std::uint32_t)>& goal,
                                                const std::function<bool(std::uint32_t)>& inside) {
  std::vector<std::int64_t> via(g.nodes.size(), -2);
  std::deque<std::uint32_t> todo{from};
  via[from] = -1;
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop_front();
    if (goal(v)) {
      std::vector<std::uint32_t> es;
      while (via[v] >= 0) {
        es.push_back(static_cast<std::uint32_t>(via[v]));
        v = g.edges[via[v]].from;
      }
      std::reverse(es.begin(), es.end());
      return es;
    }
    for (auto e : g.out[v]) {
      auto to = g.edges[e].to;
      if (via[to] != -2 || !inside(to)) continue;
      via[to] = e;
      todo.push_back(to);
    }
  }
  return std::nullopt;
}

std::vector<TransitionId> transitions_of(const MarkingGraph& g, const std::vector<std::uint32_t>& es) {
  std::vector<TransitionId> ts;
  for (auto e : es) ts.push_back(g.edges[e].transition);
  return ts;
}

// Closed walk from v that fires every edge in `edges` (all inside one component).
std::vector<std::uint32_t> covering_walk(const MarkingGraph& g, std::uint32_t v, const std::vector<std::uint32_t>& edges,
                                         const std::function<bool(std::uint32_t)>& inside) {
  std::vector<std::uint32_t> walk;
  std::uint32_t cur = v;
  for (auto e : edges) {
    const auto from = g.edges[e].from;
    auto hop = route(g, cur, [&](std::uint32_t u) { return u == from; }, inside);
    walk.insert(walk.end(), hop->begin(), hop->end());
    walk.push_back(e);
    cur = g.edges[e].to;
  }
  auto back = route(g, cur, [&](std::uint32_t u) { return u == v; }, inside);
  walk.insert(walk.end(), back->begin(), back->end());
  return walk;
}

}  // namespace

Net apply(const Net& test, const Net& n) {
  if (n.has_success()) throw InvalidNet("net under test contains a success transition");
  ActionSet act = test.alphabet();
  for (const auto& a : n.alphabet()) act.insert(a);
  return abstract(parallel(test, n, act), act);
}

Verdict may_composed(const Net& c, std::size_t max_nodes) {
  const MarkingGraph g = exec::reach(c, max_nodes);
  Verdict v;
  v.nodes = g.nodes.size();
  v.truncated = g.truncated;
  auto hit = route(g, 0, [&](std::uint32_t u) { return success_marking(c, g.nodes[u]); },
                   [](std::uint32_t) { return true; });
  if (hit) {
    v.outcome = Outcome::pass;
    v.witness = exec::make_path(c, c.initial_marking(), transitions_of(g, *hit));
  } else {
    v.outcome = g.truncated ? Outcome::inconclusive : Outcome::fail;
  }
  return v;
}

Verdict should_composed(const Net& c, std::size_t max_nodes) {
  const MarkingGraph g = exec::reach(c, max_nodes);
  Verdict v;
  v.nodes = g.nodes.size();
  v.truncated = g.truncated;
  std::vector<bool> success(g.nodes.size());
  for (std::uint32_t u = 0; u < g.nodes.size(); ++u) success[u] = success_marking(c, g.nodes[u]);
  if (success[0]) {
    v.outcome = Outcome::pass;
    return v;
  }
  if (g.truncated) return v;
  // Backward closure of the success markings.
  std::vector<std::vector<std::uint32_t>> in(g.nodes.size());
  for (const auto& e : g.edges) in[e.to].push_back(e.from);
  std::vector<bool> hope(success);
  std::deque<std::uint32_t> todo;
  for (std::uint32_t u = 0; u < g.nodes.size(); ++u) {
    if (success[u]) todo.push_back(u);
  }
  while (!todo.empty()) {
    auto u = todo.front();
    todo.pop_front();
    for (auto p : in[u]) {
      if (!hope[p]) {
        hope[p] = true;
        todo.push_back(p);
      }
    }
  }
  // A path that has not yet succeeded and can no longer succeed.
  auto stuck = route(g, 0, [&](std::uint32_t u) { return !hope[u]; }, [&](std::uint32_t u) { return !success[u]; });
  if (stuck) {
    v.outcome = Outcome::fail;
    v.witness = exec::make_path(c, c.initial_marking(), transitions_of(g, *stuck));
  } else {
    v.outcome = Outcome::pass;
  }
  return v;
}

Verdict must_composed(const Net& c, Criterion crit, Mode mode, std::size_t max_nodes) {
  const MarkingGraph g = exec::reach(c, max_nodes);
  Verdict v;
  v.nodes = g.nodes.size();
  v.truncated = g.truncated;
  std::vector<bool> success(g.nodes.size());
  for (std::uint32_t u = 0; u < g.nodes.size(); ++u) success[u] = success_marking(c, g.nodes[u]);
  if (success[0]) {
    v.outcome = Outcome::pass;
    return v;
  }
  auto unsuccessful = [&](std::uint32_t u) { return !success[u]; };

  // Markings reachable without passing a success marking.
  std::vector<bool> region(g.nodes.size(), false);
  region[0] = true;
  std::deque<std::uint32_t> todo{0};
  while (!todo.empty()) {
    auto u = todo.front();
    todo.pop_front();
    for (auto e : g.out[u]) {
      auto to = g.edges[e].to;
      if (!region[to] && !success[to]) {
        region[to] = true;
        todo.push_back(to);
      }
    }
  }
  auto in_region = [&](std::uint32_t u) { return static_cast<bool>(region[u]); };

  auto dead = route(g, 0, [&](std::uint32_t u) { return enabled_transitions(c, g.nodes[u]).empty(); }, unsuccessful);
  if (dead) {
    v.outcome = Outcome::fail;
    v.witness = exec::make_path(c, c.initial_marking(), transitions_of(g, *dead));
    return v;
  }

  std::vector<std::vector<std::uint32_t>> succ(g.nodes.size());
  for (const auto& e : g.edges) {
    if (region[e.from] && region[e.to]) succ[e.from].push_back(e.to);
  }
  std::uint32_t k = 0;
  const auto comp = exec::scc(g.nodes.size(), succ, &k);
  std::vector<std::vector<std::uint32_t>> internal(k);
  for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (region[e.from] && region[e.to] && comp[e.from] == comp[e.to]) internal[comp[e.from]].push_back(i);
  }
  for (std::uint32_t i = 0; i < k; ++i) {
    if (internal[i].empty()) continue;
    if (crit == Criterion::justness) {
      std::vector<std::pair<const Marking*, TransitionId>> tail;
      for (auto e : internal[i]) tail.emplace_back(&g.nodes[g.edges[e].from], g.edges[e].transition);
      if (!exec::tail_enabled(c, tail, mode).empty()) continue;
    }
    const std::uint32_t entry = g.edges[internal[i].front()].from;
    auto stem = route(g, 0, [&](std::uint32_t u) { return u == entry; }, in_region);
    auto in_comp = [&](std::uint32_t u) { return region[u] && comp[u] == i; };
    auto cycle = covering_walk(g, entry, internal[i], in_comp);
    v.outcome = Outcome::fail;
    v.witness = exec::make_lasso(c, exec::make_path(c, c.initial_marking(), transitions_of(g, *stem)),
                                 transitions_of(g, cycle));
    return v;
  }
  v.outcome = g.truncated ? Outcome::inconclusive : Outcome::pass;
  return v;
}

Verdict may(const Net& test, const Net& n, std::size_t max_nodes) { return may_composed(apply(test, n), max_nodes); }

Verdict should(const Net& test, const Net& n, std::size_t max_nodes) {
  return should_composed(apply(test, n), max_nodes);
}

Verdict must(const Net& test, const Net& n, Criterion c, Mode mode, std::size_t max_nodes) {
  return must_composed(apply(test, n), c, mode, max_nodes);
}

Net universal_test(const exec::Trace& sigma, const ActionSet& x, const Label& success) {
  for (const auto* w : {&sigma.stem, &sigma.loop}) {
    for (const auto& l : *w) {
      if (!l.is_visible()) throw InvalidNet("universal test traces contain visible actions only");
      if (l == success) throw InvalidNet("trace uses the success action");
    }
  }
  if (success.is_tau()) throw InvalidNet("success action cannot be tau");
  if (success.is_visible() && x.count(success.action)) throw InvalidNet("refusal set contains the success action");

  NetBuilder b("universal");
  const std::size_t stem = sigma.stem.size(), len = stem + sigma.loop.size();
  const bool finite = sigma.loop.empty();
  const std::size_t places = finite ? len + 1 : len;
  std::vector<PlaceId> chain;
  for (std::size_t i = 0; i < places; ++i) chain.push_back(b.add_place("c" + std::to_string(i), i == 0 ? 1 : 0));
  const PlaceId d = b.add_place("d", 1);
  const PlaceId e = b.add_place("e");
  const PlaceId f = b.add_place("f");
  for (std::size_t i = 0; i < len; ++i) {
    const Label& l = i < stem ? sigma.stem[i] : sigma.loop[i - stem];
    auto t = b.add_transition("a" + std::to_string(i + 1), l);
    b.add_arc(chain[i], t);
    b.add_arc(t, chain[i + 1 < places ? i + 1 : stem]);
  }
  for (std::size_t i = 0; i < places; ++i) {
    if (finite && i == len) continue;
    auto t = b.add_transition("escape" + std::to_string(i), Label::tau());
    b.add_arc(chain[i], t);
    b.add_arc(t, e);
  }
  for (const auto& a : x) {
    auto t = b.add_transition("refuse_" + a, Label::visible(a));
    b.add_arc(d, t);
    b.add_arc(t, f);
  }
  auto we = b.add_transition("success", success);
  b.add_arc(e, we);
  auto wf = b.add_transition("success_refused", success);
  b.add_arc(f, wf);
  for (const auto& a : x) b.declare_action(a);
  return std::move(b).build();
}

Separation closure_separation(const Net& n, const Net& n2, const ActionSet& blocked, const fail::Bounds& bounds) {
  Separation s;
  const auto r = fail::leq(n, n2, Criterion::justness, std::nullopt, bounds);
  if (r.verdict == fail::LeqVerdict::holds_within_bounds) {
    s.status = Separation::Status::leq_holds;
    return s;
  }
  if (r.verdict == fail::LeqVerdict::inconclusive) return s;
  s.sigma = r.trace;
  for (const auto& l : r.refusal) {
    if (l.is_visible()) s.refusal.insert(l.action);
  }

  ActionSet act = n.alphabet();
  for (const auto& a : n2.alphabet()) act.insert(a);
  for (const auto& a : s.refusal) act.insert(a);
  s.success_action = "ok";
  for (int i = 1; act.count(s.success_action) || blocked.count(s.success_action); ++i) {
    s.success_action = "ok" + std::to_string(i);
  }
  const Net t = universal_test(*s.sigma, s.refusal, Label::visible(s.success_action));
  for (const auto& a : t.alphabet()) {
    if (a != s.success_action) act.insert(a);
  }
  const Net left = abstract(parallel(t, n, act), act);
  const Net right = abstract(parallel(t, n2, act), act);
  LabelSet b;
  for (const auto& a : blocked) b.insert(Label::visible(a));
  s.composed = fail::leq(left, right, Criterion::justness, b, bounds);
  switch (s.composed.verdict) {
    case fail::LeqVerdict::fails: s.status = Separation::Status::separated; break;
    case fail::LeqVerdict::holds_within_bounds: s.status = Separation::Status::not_separated; break;
    case fail::LeqVerdict::inconclusive: s.status = Separation::Status::inconclusive; break;
  }
  return s;
}

}  // namespace justnets::testing
