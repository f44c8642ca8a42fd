#include "justnets/timed.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "json.hpp"

namespace justnets::timed {

std::string format_time(const Time& t) {
  return std::to_string(t.numerator()) + "/" + std::to_string(t.denominator());
}

namespace {

Cid fresh_cid(const Net& n, const Marking& m) {
  Cid c{m, {}};
  for (auto t : enabled_transitions(n, m)) c.clocks.emplace(t, Time(1));
  return c;
}

// Transitions of `pending` that stay enabled once t has taken its preset.
std::vector<TransitionId> survivors(const Net& n, const Marking& m, TransitionId t,
                                    const std::vector<TransitionId>& pending) {
  const Marking rest = m - n.transition(t).pre;
  std::vector<TransitionId> out;
  for (auto u : pending) {
    if (enabled(n, rest, u)) out.push_back(u);
  }
  return out;
}

// One slowest round bookkeeping: the transitions enabled when the current round began
// and not yet fired or disabled. Empty means a time unit passes before the next firing.
struct Slow {
  const Net& n;
  TimedPath path;
  Cid cur;
  std::vector<TransitionId> pending;

  Slow(const Net& net, const Marking& start) : n(net), cur(fresh_cid(net, start)) { path.start = cur; }

  void tick(std::vector<TimedStep>& out) {
    cur = timed_fire(n, cur, Time(1));
    out.push_back({TimeStep{Time(1)}, cur});
  }
  void step(TransitionId t, std::vector<TimedStep>& out) {
    if (pending.empty()) {
      tick(out);
      pending = enabled_transitions(n, cur.marking);
    }
    pending = survivors(n, cur.marking, t, pending);
    cur = timed_fire(n, cur, t);
    out.push_back({t, cur});
  }
  // Time after the last transition.
  void finish(std::vector<TimedStep>& out, std::vector<TimedStep>& cycle) {
    if (!pending.empty()) return;
    if (enabled_transitions(n, cur.marking).empty()) {
      cycle.push_back({TimeStep{Time(1)}, cur});
    } else {
      tick(out);
    }
  }
};

}  // namespace

void check_timed_net(const Net& n, std::size_t max_nodes) {
  if (n.has_empty_preset()) throw InvalidNet("timed semantics excludes transitions with an empty preset");
  switch (exec::check_safe(n, max_nodes)) {
    case exec::Safety::safe: return;
    case exec::Safety::unsafe: throw InvalidNet("timed semantics requires a safe net");
    case exec::Safety::unknown:
      throw InvalidNet("safety not established within " + std::to_string(max_nodes) + " markings");
  }
}

Cid initial_cid(const Net& n, std::size_t max_nodes) {
  check_timed_net(n, max_nodes);
  return fresh_cid(n, n.initial_marking());
}

Cid timed_fire(const Net& n, const Cid& c, TransitionId t) {
  if (!enabled(n, c.marking, t)) throw NotEnabled("transition '" + n.transition(t).name + "' is not enabled");
  const Marking rest = c.marking - n.transition(t).pre;
  Cid out{fire(n, c.marking, t), {}};
  for (auto u : enabled_transitions(n, out.marking)) {
    auto it = c.clocks.find(u);
    const bool keep = enabled(n, rest, u) && it != c.clocks.end();
    out.clocks.emplace(u, keep ? it->second : Time(1));
  }
  return out;
}

Cid timed_fire(const Net&, const Cid& c, const Time& r) {
  if (r <= Time(0)) throw TimeExceedsDeadline("time steps must be positive");
  Cid out = c;
  for (auto& [t, x] : out.clocks) {
    if (r > x) throw TimeExceedsDeadline("time step " + format_time(r) + " exceeds a residual clock " + format_time(x));
    x -= r;
  }
  return out;
}

std::optional<Time> duration(const TimedPath& p) {
  for (const auto& s : p.cycle) {
    if (std::holds_alternative<TimeStep>(s.event)) return std::nullopt;
  }
  Time sum(0);
  for (const auto& s : p.steps) {
    if (const auto* r = std::get_if<TimeStep>(&s.event)) sum += r->r;
  }
  return sum;
}

void validate(const Net& n, const TimedPath& p) {
  Cid c = p.start;
  auto replay = [&](const std::vector<TimedStep>& steps) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      try {
        if (const auto* t = std::get_if<TransitionId>(&s.event)) {
          c = timed_fire(n, c, *t);
        } else {
          c = timed_fire(n, c, std::get<TimeStep>(s.event).r);
        }
      } catch (const Error& e) {
        throw InvalidPath("timed step " + std::to_string(i + 1) + ": " + e.what());
      }
      if (!(c == s.cid)) throw InvalidPath("timed step " + std::to_string(i + 1) + " has a wrong CID");
    }
  };
  replay(p.steps);
  if (p.cycle.empty()) return;
  const Cid entry = c;
  replay(p.cycle);
  if (!(c == entry)) throw InvalidPath("timed cycle does not return to its entry CID");
}

exec::FinPath untimed(const Net& n, const TimedPath& p) {
  exec::FinPath out{p.start.marking, {}};
  for (const auto& s : p.steps) {
    if (const auto* t = std::get_if<TransitionId>(&s.event)) {
      out.steps.push_back({*t, fire(n, out.final_marking(), *t)});
    }
  }
  return out;
}

TimedPath slowest_star(const Net& n, const exec::FinPath& p) {
  Slow s(n, p.start);
  for (const auto& st : p.steps) s.step(st.transition, s.path.steps);
  return s.path;
}

TimedPath slowest(const Net& n, const exec::FinPath& p) {
  Slow s(n, p.start);
  for (const auto& st : p.steps) s.step(st.transition, s.path.steps);
  s.finish(s.path.steps, s.path.cycle);
  return s.path;
}

TimedPath slowest(const Net& n, const exec::Lasso& p) {
  Slow s(n, p.prefix.start);
  for (const auto& st : p.prefix.steps) s.step(st.transition, s.path.steps);
  // The CID at a cycle start is determined by the pending set.
  std::map<std::vector<TransitionId>, std::size_t> seen;
  std::vector<TimedStep> unrolled;
  while (true) {
    auto key = s.pending;
    std::sort(key.begin(), key.end());
    auto [it, fresh] = seen.emplace(key, unrolled.size());
    if (!fresh) {
      const auto from = static_cast<std::ptrdiff_t>(it->second);
      s.path.steps.insert(s.path.steps.end(), unrolled.begin(), unrolled.begin() + from);
      s.path.cycle.assign(unrolled.begin() + from, unrolled.end());
      return s.path;
    }
    for (const auto& st : p.cycle) s.step(st.transition, unrolled);
  }
}

// ---- slowest-round graph ----

namespace {

constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();

struct RoundGraph {
  struct Node {
    Marking marking;
    std::vector<TransitionId> pending;
    bool dead = false;
  };
  struct Arc {
    std::uint32_t from;
    TransitionId transition;
    std::uint32_t to;
    int cost;
  };
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::uint32_t>> out;
  bool truncated = false;

  // Time still available after reaching node v.
  std::int64_t tail(std::uint32_t v) const {
    if (!nodes[v].pending.empty()) return 0;
    return nodes[v].dead ? kInfinite : 1;
  }
};

// Paths that never fire a success transition.
RoundGraph round_graph(const Net& c, std::size_t max_nodes) {
  RoundGraph g;
  std::map<std::pair<Marking, std::vector<TransitionId>>, std::uint32_t> index;
  auto add = [&](const Marking& m, std::vector<TransitionId> pending) -> std::optional<std::uint32_t> {
    std::sort(pending.begin(), pending.end());
    auto it = index.find({m, pending});
    if (it != index.end()) return it->second;
    if (g.nodes.size() >= max_nodes) {
      g.truncated = true;
      return std::nullopt;
    }
    auto id = static_cast<std::uint32_t>(g.nodes.size());
    index.emplace(std::make_pair(m, pending), id);
    g.nodes.push_back({m, std::move(pending), false});
    g.out.emplace_back();
    return id;
  };
  add(c.initial_marking(), {});
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
    const Marking m = g.nodes[v].marking;
    const auto en = enabled_transitions(c, m);
    g.nodes[v].dead = en.empty();
    const bool tick = g.nodes[v].pending.empty();
    const auto round = tick ? en : g.nodes[v].pending;
    for (auto t : en) {
      if (c.transition(t).label.is_success()) continue;
      auto to = add(fire(c, m, t), survivors(c, m, t, round));
      if (!to) continue;
      g.out[v].push_back(static_cast<std::uint32_t>(g.arcs.size()));
      g.arcs.push_back({v, t, *to, tick ? 1 : 0});
    }
  }
  return g;
}

std::optional<std::vector<std::uint32_t>> route(const RoundGraph& g, std::uint32_t from,
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
        v = g.arcs[via[v]].from;
      }
      std::reverse(es.begin(), es.end());
      return es;
    }
    for (auto e : g.out[v]) {
      auto to = g.arcs[e].to;
      if (via[to] != -2 || !inside(to)) continue;
      via[to] = e;
      todo.push_back(to);
    }
  }
  return std::nullopt;
}

std::vector<TransitionId> transitions_of(const RoundGraph& g, const std::vector<std::uint32_t>& es) {
  std::vector<TransitionId> ts;
  for (auto e : es) ts.push_back(g.arcs[e].transition);
  return ts;
}

}  // namespace

TimedVerdict must_timed_composed(const Net& c, const Time& d, std::size_t max_nodes) {
  check_timed_net(c, max_nodes);
  const RoundGraph g = round_graph(c, max_nodes);
  TimedVerdict v;
  v.nodes = g.nodes.size();
  v.truncated = g.truncated;
  auto anywhere = [](std::uint32_t) { return true; };
  auto fail_with = [&](exec::Path p) {
    v.outcome = testing::Outcome::fail;
    if (const auto* f = std::get_if<exec::FinPath>(&p)) {
      v.timed_path = slowest(c, *f);
    } else {
      v.timed_path = slowest(c, std::get<exec::Lasso>(p));
    }
    v.witness = std::move(p);
  };

  // Unbounded: a dead marking, or a cycle through a time unit.
  if (auto dead = route(g, 0, [&](std::uint32_t u) { return g.nodes[u].dead; }, anywhere)) {
    fail_with(exec::make_path(c, c.initial_marking(), transitions_of(g, *dead)));
    return v;
  }
  std::vector<std::vector<std::uint32_t>> succ(g.nodes.size());
  for (const auto& a : g.arcs) succ[a.from].push_back(a.to);
  std::uint32_t k = 0;
  const auto comp = exec::scc(g.nodes.size(), succ, &k);
  for (std::uint32_t i = 0; i < g.arcs.size(); ++i) {
    const auto& a = g.arcs[i];
    if (a.cost == 0 || comp[a.from] != comp[a.to]) continue;
    auto stem = route(g, 0, [&](std::uint32_t u) { return u == a.from; }, anywhere);
    auto back = route(g, a.to, [&](std::uint32_t u) { return u == a.from; },
                      [&](std::uint32_t u) { return comp[u] == comp[a.from]; });
    std::vector<std::uint32_t> cycle{i};
    cycle.insert(cycle.end(), back->begin(), back->end());
    fail_with(exec::make_lasso(c, exec::make_path(c, c.initial_marking(), transitions_of(g, *stem)),
                               transitions_of(g, cycle)));
    return v;
  }

  // Longest path over the components; components come in reverse topological order.
  std::vector<std::int64_t> value(k, 0);
  std::vector<std::optional<std::uint32_t>> exit(k);      // arc leaving the component
  std::vector<std::optional<std::uint32_t>> resting(k);  // node whose tail gives the value
  std::vector<std::vector<std::uint32_t>> members(k);
  for (std::uint32_t u = 0; u < g.nodes.size(); ++u) members[comp[u]].push_back(u);
  for (std::uint32_t i = 0; i < k; ++i) {
    value[i] = -1;
    for (auto u : members[i]) {
      if (g.tail(u) > value[i]) {
        value[i] = g.tail(u);
        resting[i] = u;
        exit[i].reset();
      }
      for (auto e : g.out[u]) {
        const auto& a = g.arcs[e];
        if (comp[a.to] == i) continue;
        if (a.cost + value[comp[a.to]] > value[i]) {
          value[i] = a.cost + value[comp[a.to]];
          exit[i] = e;
          resting[i].reset();
        }
      }
    }
  }
  v.max_duration = Time(value[comp[0]]);

  if (Time(value[comp[0]]) > d) {
    std::vector<std::uint32_t> es;
    std::uint32_t cur = 0;
    while (true) {
      const auto i = comp[cur];
      const std::uint32_t target = resting[i] ? *resting[i] : g.arcs[*exit[i]].from;
      auto hop = route(g, cur, [&](std::uint32_t u) { return u == target; },
                       [&](std::uint32_t u) { return comp[u] == i; });
      es.insert(es.end(), hop->begin(), hop->end());
      if (resting[i]) break;
      es.push_back(*exit[i]);
      cur = g.arcs[*exit[i]].to;
    }
    fail_with(exec::make_path(c, c.initial_marking(), transitions_of(g, es)));
    return v;
  }
  v.outcome = g.truncated ? testing::Outcome::inconclusive : testing::Outcome::pass;
  return v;
}

TimedVerdict must_timed(const Net& n, const Net& test, const Time& d, std::size_t max_nodes) {
  return must_timed_composed(testing::apply(test, n), d, max_nodes);
}

EventualVerdict must_eventually(const Net& n, const Net& test, std::size_t max_nodes) {
  const Net c = testing::apply(test, n);
  EventualVerdict out;
  const TimedVerdict tv = must_timed_composed(c, Time(0), max_nodes);
  if (tv.max_duration || tv.truncated) {
    out.outcome = tv.truncated ? testing::Outcome::inconclusive : testing::Outcome::pass;
    if (!tv.truncated) out.bound = tv.max_duration;
  } else {
    out.outcome = testing::Outcome::fail;
    out.witness = tv.witness;
  }

  // Just paths that never fire a success transition.
  const exec::MarkingGraph g = exec::reach(c, max_nodes);
  std::vector<bool> region(g.nodes.size(), false);
  region[0] = true;
  std::deque<std::uint32_t> todo{0};
  std::vector<std::vector<std::uint32_t>> succ(g.nodes.size());
  while (!todo.empty()) {
    auto u = todo.front();
    todo.pop_front();
    for (auto e : g.out[u]) {
      const auto& edge = g.edges[e];
      if (c.transition(edge.transition).label.is_success()) continue;
      succ[u].push_back(edge.to);
      if (!region[edge.to]) {
        region[edge.to] = true;
        todo.push_back(edge.to);
      }
    }
  }
  bool found = false;
  for (std::uint32_t u = 0; u < g.nodes.size() && !found; ++u) {
    found = region[u] && enabled_transitions(c, g.nodes[u]).empty();
  }
  if (!found) {
    std::uint32_t k = 0;
    const auto comp = exec::scc(g.nodes.size(), succ, &k);
    std::vector<std::vector<std::pair<const Marking*, TransitionId>>> tails(k);
    for (const auto& e : g.edges) {
      if (!region[e.from] || c.transition(e.transition).label.is_success() || comp[e.from] != comp[e.to]) continue;
      tails[comp[e.from]].emplace_back(&g.nodes[e.from], e.transition);
    }
    for (std::uint32_t i = 0; i < k && !found; ++i) {
      found = !tails[i].empty() && exec::tail_enabled(c, tails[i], exec::Mode::individual).empty();
    }
  }
  out.just_paths = found ? testing::Outcome::fail
                         : (g.truncated ? testing::Outcome::inconclusive : testing::Outcome::pass);
  out.must_j = testing::must_composed(c, exec::Criterion::justness, exec::Mode::individual, max_nodes).outcome;
  return out;
}

std::string to_json(const Net& c, const TimedVerdict& v) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["verdict"] = testing::to_string(v.outcome);
  if (v.outcome == testing::Outcome::inconclusive && v.truncated) {
    j["max_duration"] = nullptr;
  } else {
    j["max_duration"] = v.max_duration ? format_time(*v.max_duration) : "infinity";
  }
  j["nodes"] = v.nodes;
  j["truncated"] = v.truncated;
  if (v.timed_path) {
    auto steps = [&](const std::vector<TimedStep>& ss) {
      ordered_json a = ordered_json::array();
      for (const auto& s : ss) {
        if (const auto* t = std::get_if<TransitionId>(&s.event)) {
          a.push_back({{"fire", c.transition(*t).name}, {"label", c.transition(*t).label.str()}});
        } else {
          a.push_back({{"time", format_time(std::get<TimeStep>(s.event).r)}});
        }
      }
      return a;
    };
    const auto dur = duration(*v.timed_path);
    j["witness"] = {{"steps", steps(v.timed_path->steps)},
                    {"cycle", steps(v.timed_path->cycle)},
                    {"duration", dur ? format_time(*dur) : "infinity"}};
  }
  return j.dump(2);
}

}  // namespace justnets::timed
