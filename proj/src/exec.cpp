#include "justnets/exec.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

namespace justnets::exec {

// ---- traces ----

Trace canonical(Trace t) {
  if (t.loop.empty()) return t;
  const std::size_t n = t.loop.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = t.loop[i] == t.loop[i - p];
    if (periodic) {
      t.loop.resize(p);
      break;
    }
  }
  while (!t.stem.empty() && t.stem.back() == t.loop.back()) {
    std::rotate(t.loop.rbegin(), t.loop.rbegin() + 1, t.loop.rend());
    t.stem.pop_back();
  }
  return t;
}

std::string format_word(const Word& w) {
  if (w.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i].str();
  }
  return out;
}

std::string format_trace(const Trace& t) {
  if (!t.infinite()) return format_word(t.stem);
  return (t.stem.empty() ? std::string() : format_word(t.stem) + " ") + "(" + format_word(t.loop) + ")^ω";
}

// ---- path construction ----

FinPath make_path(const Net& n, const Marking& start, const std::vector<TransitionId>& transitions) {
  FinPath p{start, {}};
  Marking m = start;
  for (auto t : transitions) {
    if (t.index >= n.num_transitions()) throw InvalidPath("unknown transition id");
    if (!enabled(n, m, t)) {
      throw InvalidPath("transition '" + n.transition(t).name + "' not enabled at step " +
                        std::to_string(p.steps.size() + 1));
    }
    m = fire(n, m, t);
    p.steps.push_back(PathStep{t, m});
  }
  return p;
}

Lasso make_lasso(const Net& n, const FinPath& prefix, const std::vector<TransitionId>& cycle) {
  if (cycle.empty()) throw InvalidPath("lasso cycle must be non-empty");
  validate(n, prefix);
  FinPath c = make_path(n, prefix.final_marking(), cycle);
  if (c.final_marking() != prefix.final_marking()) throw InvalidPath("cycle does not return to its entry marking");
  return Lasso{prefix, std::move(c.steps)};
}

void validate(const Net& n, const FinPath& p) {
  Marking m = p.start;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    if (s.transition.index >= n.num_transitions()) throw InvalidPath("unknown transition id");
    if (!enabled(n, m, s.transition)) throw InvalidPath("step " + std::to_string(i + 1) + " is not enabled");
    m = fire(n, m, s.transition);
    if (m != s.marking) throw InvalidPath("step " + std::to_string(i + 1) + " has a wrong marking");
  }
}

void validate(const Net& n, const Lasso& p) {
  if (p.cycle.empty()) throw InvalidPath("lasso cycle must be non-empty");
  validate(n, p.prefix);
  validate(n, FinPath{p.entry(), p.cycle});
  if (p.cycle.back().marking != p.entry()) throw InvalidPath("cycle does not return to its entry marking");
}

namespace {

void append_labels(const Net& n, const std::vector<PathStep>& steps, Word& out) {
  for (const auto& s : steps) {
    const Label& l = n.transition(s.transition).label;
    if (l.is_observable()) out.push_back(l);
  }
}

}  // namespace

Word trace(const Net& n, const FinPath& p) {
  Word w;
  append_labels(n, p.steps, w);
  return w;
}

Trace trace(const Net& n, const Lasso& p) {
  Trace t;
  append_labels(n, p.prefix.steps, t.stem);
  append_labels(n, p.cycle, t.loop);
  return t;
}

Trace trace(const Net& n, const Path& p) {
  if (const auto* f = std::get_if<FinPath>(&p)) return Trace{trace(n, *f), {}};
  return trace(n, std::get<Lasso>(p));
}

// ---- path enabling ----

std::vector<TransitionId> tail_enabled(const Net& n, const std::vector<std::pair<const Marking*, TransitionId>>& tail,
                                       Mode mode) {
  std::vector<TransitionId> out;
  if (tail.empty()) return out;
  std::vector<bool> in_tail(n.num_transitions(), false);
  for (const auto& [m, u] : tail) in_tail[u.index] = true;
  const Marking& entry = *tail.front().first;
  for (auto t : n.transition_ids()) {
    if (in_tail[t.index]) continue;
    const Marking& need = n.demand(t);
    bool ok = true;
    if (mode == Mode::individual) {
      ok = leq(need, entry);
      for (std::size_t j = 0; ok && j < tail.size(); ++j) ok = disjoint(need, n.transition(tail[j].second).pre);
    } else {
      for (std::size_t j = 0; ok && j < tail.size(); ++j) {
        ok = leq(need + n.transition(tail[j].second).pre, *tail[j].first);
      }
    }
    if (ok) out.push_back(t);
  }
  return out;
}

namespace {

std::vector<std::pair<const Marking*, TransitionId>> cycle_tail(const Lasso& p) {
  std::vector<std::pair<const Marking*, TransitionId>> tail;
  const Marking* before = &p.entry();
  for (const auto& s : p.cycle) {
    tail.emplace_back(before, s.transition);
    before = &s.marking;
  }
  return tail;
}

}  // namespace

bool path_enables(const Net& n, const FinPath& p, TransitionId t, Mode) { return enabled(n, p.final_marking(), t); }

bool path_enables(const Net& n, const Lasso& p, TransitionId t, Mode mode) {
  n.transition(t);
  auto en = tail_enabled(n, cycle_tail(p), mode);
  return std::find(en.begin(), en.end(), t) != en.end();
}

bool path_enables(const Net& n, const Path& p, TransitionId t, Mode mode) {
  return std::visit([&](const auto& q) { return path_enables(n, q, t, mode); }, p);
}

std::vector<TransitionId> path_enabled(const Net& n, const Path& p, Mode mode) {
  if (const auto* f = std::get_if<FinPath>(&p)) return enabled_transitions(n, f->final_marking());
  return tail_enabled(n, cycle_tail(std::get<Lasso>(p)), mode);
}

bool is_b_just(const Net& n, const Path& p, const LabelSet& b, Mode mode) {
  for (auto t : path_enabled(n, p, mode)) {
    const Label& l = n.transition(t).label;
    if (l.is_tau() || !b.count(l)) return false;
  }
  return true;
}

bool is_b_progressing(const Net& n, const Path& p, const LabelSet& b) {
  const auto* f = std::get_if<FinPath>(&p);
  if (!f) return true;
  for (auto t : enabled_transitions(n, f->final_marking())) {
    const Label& l = n.transition(t).label;
    if (l.is_tau() || !b.count(l)) return false;
  }
  return true;
}

// ---- marking graph ----

std::optional<std::uint32_t> MarkingGraph::find(const Marking& m) const {
  auto it = index.find(m);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

MarkingGraph reach(const Net& n, std::size_t max_nodes) {
  MarkingGraph g;
  auto add = [&](const Marking& m) -> std::optional<std::uint32_t> {
    auto it = g.index.find(m);
    if (it != g.index.end()) return it->second;
    if (g.nodes.size() >= max_nodes) {
      g.truncated = true;
      return std::nullopt;
    }
    auto id = static_cast<std::uint32_t>(g.nodes.size());
    g.nodes.push_back(m);
    g.out.emplace_back();
    g.index.emplace(m, id);
    return id;
  };
  add(n.initial_marking());
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
    for (auto t : enabled_transitions(n, g.nodes[v])) {
      Marking next = fire(n, g.nodes[v], t);
      auto w = add(next);
      if (!w) continue;
      g.out[v].push_back(static_cast<std::uint32_t>(g.edges.size()));
      g.edges.push_back(Edge{v, t, *w});
    }
  }
  return g;
}

// ---- enumeration ----

std::vector<Path> enumerate_complete(const MarkingGraph& g, const Net& n, Criterion c, const LabelSet& b, Mode mode,
                                     const EnumBounds& bounds) {
  std::vector<Path> out;
  std::set<std::tuple<std::vector<std::uint32_t>, std::vector<std::uint32_t>, std::vector<std::uint32_t>>> seen;
  std::vector<std::uint32_t> prefix_edges;

  auto to_path = [&](std::uint32_t start, const std::vector<std::uint32_t>& es) {
    FinPath p{g.nodes[start], {}};
    for (auto e : es) p.steps.push_back(PathStep{g.edges[e].transition, g.nodes[g.edges[e].to]});
    return p;
  };

  auto emit_cycles = [&](std::uint32_t entry) {
    std::vector<std::uint32_t> walk;
    std::function<void(std::uint32_t)> extend = [&](std::uint32_t v) {
      if (walk.size() >= bounds.max_cycle_len) return;
      for (auto e : g.out[v]) {
        walk.push_back(e);
        std::uint32_t w = g.edges[e].to;
        if (w == entry) {
          std::vector<std::uint32_t> ms, ts;
          for (auto x : walk) {
            ms.push_back(g.edges[x].from);
            ts.push_back(g.edges[x].transition.index);
          }
          std::sort(ms.begin(), ms.end());
          ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
          std::sort(ts.begin(), ts.end());
          std::vector<std::uint32_t> pre_ts;
          for (auto x : prefix_edges) pre_ts.push_back(g.edges[x].transition.index);
          if (seen.emplace(pre_ts, ms, ts).second) {
            Lasso l{to_path(0, prefix_edges), to_path(entry, walk).steps};
            if (c == Criterion::progress || is_b_just(n, l, b, mode)) out.emplace_back(std::move(l));
          }
        }
        extend(w);
        walk.pop_back();
      }
    };
    extend(entry);
  };

  std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
    FinPath p = to_path(0, prefix_edges);
    bool complete = c == Criterion::progress ? is_b_progressing(n, p, b) : is_b_just(n, p, b, mode);
    if (complete) out.emplace_back(std::move(p));
    emit_cycles(v);
    if (prefix_edges.size() >= bounds.max_prefix_len) return;
    for (auto e : g.out[v]) {
      prefix_edges.push_back(e);
      dfs(g.edges[e].to);
      prefix_edges.pop_back();
    }
  };
  if (!g.nodes.empty()) dfs(0);
  return out;
}

std::string format_path(const Net& n, const Path& p) {
  std::ostringstream os;
  auto steps = [&](const std::vector<PathStep>& ss) {
    for (const auto& s : ss) {
      os << "fire " << n.transition(s.transition).name << '\n';
      os << "marking " << format_marking(n, s.marking) << '\n';
    }
  };
  if (const auto* f = std::get_if<FinPath>(&p)) {
    os << "marking " << format_marking(n, f->start) << '\n';
    steps(f->steps);
  } else {
    const auto& l = std::get<Lasso>(p);
    os << "marking " << format_marking(n, l.prefix.start) << '\n';
    steps(l.prefix.steps);
    os << "cycle:\n";
    steps(l.cycle);
  }
  return os.str();
}

Safety check_safe(const Net& n, std::size_t max_nodes) {
  auto g = reach(n, max_nodes);
  for (const auto& m : g.nodes) {
    for (const auto& [p, k] : m) {
      if (k > 1) return Safety::unsafe;
    }
  }
  return g.truncated ? Safety::unknown : Safety::safe;
}

std::vector<std::uint32_t> scc(std::size_t num_nodes, const std::vector<std::vector<std::uint32_t>>& succ,
                               std::uint32_t* num_components) {
  constexpr std::uint32_t unvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(num_nodes, unvisited), low(num_nodes, 0), comp(num_nodes, unvisited);
  std::vector<bool> on_stack(num_nodes, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0, ncomp = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  for (std::uint32_t root = 0; root < num_nodes; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < succ[f.v].size()) {
        std::uint32_t w = succ[f.v][f.next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.v;
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  if (num_components) *num_components = ncomp;
  return comp;
}

std::optional<Net> prune_unreachable(const Net& n, std::size_t max_nodes) {
  const MarkingGraph g = reach(n, max_nodes);
  if (g.truncated) return std::nullopt;
  std::vector<bool> place(n.num_places(), false), trans(n.num_transitions(), false);
  for (const auto& m : g.nodes) {
    for (auto [p, c] : m) place[p.index] = true;
  }
  for (const auto& e : g.edges) trans[e.transition.index] = true;
  NetBuilder b(n.name());
  std::vector<PlaceId> id(n.num_places());
  for (auto p : n.places()) {
    if (place[p.index]) id[p.index] = b.add_place(n.place_name(p), n.initial_marking().count(p));
  }
  for (auto t : n.transition_ids()) {
    if (!trans[t.index]) continue;
    const Transition& tr = n.transition(t);
    auto u = b.add_transition(tr.name, tr.label);
    for (auto [p, c] : tr.pre) b.add_arc(id[p.index], u, c);
    for (auto [p, c] : tr.read) b.add_read(id[p.index], u, c);
    for (auto [p, c] : tr.post) b.add_arc(u, id[p.index], c);
  }
  b.declare_actions(n.declared_actions());
  return std::move(b).build();
}

}  // namespace justnets::exec
