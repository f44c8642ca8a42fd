#include "justnets/fail.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "json.hpp"

namespace justnets::fail {

using exec::MarkingGraph;

namespace {

bool subset(const LabelSet& a, const LabelSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

void minimize(std::vector<LabelSet>& sets) {
  std::sort(sets.begin(), sets.end(), [](const LabelSet& a, const LabelSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<LabelSet> keep;
  for (auto& s : sets) {
    bool dominated = std::any_of(keep.begin(), keep.end(), [&](const LabelSet& k) { return subset(k, s); });
    if (!dominated) keep.push_back(std::move(s));
  }
  std::sort(keep.begin(), keep.end());
  sets = std::move(keep);
}

// Labels of the given transitions; nullopt if one of them is tau.
std::optional<LabelSet> labels_of(const Net& n, const std::vector<TransitionId>& ts) {
  LabelSet out;
  for (auto t : ts) {
    const Label& l = n.transition(t).label;
    if (l.is_tau()) return std::nullopt;
    out.insert(l);
  }
  return out;
}

// Label set of a path that, from some point on, fires exactly the edges of a strongly
// connected set over and over; nullopt when it path-enables a tau transition.
std::optional<LabelSet> component_labels(const Net& n, const MarkingGraph& g, const std::vector<std::uint32_t>& edges,
                                         Criterion c, Mode mode) {
  if (c == Criterion::progress) return LabelSet{};
  std::vector<std::pair<const Marking*, TransitionId>> tail;
  tail.reserve(edges.size());
  for (auto e : edges) tail.emplace_back(&g.nodes[g.edges[e].from], g.edges[e].transition);
  return labels_of(n, exec::tail_enabled(n, tail, mode));
}

// Enabled labels of a marking that enables no tau transition.
std::optional<LabelSet> stuck_labels(const Net& n, const Marking& m) {
  return labels_of(n, enabled_transitions(n, m));
}

// Minimal label sets for one trace on the product of the marking graph with the
// positions of the trace.
Bases bases_on(const MarkingGraph& g, const Net& n, Criterion c, const Trace& sigma, Mode mode) {
  Bases out;
  out.truncated = g.truncated;
  const std::size_t stem = sigma.stem.size(), total = stem + sigma.loop.size();
  const bool finite = sigma.loop.empty();
  auto letter = [&](std::size_t pos) -> const Label& { return pos < stem ? sigma.stem[pos] : sigma.loop[pos - stem]; };
  auto advance = [&](std::size_t pos) { return pos + 1 < total ? pos + 1 : (finite ? total : stem); };

  std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> id;
  std::vector<std::pair<std::uint32_t, std::size_t>> nodes;
  struct PEdge {
    std::uint32_t from, to, edge;
  };
  std::vector<PEdge> edges;
  auto visit = [&](std::uint32_t v, std::size_t pos) {
    auto [it, fresh] = id.emplace(std::make_pair(v, pos), static_cast<std::uint32_t>(nodes.size()));
    if (fresh) nodes.emplace_back(v, pos);
    return it->second;
  };
  visit(0, 0);
  for (std::uint32_t k = 0; k < nodes.size(); ++k) {
    const auto [v, pos] = nodes[k];
    for (auto e : g.out[v]) {
      const Label& l = n.transition(g.edges[e].transition).label;
      std::uint32_t to;
      if (l.is_tau()) {
        to = visit(g.edges[e].to, pos);
      } else if (pos < total && letter(pos) == l) {
        to = visit(g.edges[e].to, advance(pos));
      } else {
        continue;
      }
      edges.push_back({k, to, e});
    }
  }

  // Only tau edges at the final position count for finite traces.
  auto usable = [&](const PEdge& e) {
    if (!finite) return true;
    return nodes[e.from].second == total && n.transition(g.edges[e.edge].transition).label.is_tau();
  };
  std::vector<std::vector<std::uint32_t>> succ(nodes.size());
  for (const auto& e : edges) {
    if (usable(e)) succ[e.from].push_back(e.to);
  }
  std::uint32_t k = 0;
  const auto comp = exec::scc(nodes.size(), succ, &k);
  std::vector<std::vector<std::uint32_t>> internal(k);
  std::vector<bool> visible(k, false);
  for (const auto& e : edges) {
    if (!usable(e) || comp[e.from] != comp[e.to]) continue;
    internal[comp[e.from]].push_back(e.edge);
    if (!n.transition(g.edges[e.edge].transition).label.is_tau()) visible[comp[e.from]] = true;
  }
  for (std::uint32_t i = 0; i < k; ++i) {
    if (internal[i].empty() || (!finite && !visible[i])) continue;
    std::sort(internal[i].begin(), internal[i].end());
    internal[i].erase(std::unique(internal[i].begin(), internal[i].end()), internal[i].end());
    if (auto l = component_labels(n, g, internal[i], c, mode)) out.minimal.push_back(*l);
  }
  if (finite) {
    for (const auto& [v, pos] : nodes) {
      if (pos != total) continue;
      if (auto l = stuck_labels(n, g.nodes[v])) out.minimal.push_back(*l);
    }
  }
  minimize(out.minimal);
  return out;
}

// Observable words of length <= bound reaching each node.
std::vector<std::set<Word>> words_to(const MarkingGraph& g, const Net& n, std::size_t bound) {
  std::vector<std::set<Word>> out(g.nodes.size());
  std::deque<std::pair<std::uint32_t, Word>> todo{{0, {}}};
  out[0].insert(Word{});
  while (!todo.empty()) {
    auto [v, w] = std::move(todo.front());
    todo.pop_front();
    for (auto e : g.out[v]) {
      const Label& l = n.transition(g.edges[e].transition).label;
      Word w2 = w;
      if (!l.is_tau()) {
        if (w.size() >= bound) continue;
        w2.push_back(l);
      }
      if (out[g.edges[e].to].insert(w2).second) todo.emplace_back(g.edges[e].to, std::move(w2));
    }
  }
  return out;
}

// Non-empty observable words of closed walks from v inside its component.
std::set<Word> loops_at(const MarkingGraph& g, const Net& n, const std::vector<std::uint32_t>& comp, std::uint32_t v,
                        std::size_t bound) {
  std::set<Word> loops;
  std::set<std::pair<std::uint32_t, Word>> seen{{v, {}}};
  std::deque<std::pair<std::uint32_t, Word>> todo{{v, {}}};
  while (!todo.empty()) {
    auto [u, w] = std::move(todo.front());
    todo.pop_front();
    for (auto e : g.out[u]) {
      const auto to = g.edges[e].to;
      if (comp[to] != comp[v]) continue;
      const Label& l = n.transition(g.edges[e].transition).label;
      Word w2 = w;
      if (!l.is_tau()) {
        if (w.size() >= bound) continue;
        w2.push_back(l);
      }
      if (to == v && !w2.empty()) loops.insert(w2);
      if (seen.insert({to, w2}).second) todo.emplace_back(to, std::move(w2));
    }
  }
  return loops;
}

// Tau-divergence label sets per tau component of the marking graph.
struct Divergence {
  std::vector<std::uint32_t> comp;
  std::vector<bool> diverges;
  std::vector<std::optional<LabelSet>> labels;
};

Divergence divergences(const MarkingGraph& g, const Net& n, Criterion c, Mode mode) {
  Divergence d;
  std::vector<std::vector<std::uint32_t>> succ(g.nodes.size());
  for (const auto& e : g.edges) {
    if (n.transition(e.transition).label.is_tau()) succ[e.from].push_back(e.to);
  }
  std::uint32_t k = 0;
  d.comp = exec::scc(g.nodes.size(), succ, &k);
  std::vector<std::vector<std::uint32_t>> internal(k);
  for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (n.transition(e.transition).label.is_tau() && d.comp[e.from] == d.comp[e.to]) internal[d.comp[e.from]].push_back(i);
  }
  d.diverges.assign(k, false);
  d.labels.assign(k, std::nullopt);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (internal[i].empty()) continue;
    d.diverges[i] = true;
    d.labels[i] = component_labels(n, g, internal[i], c, mode);
  }
  return d;
}

std::map<Trace, std::vector<LabelSet>> grouped(const std::vector<FailureWitness>& ws) {
  std::map<Trace, std::vector<LabelSet>> out;
  for (const auto& w : ws) out[w.trace].push_back(w.enabled);
  return out;
}

WitnessSet failures_on(const MarkingGraph& g, const Net& n, Criterion c, const Bounds& bounds, Mode mode) {
  WitnessSet out;
  out.truncated = g.truncated;
  std::map<Trace, std::vector<LabelSet>> per_trace;

  const auto div = divergences(g, n, c, mode);
  const auto words = words_to(g, n, std::max(bounds.max_trace_len, bounds.max_prefix_len));
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
    const auto stuck = stuck_labels(n, g.nodes[v]);
    const auto dc = div.comp[v];
    for (const auto& w : words[v]) {
      if (w.size() > bounds.max_trace_len) continue;
      Trace t{w, {}};
      if (stuck) per_trace[t].push_back(*stuck);
      if (div.diverges[dc] && div.labels[dc]) per_trace[t].push_back(*div.labels[dc]);
    }
  }

  std::uint32_t k = 0;
  std::vector<std::vector<std::uint32_t>> succ(g.nodes.size());
  for (const auto& e : g.edges) succ[e.from].push_back(e.to);
  const auto comp = exec::scc(g.nodes.size(), succ, &k);
  std::vector<bool> live(k, false);
  for (const auto& e : g.edges) {
    if (comp[e.from] == comp[e.to] && n.transition(e.transition).label.is_observable()) live[comp[e.from]] = true;
  }
  std::set<Trace> candidates;
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
    if (!live[comp[v]] || bounds.max_cycle_len == 0) continue;
    const auto loops = loops_at(g, n, comp, v, bounds.max_cycle_len);
    for (const auto& stem : words[v]) {
      if (stem.size() > bounds.max_prefix_len) continue;
      for (const auto& loop : loops) candidates.insert(exec::canonical(Trace{stem, loop}));
    }
  }
  for (const auto& t : candidates) {
    for (auto& l : bases_on(g, n, c, t, mode).minimal) per_trace[t].push_back(std::move(l));
  }

  for (auto& [t, sets] : per_trace) {
    minimize(sets);
    for (auto& s : sets) out.witnesses.push_back({t, std::move(s)});
  }
  std::sort(out.witnesses.begin(), out.witnesses.end());
  return out;
}

}  // namespace

LabelSet observable_alphabet(const Net& n) {
  LabelSet out;
  for (const auto& a : n.alphabet()) out.insert(Label::visible(a));
  if (n.has_success()) out.insert(Label::success());
  return out;
}

WitnessSet failures(const Net& n, Criterion c, const Bounds& bounds, Mode mode) {
  return failures_on(exec::reach(n, bounds.max_nodes), n, c, bounds, mode);
}

Bases refusal_bases(const Net& n, Criterion c, const Trace& sigma, Mode mode, std::size_t max_nodes) {
  return bases_on(exec::reach(n, max_nodes), n, c, sigma, mode);
}

std::optional<bool> has_failure(const Net& n, Criterion c, const Trace& sigma, const LabelSet& x, Mode mode,
                                std::size_t max_nodes) {
  auto b = refusal_bases(n, c, sigma, mode, max_nodes);
  for (const auto& s : b.minimal) {
    if (std::none_of(s.begin(), s.end(), [&](const Label& l) { return x.count(l); })) return true;
  }
  if (b.truncated) return std::nullopt;
  return false;
}

std::string to_string(LeqVerdict v) {
  switch (v) {
    case LeqVerdict::holds_within_bounds: return "holds_within_bounds";
    case LeqVerdict::fails: return "fails";
    case LeqVerdict::inconclusive: return "inconclusive";
  }
  return "";
}

LeqResult leq(const Net& n, const Net& n2, Criterion c, const std::optional<LabelSet>& b, const Bounds& bounds,
              Mode mode) {
  LeqResult r;
  r.bounds = bounds;
  LabelSet act = observable_alphabet(n);
  for (const auto& l : observable_alphabet(n2)) act.insert(l);

  const auto g1 = exec::reach(n, bounds.max_nodes);
  const auto g2 = exec::reach(n2, bounds.max_nodes);
  const auto w1 = failures_on(g1, n, c, bounds, mode);
  const auto w2 = failures_on(g2, n2, c, bounds, mode);
  r.witnesses_left = w1.witnesses.size();
  r.witnesses_right = w2.witnesses.size();

  bool unsure = g1.truncated || g2.truncated;
  for (const auto& [sigma, sets2] : grouped(w2.witnesses)) {
    const auto bases1 = bases_on(g1, n, c, sigma, mode).minimal;
    auto covered = [&](const LabelSet& allowed) {
      return std::any_of(bases1.begin(), bases1.end(), [&](const LabelSet& s) { return subset(s, allowed); });
    };
    std::optional<LabelSet> refusal;
    if (b) {
      const bool in2 = std::any_of(sets2.begin(), sets2.end(), [&](const LabelSet& s) { return subset(s, *b); });
      if (in2 && !covered(*b)) refusal = *b;
    } else {
      for (const auto& s2 : sets2) {
        if (!covered(s2)) {
          refusal = s2;
          break;
        }
      }
    }
    if (!refusal) continue;
    if (g1.truncated) {
      unsure = true;
      continue;
    }
    r.verdict = LeqVerdict::fails;
    r.trace = sigma;
    for (const auto& l : act) {
      if (!refusal->count(l)) r.refusal.insert(l);
    }
    return r;
  }
  r.verdict = unsure ? LeqVerdict::inconclusive : LeqVerdict::holds_within_bounds;
  return r;
}

namespace {

nlohmann::json json_word(const Word& w) {
  auto a = nlohmann::json::array();
  for (const auto& l : w) a.push_back(l.str());
  return a;
}

nlohmann::json json_labels(const LabelSet& s) {
  auto a = nlohmann::json::array();
  for (const auto& l : s) a.push_back(l.str());
  return a;
}

nlohmann::json json_bounds(const Bounds& b) {
  return {{"max_trace_len", b.max_trace_len},
          {"max_prefix_len", b.max_prefix_len},
          {"max_cycle_len", b.max_cycle_len},
          {"max_nodes", b.max_nodes}};
}

nlohmann::json json_trace(const Trace& t) {
  return {{"text", exec::format_trace(t)}, {"stem", json_word(t.stem)}, {"loop", json_word(t.loop)}};
}

}  // namespace

std::string to_json(const LeqResult& r) {
  nlohmann::json j;
  j["verdict"] = to_string(r.verdict);
  j["bounds"] = json_bounds(r.bounds);
  if (r.trace) j["counterexample"] = {{"trace", json_trace(*r.trace)}, {"refusal", json_labels(r.refusal)}};
  j["witness_counts"] = {{"left", r.witnesses_left}, {"right", r.witnesses_right}};
  return j.dump(2);
}

std::set<Word> merge_traces(const Word& s, const Word& r, const ActionSet& a) {
  std::set<Word> out;
  Word cur;
  auto sync = [&](const Label& l) { return l.is_visible() && a.count(l.action); };
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i == s.size() && j == r.size()) {
      out.insert(cur);
      return;
    }
    if (i < s.size() && !sync(s[i])) {
      cur.push_back(s[i]);
      self(self, i + 1, j);
      cur.pop_back();
    }
    if (j < r.size() && !sync(r[j])) {
      cur.push_back(r[j]);
      self(self, i, j + 1);
      cur.pop_back();
    }
    if (i < s.size() && j < r.size() && sync(s[i]) && s[i] == r[j]) {
      cur.push_back(s[i]);
      self(self, i + 1, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

Claim6Report claim6_check(const Net& n1, const Net& n2, const ActionSet& a, const Bounds& bounds) {
  Bounds finite = bounds;
  finite.max_cycle_len = 0;
  Claim6Report rep;
  auto keep_finite = [](WitnessSet ws) {
    std::erase_if(ws.witnesses, [](const FailureWitness& w) { return w.trace.infinite(); });
    return ws;
  };
  const auto direct = keep_finite(failures(parallel(n1, n2, a), Criterion::justness, finite));
  const auto w1 = keep_finite(failures(n1, Criterion::justness, finite));
  const auto w2 = keep_finite(failures(n2, Criterion::justness, finite));
  rep.truncated = direct.truncated || w1.truncated || w2.truncated;

  std::map<Trace, std::vector<LabelSet>> built;
  for (const auto& x : w1.witnesses) {
    for (const auto& y : w2.witnesses) {
      LabelSet comp;
      for (const auto& l : x.enabled) {
        const bool in_a = l.is_visible() && a.count(l.action);
        if (!in_a || y.enabled.count(l)) comp.insert(l);
      }
      for (const auto& l : y.enabled) {
        if (!(l.is_visible() && a.count(l.action))) comp.insert(l);
      }
      for (const auto& w : merge_traces(x.trace.stem, y.trace.stem, a)) {
        if (w.size() <= bounds.max_trace_len) built[Trace{w, {}}].push_back(comp);
      }
    }
  }
  std::vector<FailureWitness> formula;
  for (auto& [t, sets] : built) {
    minimize(sets);
    for (auto& s : sets) formula.push_back({t, s});
  }
  std::sort(formula.begin(), formula.end());
  std::set_difference(direct.witnesses.begin(), direct.witnesses.end(), formula.begin(), formula.end(),
                      std::back_inserter(rep.only_direct));
  std::set_difference(formula.begin(), formula.end(), direct.witnesses.begin(), direct.witnesses.end(),
                      std::back_inserter(rep.only_formula));
  rep.compared = direct.witnesses.size();
  rep.equal = rep.only_direct.empty() && rep.only_formula.empty();
  return rep;
}

std::string format_labels(const LabelSet& s) {
  std::string out = "{";
  for (const auto& l : s) {
    if (out.size() > 1) out += ',';
    out += l.str();
  }
  return out + "}";
}

std::string format_witness(const FailureWitness& w) {
  return "(" + exec::format_trace(w.trace) + ", " + format_labels(w.enabled) + ")";
}

std::string to_json(const Claim6Report& r, const Bounds& bounds) {
  nlohmann::json j;
  j["verdict"] = r.truncated ? "inconclusive" : (r.equal ? "holds_within_bounds" : "fails");
  j["bounds"] = json_bounds(bounds);
  auto list = [](const std::vector<FailureWitness>& ws) {
    auto a = nlohmann::json::array();
    for (const auto& w : ws) a.push_back({{"trace", json_trace(w.trace)}, {"enabled", json_labels(w.enabled)}});
    return a;
  };
  j["only_direct"] = list(r.only_direct);
  j["only_formula"] = list(r.only_formula);
  j["witness_counts"] = {{"direct", r.compared}};
  return j.dump(2);
}

}  // namespace justnets::fail
