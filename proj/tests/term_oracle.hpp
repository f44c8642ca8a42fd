#pragma once

// Reference semantics for the tests: an interleaving transition system on terms,
// written from the structural rules directly, plus helpers that compare it with
// compiled nets through bounded trace sets and strong bisimilarity.

#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "justnets/exec.hpp"
#include "justnets/lang.hpp"

namespace oracle {

using justnets::Label;
using justnets::lang::Definitions;
using justnets::lang::Term;
using justnets::lang::TermPtr;

/// One-step successors of a term. A signal offers its action as a self-loop.
inline std::vector<std::pair<Label, TermPtr>> steps(const TermPtr& t, const Definitions& defs) {
  using justnets::lang::make_hide;
  using justnets::lang::make_par;
  using justnets::lang::make_rename;
  std::vector<std::pair<Label, TermPtr>> out;
  switch (t->kind) {
    case Term::Kind::sum: return t->branches;
    case Term::Kind::signal:
      out = t->branches;
      out.emplace_back(t->signal, t);
      return out;
    case Term::Kind::ident: return steps(defs.bodies.at(t->name), defs);
    case Term::Kind::hide:
      for (auto& [a, u] : steps(t->left, defs)) {
        Label l = a.is_visible() && t->actions.count(a.action) ? Label::tau() : a;
        out.emplace_back(l, make_hide(t->actions, u));
      }
      return out;
    case Term::Kind::rename:
      for (auto& [a, u] : steps(t->left, defs)) {
        Label l = a;
        if (a.is_visible() && t->renaming.count(a.action)) l = Label::visible(t->renaming.at(a.action));
        out.emplace_back(l, make_rename(t->renaming, u));
      }
      return out;
    case Term::Kind::par: {
      auto ls = steps(t->left, defs), rs = steps(t->right, defs);
      auto sync = [&](const Label& a) { return a.is_visible() && t->actions.count(a.action); };
      for (auto& [a, u] : ls) {
        if (!sync(a)) out.emplace_back(a, make_par(u, t->actions, t->right));
      }
      for (auto& [a, u] : rs) {
        if (!sync(a)) out.emplace_back(a, make_par(t->left, t->actions, u));
      }
      for (auto& [a, u] : ls) {
        if (!sync(a)) continue;
        for (auto& [b, v] : rs) {
          if (a == b) out.emplace_back(a, make_par(u, t->actions, v));
        }
      }
      return out;
    }
  }
  return out;
}

/// Observable words of length <= max_len of a generic transition system given by a
/// successor function over hashable-by-string states.
template <class State, class Key, class Succ>
std::set<std::vector<std::string>> bounded_traces(const State& init, Key key, Succ succ, std::size_t max_len) {
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  std::set<std::vector<std::string>> words;
  std::deque<std::pair<State, std::vector<std::string>>> todo{{init, {}}};
  seen.insert({key(init), {}});
  while (!todo.empty()) {
    auto [s, w] = todo.front();
    todo.pop_front();
    words.insert(w);
    for (auto& [l, s2] : succ(s)) {
      auto w2 = w;
      if (!l.is_tau()) w2.push_back(l.str());
      if (w2.size() > max_len) continue;
      if (seen.insert({key(s2), w2}).second) todo.emplace_back(s2, w2);
    }
  }
  return words;
}

inline std::set<std::vector<std::string>> term_traces(const TermPtr& t, const Definitions& defs,
                                                      std::size_t max_len) {
  return bounded_traces(
      t, [](const TermPtr& u) { return u->key; }, [&](const TermPtr& u) { return steps(u, defs); }, max_len);
}

inline std::set<std::vector<std::string>> net_traces(const justnets::Net& n, std::size_t max_len) {
  using justnets::Marking;
  return bounded_traces(
      n.initial_marking(),
      [](const Marking& m) {
        std::string k;
        for (auto [p, c] : m) k += std::to_string(p.index) + ":" + std::to_string(c) + ",";
        return k;
      },
      [&](const Marking& m) {
        std::vector<std::pair<Label, Marking>> out;
        for (auto t : justnets::enabled_transitions(n, m)) out.emplace_back(n.transition(t).label, justnets::fire(n, m, t));
        return out;
      },
      max_len);
}

/// Strong bisimilarity of the marking graphs (labels compared exactly, tau included).
inline bool bisimilar(const justnets::Net& a, const justnets::Net& b, std::size_t max_nodes = 5000) {
  auto ga = justnets::exec::reach(a, max_nodes), gb = justnets::exec::reach(b, max_nodes);
  if (ga.truncated || gb.truncated) return false;
  const std::size_t na = ga.nodes.size(), n = na + gb.nodes.size();
  std::vector<std::vector<std::pair<Label, std::size_t>>> succ(n);
  for (const auto& e : ga.edges) succ[e.from].emplace_back(a.transition(e.transition).label, e.to);
  for (const auto& e : gb.edges) succ[na + e.from].emplace_back(b.transition(e.transition).label, na + e.to);
  std::vector<std::size_t> block(n, 0);
  for (;;) {
    std::map<std::pair<std::size_t, std::set<std::pair<Label, std::size_t>>>, std::size_t> sig;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::set<std::pair<Label, std::size_t>> out;
      for (auto& [l, t] : succ[s]) out.insert({l, block[t]});
      next[s] = sig.emplace(std::make_pair(block[s], out), sig.size()).first->second;
    }
    std::set<std::size_t> before(block.begin(), block.end());
    bool stable = sig.size() == before.size();
    block = next;
    if (stable) break;
  }
  return block[0] == block[na];
}

}  // namespace oracle
