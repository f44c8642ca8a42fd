#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "justnets/net.hpp"

namespace justnets::exec {

/// How tokens are told apart when deciding whether a later transition disturbs
/// an enabled one: individual tokens (default) or collective token counts.
enum class Mode { individual, collective };

struct PathStep {
  TransitionId transition;
  Marking marking;  // marking reached by firing `transition`
};

/// Finite execution path M0 t1 M1 ... tn Mn.
struct FinPath {
  Marking start;
  std::vector<PathStep> steps;

  std::size_t length() const { return steps.size(); }
  const Marking& final_marking() const { return steps.empty() ? start : steps.back().marking; }
};

/// Infinite ultimately periodic path: prefix followed by the cycle repeated forever.
/// The cycle starts and ends at the prefix's final marking.
struct Lasso {
  FinPath prefix;
  std::vector<PathStep> cycle;

  const Marking& entry() const { return prefix.final_marking(); }
};

using Path = std::variant<FinPath, Lasso>;

using Word = std::vector<Label>;

/// Observable trace of a path: `stem` followed by `loop` repeated forever.
/// An empty loop means the trace is finite.
struct Trace {
  Word stem;
  Word loop;

  bool infinite() const { return !loop.empty(); }
  auto operator<=>(const Trace&) const = default;
};

/// Normal form of an ultimately periodic word: primitive loop, shortest stem.
/// Two traces denote the same word iff their normal forms are equal.
Trace canonical(Trace t);
std::string format_word(const Word& w);
std::string format_trace(const Trace& t);

/// Builds a path by firing `transitions` from `start`; throws InvalidPath.
FinPath make_path(const Net& n, const Marking& start, const std::vector<TransitionId>& transitions);
/// Builds a lasso; the cycle must return to the prefix's final marking.
Lasso make_lasso(const Net& n, const FinPath& prefix, const std::vector<TransitionId>& cycle);
/// Throws InvalidPath unless every step is a valid firing.
void validate(const Net& n, const FinPath& p);
void validate(const Net& n, const Lasso& p);

Word trace(const Net& n, const FinPath& p);
/// Lasso trace, not normalised.
Trace trace(const Net& n, const Lasso& p);
Trace trace(const Net& n, const Path& p);

/// Transitions that an infinite path path-enables when, from some point on, it
/// fires exactly the steps (marking, transition) in `tail` over and over.
/// `tail` must be a closed walk.
std::vector<TransitionId> tail_enabled(const Net& n, const std::vector<std::pair<const Marking*, TransitionId>>& tail,
                                       Mode mode);

bool path_enables(const Net& n, const FinPath& p, TransitionId t, Mode mode = Mode::individual);
bool path_enables(const Net& n, const Lasso& p, TransitionId t, Mode mode = Mode::individual);
bool path_enables(const Net& n, const Path& p, TransitionId t, Mode mode = Mode::individual);
std::vector<TransitionId> path_enabled(const Net& n, const Path& p, Mode mode = Mode::individual);

/// Every path-enabled transition carries a label in b (tau never does).
bool is_b_just(const Net& n, const Path& p, const LabelSet& b, Mode mode = Mode::individual);
/// Infinite, or the final marking enables only b-labelled transitions.
bool is_b_progressing(const Net& n, const Path& p, const LabelSet& b);

struct Edge {
  std::uint32_t from;
  TransitionId transition;
  std::uint32_t to;
};

/// Reachable markings with single-transition firings. Node 0 is the initial marking.
struct MarkingGraph {
  std::vector<Marking> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<std::uint32_t>> out;  // edge indices per node
  bool truncated = false;

  std::optional<std::uint32_t> find(const Marking& m) const;

  std::unordered_map<Marking, std::uint32_t> index;
};

/// Breadth-first exploration; stops expanding once max_nodes markings are known.
MarkingGraph reach(const Net& n, std::size_t max_nodes);

enum class Criterion { progress, justness };

struct EnumBounds {
  std::size_t max_prefix_len = 6;
  std::size_t max_cycle_len = 8;
};

/// All complete finite paths with at most max_prefix_len steps, and all lassos whose
/// prefix and cycle fit the bounds, under the given criterion. Cycles are closed walks
/// and may revisit markings. Lassos with the same prefix, cycle marking set and cycle
/// transition multiset are reported once.
std::vector<Path> enumerate_complete(const MarkingGraph& g, const Net& n, Criterion c, const LabelSet& b,
                                     Mode mode, const EnumBounds& bounds);

/// "marking {p:2,q:1}" / "fire t" lines; lassos add a "cycle:" section.
std::string format_path(const Net& n, const Path& p);

/// Drops places that no reachable marking marks and transitions that no reachable
/// marking enables. Returns nullopt if the marking graph exceeds max_nodes.
std::optional<Net> prune_unreachable(const Net& n, std::size_t max_nodes);

enum class Safety { safe, unsafe, unknown };
/// 1-safeness of all reachable markings (unknown when the graph was truncated).
Safety check_safe(const Net& n, std::size_t max_nodes);

/// Strongly connected components (Tarjan); returns the component index per node.
/// Components are numbered in reverse topological order.
std::vector<std::uint32_t> scc(std::size_t num_nodes, const std::vector<std::vector<std::uint32_t>>& succ,
                               std::uint32_t* num_components = nullptr);

}  // namespace justnets::exec
