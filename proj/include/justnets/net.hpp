#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "justnets/error.hpp"
#include "justnets/mset.hpp"

namespace justnets {

struct PlaceId {
  std::uint32_t index = 0;
  auto operator<=>(const PlaceId&) const = default;
};

struct TransitionId {
  std::uint32_t index = 0;
  auto operator<=>(const TransitionId&) const = default;
};

}  // namespace justnets

template <>
struct std::hash<justnets::PlaceId> {
  std::size_t operator()(justnets::PlaceId p) const { return std::hash<std::uint32_t>{}(p.index); }
};
template <>
struct std::hash<justnets::TransitionId> {
  std::size_t operator()(justnets::TransitionId t) const {
    return std::hash<std::uint32_t>{}(t.index);
  }
};

namespace justnets {

/// Transition label: a visible action, the silent action tau, or the success action w.
struct Label {
  enum class Kind : std::uint8_t { visible, tau, success };

  Kind kind = Kind::tau;
  std::string action;  // only meaningful for visible labels

  static Label visible(std::string a) { return Label{Kind::visible, std::move(a)}; }
  static Label tau() { return Label{Kind::tau, {}}; }
  static Label success() { return Label{Kind::success, {}}; }

  bool is_visible() const { return kind == Kind::visible; }
  bool is_tau() const { return kind == Kind::tau; }
  bool is_success() const { return kind == Kind::success; }
  /// Visible or success: the labels that appear in traces.
  bool is_observable() const { return kind != Kind::tau; }

  /// "tau", "w", or the action name.
  std::string str() const;

  auto operator<=>(const Label&) const = default;
};

using ActionSet = std::set<std::string>;
using LabelSet = std::set<Label>;
using Marking = Multiset<PlaceId>;
using Step = Multiset<TransitionId>;
using Count = Marking::Count;

struct Transition {
  std::string name;
  Label label;
  Marking pre;   // F(s,t)
  Marking read;  // R(s,t)
  Marking post;  // F(t,s)
};

/// Finite labelled Petri net with read arcs. Immutable once built.
class Net {
 public:
  Net() = default;

  const std::string& name() const { return name_; }
  std::size_t num_places() const { return place_names_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }

  std::vector<PlaceId> places() const;
  std::vector<TransitionId> transition_ids() const;

  const std::string& place_name(PlaceId p) const;
  const Transition& transition(TransitionId t) const;
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Marking& initial_marking() const { return initial_; }

  /// pre + read of a single transition: what {t} needs to be enabled.
  const Marking& demand(TransitionId t) const { return demand_.at(t.index); }

  /// Transitions whose preset contains p.
  const std::vector<TransitionId>& consumers(PlaceId p) const { return consumers_.at(p.index); }

  std::optional<PlaceId> find_place(std::string_view name) const;
  std::optional<TransitionId> find_transition(std::string_view name) const;

  /// Visible actions on transitions plus explicitly declared ones.
  ActionSet alphabet() const;
  const ActionSet& declared_actions() const { return declared_; }
  bool has_success() const;
  bool has_empty_preset() const;

 private:
  friend class NetBuilder;

  std::string name_ = "net";
  std::vector<std::string> place_names_;
  std::vector<Transition> transitions_;
  Marking initial_;
  ActionSet declared_;
  std::vector<Marking> demand_;
  std::vector<std::vector<TransitionId>> consumers_;
  std::unordered_map<std::string, std::uint32_t> place_index_;
  std::unordered_map<std::string, std::uint32_t> transition_index_;
};

class NetBuilder {
 public:
  explicit NetBuilder(std::string name = "net") { net_.name_ = std::move(name); }
  void set_name(std::string name) { net_.name_ = std::move(name); }

  /// Throws InvalidNet if the name is already used by a place or transition.
  PlaceId add_place(const std::string& name, Count tokens = 0);
  TransitionId add_transition(const std::string& name, Label label);
  void add_arc(PlaceId from, TransitionId to, Count weight = 1);
  void add_arc(TransitionId from, PlaceId to, Count weight = 1);
  void add_read(PlaceId from, TransitionId to, Count weight = 1);
  void set_tokens(PlaceId p, Count tokens);
  void declare_action(const std::string& a) { net_.declared_.insert(a); }
  void declare_actions(const ActionSet& as) { net_.declared_.insert(as.begin(), as.end()); }

  std::optional<PlaceId> find_place(std::string_view name) const;
  std::optional<TransitionId> find_transition(std::string_view name) const;
  std::size_t num_places() const { return net_.place_names_.size(); }

  Net build() &&;

 private:
  void check_place(PlaceId p) const;
  void check_transition(TransitionId t) const;
  void check_fresh(const std::string& name) const;

  Net net_;
};

// ---- firing rule ----

Marking preset(const Net& n, TransitionId t);
Marking postset(const Net& n, TransitionId t);
Marking readset(const Net& n, TransitionId t);

/// Weighted sum of presets.
Marking step_preset(const Net& n, const Step& g);
/// Union (pointwise max) of readsets.
Marking step_readset(const Net& n, const Step& g);
/// Weighted sum of postsets.
Marking step_postset(const Net& n, const Step& g);

bool enabled(const Net& n, const Marking& m, const Step& g);
bool enabled(const Net& n, const Marking& m, TransitionId t);
/// Throws NotEnabled.
Marking fire(const Net& n, const Marking& m, const Step& g);
Marking fire(const Net& n, const Marking& m, TransitionId t);
std::vector<TransitionId> enabled_transitions(const Net& n, const Marking& m);

// ---- operators ----

/// N1 ||_A N2. Success transitions synchronise only if sync_success is set.
Net parallel(const Net& n1, const Net& n2, const ActionSet& sync, bool sync_success = false);
/// Rename visible actions; unmapped actions keep their name.
Net relabel(const Net& n, const std::map<std::string, std::string>& f);
/// Replace visible labels in `hidden` by tau.
Net abstract(const Net& n, const ActionSet& hidden);

struct Branch {
  std::string action;  // "tau" and "w" name the silent and success actions
  Net net;
};

/// Guarded choice over branches, optionally signalling `signal` in its initial state.
Net guarded_choice(const std::vector<Branch>& branches,
                   const std::optional<std::string>& signal = std::nullopt);

// ---- structure ----

/// Keep only places and transitions reachable by the structural closure from the
/// initial marking (a transition is kept once its pre- and readplaces are all kept).
Net restrict_reachable(const Net& n);

/// Structural isomorphism up to renaming of places and transitions.
bool isomorphic(const Net& a, const Net& b);

/// Renders a marking as {name:count,...} in place order.
std::string format_marking(const Net& n, const Marking& m);

}  // namespace justnets
