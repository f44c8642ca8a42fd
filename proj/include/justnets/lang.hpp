#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "justnets/net.hpp"

namespace justnets::lang {

struct Term;
using TermPtr = std::shared_ptr<const Term>;
using Renaming = std::map<std::string, std::string>;

/// Process term. Immutable; `key` is a canonical, parseable, space-free rendering
/// used for structural equality and ordering.
struct Term {
  enum class Kind { sum, signal, par, hide, rename, ident };

  Kind kind = Kind::sum;
  std::vector<std::pair<Label, TermPtr>> branches;  // sum; signal body
  Label signal;                                     // signal
  TermPtr left, right;                              // par (left also: hide/rename body)
  ActionSet actions;                                // par sync set, hidden set
  Renaming renaming;                                // rename
  std::string name;                                 // ident
  std::string key;

  bool is_sum() const { return kind == Kind::sum; }
};

TermPtr make_sum(std::vector<std::pair<Label, TermPtr>> branches);
TermPtr make_nil();
TermPtr make_prefix(Label a, TermPtr continuation);
/// Throws InvalidNet unless body is a guarded sum.
TermPtr make_signal(Label a, TermPtr body);
TermPtr make_par(TermPtr l, ActionSet sync, TermPtr r);
TermPtr make_hide(ActionSet hidden, TermPtr body);
TermPtr make_rename(Renaming f, TermPtr body);
TermPtr make_ident(std::string name);

bool operator==(const Term& a, const Term& b);
const std::string& to_string(const TermPtr& t);

struct Definitions {
  std::map<std::string, TermPtr> bodies;
  std::vector<std::string> order;  // definition order in the source
  ActionSet declared;              // from `act` declarations
};

struct Program {
  Definitions defs;
  TermPtr main;
};

/// Parses a .ccsps file. Without a trailing main term the first definition is used.
/// Throws ParseError on syntax errors, undefined identifiers and recursion that is
/// not guarded by a prefix.
Program parse(std::string_view text);

// ---- places ----

struct PlaceExpr;
using PlacePtr = std::shared_ptr<const PlaceExpr>;

/// Place of the operational net: a sum or signal term, possibly tagged by the
/// operators it sits under.
struct PlaceExpr {
  enum class Kind { sum, signal, left, right, hide, rename };

  Kind kind = Kind::sum;
  TermPtr term;       // sum, signal
  PlacePtr inner;     // tagged kinds
  ActionSet actions;  // left/right sync set, hidden set
  Renaming renaming;
  std::string key;
};

struct PlaceLess {
  bool operator()(const PlacePtr& a, const PlacePtr& b) const { return a->key < b->key; }
};
using PlaceSet = std::set<PlacePtr, PlaceLess>;

PlaceSet dex(const TermPtr& t, const Definitions& defs);

struct DerivedTransition {
  PlaceSet pre;
  PlaceSet read;
  Label label;
  PlaceSet post;
};
bool operator<(const DerivedTransition& a, const DerivedTransition& b);

struct Derivation {
  std::vector<PlacePtr> places;  // discovery order, seed first
  std::vector<DerivedTransition> transitions;
  bool exhausted = false;  // stopped at the fuel bound before a fixed point
};

constexpr std::size_t kDefaultFuel = 1000;

/// Saturates the transition rules from `seed`: every transition whose pre- and
/// readplaces are reachable. `fuel` bounds the number of places.
Derivation derive(const Definitions& defs, const PlaceSet& seed, std::size_t fuel = kDefaultFuel);

/// Operational net of t with initial marking dex(t). Throws InvalidNet when
/// derivation runs out of fuel.
Net compile(const Definitions& defs, const TermPtr& t, std::size_t fuel = kDefaultFuel);
Net compile(const Program& p, std::size_t fuel = kDefaultFuel);
Net compile_source(std::string_view text, std::size_t fuel = kDefaultFuel);

}  // namespace justnets::lang
