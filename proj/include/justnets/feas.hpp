#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "justnets/exec.hpp"
#include "justnets/net.hpp"

namespace justnets::feas {

/// A scheduler queue entry born at path position `birth`. Individual mode queues tokens
/// (`place`); collective mode queues enabled transitions (`transition`, with `place` one
/// of its preplaces).
struct Entry {
  PlaceId place;
  std::size_t birth = 0;
  std::optional<TransitionId> transition;
  auto operator<=>(const Entry&) const = default;
};

struct Finite {
  exec::FinPath path;
};
struct Ongoing {
  exec::FinPath path;
  std::vector<Entry> queue;  // live entries, oldest first
};
struct Periodic {
  exec::Lasso lasso;
};

struct Extension {
  std::variant<Finite, Ongoing, Periodic> result;
  std::vector<Entry> serviced;  // the entry serviced by each extension step

  const char* kind() const;
  exec::Path path() const;  // Ongoing yields its finite path so far
};

/// Extends `prefix` by transitions with labels outside b, always servicing the oldest
/// live entry. In collective mode a token can be shared by several enabled transitions,
/// so entries are transitions, crossed out when fired or collectively disturbed. Stops with Finite when no entry is left, with Periodic when the
/// marking and queue repeat, and with Ongoing after `fuel` transitions.
/// Transitions with an empty preset get a private marked loop place during the run.
/// Throws InvalidPath if prefix is not a path of n.
Extension extend_to_just(const Net& n, const exec::FinPath& prefix, const LabelSet& b, std::size_t fuel = 1000,
                         exec::Mode mode = exec::Mode::individual);

}  // namespace justnets::feas
