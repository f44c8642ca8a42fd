#include "justnets/feas.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ranges>

namespace justnets::feas {

const char* Extension::kind() const {
  switch (result.index()) {
    case 0: return "finite";
    case 1: return "ongoing";
    default: return "periodic";
  }
}

exec::Path Extension::path() const {
  if (const auto* f = std::get_if<Finite>(&result)) return f->path;
  if (const auto* o = std::get_if<Ongoing>(&result)) return o->path;
  return std::get<Periodic>(result).lasso;
}

namespace {

// Gives every transition with an empty preset a marked private place it reads and returns.
Net enrich(const Net& n) {
  NetBuilder b(n.name());
  for (auto p : n.places()) b.add_place(n.place_name(p), n.initial_marking().count(p));
  for (auto id : n.transition_ids()) {
    const auto& t = n.transition(id);
    auto u = b.add_transition(t.name, t.label);
    for (const auto& [p, k] : t.pre) b.add_arc(p, u, k);
    for (const auto& [p, k] : t.read) b.add_read(p, u, k);
    for (const auto& [p, k] : t.post) b.add_arc(u, p, k);
  }
  for (auto id : n.transition_ids()) {
    if (!n.transition(id).pre.empty()) continue;
    std::string name = "private_" + n.transition(id).name;
    while (b.find_place(name) || b.find_transition(name)) name += "_";
    auto p = b.add_place(name, 1);
    b.add_arc(p, id);
    b.add_arc(id, p);
  }
  b.declare_actions(n.declared_actions());
  return std::move(b).build();
}

Marking project(const Marking& m, std::size_t places) {
  Marking out;
  for (const auto& [p, k] : m) {
    if (p.index < places) out.add(p, k);
  }
  return out;
}

Marking lift(const Net& rich, const Marking& m, std::size_t places) {
  Marking out = m;
  for (std::size_t i = places; i < rich.num_places(); ++i) out.add(PlaceId{static_cast<std::uint32_t>(i)});
  return out;
}

// Collective variant: the queue holds non-b transitions enabled since their birth and not
// collectively disturbed since; servicing fires the oldest one.
Extension collective(const Net& rich, const exec::FinPath& prefix, const LabelSet& b, std::size_t fuel,
                     std::size_t places) {
  std::vector<exec::PathStep> steps = prefix.steps;
  Marking m = lift(rich, prefix.final_marking(), places);
  std::deque<Entry> live;
  auto admit = [&] {
    for (auto t : rich.transition_ids()) {
      if (b.count(rich.transition(t).label) || !enabled(rich, m, t)) continue;
      if (std::ranges::none_of(live, [&](const Entry& e) { return e.transition == t; })) {
        live.push_back({rich.transition(t).pre.elements().front(), steps.size(), t});
      }
    }
  };
  auto finish_path = [&](std::size_t upto) {
    exec::FinPath p{prefix.start, {}};
    for (std::size_t i = 0; i < upto; ++i) p.steps.push_back(steps[i]);
    return p;
  };

  admit();
  Extension out;
  std::map<std::pair<Marking, std::vector<std::uint32_t>>, std::size_t> seen;
  for (std::size_t fired = 0;; ++fired) {
    if (live.empty()) {
      out.result = Finite{finish_path(steps.size())};
      return out;
    }
    std::vector<std::uint32_t> key;
    for (const auto& e : live) key.push_back(e.transition->index);
    auto [it, fresh] = seen.emplace(std::make_pair(m, std::move(key)), steps.size());
    if (!fresh) {
      const std::size_t from = it->second;
      exec::Lasso l{finish_path(from), {steps.begin() + static_cast<std::ptrdiff_t>(from), steps.end()}};
      out.result = Periodic{std::move(l)};
      return out;
    }
    if (fired == fuel) {
      out.result = Ongoing{finish_path(steps.size()), {live.begin(), live.end()}};
      return out;
    }
    const Entry r = live.front();
    const TransitionId u = *r.transition;
    const Marking before = m;
    m = fire(rich, m, u);
    steps.push_back({u, project(m, places)});
    out.serviced.push_back(r);
    std::erase_if(live, [&](const Entry& e) {
      return e.transition == u || !leq(rich.demand(*e.transition) + rich.transition(u).pre, before);
    });
    admit();
  }
}

}  // namespace

Extension extend_to_just(const Net& n, const exec::FinPath& prefix, const LabelSet& b, std::size_t fuel,
                         exec::Mode mode) {
  exec::validate(n, prefix);
  const Net rich = enrich(n);
  const std::size_t places = n.num_places();
  if (mode == exec::Mode::collective) return collective(rich, prefix, b, fuel, places);

  std::vector<exec::PathStep> steps = prefix.steps;
  Marking m = lift(rich, prefix.final_marking(), places);
  std::deque<Entry> live;
  for (const auto& [p, k] : m) live.push_back({p, steps.size(), std::nullopt});

  auto consumer = [&](PlaceId s) -> std::optional<TransitionId> {
    for (auto t : rich.consumers(s)) {
      if (!b.count(rich.transition(t).label) && enabled(rich, m, t)) return t;
    }
    return std::nullopt;
  };
  auto finish_path = [&](std::size_t upto) {
    exec::FinPath p{prefix.start, {}};
    for (std::size_t i = 0; i < upto; ++i) p.steps.push_back(steps[i]);
    return p;
  };

  Extension out;
  std::map<std::pair<Marking, std::vector<std::uint32_t>>, std::size_t> seen;
  for (std::size_t fired = 0;; ++fired) {
    std::vector<std::uint32_t> key;
    for (const auto& e : live) key.push_back(e.place.index);
    auto [it, fresh] = seen.emplace(std::make_pair(m, std::move(key)), steps.size());
    if (!fresh) {
      const std::size_t from = it->second;
      exec::Lasso l{finish_path(from), {steps.begin() + static_cast<std::ptrdiff_t>(from), steps.end()}};
      out.result = Periodic{std::move(l)};
      return out;
    }
    std::erase_if(live, [&](const Entry& e) { return !consumer(e.place); });
    if (live.empty()) {
      out.result = Finite{finish_path(steps.size())};
      return out;
    }
    if (fired == fuel) {
      out.result = Ongoing{finish_path(steps.size()), {live.begin(), live.end()}};
      return out;
    }
    const Entry r = live.front();
    const TransitionId t = *consumer(r.place);
    m = fire(rich, m, t);
    steps.push_back({t, project(m, places)});
    out.serviced.push_back(r);
    const Marking& pre = rich.transition(t).pre;
    std::erase_if(live, [&](const Entry& e) { return pre.contains(e.place); });
    for (const auto& [p, k] : m) live.push_back({p, steps.size(), std::nullopt});
  }
}

}  // namespace justnets::feas
