#include "justnets/net.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <sstream>

namespace justnets {

std::string Label::str() const {
  switch (kind) {
    case Kind::visible:
      return action;
    case Kind::tau:
      return "tau";
    case Kind::success:
      return "w";
  }
  return {};
}

// ---- Net ----

std::vector<PlaceId> Net::places() const {
  std::vector<PlaceId> out;
  out.reserve(place_names_.size());
  for (std::uint32_t i = 0; i < place_names_.size(); ++i) out.push_back(PlaceId{i});
  return out;
}

std::vector<TransitionId> Net::transition_ids() const {
  std::vector<TransitionId> out;
  out.reserve(transitions_.size());
  for (std::uint32_t i = 0; i < transitions_.size(); ++i) out.push_back(TransitionId{i});
  return out;
}

const std::string& Net::place_name(PlaceId p) const {
  if (p.index >= place_names_.size()) throw InvalidNet("unknown place id " + std::to_string(p.index));
  return place_names_[p.index];
}

const Transition& Net::transition(TransitionId t) const {
  if (t.index >= transitions_.size()) {
    throw InvalidNet("unknown transition id " + std::to_string(t.index));
  }
  return transitions_[t.index];
}

std::optional<PlaceId> Net::find_place(std::string_view name) const {
  auto it = place_index_.find(std::string(name));
  if (it == place_index_.end()) return std::nullopt;
  return PlaceId{it->second};
}

std::optional<TransitionId> Net::find_transition(std::string_view name) const {
  auto it = transition_index_.find(std::string(name));
  if (it == transition_index_.end()) return std::nullopt;
  return TransitionId{it->second};
}

ActionSet Net::alphabet() const {
  ActionSet out = declared_;
  for (const auto& t : transitions_) {
    if (t.label.is_visible()) out.insert(t.label.action);
  }
  return out;
}

bool Net::has_success() const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [](const Transition& t) { return t.label.is_success(); });
}

bool Net::has_empty_preset() const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [](const Transition& t) { return t.pre.empty(); });
}

// ---- NetBuilder ----

void NetBuilder::check_fresh(const std::string& name) const {
  if (name.empty()) throw InvalidNet("empty identifier");
  if (net_.place_index_.count(name) || net_.transition_index_.count(name)) {
    throw InvalidNet("duplicate identifier '" + name + "'");
  }
}

void NetBuilder::check_place(PlaceId p) const {
  if (p.index >= net_.place_names_.size()) {
    throw InvalidNet("unknown place id " + std::to_string(p.index));
  }
}

void NetBuilder::check_transition(TransitionId t) const {
  if (t.index >= net_.transitions_.size()) {
    throw InvalidNet("unknown transition id " + std::to_string(t.index));
  }
}

PlaceId NetBuilder::add_place(const std::string& name, Count tokens) {
  check_fresh(name);
  PlaceId p{static_cast<std::uint32_t>(net_.place_names_.size())};
  net_.place_names_.push_back(name);
  net_.place_index_.emplace(name, p.index);
  net_.initial_.add(p, tokens);
  return p;
}

TransitionId NetBuilder::add_transition(const std::string& name, Label label) {
  check_fresh(name);
  if (label.is_visible() && label.action.empty()) throw InvalidNet("empty action name");
  TransitionId t{static_cast<std::uint32_t>(net_.transitions_.size())};
  net_.transitions_.push_back(Transition{name, std::move(label), {}, {}, {}});
  net_.transition_index_.emplace(name, t.index);
  return t;
}

void NetBuilder::add_arc(PlaceId from, TransitionId to, Count weight) {
  check_place(from);
  check_transition(to);
  net_.transitions_[to.index].pre.add(from, weight);
}

void NetBuilder::add_arc(TransitionId from, PlaceId to, Count weight) {
  check_place(to);
  check_transition(from);
  net_.transitions_[from.index].post.add(to, weight);
}

void NetBuilder::add_read(PlaceId from, TransitionId to, Count weight) {
  check_place(from);
  check_transition(to);
  net_.transitions_[to.index].read.add(from, weight);
}

void NetBuilder::set_tokens(PlaceId p, Count tokens) {
  check_place(p);
  net_.initial_.set(p, tokens);
}

std::optional<PlaceId> NetBuilder::find_place(std::string_view name) const {
  return net_.find_place(name);
}

std::optional<TransitionId> NetBuilder::find_transition(std::string_view name) const {
  return net_.find_transition(name);
}

Net NetBuilder::build() && {
  Net& n = net_;
  n.demand_.clear();
  n.consumers_.assign(n.place_names_.size(), {});
  for (std::uint32_t i = 0; i < n.transitions_.size(); ++i) {
    const auto& t = n.transitions_[i];
    n.demand_.push_back(t.pre + t.read);
    for (const auto& [p, k] : t.pre) n.consumers_[p.index].push_back(TransitionId{i});
  }
  return std::move(n);
}

// ---- firing ----

Marking preset(const Net& n, TransitionId t) { return n.transition(t).pre; }
Marking postset(const Net& n, TransitionId t) { return n.transition(t).post; }
Marking readset(const Net& n, TransitionId t) { return n.transition(t).read; }

Marking step_preset(const Net& n, const Step& g) {
  Marking out;
  for (const auto& [t, k] : g) out = out + scale(k, n.transition(t).pre);
  return out;
}

Marking step_readset(const Net& n, const Step& g) {
  Marking out;
  for (const auto& [t, k] : g) out = union_of(out, n.transition(t).read);
  return out;
}

Marking step_postset(const Net& n, const Step& g) {
  Marking out;
  for (const auto& [t, k] : g) out = out + scale(k, n.transition(t).post);
  return out;
}

bool enabled(const Net& n, const Marking& m, const Step& g) {
  if (g.empty()) return false;
  return leq(step_preset(n, g) + step_readset(n, g), m);
}

bool enabled(const Net& n, const Marking& m, TransitionId t) {
  n.transition(t);
  return leq(n.demand(t), m);
}

Marking fire(const Net& n, const Marking& m, const Step& g) {
  if (!enabled(n, m, g)) throw NotEnabled("step is not enabled");
  return (m - step_preset(n, g)) + step_postset(n, g);
}

Marking fire(const Net& n, const Marking& m, TransitionId t) {
  if (!enabled(n, m, t)) throw NotEnabled("transition '" + n.transition(t).name + "' is not enabled");
  const auto& tr = n.transition(t);
  return (m - tr.pre) + tr.post;
}

std::vector<TransitionId> enabled_transitions(const Net& n, const Marking& m) {
  std::vector<TransitionId> out;
  for (std::uint32_t i = 0; i < n.num_transitions(); ++i) {
    if (leq(n.demand(TransitionId{i}), m)) out.push_back(TransitionId{i});
  }
  return out;
}

// ---- operators ----

namespace {

Marking remap(const Marking& m, const std::vector<PlaceId>& map) {
  Marking out;
  for (const auto& [p, k] : m) out.add(map[p.index], k);
  return out;
}

void copy_arcs(NetBuilder& b, TransitionId nt, const Transition& t, const std::vector<PlaceId>& map) {
  for (const auto& [p, k] : t.pre) b.add_arc(map[p.index], nt, k);
  for (const auto& [p, k] : t.read) b.add_read(map[p.index], nt, k);
  for (const auto& [p, k] : t.post) b.add_arc(nt, map[p.index], k);
}

bool synchronises(const Label& l, const ActionSet& sync, bool sync_success) {
  if (l.is_visible()) return sync.count(l.action) > 0;
  return l.is_success() && sync_success;
}

}  // namespace

Net parallel(const Net& n1, const Net& n2, const ActionSet& sync, bool sync_success) {
  NetBuilder b(n1.name() + "||" + n2.name());
  b.declare_actions(n1.declared_actions());
  b.declare_actions(n2.declared_actions());
  std::vector<PlaceId> map1, map2;
  for (auto p : n1.places()) {
    map1.push_back(b.add_place("(" + n1.place_name(p) + ",*)", n1.initial_marking().count(p)));
  }
  for (auto p : n2.places()) {
    map2.push_back(b.add_place("(*," + n2.place_name(p) + ")", n2.initial_marking().count(p)));
  }
  for (const auto& t1 : n1.transitions()) {
    if (!synchronises(t1.label, sync, sync_success)) continue;
    for (const auto& t2 : n2.transitions()) {
      if (t2.label != t1.label) continue;
      auto nt = b.add_transition("(" + t1.name + "," + t2.name + ")", t1.label);
      copy_arcs(b, nt, t1, map1);
      copy_arcs(b, nt, t2, map2);
    }
  }
  for (const auto& t1 : n1.transitions()) {
    if (synchronises(t1.label, sync, sync_success)) continue;
    copy_arcs(b, b.add_transition("(" + t1.name + ",*)", t1.label), t1, map1);
  }
  for (const auto& t2 : n2.transitions()) {
    if (synchronises(t2.label, sync, sync_success)) continue;
    copy_arcs(b, b.add_transition("(*," + t2.name + ")", t2.label), t2, map2);
  }
  return std::move(b).build();
}

Net relabel(const Net& n, const std::map<std::string, std::string>& f) {
  for (const auto& [from, to] : f) {
    if (from.empty() || to.empty() || from == "tau" || to == "tau" || from == "w" || to == "w") {
      throw InvalidNet("relabelling must map visible actions to visible actions");
    }
  }
  auto rename = [&](const std::string& a) {
    auto it = f.find(a);
    return it == f.end() ? a : it->second;
  };
  NetBuilder b(n.name());
  std::vector<PlaceId> map;
  for (auto p : n.places()) map.push_back(b.add_place(n.place_name(p), n.initial_marking().count(p)));
  for (const auto& t : n.transitions()) {
    Label l = t.label.is_visible() ? Label::visible(rename(t.label.action)) : t.label;
    copy_arcs(b, b.add_transition(t.name, l), t, map);
  }
  for (const auto& a : n.declared_actions()) b.declare_action(rename(a));
  return std::move(b).build();
}

Net abstract(const Net& n, const ActionSet& hidden) {
  NetBuilder b(n.name());
  std::vector<PlaceId> map;
  for (auto p : n.places()) map.push_back(b.add_place(n.place_name(p), n.initial_marking().count(p)));
  for (const auto& t : n.transitions()) {
    Label l = t.label.is_visible() && hidden.count(t.label.action) ? Label::tau() : t.label;
    copy_arcs(b, b.add_transition(t.name, l), t, map);
  }
  for (const auto& a : n.declared_actions()) {
    if (!hidden.count(a)) b.declare_action(a);
  }
  return std::move(b).build();
}

Net guarded_choice(const std::vector<Branch>& branches, const std::optional<std::string>& signal) {
  if (signal) {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const Net& bn = branches[i].net;
      for (const auto& t : bn.transitions()) {
        for (const auto& [p, k] : t.post) {
          if (bn.initial_marking().contains(p)) {
            throw InvalidNet("signalling choice: branch " + std::to_string(i + 1) +
                             " has an incoming arc to initially marked place '" + bn.place_name(p) + "'");
          }
        }
      }
    }
  }
  NetBuilder b("choice");
  std::vector<std::vector<PlaceId>> maps(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Net& bn = branches[i].net;
    b.declare_actions(bn.declared_actions());
    for (auto p : bn.places()) {
      maps[i].push_back(b.add_place("(" + bn.place_name(p) + "," + std::to_string(i + 1) + ")"));
    }
  }
  PlaceId root = b.add_place("(r,*)", 1);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Net& bn = branches[i].net;
    for (const auto& t : bn.transitions()) {
      copy_arcs(b, b.add_transition("(" + t.name + "," + std::to_string(i + 1) + ")", t.label), t,
                maps[i]);
    }
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    auto t = b.add_transition("(t_" + std::to_string(i + 1) + ",*)", branches[i].action == "tau" ? Label::tau() : branches[i].action == "w" ? Label::success() : Label::visible(branches[i].action));
    b.add_arc(root, t);
    for (const auto& [p, k] : branches[i].net.initial_marking()) b.add_arc(t, maps[i][p.index], k);
  }
  if (signal) {
    auto u = b.add_transition("(u,>)", Label::visible(*signal));
    b.add_read(root, u);
  }
  return std::move(b).build();
}

// ---- structure ----

Net restrict_reachable(const Net& n) {
  std::vector<bool> place_live(n.num_places(), false);
  std::vector<bool> trans_live(n.num_transitions(), false);
  for (const auto& [p, k] : n.initial_marking()) place_live[p.index] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t i = 0; i < n.num_transitions(); ++i) {
      if (trans_live[i]) continue;
      const auto& d = n.demand(TransitionId{i});
      bool ok = std::all_of(d.begin(), d.end(), [&](const auto& e) { return place_live[e.first.index]; });
      if (!ok) continue;
      trans_live[i] = true;
      changed = true;
      for (const auto& [p, k] : n.transitions()[i].post) place_live[p.index] = true;
    }
  }
  NetBuilder b(n.name());
  b.declare_actions(n.declared_actions());
  std::vector<PlaceId> map(n.num_places());
  for (auto p : n.places()) {
    if (place_live[p.index]) map[p.index] = b.add_place(n.place_name(p), n.initial_marking().count(p));
  }
  for (std::uint32_t i = 0; i < n.num_transitions(); ++i) {
    if (!trans_live[i]) continue;
    const auto& t = n.transitions()[i];
    copy_arcs(b, b.add_transition(t.name, t.label), t, map);
  }
  return std::move(b).build();
}

namespace {

// Colour refinement shared by both nets so that colours are comparable.
struct Colouring {
  std::map<std::vector<std::uint64_t>, std::uint64_t> dict;
  std::map<Label, std::uint64_t> labels;

  std::uint64_t intern(const std::vector<std::uint64_t>& sig) {
    auto [it, fresh] = dict.emplace(sig, dict.size());
    return it->second;
  }
  std::uint64_t label(const Label& l) {
    auto [it, fresh] = labels.emplace(l, labels.size());
    return it->second;
  }

  void refine(const Net& n, std::vector<std::uint64_t>& pc, std::vector<std::uint64_t>& tc, int round) {
    std::vector<std::vector<std::uint64_t>> psig(n.num_places());
    for (auto p : n.places()) psig[p.index] = {static_cast<std::uint64_t>(round), 0, pc[p.index]};
    std::vector<std::uint64_t> ntc(n.num_transitions());
    for (std::uint32_t i = 0; i < n.num_transitions(); ++i) {
      const auto& t = n.transitions()[i];
      std::vector<std::uint64_t> sig{static_cast<std::uint64_t>(round), 1, tc[i]};
      std::vector<std::uint64_t> parts;
      auto add = [&](const Marking& m, std::uint64_t role) {
        for (const auto& [p, k] : m) {
          parts.push_back(intern({role, k, pc[p.index]}));
          psig[p.index].push_back(intern({role + 10, k, tc[i]}));
        }
      };
      add(t.pre, 1);
      add(t.read, 2);
      add(t.post, 3);
      std::sort(parts.begin(), parts.end());
      sig.insert(sig.end(), parts.begin(), parts.end());
      ntc[i] = intern(sig);
    }
    for (auto p : n.places()) {
      auto& s = psig[p.index];
      std::sort(s.begin() + 3, s.end());
      pc[p.index] = intern(s);
    }
    tc = std::move(ntc);
  }
};

using TransSig = std::tuple<Label, Marking, Marking, Marking>;

std::vector<TransSig> signatures(const Net& n, const std::vector<PlaceId>* map) {
  std::vector<TransSig> out;
  for (const auto& t : n.transitions()) {
    if (map) {
      out.emplace_back(t.label, remap(t.pre, *map), remap(t.read, *map), remap(t.post, *map));
    } else {
      out.emplace_back(t.label, t.pre, t.read, t.post);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool isomorphic(const Net& a, const Net& b) {
  if (a.num_places() != b.num_places() || a.num_transitions() != b.num_transitions()) return false;
  Colouring col;
  std::vector<std::uint64_t> pa(a.num_places()), pb(b.num_places());
  for (auto p : a.places()) pa[p.index] = col.intern({0, a.initial_marking().count(p)});
  for (auto p : b.places()) pb[p.index] = col.intern({0, b.initial_marking().count(p)});
  std::vector<std::uint64_t> ta(a.num_transitions()), tb(b.num_transitions());
  for (std::uint32_t i = 0; i < a.num_transitions(); ++i) ta[i] = col.label(a.transitions()[i].label);
  for (std::uint32_t i = 0; i < b.num_transitions(); ++i) tb[i] = col.label(b.transitions()[i].label);
  const int rounds = static_cast<int>(std::max(a.num_places(), a.num_transitions())) + 1;
  for (int r = 1; r <= rounds; ++r) {
    col.refine(a, pa, ta, r);
    col.refine(b, pb, tb, r);
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
    auto ua = ta, ub = tb;
    std::sort(ua.begin(), ua.end());
    std::sort(ub.begin(), ub.end());
    if (ua != ub) return false;
  }

  // Backtrack over colour-respecting place bijections, most constrained first.
  std::map<std::uint64_t, std::vector<std::uint32_t>> classes_b;
  for (std::uint32_t i = 0; i < b.num_places(); ++i) classes_b[pb[i]].push_back(i);
  std::vector<std::uint32_t> order(a.num_places());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return classes_b[pa[x]].size() < classes_b[pa[y]].size();
  });
  const auto target = signatures(b, nullptr);
  std::vector<PlaceId> map(a.num_places());
  std::vector<bool> used(b.num_places(), false);
  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (k == order.size()) return signatures(a, &map) == target;
    std::uint32_t p = order[k];
    for (std::uint32_t q : classes_b[pa[p]]) {
      if (used[q]) continue;
      used[q] = true;
      map[p] = PlaceId{q};
      if (search(k + 1)) return true;
      used[q] = false;
    }
    return false;
  };
  return search(0);
}

std::string format_marking(const Net& n, const Marking& m) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [p, k] : m) {
    if (!first) os << ',';
    first = false;
    os << n.place_name(p) << ':' << k;
  }
  os << '}';
  return os.str();
}

}  // namespace justnets
