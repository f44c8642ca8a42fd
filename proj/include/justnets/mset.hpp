#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace justnets {

/// Finite multiset over a totally ordered element type.
///
/// Stored as a sorted vector of (element, count) pairs with strictly positive
/// counts, so two multisets are equal iff their representations are equal.
template <class T>
class Multiset {
 public:
  using Count = std::uint32_t;
  using Entry = std::pair<T, Count>;
  using const_iterator = typename std::vector<Entry>::const_iterator;

  Multiset() = default;

  /// Each listed element contributes one occurrence.
  Multiset(std::initializer_list<T> elems) {
    for (const T& e : elems) add(e);
  }

  static Multiset from_counts(std::initializer_list<Entry> entries) {
    Multiset m;
    for (const auto& [e, k] : entries) m.add(e, k);
    return m;
  }

  Count count(const T& e) const {
    auto it = find(e);
    return it != entries_.end() && it->first == e ? it->second : 0;
  }

  bool contains(const T& e) const { return count(e) > 0; }

  void add(const T& e, Count k = 1) {
    if (k == 0) return;
    auto it = find(e);
    if (it != entries_.end() && it->first == e) {
      it->second += k;
    } else {
      entries_.insert(it, Entry{e, k});
    }
  }

  /// Sets the multiplicity of e, removing it when k is zero.
  void set(const T& e, Count k) {
    auto it = find(e);
    bool present = it != entries_.end() && it->first == e;
    if (k == 0) {
      if (present) entries_.erase(it);
    } else if (present) {
      it->second = k;
    } else {
      entries_.insert(it, Entry{e, k});
    }
  }

  bool empty() const { return entries_.empty(); }

  /// Sum of all multiplicities.
  std::size_t cardinality() const {
    std::size_t n = 0;
    for (const auto& en : entries_) n += en.second;
    return n;
  }

  /// Distinct elements in ascending order.
  std::vector<T> elements() const {
    std::vector<T> out;
    out.reserve(entries_.size());
    for (const auto& en : entries_) out.push_back(en.first);
    return out;
  }

  std::size_t support_size() const { return entries_.size(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  friend bool operator==(const Multiset& a, const Multiset& b) = default;
  friend auto operator<=>(const Multiset& a, const Multiset& b) {
    return a.entries_ <=> b.entries_;
  }

  /// Pointwise maximum.
  friend Multiset union_of(const Multiset& a, const Multiset& b) {
    return merge(a, b, [](Count x, Count y) { return std::max(x, y); });
  }

  /// Pointwise minimum.
  friend Multiset intersection(const Multiset& a, const Multiset& b) {
    return merge(a, b, [](Count x, Count y) { return std::min(x, y); });
  }

  friend Multiset sum(const Multiset& a, const Multiset& b) {
    return merge(a, b, [](Count x, Count y) { return x + y; });
  }

  /// Pointwise difference clamped at zero.
  friend Multiset difference(const Multiset& a, const Multiset& b) {
    return merge(a, b, [](Count x, Count y) { return x > y ? x - y : 0; });
  }

  friend Multiset scale(Count k, const Multiset& a) {
    Multiset out;
    if (k == 0) return out;
    out.entries_ = a.entries_;
    for (auto& en : out.entries_) en.second *= k;
    return out;
  }

  /// Pointwise a <= b.
  friend bool leq(const Multiset& a, const Multiset& b) {
    auto j = b.entries_.begin();
    for (const auto& [e, k] : a.entries_) {
      while (j != b.entries_.end() && j->first < e) ++j;
      if (j == b.entries_.end() || j->first != e || j->second < k) return false;
    }
    return true;
  }

  /// True iff the supports are disjoint.
  friend bool disjoint(const Multiset& a, const Multiset& b) {
    auto i = a.entries_.begin();
    auto j = b.entries_.begin();
    while (i != a.entries_.end() && j != b.entries_.end()) {
      if (i->first < j->first) {
        ++i;
      } else if (j->first < i->first) {
        ++j;
      } else {
        return false;
      }
    }
    return true;
  }

  friend Multiset operator+(const Multiset& a, const Multiset& b) { return sum(a, b); }
  friend Multiset operator-(const Multiset& a, const Multiset& b) { return difference(a, b); }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& [e, k] : entries_) {
      h ^= std::hash<T>{}(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<Count>{}(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  typename std::vector<Entry>::iterator find(const T& e) {
    return std::lower_bound(entries_.begin(), entries_.end(), e,
                            [](const Entry& en, const T& x) { return en.first < x; });
  }
  typename std::vector<Entry>::const_iterator find(const T& e) const {
    return std::lower_bound(entries_.begin(), entries_.end(), e,
                            [](const Entry& en, const T& x) { return en.first < x; });
  }

  template <class Op>
  static Multiset merge(const Multiset& a, const Multiset& b, Op op) {
    Multiset out;
    out.entries_.reserve(a.entries_.size() + b.entries_.size());
    auto i = a.entries_.begin();
    auto j = b.entries_.begin();
    auto push = [&](const T& e, Count k) {
      if (k > 0) out.entries_.emplace_back(e, k);
    };
    while (i != a.entries_.end() || j != b.entries_.end()) {
      if (j == b.entries_.end() || (i != a.entries_.end() && i->first < j->first)) {
        push(i->first, op(i->second, 0));
        ++i;
      } else if (i == a.entries_.end() || j->first < i->first) {
        push(j->first, op(0, j->second));
        ++j;
      } else {
        push(i->first, op(i->second, j->second));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Entry> entries_;
};

}  // namespace justnets

template <class T>
struct std::hash<justnets::Multiset<T>> {
  std::size_t operator()(const justnets::Multiset<T>& m) const { return m.hash(); }
};
