// Finite binary relations over worlds 0..n-1, stored as one bitset row per
// source world.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace fourdl {

using WorldSet = boost::dynamic_bitset<>;

inline WorldSet empty_set(std::size_t n) { return WorldSet(n); }
inline WorldSet full_set(std::size_t n) { return ~WorldSet(n); }

inline WorldSet singleton(std::size_t n, std::size_t w) {
  WorldSet s(n);
  s.set(w);
  return s;
}

class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : rows_(n, WorldSet(n)) {}

  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.rows_[i].set(i);
    return r;
  }

  static Relation diagonal(const WorldSet& s) {
    Relation r(s.size());
    for (auto i = s.find_first(); i != WorldSet::npos; i = s.find_next(i)) r.rows_[i].set(i);
    return r;
  }

  std::size_t size() const { return rows_.size(); }

  bool contains(std::size_t a, std::size_t b) const { return rows_[a].test(b); }
  void add(std::size_t a, std::size_t b) { rows_[a].set(b); }
  void remove(std::size_t a, std::size_t b) { rows_[a].reset(b); }

  const WorldSet& successors(std::size_t a) const { return rows_[a]; }

  std::size_t pair_count() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.count();
    return c;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < rows_.size(); ++a)
      for (auto b = rows_[a].find_first(); b != WorldSet::npos; b = rows_[a].find_next(b)) out.emplace_back(a, b);
    return out;
  }

  Relation complement() const {
    Relation r(*this);
    for (auto& row : r.rows_) row.flip();
    return r;
  }

  Relation unite(const Relation& other) const {
    Relation r(*this);
    for (std::size_t i = 0; i < rows_.size(); ++i) r.rows_[i] |= other.rows_[i];
    return r;
  }

  Relation intersect(const Relation& other) const {
    Relation r(*this);
    for (std::size_t i = 0; i < rows_.size(); ++i) r.rows_[i] &= other.rows_[i];
    return r;
  }

  // this ; other  (first this, then other)
  Relation compose(const Relation& other) const {
    const std::size_t n = rows_.size();
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (auto k = rows_[i].find_first(); k != WorldSet::npos; k = rows_[i].find_next(k))
        r.rows_[i] |= other.rows_[k];
    return r;
  }

  // Reflexive-transitive closure by squaring until nothing changes.
  Relation star() const {
    Relation r = unite(identity(rows_.size()));
    while (true) {
      Relation sq = r.compose(r);
      if (sq == r) return r;
      r = std::move(sq);
    }
  }

  // {w | some successor of w lies in s}
  WorldSet preimage_some(const WorldSet& s) const {
    WorldSet out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i].intersects(s)) out.set(i);
    return out;
  }

  // {w | every successor of w lies in s}
  WorldSet preimage_all(const WorldSet& s) const {
    WorldSet out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i].is_subset_of(s)) out.set(i);
    return out;
  }

  bool is_subset_of(const Relation& other) const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!rows_[i].is_subset_of(other.rows_[i])) return false;
    return true;
  }

  friend bool operator==(const Relation& a, const Relation& b) { return a.rows_ == b.rows_; }
  friend bool operator!=(const Relation& a, const Relation& b) { return !(a == b); }

 private:
  std::vector<WorldSet> rows_;
};

}  // namespace fourdl
