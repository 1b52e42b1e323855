#pragma once

#include "sltk/core.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sltk {

// Finite lattice with all joins. The order is kept as up-sets; join and meet
// tables are materialized so every downstream query is a lookup.
class SupLattice {
 public:
  static constexpr std::size_t kTableCap = 2048;

  virtual ~SupLattice() = default;

  // `leq` lists pairs (a, b) with a <= b; the reflexive-transitive closure is taken.
  static SupLattice from_pairs(std::vector<std::string> names,
                               const std::vector<std::pair<elem, elem>>& leq) {
    const std::size_t n = names.size();
    std::vector<Bits> up(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) up[i].set(i);
    for (auto [a, b] : leq) {
      if (a >= n || b >= n) throw Error(Errc::DomainMismatch, "order-pair", "index out of range");
      up[a].set(b);
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (up[i][k]) up[i] |= up[k];
    return SupLattice(std::move(names), std::move(up));
  }

  // `up[i]` must already be reflexive and transitive.
  static SupLattice from_up_sets(std::vector<std::string> names, std::vector<Bits> up) {
    return SupLattice(std::move(names), std::move(up));
  }

  std::size_t size() const { return n_; }
  const std::string& name(elem a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  elem find(std::string_view nm) const {
    for (elem i = 0; i < n_; ++i)
      if (names_[i] == nm) return i;
    return no_elem;
  }

  elem bottom() const { return bot_; }
  elem top() const { return top_; }
  bool leq(elem a, elem b) const { return up_[a][b]; }
  elem join(elem a, elem b) const { return join_[a * n_ + b]; }
  elem meet(elem a, elem b) const { return meet_[a * n_ + b]; }
  const Bits& up_set(elem a) const { return up_[a]; }
  const Bits& down_set(elem a) const { return down_[a]; }

  template <class Range>
  elem join_all(const Range& r) const {
    elem acc = bot_;
    for (auto x : r) acc = join(acc, static_cast<elem>(x));
    return acc;
  }
  template <class Range>
  elem meet_all(const Range& r) const {
    elem acc = top_;
    for (auto x : r) acc = meet(acc, static_cast<elem>(x));
    return acc;
  }

  // Elements in a linear extension of the order (bottom first).
  const std::vector<elem>& linear_order() const { return order_; }
  const std::vector<elem>& irreducibles() const { return irr_; }
  bool is_irreducible(elem a) const { return irr_flag_[a]; }
  // Join-irreducibles below `a`; their join is `a`.
  const std::vector<elem>& irreducibles_below(elem a) const { return irr_below_[a]; }
  // Elements covered by `a`.
  std::vector<elem> lower_covers(elem a) const {
    std::vector<elem> out;
    for (elem b = 0; b < n_; ++b) {
      if (b == a || !leq(b, a)) continue;
      bool cover = true;
      for (elem c = 0; c < n_ && cover; ++c)
        if (c != a && c != b && leq(b, c) && leq(c, a)) cover = false;
      if (cover) out.push_back(b);
    }
    return out;
  }

  bool same_structure(const SupLattice& o) const {
    return n_ == o.n_ && up_ == o.up_;
  }

  // Finite frame law: a /\ (y \/ z) = (a /\ y) \/ (a /\ z); first violation in index order.
  Verdict frame_law() const {
    for (elem a = 0; a < n_; ++a)
      for (elem y = 0; y < n_; ++y)
        for (elem z = 0; z < n_; ++z)
          if (meet(a, join(y, z)) != join(meet(a, y), meet(a, z)))
            return Verdict::fail("frame-law", "(" + names_[a] + "," + names_[y] + "," + names_[z] + ")");
    return Verdict::pass();
  }

 protected:
  SupLattice(std::vector<std::string> names, std::vector<Bits> up) : n_(names.size()), names_(std::move(names)), up_(std::move(up)) {
    build();
  }

 private:
  void build() {
    const std::size_t n = n_;
    if (n == 0) throw Error(Errc::MissingJoin, "bottom-exists", "{}");
    if (n > kTableCap) throw Error(Errc::CapExceeded, "lattice-table-cap", std::to_string(n));
    {
      std::unordered_map<std::string, int> seen;
      for (auto& s : names_)
        if (++seen[s] > 1) throw Error(Errc::ValidationError, "distinct-elements", s);
    }
    down_.assign(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (up_[i].size() != n) throw Error(Errc::DomainMismatch, "order-shape", names_[i]);
      for_each_bit(up_[i], [&](std::size_t j) { down_[j].set(i); });
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!up_[i][i]) throw Error(Errc::NotAPartialOrder, "reflexivity", names_[i]);
      for (std::size_t j = 0; j < n; ++j) {
        if (up_[i][j] && !up_[j].is_subset_of(up_[i]))
          throw Error(Errc::NotAPartialOrder, "transitivity", "(" + names_[i] + "," + names_[j] + ")");
        if (i < j && up_[i][j] && up_[j][i])
          throw Error(Errc::NotAPartialOrder, "antisymmetry", "(" + names_[i] + "," + names_[j] + ")");
      }
    }
    // Linear extension: strictly smaller elements have strictly smaller down-sets.
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<std::size_t> dcount(n);
    for (std::size_t i = 0; i < n; ++i) dcount[i] = down_[i].count();
    std::stable_sort(order_.begin(), order_.end(), [&](elem a, elem b) { return dcount[a] < dcount[b]; });
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[order_[k]] = k;
    // Up-sets indexed by position, down-sets by reversed position.
    std::vector<Bits> upT(n, Bits(n)), downR(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) {
      for_each_bit(up_[i], [&](std::size_t j) { upT[i].set(pos[j]); });
      for_each_bit(down_[i], [&](std::size_t j) { downR[i].set(n - 1 - pos[j]); });
    }
    bot_ = no_elem;
    top_ = no_elem;
    for (std::size_t i = 0; i < n; ++i) {
      if (up_[i].count() == n) bot_ = static_cast<elem>(i);
      if (down_[i].count() == n) top_ = static_cast<elem>(i);
    }
    if (bot_ == no_elem) throw Error(Errc::MissingJoin, "bottom-exists", "{}");
    join_.assign(n * n, 0);
    meet_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        Bits ub = upT[a] & upT[b];
        auto p = ub.find_first();
        if (p == Bits::npos || !ub.is_subset_of(upT[order_[p]]))
          throw Error(Errc::MissingJoin, "binary-join", "{" + names_[a] + "," + names_[b] + "}");
        join_[a * n + b] = join_[b * n + a] = order_[p];
        Bits lb = downR[a] & downR[b];
        auto q = lb.find_first();
        elem m = order_[n - 1 - q];
        if (!lb.is_subset_of(downR[m]))
          throw Error(Errc::MissingJoin, "binary-meet", "{" + names_[a] + "," + names_[b] + "}");
        meet_[a * n + b] = meet_[b * n + a] = m;
      }
    }
    irr_flag_.assign(n, false);
    irr_.clear();
    for (elem k : order_) {
      if (k == bot_) continue;
      elem acc = bot_;
      for_each_bit(down_[k], [&](std::size_t j) {
        if (j != k) acc = join(acc, static_cast<elem>(j));
      });
      if (acc != k) {
        irr_flag_[k] = true;
        irr_.push_back(k);
      }
    }
    irr_below_.assign(n, {});
    for (std::size_t a = 0; a < n; ++a)
      for (elem j : irr_)
        if (leq(j, static_cast<elem>(a))) irr_below_[a].push_back(j);
  }

  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<Bits> up_, down_;
  std::vector<elem> order_;
  elem bot_ = 0, top_ = 0;
  std::vector<elem> join_, meet_;
  std::vector<elem> irr_;
  std::vector<bool> irr_flag_;
  std::vector<std::vector<elem>> irr_below_;
};

class Locale : public SupLattice {
 public:
  explicit Locale(SupLattice l) : SupLattice(std::move(l)) {
    if (auto v = frame_law(); !v) throw Error(Errc::NotALocale, v.check, v.witness);
  }

  // Heyting implication.
  elem implies(elem a, elem b) const {
    elem best = bottom();
    for (elem c = 0; c < size(); ++c)
      if (leq(meet(a, c), b)) best = join(best, c);
    return best;
  }
};

using LatticePtr = std::shared_ptr<const SupLattice>;
using LocalePtr = std::shared_ptr<const Locale>;

inline LocalePtr as_locale(const LatticePtr& l) { return std::dynamic_pointer_cast<const Locale>(l); }

inline LocalePtr require_locale(const LatticePtr& l, const char* what) {
  auto p = as_locale(l);
  if (!p) throw Error(Errc::NotALocale, what, "lattice is not a locale");
  return p;
}

inline Verdict is_frame(const SupLattice& l) { return l.frame_law(); }

// ---------------------------------------------------------------- factories

inline std::vector<std::string> index_names(std::size_t n, const std::string& prefix = "") {
  std::vector<std::string> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = prefix + std::to_string(i);
  return v;
}

inline LocalePtr chain(std::size_t n) {
  std::vector<std::pair<elem, elem>> p;
  for (elem i = 0; i + 1 < n; ++i) p.push_back({i, i + 1});
  return std::make_shared<const Locale>(SupLattice::from_pairs(index_names(n), p));
}

inline const LocalePtr& two() {
  static const LocalePtr t = chain(2);
  return t;
}

inline std::string subset_name(std::size_t mask, std::size_t k) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < k; ++i)
    if (mask >> i & 1U) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}

// Subsets of {1..k}; element index = bitmask.
inline LocalePtr powerset(std::size_t k) {
  const std::size_t n = std::size_t{1} << k;
  std::vector<std::string> names(n);
  std::vector<Bits> up(n, Bits(n));
  for (std::size_t a = 0; a < n; ++a) {
    names[a] = subset_name(a, k);
    for (std::size_t b = 0; b < n; ++b)
      if ((a & b) == a) up[a].set(b);
  }
  return std::make_shared<const Locale>(SupLattice::from_up_sets(std::move(names), std::move(up)));
}

inline LatticePtr m3() {
  return std::make_shared<const SupLattice>(SupLattice::from_pairs(
      {"0", "x", "y", "z", "1"}, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}));
}

inline LatticePtr n5() {
  return std::make_shared<const SupLattice>(
      SupLattice::from_pairs({"0", "a", "b", "c", "1"}, {{0, 1}, {1, 2}, {0, 3}, {2, 4}, {3, 4}}));
}

// Build the lattice of a finite poset given by a comparison function; validates.
template <class Leq>
LatticePtr lattice_from_order(std::vector<std::string> names, Leq&& le, bool locale) {
  const std::size_t n = names.size();
  std::vector<Bits> up(n, Bits(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (le(a, b)) up[a].set(b);
  auto l = SupLattice::from_up_sets(std::move(names), std::move(up));
  if (locale) return std::make_shared<const Locale>(std::move(l));
  return std::make_shared<const SupLattice>(std::move(l));
}

// ------------------------------------------------------------------ maps

struct SupMap {
  LatticePtr dom, cod;
  std::vector<elem> table;
  elem operator()(elem x) const { return table[x]; }
  bool operator==(const SupMap& o) const { return table == o.table; }
};

inline void check_shape(const SupMap& f) {
  if (!f.dom || !f.cod || f.table.size() != f.dom->size())
    throw Error(Errc::DomainMismatch, "map-shape", "table size differs from domain");
  for (elem v : f.table)
    if (v >= f.cod->size()) throw Error(Errc::DomainMismatch, "map-shape", "value out of range");
}

inline Verdict check_sup_morphism(const SupMap& f) {
  check_shape(f);
  const auto& A = *f.dom;
  const auto& B = *f.cod;
  if (f(A.bottom()) != B.bottom()) return Verdict::fail("preserves-bottom", A.name(A.bottom()));
  for (elem x = 0; x < A.size(); ++x)
    for (elem y = x + 1; y < A.size(); ++y)
      if (f(A.join(x, y)) != B.join(f(x), f(y)))
        return Verdict::fail("preserves-join", "(" + A.name(x) + "," + A.name(y) + ")");
  return Verdict::pass();
}

inline Verdict check_locale_morphism(const SupMap& f) {
  check_shape(f);
  require_locale(f.dom, "locale-morphism-domain");
  require_locale(f.cod, "locale-morphism-codomain");
  if (auto v = check_sup_morphism(f); !v) return v;
  const auto& A = *f.dom;
  const auto& B = *f.cod;
  if (f(A.top()) != B.top()) return Verdict::fail("preserves-top", A.name(A.top()));
  for (elem x = 0; x < A.size(); ++x)
    for (elem y = x + 1; y < A.size(); ++y)
      if (f(A.meet(x, y)) != B.meet(f(x), f(y)))
        return Verdict::fail("preserves-meet", "(" + A.name(x) + "," + A.name(y) + ")");
  return Verdict::pass();
}

inline SupMap identity_map(const LatticePtr& L) {
  SupMap f{L, L, std::vector<elem>(L->size())};
  std::iota(f.table.begin(), f.table.end(), 0);
  return f;
}

inline SupMap compose(const SupMap& g, const SupMap& f) {
  if (f.cod->size() != g.dom->size()) throw Error(Errc::DomainMismatch, "compose", "codomain/domain");
  SupMap h{f.dom, g.cod, std::vector<elem>(f.dom->size())};
  for (elem x = 0; x < f.dom->size(); ++x) h.table[x] = g(f(x));
  return h;
}

inline bool is_bijective(const SupMap& f) {
  if (f.dom->size() != f.cod->size()) return false;
  std::vector<bool> hit(f.cod->size(), false);
  for (elem v : f.table) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

// Locale morphisms H -> TWO, one per prime filter; candidates are principal
// up-sets and each is verified.
inline std::vector<SupMap> points(const LocalePtr& H) {
  std::vector<SupMap> out;
  for (elem p = 0; p < H->size(); ++p) {
    SupMap f{H, two(), std::vector<elem>(H->size())};
    for (elem x = 0; x < H->size(); ++x) f.table[x] = H->leq(p, x) ? 1 : 0;
    if (check_locale_morphism(f)) out.push_back(std::move(f));
  }
  return out;
}

// ------------------------------------------------------------ isomorphisms

// Calls `cb(table)` for every order isomorphism A -> B; stops when cb returns false.
inline void for_each_isomorphism(const SupLattice& A, const SupLattice& B,
                                 const std::function<bool(const std::vector<elem>&)>& cb) {
  const std::size_t n = A.size();
  if (n != B.size()) return;
  std::vector<std::size_t> ua(n), da(n), ub(n), db(n);
  for (elem i = 0; i < n; ++i) {
    ua[i] = A.up_set(i).count();
    da[i] = A.down_set(i).count();
    ub[i] = B.up_set(i).count();
    db[i] = B.down_set(i).count();
  }
  const auto& ord = A.linear_order();
  std::vector<elem> map(n, no_elem);
  std::vector<bool> used(n, false);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (stop) return;
    if (k == n) {
      if (!cb(map)) stop = true;
      return;
    }
    elem a = ord[k];
    for (elem b = 0; b < n && !stop; ++b) {
      if (used[b] || ua[a] != ub[b] || da[a] != db[b]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        elem c = ord[i];
        if (A.leq(c, a) != B.leq(map[c], b) || A.leq(a, c) != B.leq(b, map[c])) ok = false;
      }
      if (!ok) continue;
      map[a] = b;
      used[b] = true;
      rec(k + 1);
      used[b] = false;
      map[a] = no_elem;
    }
  };
  rec(0);
}

inline std::optional<std::vector<elem>> find_isomorphism(const SupLattice& A, const SupLattice& B) {
  std::optional<std::vector<elem>> out;
  for_each_isomorphism(A, B, [&](const std::vector<elem>& m) {
    out = m;
    return false;
  });
  return out;
}

// All distributive lattices with at most `max_size` elements, one per
// isomorphism class. Built as down-set lattices of finite posets.
inline std::vector<LocalePtr> enumerate_distributive_lattices(std::size_t max_size) {
  std::vector<LocalePtr> out;
  auto add_unique = [&](LocalePtr L) {
    for (auto& o : out)
      if (o->size() == L->size() && find_isomorphism(*o, *L)) return;
    out.push_back(std::move(L));
  };
  // A poset on k points as `below[i]` masks (strictly below), naturally labelled.
  std::function<void(std::vector<std::uint32_t>&)> rec = [&](std::vector<std::uint32_t>& below) {
    const std::size_t k = below.size();
    std::vector<std::uint32_t> downs;
    for (std::uint32_t s = 0; s < (1U << k); ++s) {
      bool closed = true;
      for (std::size_t i = 0; i < k && closed; ++i)
        if ((s >> i & 1U) && (below[i] & ~s)) closed = false;
      if (closed) downs.push_back(s);
      if (downs.size() > max_size) return;
    }
    std::vector<std::string> names;
    for (auto s : downs) names.push_back(subset_name(s, k));
    auto L = lattice_from_order(names, [&](std::size_t a, std::size_t b) { return (downs[a] & downs[b]) == downs[a]; }, true);
    add_unique(as_locale(L));
    // New maximal element k over a down-closed set of existing points.
    for (auto s : downs) {
      below.push_back(s);
      rec(below);
      below.pop_back();
    }
  };
  std::vector<std::uint32_t> start;
  rec(start);
  std::stable_sort(out.begin(), out.end(), [](const LocalePtr& a, const LocalePtr& b) { return a->size() < b->size(); });
  return out;
}

}  // namespace sltk
