#pragma once

#include "sltk/module.hpp"

#include <deque>
#include <unordered_map>

namespace sltk {

// Generators 0..gens-1; each relation asserts \/S = \/T.
struct JoinPresentation {
  std::size_t gens = 0;
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> relations;

  void relate(std::vector<std::uint32_t> s, std::vector<std::uint32_t> t) {
    relations.emplace_back(std::move(s), std::move(t));
  }
};

// Least closure operator making every relation hold: for (S,T) the closed sets
// are those containing T whenever they contain S, and conversely.
class ClosureOperator {
 public:
  ClosureOperator() = default;
  explicit ClosureOperator(const JoinPresentation& p) : n_(p.gens), axioms_(p.gens) {
    std::vector<std::vector<std::uint32_t>> prem, concl;
    auto add = [&](std::vector<std::uint32_t> s, const std::vector<std::uint32_t>& t) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      std::vector<std::uint32_t> c;
      for (auto g : t)
        if (!std::binary_search(s.begin(), s.end(), g)) c.push_back(g);
      if (c.empty()) return;
      for (auto g : s)
        if (g >= n_) throw Error(Errc::DomainMismatch, "relation-generator", std::to_string(g));
      for (auto g : c)
        if (g >= n_) throw Error(Errc::DomainMismatch, "relation-generator", std::to_string(g));
      if (s.empty()) {
        for (auto g : c) axioms_.set(g);
        return;
      }
      prem.push_back(std::move(s));
      concl.push_back(std::move(c));
    };
    for (auto& [s, t] : p.relations) {
      add(s, t);
      add(t, s);
    }
    const std::size_t m = prem.size();
    count_.resize(m);
    concl_off_.assign(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
      count_[i] = static_cast<std::uint32_t>(prem[i].size());
      concl_off_[i + 1] = concl_off_[i] + static_cast<std::uint32_t>(concl[i].size());
    }
    concl_.reserve(concl_off_[m]);
    for (auto& c : concl) concl_.insert(concl_.end(), c.begin(), c.end());
    occ_off_.assign(n_ + 1, 0);
    for (auto& s : prem)
      for (auto g : s) ++occ_off_[g + 1];
    for (std::size_t g = 0; g < n_; ++g) occ_off_[g + 1] += occ_off_[g];
    occ_.resize(occ_off_[n_]);
    std::vector<std::uint32_t> fill(occ_off_.begin(), occ_off_.end() - 1);
    for (std::uint32_t i = 0; i < m; ++i)
      for (auto g : prem[i]) occ_[fill[g]++] = i;
  }

  std::size_t generators() const { return n_; }
  std::size_t implications() const { return count_.size(); }

  Bits operator()(const Bits& in) const {
    Bits out(in);
    out |= axioms_;
    std::vector<std::uint32_t> cnt(count_);
    std::vector<std::uint32_t> stack;
    for_each_bit(out, [&](std::size_t g) { stack.push_back(static_cast<std::uint32_t>(g)); });
    while (!stack.empty()) {
      auto g = stack.back();
      stack.pop_back();
      for (auto k = occ_off_[g]; k < occ_off_[g + 1]; ++k) {
        auto i = occ_[k];
        if (--cnt[i] == 0)
          for (auto c = concl_off_[i]; c < concl_off_[i + 1]; ++c) {
            auto h = concl_[c];
            if (!out[h]) {
              out.set(h);
              stack.push_back(h);
            }
          }
      }
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  Bits axioms_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> concl_off_, concl_;
  std::vector<std::uint32_t> occ_off_, occ_;
};

// Closed subsets of the generators ordered by inclusion. Materialized when the
// number of closed sets stays under `cap`; otherwise queries go through closure.
class PresentedSupLattice {
 public:
  static constexpr std::size_t kDefaultCap = std::size_t{1} << 16;

  explicit PresentedSupLattice(JoinPresentation p, std::size_t cap = kDefaultCap)
      : pres_(std::move(p)), close_(pres_) {
    if (cap > 0) materialize(cap);
  }

  const JoinPresentation& presentation() const { return pres_; }
  std::size_t generators() const { return pres_.gens; }
  Bits empty_set() const { return Bits(pres_.gens); }
  Bits closure(const Bits& s) const { return close_(s); }
  Bits generator(std::size_t g) const {
    Bits b(pres_.gens);
    b.set(g);
    return close_(b);
  }
  bool equal(const Bits& a, const Bits& b) const { return close_(a) == close_(b); }
  bool leq(const Bits& a, const Bits& b) const { return a.is_subset_of(close_(b)); }

  bool materialized() const { return materialized_; }
  std::size_t size() const {
    require();
    return elems_.size();
  }
  const Bits& element(elem i) const {
    require();
    return elems_[i];
  }
  elem index_of_closed(const Bits& s) const {
    require();
    auto it = index_.find(s);
    return it == index_.end() ? no_elem : it->second;
  }
  elem index_of(const Bits& s) const { return index_of_closed(close_(s)); }
  elem generator_element(std::size_t g) const { return index_of_closed(generator(g)); }

  // Table lattice, built on first use when the carrier is small enough.
  LatticePtr lattice() const {
    require();
    if (!lattice_) {
      const std::size_t n = elems_.size();
      std::vector<Bits> up(n, Bits(n));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (elems_[a].is_subset_of(elems_[b])) up[a].set(b);
      lattice_ = std::make_shared<const SupLattice>(SupLattice::from_up_sets(index_names(n, "q"), std::move(up)));
    }
    return lattice_;
  }

  // Closure sanity: extensive, idempotent, and relations collapse.
  Verdict check_closure() const {
    for (std::size_t i = 0; i < pres_.relations.size(); ++i) {
      auto& [s, t] = pres_.relations[i];
      if (close_(to_bits(s)) != close_(to_bits(t))) return Verdict::fail("relation-collapses", std::to_string(i));
    }
    if (materialized_)
      for (auto& e : elems_)
        if (close_(e) != e) return Verdict::fail("closure-idempotent", "");
    return Verdict::pass();
  }

  Bits to_bits(const std::vector<std::uint32_t>& gs) const {
    Bits b(pres_.gens);
    for (auto g : gs) b.set(g);
    return b;
  }

 private:
  void require() const {
    if (!materialized_) throw Error(Errc::CapExceeded, "presented-carrier", "carrier not materialized");
  }

  void materialize(std::size_t cap) {
    std::vector<Bits> gens;
    std::vector<std::size_t> rep;
    {
      std::unordered_map<Bits, std::size_t, BitsHash> seen;
      Bits bot = close_(Bits(pres_.gens));
      for (std::size_t g = 0; g < pres_.gens; ++g) {
        if (bot[g]) continue;
        Bits c = generator(g);
        if (seen.emplace(c, g).second) {
          gens.push_back(std::move(c));
          rep.push_back(g);
        }
      }
      elems_.push_back(bot);
      index_.emplace(bot, 0);
    }
    for (std::size_t k = 0; k < elems_.size(); ++k) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (elems_[k][rep[i]]) continue;
        Bits v = close_(elems_[k] | gens[i]);
        if (index_.emplace(v, static_cast<elem>(elems_.size())).second) {
          elems_.push_back(std::move(v));
          if (elems_.size() > cap) {
            elems_.clear();
            index_.clear();
            return;
          }
        }
      }
    }
    materialized_ = true;
  }

  JoinPresentation pres_;
  ClosureOperator close_;
  bool materialized_ = false;
  std::vector<Bits> elems_;
  std::unordered_map<Bits, elem, BitsHash> index_;
  mutable LatticePtr lattice_;
};

using PresentedPtr = std::shared_ptr<const PresentedSupLattice>;

// Sup-map out of a presented lattice, determined by its values on generators.
struct InducedMorphism {
  PresentedPtr q;
  LatticePtr cod;
  std::vector<elem> assign;

  elem apply(const Bits& s) const {
    elem acc = cod->bottom();
    for_each_bit(s, [&](std::size_t g) { acc = cod->join(acc, assign[g]); });
    return acc;
  }
  // Table on the materialized carrier.
  SupMap table() const {
    SupMap f{q->lattice(), cod, std::vector<elem>(q->size())};
    for (elem i = 0; i < q->size(); ++i) f.table[i] = apply(q->element(i));
    return f;
  }
};

inline Verdict respects_relations(const PresentedSupLattice& q, const SupLattice& M, const std::vector<elem>& assign) {
  if (assign.size() != q.generators()) throw Error(Errc::DomainMismatch, "assign-shape", "generator count");
  const auto& rel = q.presentation().relations;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    elem a = M.bottom(), b = M.bottom();
    for (auto g : rel[i].first) a = M.join(a, assign[g]);
    for (auto g : rel[i].second) b = M.join(b, assign[g]);
    if (a != b) return Verdict::fail("relation-respected", "relation " + std::to_string(i));
  }
  return Verdict::pass();
}

inline InducedMorphism induced_morphism(const PresentedPtr& q, const LatticePtr& M, std::vector<elem> assign) {
  if (auto v = respects_relations(*q, *M, assign); !v) throw Error(Errc::RelationViolated, v.check, v.witness);
  return InducedMorphism{q, M, std::move(assign)};
}

inline PresentedPtr quotient(JoinPresentation p, std::size_t cap = PresentedSupLattice::kDefaultCap) {
  return std::make_shared<const PresentedSupLattice>(std::move(p), cap);
}

// ------------------------------------------------------------ tensors

// Full presentation of M (x)_B N: generators M x N, binary join relations in
// each slot with a join-irreducible second summand, nullary relations, and the
// balance (m.b, n) ~ (m, b.n) for b join-irreducible in B.
struct TensorProduct {
  LatticePtr M, N;
  LocalePtr B;
  PresentedPtr q;

  std::uint32_t gen(elem m, elem n) const { return static_cast<std::uint32_t>(m * N->size() + n); }
  std::pair<elem, elem> split(std::size_t g) const {
    return {static_cast<elem>(g / N->size()), static_cast<elem>(g % N->size())};
  }
  Bits pure(elem m, elem n) const {
    Bits b(q->generators());
    b.set(gen(m, n));
    return b;
  }
};

inline JoinPresentation tensor_presentation(const SupLattice& M, const SupLattice& N) {
  JoinPresentation p;
  p.gens = M.size() * N.size();
  auto g = [&](elem m, elem n) { return static_cast<std::uint32_t>(m * N.size() + n); };
  for (elem n = 0; n < N.size(); ++n) p.relate({g(M.bottom(), n)}, {});
  for (elem m = 0; m < M.size(); ++m) p.relate({g(m, N.bottom())}, {});
  for (elem n = 0; n < N.size(); ++n)
    for (elem m = 0; m < M.size(); ++m)
      for (elem j : M.irreducibles()) p.relate({g(M.join(m, j), n)}, {g(m, n), g(j, n)});
  for (elem m = 0; m < M.size(); ++m)
    for (elem n = 0; n < N.size(); ++n)
      for (elem j : N.irreducibles()) p.relate({g(m, N.join(n, j))}, {g(m, n), g(m, j)});
  return p;
}

inline TensorProduct tensor(const LatticePtr& M, const LatticePtr& N, std::size_t cap = PresentedSupLattice::kDefaultCap) {
  return {M, N, nullptr, quotient(tensor_presentation(*M, *N), cap)};
}

// `Mr` acts on the right factor side of M, `Nl` on N.
inline TensorProduct tensor_over(const Module& Mr, const Module& Nl, std::size_t cap = PresentedSupLattice::kDefaultCap) {
  if (!same_lattice(Mr.B, Nl.B)) throw Error(Errc::DomainMismatch, "tensor-base", "different base locales");
  if (auto v = check_module(Mr); !v) throw Error(Errc::NotAModule, v.check, v.witness);
  if (auto v = check_module(Nl); !v) throw Error(Errc::NotAModule, v.check, v.witness);
  const auto& M = *Mr.M;
  const auto& N = *Nl.M;
  auto p = tensor_presentation(M, N);
  auto g = [&](elem m, elem n) { return static_cast<std::uint32_t>(m * N.size() + n); };
  for (elem b : Mr.B->irreducibles())
    for (elem m = 0; m < M.size(); ++m)
      for (elem n = 0; n < N.size(); ++n) p.relate({g(Mr(b, m), n)}, {g(m, Nl(b, n))});
  return {Mr.M, Nl.M, Mr.B, quotient(std::move(p), cap)};
}

// One factor of a compact tensor: the lattice plus the actions used to balance
// against its neighbours (or, at the ends, the outer actions).
struct TensorFactor {
  LatticePtr M;
  std::vector<elem> left;   // [b * |M| + m], optional
  std::vector<elem> right;  // [b * |M| + m], optional

  static TensorFactor plain(LatticePtr M) { return {std::move(M), {}, {}}; }
  static TensorFactor of(const Module& m) { return {m.M, m.act, m.act}; }
  static TensorFactor of(const Bimodule& m) { return {m.M, m.left, m.right}; }
};

// M_1 (x)_B ... (x)_B M_k on tuples of join-irreducibles. Down-closure, the
// non-distributive join relations and the balance relations between adjacent
// factors give a presentation equivalent to the full one.
class CompactTensor {
 public:
  CompactTensor(LocalePtr B, std::vector<TensorFactor> factors, std::size_t cap = 0)
      : B_(std::move(B)), f_(std::move(factors)) {
    const std::size_t k = f_.size();
    pos_.resize(k);
    stride_.assign(k, 1);
    std::size_t total = 1;
    for (std::size_t i = k; i-- > 0;) {
      const auto& irr = f_[i].M->irreducibles();
      pos_[i].assign(f_[i].M->size(), no_elem);
      for (std::size_t a = 0; a < irr.size(); ++a) pos_[i][irr[a]] = static_cast<elem>(a);
      stride_[i] = total;
      total *= irr.size();
    }
    gens_ = total;
    JoinPresentation p;
    p.gens = total;
    build_relations(p);
    q_ = quotient(std::move(p), cap);
  }

  const PresentedSupLattice& presentation() const { return *q_; }
  const PresentedPtr& presented() const { return q_; }
  std::size_t generators() const { return gens_; }
  std::size_t factors() const { return f_.size(); }
  const TensorFactor& factor(std::size_t i) const { return f_[i]; }
  const LocalePtr& base() const { return B_; }

  std::vector<elem> decode(std::size_t g) const {
    std::vector<elem> t(f_.size());
    for (std::size_t i = 0; i < f_.size(); ++i) t[i] = f_[i].M->irreducibles()[(g / stride_[i]) % irr_count(i)];
    return t;
  }
  std::size_t encode(const std::vector<elem>& irr) const {
    std::size_t g = 0;
    for (std::size_t i = 0; i < f_.size(); ++i) g += pos_[i][irr[i]] * stride_[i];
    return g;
  }

  // m_1 (x) ... (x) m_k as a (not necessarily closed) set of generators.
  Bits pure(const std::vector<elem>& ms) const {
    Bits b(gens_);
    std::vector<elem> t(f_.size());
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t acc) {
      if (i == f_.size()) {
        b.set(acc);
        return;
      }
      for (elem j : f_[i].M->irreducibles_below(ms[i])) rec(i + 1, acc + pos_[i][j] * stride_[i]);
    };
    rec(0, 0);
    return b;
  }

  Bits closure(const Bits& s) const { return q_->closure(s); }
  bool equal(const Bits& a, const Bits& b) const { return q_->equal(a, b); }

  // Outer actions on the first and last factor.
  Bits act_left(elem b, const Bits& s) const { return act_slot(0, f_[0].left, b, s); }
  Bits act_right(const Bits& s, elem b) const { return act_slot(f_.size() - 1, f_.back().right, b, s); }

  // Apply sup-maps slotwise; `maps[i]` sends factor i into `target.factor(i)`.
  Bits map_into(const CompactTensor& target, const std::vector<const SupMap*>& maps, const Bits& s) const {
    Bits out(target.generators());
    for_each_bit(s, [&](std::size_t g) {
      auto t = decode(g);
      for (std::size_t i = 0; i < t.size(); ++i)
        if (maps[i]) t[i] = (*maps[i])(t[i]);
      out |= target.pure(t);
    });
    return out;
  }

 private:
  std::size_t irr_count(std::size_t i) const { return f_[i].M->irreducibles().size(); }

  Bits act_slot(std::size_t slot, const std::vector<elem>& act, elem b, const Bits& s) const {
    if (act.empty()) throw Error(Errc::NotAModule, "tensor-outer-action", "factor has no action");
    const std::size_t n = f_[slot].M->size();
    Bits out(gens_);
    for_each_bit(s, [&](std::size_t g) {
      auto t = decode(g);
      t[slot] = act[b * n + t[slot]];
      out |= pure(t);
    });
    return closure(out);
  }

  // Enumerate all generator indices with slot i (and optionally i+1) left free.
  template <class F>
  void for_each_context(std::size_t skip_from, std::size_t skip_to, F&& f) const {
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t acc) {
      if (i == f_.size()) {
        f(acc);
        return;
      }
      if (i >= skip_from && i <= skip_to) {
        rec(i + 1, acc);
        return;
      }
      for (std::size_t a = 0; a < irr_count(i); ++a) rec(i + 1, acc + a * stride_[i]);
    };
    rec(0, 0);
  }

  void build_relations(JoinPresentation& p) const {
    const std::size_t k = f_.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto& M = *f_[i].M;
      const auto& irr = M.irreducibles();
      auto slot_down = [&](elem m, std::size_t ctx) {
        std::vector<std::uint32_t> v;
        for (elem j : M.irreducibles_below(m)) v.push_back(static_cast<std::uint32_t>(ctx + pos_[i][j] * stride_[i]));
        return v;
      };
      // Down-closure along lower covers among irreducibles.
      for (elem j : irr)
        for (elem jj : irr)
          if (jj != j && M.leq(jj, j)) {
            for_each_context(i, i, [&](std::size_t ctx) {
              p.relate({static_cast<std::uint32_t>(ctx + pos_[i][j] * stride_[i])},
                       {static_cast<std::uint32_t>(ctx + pos_[i][j] * stride_[i]),
                        static_cast<std::uint32_t>(ctx + pos_[i][jj] * stride_[i])});
            });
          }
      // j <= m \/ j' with j below neither: D(m) u D(j') forces j.
      for (elem m = 0; m < M.size(); ++m)
        for (elem j2 : irr) {
          if (M.leq(j2, m)) continue;
          elem mj = M.join(m, j2);
          for (elem j : M.irreducibles_below(mj)) {
            if (M.leq(j, m) || M.leq(j, j2)) continue;
            for_each_context(i, i, [&](std::size_t ctx) {
              auto s = slot_down(m, ctx);
              auto extra = slot_down(j2, ctx);
              s.insert(s.end(), extra.begin(), extra.end());
              auto t = s;
              t.push_back(static_cast<std::uint32_t>(ctx + pos_[i][j] * stride_[i]));
              p.relate(std::move(s), std::move(t));
            });
          }
        }
    }
    if (!B_) return;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const auto& A = *f_[i].M;
      const auto& C = *f_[i + 1].M;
      const auto& ra = f_[i].right;
      const auto& lc = f_[i + 1].left;
      if (ra.empty() || lc.empty()) throw Error(Errc::NotAModule, "tensor-balance", "missing action");
      for (elem b : B_->irreducibles())
        for (elem j : A.irreducibles())
          for (elem kk : C.irreducibles()) {
            elem jb = ra[b * A.size() + j];
            elem bk = lc[b * C.size() + kk];
            for_each_context(i, i + 1, [&](std::size_t ctx) {
              std::vector<std::uint32_t> s, t;
              for (elem x : A.irreducibles_below(jb))
                s.push_back(static_cast<std::uint32_t>(ctx + pos_[i][x] * stride_[i] + pos_[i + 1][kk] * stride_[i + 1]));
              for (elem y : C.irreducibles_below(bk))
                t.push_back(static_cast<std::uint32_t>(ctx + pos_[i][j] * stride_[i] + pos_[i + 1][y] * stride_[i + 1]));
              p.relate(std::move(s), std::move(t));
            });
          }
    }
  }

  LocalePtr B_;
  std::vector<TensorFactor> f_;
  std::vector<std::vector<elem>> pos_;
  std::vector<std::size_t> stride_;
  std::size_t gens_ = 0;
  PresentedPtr q_;
};

}  // namespace sltk
