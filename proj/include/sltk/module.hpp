#pragma once

#include "sltk/lattice.hpp"

namespace sltk {

inline bool same_lattice(const LatticePtr& a, const LatticePtr& b) {
  return a == b || (a && b && a->same_structure(*b));
}

// Module over a finite locale B: a sup-lattice M with action B x M -> M.
struct Module {
  LocalePtr B;
  LatticePtr M;
  std::vector<elem> act;  // act[b * |M| + m]

  elem operator()(elem b, elem m) const { return act[b * M->size() + m]; }
  std::size_t size() const { return M->size(); }
};

inline Verdict check_module(const Module& mod) {
  const auto& B = *mod.B;
  const auto& M = *mod.M;
  if (mod.act.size() != B.size() * M.size()) throw Error(Errc::DomainMismatch, "action-shape", "table size");
  for (elem b = 0; b < B.size(); ++b) {
    if (mod(b, M.bottom()) != M.bottom())
      return Verdict::fail("action-bottom-right", "(" + B.name(b) + ",⊥)");
    for (elem m = 0; m < M.size(); ++m)
      for (elem j : M.irreducibles())
        if (mod(b, M.join(m, j)) != M.join(mod(b, m), mod(b, j)))
          return Verdict::fail("action-join-right", "(" + B.name(b) + "," + M.name(m) + "," + M.name(j) + ")");
  }
  for (elem m = 0; m < M.size(); ++m) {
    if (mod(B.bottom(), m) != M.bottom()) return Verdict::fail("action-bottom-left", "(⊥," + M.name(m) + ")");
    if (mod(B.top(), m) != m) return Verdict::fail("action-unit", M.name(m));
    for (elem b = 0; b < B.size(); ++b)
      for (elem c = 0; c < B.size(); ++c) {
        if (mod(B.join(b, c), m) != M.join(mod(b, m), mod(c, m)))
          return Verdict::fail("action-join-left", "(" + B.name(b) + "," + B.name(c) + "," + M.name(m) + ")");
        if (mod(B.meet(b, c), m) != mod(b, mod(c, m)))
          return Verdict::fail("action-meet", "(" + B.name(b) + "," + B.name(c) + "," + M.name(m) + ")");
      }
  }
  return Verdict::pass();
}

inline Module self_module(const LocalePtr& B) {
  Module m{B, B, std::vector<elem>(B->size() * B->size())};
  for (elem a = 0; a < B->size(); ++a)
    for (elem b = 0; b < B->size(); ++b) m.act[a * B->size() + b] = B->meet(a, b);
  return m;
}

// A sup-lattice as a module over TWO.
inline Module omega_module(const LatticePtr& M) {
  Module m{two(), M, std::vector<elem>(2 * M->size())};
  for (elem x = 0; x < M->size(); ++x) {
    m.act[x] = M->bottom();
    m.act[M->size() + x] = x;
  }
  return m;
}

inline Verdict check_module_morphism(const SupMap& f, const Module& dom, const Module& cod) {
  if (auto v = check_sup_morphism(f); !v) return v;
  for (elem b = 0; b < dom.B->size(); ++b)
    for (elem m = 0; m < dom.size(); ++m)
      if (f(dom(b, m)) != cod(b, f(m)))
        return Verdict::fail("module-linear", "(" + dom.B->name(b) + "," + dom.M->name(m) + ")");
  return Verdict::pass();
}

// Two commuting actions of B; `left` is the t-side, `right` the s-side.
struct Bimodule {
  LocalePtr B;
  LatticePtr M;
  std::vector<elem> left, right;  // [b * |M| + m]

  elem l(elem b, elem m) const { return left[b * M->size() + m]; }
  elem r(elem m, elem b) const { return right[b * M->size() + m]; }
  Module left_module() const { return {B, M, left}; }
  Module right_module() const { return {B, M, right}; }
};

inline Verdict check_bimodule(const Bimodule& bm) {
  if (auto v = check_module(bm.left_module()); !v) return {false, "left." + v.check, v.witness};
  if (auto v = check_module(bm.right_module()); !v) return {false, "right." + v.check, v.witness};
  for (elem a = 0; a < bm.B->size(); ++a)
    for (elem b = 0; b < bm.B->size(); ++b)
      for (elem m = 0; m < bm.M->size(); ++m)
        if (bm.l(a, bm.r(m, b)) != bm.r(bm.l(a, m), b))
          return Verdict::fail("actions-commute", "(" + bm.B->name(a) + "," + bm.M->name(m) + "," + bm.B->name(b) + ")");
  return Verdict::pass();
}

// --------------------------------------------------------- free modules

struct PowerLocale {
  LocalePtr P;
  std::vector<elem> singleton;
};

inline PowerLocale power_locale(std::size_t n) {
  PowerLocale p{powerset(n), {}};
  for (std::size_t x = 0; x < n; ++x) p.singleton.push_back(static_cast<elem>(1U << x));
  return p;
}

// H^X with the pointwise order; elements encoded in mixed radix |H|.
struct FunctionLattice {
  LocalePtr H;
  std::size_t X = 0;
  LocalePtr carrier;
  Module module;
  std::vector<elem> singleton;

  elem value(elem theta, std::size_t x) const {
    for (std::size_t i = 0; i < x; ++i) theta /= static_cast<elem>(H->size());
    return theta % static_cast<elem>(H->size());
  }
  std::vector<elem> decode(elem theta) const {
    std::vector<elem> v(X);
    for (std::size_t i = 0; i < X; ++i) {
      v[i] = theta % static_cast<elem>(H->size());
      theta /= static_cast<elem>(H->size());
    }
    return v;
  }
  elem encode(const std::vector<elem>& v) const {
    elem t = 0;
    for (std::size_t i = X; i-- > 0;) t = t * static_cast<elem>(H->size()) + v[i];
    return t;
  }
};

inline FunctionLattice function_lattice(const LocalePtr& H, std::size_t X) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < X; ++i) n *= H->size();
  FunctionLattice F;
  F.H = H;
  F.X = X;
  std::vector<std::vector<elem>> vals(n);
  std::vector<std::string> names(n);
  for (elem t = 0; t < n; ++t) {
    elem r = t;
    vals[t].resize(X);
    std::string nm = "(";
    for (std::size_t i = 0; i < X; ++i) {
      vals[t][i] = r % static_cast<elem>(H->size());
      r /= static_cast<elem>(H->size());
      nm += (i ? "," : "") + H->name(vals[t][i]);
    }
    names[t] = nm + ")";
  }
  F.carrier = as_locale(lattice_from_order(
      names,
      [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < X; ++i)
          if (!H->leq(vals[a][i], vals[b][i])) return false;
        return true;
      },
      true));
  F.module = Module{H, F.carrier, std::vector<elem>(H->size() * n)};
  for (elem a = 0; a < H->size(); ++a)
    for (elem t = 0; t < n; ++t) {
      std::vector<elem> v(X);
      for (std::size_t i = 0; i < X; ++i) v[i] = H->meet(a, vals[t][i]);
      F.module.act[a * n + t] = F.encode(v);
    }
  for (std::size_t x = 0; x < X; ++x) {
    std::vector<elem> v(X, H->bottom());
    v[x] = H->top();
    F.singleton.push_back(F.encode(v));
  }
  return F;
}

// theta |-> \/_x theta(x) . f(x); verified to be a module map extending f.
inline SupMap extend_to_free(const FunctionLattice& F, const Module& M, const std::vector<elem>& f) {
  if (!same_lattice(F.H, M.B)) throw Error(Errc::DomainMismatch, "extend-base", "module base differs from H");
  if (f.size() != F.X) throw Error(Errc::DomainMismatch, "extend-shape", "map size");
  if (auto v = check_module(M); !v) throw Error(Errc::NotAModule, v.check, v.witness);
  SupMap g{F.carrier, M.M, std::vector<elem>(F.carrier->size())};
  for (elem t = 0; t < F.carrier->size(); ++t) {
    elem acc = M.M->bottom();
    for (std::size_t x = 0; x < F.X; ++x) acc = M.M->join(acc, M(F.value(t, x), f[x]));
    g.table[t] = acc;
  }
  if (auto v = check_module_morphism(g, F.module, M); !v) throw Error(Errc::NotAModule, v.check, v.witness);
  for (std::size_t x = 0; x < F.X; ++x)
    if (g(F.singleton[x]) != f[x]) throw Error(Errc::NotAModule, "extension-property", std::to_string(x));
  return g;
}

struct PresentedMorphism {
  Verdict condition_i, condition_ii;
  SupMap extension;
  Verdict preserves_top, preserves_meet;
};

// `L` is an H-locale: a locale carrying an H-action a.l = phi(a) /\ l.
inline PresentedMorphism analyze_presented_morphism(const FunctionLattice& F, const Module& L,
                                                   const std::vector<elem>& f) {
  auto Lp = require_locale(L.M, "presented-codomain");
  PresentedMorphism r;
  r.extension = extend_to_free(F, L, f);
  if (Lp->join_all(f) != Lp->top()) r.condition_i = Verdict::fail("condition-i", "join of images is not top");
  for (std::size_t x = 0; x < F.X && r.condition_ii.ok; ++x)
    for (std::size_t y = x + 1; y < F.X; ++y)
      if (Lp->meet(f[x], f[y]) != Lp->bottom()) {
        r.condition_ii = Verdict::fail("condition-ii", "(" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ")");
        break;
      }
  const auto& H = *F.carrier;
  if (r.extension(H.top()) != Lp->top()) r.preserves_top = Verdict::fail("preserves-top", H.name(H.top()));
  for (elem a = 0; a < H.size() && r.preserves_meet.ok; ++a)
    for (elem b = a + 1; b < H.size(); ++b)
      if (r.extension(H.meet(a, b)) != Lp->meet(r.extension(a), r.extension(b))) {
        r.preserves_meet = Verdict::fail("preserves-meet", "(" + H.name(a) + "," + H.name(b) + ")");
        break;
      }
  return r;
}

inline SupMap presented_locale_morphism(const FunctionLattice& F, const Module& L, const std::vector<elem>& f) {
  auto r = analyze_presented_morphism(F, L, f);
  if (!r.condition_i) throw Error(Errc::ConditionIFails, r.condition_i.check, r.condition_i.witness);
  if (!r.condition_ii) throw Error(Errc::ConditionIIFails, r.condition_ii.check, r.condition_ii.witness);
  if (auto v = check_locale_morphism(r.extension); !v) throw Error(Errc::ValidationError, v.check, v.witness);
  return r.extension;
}

// The H-locale structure on a locale L induced by a locale morphism phi: H -> L.
inline Module locale_algebra(const LocalePtr& H, const LocalePtr& L, const std::vector<elem>& phi) {
  Module m{H, L, std::vector<elem>(H->size() * L->size())};
  for (elem a = 0; a < H->size(); ++a)
    for (elem x = 0; x < L->size(); ++x) m.act[a * L->size() + x] = L->meet(phi[a], x);
  return m;
}

}  // namespace sltk
