#pragma once

#include "sltk/cones.hpp"

namespace sltk {

// ------------------------------------------------------------ fiber functors

// A functor from a generating graph of arrows into dualizable B-modules.
// Composites need not be listed: their coend relations follow from the
// relations of the factors.
struct FiberFunctor {
  struct Arrow {
    std::size_t src = 0, dst = 0;
    SupMap map;  // T(src).M -> T(dst).M
    std::string name;
  };
  // T(lhs) (x)_B T(rhs) ~ T(obj) on join-irreducibles, tables indexed by
  // elements [m * |rhs| + n] and read only at irreducible pairs.
  struct Product {
    std::size_t lhs = 0, rhs = 0, obj = 0;
    std::vector<elem> left, right;
  };
  // T(obj) ~ B, elementwise for M and Mdual.
  struct Unit {
    std::size_t obj = 0;
    std::vector<elem> left, right;
  };
  // T(X^) ~ T(X)^: to_obj sends Mdual_X into M_{X^}, to_dual sends M_X into Mdual_{X^}.
  struct Dual {
    std::size_t dual = 0;
    SupMap to_obj, to_dual;
  };

  LocalePtr B;
  std::vector<std::string> names;
  std::vector<DualityData> obj;
  std::vector<Arrow> arrows;
  std::vector<Product> products;
  std::optional<Unit> unit;
  std::vector<std::optional<Dual>> duals;  // empty or one per object

  std::size_t size() const { return obj.size(); }
};
using FiberPtr = std::shared_ptr<const FiberFunctor>;

inline Verdict check_fiber_functor(const FiberFunctor& T) {
  for (std::size_t c = 0; c < T.size(); ++c) {
    if (!same_lattice(T.obj[c].M.B, T.B)) throw Error(Errc::DomainMismatch, "fiber-base", T.names[c]);
    if (auto v = check_duality(T.obj[c]); !v) return Verdict::fail(v.check, T.names[c] + ": " + v.witness);
  }
  for (const auto& a : T.arrows) {
    if (a.src >= T.size() || a.dst >= T.size()) throw Error(Errc::ShapeMismatch, "fiber-arrow", a.name);
    if (!same_lattice(a.map.dom, T.obj[a.src].M.M) || !same_lattice(a.map.cod, T.obj[a.dst].M.M))
      throw Error(Errc::ShapeMismatch, "fiber-arrow", a.name);
    if (auto v = check_module_morphism(a.map, T.obj[a.src].M, T.obj[a.dst].M); !v) return Verdict::fail(v.check, a.name + ": " + v.witness);
  }
  return Verdict::pass();
}

// ------------------------------------------------------------------ coend

// Nat^(F, G): the free sup-lattice on the summands F C (x) G C^ modulo, for
// each arrow f: C -> D and irreducibles a, k, the identification
// [C, a, G(f)^(k)] = [D, F(f)(a), k].
struct Coend {
  FiberPtr F, G;
  std::vector<std::shared_ptr<const CompactTensor>> summand;
  std::vector<std::size_t> offset;
  PresentedPtr q;
  LatticePtr L;
  Bimodule bimodule;              // left via F C, right via G C^
  std::vector<elem> generator;    // class of each generator in L
  std::vector<std::size_t> owner; // summand of each generator

  std::size_t generators() const { return owner.size(); }

  Bits global(std::size_t c, const Bits& local) const {
    Bits out(owner.size());
    for_each_bit(local, [&](std::size_t g) { out.set(offset[c] + g); });
    return out;
  }
  Bits bits(std::size_t c, elem m, elem n) const { return global(c, summand[c]->pure({m, n})); }
  // lambda_C(m, n) as an element of L.
  elem lambda(std::size_t c, elem m, elem n) const { return q->index_of(bits(c, m, n)); }
  // (a, k) of a generator.
  std::pair<elem, elem> split(std::size_t g) const {
    auto t = summand[owner[g]]->decode(g - offset[owner[g]]);
    return {t[0], t[1]};
  }
  std::vector<elem> lambda_table(std::size_t c) const {
    const auto& M = *F->obj[c].M.M;
    const auto& N = *G->obj[c].Mdual.M;
    std::vector<elem> t(M.size() * N.size());
    for (elem m = 0; m < M.size(); ++m)
      for (elem n = 0; n < N.size(); ++n) t[m * N.size() + n] = lambda(c, m, n);
    return t;
  }
};

namespace detail {
inline SupMap induced_table(const PresentedPtr& q, const LatticePtr& cod, std::vector<elem> assign, const std::string& what) {
  if (auto v = respects_relations(*q, *cod, assign); !v) throw Error(Errc::RelationViolated, what, v.witness);
  return InducedMorphism{q, cod, std::move(assign)}.table();
}
}  // namespace detail

inline Coend nat_predual(const FiberPtr& F, const FiberPtr& G) {
  if (F->size() != G->size() || !same_lattice(F->B, G->B)) throw Error(Errc::ShapeMismatch, "nat-predual", "functors differ in shape");
  for (std::size_t c = 0; c < G->size(); ++c)
    if (auto v = check_duality(G->obj[c]); !v) throw Error(Errc::NotDualizable, v.check, G->names[c]);
  Coend out;
  out.F = F;
  out.G = G;
  std::size_t total = 0;
  for (std::size_t c = 0; c < F->size(); ++c) {
    const auto& Mc = F->obj[c].M;
    const auto& Nc = G->obj[c].Mdual;
    out.summand.push_back(std::make_shared<const CompactTensor>(
        nullptr, std::vector<TensorFactor>{{Mc.M, Mc.act, {}}, {Nc.M, {}, Nc.act}}, 0));
    out.offset.push_back(total);
    total += out.summand.back()->generators();
    out.owner.resize(total, c);
  }
  JoinPresentation p;
  p.gens = total;
  auto shift = [&](std::size_t c, const std::vector<std::uint32_t>& v) {
    std::vector<std::uint32_t> w(v);
    for (auto& g : w) g += static_cast<std::uint32_t>(out.offset[c]);
    return w;
  };
  auto members = [](const Bits& b) {
    std::vector<std::uint32_t> v;
    for_each_bit(b, [&](std::size_t g) { v.push_back(static_cast<std::uint32_t>(g)); });
    return v;
  };
  for (std::size_t c = 0; c < F->size(); ++c)
    for (const auto& [s, t] : out.summand[c]->presentation().presentation().relations) p.relate(shift(c, s), shift(c, t));
  if (F->arrows.size() != G->arrows.size()) throw Error(Errc::ShapeMismatch, "nat-predual", "arrow lists differ");
  for (std::size_t i = 0; i < F->arrows.size(); ++i) {
    const auto& fa = F->arrows[i];
    const auto& ga = G->arrows[i];
    if (fa.src != ga.src || fa.dst != ga.dst) throw Error(Errc::ShapeMismatch, "nat-predual", fa.name);
    auto gdual = dual_morphism(ga.map, G->obj[ga.src], G->obj[ga.dst]);
    const auto& MC = *F->obj[fa.src].M.M;
    const auto& ND = *G->obj[fa.dst].Mdual.M;
    for (elem a : MC.irreducibles())
      for (elem k : ND.irreducibles())
        p.relate(members(out.bits(fa.src, a, gdual(k))), members(out.bits(fa.dst, fa.map(a), k)));
  }
  out.q = quotient(std::move(p));
  out.L = out.q->lattice();
  out.generator.resize(total);
  for (std::size_t g = 0; g < total; ++g) out.generator[g] = out.q->generator_element(g);
  const auto& B = *F->B;
  const std::size_t nL = out.L->size();
  out.bimodule = Bimodule{F->B, out.L, std::vector<elem>(B.size() * nL), std::vector<elem>(B.size() * nL)};
  for (elem b = 0; b < B.size(); ++b) {
    std::vector<elem> la(total), ra(total);
    for (std::size_t g = 0; g < total; ++g) {
      const std::size_t c = out.owner[g];
      auto [a, k] = out.split(g);
      la[g] = out.lambda(c, F->obj[c].M(b, a), k);
      ra[g] = out.lambda(c, a, G->obj[c].Mdual(b, k));
    }
    auto lt = detail::induced_table(out.q, out.L, std::move(la), "left-action");
    auto rt = detail::induced_table(out.q, out.L, std::move(ra), "right-action");
    std::copy(lt.table.begin(), lt.table.end(), out.bimodule.left.begin() + b * nL);
    std::copy(rt.table.begin(), rt.table.end(), out.bimodule.right.begin() + b * nL);
  }
  return out;
}

// Coevaluation rho_C: F C -> Nat^(F,G) (x)_B G C.
inline Coaction coevaluation(const Coend& L, std::size_t c) {
  auto LM = std::make_shared<const CompactTensor>(
      L.F->B, std::vector<TensorFactor>{TensorFactor::of(L.bimodule), TensorFactor::of(L.G->obj[c].M)}, 0);
  return lambda_to_rho(L.lambda_table(c), L.F->obj[c].M.size(), L.G->obj[c], std::move(LM));
}

// ------------------------------------------------------------ cogebroides

// B acts on L on the left via t and on the right via s.
struct Cogebroide {
  LocalePtr B;
  Bimodule L;
  std::shared_ptr<const CompactTensor> LL;  // L (x)_B L, materialized
  SupMap c;                                 // L -> LL
  SupMap e;                                 // L -> B

  LatticePtr carrier() const { return L.M; }
  const Bits& cbits(elem x) const { return LL->presentation().element(c(x)); }
};

inline std::shared_ptr<const CompactTensor> tensor_square(const Bimodule& L) {
  return std::make_shared<const CompactTensor>(L.B, std::vector<TensorFactor>{TensorFactor::of(L), TensorFactor::of(L)},
                                               PresentedSupLattice::kDefaultCap);
}

// c[C, a, k] = \/_{(p,q) in eta_C} [C, a, p] (x) [C, q, k]; e[C, a, k] = eps_C(a, k).
inline Cogebroide end_wedge(const Coend& L) {
  if (L.F != L.G) throw Error(Errc::ShapeMismatch, "end-wedge", "needs Nat^(T, T)");
  Cogebroide out{L.F->B, L.bimodule, tensor_square(L.bimodule), {}, {}};
  const auto& LL = *out.LL;
  std::vector<elem> ca(L.generators()), ea(L.generators());
  for (std::size_t g = 0; g < L.generators(); ++g) {
    const std::size_t c = L.owner[g];
    const auto& d = L.F->obj[c];
    auto [a, k] = L.split(g);
    Bits acc(LL.generators());
    for (auto [p, q] : d.eta) acc |= LL.pure({L.lambda(c, a, p), L.lambda(c, q, k)});
    ca[g] = LL.presentation().index_of(acc);
    ea[g] = d.epsilon(a, k);
  }
  out.c = detail::induced_table(L.q, LL.presentation().lattice(), std::move(ca), "cocomposition");
  out.e = detail::induced_table(L.q, L.F->B, std::move(ea), "counit");
  return out;
}

namespace detail {
// (c (x) L) and (L (x) c) applied to a set of generators of L (x)_B L.
inline Bits expand(const Cogebroide& cg, const CompactTensor& LLL, const Bits& s, bool left) {
  Bits out(LLL.generators());
  for_each_bit(s, [&](std::size_t g) {
    auto t = cg.LL->decode(g);
    for_each_bit(cg.cbits(left ? t[0] : t[1]), [&](std::size_t h) {
      auto u = cg.LL->decode(h);
      out |= left ? LLL.pure({u[0], u[1], t[1]}) : LLL.pure({t[0], u[0], u[1]});
    });
  });
  return out;
}
}  // namespace detail

inline Verdict check_cogebroide(const Cogebroide& cg) {
  const auto& L = *cg.L.M;
  const auto& B = *cg.B;
  const auto& LL = *cg.LL;
  if (auto v = check_bimodule(cg.L); !v) return v;
  for (elem x = 0; x < L.size(); ++x)
    for (elem b = 0; b < B.size(); ++b) {
      if (cg.c(cg.L.l(b, x)) != LL.presentation().index_of(LL.act_left(b, cg.cbits(x))))
        return Verdict::fail("c-left-linear", "(" + B.name(b) + "," + L.name(x) + ")");
      if (cg.c(cg.L.r(x, b)) != LL.presentation().index_of(LL.act_right(cg.cbits(x), b)))
        return Verdict::fail("c-right-linear", "(" + L.name(x) + "," + B.name(b) + ")");
      if (cg.e(cg.L.l(b, x)) != B.meet(b, cg.e(x)) || cg.e(cg.L.r(x, b)) != B.meet(cg.e(x), b))
        return Verdict::fail("e-linear", "(" + B.name(b) + "," + L.name(x) + ")");
    }
  for (elem x = 0; x < L.size(); ++x) {
    elem lhs = L.bottom(), rhs = L.bottom();
    for_each_bit(cg.cbits(x), [&](std::size_t g) {
      auto t = LL.decode(g);
      lhs = L.join(lhs, cg.L.l(cg.e(t[0]), t[1]));
      rhs = L.join(rhs, cg.L.r(t[0], cg.e(t[1])));
    });
    if (lhs != x) return Verdict::fail("counit-left", L.name(x));
    if (rhs != x) return Verdict::fail("counit-right", L.name(x));
  }
  CompactTensor LLL(cg.B, {TensorFactor::of(cg.L), TensorFactor::of(cg.L), TensorFactor::of(cg.L)}, 0);
  for (elem x : L.irreducibles()) {
    const auto& cx = cg.cbits(x);
    if (!LLL.equal(detail::expand(cg, LLL, cx, true), detail::expand(cg, LLL, cx, false)))
      return Verdict::fail("coassociativity", L.name(x));
  }
  return Verdict::pass();
}

// ------------------------------------------------------------ Hopf structure

struct HopfAlgebroid {
  Cogebroide cog;
  std::vector<elem> m;  // [x * |L| + y]
  std::vector<elem> u;  // [b * |B| + b']
  SupMap a;
  SupMap s, t;          // B -> L

  const SupLattice& L() const { return *cog.L.M; }
  elem mul(elem x, elem y) const { return m[x * L().size() + y]; }
  elem unit(elem b, elem b2) const { return u[b * cog.B->size() + b2]; }
};

// m[C, a, a'][D, b, b'] = [C x D, a (x) b, a' (x) b'], u = lambda_1 and
// a[X, a, k] = [X^, k, a], computed over the objects whose pairwise products
// are declared.
inline HopfAlgebroid hopf_structure(const Coend& L, const Cogebroide& cog) {
  const auto& T = *L.F;
  const auto& Lat = *L.L;
  const auto& B = *T.B;
  const std::size_t nL = Lat.size();
  if (!T.unit) throw Error(Errc::NoProducts, "hopf-unit", "no unit object");
  if (T.duals.size() != T.size()) throw Error(Errc::NoDuals, "hopf-antipode", "duals not declared");
  std::map<std::pair<std::size_t, std::size_t>, const FiberFunctor::Product*> prod;
  for (const auto& p : T.products) prod[{p.lhs, p.rhs}] = &p;
  // Drop objects with the most undeclared products until the rest is closed.
  std::vector<bool> span(T.size(), true);
  for (;;) {
    std::size_t worst = T.size(), worst_missing = 0;
    for (std::size_t c = 0; c < T.size(); ++c) {
      if (!span[c]) continue;
      std::size_t missing = 0;
      for (std::size_t d = 0; d < T.size(); ++d) missing += span[d] && (!prod.count({c, d}) || !prod.count({d, c}));
      if (missing >= worst_missing && missing > 0) {
        worst = c;
        worst_missing = missing;
      }
    }
    if (worst == T.size()) break;
    span[worst] = false;
  }
  std::vector<std::size_t> sg;
  for (std::size_t g = 0; g < L.generators(); ++g)
    if (span[L.owner[g]]) sg.push_back(g);
  for (elem x = 0; x < nL; ++x) {
    elem acc = Lat.bottom();
    for (auto g : sg)
      if (Lat.leq(L.generator[g], x)) acc = Lat.join(acc, L.generator[g]);
    if (acc != x) throw Error(Errc::NoProducts, "hopf-multiplication", "objects with products do not generate " + Lat.name(x));
  }
  auto mgen = [&](std::size_t g, std::size_t h) {
    const std::size_t c = L.owner[g], d = L.owner[h];
    const auto& P = *prod.at({c, d});
    auto [a, a2] = L.split(g);
    auto [b, b2] = L.split(h);
    const std::size_t nd = T.obj[d].M.size(), ndd = T.obj[d].Mdual.size();
    return L.lambda(P.obj, P.left[a * nd + b], P.right[a2 * ndd + b2]);
  };
  const std::size_t ns = sg.size();
  std::vector<elem> mg(ns * ns);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j) mg[i * ns + j] = mgen(sg[i], sg[j]);
  HopfAlgebroid H{cog, std::vector<elem>(nL * nL), std::vector<elem>(B.size() * B.size()), {}, {}, {}};
  for (elem x = 0; x < nL; ++x)
    for (elem y = 0; y < nL; ++y) {
      elem acc = Lat.bottom();
      for (std::size_t i = 0; i < ns; ++i) {
        if (!Lat.leq(L.generator[sg[i]], x)) continue;
        for (std::size_t j = 0; j < ns; ++j)
          if (Lat.leq(L.generator[sg[j]], y)) acc = Lat.join(acc, mg[i * ns + j]);
      }
      H.m[x * nL + y] = acc;
    }
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j)
      if (H.mul(L.generator[sg[i]], L.generator[sg[j]]) != mg[i * ns + j])
        throw Error(Errc::RelationViolated, "multiplication-well-defined", pair_witness(sg[i], sg[j]));
  const auto& U = *T.unit;
  for (elem b = 0; b < B.size(); ++b)
    for (elem b2 = 0; b2 < B.size(); ++b2) H.u[b * B.size() + b2] = L.lambda(U.obj, U.left[b], U.right[b2]);
  std::vector<elem> aa(L.generators());
  for (std::size_t g = 0; g < L.generators(); ++g) {
    const std::size_t c = L.owner[g];
    if (!T.duals[c]) throw Error(Errc::NoDuals, "hopf-antipode", T.names[c]);
    const auto& D = *T.duals[c];
    auto [a, k] = L.split(g);
    aa[g] = L.lambda(D.dual, D.to_obj(k), D.to_dual(a));
  }
  H.a = detail::induced_table(L.q, L.L, std::move(aa), "antipode");
  H.s = SupMap{T.B, L.L, std::vector<elem>(B.size())};
  H.t = SupMap{T.B, L.L, std::vector<elem>(B.size())};
  for (elem b = 0; b < B.size(); ++b) {
    H.t.table[b] = cog.L.l(b, Lat.top());
    H.s.table[b] = cog.L.r(Lat.top(), b);
  }
  return H;
}

inline Verdict check_hopf(const HopfAlgebroid& H) {
  if (auto v = check_cogebroide(H.cog); !v) return v;
  const auto& L = H.L();
  const auto& B = *H.cog.B;
  const auto& bm = H.cog.L;
  const std::size_t n = L.size();
  for (elem x = 0; x < n; ++x)
    for (elem y = 0; y < n; ++y) {
      if (H.mul(x, y) != H.mul(y, x)) return Verdict::fail("m-commutative", pair_witness(x, y));
      for (elem z = 0; z < n; ++z) {
        if (H.mul(H.mul(x, y), z) != H.mul(x, H.mul(y, z))) return Verdict::fail("m-associative", triple_witness(x, y, z));
        if (H.mul(x, L.join(y, z)) != L.join(H.mul(x, y), H.mul(x, z))) return Verdict::fail("m-bilinear", triple_witness(x, y, z));
      }
      for (elem b = 0; b < B.size(); ++b) {
        if (H.mul(bm.l(b, x), y) != bm.l(b, H.mul(x, y)) || H.mul(x, bm.l(b, y)) != bm.l(b, H.mul(x, y)))
          return Verdict::fail("m-balanced-left", triple_witness(b, x, y));
        if (H.mul(bm.r(x, b), y) != bm.r(H.mul(x, y), b) || H.mul(x, bm.r(y, b)) != bm.r(H.mul(x, y), b))
          return Verdict::fail("m-balanced-right", triple_witness(b, x, y));
      }
    }
  const elem one = H.unit(B.top(), B.top());
  for (elem x = 0; x < n; ++x)
    if (H.mul(one, x) != x) return Verdict::fail("m-unit", L.name(x));
  for (elem b = 0; b < B.size(); ++b)
    for (elem b2 = 0; b2 < B.size(); ++b2)
      if (H.unit(b, b2) != H.mul(H.t(b), H.s(b2))) return Verdict::fail("u-source-target", pair_witness(b, b2));
  for (elem x = 0; x < n; ++x)
    if (H.a(H.a(x)) != x) return Verdict::fail("antipode-involution", L.name(x));
  for (elem b = 0; b < B.size(); ++b)
    if (H.a(H.t(b)) != H.s(b) || H.a(H.s(b)) != H.t(b)) return Verdict::fail("antipode-exchange", B.name(b));
  for (elem x = 0; x < n; ++x) {
    elem l = L.bottom(), r = L.bottom();
    for_each_bit(H.cog.cbits(x), [&](std::size_t g) {
      auto t = H.cog.LL->decode(g);
      l = L.join(l, H.mul(t[0], H.a(t[1])));
      r = L.join(r, H.mul(H.a(t[0]), t[1]));
    });
    if (l != H.t(H.cog.e(x))) return Verdict::fail("antipode-pentagon-target", L.name(x));
    if (r != H.s(H.cog.e(x))) return Verdict::fail("antipode-pentagon-source", L.name(x));
  }
  return Verdict::pass();
}

// ------------------------------------------------------------ comodules

struct ComoduleReport {
  Verdict c1, c2;
  bool ok() const { return c1.ok && c2.ok; }
};

// rho: M -> L (x)_B M stored in a compact tensor {L, M}.
inline ComoduleReport check_comodule(const Cogebroide& cg, const DualityData& dM, const Coaction& rho) {
  const auto& M = *dM.M.M;
  const auto& LM = *rho.LM;
  if (rho.value.size() != M.size()) throw Error(Errc::ShapeMismatch, "comodule", "coaction size");
  CompactTensor LLM(cg.B, {TensorFactor::of(cg.L), TensorFactor::of(cg.L), TensorFactor::of(dM.M)}, 0);
  ComoduleReport rep;
  for (elem x = 0; x < M.size() && rep.c1.ok; ++x) {
    Bits lhs(LLM.generators()), rhs(LLM.generators());
    for_each_bit(rho.value[x], [&](std::size_t g) {
      auto t = LM.decode(g);
      for_each_bit(cg.cbits(t[0]), [&](std::size_t h) {
        auto u = cg.LL->decode(h);
        lhs |= LLM.pure({u[0], u[1], t[1]});
      });
      for_each_bit(rho.value[t[1]], [&](std::size_t h) {
        auto u = LM.decode(h);
        rhs |= LLM.pure({t[0], u[0], u[1]});
      });
    });
    if (!LLM.equal(lhs, rhs)) rep.c1 = Verdict::fail("C1", M.name(x));
  }
  for (elem x = 0; x < M.size(); ++x) {
    elem acc = M.bottom();
    for_each_bit(rho.value[x], [&](std::size_t g) {
      auto t = LM.decode(g);
      acc = M.join(acc, dM.M(cg.e(t[0]), t[1]));
    });
    if (acc != x) {
      rep.c2 = Verdict::fail("C2", M.name(x));
      break;
    }
  }
  return rep;
}

// B1 and B2 for lambda: M x Mdual -> L ([m * |Mdual| + n]).
inline ComoduleReport check_b1b2(const Cogebroide& cg, const DualityData& dM, const std::vector<elem>& lambda) {
  const auto& M = *dM.M.M;
  const auto& N = *dM.Mdual.M;
  const auto& LL = *cg.LL;
  ComoduleReport rep;
  auto lam = [&](elem m, elem n) { return lambda[m * N.size() + n]; };
  for (elem a : M.irreducibles()) {
    for (elem k : N.irreducibles()) {
      Bits acc(LL.generators());
      for (auto [p, q] : dM.eta) acc |= LL.pure({lam(a, p), lam(q, k)});
      if (!LL.equal(acc, cg.cbits(lam(a, k)))) {
        rep.c1 = Verdict::fail("B1", "(" + M.name(a) + "," + N.name(k) + ")");
        break;
      }
    }
    if (!rep.c1.ok) break;
  }
  for (elem a : M.irreducibles())
    for (elem k : N.irreducibles())
      if (rep.c2.ok && cg.e(lam(a, k)) != dM.epsilon(a, k)) rep.c2 = Verdict::fail("B2", "(" + M.name(a) + "," + N.name(k) + ")");
  return rep;
}

// f: M -> M' commutes with the coactions; both sides preserve joins, so
// irreducibles of M suffice.
inline Verdict check_comodule_morphism(const SupMap& f, const Coaction& rho, const Coaction& rho2) {
  const auto& LM2 = *rho2.LM;
  for (elem x : f.dom->irreducibles()) {
    Bits img = rho.LM->map_into(LM2, {nullptr, &f}, rho.value[x]);
    if (!LM2.equal(img, rho2.value[f(x)])) return Verdict::fail("comodule-morphism", f.dom->name(x));
  }
  return Verdict::pass();
}

// The lift of T through the forgetful functor Cmd_0(L) -> (B-Mod)_0.
struct Lifting {
  std::vector<Coaction> rho;
  std::vector<ComoduleReport> objects;
  std::vector<Verdict> arrows;
  bool ok() const {
    for (auto& r : objects)
      if (!r.ok()) return false;
    for (auto& v : arrows)
      if (!v.ok) return false;
    return true;
  }
};

inline Lifting lifting(const Coend& L, const Cogebroide& cg) {
  const auto& T = *L.F;
  Lifting out;
  for (std::size_t c = 0; c < T.size(); ++c) {
    out.rho.push_back(coevaluation(L, c));
    out.objects.push_back(check_comodule(cg, T.obj[c], out.rho.back()));
  }
  for (const auto& a : T.arrows) out.arrows.push_back(check_comodule_morphism(a.map, out.rho[a.src], out.rho[a.dst]));
  return out;
}

}  // namespace sltk
