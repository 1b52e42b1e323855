#pragma once

#include "sltk/sheaf.hpp"
#include "sltk/tannaka.hpp"

#include <algorithm>
#include <set>

namespace sltk {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// ------------------------------------------------------------ groupoids

struct FiniteGroupoid {
  std::string name;
  std::size_t objects = 0;
  std::vector<std::string> names;      // per arrow
  std::vector<std::size_t> src, dst;   // d0, d1
  std::vector<std::size_t> unit;       // per object
  std::vector<std::size_t> comp;       // [g * |G| + f] = g o f when src(g) = dst(f), else npos
  std::vector<std::size_t> inv;

  std::size_t size() const { return src.size(); }
  std::size_t compose(std::size_t g, std::size_t f) const { return comp[g * size() + f]; }
  std::vector<std::size_t> hom(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < size(); ++g)
      if (src[g] == a && dst[g] == b) out.push_back(g);
    return out;
  }
  std::uint32_t into(std::size_t o) const {
    std::uint32_t m = 0;
    for (std::size_t g = 0; g < size(); ++g)
      if (dst[g] == o) m |= 1U << g;
    return m;
  }
  std::uint32_t out_of(std::size_t o) const {
    std::uint32_t m = 0;
    for (std::size_t g = 0; g < size(); ++g)
      if (src[g] == o) m |= 1U << g;
    return m;
  }
};
using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

inline Verdict check_groupoid(const FiniteGroupoid& G) {
  const std::size_t n = G.size();
  if (G.dst.size() != n || G.inv.size() != n || G.names.size() != n || G.comp.size() != n * n || G.unit.size() != G.objects)
    throw Error(Errc::NotAGroupoid, "groupoid-shape", G.name);
  for (std::size_t g = 0; g < n; ++g)
    if (G.src[g] >= G.objects || G.dst[g] >= G.objects) return Verdict::fail("arrow-endpoints", G.names[g]);
  for (std::size_t o = 0; o < G.objects; ++o)
    if (G.src[G.unit[o]] != o || G.dst[G.unit[o]] != o) return Verdict::fail("unit-endpoints", std::to_string(o));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) {
      const std::size_t h = G.compose(g, f);
      if ((G.src[g] == G.dst[f]) != (h != npos)) return Verdict::fail("composition-domain", G.names[g] + "." + G.names[f]);
      if (h != npos && (G.src[h] != G.src[f] || G.dst[h] != G.dst[g])) return Verdict::fail("composition-endpoints", G.names[g] + "." + G.names[f]);
    }
  for (std::size_t g = 0; g < n; ++g) {
    if (G.compose(G.unit[G.dst[g]], g) != g || G.compose(g, G.unit[G.src[g]]) != g) return Verdict::fail("unit-law", G.names[g]);
    const std::size_t i = G.inv[g];
    if (G.src[i] != G.dst[g] || G.compose(i, g) != G.unit[G.src[g]] || G.compose(g, i) != G.unit[G.dst[g]])
      return Verdict::fail("inverse", G.names[g]);
  }
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g = 0; g < n; ++g) {
      if (G.src[g] != G.dst[f]) continue;
      for (std::size_t h = 0; h < n; ++h)
        if (G.src[h] == G.dst[g] && G.compose(h, G.compose(g, f)) != G.compose(G.compose(h, g), f))
          return Verdict::fail("associativity", G.names[h] + "." + G.names[g] + "." + G.names[f]);
    }
  return Verdict::pass();
}

inline GroupoidPtr require_groupoid(FiniteGroupoid G) {
  if (G.size() > 12) throw Error(Errc::SizeBound, "groupoid-size", G.name);
  if (auto v = check_groupoid(G); !v) throw Error(Errc::NotAGroupoid, v.check, v.witness);
  return std::make_shared<const FiniteGroupoid>(std::move(G));
}

inline GroupoidPtr cyclic_group(std::size_t n) {
  FiniteGroupoid G;
  G.name = n == 1 ? "trivial" : "Z" + std::to_string(n);
  G.objects = 1;
  G.unit = {0};
  for (std::size_t g = 0; g < n; ++g) {
    G.names.push_back(g == 0 ? "e" : n == 2 ? "s" : "g" + std::to_string(g));
    G.src.push_back(0);
    G.dst.push_back(0);
    G.inv.push_back((n - g) % n);
  }
  G.comp.resize(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) G.comp[g * n + f] = (g + f) % n;
  return require_groupoid(std::move(G));
}

inline GroupoidPtr trivial_group() { return cyclic_group(1); }

// One arrow a -> b for every pair, index a * k + b.
inline GroupoidPtr codiscrete_groupoid(std::size_t k) {
  FiniteGroupoid G;
  G.name = "codiscrete" + std::to_string(k);
  G.objects = k;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      G.names.push_back(std::to_string(a) + ">" + std::to_string(b));
      G.src.push_back(a);
      G.dst.push_back(b);
      G.inv.push_back(b * k + a);
    }
  for (std::size_t a = 0; a < k; ++a) G.unit.push_back(a * k + a);
  const std::size_t n = k * k;
  G.comp.assign(n * n, npos);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f)
      if (G.src[g] == G.dst[f]) G.comp[g * n + f] = G.src[f] * k + G.dst[g];
  return require_groupoid(std::move(G));
}

inline GroupoidPtr discrete_groupoid(std::size_t k) {
  FiniteGroupoid G;
  G.name = "discrete" + std::to_string(k);
  G.objects = k;
  G.comp.assign(k * k, npos);
  for (std::size_t a = 0; a < k; ++a) {
    G.names.push_back("id" + std::to_string(a));
    G.src.push_back(a);
    G.dst.push_back(a);
    G.inv.push_back(a);
    G.unit.push_back(a);
    G.comp[a * k + a] = a;
  }
  return require_groupoid(std::move(G));
}

inline GroupoidPtr groupoid_fixture(const std::string& name) {
  if (name == "trivial") return trivial_group();
  if (name == "Z2") return cyclic_group(2);
  if (name == "Z3") return cyclic_group(3);
  if (name == "codiscrete2") return codiscrete_groupoid(2);
  if (name == "discrete2") return discrete_groupoid(2);
  throw Error(Errc::UnresolvedReference, "groupoid-fixture", name);
}

// ------------------------------------------------------------ actions

struct DiscreteAction {
  std::string name;
  std::vector<std::size_t> anchor;
  std::vector<std::size_t> act;  // [g * |X| + x], npos unless src(g) = anchor(x)

  std::size_t size() const { return anchor.size(); }
  std::size_t operator()(std::size_t g, std::size_t x) const { return act[g * size() + x]; }
};

inline Verdict check_action(const FiniteGroupoid& G, const DiscreteAction& A) {
  const std::size_t n = A.size();
  if (A.act.size() != G.size() * n) throw Error(Errc::NotAnAction, "action-shape", A.name);
  for (std::size_t x = 0; x < n; ++x)
    if (A.anchor[x] >= G.objects) return Verdict::fail("anchor-range", std::to_string(x));
  for (std::size_t g = 0; g < G.size(); ++g)
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t y = A(g, x);
      if ((G.src[g] == A.anchor[x]) != (y != npos)) return Verdict::fail("act-domain", G.names[g] + "." + std::to_string(x));
      if (y != npos && (y >= n || A.anchor[y] != G.dst[g])) return Verdict::fail("act-anchor", G.names[g] + "." + std::to_string(x));
    }
  for (std::size_t x = 0; x < n; ++x)
    if (A(G.unit[A.anchor[x]], x) != x) return Verdict::fail("A2", std::to_string(x));
  for (std::size_t g = 0; g < G.size(); ++g)
    for (std::size_t h = 0; h < G.size(); ++h) {
      const std::size_t hg = G.compose(h, g);
      if (hg == npos) continue;
      for (std::size_t x = 0; x < n; ++x)
        if (A.anchor[x] == G.src[g] && A(hg, x) != A(h, A(g, x))) return Verdict::fail("A1", G.names[h] + "." + G.names[g] + "." + std::to_string(x));
    }
  return Verdict::pass();
}

inline void require_action(const FiniteGroupoid& G, const DiscreteAction& A) {
  if (auto v = check_action(G, A); !v) throw Error(Errc::NotAnAction, v.check, A.name + " " + v.witness);
}

// Arrows out of o acted on by post-composition, anchored at their targets.
inline DiscreteAction regular_action(const FiniteGroupoid& G, std::size_t o) {
  DiscreteAction A;
  A.name = "R" + std::to_string(o);
  std::vector<std::size_t> pts, pos(G.size(), npos);
  for (std::size_t g = 0; g < G.size(); ++g)
    if (G.src[g] == o) {
      pos[g] = pts.size();
      pts.push_back(g);
      A.anchor.push_back(G.dst[g]);
    }
  A.act.assign(G.size() * pts.size(), npos);
  for (std::size_t h = 0; h < G.size(); ++h)
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (G.src[h] == G.dst[pts[i]]) A.act[h * pts.size() + i] = pos[G.compose(h, pts[i])];
  return A;
}

inline DiscreteAction terminal_action(const FiniteGroupoid& G) {
  DiscreteAction A;
  A.name = "1";
  for (std::size_t o = 0; o < G.objects; ++o) A.anchor.push_back(o);
  A.act.assign(G.size() * G.objects, npos);
  for (std::size_t g = 0; g < G.size(); ++g) A.act[g * G.objects + G.src[g]] = G.dst[g];
  return A;
}

// Fiber product over the objects; index[a * |B| + b] locates (a, b).
struct ProductAction {
  DiscreteAction action;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> index;
};

inline ProductAction product_action(const FiniteGroupoid& G, const DiscreteAction& A, const DiscreteAction& B) {
  ProductAction P;
  P.action.name = A.name + "x" + B.name;
  P.index.assign(A.size() * B.size(), npos);
  for (std::size_t a = 0; a < A.size(); ++a)
    for (std::size_t b = 0; b < B.size(); ++b)
      if (A.anchor[a] == B.anchor[b]) {
        P.index[a * B.size() + b] = P.pairs.size();
        P.pairs.push_back({a, b});
        P.action.anchor.push_back(A.anchor[a]);
      }
  const std::size_t n = P.pairs.size();
  P.action.act.assign(G.size() * n, npos);
  for (std::size_t g = 0; g < G.size(); ++g)
    for (std::size_t i = 0; i < n; ++i) {
      auto [a, b] = P.pairs[i];
      if (G.src[g] == A.anchor[a]) P.action.act[g * n + i] = P.index[A(g, a) * B.size() + B(g, b)];
    }
  return P;
}

inline DiscreteAction coproduct_action(const FiniteGroupoid& G, const DiscreteAction& A, const DiscreteAction& B) {
  DiscreteAction C;
  C.name = A.name + "+" + B.name;
  C.anchor = A.anchor;
  C.anchor.insert(C.anchor.end(), B.anchor.begin(), B.anchor.end());
  const std::size_t n = C.size();
  C.act.assign(G.size() * n, npos);
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t x = 0; x < A.size(); ++x) C.act[g * n + x] = A(g, x);
    for (std::size_t x = 0; x < B.size(); ++x)
      if (B(g, x) != npos) C.act[g * n + A.size() + x] = A.size() + B(g, x);
  }
  return C;
}

// Every action on the anchored set whose fiber over object o has fibers[o]
// points, points listed fiber by fiber.
inline std::vector<DiscreteAction> enumerate_actions(const FiniteGroupoid& G, const std::vector<std::size_t>& fibers) {
  DiscreteAction A;
  for (std::size_t o = 0; o < fibers.size(); ++o) A.anchor.insert(A.anchor.end(), fibers[o], o);
  const std::size_t n = A.size();
  A.act.assign(G.size() * n, npos);
  std::vector<std::vector<std::size_t>> fiber(G.objects);
  for (std::size_t x = 0; x < n; ++x) fiber[A.anchor[x]].push_back(x);
  for (std::size_t o = 0; o < G.objects; ++o)
    for (auto x : fiber[o]) A.act[G.unit[o] * n + x] = x;
  std::vector<std::size_t> free;
  for (std::size_t g = 0; g < G.size(); ++g)
    if (g != G.unit[G.src[g]] || G.src[g] != G.dst[g]) free.push_back(g);
  std::vector<DiscreteAction> out;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t k) {
    if (i == free.size()) {
      if (check_action(G, A)) out.push_back(A);
      return;
    }
    const std::size_t g = free[i];
    const auto& dom = fiber[G.src[g]];
    if (k == dom.size()) {
      rec(i + 1, 0);
      return;
    }
    for (auto y : fiber[G.dst[g]]) {
      A.act[g * n + dom[k]] = y;
      rec(i, k + 1);
    }
  };
  rec(0, 0);
  std::size_t c = 0;
  for (auto& a : out) a.name = "A" + std::to_string(c++);
  return out;
}

inline std::vector<std::vector<std::size_t>> fiber_vectors(std::size_t objects, std::size_t max_total) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> v(objects, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t o, std::size_t left) {
    if (o == objects) {
      out.push_back(v);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      v[o] = k;
      rec(o + 1, left - k);
    }
  };
  rec(0, max_total);
  return out;
}

inline bool actions_isomorphic(const FiniteGroupoid& G, const DiscreteAction& A, const DiscreteAction& B) {
  if (A.size() != B.size()) return false;
  std::vector<std::size_t> p(A.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t x = 0; x < A.size() && ok; ++x) ok = A.anchor[x] == B.anchor[p[x]];
    for (std::size_t g = 0; g < G.size() && ok; ++g)
      for (std::size_t x = 0; x < A.size() && ok; ++x)
        if (A(g, x) != npos) ok = p[A(g, x)] == B(g, p[x]);
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// ------------------------------------------------------- the canonical cone

// lambda_A(x, y) = {g : g . y = x} as a subset of the arrows.
inline LRelation action_lambda(const FiniteGroupoid& G, const DiscreteAction& A, const LocalePtr& L) {
  LRelation r(L, A.size(), A.size());
  for (std::size_t y = 0; y < A.size(); ++y)
    for (std::size_t g = 0; g < G.size(); ++g)
      if (A(g, y) != npos) r.at(A(g, y), y) |= static_cast<elem>(1U << g);
  return r;
}

// The four axioms over the split base: rows join to t(anchor x), columns to
// s(anchor y), distinct entries in a row or column are disjoint.
inline AxiomReport split_bijection(const Locale& H, const LRelation& r, const std::vector<elem>& row_target,
                                   const std::vector<elem>& col_target) {
  AxiomReport out;
  for (std::size_t x = 0; x < r.nx && out.ed.ok; ++x) {
    elem acc = H.bottom();
    for (std::size_t y = 0; y < r.ny; ++y) acc = H.join(acc, r(x, y));
    if (acc != row_target[x]) out.ed = Verdict::fail("ed", "x=" + std::to_string(x + 1));
  }
  for (std::size_t y = 0; y < r.ny && out.su.ok; ++y) {
    elem acc = H.bottom();
    for (std::size_t x = 0; x < r.nx; ++x) acc = H.join(acc, r(x, y));
    if (acc != col_target[y]) out.su = Verdict::fail("su", "y=" + std::to_string(y + 1));
  }
  for (std::size_t x = 0; x < r.nx && out.uv.ok; ++x)
    for (std::size_t a = 0; a < r.ny && out.uv.ok; ++a)
      for (std::size_t b = a + 1; b < r.ny; ++b)
        if (H.meet(r(x, a), r(x, b)) != H.bottom()) {
          out.uv = Verdict::fail("uv", triple_witness(x, a, b));
          break;
        }
  for (std::size_t y = 0; y < r.ny && out.in.ok; ++y)
    for (std::size_t a = 0; a < r.nx && out.in.ok; ++a)
      for (std::size_t b = a + 1; b < r.nx; ++b)
        if (H.meet(r(a, y), r(b, y)) != H.bottom()) {
          out.in = Verdict::fail("in", triple_witness(a, b, y));
          break;
        }
  return out;
}

struct ActionMorphismReport {
  Verdict am, diamond2;
  bool agree() const { return am.ok == diamond2.ok; }
};

// Equivariance checked directly and as the diamond2 square of the canonical cones.
inline ActionMorphismReport check_action_morphism(const FiniteGroupoid& G, const DiscreteAction& A, const DiscreteAction& B,
                                                  const std::vector<std::size_t>& f) {
  if (f.size() != A.size()) throw Error(Errc::ShapeMismatch, "action-morphism", "map size");
  for (std::size_t x = 0; x < A.size(); ++x)
    if (f[x] >= B.size() || B.anchor[f[x]] != A.anchor[x]) throw Error(Errc::AnchorMismatch, "action-morphism", std::to_string(x));
  ActionMorphismReport rep;
  for (std::size_t g = 0; g < G.size() && rep.am.ok; ++g)
    for (std::size_t x = 0; x < A.size(); ++x)
      if (A(g, x) != npos && f[A(g, x)] != B(g, f[x])) {
        rep.am = Verdict::fail("AM", G.names[g] + "." + std::to_string(x));
        break;
      }
  auto L = powerset(G.size());
  DiagramData d;
  d.f = f;
  d.g = f;
  rep.diamond2 = check_diagram(Diagram::diamond2, d, action_lambda(G, A, L), action_lambda(G, B, L));
  return rep;
}

inline std::vector<std::vector<std::size_t>> equivariant_maps(const FiniteGroupoid& G, const DiscreteAction& A, const DiscreteAction& B) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> f(A.size());
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == A.size()) {
      bool ok = true;
      for (std::size_t g = 0; g < G.size() && ok; ++g)
        for (std::size_t y = 0; y < A.size() && ok; ++y)
          if (A(g, y) != npos) ok = f[A(g, y)] == B(g, f[y]);
      if (ok) out.push_back(f);
      return;
    }
    for (std::size_t b = 0; b < B.size(); ++b)
      if (B.anchor[b] == A.anchor[x]) {
        f[x] = b;
        rec(x + 1);
      }
  };
  rec(0);
  return out;
}

// Concrete category of the given actions and every equivariant map between them.
inline ConcreteCategory action_category(const FiniteGroupoid& G, const std::vector<DiscreteAction>& actions) {
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  for (const auto& a : actions) {
    names.push_back(a.name);
    sizes.push_back(a.size());
  }
  std::vector<std::pair<Morphism, std::vector<std::size_t>>> gens;
  for (std::size_t i = 0; i < actions.size(); ++i)
    for (std::size_t j = 0; j < actions.size(); ++j) {
      std::size_t k = 0;
      for (auto& f : equivariant_maps(G, actions[i], actions[j]))
        gens.push_back({{i, j, actions[i].name + ">" + actions[j].name + "#" + std::to_string(k++)}, f});
    }
  return concrete_category(std::move(names), sizes, gens);
}

inline std::size_t find_arrow(const ConcreteCategory& cc, std::size_t src, std::size_t dst, const std::vector<std::size_t>& f) {
  for (std::size_t a = 0; a < cc.C->arrows.size(); ++a)
    if (cc.C->arrows[a].src == src && cc.C->arrows[a].dst == dst && cc.function[a] == f) return a;
  throw Error(Errc::UnresolvedReference, "find-arrow", cc.C->objects[src] + ">" + cc.C->objects[dst]);
}

// ------------------------------------------------------------ the dual Hopf algebroid

// B = P(G0), L = P(G); t and s are preimages of d1 and d0.
struct GroupoidHopf {
  GroupoidPtr G;
  LocalePtr B, L;
  HopfAlgebroid H;
  std::vector<std::pair<std::size_t, std::size_t>> composable;  // (f, g) with src f = dst g

  elem t(elem b) const { return H.t(b); }
  elem s(elem b) const { return H.s(b); }
};

inline GroupoidHopf groupoid_to_hopf(const GroupoidPtr& Gp) {
  const auto& G = *Gp;
  if (auto v = check_groupoid(G); !v) throw Error(Errc::NotAGroupoid, v.check, v.witness);
  if (G.size() > 10) throw Error(Errc::SizeBound, "groupoid-to-hopf", G.name);
  GroupoidHopf out;
  out.G = Gp;
  out.B = powerset(G.objects);
  out.L = powerset(G.size());
  const std::size_t nB = out.B->size(), nL = out.L->size();
  std::vector<elem> tb(nB), sb(nB);
  for (elem b = 0; b < nB; ++b)
    for (std::size_t g = 0; g < G.size(); ++g) {
      if (b >> G.dst[g] & 1U) tb[b] |= static_cast<elem>(1U << g);
      if (b >> G.src[g] & 1U) sb[b] |= static_cast<elem>(1U << g);
    }
  Bimodule bm{out.B, out.L, std::vector<elem>(nB * nL), std::vector<elem>(nB * nL)};
  for (elem b = 0; b < nB; ++b)
    for (elem U = 0; U < nL; ++U) {
      bm.left[b * nL + U] = U & tb[b];
      bm.right[b * nL + U] = U & sb[b];
    }
  Cogebroide cog{out.B, bm, tensor_square(bm), {}, {}};
  const auto& LL = *cog.LL;
  for (std::size_t f = 0; f < G.size(); ++f)
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.src[f] == G.dst[g]) out.composable.push_back({f, g});
  if (LL.presentation().size() != (std::size_t{1} << out.composable.size()))
    throw Error(Errc::Inconsistent, "composable-pairs", "L (x)_B L is not the powerset of composable pairs");
  cog.c = SupMap{out.L, LL.presentation().lattice(), std::vector<elem>(nL)};
  cog.e = SupMap{out.L, out.B, std::vector<elem>(nL)};
  for (elem U = 0; U < nL; ++U) {
    Bits acc(LL.generators());
    for (auto [f, g] : out.composable)
      if (U >> G.compose(f, g) & 1U) acc |= LL.pure({static_cast<elem>(1U << f), static_cast<elem>(1U << g)});
    cog.c.table[U] = LL.presentation().index_of(acc);
    for (std::size_t o = 0; o < G.objects; ++o)
      if (U >> G.unit[o] & 1U) cog.e.table[U] |= static_cast<elem>(1U << o);
  }
  HopfAlgebroid H{cog, std::vector<elem>(nL * nL), std::vector<elem>(nB * nB), SupMap{out.L, out.L, std::vector<elem>(nL)},
                  SupMap{out.B, out.L, sb}, SupMap{out.B, out.L, tb}};
  for (elem U = 0; U < nL; ++U) {
    for (elem W = 0; W < nL; ++W) H.m[U * nL + W] = U & W;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (U >> g & 1U) H.a.table[U] |= static_cast<elem>(1U << G.inv[g]);
  }
  for (elem b = 0; b < nB; ++b)
    for (elem b2 = 0; b2 < nB; ++b2) H.u[b * nB + b2] = tb[b] & sb[b2];
  out.H = std::move(H);
  return out;
}

// ------------------------------------------------------------ Y_d

// The discrete module of the anchored set over B = P(G0), with delta per point.
struct YdModule {
  DiscreteModule d;
  DualityData dual;
  std::vector<std::size_t> anchor;
  std::vector<elem> delta;                 // per point
  std::vector<std::uint32_t> support;      // per element: points below it

  const Module& module() const { return d.module; }
  std::size_t size() const { return d.size(); }
  elem element(std::uint32_t mask) const {
    const auto& M = *d.module.M;
    elem acc = M.bottom();
    for (std::size_t x = 0; x < delta.size(); ++x)
      if (mask >> x & 1U) acc = M.join(acc, delta[x]);
    return acc;
  }
};

inline YdModule build_Yd(const LocalePtr& B, const std::vector<std::size_t>& anchor) {
  IrreduciblePresheaf pre{B, {}, {}};
  for (elem j : B->irreducibles()) pre.count[j] = 0;
  std::vector<std::size_t> rank(anchor.size());
  for (std::size_t x = 0; x < anchor.size(); ++x) {
    const elem j = static_cast<elem>(1U << anchor[x]);
    if (!pre.count.count(j)) throw Error(Errc::AnchorMismatch, "build-Yd", "anchor outside the base");
    rank[x] = pre.count[j]++;
  }
  auto X = std::make_shared<const FiniteSheaf>(sheafify(pre));
  YdModule y{build_Xd(X), {}, anchor, {}, {}};
  y.dual = selfdual_Xd(y.d);
  for (std::size_t x = 0; x < anchor.size(); ++x) y.delta.push_back(y.d.delta_of(static_cast<elem>(1U << anchor[x]), static_cast<elem>(rank[x])));
  const auto& M = *y.d.module.M;
  y.support.assign(M.size(), 0);
  for (elem e = 0; e < M.size(); ++e)
    for (std::size_t x = 0; x < anchor.size(); ++x)
      if (M.leq(y.delta[x], e)) y.support[e] |= 1U << x;
  for (std::size_t x = 0; x < anchor.size(); ++x)
    if (y.support[y.delta[x]] != (1U << x)) throw Error(Errc::Inconsistent, "build-Yd", "delta not an atom");
  return y;
}

// Module map delta_x |-> \/_{(x, x') in R} delta_x'; R indexed by x * |X'| + x'.
inline SupMap relation_map(const YdModule& A, const YdModule& B, const Bits& R) {
  const std::size_t nb = B.anchor.size();
  SupMap f{A.d.module.M, B.d.module.M, std::vector<elem>(A.size())};
  for (elem e = 0; e < A.size(); ++e) {
    std::uint32_t img = 0;
    for (std::size_t x = 0; x < A.anchor.size(); ++x)
      if (A.support[e] >> x & 1U)
        for (std::size_t y = 0; y < nb; ++y)
          if (R.test(x * nb + y)) img |= 1U << y;
    f.table[e] = B.element(img);
  }
  return f;
}

inline Bits mask_bits(std::uint64_t R, std::size_t n) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = R >> i & 1U;
  return b;
}

// ------------------------------------------------------------ comodules on Y_d

// mu(x, y) = {g : g . y = x}: the slot order matches the canonical cone.
inline std::vector<elem> action_to_mu(const FiniteGroupoid& G, const DiscreteAction& A) {
  const std::size_t n = A.size();
  std::vector<elem> mu(n * n, 0);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t g = 0; g < G.size(); ++g)
      if (A(g, y) != npos) mu[A(g, y) * n + y] |= static_cast<elem>(1U << g);
  return mu;
}

inline DiscreteAction mu_to_action(const FiniteGroupoid& G, const std::vector<std::size_t>& anchor, const std::vector<elem>& mu) {
  DiscreteAction A;
  A.anchor = anchor;
  const std::size_t n = anchor.size();
  A.act.assign(G.size() * n, npos);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t g = 0; g < G.size(); ++g)
        if (mu[x * n + y] >> g & 1U) {
          if (A.act[g * n + y] != npos) throw Error(Errc::NotAnAction, "mu-univalued", G.names[g] + "." + std::to_string(y));
          A.act[g * n + y] = x;
        }
  require_action(G, A);
  return A;
}

// lambda on all elements of Y_d, bilinear extension of mu.
inline std::vector<elem> mu_lambda_table(const YdModule& Y, const std::vector<elem>& mu) {
  const std::size_t n = Y.anchor.size(), m = Y.size();
  std::vector<elem> lam(m * m, 0);
  for (elem a = 0; a < m; ++a)
    for (elem b = 0; b < m; ++b)
      for (std::size_t x = 0; x < n; ++x)
        if (Y.support[a] >> x & 1U)
          for (std::size_t y = 0; y < n; ++y)
            if (Y.support[b] >> y & 1U) lam[a * m + b] |= mu[x * n + y];
  return lam;
}

inline std::shared_ptr<const CompactTensor> coaction_tensor(const GroupoidHopf& gh, const YdModule& Y) {
  return std::make_shared<const CompactTensor>(
      gh.B, std::vector<TensorFactor>{TensorFactor::of(gh.H.cog.L), TensorFactor::of(Y.module())}, PresentedSupLattice::kDefaultCap);
}

inline Coaction mu_to_rho(const YdModule& Y, const std::vector<elem>& mu, std::shared_ptr<const CompactTensor> LM) {
  return lambda_to_rho(mu_lambda_table(Y, mu), Y.size(), Y.dual, std::move(LM));
}

inline std::vector<elem> rho_to_mu(const YdModule& Y, const Coaction& rho) {
  auto lam = rho_to_lambda(rho, Y.dual);
  const std::size_t n = Y.anchor.size(), m = Y.size();
  std::vector<elem> mu(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) mu[x * n + y] = lam[Y.delta[x] * m + Y.delta[y]];
  return mu;
}

// rho preserves top and binary meets.
inline Verdict comodule_is_locale_morphism(const YdModule& Y, const Coaction& rho) {
  const auto& q = rho.LM->presentation();
  auto LMl = q.lattice();
  if (auto v = is_frame(*LMl); !v) return Verdict::fail("target-frame", v.witness);
  const auto& M = *Y.d.module.M;
  std::vector<elem> img(M.size());
  for (elem a = 0; a < M.size(); ++a) img[a] = q.index_of_closed(rho.value[a]);
  if (img[M.top()] != LMl->top()) return Verdict::fail("preserves-top", M.name(M.top()));
  for (elem a = 0; a < M.size(); ++a)
    for (elem b = 0; b < M.size(); ++b)
      if (img[M.meet(a, b)] != LMl->meet(img[a], img[b])) return Verdict::fail("preserves-meet", pair_witness(a, b));
  return Verdict::pass();
}

// B-linear mu on Y_d satisfying B2 and B1, found by exhaustive search over
// mu(x, y) within hom(anchor y, anchor x). B1 is evaluated on composable pairs.
struct ComoduleSearch {
  std::vector<std::size_t> anchor;
  std::size_t candidates = 0;
  std::vector<std::vector<elem>> mus;
};

inline ComoduleSearch search_comodules(const GroupoidHopf& gh, const std::vector<std::size_t>& anchor) {
  const auto& G = *gh.G;
  const std::size_t n = anchor.size(), nL = gh.L->size();
  ComoduleSearch out{anchor, 0, {}};
  if (n > 5) throw Error(Errc::SizeBound, "search-comodules", std::to_string(n));
  // pairs[U * nL + V] = composable (f, g) with f in U and g in V; cpre[U] = pairs composing into U
  const std::size_t nc = gh.composable.size();
  std::vector<std::uint64_t> pairs(nL * nL, 0), cpre(nL, 0);
  for (std::size_t k = 0; k < nc; ++k) {
    auto [f, g] = gh.composable[k];
    for (elem U = 0; U < nL; ++U) {
      if (U >> G.compose(f, g) & 1U) cpre[U] |= std::uint64_t{1} << k;
      if (!(U >> f & 1U)) continue;
      for (elem V = 0; V < nL; ++V)
        if (V >> g & 1U) pairs[U * nL + V] |= std::uint64_t{1} << k;
    }
  }
  std::vector<std::vector<elem>> choices(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::uint32_t hom = 0;
      for (auto g : G.hom(anchor[y], anchor[x])) hom |= 1U << g;
      // counit: the identity lies in mu(x, x) and in no other cell
      for (std::uint32_t U = hom;; U = (U - 1) & hom) {
        const bool has_id = anchor[x] == anchor[y] && (U >> G.unit[anchor[x]] & 1U);
        if ((x == y) == has_id) choices[x * n + y].push_back(U);
        if (U == 0) break;
      }
    }
  std::vector<elem> mu(n * n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t cell) {
    if (cell == n * n) {
      ++out.candidates;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z) {
          std::uint64_t rhs = 0;
          for (std::size_t y = 0; y < n; ++y) rhs |= pairs[mu[x * n + y] * nL + mu[y * n + z]];
          if (rhs != cpre[mu[x * n + z]]) return;
        }
      out.mus.push_back(mu);
      return;
    }
    for (elem U : choices[cell]) {
      mu[cell] = U;
      rec(cell + 1);
    }
  };
  rec(0);
  return out;
}

// ------------------------------------------------------------ Rel(beta^G)

// Fiberwise relations between two actions, as masks over x * |B| + y.
inline std::vector<std::uint64_t> fiberwise_relations(const DiscreteAction& A, const DiscreteAction& B) {
  std::vector<std::size_t> cells;
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t y = 0; y < B.size(); ++y)
      if (A.anchor[x] == B.anchor[y]) cells.push_back(x * B.size() + y);
  if (cells.size() > 20) throw Error(Errc::SizeBound, "fiberwise-relations", A.name + "," + B.name);
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells.size()); ++m) {
    std::uint64_t R = 0;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (m >> i & 1U) R |= std::uint64_t{1} << cells[i];
    out.push_back(R);
  }
  return out;
}

inline LRelation two_valued(std::uint64_t R, std::size_t nx, std::size_t ny) {
  LRelation r(two(), nx, ny);
  for (std::size_t i = 0; i < nx * ny; ++i)
    if (R >> i & 1U) r.table[i] = two()->top();
  return r;
}

// The restriction of lambda_A boxtimes lambda_B to R x R, axioms over the split base.
inline AxiomReport restricted_action_axioms(const GroupoidHopf& gh, const LRelation& la, const LRelation& lb,
                                            const DiscreteAction& A, const DiscreteAction& B, std::uint64_t R) {
  std::vector<std::pair<std::size_t, std::size_t>> P;
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t y = 0; y < B.size(); ++y)
      if (R >> (x * B.size() + y) & 1U) P.push_back({x, y});
  LRelation theta(gh.L, P.size(), P.size());
  std::vector<elem> rows(P.size()), cols(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    rows[i] = gh.t(static_cast<elem>(1U << A.anchor[P[i].first]));
    cols[i] = gh.s(static_cast<elem>(1U << A.anchor[P[i].first]));
    for (std::size_t j = 0; j < P.size(); ++j)
      theta.at(i, j) = la(P[i].first, P[j].first) & lb(P[i].second, P[j].second);
  }
  return split_bijection(*gh.L, theta, rows, cols);
}

inline std::uint64_t compose_relations(std::uint64_t R, std::uint64_t S, std::size_t na, std::size_t nb, std::size_t nc) {
  std::uint64_t out = 0;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y)
      if (R >> (x * nb + y) & 1U)
        for (std::size_t z = 0; z < nc; ++z)
          if (S >> (y * nc + z) & 1U) out |= std::uint64_t{1} << (x * nc + z);
  return out;
}

// ------------------------------------------------------------ equivalence

struct ObjectData {
  DiscreteAction action;
  YdModule yd;
  std::vector<elem> mu;
  Coaction rho;
  LRelation lambda;
};

struct EquivalenceReport {
  std::string groupoid;
  std::size_t max_size = 0;
  std::size_t actions = 0, comodules = 0, candidates = 0;
  bool object_bijection = true;
  bool roundtrips = true;
  std::size_t representatives = 0, pairs = 0, relations = 0;
  std::size_t rel_homs = 0, cmd_homs = 0;
  bool hom_counts_equal = true;
  bool three_way = true;
  bool identities = true;
  bool composition_closed = true;
  bool forgetful = true;
  // Properties every enumerated comodule is required to have.
  bool all_bijections = true;
  bool all_locale_morphisms = true;
  bool all_c1c2 = true;
  std::string witness;

  bool ok() const {
    return object_bijection && roundtrips && hom_counts_equal && three_way && identities && composition_closed && forgetful &&
           all_bijections && all_locale_morphisms && all_c1c2;
  }
};

inline ObjectData object_data(const GroupoidHopf& gh, const DiscreteAction& A, const YdModule& Y,
                              const std::shared_ptr<const CompactTensor>& LM) {
  ObjectData o{A, Y, action_to_mu(*gh.G, A), {}, action_lambda(*gh.G, A, gh.L)};
  o.rho = mu_to_rho(Y, o.mu, LM);
  return o;
}

// Homs are compared on every pair of isomorphism-class representatives.
inline EquivalenceReport equivalence_check(const GroupoidHopf& gh, std::size_t max_size, bool comodule_properties = true) {
  const auto& G = *gh.G;
  if (max_size > 4) throw Error(Errc::SizeBound, "equivalence", "carriers above 4");
  EquivalenceReport rep;
  rep.groupoid = G.name;
  rep.max_size = max_size;
  auto fail = [&](bool& flag, const std::string& w) {
    if (flag && rep.witness.empty()) rep.witness = w;
    flag = false;
  };
  std::vector<ObjectData> reps;
  for (const auto& fib : fiber_vectors(G.objects, max_size)) {
    std::vector<std::size_t> anchor;
    for (std::size_t o = 0; o < fib.size(); ++o) anchor.insert(anchor.end(), fib[o], o);
    auto actions = enumerate_actions(G, fib);
    auto found = search_comodules(gh, anchor);
    rep.actions += actions.size();
    rep.comodules += found.mus.size();
    rep.candidates += found.candidates;
    auto Y = build_Yd(gh.B, anchor);
    auto LM = coaction_tensor(gh, Y);
    std::set<std::vector<elem>> from_actions, from_search(found.mus.begin(), found.mus.end());
    for (const auto& A : actions) {
      auto mu = action_to_mu(G, A);
      if (!from_actions.insert(mu).second) fail(rep.object_bijection, "action-to-mu not injective");
      if (!from_search.count(mu)) fail(rep.object_bijection, "action " + A.name + " not a comodule");
    }
    if (from_actions.size() != from_search.size()) fail(rep.object_bijection, "object counts differ");
    const std::size_t n = anchor.size();
    std::vector<elem> rows(n), cols(n);
    for (std::size_t x = 0; x < n; ++x) {
      rows[x] = gh.t(static_cast<elem>(1U << anchor[x]));
      cols[x] = gh.s(static_cast<elem>(1U << anchor[x]));
    }
    for (const auto& mu : found.mus) {
      auto A = mu_to_action(G, anchor, mu);
      if (action_to_mu(G, A) != mu) fail(rep.roundtrips, "mu-action-mu");
      auto rho = mu_to_rho(Y, mu, LM);
      if (rho_to_mu(Y, rho) != mu) fail(rep.roundtrips, "mu-rho-mu");
      if (!comodule_properties) continue;
      auto cm = check_comodule(gh.H.cog, Y.dual, rho);
      if (!cm.ok()) fail(rep.all_c1c2, cm.c1.ok ? cm.c2.check : cm.c1.check);
      LRelation r(gh.L, n, n);
      r.table = mu;
      if (!split_bijection(*gh.L, r, rows, cols).bijection()) fail(rep.all_bijections, "mu not a bijection");
      if (auto v = comodule_is_locale_morphism(Y, rho); !v) fail(rep.all_locale_morphisms, v.check + " " + v.witness);
    }
    for (const auto& A : actions) {
      bool fresh = true;
      for (const auto& o : reps)
        if (actions_isomorphic(G, o.action, A)) fresh = false;
      if (fresh) reps.push_back(object_data(gh, A, Y, LM));
    }
  }
  rep.representatives = reps.size();
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint64_t>> homs;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) {
      const auto& A = reps[i];
      const auto& B = reps[j];
      ++rep.pairs;
      std::size_t rel = 0, cmd = 0;
      for (auto R : fiberwise_relations(A.action, B.action)) {
        ++rep.relations;
        auto f = relation_map(A.yd, B.yd, mask_bits(R, A.action.size() * B.action.size()));
        const bool module_map = check_module_morphism(f, A.yd.module(), B.yd.module()).ok;
        if (!module_map) fail(rep.forgetful, "relation map not B-linear");
        const bool comodule = module_map && check_comodule_morphism(f, A.rho, B.rho).ok;
        DiagramData d;
        d.R = d.S = two_valued(R, A.action.size(), B.action.size());
        const bool diamond = check_diagram(Diagram::diamond, d, A.lambda, B.lambda).ok;
        const bool bij = restricted_action_axioms(gh, A.lambda, B.lambda, A.action, B.action, R).bijection();
        if (comodule != diamond || diamond != bij)
          fail(rep.three_way, A.action.name + "," + B.action.name + " R=" + std::to_string(R));
        rel += bij;
        cmd += comodule;
        if (bij) homs[{i, j}].push_back(R);
      }
      rep.rel_homs += rel;
      rep.cmd_homs += cmd;
      if (rel != cmd) fail(rep.hom_counts_equal, A.action.name + "," + B.action.name);
    }
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const std::size_t n = reps[i].action.size();
    std::uint64_t id = 0;
    for (std::size_t x = 0; x < n; ++x) id |= std::uint64_t{1} << (x * n + x);
    const auto& h = homs[{i, i}];
    if (std::find(h.begin(), h.end(), id) == h.end()) fail(rep.identities, reps[i].action.name);
  }
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j)
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const auto& ij = homs[{i, j}];
        const auto& jk = homs[{j, k}];
        const auto& ik = homs[{i, k}];
        if (ij.size() * jk.size() > 4096) continue;
        std::set<std::uint64_t> target(ik.begin(), ik.end());
        for (auto R : ij)
          for (auto S : jk)
            if (!target.count(compose_relations(R, S, reps[i].action.size(), reps[j].action.size(), reps[k].action.size())))
              fail(rep.composition_closed, reps[i].action.name + "," + reps[j].action.name + "," + reps[k].action.name);
      }
  return rep;
}

// ------------------------------------------------------------ reconstruction

// Generating actions with orbit relations as arrows, and the fiber functor
// action |-> Y_d.
struct ActionSite {
  GroupoidPtr G;
  LocalePtr B;
  std::vector<DiscreteAction> actions;
  std::vector<YdModule> yd;
  struct Arrow {
    std::size_t src, dst;
    Bits relation;
  };
  std::vector<Arrow> arrows;
  std::shared_ptr<FiberFunctor> T;
};

struct ProductDecl {
  std::size_t lhs, rhs, obj;
  std::vector<std::size_t> index;  // [a * |rhs| + b] -> point of obj or npos
};

inline std::vector<Bits> orbit_relations(const FiniteGroupoid& G, const DiscreteAction& A, const DiscreteAction& B) {
  const std::size_t nb = B.size();
  Bits seen(A.size() * nb);
  std::vector<Bits> out;
  for (std::size_t x = 0; x < A.size(); ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      if (A.anchor[x] != B.anchor[y] || seen.test(x * nb + y)) continue;
      Bits orbit(A.size() * nb);
      for (std::size_t g = 0; g < G.size(); ++g)
        if (G.src[g] == A.anchor[x]) orbit.set(A(g, x) * nb + B(g, y));
      seen |= orbit;
      out.push_back(orbit);
    }
  return out;
}

inline ActionSite action_site(const GroupoidPtr& Gp, const LocalePtr& B, std::vector<DiscreteAction> actions,
                              const std::vector<ProductDecl>& products, std::optional<std::size_t> unit) {
  const auto& G = *Gp;
  ActionSite site{Gp, B, std::move(actions), {}, {}, std::make_shared<FiberFunctor>()};
  auto& T = *site.T;
  T.B = B;
  for (const auto& a : site.actions) {
    require_action(G, a);
    if (a.size() > 12) throw Error(Errc::SizeBound, "action-site", a.name);
    site.yd.push_back(build_Yd(B, a.anchor));
    T.names.push_back(a.name);
    T.obj.push_back(site.yd.back().dual);
  }
  for (std::size_t i = 0; i < site.actions.size(); ++i)
    for (std::size_t j = 0; j < site.actions.size(); ++j) {
      std::size_t k = 0;
      for (const auto& R : orbit_relations(G, site.actions[i], site.actions[j])) {
        site.arrows.push_back({i, j, R});
        T.arrows.push_back({i, j, relation_map(site.yd[i], site.yd[j], R),
                            site.actions[i].name + ">" + site.actions[j].name + "#" + std::to_string(k++)});
      }
    }
  for (const auto& p : products) {
    const auto& L = site.yd[p.lhs];
    const auto& R = site.yd[p.rhs];
    const auto& O = site.yd[p.obj];
    const std::size_t nr = R.size();
    FiberFunctor::Product fp{p.lhs, p.rhs, p.obj, std::vector<elem>(L.size() * nr, O.d.module.M->bottom()), {}};
    for (std::size_t a = 0; a < L.anchor.size(); ++a)
      for (std::size_t b = 0; b < R.anchor.size(); ++b) {
        const std::size_t z = p.index[a * R.anchor.size() + b];
        if (z != npos) fp.left[L.delta[a] * nr + R.delta[b]] = O.delta[z];
      }
    fp.right = fp.left;
    T.products.push_back(std::move(fp));
  }
  if (unit) {
    const auto& U = site.yd[*unit];
    FiberFunctor::Unit u{*unit, std::vector<elem>(B->size()), {}};
    for (elem b = 0; b < B->size(); ++b) {
      std::uint32_t mask = 0;
      for (std::size_t x = 0; x < U.anchor.size(); ++x)
        if (b >> U.anchor[x] & 1U) mask |= 1U << x;
      u.left[b] = U.element(mask);
    }
    u.right = u.left;
    T.unit = u;
  }
  for (std::size_t i = 0; i < site.actions.size(); ++i) {
    auto id = identity_map(site.yd[i].d.module.M);
    T.duals.push_back(FiberFunctor::Dual{i, id, id});
  }
  return site;
}

// Regular actions, the terminal action and the pairwise products of regular actions.
inline ActionSite default_site(const GroupoidPtr& Gp, const LocalePtr& B, const std::vector<DiscreteAction>& extra = {}) {
  const auto& G = *Gp;
  std::vector<DiscreteAction> acts;
  for (std::size_t o = 0; o < G.objects; ++o) acts.push_back(regular_action(G, o));
  const std::size_t one = acts.size();
  acts.push_back(terminal_action(G));
  std::vector<ProductDecl> prods;
  auto identity_product = [&](std::size_t r, bool left) {
    const auto& A = acts[r];
    const std::size_t nt = G.objects;
    ProductDecl d{left ? r : one, left ? one : r, r, std::vector<std::size_t>(A.size() * nt, npos)};
    for (std::size_t x = 0; x < A.size(); ++x) {
      if (left)
        d.index[x * nt + A.anchor[x]] = x;
      else
        d.index[A.anchor[x] * A.size() + x] = x;
    }
    return d;
  };
  for (std::size_t o = 0; o <= one; ++o) {
    prods.push_back(identity_product(o, true));
    if (o != one) prods.push_back(identity_product(o, false));
  }
  for (std::size_t o = 0; o < one; ++o)
    for (std::size_t o2 = o; o2 < one; ++o2) {
      auto P = product_action(G, acts[o], acts[o2]);
      const std::size_t k = acts.size();
      P.action.name = acts[o].name + "x" + acts[o2].name;
      acts.push_back(P.action);
      prods.push_back({o, o2, k, P.index});
      if (o != o2) {
        ProductDecl sw{o2, o, k, std::vector<std::size_t>(acts[o2].size() * acts[o].size(), npos)};
        for (std::size_t a = 0; a < acts[o].size(); ++a)
          for (std::size_t b = 0; b < acts[o2].size(); ++b) sw.index[b * acts[o].size() + a] = P.index[a * acts[o2].size() + b];
        prods.push_back(sw);
      }
    }
  for (const auto& e : extra) acts.push_back(e);
  return action_site(Gp, B, std::move(acts), prods, one);
}

struct Reconstruction {
  GroupoidHopf dual;
  ActionSite site;
  Coend coend;
  Cogebroide cog;
  HopfAlgebroid hopf;
  SupMap iso;  // coend -> P(G), induced by the canonical cone
  Verdict laws;
  bool bijective = false;
  std::vector<std::pair<std::string, Verdict>> matches;  // c, e, m, u, a, s, t

  bool ok() const {
    if (!laws.ok || !bijective) return false;
    for (auto& [n, v] : matches)
      if (!v.ok) return false;
    return true;
  }
};

// [C, delta_x, delta_y] |-> lambda_C(x, y).
inline SupMap canonical_comparison(const ActionSite& site, const Coend& L, const LocalePtr& target) {
  std::vector<elem> assign(L.generators());
  std::vector<LRelation> lam;
  for (const auto& a : site.actions) lam.push_back(action_lambda(*site.G, a, target));
  for (std::size_t g = 0; g < L.generators(); ++g) {
    const std::size_t c = L.owner[g];
    auto [a, k] = L.split(g);
    const auto& Y = site.yd[c];
    const std::size_t x = static_cast<std::size_t>(std::countr_zero(Y.support[a]));
    const std::size_t y = static_cast<std::size_t>(std::countr_zero(Y.support[k]));
    assign[g] = lam[c](x, y);
  }
  try {
    return detail::induced_table(L.q, target, std::move(assign), "canonical-comparison");
  } catch (const Error& e) {
    throw Error(Errc::NoIsomorphismFound, "canonical-comparison", e.witness());
  }
}

inline Reconstruction reconstruct(const GroupoidPtr& Gp) {
  auto gh = groupoid_to_hopf(Gp);
  auto site = default_site(Gp, gh.B);
  if (auto v = check_fiber_functor(*site.T); !v) throw Error(Errc::ValidationError, v.check, v.witness);
  auto L = nat_predual(site.T, site.T);
  auto cog = end_wedge(L);
  auto H = hopf_structure(L, cog);
  Reconstruction r{gh, site, L, cog, H, {}, check_hopf(H), false, {}};
  r.iso = canonical_comparison(site, L, gh.L);
  r.bijective = is_bijective(r.iso);
  if (!r.bijective) throw Error(Errc::NoIsomorphismFound, "reconstruct", "comparison not bijective");
  const auto& phi = r.iso;
  const auto& GH = gh.H;
  const auto& Lc = *L.L;
  const auto& B = *gh.B;
  auto check = [&](const std::string& name, auto&& pred) {
    Verdict v;
    pred(v);
    r.matches.push_back({name, v});
  };
  check("c", [&](Verdict& v) {
    for (elem x = 0; x < Lc.size() && v.ok; ++x) {
      Bits img = cog.LL->map_into(*GH.cog.LL, {&phi, &phi}, cog.cbits(x));
      if (!GH.cog.LL->equal(img, GH.cog.cbits(phi(x)))) v = Verdict::fail("c", Lc.name(x));
    }
  });
  check("e", [&](Verdict& v) {
    for (elem x = 0; x < Lc.size() && v.ok; ++x)
      if (cog.e(x) != GH.cog.e(phi(x))) v = Verdict::fail("e", Lc.name(x));
  });
  check("m", [&](Verdict& v) {
    for (elem x = 0; x < Lc.size() && v.ok; ++x)
      for (elem y = 0; y < Lc.size() && v.ok; ++y)
        if (phi(H.mul(x, y)) != GH.mul(phi(x), phi(y))) v = Verdict::fail("m", pair_witness(x, y));
  });
  check("u", [&](Verdict& v) {
    for (elem b = 0; b < B.size() && v.ok; ++b)
      for (elem b2 = 0; b2 < B.size() && v.ok; ++b2)
        if (phi(H.unit(b, b2)) != GH.unit(b, b2)) v = Verdict::fail("u", pair_witness(b, b2));
  });
  check("a", [&](Verdict& v) {
    for (elem x = 0; x < Lc.size() && v.ok; ++x)
      if (phi(H.a(x)) != GH.a(phi(x))) v = Verdict::fail("a", Lc.name(x));
  });
  check("s", [&](Verdict& v) {
    for (elem b = 0; b < B.size() && v.ok; ++b)
      if (phi(H.s(b)) != GH.s(b)) v = Verdict::fail("s", B.name(b));
  });
  check("t", [&](Verdict& v) {
    for (elem b = 0; b < B.size() && v.ok; ++b)
      if (phi(H.t(b)) != GH.t(b)) v = Verdict::fail("t", B.name(b));
  });
  return r;
}

// ------------------------------------------------------------ site independence

struct SiteIndependence {
  std::size_t small = 0, large = 0;
  bool bijective = false;
  bool agrees_with_dual = false;
  bool ok() const { return bijective && agrees_with_dual && small == large; }
};

// Coend over the default site against the site enlarged by R_0 + R_0; the
// comparison sends each generator to the same generator.
inline SiteIndependence site_independence(const GroupoidPtr& Gp) {
  auto gh = groupoid_to_hopf(Gp);
  const auto& G = *Gp;
  auto R0 = regular_action(G, 0);
  auto extra = coproduct_action(G, R0, R0);
  auto s1 = default_site(Gp, gh.B);
  auto s2 = default_site(Gp, gh.B, {extra});
  auto L1 = nat_predual(s1.T, s1.T);
  auto L2 = nat_predual(s2.T, s2.T);
  SiteIndependence out{L1.L->size(), L2.L->size(), false, false};
  std::vector<elem> assign(L1.generators());
  for (std::size_t g = 0; g < L1.generators(); ++g) assign[g] = L2.generator[g];
  auto f = detail::induced_table(L1.q, L2.L, std::move(assign), "site-inclusion");
  out.bijective = is_bijective(f);
  auto c1 = canonical_comparison(s1, L1, gh.L);
  auto c2 = canonical_comparison(s2, L2, gh.L);
  out.agrees_with_dual = compose(c2, f).table == c1.table && is_bijective(c2);
  return out;
}

// ------------------------------------------------------------ universal factorization

namespace detail {
// Sup map preserving top and binary meets; the domain need not carry a Locale type.
inline bool frame_map(const SupMap& f) {
  if (!check_sup_morphism(f)) return false;
  const auto& A = *f.dom;
  const auto& B = *f.cod;
  if (f(A.top()) != B.top()) return false;
  for (elem x = 0; x < A.size(); ++x)
    for (elem y = x + 1; y < A.size(); ++y)
      if (f(A.meet(x, y)) != B.meet(f(x), f(y))) return false;
  return true;
}

// \/_{b R b'} lambda_X(a, b) = \/_{a R a'} lambda_X'(a', b') for every a, b'.
inline bool relational_diamond(const LRelation& r, const LRelation& r2, const Bits& R) {
  const auto& H = *r.H;
  for (std::size_t a = 0; a < r.nx; ++a)
    for (std::size_t b2 = 0; b2 < r2.ny; ++b2) {
      elem lhs = H.bottom(), rhs = H.bottom();
      for (std::size_t b = 0; b < r.ny; ++b)
        if (R.test(b * r2.ny + b2)) lhs = H.join(lhs, r(a, b));
      for (std::size_t a2 = 0; a2 < r2.nx; ++a2)
        if (R.test(a * r2.nx + a2)) rhs = H.join(rhs, r2(a2, b2));
      if (lhs != rhs) return false;
    }
  return true;
}

// Families of pairwise disjoint elements of A, one per slot, joining to top.
template <class Fn>
void for_each_partition(const SupLattice& A, std::size_t slots, Fn&& fn) {
  std::vector<elem> img(slots);
  std::function<void(std::size_t, elem)> rec = [&](std::size_t i, elem acc) {
    if (i == slots) {
      if (acc == A.top()) fn(static_cast<const std::vector<elem>&>(img));
      return;
    }
    for (elem a = 0; a < A.size(); ++a)
      if (A.meet(a, acc) == A.bottom()) {
        img[i] = a;
        rec(i + 1, A.join(acc, a));
      }
  };
  rec(0, A.bottom());
}
}  // namespace detail

// Frame maps out of a finite Boolean lattice, given by the images of its atoms.
inline std::vector<SupMap> boolean_frame_maps(const LatticePtr& L, const LatticePtr& A) {
  const auto& atoms = L->irreducibles();
  std::vector<SupMap> out;
  detail::for_each_partition(*A, atoms.size(), [&](const std::vector<elem>& img) {
    SupMap f{L, A, std::vector<elem>(L->size())};
    for (elem x = 0; x < L->size(); ++x) {
      elem v = A->bottom();
      for (std::size_t k = 0; k < atoms.size(); ++k)
        if (L->leq(atoms[k], x)) v = A->join(v, img[k]);
      f.table[x] = v;
    }
    if (detail::frame_map(f)) out.push_back(std::move(f));
  });
  return out;
}

struct FactorizationReport {
  std::size_t locales = 0, base_maps = 0, cones = 0, unique = 0;
  std::string witness;
  bool ok() const { return cones == unique && witness.empty(); }
};

// For every locale A with at most max_size elements and every frame map
// B (x) B -> A, enumerates the cones of split bijections into A over the site
// and counts, for each, the frame maps L -> A it factors through. Cones are
// chosen on the regular actions and extended along g |-> g . a; the extension
// is then verified on every object and arrow.
inline FactorizationReport universal_factorization(const Reconstruction& rec, std::size_t max_size) {
  const auto& G = *rec.site.G;
  const auto& site = rec.site;
  const auto& L = rec.coend;
  const std::size_t k = G.objects;  // regular actions are the first k objects of the site
  FactorizationReport out;
  // id_pt[o]: the point of R_o holding the identity of o
  std::vector<std::size_t> id_pt(k);
  for (std::size_t o = 0; o < k; ++o) {
    std::size_t c = 0;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.src[g] == o) {
        if (g == G.unit[o]) id_pt[o] = c;
        ++c;
      }
  }
  for (const auto& A : enumerate_distributive_lattices(max_size)) {
    ++out.locales;
    const auto competitors = boolean_frame_maps(L.L, A);
    detail::for_each_partition(*A, k * k, [&](const std::vector<elem>& w) {
      ++out.base_maps;
      std::vector<elem> tA(k, A->bottom()), sA(k, A->bottom());
      for (std::size_t o = 0; o < k; ++o)
        for (std::size_t o2 = 0; o2 < k; ++o2) {
          tA[o] = A->join(tA[o], w[o * k + o2]);
          sA[o2] = A->join(sA[o2], w[o * k + o2]);
        }
      // rows[o][x]: admissible rows of lambda_{R_o} at x, flattened
      std::vector<std::vector<std::vector<elem>>> rows(k);
      for (std::size_t o = 0; o < k; ++o) {
        const auto& X = site.actions[o];
        const std::size_t n = X.size();
        std::vector<elem> row(n);
        for (std::size_t x = 0; x < n; ++x) {
          std::vector<elem> flat;
          const elem target = tA[X.anchor[x]];
          std::function<void(std::size_t, elem)> go = [&](std::size_t y, elem acc) {
            if (y == n) {
              if (acc == target) flat.insert(flat.end(), row.begin(), row.end());
              return;
            }
            const elem cap = A->meet(target, sA[X.anchor[y]]);
            for (elem a = 0; a < A->size(); ++a)
              if (A->leq(a, cap) && A->meet(a, acc) == A->bottom()) {
                row[y] = a;
                go(y + 1, A->join(acc, a));
              }
          };
          go(0, A->bottom());
          rows[o].push_back(std::move(flat));
        }
      }
      std::vector<LRelation> lam(site.actions.size());
      auto finish = [&] {
        for (std::size_t i = k; i < site.actions.size(); ++i) {
          const auto& X = site.actions[i];
          lam[i] = LRelation(A, X.size(), X.size());
          for (std::size_t a = 0; a < X.size(); ++a) {
            const std::size_t o = X.anchor[a];
            std::size_t c = 0;
            for (std::size_t g = 0; g < G.size(); ++g) {
              if (G.src[g] != o) continue;
              const std::size_t b = X(g, a);
              lam[i].at(a, b) = A->join(lam[i](a, b), lam[o](id_pt[o], c));
              ++c;
            }
          }
        }
        for (std::size_t i = k; i < site.actions.size(); ++i) {
          const auto& X = site.actions[i];
          std::vector<elem> rt(X.size()), ct(X.size());
          for (std::size_t a = 0; a < X.size(); ++a) {
            rt[a] = tA[X.anchor[a]];
            ct[a] = sA[X.anchor[a]];
          }
          if (!split_bijection(*A, lam[i], rt, ct).bijection()) return;
        }
        for (const auto& ar : site.arrows)
          if (!detail::relational_diamond(lam[ar.src], lam[ar.dst], ar.relation)) return;
        ++out.cones;
        std::vector<elem> assign(L.generators());
        for (std::size_t g = 0; g < L.generators(); ++g) {
          const std::size_t c = L.owner[g];
          auto [a, kk] = L.split(g);
          const auto& Y = site.yd[c];
          assign[g] = lam[c](static_cast<std::size_t>(std::countr_zero(Y.support[a])),
                             static_cast<std::size_t>(std::countr_zero(Y.support[kk])));
        }
        std::size_t matches = 0;
        for (const auto& f : competitors) {
          bool same = true;
          for (std::size_t g = 0; g < L.generators() && same; ++g) same = f(L.generator[g]) == assign[g];
          matches += same;
        }
        bool induced = respects_relations(*L.q, *A, assign).ok;
        if (induced) {
          SupMap f = InducedMorphism{L.q, A, assign}.table();
          f.dom = L.L;
          induced = detail::frame_map(f);
        }
        if (matches == 1 && induced)
          ++out.unique;
        else if (out.witness.empty())
          out.witness = "locale of size " + std::to_string(A->size()) + ": " + std::to_string(matches) + " factorizations";
      };
      std::function<void(std::size_t, std::size_t)> pick = [&](std::size_t o, std::size_t x) {
        if (o == k) {
          finish();
          return;
        }
        const auto& X = site.actions[o];
        const std::size_t n = X.size();
        if (x == 0) lam[o] = LRelation(A, n, n);
        if (x == n) {
          for (std::size_t y = 0; y < n; ++y) {
            elem acc = A->bottom();
            for (std::size_t a = 0; a < n; ++a) {
              if (A->meet(acc, lam[o](a, y)) != A->bottom()) return;
              acc = A->join(acc, lam[o](a, y));
            }
            if (acc != sA[X.anchor[y]]) return;
          }
          for (const auto& ar : site.arrows)
            if (ar.src <= o && ar.dst <= o && (ar.src == o || ar.dst == o) &&
                !detail::relational_diamond(lam[ar.src], lam[ar.dst], ar.relation))
              return;
          pick(o + 1, 0);
          return;
        }
        const auto& flat = rows[o][x];
        for (std::size_t off = 0; off < flat.size(); off += n) {
          for (std::size_t y = 0; y < n; ++y) lam[o].at(x, y) = flat[off + y];
          pick(o, x + 1);
        }
      };
      pick(0, 0);
    });
  }
  return out;
}

}  // namespace sltk
