#pragma once

#include "sltk/relation.hpp"

#include <map>
#include <optional>
#include <tuple>

namespace sltk {

// ------------------------------------------------------------ categories

struct Morphism {
  std::size_t src = 0, dst = 0;
  std::string name;
};

struct ProductCone {
  std::size_t obj = 0, p1 = 0, p2 = 0;
};

struct FiniteCategory {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<std::string> objects;
  std::vector<Morphism> arrows;
  std::vector<std::size_t> identity;  // per object
  std::vector<std::size_t> comp;      // [g * |arrows| + f] = g o f, npos if not composable
  std::optional<std::size_t> terminal;
  std::map<std::pair<std::size_t, std::size_t>, ProductCone> products;

  std::size_t size() const { return objects.size(); }
  std::size_t compose(std::size_t g, std::size_t f) const { return comp[g * arrows.size() + f]; }
  std::vector<std::size_t> hom(std::size_t x, std::size_t y) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < arrows.size(); ++f)
      if (arrows[f].src == x && arrows[f].dst == y) out.push_back(f);
    return out;
  }
};
using CategoryPtr = std::shared_ptr<const FiniteCategory>;

inline Verdict check_category(const FiniteCategory& C) {
  const std::size_t n = C.arrows.size();
  if (C.identity.size() != C.size() || C.comp.size() != n * n)
    throw Error(Errc::ShapeMismatch, "category-shape", "identity or composition table");
  for (std::size_t x = 0; x < C.size(); ++x) {
    const auto& i = C.arrows[C.identity[x]];
    if (i.src != x || i.dst != x) return Verdict::fail("identity-endpoints", C.objects[x]);
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) {
      const bool composable = C.arrows[f].dst == C.arrows[g].src;
      const std::size_t h = C.compose(g, f);
      if (composable != (h != FiniteCategory::npos)) return Verdict::fail("composition-domain", C.arrows[g].name + "." + C.arrows[f].name);
      if (composable && (C.arrows[h].src != C.arrows[f].src || C.arrows[h].dst != C.arrows[g].dst))
        return Verdict::fail("composition-endpoints", C.arrows[g].name + "." + C.arrows[f].name);
    }
  for (std::size_t f = 0; f < n; ++f) {
    if (C.compose(C.identity[C.arrows[f].dst], f) != f || C.compose(f, C.identity[C.arrows[f].src]) != f)
      return Verdict::fail("unit-law", C.arrows[f].name);
  }
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g = 0; g < n; ++g) {
      if (C.arrows[f].dst != C.arrows[g].src) continue;
      for (std::size_t h = 0; h < n; ++h) {
        if (C.arrows[g].dst != C.arrows[h].src) continue;
        if (C.compose(h, C.compose(g, f)) != C.compose(C.compose(h, g), f))
          return Verdict::fail("associativity", C.arrows[h].name + "." + C.arrows[g].name + "." + C.arrows[f].name);
      }
    }
  return Verdict::pass();
}

// Universal properties of the declared terminal object and products.
inline Verdict check_limits(const FiniteCategory& C) {
  if (C.terminal)
    for (std::size_t x = 0; x < C.size(); ++x)
      if (C.hom(x, *C.terminal).size() != 1) return Verdict::fail("terminal", C.objects[x]);
  for (const auto& [xy, pc] : C.products) {
    const auto [x, y] = xy;
    if (C.arrows[pc.p1].src != pc.obj || C.arrows[pc.p1].dst != x || C.arrows[pc.p2].src != pc.obj || C.arrows[pc.p2].dst != y)
      return Verdict::fail("product-projections", C.objects[x] + "x" + C.objects[y]);
    for (std::size_t w = 0; w < C.size(); ++w)
      for (std::size_t f : C.hom(w, x))
        for (std::size_t g : C.hom(w, y)) {
          std::size_t found = 0;
          for (std::size_t h : C.hom(w, pc.obj))
            if (C.compose(pc.p1, h) == f && C.compose(pc.p2, h) == g) ++found;
          if (found != 1)
            return Verdict::fail("product-universal", C.objects[x] + "x" + C.objects[y] + " <- " + C.arrows[f].name + "," + C.arrows[g].name);
        }
  }
  return Verdict::pass();
}

// Category whose arrows are the distinct composites of the given functions
// between finite sets, identities included.
struct ConcreteCategory {
  CategoryPtr C;
  std::vector<std::vector<std::size_t>> function;  // per arrow
};

inline ConcreteCategory concrete_category(std::vector<std::string> objects, const std::vector<std::size_t>& sizes,
                                          const std::vector<std::pair<Morphism, std::vector<std::size_t>>>& gens) {
  auto C = std::make_shared<FiniteCategory>();
  C->objects = std::move(objects);
  std::vector<std::vector<std::size_t>> fn;
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>, std::size_t> seen;
  auto add = [&](const Morphism& m, const std::vector<std::size_t>& f) {
    if (f.size() != sizes[m.src]) throw Error(Errc::ShapeMismatch, "concrete-arrow", m.name);
    for (auto v : f)
      if (v >= sizes[m.dst]) throw Error(Errc::ShapeMismatch, "concrete-arrow", m.name);
    auto [it, fresh] = seen.emplace(std::make_tuple(m.src, m.dst, f), C->arrows.size());
    if (fresh) {
      C->arrows.push_back(m);
      fn.push_back(f);
    }
    return it->second;
  };
  for (std::size_t x = 0; x < C->objects.size(); ++x) {
    std::vector<std::size_t> id(sizes[x]);
    std::iota(id.begin(), id.end(), 0);
    C->identity.push_back(add({x, x, "id_" + C->objects[x]}, id));
  }
  for (const auto& [m, f] : gens) add(m, f);
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = C->arrows.size();
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t f = 0; f < n; ++f) {
        if (C->arrows[f].dst != C->arrows[g].src) continue;
        std::vector<std::size_t> h(fn[f].size());
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = fn[g][fn[f][i]];
        const std::size_t before = C->arrows.size();
        add({C->arrows[f].src, C->arrows[g].dst, C->arrows[g].name + "." + C->arrows[f].name}, h);
        grew = grew || C->arrows.size() != before;
      }
  }
  const std::size_t n = C->arrows.size();
  C->comp.assign(n * n, FiniteCategory::npos);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) {
      if (C->arrows[f].dst != C->arrows[g].src) continue;
      std::vector<std::size_t> h(fn[f].size());
      for (std::size_t i = 0; i < h.size(); ++i) h[i] = fn[g][fn[f][i]];
      C->comp[g * n + f] = seen.at({C->arrows[f].src, C->arrows[g].dst, h});
    }
  return {C, std::move(fn)};
}

// ------------------------------------------------------------ set functors

struct SetFunctor {
  CategoryPtr C;
  std::vector<std::size_t> size;              // per object
  std::vector<std::vector<std::size_t>> map;  // per arrow
};

inline SetFunctor underlying_functor(const ConcreteCategory& cc) {
  SetFunctor F{cc.C, {}, cc.function};
  for (std::size_t x = 0; x < cc.C->size(); ++x) F.size.push_back(cc.function[cc.C->identity[x]].size());
  return F;
}

inline Verdict check_functor(const SetFunctor& F) {
  const auto& C = *F.C;
  if (F.size.size() != C.size() || F.map.size() != C.arrows.size()) throw Error(Errc::ShapeMismatch, "functor-shape", "object or arrow count");
  for (std::size_t f = 0; f < C.arrows.size(); ++f) {
    if (F.map[f].size() != F.size[C.arrows[f].src]) throw Error(Errc::ShapeMismatch, "functor-shape", C.arrows[f].name);
    for (auto v : F.map[f])
      if (v >= F.size[C.arrows[f].dst]) throw Error(Errc::ShapeMismatch, "functor-shape", C.arrows[f].name);
  }
  for (std::size_t x = 0; x < C.size(); ++x)
    for (std::size_t a = 0; a < F.size[x]; ++a)
      if (F.map[C.identity[x]][a] != a) return Verdict::fail("functor-identity", C.objects[x]);
  const std::size_t n = C.arrows.size();
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) {
      const std::size_t h = C.compose(g, f);
      if (h == FiniteCategory::npos) continue;
      for (std::size_t a = 0; a < F.size[C.arrows[f].src]; ++a)
        if (F.map[h][a] != F.map[g][F.map[f][a]]) return Verdict::fail("functor-composition", C.arrows[g].name + "." + C.arrows[f].name);
    }
  return Verdict::pass();
}

// Every functor C -> Set with the given object sizes.
template <class Fn>
void for_each_set_functor(const CategoryPtr& C, const std::vector<std::size_t>& sizes, Fn&& fn) {
  const auto& cat = *C;
  SetFunctor F{C, sizes, std::vector<std::vector<std::size_t>>(cat.arrows.size())};
  std::vector<std::size_t> free;
  for (std::size_t f = 0; f < cat.arrows.size(); ++f) {
    const auto& a = cat.arrows[f];
    F.map[f].assign(sizes[a.src], 0);
    if (f == cat.identity[a.src] && a.src == a.dst)
      std::iota(F.map[f].begin(), F.map[f].end(), 0);
    else
      free.push_back(f);
  }
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t pos) {
    if (i == free.size()) {
      if (check_functor(F)) fn(static_cast<const SetFunctor&>(F));
      return;
    }
    const std::size_t f = free[i];
    if (pos == F.map[f].size()) {
      rec(i + 1, 0);
      return;
    }
    for (std::size_t v = 0; v < sizes[cat.arrows[f].dst]; ++v) {
      F.map[f][pos] = v;
      rec(i, pos + 1);
    }
  };
  rec(0, 0);
}

// ------------------------------------------------------------------ cones

// lambda_X : FX x GX -> H for every object X.
struct Cone {
  SetFunctor F, G;
  LatticePtr H;
  std::vector<LRelation> lambda;
};

inline void check_cone_shape(const Cone& c) {
  const auto& C = *c.F.C;
  if (c.G.C != c.F.C) throw Error(Errc::ShapeMismatch, "cone-shape", "functors on different categories");
  if (c.lambda.size() != C.size()) throw Error(Errc::ShapeMismatch, "cone-shape", "one relation per object");
  for (std::size_t x = 0; x < C.size(); ++x)
    if (c.lambda[x].nx != c.F.size[x] || c.lambda[x].ny != c.G.size[x] || !same_lattice(c.lambda[x].H, c.H))
      throw Error(Errc::ShapeMismatch, "cone-shape", C.objects[x]);
}

// The two-valued image of the span X <-p- Z -q-> Y under F.
inline LRelation span_image(const SetFunctor& F, std::size_t p, std::size_t q) {
  const auto& C = *F.C;
  LRelation R(two(), F.size[C.arrows[p].dst], F.size[C.arrows[q].dst]);
  for (std::size_t z = 0; z < F.size[C.arrows[p].src]; ++z) R.at(F.map[p][z], F.map[q][z]) = two()->top();
  return R;
}

// Arrow kinds run over every arrow; the relation kind over every span of
// arrows with a common source.
inline Verdict check_cone(const Cone& c, Diagram kind) {
  check_cone_shape(c);
  const auto& C = *c.F.C;
  if (kind == Diagram::diamond) {
    for (std::size_t p = 0; p < C.arrows.size(); ++p)
      for (std::size_t q = 0; q < C.arrows.size(); ++q) {
        if (C.arrows[p].src != C.arrows[q].src) continue;
        DiagramData d;
        d.R = span_image(c.F, p, q);
        d.S = span_image(c.G, p, q);
        auto v = check_diagram(kind, d, c.lambda[C.arrows[p].dst], c.lambda[C.arrows[q].dst]);
        if (!v) return Verdict::fail("diamond", "span " + C.arrows[p].name + "," + C.arrows[q].name + " at " + v.witness);
      }
    return Verdict::pass();
  }
  for (std::size_t f = 0; f < C.arrows.size(); ++f) {
    DiagramData d;
    d.f = c.F.map[f];
    d.g = c.G.map[f];
    auto v = check_diagram(kind, d, c.lambda[C.arrows[f].src], c.lambda[C.arrows[f].dst]);
    if (!v) return Verdict::fail(v.check, C.arrows[f].name + " at " + v.witness);
  }
  return Verdict::pass();
}

inline bool is_bijection_cone(const Cone& c) {
  for (const auto& l : c.lambda)
    if (!check_axioms(l).bijection()) return false;
  return true;
}

inline bool is_function_cone(const Cone& c) {
  for (const auto& l : c.lambda)
    if (!check_axioms(l).function()) return false;
  return true;
}

// ------------------------------------------- natural transformations

using Transformation = std::vector<std::vector<std::size_t>>;  // theta_X : FX -> GX

inline Verdict check_natural(const SetFunctor& F, const SetFunctor& G, const Transformation& theta) {
  const auto& C = *F.C;
  for (std::size_t f = 0; f < C.arrows.size(); ++f) {
    const auto& a = C.arrows[f];
    for (std::size_t x = 0; x < F.size[a.src]; ++x)
      if (G.map[f][theta[a.src][x]] != theta[a.dst][F.map[f][x]]) return Verdict::fail("naturality", a.name + " at " + std::to_string(x));
  }
  return Verdict::pass();
}

inline Cone cone_of_transformation(const SetFunctor& F, const SetFunctor& G, const Transformation& theta) {
  Cone c{F, G, two(), {}};
  for (std::size_t x = 0; x < F.C->size(); ++x) {
    if (theta[x].size() != F.size[x]) throw Error(Errc::ShapeMismatch, "transformation-shape", F.C->objects[x]);
    c.lambda.push_back(graph(theta[x], G.size[x]));
  }
  return c;
}

// Inverse of cone_of_transformation on cones of functions into TWO.
inline Transformation transformation_of_cone(const Cone& c) {
  check_cone_shape(c);
  Transformation theta;
  for (std::size_t x = 0; x < c.lambda.size(); ++x) {
    if (!check_axioms(c.lambda[x]).function()) throw Error(Errc::NotAFunction, "cone-component", c.F.C->objects[x]);
    theta.push_back(tabulate(c.lambda[x]));
  }
  return theta;
}

// ------------------------------------------------------------ extension

// Extends a cone known on the full subcategory `sub` to every object. For
// diamond1 each lambda_X(a, b) is computed from an arrow f: C -> X with
// a = F(f)(c) as \/_{y : G(f)(y) = b} lambda_C(c, y); diamond2 is symmetric and
// diamond requires both to agree. Every admissible choice is evaluated.
inline Cone extend_cone(const Cone& c, const std::vector<std::size_t>& sub, Diagram kind) {
  if (kind == Diagram::triangle) throw Error(Errc::ShapeMismatch, "extend-cone", "triangle cones do not extend");
  const auto& C = *c.F.C;
  const auto& H = *c.H;
  std::vector<bool> in(C.size(), false);
  for (auto x : sub) in[x] = true;
  Cone out = c;
  out.lambda.resize(C.size(), LRelation(c.H, 0, 0));
  const bool one = kind == Diagram::diamond1 || kind == Diagram::diamond;
  const bool two_ = kind == Diagram::diamond2 || kind == Diagram::diamond;
  for (std::size_t x = 0; x < C.size(); ++x) {
    if (in[x]) continue;
    LRelation r(c.H, c.F.size[x], c.G.size[x]);
    for (std::size_t a = 0; a < r.nx; ++a)
      for (std::size_t b = 0; b < r.ny; ++b) {
        std::optional<elem> v1, v2;
        for (std::size_t f = 0; f < C.arrows.size(); ++f) {
          const auto& ar = C.arrows[f];
          if (ar.dst != x || !in[ar.src]) continue;
          const auto& lc = c.lambda[ar.src];
          if (one)
            for (std::size_t cc = 0; cc < c.F.size[ar.src]; ++cc) {
              if (c.F.map[f][cc] != a) continue;
              elem acc = H.bottom();
              for (std::size_t y = 0; y < c.G.size[ar.src]; ++y)
                if (c.G.map[f][y] == b) acc = H.join(acc, lc(cc, y));
              if (v1 && *v1 != acc) throw Error(Errc::Inconsistent, "extension-1", C.objects[x] + " " + pair_witness(a, b));
              v1 = acc;
            }
          if (two_)
            for (std::size_t cc = 0; cc < c.G.size[ar.src]; ++cc) {
              if (c.G.map[f][cc] != b) continue;
              elem acc = H.bottom();
              for (std::size_t y = 0; y < c.F.size[ar.src]; ++y)
                if (c.F.map[f][y] == a) acc = H.join(acc, lc(y, cc));
              if (v2 && *v2 != acc) throw Error(Errc::Inconsistent, "extension-2", C.objects[x] + " " + pair_witness(a, b));
              v2 = acc;
            }
        }
        if ((one && !v1) || (two_ && !v2)) throw Error(Errc::NotDense, "extension", C.objects[x] + " " + pair_witness(a, b));
        if (one && two_ && *v1 != *v2) throw Error(Errc::Inconsistent, "extension-agree", C.objects[x] + " " + pair_witness(a, b));
        r.at(a, b) = one ? *v1 : *v2;
      }
    out.lambda[x] = std::move(r);
  }
  return out;
}

// ------------------------------------------------------------ compatibility

// Commutative algebra in sup-lattices: bilinear multiplication with unit.
struct CommutativeAlgebra {
  LatticePtr H;
  std::vector<elem> mul;  // [a * |H| + b]
  elem unit = 0;

  elem operator()(elem a, elem b) const { return mul[a * H->size() + b]; }
};

inline CommutativeAlgebra meet_algebra(const LocalePtr& H) {
  CommutativeAlgebra A{H, std::vector<elem>(H->size() * H->size()), H->top()};
  for (elem a = 0; a < H->size(); ++a)
    for (elem b = 0; b < H->size(); ++b) A.mul[a * H->size() + b] = H->meet(a, b);
  return A;
}

inline Verdict check_commutative_algebra(const CommutativeAlgebra& A) {
  const auto& H = *A.H;
  const std::size_t n = H.size();
  for (elem a = 0; a < n; ++a) {
    if (A(a, A.unit) != a) return Verdict::fail("algebra-unit", H.name(a));
    if (A(a, H.bottom()) != H.bottom()) return Verdict::fail("algebra-bottom", H.name(a));
    for (elem b = 0; b < n; ++b) {
      if (A(a, b) != A(b, a)) return Verdict::fail("algebra-commutative", pair_witness(a, b));
      for (elem c = 0; c < n; ++c) {
        if (A(A(a, b), c) != A(a, A(b, c))) return Verdict::fail("algebra-associative", triple_witness(a, b, c));
        if (A(a, H.join(b, c)) != H.join(A(a, b), A(a, c))) return Verdict::fail("algebra-bilinear", triple_witness(a, b, c));
      }
    }
  }
  return Verdict::pass();
}

struct CompatibilityReport {
  Verdict c1, c2;
  bool ok() const { return c1.ok && c2.ok; }
};

namespace detail {
// z in F(X x Y) for each pair (a, b) in FX x FY; throws unless bijective.
inline std::vector<std::size_t> product_index(const SetFunctor& F, std::size_t x, std::size_t y, const ProductCone& pc) {
  const std::size_t nx = F.size[x], ny = F.size[y];
  std::vector<std::size_t> idx(nx * ny, FiniteCategory::npos);
  if (F.size[pc.obj] != nx * ny) throw Error(Errc::ShapeMismatch, "product-preservation", F.C->objects[pc.obj]);
  for (std::size_t z = 0; z < F.size[pc.obj]; ++z) {
    auto& slot = idx[F.map[pc.p1][z] * ny + F.map[pc.p2][z]];
    if (slot != FiniteCategory::npos) throw Error(Errc::ShapeMismatch, "product-preservation", F.C->objects[pc.obj]);
    slot = z;
  }
  return idx;
}
}  // namespace detail

inline CompatibilityReport check_compatible(const Cone& c, const CommutativeAlgebra& A) {
  check_cone_shape(c);
  if (!same_lattice(c.H, A.H)) throw Error(Errc::ShapeMismatch, "compatible", "vertex differs from algebra carrier");
  const auto& C = *c.F.C;
  if (!C.terminal) throw Error(Errc::NoProducts, "compatible", "no terminal object");
  CompatibilityReport rep;
  for (const auto& [xy, pc] : C.products) {
    const auto [x, y] = xy;
    auto zf = detail::product_index(c.F, x, y, pc);
    auto zg = detail::product_index(c.G, x, y, pc);
    const std::size_t nfy = c.F.size[y], ngy = c.G.size[y];
    for (std::size_t a = 0; a < c.F.size[x] && rep.c1.ok; ++a)
      for (std::size_t a2 = 0; a2 < c.G.size[x] && rep.c1.ok; ++a2)
        for (std::size_t b = 0; b < nfy && rep.c1.ok; ++b)
          for (std::size_t b2 = 0; b2 < ngy; ++b2)
            if (A(c.lambda[x](a, a2), c.lambda[y](b, b2)) != c.lambda[pc.obj](zf[a * nfy + b], zg[a2 * ngy + b2])) {
              rep.c1 = Verdict::fail("C1", C.objects[x] + "x" + C.objects[y] + " (" + std::to_string(a) + "," + std::to_string(a2) + "," +
                                               std::to_string(b) + "," + std::to_string(b2) + ")");
              break;
            }
    if (!rep.c1.ok) break;
  }
  const std::size_t t = *C.terminal;
  if (c.F.size[t] != 1 || c.G.size[t] != 1) throw Error(Errc::ShapeMismatch, "compatible", "terminal not preserved");
  if (c.lambda[t](0, 0) != A.unit) rep.c2 = Verdict::fail("C2", C.objects[t]);
  return rep;
}

// True when the values of the cone generate the vertex under joins.
inline bool cone_generates(const Cone& c) {
  const auto& H = *c.H;
  std::vector<bool> hit(H.size(), false);
  for (const auto& l : c.lambda)
    for (auto v : l.table) hit[v] = true;
  for (elem h = 0; h < H.size(); ++h) {
    elem acc = H.bottom();
    for (elem v = 0; v < H.size(); ++v)
      if (hit[v] && H.leq(v, h)) acc = H.join(acc, v);
    if (acc != h) return false;
  }
  return true;
}

}  // namespace sltk
