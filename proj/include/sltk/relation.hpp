#pragma once

#include "sltk/duality.hpp"

#include <numeric>

namespace sltk {

// Table X x Y -> H.
struct LRelation {
  LatticePtr H;
  std::size_t nx = 0, ny = 0;
  std::vector<elem> table;

  LRelation() = default;
  LRelation(LatticePtr h, std::size_t x, std::size_t y)
      : H(std::move(h)), nx(x), ny(y), table(x * y, H->bottom()) {}

  elem operator()(std::size_t x, std::size_t y) const { return table[x * ny + y]; }
  elem& at(std::size_t x, std::size_t y) { return table[x * ny + y]; }
  bool operator==(const LRelation& o) const { return nx == o.nx && ny == o.ny && table == o.table; }
};

inline std::string pair_witness(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
}
inline std::string triple_witness(std::size_t a, std::size_t b, std::size_t c) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(c + 1) + ")";
}

struct AxiomReport {
  Verdict ed, uv, su, in;
  bool function() const { return ed.ok && uv.ok; }
  bool opfunction() const { return su.ok && in.ok; }
  bool bijection() const { return function() && opfunction(); }
};

// Witnesses are 1-based and lexicographically least.
inline AxiomReport check_axioms(const LRelation& r) {
  auto H = require_locale(r.H, "axioms-require-locale");
  AxiomReport rep;
  for (std::size_t x = 0; x < r.nx && rep.ed.ok; ++x) {
    elem acc = H->bottom();
    for (std::size_t y = 0; y < r.ny; ++y) acc = H->join(acc, r(x, y));
    if (acc != H->top()) rep.ed = Verdict::fail("ed", "x=" + std::to_string(x + 1));
  }
  for (std::size_t x = 0; x < r.nx && rep.uv.ok; ++x)
    for (std::size_t y1 = 0; y1 < r.ny && rep.uv.ok; ++y1)
      for (std::size_t y2 = y1 + 1; y2 < r.ny; ++y2)
        if (H->meet(r(x, y1), r(x, y2)) != H->bottom()) {
          rep.uv = Verdict::fail("uv", triple_witness(x, y1, y2));
          break;
        }
  for (std::size_t y = 0; y < r.ny && rep.su.ok; ++y) {
    elem acc = H->bottom();
    for (std::size_t x = 0; x < r.nx; ++x) acc = H->join(acc, r(x, y));
    if (acc != H->top()) rep.su = Verdict::fail("su", "y=" + std::to_string(y + 1));
  }
  for (std::size_t x1 = 0; x1 < r.nx && rep.in.ok; ++x1)
    for (std::size_t x2 = x1 + 1; x2 < r.nx && rep.in.ok; ++x2)
      for (std::size_t y = 0; y < r.ny; ++y)
        if (H->meet(r(x1, y), r(x2, y)) != H->bottom()) {
          rep.in = Verdict::fail("in", triple_witness(x1, x2, y));
          break;
        }
  return rep;
}

enum class RelationClass { bijection, function, opfunction, none };

inline std::string_view to_string(RelationClass c) {
  switch (c) {
    case RelationClass::bijection: return "bijection";
    case RelationClass::function: return "function";
    case RelationClass::opfunction: return "opfunction";
    case RelationClass::none: return "none";
  }
  return "none";
}

inline RelationClass classify(const LRelation& r) {
  auto a = check_axioms(r);
  if (a.bijection()) return RelationClass::bijection;
  if (a.function()) return RelationClass::function;
  if (a.opfunction()) return RelationClass::opfunction;
  return RelationClass::none;
}

inline LRelation graph(const std::vector<std::size_t>& f, std::size_t ny) {
  LRelation r(two(), f.size(), ny);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] >= ny) throw Error(Errc::DomainMismatch, "graph", "value out of range");
    r.at(x, f[x]) = 1;
  }
  return r;
}

inline LRelation diagonal(std::size_t n) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  return graph(id, n);
}

inline std::vector<std::size_t> tabulate(const LRelation& r) {
  if (r.H->size() != 2) throw Error(Errc::Mismatch, "tabulate-omega", "relation is not two-valued");
  auto a = check_axioms(r);
  if (!a.ed) throw Error(Errc::NotEverywhereDefined, a.ed.check, a.ed.witness);
  if (!a.uv) throw Error(Errc::NotUnivalued, a.uv.check, a.uv.witness);
  std::vector<std::size_t> f(r.nx);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y)
      if (r(x, y) == r.H->top()) f[x] = y;
  return f;
}

inline LRelation transpose(const LRelation& r) {
  LRelation t(r.H, r.ny, r.nx);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t y = 0; y < r.ny; ++y) t.at(y, x) = r(x, y);
  return t;
}

inline LRelation compose(const LRelation& r, const LRelation& s) {
  if (r.ny != s.nx) throw Error(Errc::Mismatch, "compose-middle", std::to_string(r.ny) + "!=" + std::to_string(s.nx));
  if (!same_lattice(r.H, s.H)) throw Error(Errc::Mismatch, "compose-values", "different value lattices");
  auto H = require_locale(r.H, "compose-requires-locale");
  LRelation c(r.H, r.nx, s.ny);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t z = 0; z < s.ny; ++z) {
      elem acc = H->bottom();
      for (std::size_t y = 0; y < r.ny; ++y) acc = H->join(acc, H->meet(r(x, y), s(y, z)));
      c.at(x, z) = acc;
    }
  return c;
}

// ((x,x'),(y,y')) |-> r(x,y) /\ r'(x',y'); pairs indexed as x * |X'| + x'.
inline LRelation boxtimes(const LRelation& r, const LRelation& s) {
  if (!same_lattice(r.H, s.H)) throw Error(Errc::Mismatch, "boxtimes-values", "different value lattices");
  auto H = require_locale(r.H, "boxtimes-requires-locale");
  LRelation b(r.H, r.nx * s.nx, r.ny * s.ny);
  for (std::size_t x = 0; x < r.nx; ++x)
    for (std::size_t x2 = 0; x2 < s.nx; ++x2)
      for (std::size_t y = 0; y < r.ny; ++y)
        for (std::size_t y2 = 0; y2 < s.ny; ++y2)
          b.at(x * s.nx + x2, y * s.ny + y2) = H->meet(r(x, y), s(x2, y2));
  return b;
}

struct Images {
  FunctionLattice HX, HY;
  SupMap direct;   // H^X -> H^Y
  SupMap inverse;  // H^Y -> H^X
};

inline Images images(const LRelation& r) {
  auto H = require_locale(r.H, "images-require-locale");
  Images im{function_lattice(H, r.nx), function_lattice(H, r.ny), {}, {}};
  std::vector<elem> fx(r.nx), fy(r.ny);
  for (std::size_t x = 0; x < r.nx; ++x) {
    std::vector<elem> v(r.ny);
    for (std::size_t y = 0; y < r.ny; ++y) v[y] = r(x, y);
    fx[x] = im.HY.encode(v);
  }
  for (std::size_t y = 0; y < r.ny; ++y) {
    std::vector<elem> v(r.nx);
    for (std::size_t x = 0; x < r.nx; ++x) v[x] = r(x, y);
    fy[y] = im.HX.encode(v);
  }
  im.direct = extend_to_free(im.HX, im.HY.module, fx);
  im.inverse = extend_to_free(im.HY, im.HX.module, fy);
  return im;
}

// ------------------------------------------------------------ self-duality

struct SelfDuality {
  FunctionLattice HX;
  TensorProduct tensor;  // H^X (x)_H H^X, lazy
  DualityData duality;
  Bits eta;  // \/_x {x} (x) {x} as tensor generators
};

inline SelfDuality selfduality(const LocalePtr& H, std::size_t X) {
  auto F = function_lattice(H, X);
  const std::size_t n = F.carrier->size();
  SelfDuality sd{F, tensor_over(F.module, F.module, 0), {F.module, F.module, std::vector<elem>(n * n), {}}, {}};
  for (elem a = 0; a < n; ++a)
    for (elem b = 0; b < n; ++b) {
      elem acc = H->bottom();
      for (std::size_t x = 0; x < X; ++x) acc = H->join(acc, H->meet(F.value(a, x), F.value(b, x)));
      sd.duality.eps[a * n + b] = acc;
    }
  sd.eta = Bits(sd.tensor.q->generators());
  for (std::size_t x = 0; x < X; ++x) {
    sd.duality.eta.push_back({F.singleton[x], F.singleton[x]});
    sd.eta.set(sd.tensor.gen(F.singleton[x], F.singleton[x]));
  }
  // eps must factor through the tensor over H.
  induced_morphism(sd.tensor.q, H, sd.duality.eps);
  require_duality(sd.duality);
  return sd;
}

// The map H^Y -> H^X obtained from mu(theta (x) phi) = \/ theta(x) /\ phi(y) /\ r(x,y)
// through the duality of H^X: phi |-> \/_x mu({x} (x) phi) . {x}.
inline SupMap inverse_image_via_duality(const LRelation& r, const SelfDuality& dX, const FunctionLattice& HY) {
  auto H = require_locale(r.H, "duality-image");
  const auto& F = dX.HX;
  SupMap g{HY.carrier, F.carrier, std::vector<elem>(HY.carrier->size())};
  for (elem phi = 0; phi < HY.carrier->size(); ++phi) {
    elem acc = F.carrier->bottom();
    for (auto [p, q] : dX.duality.eta) {
      // mu(q (x) phi) with q a singleton
      elem m = H->bottom();
      for (std::size_t x = 0; x < F.X; ++x)
        for (std::size_t y = 0; y < HY.X; ++y)
          m = H->join(m, H->meet(H->meet(F.value(q, x), HY.value(phi, y)), r(x, y)));
      acc = F.carrier->join(acc, F.module(m, p));
    }
    g.table[phi] = acc;
  }
  return g;
}

struct DualSwap {
  bool direct_is_dual_of_inverse = false;
  bool inverse_is_dual_of_direct = false;
};

inline DualSwap dual_swap(const LRelation& r) {
  auto H = require_locale(r.H, "dual-swap");
  auto im = images(r);
  auto dX = selfduality(H, r.nx);
  auto dY = selfduality(H, r.ny);
  DualSwap out;
  out.direct_is_dual_of_inverse = dual_morphism(im.inverse, dY.duality, dX.duality).table == im.direct.table;
  out.inverse_is_dual_of_direct = dual_morphism(im.direct, dX.duality, dY.duality).table == im.inverse.table;
  return out;
}

// ------------------------------------------------------------ diagrams

enum class Diagram { triangle, diamond, diamond1, diamond2 };

inline std::string_view to_string(Diagram d) {
  switch (d) {
    case Diagram::triangle: return "triangle";
    case Diagram::diamond: return "diamond";
    case Diagram::diamond1: return "diamond1";
    case Diagram::diamond2: return "diamond2";
  }
  return "?";
}

// f: X -> Y and g: X' -> Y' for the arrow kinds; R in X x Y and S in X' x Y'
// (two-valued) for the relation kind. r: X x X' -> H, r2: Y x Y' -> H.
struct DiagramData {
  std::vector<std::size_t> f, g;
  LRelation R, S;
};

inline Verdict check_diagram(Diagram kind, const DiagramData& d, const LRelation& r, const LRelation& r2) {
  const auto& H = *r.H;
  if (!same_lattice(r.H, r2.H)) throw Error(Errc::ShapeMismatch, "diagram-values", "different value lattices");
  auto shape = [&](bool ok) {
    if (!ok) throw Error(Errc::ShapeMismatch, std::string(to_string(kind)), "incompatible sizes");
  };
  switch (kind) {
    case Diagram::triangle:
      shape(d.f.size() == r.nx && d.g.size() == r.ny);
      for (std::size_t a = 0; a < r.nx; ++a)
        for (std::size_t b = 0; b < r.ny; ++b) {
          shape(d.f[a] < r2.nx && d.g[b] < r2.ny);
          if (!H.leq(r(a, b), r2(d.f[a], d.g[b]))) return Verdict::fail("triangle", pair_witness(a, b));
        }
      return Verdict::pass();
    case Diagram::diamond1:
      shape(d.f.size() == r.nx && d.g.size() == r.ny);
      for (std::size_t a = 0; a < r.nx; ++a)
        for (std::size_t b2 = 0; b2 < r2.ny; ++b2) {
          elem acc = H.bottom();
          for (std::size_t y = 0; y < r.ny; ++y)
            if (d.g[y] == b2) acc = H.join(acc, r(a, y));
          if (r2(d.f[a], b2) != acc) return Verdict::fail("diamond1", pair_witness(a, b2));
        }
      return Verdict::pass();
    case Diagram::diamond2:
      shape(d.f.size() == r.nx && d.g.size() == r.ny);
      for (std::size_t a2 = 0; a2 < r2.nx; ++a2)
        for (std::size_t b = 0; b < r.ny; ++b) {
          elem acc = H.bottom();
          for (std::size_t x = 0; x < r.nx; ++x)
            if (d.f[x] == a2) acc = H.join(acc, r(x, b));
          if (r2(a2, d.g[b]) != acc) return Verdict::fail("diamond2", pair_witness(a2, b));
        }
      return Verdict::pass();
    case Diagram::diamond:
      shape(d.R.nx == r.nx && d.R.ny == r2.nx && d.S.nx == r.ny && d.S.ny == r2.ny);
      for (std::size_t a = 0; a < r.nx; ++a)
        for (std::size_t b2 = 0; b2 < r2.ny; ++b2) {
          elem lhs = H.bottom(), rhs = H.bottom();
          for (std::size_t y = 0; y < r.ny; ++y)
            if (d.S(y, b2)) lhs = H.join(lhs, r(a, y));
          for (std::size_t x2 = 0; x2 < r2.nx; ++x2)
            if (d.R(a, x2)) rhs = H.join(rhs, r2(x2, b2));
          if (lhs != rhs) return Verdict::fail("diamond", pair_witness(a, b2));
        }
      return Verdict::pass();
  }
  return Verdict::pass();
}

struct RestrictedProduct {
  std::vector<std::pair<std::size_t, std::size_t>> Rpairs, Spairs;
  LRelation theta;
  Verdict diamond;
  AxiomReport axioms;
  bool equivalence_holds() const { return diamond.ok == axioms.bijection(); }
};

// theta = (r boxtimes r2) restricted to R x S, with r: X x X', r2: Y x Y',
// R in X x Y and S in X' x Y'.
inline RestrictedProduct restricted_product(const LRelation& R, const LRelation& S, const LRelation& r, const LRelation& r2) {
  if (!check_axioms(r).bijection() || !check_axioms(r2).bijection())
    throw Error(Errc::NotBijection, "restricted-product", "factors must be bijections");
  auto H = require_locale(r.H, "restricted-product");
  RestrictedProduct out;
  for (std::size_t x = 0; x < R.nx; ++x)
    for (std::size_t y = 0; y < R.ny; ++y)
      if (R(x, y)) out.Rpairs.push_back({x, y});
  for (std::size_t x = 0; x < S.nx; ++x)
    for (std::size_t y = 0; y < S.ny; ++y)
      if (S(x, y)) out.Spairs.push_back({x, y});
  out.theta = LRelation(r.H, out.Rpairs.size(), out.Spairs.size());
  for (std::size_t i = 0; i < out.Rpairs.size(); ++i)
    for (std::size_t j = 0; j < out.Spairs.size(); ++j)
      out.theta.at(i, j) = H->meet(r(out.Rpairs[i].first, out.Spairs[j].first), r2(out.Rpairs[i].second, out.Spairs[j].second));
  DiagramData dd;
  dd.R = R;
  dd.S = S;
  out.diamond = check_diagram(Diagram::diamond, dd, r, r2);
  out.axioms = check_axioms(out.theta);
  return out;
}

}  // namespace sltk
