#pragma once

#include "sltk/present.hpp"

namespace sltk {

// Right dual of a left B-module M: Mdual with eps: M x Mdual -> B and
// eta a formal join of pure tensors p (x) q in Mdual (x)_B M.
struct DualityData {
  Module M;
  Module Mdual;
  std::vector<elem> eps;                    // [m * |Mdual| + n]
  std::vector<std::pair<elem, elem>> eta;  // (p in Mdual, q in M)

  elem epsilon(elem m, elem n) const { return eps[m * Mdual.size() + n]; }
};

// m |-> \/ eps(m, p) . q
inline elem triangle_m(const DualityData& d, elem m) {
  elem acc = d.M.M->bottom();
  for (auto [p, q] : d.eta) acc = d.M.M->join(acc, d.M(d.epsilon(m, p), q));
  return acc;
}

// n |-> \/ p . eps(q, n)
inline elem triangle_dual(const DualityData& d, elem n) {
  elem acc = d.Mdual.M->bottom();
  for (auto [p, q] : d.eta) acc = d.Mdual.M->join(acc, d.Mdual(d.epsilon(q, n), p));
  return acc;
}

// eps is a bimorphism, B-balanced on both sides.
inline Verdict check_pairing(const DualityData& d) {
  const auto& B = *d.M.B;
  const auto& M = *d.M.M;
  const auto& N = *d.Mdual.M;
  if (d.eps.size() != M.size() * N.size()) throw Error(Errc::DomainMismatch, "eps-shape", "table size");
  for (elem n = 0; n < N.size(); ++n)
    if (d.epsilon(M.bottom(), n) != B.bottom()) return Verdict::fail("eps-bottom", N.name(n));
  for (elem m = 0; m < M.size(); ++m)
    if (d.epsilon(m, N.bottom()) != B.bottom()) return Verdict::fail("eps-bottom", M.name(m));
  for (elem m = 0; m < M.size(); ++m)
    for (elem n = 0; n < N.size(); ++n) {
      for (elem j : M.irreducibles())
        if (d.epsilon(M.join(m, j), n) != B.join(d.epsilon(m, n), d.epsilon(j, n)))
          return Verdict::fail("eps-join-left", "(" + M.name(m) + "," + M.name(j) + "," + N.name(n) + ")");
      for (elem j : N.irreducibles())
        if (d.epsilon(m, N.join(n, j)) != B.join(d.epsilon(m, n), d.epsilon(m, j)))
          return Verdict::fail("eps-join-right", "(" + M.name(m) + "," + N.name(n) + "," + N.name(j) + ")");
      for (elem b : B.irreducibles()) {
        if (d.epsilon(d.M(b, m), n) != B.meet(b, d.epsilon(m, n)))
          return Verdict::fail("eps-linear-left", "(" + B.name(b) + "," + M.name(m) + "," + N.name(n) + ")");
        if (d.epsilon(m, d.Mdual(b, n)) != B.meet(d.epsilon(m, n), b))
          return Verdict::fail("eps-linear-right", "(" + M.name(m) + "," + N.name(n) + "," + B.name(b) + ")");
      }
    }
  return Verdict::pass();
}

inline Verdict check_duality(const DualityData& d) {
  if (!same_lattice(d.M.B, d.Mdual.B)) throw Error(Errc::DomainMismatch, "duality-base", "different base locales");
  if (auto v = check_pairing(d); !v) return v;
  for (elem m = 0; m < d.M.size(); ++m)
    if (triangle_m(d, m) != m) return Verdict::fail("triangular-right", d.M.M->name(m));
  for (elem n = 0; n < d.Mdual.size(); ++n)
    if (triangle_dual(d, n) != n) return Verdict::fail("triangular-left", d.Mdual.M->name(n));
  return Verdict::pass();
}

inline void require_duality(const DualityData& d) {
  if (auto v = check_duality(d); !v) throw Error(Errc::TriangularFails, v.check, v.witness);
}

// B over itself: eps = meet, eta = top (x) top.
inline DualityData unit_duality(const LocalePtr& B) {
  DualityData d{self_module(B), self_module(B), std::vector<elem>(B->size() * B->size()), {{B->top(), B->top()}}};
  for (elem a = 0; a < B->size(); ++a)
    for (elem b = 0; b < B->size(); ++b) d.eps[a * B->size() + b] = B->meet(a, b);
  return d;
}

// f: M -> N gives f^: Ndual -> Mdual, n' |-> \/_{(p,q) in eta_M} p . eps_N(f(q), n').
inline SupMap dual_morphism(const SupMap& f, const DualityData& dM, const DualityData& dN) {
  if (f.table.size() != dM.M.size()) throw Error(Errc::DomainMismatch, "dual-morphism", "domain");
  SupMap g{dN.Mdual.M, dM.Mdual.M, std::vector<elem>(dN.Mdual.size())};
  for (elem n = 0; n < dN.Mdual.size(); ++n) {
    elem acc = dM.Mdual.M->bottom();
    for (auto [p, q] : dM.eta) acc = dM.Mdual.M->join(acc, dM.Mdual(dN.epsilon(f(q), n), p));
    g.table[n] = acc;
  }
  return g;
}

// Comparison iso between two duals of the same module: Mdual -> M'dual.
inline SupMap dual_comparison(const DualityData& d1, const DualityData& d2) {
  SupMap g{d1.Mdual.M, d2.Mdual.M, std::vector<elem>(d1.Mdual.size())};
  for (elem n = 0; n < d1.Mdual.size(); ++n) {
    elem acc = d2.Mdual.M->bottom();
    for (auto [p, q] : d2.eta) acc = d2.Mdual.M->join(acc, d2.Mdual(d1.epsilon(q, n), p));
    g.table[n] = acc;
  }
  return g;
}

// Coaction N -> L (x)_B M stored elementwise over a compact tensor whose first
// factor is L (right action) and second is M (left action).
struct Coaction {
  std::shared_ptr<const CompactTensor> LM;
  std::vector<Bits> value;
};

// rho(n) = \/_{(p,q) in eta} lambda(n, p) (x) q, with lambda: N x Mdual -> L.
inline Coaction lambda_to_rho(const std::vector<elem>& lambda, std::size_t n_size, const DualityData& dM,
                              std::shared_ptr<const CompactTensor> LM) {
  Coaction rho{std::move(LM), {}};
  const std::size_t nd = dM.Mdual.size();
  rho.value.reserve(n_size);
  for (std::size_t n = 0; n < n_size; ++n) {
    Bits acc(rho.LM->generators());
    for (auto [p, q] : dM.eta) acc |= rho.LM->pure({lambda[n * nd + p], q});
    rho.value.push_back(rho.LM->closure(acc));
  }
  return rho;
}

// lambda(n, n') = \/_{(l,m) in rho(n)} l . eps(m, n').
inline std::vector<elem> rho_to_lambda(const Coaction& rho, const DualityData& dM) {
  const auto& Lf = rho.LM->factor(0);
  const auto& L = *Lf.M;
  if (Lf.right.empty()) throw Error(Errc::NotDualizable, "rho-to-lambda", "L has no right action");
  const std::size_t nd = dM.Mdual.size();
  std::vector<elem> lambda(rho.value.size() * nd);
  for (std::size_t n = 0; n < rho.value.size(); ++n)
    for (elem np = 0; np < nd; ++np) {
      elem acc = L.bottom();
      for_each_bit(rho.value[n], [&](std::size_t g) {
        auto t = rho.LM->decode(g);
        acc = L.join(acc, Lf.right[dM.epsilon(t[1], np) * L.size() + t[0]]);
      });
      lambda[n * nd + np] = acc;
    }
  return lambda;
}

}  // namespace sltk
