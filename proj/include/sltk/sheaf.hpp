#pragma once

#include "sltk/duality.hpp"
#include "sltk/relation.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace sltk {

// ------------------------------------------------------------------ sheaves

// Sections X(p) = {0, ..., count[p] - 1}; res[p][q] restricts X(p) -> X(q)
// for q <= p and is empty otherwise.
struct FiniteSheaf {
  LocalePtr P;
  std::vector<std::size_t> count;
  std::vector<std::vector<std::vector<elem>>> res;
  std::vector<std::size_t> offset;  // global section ids, filled by index()

  std::size_t sections(elem p) const { return count[p]; }
  elem restrict(elem p, elem q, elem x) const { return res[p][q][x]; }
  std::size_t total() const {
    std::size_t t = 0;
    for (elem p = 0; p < P->size(); ++p)
      if (p != P->bottom()) t += count[p];
    return t;
  }
  std::size_t section_count() const { return offset.back(); }
  std::size_t section_id(elem p, elem x) const { return offset[p] + x; }
  std::pair<elem, elem> section(std::size_t id) const {
    auto it = std::upper_bound(offset.begin(), offset.end(), id);
    elem p = static_cast<elem>(it - offset.begin() - 1);
    return {p, static_cast<elem>(id - offset[p])};
  }
  void index() {
    offset.assign(P->size() + 1, 0);
    for (elem p = 0; p < P->size(); ++p) offset[p + 1] = offset[p] + count[p];
  }
};

using SheafPtr = std::shared_ptr<const FiniteSheaf>;

namespace detail {

inline std::string cover_witness(const SupLattice& P, elem p, elem a, elem b) {
  return P.name(p) + " = " + P.name(a) + " v " + P.name(b);
}

// Irreducibles of P in ascending linear order.
inline std::vector<elem> ordered_irreducibles(const SupLattice& P) {
  std::vector<elem> out;
  for (elem a : P.linear_order())
    if (P.is_irreducible(a)) out.push_back(a);
  return out;
}

}  // namespace detail

// Functoriality, X(bottom) = point, and gluing for binary covers, which on a
// finite distributive P implies gluing for every cover.
inline Verdict check_sheaf(const FiniteSheaf& X) {
  const auto& P = *X.P;
  const std::size_t n = P.size();
  if (X.count.size() != n || X.res.size() != n) throw Error(Errc::ValidationError, "sheaf-shape", "one entry per element");
  for (elem p = 0; p < n; ++p) {
    if (X.res[p].size() != n) throw Error(Errc::ValidationError, "sheaf-shape", P.name(p));
    for (elem q = 0; q < n; ++q) {
      if (!P.leq(q, p)) continue;
      const auto& r = X.res[p][q];
      if (r.size() != X.count[p]) throw Error(Errc::ValidationError, "restriction-shape", P.name(p) + "->" + P.name(q));
      for (elem v : r)
        if (v >= X.count[q]) throw Error(Errc::ValidationError, "restriction-range", P.name(p) + "->" + P.name(q));
    }
  }
  for (elem p = 0; p < n; ++p) {
    for (elem x = 0; x < X.count[p]; ++x)
      if (X.res[p][p][x] != x) return Verdict::fail("restriction-identity", P.name(p));
    for (elem q = 0; q < n; ++q) {
      if (!P.leq(q, p) || q == p) continue;
      for (elem r = 0; r < n; ++r) {
        if (!P.leq(r, q)) continue;
        for (elem x = 0; x < X.count[p]; ++x)
          if (X.res[q][r][X.res[p][q][x]] != X.res[p][r][x])
            return Verdict::fail("restriction-functor", P.name(p) + ">" + P.name(q) + ">" + P.name(r));
      }
    }
  }
  if (X.count[P.bottom()] != 1) return Verdict::fail("gluing", "empty cover of " + P.name(P.bottom()));
  for (elem p = 0; p < n; ++p)
    for (elem a = 0; a < n; ++a) {
      if (!P.leq(a, p)) continue;
      for (elem b = a; b < n; ++b) {
        if (!P.leq(b, p) || P.join(a, b) != p) continue;
        const elem c = P.meet(a, b);
        std::set<std::pair<elem, elem>> image;
        for (elem x = 0; x < X.count[p]; ++x) image.insert({X.res[p][a][x], X.res[p][b][x]});
        std::size_t compatible = 0;
        for (elem xa = 0; xa < X.count[a]; ++xa)
          for (elem xb = 0; xb < X.count[b]; ++xb)
            if (X.res[a][c][xa] == X.res[b][c][xb]) {
              ++compatible;
              if (!image.count({xa, xb})) return Verdict::fail("gluing", detail::cover_witness(P, p, a, b));
            }
        if (image.size() != X.count[p] || compatible != X.count[p])
          return Verdict::fail("gluing", detail::cover_witness(P, p, a, b));
      }
    }
  return Verdict::pass();
}

inline void require_sheaf(const FiniteSheaf& X) {
  auto v = check_sheaf(X);
  if (!v) throw Error(v.check == "gluing" ? Errc::GluingFails : Errc::ValidationError, v.check, v.witness);
}

// A presheaf on the irreducibles J(P); res maps (j, k) with k < j.
struct IrreduciblePresheaf {
  LocalePtr P;
  std::map<elem, std::size_t> count;
  std::map<std::pair<elem, elem>, std::vector<elem>> res;
};

inline Verdict check_irreducible_presheaf(const IrreduciblePresheaf& F) {
  const auto& P = *F.P;
  const auto J = detail::ordered_irreducibles(P);
  for (elem j : J) {
    if (!F.count.count(j)) return Verdict::fail("presheaf-count", P.name(j));
    for (elem k : J) {
      if (k == j || !P.leq(k, j)) continue;
      auto it = F.res.find({j, k});
      if (it == F.res.end() || it->second.size() != F.count.at(j))
        return Verdict::fail("presheaf-restriction", P.name(j) + "->" + P.name(k));
      for (elem v : it->second)
        if (v >= F.count.at(k)) return Verdict::fail("presheaf-restriction", P.name(j) + "->" + P.name(k));
    }
  }
  for (elem j : J)
    for (elem k : J)
      for (elem l : J) {
        if (k == j || l == k || !P.leq(k, j) || !P.leq(l, k)) continue;
        const auto& jk = F.res.at({j, k});
        const auto& kl = F.res.at({k, l});
        const auto& jl = F.res.at({j, l});
        for (std::size_t x = 0; x < jk.size(); ++x)
          if (kl[jk[x]] != jl[x]) return Verdict::fail("presheaf-functor", P.name(j) + ">" + P.name(k) + ">" + P.name(l));
      }
  return Verdict::pass();
}

// X(p) = compatible families over the irreducibles below p. For irreducible j
// the section index in X(j) equals the presheaf index.
inline FiniteSheaf sheafify(const IrreduciblePresheaf& F) {
  if (auto v = check_irreducible_presheaf(F); !v) throw Error(Errc::ValidationError, v.check, v.witness);
  const auto& P = *F.P;
  const std::size_t n = P.size();
  const auto J = detail::ordered_irreducibles(P);
  FiniteSheaf X{F.P, std::vector<std::size_t>(n), std::vector<std::vector<std::vector<elem>>>(n), {}};
  std::vector<std::vector<elem>> Jp(n);                     // descending
  std::vector<std::vector<std::vector<elem>>> fam(n);       // families per p
  std::vector<std::map<std::vector<elem>, elem>> lookup(n);
  for (elem p = 0; p < n; ++p) {
    for (auto it = J.rbegin(); it != J.rend(); ++it)
      if (P.leq(*it, p)) Jp[p].push_back(*it);
    const auto& js = Jp[p];
    std::vector<elem> cur(js.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == js.size()) {
        lookup[p].emplace(cur, static_cast<elem>(fam[p].size()));
        fam[p].push_back(cur);
        return;
      }
      const elem j = js[i];
      elem forced = no_elem;
      for (std::size_t h = 0; h < i; ++h)
        if (P.leq(j, js[h])) {
          elem v = F.res.at({js[h], j})[cur[h]];
          if (forced != no_elem && forced != v) return;
          forced = v;
        }
      if (forced != no_elem) {
        cur[i] = forced;
        rec(i + 1);
        return;
      }
      for (elem v = 0; v < F.count.at(j); ++v) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    X.count[p] = fam[p].size();
  }
  for (elem p = 0; p < n; ++p) {
    X.res[p].resize(n);
    for (elem q = 0; q < n; ++q) {
      if (!P.leq(q, p)) continue;
      auto& r = X.res[p][q];
      r.resize(X.count[p]);
      for (elem x = 0; x < X.count[p]; ++x) {
        std::vector<elem> sub;
        for (std::size_t i = 0; i < Jp[p].size(); ++i)
          if (P.leq(Jp[p][i], q)) sub.push_back(fam[p][x][i]);
        r[x] = lookup[q].at(sub);
      }
    }
  }
  X.index();
  return X;
}

// Every presheaf on J(P) with at most `max_count` sections per irreducible.
template <class F>
void for_each_irreducible_presheaf(const LocalePtr& P, std::size_t max_count, F&& f) {
  const auto J = detail::ordered_irreducibles(*P);
  std::vector<std::pair<elem, elem>> pairs;
  for (elem j : J)
    for (elem k : J)
      if (k != j && P->leq(k, j)) pairs.push_back({j, k});
  IrreduciblePresheaf pre{P, {}, {}};
  std::function<void(std::size_t)> maps = [&](std::size_t i) {
    if (i == pairs.size()) {
      if (check_irreducible_presheaf(pre)) f(pre);
      return;
    }
    auto [j, k] = pairs[i];
    const std::size_t nj = pre.count[j], nk = pre.count[k];
    if (nj > 0 && nk == 0) return;
    std::size_t total = 1;
    for (std::size_t t = 0; t < nj; ++t) total *= nk;
    auto& m = pre.res[{j, k}];
    m.assign(nj, 0);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (auto& v : m) {
        v = static_cast<elem>(c % nk);
        c /= nk;
      }
      maps(i + 1);
    }
  };
  std::function<void(std::size_t)> counts = [&](std::size_t i) {
    if (i == J.size()) {
      maps(0);
      return;
    }
    for (std::size_t c = 0; c <= max_count; ++c) {
      pre.count[J[i]] = c;
      counts(i + 1);
    }
  };
  counts(0);
}

// Sheaves with total section count at most `max_total`.
inline std::vector<SheafPtr> enumerate_sheaves(const LocalePtr& P, std::size_t max_total) {
  std::vector<SheafPtr> out;
  for_each_irreducible_presheaf(P, max_total, [&](const IrreduciblePresheaf& pre) {
    std::size_t lower = 0;
    for (auto& [j, c] : pre.count) lower += c;
    if (lower > max_total) return;
    auto X = sheafify(pre);
    if (X.total() <= max_total) out.push_back(std::make_shared<const FiniteSheaf>(std::move(X)));
  });
  return out;
}

// Sheaves whose stalk at every irreducible has at most `per_stalk` sections.
inline std::vector<SheafPtr> enumerate_sheaves_by_stalk(const LocalePtr& P, std::size_t per_stalk) {
  std::vector<SheafPtr> out;
  for_each_irreducible_presheaf(P, per_stalk, [&](const IrreduciblePresheaf& pre) {
    out.push_back(std::make_shared<const FiniteSheaf>(sheafify(pre)));
  });
  return out;
}

inline FiniteSheaf terminal_sheaf(const LocalePtr& P) {
  IrreduciblePresheaf pre{P, {}, {}};
  for (elem j : P->irreducibles()) pre.count[j] = 1;
  for (elem j : P->irreducibles())
    for (elem k : P->irreducibles())
      if (k != j && P->leq(k, j)) pre.res[{j, k}] = {0};
  return sheafify(pre);
}

// Sheafification of the constant presheaf with value {0, ..., n-1}.
inline FiniteSheaf constant_sheaf(const LocalePtr& P, std::size_t n) {
  IrreduciblePresheaf pre{P, {}, {}};
  std::vector<elem> id(n);
  std::iota(id.begin(), id.end(), 0);
  for (elem j : P->irreducibles()) pre.count[j] = n;
  for (elem j : P->irreducibles())
    for (elem k : P->irreducibles())
      if (k != j && P->leq(k, j)) pre.res[{j, k}] = id;
  return sheafify(pre);
}

// [[x = y]]_P for x in X(p), y in X(q).
inline elem eq_bracket(const FiniteSheaf& X, elem p, elem x, elem q, elem y) {
  const auto& P = *X.P;
  const elem pq = P.meet(p, q);
  elem acc = P.bottom();
  for (elem k : P.irreducibles_below(pq))
    if (X.restrict(p, k, x) == X.restrict(q, k, y)) acc = P.join(acc, k);
  return acc;
}

// ------------------------------------------------------------------ tilde

// M~(p) = {x | p.x = x}, Sigma the inclusion and rho^p_q = q.(-).
inline Verdict tilde_roundtrip(const Module& mod) {
  const auto& P = *mod.B;
  const auto& M = *mod.M;
  auto fixed = [&](elem p, elem x) { return mod(p, x) == x; };
  for (elem x = 0; x < M.size(); ++x)
    if (!fixed(P.top(), x)) return Verdict::fail("global-sections", M.name(x));
  for (elem p = 0; p < P.size(); ++p)
    for (elem q = 0; q < P.size(); ++q) {
      if (!P.leq(q, p)) continue;
      for (elem t = 0; t < M.size(); ++t) {
        if (!fixed(p, t)) continue;
        if (!fixed(q, mod(q, t))) return Verdict::fail("restriction", P.name(p) + ">" + P.name(q) + ":" + M.name(t));
        for (elem s = 0; s < M.size(); ++s) {
          if (!fixed(q, s)) continue;
          if (M.leq(s, t) != M.leq(s, mod(q, t)))
            return Verdict::fail("adjunction", P.name(q) + "<=" + P.name(p) + ":(" + M.name(s) + "," + M.name(t) + ")");
        }
      }
    }
  // rho^q_{p'} Sigma^q_p = Sigma^{p'}_{p ^ p'} rho^p_{p ^ p'}
  for (elem p = 0; p < P.size(); ++p)
    for (elem pp = 0; pp < P.size(); ++pp)
      for (elem s = 0; s < M.size(); ++s) {
        if (!fixed(p, s)) continue;
        if (mod(pp, s) != mod(P.meet(p, pp), s))
          return Verdict::fail("beck-chevalley", "(" + P.name(p) + "," + P.name(pp) + "," + M.name(s) + ")");
      }
  if (auto L = as_locale(mod.M)) {
    for (elem p = 0; p < P.size(); ++p)
      for (elem s = 0; s < M.size(); ++s) {
        if (!fixed(p, s)) continue;
        for (elem t = 0; t < M.size(); ++t)
          if (L->meet(mod(p, t), s) != L->meet(t, s))
            return Verdict::fail("frobenius", "(" + P.name(p) + "," + M.name(s) + "," + M.name(t) + ")");
      }
  }
  return Verdict::pass();
}

// ------------------------------------------------------------------ X_d

// Natural families theta_a: X(a) -> P_{<=a}, stored by their values on the
// sections over irreducibles.
struct DiscreteModule {
  SheafPtr X;
  Module module;
  std::vector<std::vector<elem>> family;  // element -> values on irreducible sections
  std::map<elem, std::size_t> joff;       // irreducible -> offset into a family
  std::vector<elem> delta;                // per global section id

  const SupLattice& P() const { return *X->P; }
  std::size_t size() const { return family.size(); }
  // theta_p(x) = \/_{j <= p} theta_j(x|j)
  elem value(elem theta, elem p, elem x) const {
    elem acc = P().bottom();
    for (elem j : P().irreducibles_below(p)) acc = P().join(acc, family[theta][joff.at(j) + X->restrict(p, j, x)]);
    return acc;
  }
  elem delta_of(elem p, elem x) const { return delta[X->section_id(p, x)]; }
};

inline DiscreteModule build_Xd(const SheafPtr& Xp) {
  const auto& X = *Xp;
  const auto& P = *X.P;
  require_sheaf(X);
  const auto J = detail::ordered_irreducibles(P);
  DiscreteModule d;
  d.X = Xp;
  std::size_t width = 0;
  for (elem j : J) {
    d.joff[j] = width;
    width += X.count[j];
  }
  std::vector<elem> cur(width);
  std::function<void(std::size_t, elem)> rec = [&](std::size_t i, elem x) {
    if (i == J.size()) {
      d.family.push_back(cur);
      return;
    }
    const elem j = J[i];
    if (x == X.count[j]) {
      rec(i + 1, 0);
      return;
    }
    for (elem h : P.linear_order()) {
      if (!P.leq(h, j)) continue;
      bool ok = true;
      for (std::size_t t = 0; t < i && ok; ++t) {
        const elem k = J[t];
        if (P.leq(k, j) && k != j) ok = P.meet(k, h) == cur[d.joff[k] + X.restrict(j, k, x)];
      }
      if (!ok) continue;
      cur[d.joff[j] + x] = h;
      rec(i, x + 1);
    }
  };
  rec(0, 0);
  const std::size_t n = d.family.size();
  std::map<std::vector<elem>, elem> index;
  std::vector<std::string> names(n);
  for (elem t = 0; t < n; ++t) {
    index.emplace(d.family[t], t);
    std::string nm = "[";
    for (std::size_t i = 0; i < width; ++i) nm += (i ? "," : "") + P.name(d.family[t][i]);
    names[t] = nm + "]";
  }
  auto carrier = lattice_from_order(
      names,
      [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < width; ++i)
          if (!P.leq(d.family[a][i], d.family[b][i])) return false;
        return true;
      },
      true);
  d.module = Module{X.P, carrier, std::vector<elem>(P.size() * n)};
  for (elem p = 0; p < P.size(); ++p)
    for (elem t = 0; t < n; ++t) {
      auto v = d.family[t];
      for (auto& e : v) e = P.meet(p, e);
      d.module.act[p * n + t] = index.at(v);
    }
  d.delta.resize(X.section_count());
  for (elem p = 0; p < P.size(); ++p)
    for (elem x = 0; x < X.count[p]; ++x) {
      std::vector<elem> v(width);
      for (elem j : J)
        for (elem y = 0; y < X.count[j]; ++y) {
          elem acc = P.bottom();
          for (elem k : P.irreducibles_below(P.meet(j, p)))
            if (X.restrict(j, k, y) == X.restrict(p, k, x)) acc = P.join(acc, k);
          v[d.joff[j] + y] = acc;
        }
      d.delta[X.section_id(p, x)] = index.at(v);
    }
  return d;
}

// q . delta_x = delta_{x|p^q} and theta = \/ theta_p(x) . delta_x.
inline Verdict check_discrete(const DiscreteModule& d) {
  const auto& X = *d.X;
  const auto& P = d.P();
  const auto& M = *d.module.M;
  for (elem p = 0; p < P.size(); ++p)
    for (elem x = 0; x < X.count[p]; ++x)
      for (elem q = 0; q < P.size(); ++q) {
        const elem pq = P.meet(p, q);
        if (d.module(q, d.delta_of(p, x)) != d.delta_of(pq, X.restrict(p, pq, x)))
          return Verdict::fail("delta-restriction", "(" + P.name(p) + "," + std::to_string(x) + "," + P.name(q) + ")");
      }
  for (elem t = 0; t < d.size(); ++t) {
    elem acc = M.bottom();
    for (elem p = 0; p < P.size(); ++p)
      for (elem x = 0; x < X.count[p]; ++x) acc = M.join(acc, d.module(d.value(t, p, x), d.delta_of(p, x)));
    if (acc != t) return Verdict::fail("delta-generation", M.name(t));
  }
  return Verdict::pass();
}

// eps(delta_x (x) delta_y) = [[x = y]]_P, eta(1) = \/ delta_x (x) delta_x.
inline DualityData selfdual_Xd(const DiscreteModule& d) {
  const auto& X = *d.X;
  const auto& P = d.P();
  const std::size_t n = d.size();
  DualityData out{d.module, d.module, std::vector<elem>(n * n), {}};
  std::vector<std::pair<elem, elem>> jsec;
  for (auto [j, off] : d.joff)
    for (elem x = 0; x < X.count[j]; ++x) jsec.push_back({j, x});
  for (elem a = 0; a < n; ++a)
    for (elem b = 0; b < n; ++b) {
      elem acc = P.bottom();
      for (auto [j, x] : jsec) {
        const elem ta = d.family[a][d.joff.at(j) + x];
        if (ta == P.bottom()) continue;
        for (auto [k, y] : jsec) {
          const elem tb = d.family[b][d.joff.at(k) + y];
          acc = P.join(acc, P.meet(P.meet(ta, tb), eq_bracket(X, j, x, k, y)));
        }
      }
      out.eps[a * n + b] = acc;
    }
  for (elem p = 0; p < P.size(); ++p)
    for (elem x = 0; x < X.count[p]; ++x) out.eta.push_back({d.delta_of(p, x), d.delta_of(p, x)});
  return out;
}

// ------------------------------------------------------- internal relations

// lambda_p: X(p) x Y(p) -> H~(p) with H a P-module whose carrier is a locale.
struct InternalRelation {
  SheafPtr X, Y;
  Module H;
  std::vector<std::vector<elem>> value;  // [p][x * |Y(p)| + y]

  elem operator()(elem p, elem x, elem y) const { return value[p][x * Y->count[p] + y]; }
  elem unit(elem p) const { return H(p, H.M->top()); }
};

inline Verdict check_internal_relation(const InternalRelation& r) {
  const auto& P = *r.X->P;
  const auto& X = *r.X;
  const auto& Y = *r.Y;
  if (!same_lattice(r.H.B, r.X->P) || !same_lattice(r.H.B, r.Y->P))
    throw Error(Errc::DomainMismatch, "internal-relation", "base locales differ");
  for (elem p = 0; p < P.size(); ++p)
    for (elem x = 0; x < X.count[p]; ++x)
      for (elem y = 0; y < Y.count[p]; ++y) {
        const elem h = r(p, x, y);
        if (r.H(p, h) != h) return Verdict::fail("section-support", "(" + P.name(p) + "," + std::to_string(x) + "," + std::to_string(y) + ")");
        for (elem q = 0; q < P.size(); ++q)
          if (P.leq(q, p) && r(q, X.restrict(p, q, x), Y.restrict(p, q, y)) != r.H(q, h))
            return Verdict::fail("naturality", "(" + P.name(p) + ">" + P.name(q) + "," + std::to_string(x) + "," + std::to_string(y) + ")");
      }
  return Verdict::pass();
}

// Extends values given on irreducible stages: lambda_p = \/_{j <= p} lambda_j.
inline void extend_from_irreducibles(InternalRelation& r) {
  const auto& P = *r.X->P;
  const auto& M = *r.H.M;
  for (elem p = 0; p < P.size(); ++p) {
    if (P.is_irreducible(p)) continue;
    auto& v = r.value[p];
    v.assign(r.X->count[p] * r.Y->count[p], M.bottom());
    for (elem x = 0; x < r.X->count[p]; ++x)
      for (elem y = 0; y < r.Y->count[p]; ++y) {
        elem acc = M.bottom();
        for (elem j : P.irreducibles_below(p)) acc = M.join(acc, r(j, r.X->restrict(p, j, x), r.Y->restrict(p, j, y)));
        v[x * r.Y->count[p] + y] = acc;
      }
  }
}

template <class F>
void for_each_internal_relation(const SheafPtr& X, const SheafPtr& Y, const Module& H, F&& f) {
  const auto& P = *X->P;
  const auto& M = *H.M;
  const auto J = detail::ordered_irreducibles(P);
  InternalRelation r{X, Y, H, std::vector<std::vector<elem>>(P.size())};
  for (elem p = 0; p < P.size(); ++p) r.value[p].assign(X->count[p] * Y->count[p], M.bottom());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t cell) {
    if (i == J.size()) {
      extend_from_irreducibles(r);
      f(static_cast<const InternalRelation&>(r));
      return;
    }
    const elem j = J[i];
    if (cell == r.value[j].size()) {
      rec(i + 1, 0);
      return;
    }
    const elem x = static_cast<elem>(cell / Y->count[j]), y = static_cast<elem>(cell % Y->count[j]);
    for (elem h = 0; h < M.size(); ++h) {
      if (H(j, h) != h) continue;
      bool ok = true;
      for (std::size_t t = 0; t < i && ok; ++t) {
        const elem k = J[t];
        if (k != j && P.leq(k, j)) ok = H(k, h) == r(k, X->restrict(j, k, x), Y->restrict(j, k, y));
      }
      if (!ok) continue;
      r.value[j][cell] = h;
      rec(i, cell + 1);
    }
  };
  rec(0, 0);
}

// The internal equality of X as a relation into Omega_P.
inline InternalRelation internal_diagonal(const SheafPtr& X) {
  const auto& P = *X->P;
  InternalRelation r{X, X, self_module(X->P), std::vector<std::vector<elem>>(P.size())};
  for (elem p = 0; p < P.size(); ++p) {
    r.value[p].resize(X->count[p] * X->count[p]);
    for (elem x = 0; x < X->count[p]; ++x)
      for (elem y = 0; y < X->count[p]; ++y) r.value[p][x * X->count[p] + y] = eq_bracket(*X, p, x, p, y);
  }
  return r;
}

// The four axioms read stage by stage: joins over q <= p and y in Y(q),
// equality weighted by the internal equality of sections over p.
inline AxiomReport internal_axioms(const InternalRelation& r) {
  const auto& P = *r.X->P;
  const auto& M = *r.H.M;
  const auto& X = *r.X;
  const auto& Y = *r.Y;
  auto w = [&](elem p, elem s) { return P.name(p) + ":" + std::to_string(s + 1); };
  AxiomReport out;
  auto defined = [&](bool left) -> Verdict {
    const auto& A = left ? X : Y;
    const auto& B = left ? Y : X;
    for (elem p = 0; p < P.size(); ++p)
      for (elem a = 0; a < A.count[p]; ++a) {
        elem acc = M.bottom();
        for (elem q = 0; q < P.size(); ++q) {
          if (!P.leq(q, p)) continue;
          const elem aq = A.restrict(p, q, a);
          for (elem b = 0; b < B.count[q]; ++b) acc = M.join(acc, left ? r(q, aq, b) : r(q, b, aq));
        }
        if (acc != r.unit(p)) return Verdict::fail(left ? "ed" : "su", w(p, a));
      }
    return Verdict::pass();
  };
  auto valued = [&](bool left) -> Verdict {
    const auto& A = left ? X : Y;
    const auto& B = left ? Y : X;
    for (elem p = 0; p < P.size(); ++p)
      for (elem a = 0; a < A.count[p]; ++a)
        for (elem b1 = 0; b1 < B.count[p]; ++b1)
          for (elem b2 = b1 + 1; b2 < B.count[p]; ++b2) {
            elem v1 = left ? r(p, a, b1) : r(p, b1, a);
            elem v2 = left ? r(p, a, b2) : r(p, b2, a);
            elem eq = r.H(eq_bracket(B, p, b1, p, b2), M.top());
            if (!M.leq(as_locale(r.H.M)->meet(v1, v2), eq))
              return Verdict::fail(left ? "uv" : "in", P.name(p) + ":(" + std::to_string(a + 1) + "," + std::to_string(b1 + 1) + "," + std::to_string(b2 + 1) + ")");
          }
    return Verdict::pass();
  };
  out.ed = defined(true);
  out.uv = valued(true);
  out.su = defined(false);
  out.in = valued(false);
  return out;
}

// mu(delta_x (x) delta_y) on every pair of global sections.
struct MuTable {
  SheafPtr X, Y;
  Module H;
  std::vector<elem> value;  // [section_id(x) * |sections(Y)| + section_id(y)]

  elem operator()(std::size_t sx, std::size_t sy) const { return value[sx * Y->section_count() + sy]; }
};

// mu(delta_x (x) delta_y) = lambda_{p^q}(x|p^q, y|p^q)
inline MuTable lambda_to_mu(const InternalRelation& r) {
  const auto& P = *r.X->P;
  const auto& X = *r.X;
  const auto& Y = *r.Y;
  MuTable mu{r.X, r.Y, r.H, std::vector<elem>(X.section_count() * Y.section_count())};
  for (elem p = 0; p < P.size(); ++p)
    for (elem x = 0; x < X.count[p]; ++x)
      for (elem q = 0; q < P.size(); ++q)
        for (elem y = 0; y < Y.count[q]; ++y) {
          const elem pq = P.meet(p, q);
          mu.value[X.section_id(p, x) * Y.section_count() + Y.section_id(q, y)] =
              r(pq, X.restrict(p, pq, x), Y.restrict(q, pq, y));
        }
  return mu;
}

// lambda_p(x, y) = p . mu(delta_x (x) delta_y)
inline InternalRelation mu_to_lambda(const MuTable& mu) {
  const auto& P = *mu.X->P;
  InternalRelation r{mu.X, mu.Y, mu.H, std::vector<std::vector<elem>>(P.size())};
  for (elem p = 0; p < P.size(); ++p) {
    r.value[p].resize(mu.X->count[p] * mu.Y->count[p]);
    for (elem x = 0; x < mu.X->count[p]; ++x)
      for (elem y = 0; y < mu.Y->count[p]; ++y)
        r.value[p][x * mu.Y->count[p] + y] = mu.H(p, mu(mu.X->section_id(p, x), mu.Y->section_id(p, y)));
  }
  return r;
}

// The bimorphism X_d x Y_d -> H(1) generated by mu on irreducible sections.
inline std::vector<elem> mu_pairing(const MuTable& mu, const DiscreteModule& dX, const DiscreteModule& dY) {
  const auto& M = *mu.H.M;
  const auto& P = dX.P();
  std::vector<std::pair<std::size_t, std::size_t>> xs, ys;  // (offset, section id)
  for (auto [j, off] : dX.joff)
    for (elem x = 0; x < mu.X->count[j]; ++x) xs.push_back({off + x, mu.X->section_id(j, x)});
  for (auto [k, off] : dY.joff)
    for (elem y = 0; y < mu.Y->count[k]; ++y) ys.push_back({off + y, mu.Y->section_id(k, y)});
  std::vector<elem> out(dX.size() * dY.size());
  for (elem a = 0; a < dX.size(); ++a)
    for (elem b = 0; b < dY.size(); ++b) {
      elem acc = M.bottom();
      for (auto [ox, sx] : xs) {
        const elem ta = dX.family[a][ox];
        if (ta == P.bottom()) continue;
        for (auto [oy, sy] : ys) acc = M.join(acc, mu.H(P.meet(ta, dY.family[b][oy]), mu(sx, sy)));
      }
      out[a * dY.size() + b] = acc;
    }
  return out;
}

// mu is the restriction of a module morphism X_d (x)_P Y_d -> H(1).
inline Verdict check_mu(const MuTable& mu, const DiscreteModule& dX, const DiscreteModule& dY) {
  auto pairing = mu_pairing(mu, dX, dY);
  const auto& X = *mu.X;
  const auto& Y = *mu.Y;
  for (std::size_t sx = 0; sx < X.section_count(); ++sx)
    for (std::size_t sy = 0; sy < Y.section_count(); ++sy)
      if (pairing[dX.delta[sx] * dY.size() + dY.delta[sy]] != mu(sx, sy)) {
        auto [p, x] = X.section(sx);
        auto [q, y] = Y.section(sy);
        return Verdict::fail("generator-value", "(" + X.P->name(p) + ":" + std::to_string(x + 1) + "," +
                                                    Y.P->name(q) + ":" + std::to_string(y + 1) + ")");
      }
  return Verdict::pass();
}

// Module-level axioms on delta generators.
inline AxiomReport module_axioms(const MuTable& mu) {
  const auto& X = *mu.X;
  const auto& Y = *mu.Y;
  const auto& P = *X.P;
  const auto L = as_locale(mu.H.M);
  if (!L) throw Error(Errc::NotALocale, "module-axioms", "H carrier");
  const std::size_t ny = Y.section_count(), nx = X.section_count();
  auto w = [](const FiniteSheaf& S, std::size_t s) {
    auto [p, x] = S.section(s);
    return S.P->name(p) + ":" + std::to_string(x + 1);
  };
  AxiomReport out;
  for (std::size_t sx = 0; sx < nx && out.ed.ok; ++sx) {
    elem acc = L->bottom();
    for (std::size_t sy = 0; sy < ny; ++sy) acc = L->join(acc, mu(sx, sy));
    if (acc != mu.H(X.section(sx).first, L->top())) out.ed = Verdict::fail("ed", w(X, sx));
  }
  for (std::size_t sy = 0; sy < ny && out.su.ok; ++sy) {
    elem acc = L->bottom();
    for (std::size_t sx = 0; sx < nx; ++sx) acc = L->join(acc, mu(sx, sy));
    if (acc != mu.H(Y.section(sy).first, L->top())) out.su = Verdict::fail("su", w(Y, sy));
  }
  auto bracket = [&](const FiniteSheaf& S, std::size_t a, std::size_t b) {
    auto [p, x] = S.section(a);
    auto [q, y] = S.section(b);
    return mu.H(eq_bracket(S, p, x, q, y), L->top());
  };
  for (std::size_t sx = 0; sx < nx && out.uv.ok; ++sx)
    for (std::size_t a = 0; a < ny && out.uv.ok; ++a)
      for (std::size_t b = a + 1; b < ny; ++b)
        if (!L->leq(L->meet(mu(sx, a), mu(sx, b)), bracket(Y, a, b))) {
          out.uv = Verdict::fail("uv", "(" + w(X, sx) + "," + w(Y, a) + "," + w(Y, b) + ")");
          break;
        }
  for (std::size_t sy = 0; sy < ny && out.in.ok; ++sy)
    for (std::size_t a = 0; a < nx && out.in.ok; ++a)
      for (std::size_t b = a + 1; b < nx; ++b)
        if (!L->leq(L->meet(mu(a, sy), mu(b, sy)), bracket(X, a, b))) {
          out.in = Verdict::fail("in", "(" + w(X, a) + "," + w(X, b) + "," + w(Y, sy) + ")");
          break;
        }
  (void)P;
  return out;
}

// --------------------------------------------------- external correspondence

struct ExternalCorrespondence {
  InternalRelation phi;
  AxiomReport external;
  AxiomReport internal;
  bool function_agrees() const { return external.function() == internal.function(); }
};

// lambda: X x Y -> P gives phi_j(x, y) = j ^ lambda(x, y) on irreducible stages
// of the constant sheaves.
inline ExternalCorrespondence external_correspondence(const LRelation& lambda) {
  auto P = require_locale(lambda.H, "external-correspondence");
  auto X = std::make_shared<const FiniteSheaf>(constant_sheaf(P, lambda.nx));
  auto Y = std::make_shared<const FiniteSheaf>(constant_sheaf(P, lambda.ny));
  InternalRelation phi{X, Y, self_module(P), std::vector<std::vector<elem>>(P->size())};
  for (elem p = 0; p < P->size(); ++p) phi.value[p].assign(X->count[p] * Y->count[p], P->bottom());
  for (elem j : P->irreducibles())
    for (elem x = 0; x < lambda.nx; ++x)
      for (elem y = 0; y < lambda.ny; ++y) phi.value[j][x * lambda.ny + y] = P->meet(j, lambda(x, y));
  extend_from_irreducibles(phi);
  return {phi, check_axioms(lambda), internal_axioms(phi)};
}

// ------------------------------------------------------------ split bases

// Coproduct of finite locales realized as their sup-lattice tensor.
struct LocaleCoproduct {
  LocalePtr A, B, P;
  SupMap inA, inB;
};

inline LocaleCoproduct locale_coproduct(const LocalePtr& A, const LocalePtr& B) {
  auto T = tensor(A, B);
  const auto& q = *T.q;
  const std::size_t n = q.size();
  std::vector<std::string> names(n);
  for (elem t = 0; t < n; ++t) {
    std::string nm;
    for (elem a : A->irreducibles())
      for (elem b : B->irreducibles())
        if (q.leq(T.pure(a, b), q.element(t))) nm += (nm.empty() ? "" : "+") + A->name(a) + "*" + B->name(b);
    names[t] = nm.empty() ? "0" : nm;
  }
  auto L = as_locale(lattice_from_order(
      names, [&](std::size_t a, std::size_t b) { return q.element(a).is_subset_of(q.element(b)); }, true));
  LocaleCoproduct out{A, B, L, {A, L, std::vector<elem>(A->size())}, {B, L, std::vector<elem>(B->size())}};
  for (elem a = 0; a < A->size(); ++a) out.inA.table[a] = q.index_of(T.pure(a, B->top()));
  for (elem b = 0; b < B->size(); ++b) out.inB.table[b] = q.index_of(T.pure(A->top(), b));
  return out;
}

// Left adjoint of a meet-preserving f: A -> P.
inline elem lower_adjoint(const SupMap& f, elem k) {
  const auto& A = *f.dom;
  elem acc = A.top();
  for (elem a = 0; a < A.size(); ++a)
    if (f.cod->leq(k, f(a))) acc = A.meet(acc, a);
  return acc;
}

// Inverse image of X along the locale morphism f: A -> P.
inline FiniteSheaf pullback(const FiniteSheaf& X, const SupMap& f) {
  auto P = require_locale(f.cod, "pullback");
  IrreduciblePresheaf pre{P, {}, {}};
  for (elem k : P->irreducibles()) pre.count[k] = X.count[lower_adjoint(f, k)];
  for (elem k : P->irreducibles())
    for (elem l : P->irreducibles())
      if (l != k && P->leq(l, k)) pre.res[{k, l}] = X.res[lower_adjoint(f, k)][lower_adjoint(f, l)];
  return sheafify(pre);
}

// The section of f^*X over f(a) induced by x in X(a).
inline elem pullback_section(const FiniteSheaf& X, const SupMap& f, const FiniteSheaf& XP, elem a, elem x) {
  const auto& P = *f.cod;
  const elem p = f(a);
  for (elem s = 0; s < XP.count[p]; ++s) {
    bool ok = true;
    for (elem k : P.irreducibles_below(p))
      if (XP.restrict(p, k, s) != X.restrict(a, lower_adjoint(f, k), x)) {
        ok = false;
        break;
      }
    if (ok) return s;
  }
  throw Error(Errc::Inconsistent, "pullback-section", X.P->name(a) + ":" + std::to_string(x + 1));
}

// Axioms of mu over pulled-back sheaves, quantified over sections of X on A
// and of Y on B only.
inline AxiomReport split_axioms(const MuTable& mu, const LocaleCoproduct& co, const FiniteSheaf& X, const FiniteSheaf& Y) {
  const auto L = as_locale(mu.H.M);
  if (!L) throw Error(Errc::NotALocale, "split-axioms", "H carrier");
  const auto& XP = *mu.X;
  const auto& YP = *mu.Y;
  struct Sec {
    std::size_t id;
    elem base;
    std::string name;
  };
  std::vector<Sec> xs, ys;
  for (elem a = 0; a < co.A->size(); ++a)
    for (elem x = 0; x < X.count[a]; ++x)
      xs.push_back({XP.section_id(co.inA(a), pullback_section(X, co.inA, XP, a, x)), co.inA(a),
                    co.A->name(a) + ":" + std::to_string(x + 1)});
  for (elem b = 0; b < co.B->size(); ++b)
    for (elem y = 0; y < Y.count[b]; ++y)
      ys.push_back({YP.section_id(co.inB(b), pullback_section(Y, co.inB, YP, b, y)), co.inB(b),
                    co.B->name(b) + ":" + std::to_string(y + 1)});
  auto bracket = [&](const FiniteSheaf& S, std::size_t a, std::size_t b) {
    auto [p, x] = S.section(a);
    auto [q, y] = S.section(b);
    return mu.H(eq_bracket(S, p, x, q, y), L->top());
  };
  AxiomReport out;
  for (auto& sx : xs) {
    elem acc = L->bottom();
    for (auto& sy : ys) acc = L->join(acc, mu(sx.id, sy.id));
    if (acc != mu.H(sx.base, L->top())) {
      out.ed = Verdict::fail("ed", sx.name);
      break;
    }
  }
  for (auto& sy : ys) {
    elem acc = L->bottom();
    for (auto& sx : xs) acc = L->join(acc, mu(sx.id, sy.id));
    if (acc != mu.H(sy.base, L->top())) {
      out.su = Verdict::fail("su", sy.name);
      break;
    }
  }
  for (auto& sx : xs) {
    for (std::size_t a = 0; a < ys.size() && out.uv.ok; ++a)
      for (std::size_t b = a + 1; b < ys.size(); ++b)
        if (!L->leq(L->meet(mu(sx.id, ys[a].id), mu(sx.id, ys[b].id)), bracket(YP, ys[a].id, ys[b].id))) {
          out.uv = Verdict::fail("uv", "(" + sx.name + "," + ys[a].name + "," + ys[b].name + ")");
          break;
        }
    if (!out.uv.ok) break;
  }
  for (auto& sy : ys) {
    for (std::size_t a = 0; a < xs.size() && out.in.ok; ++a)
      for (std::size_t b = a + 1; b < xs.size(); ++b)
        if (!L->leq(L->meet(mu(xs[a].id, sy.id), mu(xs[b].id, sy.id)), bracket(XP, xs[a].id, xs[b].id))) {
          out.in = Verdict::fail("in", "(" + xs[a].name + "," + xs[b].name + "," + sy.name + ")");
          break;
        }
    if (!out.in.ok) break;
  }
  return out;
}

}  // namespace sltk
