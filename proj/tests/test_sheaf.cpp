#include <gtest/gtest.h>

#include "sltk/sheaf.hpp"

using namespace sltk;

namespace {

std::vector<LocalePtr> small_bases() { return {two(), chain(3), powerset(2)}; }

SheafPtr share(FiniteSheaf X) { return std::make_shared<const FiniteSheaf>(std::move(X)); }

// Sheaf on P2 with given stalks at the atoms.
SheafPtr p2_sheaf(std::size_t n1, std::size_t n2) {
  IrreduciblePresheaf pre{powerset(2), {{1, n1}, {2, n2}}, {}};
  return share(sheafify(pre));
}

// Hand-built sheaf on P2 with X(top) given explicitly.
FiniteSheaf p2_manual(std::size_t n1, std::size_t n2, std::vector<std::pair<elem, elem>> top) {
  auto P = powerset(2);
  FiniteSheaf X{P, {1, n1, n2, top.size()}, std::vector<std::vector<std::vector<elem>>>(4, std::vector<std::vector<elem>>(4)), {}};
  for (elem p = 0; p < 4; ++p) {
    X.res[p][p].resize(X.count[p]);
    std::iota(X.res[p][p].begin(), X.res[p][p].end(), 0);
    X.res[p][0].assign(X.count[p], 0);
  }
  for (auto [a, b] : top) {
    X.res[3][1].push_back(a);
    X.res[3][2].push_back(b);
  }
  X.index();
  return X;
}

// Natural families theta counted by brute force over every stage.
std::size_t oracle_xd_size(const FiniteSheaf& X) {
  const auto& P = *X.P;
  std::vector<std::pair<elem, elem>> secs;
  for (elem p = 0; p < P.size(); ++p)
    for (elem x = 0; x < X.count[p]; ++x) secs.push_back({p, x});
  std::vector<elem> val(secs.size());
  std::size_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == secs.size()) {
      for (std::size_t a = 0; a < secs.size(); ++a)
        for (elem q = 0; q < P.size(); ++q) {
          auto [p, x] = secs[a];
          if (!P.leq(q, p)) continue;
          std::size_t b = X.section_id(q, X.restrict(p, q, x));
          if (val[b] != P.meet(q, val[a])) return;
        }
      ++count;
      return;
    }
    for (elem h = 0; h < P.size(); ++h) {
      if (!P.leq(h, secs[i].first)) continue;
      val[i] = h;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

std::vector<SheafPtr> sheaves_up_to(const LocalePtr& P, std::size_t total) { return enumerate_sheaves(P, total); }

}  // namespace

TEST(Sheaf, SetsOverTwo) {
  for (std::size_t n = 0; n <= 3; ++n) {
    auto X = constant_sheaf(two(), n);
    EXPECT_TRUE(check_sheaf(X).ok);
    EXPECT_EQ(X.count[1], n);
    EXPECT_EQ(X.count[0], 1u);
  }
}

TEST(Sheaf, ProductGluingOnP2) {
  auto X = p2_manual(2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}});
  EXPECT_TRUE(check_sheaf(X).ok);
  auto bad = p2_manual(2, 2, {{0, 0}, {1, 1}});
  auto v = check_sheaf(bad);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.check, "gluing");
  EXPECT_EQ(v.witness, "{1,2} = {1} v {2}");
  try {
    require_sheaf(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GluingFails);
  }
  auto dup = p2_manual(1, 1, {{0, 0}, {0, 0}});
  EXPECT_FALSE(check_sheaf(dup).ok);
}

TEST(Sheaf, SheafifiedPresheavesAreSheaves) {
  std::vector<LocalePtr> bases = small_bases();
  for (auto& L : enumerate_distributive_lattices(5)) bases.push_back(L);
  for (auto& P : bases) {
    std::size_t seen = 0;
    for_each_irreducible_presheaf(P, 2, [&](const IrreduciblePresheaf& pre) {
      auto X = sheafify(pre);
      EXPECT_TRUE(check_sheaf(X).ok);
      for (auto [j, c] : pre.count) EXPECT_EQ(X.count[j], c);
      ++seen;
    });
    EXPECT_GT(seen, 0u);
  }
}

TEST(Sheaf, TotalSectionCountExcludesBottom) {
  EXPECT_EQ(p2_sheaf(1, 2)->total(), 5u);
  EXPECT_EQ(constant_sheaf(chain(3), 2).total(), 4u);
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 3)) EXPECT_LE(X->total(), 3u);
}

TEST(Sheaf, ConstantSheafOnP2) {
  auto X = constant_sheaf(powerset(2), 1);
  for (elem p = 0; p < 4; ++p) EXPECT_EQ(X.count[p], 1u);
  auto Y = constant_sheaf(powerset(2), 2);
  EXPECT_EQ(Y.count[3], 4u);
  auto Z = constant_sheaf(chain(3), 2);
  EXPECT_EQ(Z.count[2], 2u);
}

TEST(Xd, OverTwoIsPowerset) {
  for (std::size_t n = 0; n <= 3; ++n) {
    auto d = build_Xd(share(constant_sheaf(two(), n)));
    EXPECT_EQ(d.size(), std::size_t{1} << n);
    EXPECT_TRUE(find_isomorphism(*d.module.M, *power_locale(n).P).has_value());
    std::set<elem> deltas;
    for (elem x = 0; x < n; ++x) {
      deltas.insert(d.delta_of(1, x));
      EXPECT_TRUE(d.module.M->is_irreducible(d.delta_of(1, x)));
    }
    EXPECT_EQ(deltas.size(), n);
  }
}

TEST(Xd, EmptyStalkAtOneAtom) {
  auto d = build_Xd(p2_sheaf(1, 0));
  EXPECT_EQ(d.size(), 2u);
}

TEST(Xd, TerminalSheafGivesBase) {
  for (auto& P : small_bases()) {
    auto d = build_Xd(share(terminal_sheaf(P)));
    EXPECT_EQ(d.size(), P->size());
    EXPECT_TRUE(find_isomorphism(*d.module.M, *P).has_value());
    EXPECT_EQ(d.delta_of(P->top(), 0), d.module.M->top());
  }
}

TEST(Xd, SizeMatchesBruteForceAndInvariantsHold) {
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 4)) {
      auto d = build_Xd(X);
      EXPECT_EQ(d.size(), oracle_xd_size(*X));
      EXPECT_TRUE(check_module(d.module).ok);
      EXPECT_TRUE(check_discrete(d).ok);
      EXPECT_TRUE(tilde_roundtrip(d.module).ok);
    }
}

TEST(EqBracket, DiagonalAndDisjoint) {
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 3))
      for (elem p = 0; p < P->size(); ++p)
        for (elem x = 0; x < X->count[p]; ++x) EXPECT_EQ(eq_bracket(*X, p, x, p, x), p);
  auto X = p2_sheaf(1, 1);
  EXPECT_EQ(eq_bracket(*X, 1, 0, 2, 0), 0u);
}

TEST(EqBracket, ScalesDeltasIdentically) {
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 3)) {
      auto d = build_Xd(X);
      for (std::size_t a = 0; a < X->section_count(); ++a)
        for (std::size_t b = 0; b < X->section_count(); ++b) {
          auto [p, x] = X->section(a);
          auto [q, y] = X->section(b);
          elem e = eq_bracket(*X, p, x, q, y);
          EXPECT_EQ(d.module(e, d.delta[a]), d.module(e, d.delta[b]));
        }
    }
}

TEST(Tilde, SelfModuleAndBrokenAction) {
  for (auto& P : small_bases()) EXPECT_TRUE(tilde_roundtrip(self_module(P)).ok);
  auto m = self_module(chain(3));
  m.act[1 * 3 + 2] = 0;  // 1 . 2 = 0 while 1 . 1 = 1
  auto v = tilde_roundtrip(m);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.check, "adjunction");
  auto g = self_module(chain(3));
  g.act[2 * 3 + 1] = 2;
  EXPECT_EQ(tilde_roundtrip(g).check, "global-sections");
  auto F = function_lattice(chain(3), 2);
  EXPECT_TRUE(tilde_roundtrip(F.module).ok);
}

TEST(SelfDualXd, TriangularIdentities) {
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 3)) {
      auto d = build_Xd(X);
      auto dd = selfdual_Xd(d);
      EXPECT_TRUE(check_duality(dd).ok) << check_duality(dd).check;
      for (std::size_t a = 0; a < X->section_count(); ++a)
        for (std::size_t b = 0; b < X->section_count(); ++b) {
          auto [p, x] = X->section(a);
          auto [q, y] = X->section(b);
          EXPECT_EQ(dd.epsilon(d.delta[a], d.delta[b]), eq_bracket(*X, p, x, q, y));
        }
    }
}

TEST(SelfDualXd, OverTwoMatchesFunctionLattice) {
  for (std::size_t n = 0; n <= 3; ++n) {
    auto d = build_Xd(share(constant_sheaf(two(), n)));
    auto dd = selfdual_Xd(d);
    auto sd = selfduality(two(), n);
    ASSERT_EQ(dd.eps.size(), sd.duality.eps.size());
    auto iso = find_isomorphism(*d.module.M, *sd.HX.carrier);
    ASSERT_TRUE(iso.has_value());
    for (elem a = 0; a < d.size(); ++a)
      for (elem b = 0; b < d.size(); ++b) EXPECT_EQ(dd.epsilon(a, b), sd.duality.epsilon((*iso)[a], (*iso)[b]));
  }
}

TEST(SelfDualXd, TerminalIsUnitDuality) {
  for (auto& P : small_bases()) {
    auto d = build_Xd(share(terminal_sheaf(P)));
    auto dd = selfdual_Xd(d);
    EXPECT_TRUE(check_duality(dd).ok);
    std::set<elem> image;
    for (elem a = 0; a < d.size(); ++a) {
      image.insert(d.value(a, P->top(), 0));
      for (elem b = 0; b < d.size(); ++b)
        EXPECT_EQ(dd.epsilon(a, b), P->meet(d.value(a, P->top(), 0), d.value(b, P->top(), 0)));
    }
    EXPECT_EQ(image.size(), P->size());
  }
}

TEST(MuLambda, DiagonalGivesBracket) {
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 3)) {
      auto lam = internal_diagonal(X);
      EXPECT_TRUE(check_internal_relation(lam).ok);
      auto mu = lambda_to_mu(lam);
      for (std::size_t a = 0; a < X->section_count(); ++a)
        for (std::size_t b = 0; b < X->section_count(); ++b) {
          auto [p, x] = X->section(a);
          auto [q, y] = X->section(b);
          EXPECT_EQ(mu(a, b), eq_bracket(*X, p, x, q, y));
        }
      auto ax = module_axioms(mu);
      EXPECT_TRUE(ax.ed.ok && ax.uv.ok && ax.su.ok && ax.in.ok);
    }
}

TEST(MuLambda, RoundTripsAndScaling) {
  for (auto& P : small_bases()) {
    auto sheaves = sheaves_up_to(P, 2);
    for (auto& X : sheaves)
      for (auto& Y : sheaves) {
        auto dX = build_Xd(X), dY = build_Xd(Y);
        for_each_internal_relation(X, Y, self_module(P), [&](const InternalRelation& lam) {
          ASSERT_TRUE(check_internal_relation(lam).ok);
          auto mu = lambda_to_mu(lam);
          EXPECT_EQ(mu_to_lambda(mu).value, lam.value);
          EXPECT_EQ(lambda_to_mu(mu_to_lambda(mu)).value, mu.value);
          EXPECT_TRUE(check_mu(mu, dX, dY).ok);
          for (std::size_t a = 0; a < X->section_count(); ++a)
            for (std::size_t b = 0; b < Y->section_count(); ++b)
              for (elem r = 0; r < P->size(); ++r) {
                auto [p, x] = X->section(a);
                auto [q, y] = Y->section(b);
                const elem pqr = P->meet(P->meet(p, q), r);
                EXPECT_EQ(P->meet(r, mu(a, b)), lam(pqr, X->restrict(p, pqr, x), Y->restrict(q, pqr, y)));
              }
        });
      }
  }
}

TEST(MuLambda, PerturbedMuIsNotAModuleMap) {
  auto X = p2_sheaf(1, 1);
  auto dX = build_Xd(X);
  auto mu = lambda_to_mu(internal_diagonal(X));
  // raise mu on the pair of top sections while the atom pairs stay put
  mu.value[X->section_id(3, 0) * X->section_count() + X->section_id(3, 0)] = 1;
  EXPECT_FALSE(check_mu(mu, dX, dX).ok);
}

TEST(MuLambda, BottomMuFailsEd) {
  auto X = p2_sheaf(1, 1);
  MuTable mu{X, X, self_module(powerset(2)), std::vector<elem>(X->section_count() * X->section_count(), 0)};
  auto ax = module_axioms(mu);
  EXPECT_FALSE(ax.ed.ok);
  EXPECT_TRUE(ax.uv.ok);
}

TEST(MuLambda, InternalAndModuleAxiomsAgree) {
  for (auto& P : small_bases()) {
    std::size_t tested = 0, functions = 0;
    auto sheaves = enumerate_sheaves_by_stalk(P, 2);
    for (auto& X : sheaves)
      for (auto& Y : sheaves) {
        if (X->total() + Y->total() > 8) continue;
        for_each_internal_relation(X, Y, self_module(P), [&](const InternalRelation& lam) {
          auto a = internal_axioms(lam);
          auto b = module_axioms(lambda_to_mu(lam));
          EXPECT_EQ(a.ed.ok, b.ed.ok);
          EXPECT_EQ(a.uv.ok, b.uv.ok);
          EXPECT_EQ(a.su.ok, b.su.ok);
          EXPECT_EQ(a.in.ok, b.in.ok);
          functions += a.function();
          ++tested;
        });
      }
    EXPECT_GT(tested, 0u);
    EXPECT_GT(functions, 0u);
  }
}

TEST(MuLambda, DeltaTensorsJumpToMeet) {
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 2))
      for (auto& Y : sheaves_up_to(P, 2)) {
        auto dX = build_Xd(X), dY = build_Xd(Y);
        CompactTensor T(P, {TensorFactor::of(dX.module), TensorFactor::of(dY.module)});
        for (elem p = 0; p < P->size(); ++p)
          for (elem x = 0; x < X->count[p]; ++x)
            for (elem q = 0; q < P->size(); ++q)
              for (elem y = 0; y < Y->count[q]; ++y) {
                const elem pq = P->meet(p, q);
                EXPECT_TRUE(T.equal(T.pure({dX.delta_of(p, x), dY.delta_of(q, y)}),
                                    T.pure({dX.delta_of(pq, X->restrict(p, pq, x)), dY.delta_of(pq, Y->restrict(q, pq, y))})));
              }
      }
}

TEST(MuLambda, ExternalisedSupremumIsLeastUpperBound) {
  // alpha: X -> Omega_P natural; s = \/ alpha_p(x) is the least h with alpha_p(x) <= p ^ h.
  for (auto& P : small_bases())
    for (auto& X : sheaves_up_to(P, 3)) {
      auto one = share(terminal_sheaf(P));
      for_each_internal_relation(X, one, self_module(P), [&](const InternalRelation& a) {
        elem s = P->bottom();
        for (elem p = 0; p < P->size(); ++p)
          for (elem x = 0; x < X->count[p]; ++x) s = P->join(s, a(p, x, 0));
        elem least = no_elem;
        for (elem h : P->linear_order()) {
          bool ub = true;
          for (elem p = 0; p < P->size() && ub; ++p)
            for (elem x = 0; x < X->count[p]; ++x)
              if (!P->leq(a(p, x, 0), P->meet(p, h))) ub = false;
          if (ub && (least == no_elem || P->leq(h, least))) least = h;
        }
        EXPECT_EQ(s, least);
      });
    }
}

TEST(External, OverTwoIsIdentity) {
  LRelation r(two(), 2, 3);
  r.at(0, 1) = 1;
  r.at(1, 2) = 1;
  auto c = external_correspondence(r);
  EXPECT_EQ(c.phi.X->count[1], 2u);
  for (elem x = 0; x < 2; ++x)
    for (elem y = 0; y < 3; ++y) EXPECT_EQ(c.phi(1, x, y), r(x, y));
  EXPECT_TRUE(c.function_agrees());
  EXPECT_TRUE(c.internal.function());
}

TEST(External, FunctionsCorrespondOverP2) {
  auto P = powerset(2);
  std::size_t functions = 0;
  for (std::size_t nx = 0; nx <= 2; ++nx)
    for (std::size_t ny = 0; ny <= 2; ++ny) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < nx * ny; ++i) total *= 4;
      for (std::size_t code = 0; code < total; ++code) {
        LRelation r(P, nx, ny);
        std::size_t c = code;
        for (auto& v : r.table) {
          v = static_cast<elem>(c % 4);
          c /= 4;
        }
        auto corr = external_correspondence(r);
        EXPECT_TRUE(check_internal_relation(corr.phi).ok);
        EXPECT_TRUE(corr.function_agrees()) << nx << "x" << ny << " code " << code;
        EXPECT_EQ(corr.external.bijection(), corr.internal.bijection());
        functions += corr.external.function();
      }
    }
  EXPECT_GT(functions, 0u);
}

TEST(SplitBase, CoproductOfChains) {
  auto co = locale_coproduct(chain(3), chain(3));
  EXPECT_EQ(co.P->size(), 6u);
  EXPECT_TRUE(check_locale_morphism(co.inA).ok);
  EXPECT_TRUE(check_locale_morphism(co.inB).ok);
  auto sq = locale_coproduct(two(), powerset(2));
  EXPECT_TRUE(find_isomorphism(*sq.P, *powerset(2)).has_value());
  auto p4 = locale_coproduct(powerset(2), powerset(2));
  EXPECT_TRUE(find_isomorphism(*p4.P, *powerset(4)).has_value());
}

TEST(SplitBase, PulledBackDiscreteModules) {
  auto co = locale_coproduct(chain(3), powerset(2));
  for (auto& X : enumerate_sheaves(co.A, 3)) {
    auto XP = share(pullback(*X, co.inA));
    EXPECT_TRUE(check_sheaf(*XP).ok);
    auto dXP = build_Xd(XP);
    auto dX = build_Xd(X);
    auto T = tensor(dX.module.M, co.B);
    EXPECT_TRUE(find_isomorphism(*dXP.module.M, *T.q->lattice()).has_value());
  }
  for (auto& X : enumerate_sheaves(co.A, 2))
    for (auto& Y : enumerate_sheaves(co.B, 2)) {
      auto dXP = build_Xd(share(pullback(*X, co.inA)));
      auto dYP = build_Xd(share(pullback(*Y, co.inB)));
      CompactTensor over(co.P, {TensorFactor::of(dXP.module), TensorFactor::of(dYP.module)}, 1 << 16);
      auto plain = tensor(build_Xd(X).module.M, build_Xd(Y).module.M);
      EXPECT_TRUE(find_isomorphism(*over.presented()->lattice(), *plain.q->lattice()).has_value());
    }
}

TEST(SplitBase, SplitAxiomsAgreeWithInternal) {
  auto co = locale_coproduct(chain(3), two());
  auto co2 = locale_coproduct(two(), powerset(2));
  for (auto* c : {&co, &co2}) {
    std::size_t tested = 0;
    for (auto& X : enumerate_sheaves_by_stalk(c->A, 2))
      for (auto& Y : enumerate_sheaves_by_stalk(c->B, 2)) {
        auto XP = share(pullback(*X, c->inA));
        auto YP = share(pullback(*Y, c->inB));
        if (XP->total() + YP->total() > 8) continue;
        for_each_internal_relation(XP, YP, self_module(c->P), [&](const InternalRelation& lam) {
          auto a = internal_axioms(lam);
          auto b = split_axioms(lambda_to_mu(lam), *c, *X, *Y);
          EXPECT_EQ(a.ed.ok, b.ed.ok);
          EXPECT_EQ(a.uv.ok, b.uv.ok);
          EXPECT_EQ(a.su.ok, b.su.ok);
          EXPECT_EQ(a.in.ok, b.in.ok);
          ++tested;
        });
      }
    EXPECT_GT(tested, 0u);
  }
}
