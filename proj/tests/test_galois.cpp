#include <gtest/gtest.h>

#include "sltk/galois.hpp"

using namespace sltk;

namespace {

std::vector<GroupoidPtr> fixtures() {
  return {trivial_group(), cyclic_group(2), cyclic_group(3), codiscrete_groupoid(2), discrete_groupoid(2)};
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Permutations p of m points with p^n = id.
std::size_t oracle_cyclic_actions(std::size_t n, std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::size_t count = 0;
  do {
    std::vector<std::size_t> q(m);
    std::iota(q.begin(), q.end(), 0);
    for (std::size_t k = 0; k < n; ++k)
      for (auto& v : q) v = p[v];
    bool id = true;
    for (std::size_t i = 0; i < m; ++i) id = id && q[i] == i;
    count += id;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

std::size_t oracle_composable(const FiniteGroupoid& G) {
  std::size_t c = 0;
  for (std::size_t f = 0; f < G.size(); ++f)
    for (std::size_t g = 0; g < G.size(); ++g) c += G.src[f] == G.dst[g];
  return c;
}

// Tuples of n pairwise disjoint elements of A joining to top.
std::size_t oracle_partitions(const SupLattice& A, std::size_t n) {
  std::size_t count = 0, total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= A.size();
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<elem> v;
    for (std::size_t c = code, i = 0; i < n; ++i, c /= A.size()) v.push_back(static_cast<elem>(c % A.size()));
    bool ok = true;
    elem acc = A.bottom();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) ok = ok && A.meet(v[i], v[j]) == A.bottom();
    for (auto x : v) acc = A.join(acc, x);
    count += ok && acc == A.top();
  }
  return count;
}

std::vector<std::size_t> anchors_of(const std::vector<std::size_t>& fibers) {
  std::vector<std::size_t> a;
  for (std::size_t o = 0; o < fibers.size(); ++o) a.insert(a.end(), fibers[o], o);
  return a;
}

}  // namespace

// ------------------------------------------------------------ groupoids and actions

TEST(Groupoid, FixturesAreGroupoids) {
  for (auto& G : fixtures()) EXPECT_TRUE(check_groupoid(*G).ok) << G->name;
  EXPECT_EQ(groupoid_fixture("codiscrete2")->size(), 4u);
  EXPECT_THROW(groupoid_fixture("Z7"), Error);
}

TEST(Groupoid, BrokenInverseIsReported) {
  auto G = *cyclic_group(3);
  G.inv[1] = 1;
  auto v = check_groupoid(G);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.check, "inverse");
  EXPECT_EQ(v.witness, "g1");
  try {
    require_groupoid(G);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAGroupoid);
  }
}

TEST(Action, CountsMatchPermutationOracle) {
  for (std::size_t n : {1, 2, 3})
    for (std::size_t m = 0; m <= 4; ++m)
      EXPECT_EQ(enumerate_actions(*cyclic_group(n), {m}).size(), oracle_cyclic_actions(n, m)) << n << " " << m;
  auto C = codiscrete_groupoid(2);
  for (std::size_t a = 0; a <= 3; ++a)
    for (std::size_t b = 0; b <= 3; ++b) EXPECT_EQ(enumerate_actions(*C, {a, b}).size(), a == b ? factorial(a) : 0u);
}

TEST(Action, StandardConstructionsAreActions) {
  for (auto& Gp : fixtures()) {
    const auto& G = *Gp;
    auto one = terminal_action(G);
    EXPECT_TRUE(check_action(G, one).ok);
    for (std::size_t o = 0; o < G.objects; ++o) {
      auto R = regular_action(G, o);
      EXPECT_TRUE(check_action(G, R).ok);
      auto P = product_action(G, R, R);
      EXPECT_TRUE(check_action(G, P.action).ok);
      EXPECT_TRUE(check_action(G, coproduct_action(G, R, one)).ok);
    }
  }
}

TEST(Action, BrokenAssociativityIsReported) {
  auto G = cyclic_group(3);
  auto R = regular_action(*G, 0);
  std::swap(R.act[1 * 3 + 0], R.act[1 * 3 + 1]);
  EXPECT_FALSE(check_action(*G, R).ok);
}

TEST(Action, EquivarianceAgreesWithDiamondTwo) {
  for (auto& Gp : {cyclic_group(2), codiscrete_groupoid(2)}) {
    const auto& G = *Gp;
    for (const auto& fa : fiber_vectors(G.objects, 3))
      for (const auto& fb : fiber_vectors(G.objects, 2))
        for (const auto& A : enumerate_actions(G, fa))
          for (const auto& B : enumerate_actions(G, fb)) {
            std::vector<std::size_t> f(A.size());
            std::function<void(std::size_t)> rec = [&](std::size_t x) {
              if (x == A.size()) {
                auto r = check_action_morphism(G, A, B, f);
                EXPECT_TRUE(r.agree());
                return;
              }
              for (std::size_t b = 0; b < B.size(); ++b)
                if (B.anchor[b] == A.anchor[x]) {
                  f[x] = b;
                  rec(x + 1);
                }
            };
            rec(0);
          }
  }
  auto G = cyclic_group(2);
  auto R = regular_action(*G, 0);
  auto RR = coproduct_action(*G, R, R);
  auto fold = check_action_morphism(*G, RR, R, {0, 1, 0, 1});
  EXPECT_TRUE(fold.am.ok && fold.diamond2.ok);
  auto bad = check_action_morphism(*G, RR, R, {0, 0, 0, 1});
  EXPECT_FALSE(bad.am.ok || bad.diamond2.ok);
  EXPECT_THROW(check_action_morphism(*codiscrete_groupoid(2), regular_action(*codiscrete_groupoid(2), 0),
                                     regular_action(*codiscrete_groupoid(2), 0), {1, 0}),
               Error);
}

TEST(Action, CanonicalLambdaIsSplitBijection) {
  for (auto& Gp : fixtures()) {
    auto gh = groupoid_to_hopf(Gp);
    for (const auto& fib : fiber_vectors(Gp->objects, 3))
      for (const auto& A : enumerate_actions(*Gp, fib)) {
        auto r = action_lambda(*Gp, A, gh.L);
        std::vector<elem> rows, cols;
        for (auto o : A.anchor) {
          rows.push_back(gh.t(static_cast<elem>(1U << o)));
          cols.push_back(gh.s(static_cast<elem>(1U << o)));
        }
        EXPECT_TRUE(split_bijection(*gh.L, r, rows, cols).bijection());
        EXPECT_EQ(mu_to_action(*Gp, A.anchor, action_to_mu(*Gp, A)).act, A.act);
      }
  }
}

// ------------------------------------------------------------ the dual Hopf algebroid

TEST(GroupoidHopf, LawsHoldAndTensorSquareIsComposablePairs) {
  for (auto& Gp : fixtures()) {
    auto gh = groupoid_to_hopf(Gp);
    EXPECT_EQ(gh.composable.size(), oracle_composable(*Gp));
    EXPECT_EQ(gh.H.cog.LL->presentation().size(), std::size_t{1} << oracle_composable(*Gp));
    auto v = check_hopf(gh.H);
    EXPECT_TRUE(v.ok) << Gp->name << " " << v.check << " " << v.witness;
    EXPECT_TRUE(check_cogebroide(gh.H.cog).ok) << Gp->name;
  }
}

TEST(GroupoidHopf, WrongAntipodeFails) {
  auto gh = groupoid_to_hopf(cyclic_group(3));
  std::iota(gh.H.a.table.begin(), gh.H.a.table.end(), 0);
  EXPECT_FALSE(check_hopf(gh.H).ok);
}

// ------------------------------------------------------------ Y_d and comodules

TEST(Yd, PointsAreAtoms) {
  auto B = powerset(2);
  for (const auto& fib : fiber_vectors(2, 3)) {
    auto anchor = anchors_of(fib);
    auto Y = build_Yd(B, anchor);
    EXPECT_EQ(Y.size(), std::size_t{1} << anchor.size());
    EXPECT_TRUE(check_duality(Y.dual).ok);
    for (std::size_t x = 0; x < anchor.size(); ++x) {
      EXPECT_EQ(Y.module()(static_cast<elem>(1U << anchor[x]), Y.delta[x]), Y.delta[x]);
      EXPECT_EQ(Y.module()(static_cast<elem>(1U << (1 - anchor[x])), Y.delta[x]), Y.module().M->bottom());
    }
  }
}

TEST(Comodule, SearchFindsExactlyTheActions) {
  for (auto& Gp : fixtures()) {
    auto gh = groupoid_to_hopf(Gp);
    for (const auto& fib : fiber_vectors(Gp->objects, 3)) {
      auto anchor = anchors_of(fib);
      auto found = search_comodules(gh, anchor);
      std::set<std::vector<elem>> got(found.mus.begin(), found.mus.end()), want;
      for (const auto& A : enumerate_actions(*Gp, fib)) want.insert(action_to_mu(*Gp, A));
      EXPECT_EQ(got, want) << Gp->name;
    }
  }
}

// The bitmask filter against C1 and C2 evaluated in the tensor products, over
// every mu with cells inside the hom-sets.
TEST(Comodule, FilterMatchesTensorChecks) {
  for (auto& Gp : {cyclic_group(2), codiscrete_groupoid(2)}) {
    const auto& G = *Gp;
    auto gh = groupoid_to_hopf(Gp);
    for (const auto& fib : fiber_vectors(G.objects, 2)) {
      auto anchor = anchors_of(fib);
      const std::size_t n = anchor.size();
      auto Y = build_Yd(gh.B, anchor);
      auto LM = coaction_tensor(gh, Y);
      auto found = search_comodules(gh, anchor);
      std::set<std::vector<elem>> filtered(found.mus.begin(), found.mus.end());
      std::vector<std::uint32_t> hom(n * n);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (auto g : G.hom(anchor[y], anchor[x])) hom[x * n + y] |= 1U << g;
      std::vector<elem> mu(n * n);
      std::size_t accepted = 0;
      std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == n * n) {
          auto rho = mu_to_rho(Y, mu, LM);
          const bool tensor_ok = check_comodule(gh.H.cog, Y.dual, rho).ok();
          EXPECT_EQ(tensor_ok, filtered.count(mu) == 1);
          accepted += tensor_ok;
          return;
        }
        for (std::uint32_t U = hom[c];; U = (U - 1) & hom[c]) {
          mu[c] = U;
          rec(c + 1);
          if (U == 0) break;
        }
      };
      rec(0);
      EXPECT_EQ(accepted, filtered.size());
    }
  }
}

TEST(Comodule, RhoRoundTripAndLocaleMorphism) {
  auto Gp = cyclic_group(2);
  auto gh = groupoid_to_hopf(Gp);
  for (std::size_t m = 0; m <= 3; ++m) {
    auto anchor = anchors_of({m});
    auto Y = build_Yd(gh.B, anchor);
    auto LM = coaction_tensor(gh, Y);
    for (const auto& A : enumerate_actions(*Gp, {m})) {
      auto mu = action_to_mu(*Gp, A);
      auto rho = mu_to_rho(Y, mu, LM);
      EXPECT_EQ(rho_to_mu(Y, rho), mu);
      EXPECT_TRUE(comodule_is_locale_morphism(Y, rho).ok);
      EXPECT_TRUE(check_b1b2(gh.H.cog, Y.dual, mu_lambda_table(Y, mu)).ok());
    }
  }
}

// ------------------------------------------------------------ equivalence

TEST(Equivalence, ActionsAndComodulesAgree) {
  for (auto& Gp : fixtures()) {
    auto gh = groupoid_to_hopf(Gp);
    auto rep = equivalence_check(gh, Gp->objects == 1 ? 3 : 2);
    EXPECT_TRUE(rep.ok()) << Gp->name << " " << rep.witness;
    EXPECT_EQ(rep.actions, rep.comodules);
    EXPECT_EQ(rep.rel_homs, rep.cmd_homs);
    EXPECT_GT(rep.rel_homs, 0u);
  }
}

TEST(Equivalence, RelationHomsBetweenRegularAndTerminal) {
  // Fiberwise relations R_0 -> 1 for Z2: all four subsets of the two pairs;
  // only the total one is equivariant.
  auto G = cyclic_group(2);
  auto gh = groupoid_to_hopf(G);
  auto R = regular_action(*G, 0);
  auto one = terminal_action(*G);
  auto lr = action_lambda(*G, R, gh.L);
  auto lo = action_lambda(*G, one, gh.L);
  std::size_t homs = 0;
  for (auto rel : fiberwise_relations(R, one)) homs += restricted_action_axioms(gh, lr, lo, R, one, rel).bijection();
  EXPECT_EQ(homs, 2u);  // empty and total
}

// ------------------------------------------------------------ reconstruction

TEST(Reconstruction, RecoversDualHopfAlgebroid) {
  for (auto& Gp : {trivial_group(), cyclic_group(2), cyclic_group(3), codiscrete_groupoid(2)}) {
    auto r = reconstruct(Gp);
    EXPECT_EQ(r.coend.L->size(), std::size_t{1} << Gp->size());
    EXPECT_TRUE(r.laws.ok) << r.laws.check << " " << r.laws.witness;
    EXPECT_TRUE(r.bijective);
    ASSERT_EQ(r.matches.size(), 7u);
    for (auto& [name, v] : r.matches) EXPECT_TRUE(v.ok) << Gp->name << " " << name << " " << v.witness;
  }
}

TEST(Reconstruction, LargerSiteGivesSameCoend) {
  for (auto& Gp : {cyclic_group(2), codiscrete_groupoid(2)}) {
    auto s = site_independence(Gp);
    EXPECT_TRUE(s.ok()) << Gp->name << " " << s.small << " " << s.large;
  }
}

TEST(Reconstruction, CanonicalConesFactorUniquely) {
  for (auto& Gp : {trivial_group(), cyclic_group(2), codiscrete_groupoid(2)}) {
    auto r = reconstruct(Gp);
    auto f = universal_factorization(r, 6);
    std::size_t want = 0;
    for (auto& A : enumerate_distributive_lattices(6)) want += oracle_partitions(*A, Gp->size());
    EXPECT_EQ(f.cones, want) << Gp->name;
    EXPECT_TRUE(f.ok()) << f.witness;
  }
}
