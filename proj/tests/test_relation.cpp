#include <gtest/gtest.h>

#include "sltk/relation.hpp"

#include <random>

using namespace sltk;

namespace {

std::vector<LocalePtr> value_locales() { return {two(), chain(3), powerset(2)}; }

// Calls f for every table X x Y -> H.
template <class F>
void for_each_relation(const LocalePtr& H, std::size_t nx, std::size_t ny, F&& f) {
  std::size_t cells = nx * ny, total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= H->size();
  LRelation r(H, nx, ny);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& v : r.table) {
      v = static_cast<elem>(c % H->size());
      c /= H->size();
    }
    f(r);
  }
}

LRelation random_relation(std::mt19937_64& rng, const LocalePtr& H, std::size_t nx, std::size_t ny) {
  LRelation r(H, nx, ny);
  for (auto& v : r.table) v = static_cast<elem>(rng() % H->size());
  return r;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(Relation, AxiomExamples) {
  auto g = graph({0, 0}, 1);
  auto a = check_axioms(g);
  EXPECT_TRUE(a.ed.ok);
  EXPECT_TRUE(a.uv.ok);
  EXPECT_TRUE(a.su.ok);
  EXPECT_FALSE(a.in.ok);
  EXPECT_EQ(a.in.witness, "(1,2,1)");

  LRelation full(two(), 2, 2);
  for (auto& v : full.table) v = 1;
  auto b = check_axioms(full);
  EXPECT_TRUE(b.ed.ok);
  EXPECT_TRUE(b.su.ok);
  EXPECT_FALSE(b.uv.ok);
  EXPECT_FALSE(b.in.ok);

  LRelation single(powerset(2), 1, 1);
  single.at(0, 0) = 1;
  EXPECT_FALSE(check_axioms(single).ed.ok);

  LRelation bad(m3(), 1, 1);
  EXPECT_THROW(check_axioms(bad), Error);
}

TEST(Relation, ClassifyExamples) {
  EXPECT_EQ(classify(graph({1, 0, 2}, 3)), RelationClass::bijection);
  EXPECT_EQ(classify(graph({0, 1}, 3)), RelationClass::function);
  EXPECT_EQ(classify(transpose(graph({0, 0}, 1))), RelationClass::opfunction);
}

TEST(Relation, GraphExamples) {
  auto d = graph({0, 1, 2}, 3);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(d(x, y), x == y ? 1u : 0u);
  auto c = graph({1, 1, 1}, 2);
  for (std::size_t x = 0; x < 3; ++x) {
    EXPECT_EQ(c(x, 1), 1u);
    EXPECT_EQ(c(x, 0), 0u);
  }
}

TEST(Relation, TabulateExamples) {
  EXPECT_EQ(tabulate(graph({0, 1}, 2)), (std::vector<std::size_t>{0, 1}));
  LRelation full(two(), 2, 2);
  for (auto& v : full.table) v = 1;
  try {
    tabulate(full);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotUnivalued);
  }
  LRelation empty(two(), 1, 2);
  try {
    tabulate(empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotEverywhereDefined);
  }
}

TEST(Relation, FunctionsAreExactlyTabulable) {
  for (std::size_t nx = 0; nx <= 3; ++nx)
    for (std::size_t ny = 0; ny <= 3; ++ny) {
      std::size_t count = 0;
      for_each_relation(two(), nx, ny, [&](const LRelation& r) {
        if (check_axioms(r).function()) {
          ++count;
          auto f = tabulate(r);
          EXPECT_EQ(graph(f, ny), r);
        } else {
          EXPECT_THROW(tabulate(r), Error);
        }
      });
      EXPECT_EQ(count, ipow(ny, nx)) << nx << "x" << ny;
    }
}

TEST(Relation, BijectionTabulationsAreInverse) {
  for (std::size_t n = 1; n <= 3; ++n)
    for_each_relation(two(), n, n, [&](const LRelation& r) {
      if (!check_axioms(r).bijection()) return;
      auto f = tabulate(r);
      auto g = tabulate(transpose(r));
      for (std::size_t x = 0; x < n; ++x) EXPECT_EQ(g[f[x]], x);
    });
}

TEST(Relation, ImagesOfGraphAreImageAndPreimage) {
  std::vector<std::size_t> f{1, 1, 0};
  auto im = images(graph(f, 2));
  for (elem u = 0; u < 8; ++u) {
    elem img = 0;
    for (std::size_t x = 0; x < 3; ++x)
      if (u >> x & 1U) img |= 1U << f[x];
    EXPECT_EQ(im.direct(u), img);
  }
  for (elem v = 0; v < 4; ++v) {
    elem pre = 0;
    for (std::size_t x = 0; x < 3; ++x)
      if (v >> f[x] & 1U) pre |= 1U << x;
    EXPECT_EQ(im.inverse(v), pre);
  }
}

TEST(Relation, ImagesOfBottomAreBottom) {
  LRelation z(chain(3), 2, 2);
  auto im = images(z);
  for (elem v : im.direct.table) EXPECT_EQ(v, im.HY.carrier->bottom());
  for (elem v : im.inverse.table) EXPECT_EQ(v, im.HX.carrier->bottom());
}

TEST(Relation, ImagesAgreeOnSingletons) {
  std::mt19937_64 rng(2);
  for (auto& H : value_locales())
    for (int t = 0; t < 10; ++t) {
      auto r = random_relation(rng, H, 2, 3);
      auto im = images(r);
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
          EXPECT_EQ(im.HX.value(im.inverse(im.HY.singleton[y]), x), r(x, y));
          EXPECT_EQ(im.HY.value(im.direct(im.HX.singleton[x]), y), r(x, y));
        }
    }
}

TEST(Relation, InverseImageCriterion) {
  for (auto& H : value_locales())
    for (std::size_t nx = 0; nx <= 2; ++nx)
      for (std::size_t ny = 0; ny <= 2; ++ny) {
        FunctionLattice HX = function_lattice(H, nx), HY = function_lattice(H, ny);
        for_each_relation(H, nx, ny, [&](const LRelation& r) {
          auto a = check_axioms(r);
          auto im = images(r);
          bool top = im.inverse(HY.carrier->top()) == HX.carrier->top();
          bool meets = true;
          for (elem u = 0; u < HY.carrier->size() && meets; ++u)
            for (elem v = 0; v < HY.carrier->size(); ++v)
              if (im.inverse(HY.carrier->meet(u, v)) != HX.carrier->meet(im.inverse(u), im.inverse(v))) {
                meets = false;
                break;
              }
          EXPECT_EQ(a.ed.ok, top);
          EXPECT_EQ(a.uv.ok, meets);
        });
      }
}

TEST(Relation, ComposeAndBoxtimes) {
  std::vector<std::size_t> f{1, 0, 1}, g{2, 0};
  auto gf = compose(graph(f, 2), graph(g, 3));
  std::vector<std::size_t> h(3);
  for (std::size_t x = 0; x < 3; ++x) h[x] = g[f[x]];
  EXPECT_EQ(gf, graph(h, 3));
  auto d = boxtimes(graph({0, 1}, 2), graph({0, 1, 2}, 3));
  EXPECT_EQ(d, graph({0, 1, 2, 3, 4, 5}, 6));
  auto ffop = compose(graph(f, 2), transpose(graph(f, 2)));
  EXPECT_EQ(compose(ffop, ffop), ffop);
  EXPECT_EQ(transpose(ffop), ffop);
  EXPECT_THROW(compose(graph(f, 2), graph(f, 2)), Error);
}

TEST(Relation, SelfDualityTriangles) {
  for (auto& H : value_locales())
    for (std::size_t X = 0; X <= 3; ++X) {
      auto sd = selfduality(H, X);
      EXPECT_TRUE(check_duality(sd.duality).ok);
      if (X == 0) {
        EXPECT_EQ(sd.eta.count(), 0u);
        EXPECT_EQ(sd.HX.carrier->size(), 1u);
      }
    }
}

TEST(Relation, PerturbedPairingFailsTriangles) {
  auto sd = selfduality(two(), 2);
  auto d = sd.duality;
  d.eps[1 * 4 + 2] = 1;  // {1} against {2}
  EXPECT_FALSE(check_duality(d).ok);
}

TEST(Relation, InverseImageThroughDuality) {
  std::mt19937_64 rng(9);
  for (auto& H : value_locales())
    for (std::size_t nx = 0; nx <= 3; ++nx)
      for (std::size_t ny = 0; ny <= 2; ++ny) {
        auto dX = selfduality(H, nx);
        auto HY = function_lattice(H, ny);
        for (int t = 0; t < 4; ++t) {
          auto r = random_relation(rng, H, nx, ny);
          EXPECT_EQ(inverse_image_via_duality(r, dX, HY).table, images(r).inverse.table);
        }
      }
}

TEST(Relation, DualSwap) {
  auto s = dual_swap(graph({1, 0, 1}, 2));
  EXPECT_TRUE(s.direct_is_dual_of_inverse);
  EXPECT_TRUE(s.inverse_is_dual_of_direct);
  auto dg = dual_swap(graph({0, 1}, 2));
  EXPECT_TRUE(dg.direct_is_dual_of_inverse);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    auto r = random_relation(rng, chain(3), 2, 2);
    auto sw = dual_swap(r);
    EXPECT_TRUE(sw.direct_is_dual_of_inverse);
    EXPECT_TRUE(sw.inverse_is_dual_of_direct);
  }
}

TEST(Relation, EqualityScalesSingletonsIdentically) {
  // [x = y] . theta(x) = [x = y] . theta(y) in H, with [x = y] two-valued.
  for (auto& H : value_locales()) {
    auto F = function_lattice(H, 3);
    for (elem t = 0; t < F.carrier->size(); ++t)
      for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
          elem e = x == y ? H->top() : H->bottom();
          EXPECT_EQ(H->meet(e, F.value(t, x)), H->meet(e, F.value(t, y)));
        }
  }
}

TEST(Relation, DiagramsForIdentities) {
  auto H = chain(3);
  std::mt19937_64 rng(1);
  auto r = random_relation(rng, H, 2, 3);
  DiagramData d;
  d.f = {0, 1};
  d.g = {0, 1, 2};
  d.R = graph(d.f, 2);
  d.S = graph(d.g, 3);
  for (auto k : {Diagram::triangle, Diagram::diamond, Diagram::diamond1, Diagram::diamond2})
    EXPECT_TRUE(check_diagram(k, d, r, r).ok) << to_string(k);
}

TEST(Relation, CommutingSquareOfGraphsIsTriangle) {
  // a: X -> X', b: Y -> Y', f: X -> Y, g: X' -> Y' with g a = b f.
  std::vector<std::size_t> a{0, 1, 1}, f{0, 1, 1}, g{1, 0}, b{1, 0};
  DiagramData d{f, g, {}, {}};
  EXPECT_TRUE(check_diagram(Diagram::triangle, d, graph(a, 2), graph(b, 2)).ok);
  std::vector<std::size_t> g_bad{0, 0};
  DiagramData d2{f, g_bad, {}, {}};
  EXPECT_FALSE(check_diagram(Diagram::triangle, d2, graph(a, 2), graph(b, 2)).ok);
}

TEST(Relation, DiamondsComposeForAllSmallInstances) {
  // diamond1(f,g) and diamond2(f,g) imply diamond(graph f, graph g).
  auto H = chain(3);
  std::size_t both = 0;
  for (std::size_t fcode = 0; fcode < 4; ++fcode)
    for (std::size_t gcode = 0; gcode < 4; ++gcode) {
      std::vector<std::size_t> f{fcode & 1U, fcode >> 1 & 1U}, g{gcode & 1U, gcode >> 1 & 1U};
      DiagramData d{f, g, graph(f, 2), graph(g, 2)};
      for_each_relation(H, 2, 2, [&](const LRelation& r) {
        std::mt19937_64 rng(fcode * 7 + gcode);
        for (int t = 0; t < 3; ++t) {
          auto r2 = random_relation(rng, H, 2, 2);
          // also try the relation transported along the diamond1 formula
          LRelation r3(H, 2, 2);
          for (std::size_t a2 = 0; a2 < 2; ++a2)
            for (std::size_t b2 = 0; b2 < 2; ++b2) {
              elem acc = H->bottom();
              for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y)
                  if (f[x] == a2 && g[y] == b2) acc = H->join(acc, r(x, y));
              r3.at(a2, b2) = acc;
            }
          for (const auto& s : {r2, r3}) {
            bool d1 = check_diagram(Diagram::diamond1, d, r, s).ok;
            bool d2 = check_diagram(Diagram::diamond2, d, r, s).ok;
            if (d1 && d2) {
              ++both;
              EXPECT_TRUE(check_diagram(Diagram::diamond, d, r, s).ok);
            }
          }
        }
      });
    }
  EXPECT_GT(both, 0u);
}

TEST(Relation, RestrictedProductEquivalence) {
  auto diag = graph({0, 1}, 2);
  for (std::size_t rc = 0; rc < 16; ++rc)
    for (std::size_t sc = 0; sc < 16; ++sc) {
      LRelation R(two(), 2, 2), S(two(), 2, 2);
      for (std::size_t i = 0; i < 4; ++i) {
        R.table[i] = rc >> i & 1U;
        S.table[i] = sc >> i & 1U;
      }
      auto rp = restricted_product(R, S, diag, diag);
      EXPECT_TRUE(rp.equivalence_holds()) << rc << "," << sc;
    }
  // Swap bijection on the right factor.
  auto swap = graph({1, 0}, 2);
  for (std::size_t rc = 0; rc < 16; ++rc)
    for (std::size_t sc = 0; sc < 16; ++sc) {
      LRelation R(two(), 2, 2), S(two(), 2, 2);
      for (std::size_t i = 0; i < 4; ++i) {
        R.table[i] = rc >> i & 1U;
        S.table[i] = sc >> i & 1U;
      }
      EXPECT_TRUE(restricted_product(R, S, diag, swap).equivalence_holds());
      EXPECT_TRUE(restricted_product(R, S, swap, diag).equivalence_holds());
    }
  auto id = graph({0, 1}, 2);
  auto rp = restricted_product(id, id, diag, diag);
  EXPECT_TRUE(rp.diamond.ok);
  EXPECT_EQ(rp.theta, diag);
  LRelation R(two(), 2, 2);
  R.at(0, 0) = 1;
  auto bad = restricted_product(R, id, diag, diag);
  EXPECT_FALSE(bad.diamond.ok);
  EXPECT_FALSE(bad.axioms.bijection());
}

TEST(Relation, RestrictedProductOverP2Bijections) {
  // Non-crisp bijections: r(x,y) = {1} on the diagonal piece and {2} on the swap piece.
  auto P = powerset(2);
  LRelation mix(P, 2, 2);
  mix.at(0, 0) = 1;
  mix.at(1, 1) = 1;
  mix.at(0, 1) = 2;
  mix.at(1, 0) = 2;
  ASSERT_TRUE(check_axioms(mix).bijection());
  LRelation diagP(P, 2, 2);
  diagP.at(0, 0) = 3;
  diagP.at(1, 1) = 3;
  for (const auto& [r1, r2] : std::vector<std::pair<LRelation, LRelation>>{{mix, mix}, {mix, diagP}, {diagP, mix}})
    for (std::size_t rc = 0; rc < 16; ++rc)
      for (std::size_t sc = 0; sc < 16; ++sc) {
        LRelation R(two(), 2, 2), S(two(), 2, 2);
        for (std::size_t i = 0; i < 4; ++i) {
          R.table[i] = rc >> i & 1U;
          S.table[i] = sc >> i & 1U;
        }
        EXPECT_TRUE(restricted_product(R, S, r1, r2).equivalence_holds());
      }
}
