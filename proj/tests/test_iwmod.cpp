#include <gtest/gtest.h>

#include <random>

#include "padic/iwmod.hpp"
#include "support.hpp"

using namespace padic;
using namespace padic::testing;

namespace {

ModulePresentation one_by_one(const PowerSeries& f) { return {{{f}}, false}; }

}  // namespace

TEST(CharIdeal, Basics) {
  Ring R = Ring::zp(3, 10);
  const int M = 16;
  auto f = PowerSeries::from_ints(R, {-3, 1}, M);
  auto g = PowerSeries::from_ints(R, {3, 3, 1, 2}, M);
  auto c = char_ideal(one_by_one(f));
  EXPECT_EQ(c.mu, 0);
  EXPECT_EQ(c.lambda(), 1);
  EXPECT_TRUE(poly_equal(c.P, series_poly(f)));
  ModulePresentation diag{{{f, PowerSeries(R, M)}, {PowerSeries(R, M), g}}, false};
  auto cd = char_ideal(diag);
  auto cp = char_gen_from_series(f * g);
  EXPECT_EQ(cd.mu, cp.mu);
  EXPECT_TRUE(poly_equal(cd.P, cp.P));
  expect_kind(ErrorKind::NonTorsion, [&] { char_ideal({{{f, PowerSeries(R, M)}}, false}); });
  expect_kind(ErrorKind::NonTorsion, [&] { char_ideal({{{f}}, true}); });
  EXPECT_TRUE(char_ideal(one_by_one(PowerSeries(R, M))).vanishes);
}

TEST(CharIdeal, GenericTwoByTwoAgainstLeibniz) {
  std::mt19937_64 rng(1);
  for (const Ring& R : sample_rings(10)) {
    for (int it = 0; it < 5; ++it) {
      SeriesMatrix m(2, std::vector<PowerSeries>(2));
      for (auto& row : m)
        for (auto& x : row) x = random_series(R, 12, rng);
      SeriesMatrix wide = m;
      for (auto& row : wide)
        for (auto& x : row) x = x.truncate(24);
      auto det = leibniz_det(wide);
      if (det.is_zero()) continue;
      auto c = char_ideal({m, false});
      auto ref = char_gen_from_series(det);
      EXPECT_EQ(c.mu, ref.mu);
      EXPECT_TRUE(poly_equal(c.P, ref.P));
    }
  }
}

TEST(CharIdeal, Multiplicativity) {
  std::mt19937_64 rng(2);
  Ring R = Ring::zp(5, 12);
  const int M = 24;
  for (int it = 0; it < 10; ++it) {
    auto f = random_prepared(R, M, it % 2, 1 + it % 3, rng);
    auto g = random_prepared(R, M, 0, 2, rng);
    auto h = random_prepared(R, M, 1, 1, rng);
    PowerSeries z(R, M);
    ModulePresentation blocks{{{f, z, z}, {z, g, z}, {z, z, h}}, false};
    auto c = char_ideal(blocks);
    auto cf = char_ideal(one_by_one(f)), cg = char_ideal(one_by_one(g)), ch = char_ideal(one_by_one(h));
    EXPECT_EQ(c.mu, cf.mu + cg.mu + ch.mu);
    EXPECT_EQ(c.lambda(), cf.lambda() + cg.lambda() + ch.lambda());
    EXPECT_TRUE(poly_equal(c.P, poly_mul(poly_mul(cf.P, cg.P), ch.P)));
  }
}

TEST(CharIdeal, DistinguishedGcd) {
  Ring R = Ring::zp(3, 12);
  Poly a = series_poly(PowerSeries::from_ints(R, {-3, 1}, 8) * PowerSeries::from_ints(R, {9, 3, 1}, 8));
  Poly b = series_poly(PowerSeries::from_ints(R, {-3, 1}, 8) * PowerSeries::from_ints(R, {6, 1}, 8));
  auto g = distinguished_gcd(a, b);
  ASSERT_TRUE(g.has_value());
  EXPECT_TRUE(poly_equal(*g, series_poly(PowerSeries::from_ints(R, {-3, 1}, 8))));
}

TEST(ChiDecompose, Examples) {
  Ring R = Ring::zp(5, 8);
  const int M = 16;
  FiniteAbelianGroup D({2});
  auto a = PowerSeries::from_ints(R, {1, 2, 3}, M), b = PowerSeries::from_ints(R, {5, 1}, M);
  ProMeasure x(D, {a, b});
  GroupRingPresentation pres{D, {{x}}};
  EXPECT_EQ(chi_decompose(pres, Character(D, {1})).rows[0][0], a - b);
  EXPECT_EQ(chi_decompose(pres, Character::trivial(D)).rows[0][0], a + b);

  // Delta = Z/3 over Z_7: O[Delta]/(x) (x) O(chi) = O / (chi(x)).
  Ring R7 = Ring::zp(7, 6);
  FiniteAbelianGroup D3({3});
  ProMeasure y(D3, {PowerSeries::from_ints(R7, {2}, 8), PowerSeries::from_ints(R7, {1}, 8),
                    PowerSeries::from_ints(R7, {4}, 8)});
  for (const auto& chi : Character::all(D3)) {
    Element w = chi.eval(R7, {1});
    Element direct = R7.from_int(2) + w + R7.from_int(4) * w * w;
    EXPECT_EQ(chi_decompose({D3, {{y}}}, chi).rows[0][0][0], direct);
  }
}

TEST(ChiPart, WorkedInstances) {
  Ring R5 = Ring::zp(5, 10);
  const int M = 16;
  FiniteAbelianGroup D({2});
  auto f = PowerSeries::from_ints(R5, {5, 1, 1}, M);
  GroupRingPresentation pres{D, {{ProMeasure::scalar_series(D, f)}}};
  auto rep = chipart_verify(pres);
  ASSERT_TRUE(rep.ok) << rep.message;
  EXPECT_EQ(rep.a, 0);
  EXPECT_EQ(rep.b, 0);
  EXPECT_EQ(rep.lhs.lambda(), 2);

  Ring R2 = Ring::zp(2, 12);
  auto one = ProMeasure::dirac(D, R2, M, {0});
  auto delta = ProMeasure::dirac(D, R2, M, {1});
  GroupRingPresentation p2{D, {{delta - one}, {R2.from_int(4) * one}}};
  auto rep2 = chipart_verify(p2);
  ASSERT_TRUE(rep2.ok) << rep2.message;
  EXPECT_EQ(rep2.lhs.mu, 2);
  EXPECT_EQ(rep2.rhs[0].mu, 2);
  EXPECT_EQ(rep2.rhs[1].mu, 1);
  EXPECT_EQ(rep2.a, 1);
  EXPECT_EQ(rep2.b, 0);
  EXPECT_TRUE(rep2.lhs.up_to_uniformizer);

  FiniteAbelianGroup triv = FiniteAbelianGroup::trivial();
  auto rep3 = chipart_verify({triv, {{ProMeasure::scalar_series(triv, f)}}});
  ASSERT_TRUE(rep3.ok);
  EXPECT_EQ(rep3.a + rep3.b, 0);
}

TEST(ChiPart, RandomTameGroupHasNoGap) {
  std::mt19937_64 rng(3);
  Ring R = Ring::zp(5, 12);
  FiniteAbelianGroup D({2});
  for (int it = 0; it < 10; ++it) {
    ProMeasure x(D, {random_prepared(R, 24, it % 2, 1 + it % 2, rng), random_prepared(R, 24, 0, 1, rng)});
    auto rep = chipart_verify({D, {{x}}});
    ASSERT_TRUE(rep.ok) << rep.message;
    EXPECT_EQ(rep.a, 0);
    EXPECT_EQ(rep.b, 0);
  }
}

TEST(Finiteness, Examples) {
  Ring R = Ring::zp(2, 24);
  const int M = 16;
  auto gen = char_gen_from_series(PowerSeries::from_ints(R, {-2, 1}, M));
  auto cert = finiteness_certificate(gen, 3);
  ASSERT_EQ(cert.status, FinitenessStatus::Certified);
  EXPECT_EQ(cert.orders, (std::vector<int>{1, 3, 4, 5}));

  auto w = finiteness_certificate(char_gen_from_series(omega(R, 1, M)), 1);
  EXPECT_EQ(w.status, FinitenessStatus::NotFinite);
  EXPECT_LE(w.witness_level, 1);

  CharIdealGen zero = char_ideal(one_by_one(PowerSeries(Ring::zp(2, 4), M)));
  EXPECT_EQ(finiteness_certificate(zero, 2).status, FinitenessStatus::Inconclusive);
}

TEST(Finiteness, AgreesWithCoprimality) {
  std::mt19937_64 rng(4);
  for (u64 p : {2, 3}) {
    Ring R = Ring::zp(p, 16);
    const int M = 32;
    for (int it = 0; it < 12; ++it) {
      PowerSeries f = random_prepared(R, M, it % 2, 1 + it % 3, rng);
      if (it % 4 == 3) f = f * omega(R, 1, M);
      auto gen = char_gen_from_series(f);
      for (int n = 0; n <= 2; ++n) {
        auto fc = finiteness_certificate(gen, n);
        auto cc = coprimality_certificate(gen.series(), omega(R, n, M));
        EXPECT_EQ(fc.status == FinitenessStatus::Certified, cc.status == CoprimeStatus::Certified)
            << f.to_string() << " n=" << n;
        if (fc.status == FinitenessStatus::Certified)
          for (int m = 0; m <= n; ++m) EXPECT_EQ(fc.orders[m], quotient_order(f, m).exponent);
      }
    }
  }
}
