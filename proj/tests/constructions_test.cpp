#include "tubekit/constructions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace tubekit;

namespace {

// Cell k at resolution d log2(ell) is kept iff every base-ell digit is kept.
GridSet1D oracle_cantor(const CantorSpec& s) {
  const int m = s.natural_m();
  GridSet1D out(m, 0, std::int64_t{1} << m);
  const auto kept = s.kept_digits();
  for (std::int64_t k = 0; k < out.cells(); ++k) {
    bool ok = true;
    std::int64_t v = k;
    for (int level = 0; level < s.d; ++level, v /= s.ell)
      ok = ok && std::find(kept.begin(), kept.end(), static_cast<int>(v % s.ell)) != kept.end();
    if (ok) out.insert(k);
  }
  return out;
}

// Smallest |signed distance| over the closed cell [x0, x0+h] x [y0, y0+h].
double cell_gap(const Line& l, double x0, double y0, double h) {
  double lo = 1e300, hi = -1e300;
  for (double x : {x0, x0 + h})
    for (double y : {y0, y0 + h}) {
      const double f = l.signed_distance({x, y});
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  if (lo <= 0 && hi >= 0) return 0;
  return std::min(std::abs(lo), std::abs(hi));
}

// Cell (i, j) of [0, 1)^2 or one of its neighbours meets some tube of p.
bool oracle_near(const std::vector<Line>& lines, double r, std::int64_t i, std::int64_t j, int m) {
  const double h = std::exp2(-m);
  const auto n = std::int64_t{1} << m;
  for (const Line& l : lines)
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const auto u = i + di, v = j + dj;
        if (u < 0 || v < 0 || u >= n || v >= n) continue;
        if (cell_gap(l, static_cast<double>(u) * h, static_cast<double>(v) * h, h) < r - 1e-12) return true;
      }
  return false;
}

GridSet1D random_subset(std::mt19937_64& rng, int m) {
  const std::int64_t n = std::int64_t{1} << m;
  GridSet1D a(m, n / 4, n / 4);
  std::bernoulli_distribution keep(std::uniform_real_distribution<double>(0.05, 0.6)(rng));
  for (std::int64_t i = 0; i < a.cells(); ++i)
    if (keep(rng)) a.insert(i);
  if (a.empty()) a.insert(std::uniform_int_distribution<std::int64_t>(0, a.cells() - 1)(rng));
  return a;
}

}  // namespace

TEST(Cantor, MiddleHalf) {
  const CantorSpec s{2, 4, 4, {}};
  const GridSet1D c = cantor_set(s);
  EXPECT_EQ(c.m(), 8);
  EXPECT_EQ(c.count(), 16);
  EXPECT_EQ(c, oracle_cantor(s));
  EXPECT_DOUBLE_EQ(s.sigma(), 0.5);
  EXPECT_TRUE(nonconcentration_check(c, {0.5, 4.0}).pass);
}

TEST(Cantor, TrivialPatterns) {
  const GridSet1D full = cantor_set({4, 4, 3, {}});
  EXPECT_EQ(full.count(), full.cells());
  const GridSet1D one = cantor_set({1, 8, 2, {}});
  EXPECT_EQ(one.members(), std::vector<std::int64_t>{0});
  const GridSet1D shifted = cantor_set({1, 4, 2, {3}});
  EXPECT_EQ(shifted.members(), std::vector<std::int64_t>{15});
}

TEST(Cantor, InvalidSpecs) {
  EXPECT_THROW(cantor_set({0, 4, 2, {}}), ParameterError);
  EXPECT_THROW(cantor_set({2, 6, 2, {}}), ParameterError);
  EXPECT_THROW(cantor_set({5, 4, 2, {}}), ParameterError);
  EXPECT_THROW(cantor_set({2, 4, 0, {}}), ParameterError);
  EXPECT_THROW(cantor_set({2, 4, 2, {0, 0}}), ParameterError);
  EXPECT_THROW(cantor_set({2, 4, 2, {0, 4}}), ParameterError);
  EXPECT_THROW(cantor_set({2, 4, 2, {1}}), ParameterError);
  EXPECT_THROW(cantor_set({2, 4, 40, {}}), ParameterError);
}

TEST(Cantor, RandomSpecsMatchOracleAndNonconcentration) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int ell = 2 << std::uniform_int_distribution<int>(0, 3)(rng);
    const int b = std::uniform_int_distribution<int>(1, ell)(rng);
    const int d = std::uniform_int_distribution<int>(1, std::max(1, 12 / static_cast<int>(std::log2(ell))))(rng);
    CantorSpec s{b, ell, d, {}};
    if (trial % 2) {
      std::vector<int> all(ell);
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      s.digits.assign(all.begin(), all.begin() + b);
    }
    const GridSet1D c = cantor_set(s);
    ASSERT_EQ(c, oracle_cantor(s)) << "b=" << b << " ell=" << ell << " d=" << d;
    ASSERT_EQ(c.count(), static_cast<std::int64_t>(std::llround(std::pow(b, d))));
    if (b > 1) {
      ASSERT_TRUE(nonconcentration_check(c, {s.sigma(), static_cast<double>(ell)}).pass)
          << "b=" << b << " ell=" << ell << " d=" << d;
    }
  }
}

TEST(Cantor, ScaledPlacement) {
  const CantorSpec s{2, 4, 3, {}};
  // leaves of width 1/256 on [1/4, 1/2) are 2 cells at m = 9
  const GridSet1D c = cantor_set(s, 9, Rational(1, 4), Rational(1, 2));
  EXPECT_EQ(c.count(), 16);
  const GridSet1D base = cantor_set(s);
  for (std::int64_t k = 0; k < c.cells(); ++k) EXPECT_EQ(c.contains(k), base.contains(k / 2)) << k;
  EXPECT_EQ(c.origin(), 128);
  EXPECT_THROW(cantor_set({2, 4, 4, {}}, 8, Rational(1, 4), Rational(1, 2)), ParameterError);
}

TEST(Progressions, Examples) {
  const GridSet1D ap = ap_set(16, 8, 8);
  std::vector<std::int64_t> want;
  for (int i = 0; i < 16; ++i) want.push_back(8 * i);
  EXPECT_EQ(ap.members(), want);
  EXPECT_TRUE(nonconcentration_check(ap, {1.0, 1.0}).pass);
  EXPECT_EQ(ap_set(16, 64, 12, 1024).members().front(), 1024);
  EXPECT_THROW(ap_set(16, 18, 8), DomainError);
  EXPECT_THROW(ap_set(3, 2, 4, 12), DomainError);
  EXPECT_THROW(ap_set(0, 2, 4), ParameterError);

  const GridSet1D gp = gp_set(Rational(1, 2), 6, 12);
  EXPECT_EQ(gp.members(), (std::vector<std::int64_t>{32, 64, 128, 256, 512, 1024}));
  EXPECT_TRUE(nonconcentration_check(gp, {0.1, 3.0}).pass);
  EXPECT_FALSE(nonconcentration_check(gp, {0.1, 2.0}).pass);
  EXPECT_EQ(gp_set(Rational(2, 3), 3, 4, 1).members(), (std::vector<std::int64_t>{4, 7, 10}));
  EXPECT_THROW(gp_set(Rational(1, 2), 3, 4, 0), ParameterError);
  EXPECT_THROW(gp_set(Rational(1), 3, 4), DomainError);
  EXPECT_THROW(gp_set(Rational(1, 2), 0, 4), ParameterError);
}

TEST(CollinearTips, Examples) {
  const LatticeConfig c = collinear_tip_config(4, 6);
  ASSERT_EQ(c.pencils.size(), 4u);
  EXPECT_EQ(c.pencils[0].directions.count(), 4);
  EXPECT_EQ(c.pencils[1].directions.count(), 4);
  EXPECT_EQ(c.pencils[2].directions.count(), 7);
  EXPECT_EQ(c.pencils[3].directions.count(), 7);
  std::vector<GridSet2D> rasters;
  for (const auto& p : c.pencils) rasters.push_back(rasterize_pencil(p, Rational(0), Rational(1), 6));
  const Rational delta2 = from_grid_index(1, 12);
  EXPECT_GE(intersection_measure(rasters), Rational(16) * delta2 / 4);
  for (auto [i, j] : c.point_cells)
    for (const auto& r : rasters) EXPECT_TRUE(r.contains(i, j));

  const LatticeConfig one = collinear_tip_config(1, 4);
  std::vector<GridSet2D> r1;
  for (const auto& p : one.pencils) {
    EXPECT_EQ(p.directions.count(), 1);
    r1.push_back(rasterize_pencil(p, Rational(0), Rational(1), 4));
  }
  EXPECT_GE(intersection_measure(r1), from_grid_index(1, 8));

  EXPECT_THROW(collinear_tip_config(64, 6), ParameterError);
  EXPECT_THROW(collinear_tip_config(17, 6), ParameterError);
  EXPECT_THROW(collinear_tip_config(0, 6), ParameterError);
}

TEST(CollinearTips, LowerBoundForAllSizes) {
  for (int m = 3; m <= 8; ++m)
    for (std::int64_t n = 1; n <= (std::int64_t{1} << m) / 4; ++n) {
      const LatticeConfig c = collinear_tip_config(n, m);
      const double h = std::exp2(-m);
      // every lattice point sits on the axis lines and within delta / 4 of the diagonal lines
      std::vector<std::vector<Line>> lines;
      for (const auto& p : c.pencils) lines.push_back(p.lines());
      for (const Vec2 pt : c.points) {
        for (std::size_t k = 0; k < 4; ++k) {
          double best = 1e300;
          for (const Line& l : lines[k]) best = std::min(best, std::abs(l.signed_distance(pt)));
          ASSERT_LE(best, (k < 2 ? 1e-12 : h / 4 / std::sqrt(2.0) + 1e-12)) << "m=" << m << " n=" << n;
        }
      }
      std::vector<GridSet2D> rasters;
      for (const auto& p : c.pencils) rasters.push_back(rasterize_pencil(p, Rational(0), Rational(1), m));
      ASSERT_GE(intersection_measure(rasters), Rational(n * n) * from_grid_index(1, 2 * m) / 4);
      ASSERT_LE(intersection_measure(rasters), Rational(64 * n * n) * from_grid_index(1, 2 * m));
    }
}

TEST(NoncollinearTips, Examples) {
  const LatticeConfig c = noncollinear_three_config(4, 8);
  ASSERT_EQ(c.pencils.size(), 3u);
  EXPECT_TRUE(c.pencils[0].tip.is_finite());
  std::vector<GridSet2D> rasters;
  for (const auto& p : c.pencils) rasters.push_back(rasterize_pencil(p, Rational(0), Rational(1), 8));
  GridSet2D common = rasters[0];
  for (const auto& r : rasters) common = set_intersect(common, r);
  int covered = 0;
  for (auto [i, j] : c.point_cells) covered += common.contains(i, j);
  EXPECT_EQ(covered, 16);
  EXPECT_GE(intersection_measure(rasters), Rational(16) * from_grid_index(1, 16) / 4);

  const LatticeConfig one = noncollinear_three_config(1, 6);
  EXPECT_EQ(one.points.size(), 1u);
  for (const auto& p : one.pencils) EXPECT_EQ(p.directions.count(), 1);

  EXPECT_THROW(noncollinear_three_config(6, 8), ParameterError);
  EXPECT_THROW(noncollinear_three_config(0, 8), ParameterError);
}

TEST(NoncollinearTips, AllSizes) {
  for (int m = 4; m <= 10; ++m)
    for (int n = 1; n <= m - 3; ++n) {
      const LatticeConfig c = noncollinear_three_config(n, m);
      std::vector<GridSet2D> rasters;
      for (const auto& p : c.pencils) rasters.push_back(rasterize_pencil(p, Rational(0), Rational(1), m));
      for (auto [i, j] : c.point_cells)
        for (const auto& r : rasters) ASSERT_TRUE(r.contains(i, j)) << "m=" << m << " n=" << n;
      ASSERT_GE(intersection_measure(rasters), Rational(n * n) * from_grid_index(1, 2 * m) / 4);
    }
}

TEST(ProductPencils, FullInterval) {
  const GridSet1D a = GridSet1D::full(6, Rational(1, 4), Rational(1, 2));
  const auto p = product_pencils(a);
  const GridSet2D strip = rasterize_pencil(p[0], Rational(0), Rational(1), 6);
  EXPECT_EQ(strip.count(), 16 * 64);
  for (auto [i, j] : strip.members()) EXPECT_TRUE(i >= 16 && i < 32);
  EXPECT_TRUE(product_containment(a, p).holds());
}

TEST(ProductPencils, CantorCellwise) {
  const GridSet1D a = cantor_set({2, 4, 4, {}}, 10, Rational(1, 4), Rational(1, 2));
  ASSERT_EQ(a.count(), 16);
  const auto p = product_pencils(a);
  const ProductContainment pc = product_containment(a, p);
  EXPECT_TRUE(pc.holds());
  EXPECT_EQ(pc.product.count(), 256);
  for (const auto& pencil : p) {
    const auto lines = pencil.lines();
    for (auto [i, j] : pc.product.members())
      ASSERT_TRUE(oracle_near(lines, static_cast<double>(pencil.radius), i, j, 10)) << i << "," << j;
  }
}

TEST(ProductPencils, SingleCell) {
  GridSet1D a(6, 16, 16);
  a.insert(5);
  const auto p = product_pencils(a);
  EXPECT_EQ(p[0].directions.count(), 1);
  EXPECT_EQ(p[1].directions.count(), 1);
  EXPECT_LE(p[2].directions.count(), 2);
  EXPECT_LE(p[3].directions.count(), 2);
  EXPECT_TRUE(product_containment(a, p).holds());
}

TEST(ProductPencils, Errors) {
  EXPECT_THROW(product_pencils(GridSet1D(6, 16, 16)), ParameterError);
  GridSet1D low(6, 0, 64);
  low.insert(15);
  EXPECT_THROW(product_pencils(low), DomainError);
  GridSet1D high(6, 0, 64);
  high.insert(32);
  EXPECT_THROW(product_pencils(high), DomainError);
}

TEST(ProductPencils, RandomFixtures) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    GridSet1D a;
    const int m = std::uniform_int_distribution<int>(4, 7)(rng);
    if (trial % 3 == 0) {
      const int ell = 2 << std::uniform_int_distribution<int>(0, 1)(rng);
      const int levels = (m - 2) / static_cast<int>(std::log2(ell));
      const int b = std::uniform_int_distribution<int>(1, ell)(rng);
      a = cantor_set({b, ell, std::max(1, levels), {}}, m, Rational(1, 4), Rational(1, 2));
    } else {
      a = random_subset(rng, m);
    }
    const auto p = product_pencils(a);
    const ProductContainment pc = product_containment(a, p);
    ASSERT_TRUE(pc.holds()) << "trial " << trial;
    for (const auto& pencil : p) {
      const auto lines = pencil.lines();
      for (auto [i, j] : pc.product.members())
        ASSERT_TRUE(oracle_near(lines, static_cast<double>(pencil.radius), i, j, m)) << "trial " << trial;
    }
  }
}
