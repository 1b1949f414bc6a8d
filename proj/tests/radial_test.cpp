#include "geometry_oracles.hpp"
#include "tubekit/constructions.hpp"
#include "tubekit/grid_io.hpp"
#include "tubekit/radial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace tubekit;

namespace {

using oracle::angle_of;
using oracle::kTwoPi;
using oracle::sector_meets_box;

GridSet2D random_set(std::mt19937_64& rng, int m, std::int64_t origin, std::int64_t side, double p) {
  GridSet2D s(m, origin, side);
  std::bernoulli_distribution keep(p);
  for (std::int64_t j = 0; j < side; ++j)
    for (std::int64_t i = 0; i < side; ++i)
      if (keep(rng)) s.insert(i, j);
  return s;
}

GridSet2D cantor_square(int d, int m, const Rational& lo, const Rational& hi) {
  return product_square(cantor_set({2, 4, d, {}}, m, lo, hi));
}

}  // namespace

TEST(RadialProject, AxisCells) {
  GridSet2D s(4, 0, 16);
  s.insert(8, 0);
  s.insert(0, 8);
  const GridSet1D out = radial_project({0, 0}, s);
  // the cell on the y axis reaches angle exactly 1/4, which opens cell 4
  EXPECT_EQ(out.members(), (std::vector<std::int64_t>{0, 3, 4}));
  EXPECT_EQ(out, oracle::radial({0, 0}, s));
  EXPECT_TRUE(radial_project({0, 0}, GridSet2D(4, 0, 16)).empty());
}

TEST(RadialProject, CentreInsideCell) {
  GridSet2D s(4, 0, 16);
  s.insert(3, 3);
  EXPECT_THROW(radial_project({3.5 / 16, 3.5 / 16}, s), DomainError);
  EXPECT_THROW(radial_project({3.0 / 16, 4.0 / 16}, s), DomainError);
  EXPECT_NO_THROW(radial_project({2.9 / 16, 3.5 / 16}, s));
}

TEST(RadialProject, FarCentre) {
  const GridSet2D s = GridSet2D::full(8, Rational(0), Rational(1, 4));
  const Vec2 y{20, 20};
  const GridSet1D out = radial_project(y, s);
  EXPECT_EQ(out, oracle::radial(y, s));
  // angular diameter of the square from y, in circle turns
  double lo = 1e9, hi = -1e9;
  for (double x : {0.0, 0.25})
    for (double yy : {0.0, 0.25}) {
      const double a = angle_of(x - y.x, yy - y.y) / kTwoPi;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  const double expect = (hi - lo) * 256;
  EXPECT_NEAR(static_cast<double>(out.count()), expect, 2.0);
}

TEST(RadialProject, RandomOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.5, 2.5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = std::uniform_int_distribution<int>(3, 7)(rng);
    const std::int64_t side = std::int64_t{1} << std::uniform_int_distribution<int>(1, std::min(m, 4))(rng);
    const std::int64_t origin = std::uniform_int_distribution<std::int64_t>(0, (std::int64_t{1} << m) - side)(rng);
    const GridSet2D s = random_set(rng, m, origin, side, 0.3);
    Vec2 y;
    bool inside = true;
    while (inside) {
      y = {coord(rng), coord(rng)};
      inside = false;
      for (auto [i, j] : s.members())
        inside = inside || (y.x >= s.cell_x(i) && y.x <= s.cell_x(i) + s.delta() && y.y >= s.cell_x(j) &&
                            y.y <= s.cell_x(j) + s.delta());
    }
    const GridSet1D got = radial_project(y, s);
    ASSERT_EQ(got, oracle::radial(y, s)) << "trial " << trial;
    // every centre-to-centre angle is covered
    for (auto [i, j] : s.members()) {
      const double a = angle_of(s.cell_center(i) - y.x, s.cell_center(j) - y.y) / kTwoPi;
      ASSERT_TRUE(got.contains(static_cast<std::int64_t>(std::floor(a * static_cast<double>(got.cells()))) % got.cells()));
    }
  }
}

TEST(DirectionSet, Examples) {
  GridSet2D two(5, 0, 32);
  two.insert(3, 4);
  two.insert(20, 9);
  const GridSet1D d = direction_set(two);
  EXPECT_GE(d.count(), 2);
  const auto half = d.cells() / 2;
  for (auto k : d.members()) EXPECT_TRUE(d.contains((k + half) % d.cells()));

  const GridSet1D full = direction_set(GridSet2D::full(4, Rational(0), Rational(1)));
  EXPECT_EQ(full.count(), full.cells());

  GridSet2D one(4, 0, 16);
  one.insert(1, 1);
  EXPECT_THROW(direction_set(one), ParameterError);
}

TEST(DirectionSet, CantorSquareMatchesPairwiseOracle) {
  const GridSet2D e = cantor_square(4, 8, Rational(0), Rational(1));
  ASSERT_EQ(e.count(), 256);
  const GridSet1D got = direction_set(e);
  // pairwise oracle: sector test of every ordered pair's difference box
  GridSet1D want(8, 0, 256);
  const auto cells = e.members();
  const double h = e.delta();
  for (const auto& a : cells)
    for (const auto& b : cells) {
      if (a == b) continue;
      const double x0 = static_cast<double>(a.first - b.first - 1) * h;
      const double y0 = static_cast<double>(a.second - b.second - 1) * h;
      for (std::int64_t k = 0; k < 256; ++k) {
        if (want.contains(k)) continue;
        if (sector_meets_box({0, 0}, kTwoPi * static_cast<double>(k) / 256, kTwoPi * static_cast<double>(k + 1) / 256,
                             x0, x0 + 2 * h, y0, y0 + 2 * h))
          want.insert(k);
      }
    }
  EXPECT_EQ(got, want);
  for (int e2 = 0; e2 <= 8; ++e2)
    EXPECT_EQ(covering_number(got, from_grid_index(1, e2)), covering_number(want, from_grid_index(1, e2)));
}

TEST(DirectionSet, ContainsPinnedProjections) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const GridSet2D e = random_set(rng, 5, 0, 32, 0.05);
    if (e.count() < 2) continue;
    const GridSet1D all = direction_set(e);
    for (auto [i, j] : e.members()) {
      // drop the cells touching the pin's cell, then project from its centre
      GridSet2D rest = e;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if (rest.contains(i + di, j + dj)) rest.erase(i + di, j + dj);
      const GridSet1D pinned = radial_project({e.cell_center(i), e.cell_center(j)}, rest);
      ASSERT_TRUE(is_subset(pinned, all)) << "trial " << trial;
    }
  }
}

TEST(ExponentFit, Examples) {
  std::vector<std::pair<double, double>> lin, flat;
  for (int e = 1; e <= 6; ++e) {
    lin.emplace_back(std::exp2(-e), std::exp2(e));
    flat.emplace_back(std::exp2(-e), 5.0);
  }
  const ExponentReport a = exponent_fit(lin);
  EXPECT_NEAR(a.slope, 1.0, 1e-12);
  EXPECT_NEAR(a.max_residual, 0.0, 1e-12);
  const ExponentReport b = exponent_fit(flat);
  EXPECT_NEAR(b.slope, 0.0, 1e-12);

  // recomputing from the stored raw data gives the same slope bit for bit
  std::vector<std::pair<double, double>> again;
  for (std::size_t i = 0; i < a.scales.size(); ++i) again.emplace_back(a.scales[i], a.counts[i]);
  EXPECT_EQ(exponent_fit(again).slope, a.slope);

  EXPECT_THROW(exponent_fit({{0.5, 2}, {0.25, 4}}), ParameterError);
  EXPECT_THROW(exponent_fit({{0.5, 2}, {0.25, 0}, {0.125, 8}}), ParameterError);
  EXPECT_THROW(exponent_fit({{0.5, 2}, {0.5, 3}, {0.5, 8}}), ParameterError);
}

TEST(ExponentFit, CantorCovering) {
  const GridSet1D c = cantor_set({2, 4, 5, {}});
  ASSERT_EQ(c.m(), 10);
  const ExponentReport r = covering_exponent(c, {2, 3, 4, 5, 6, 7, 8});
  EXPECT_NEAR(r.slope, 0.5, 0.1);
}

TEST(PinnedExponent, Examples) {
  // the square subtends about a tenth of a turn from (2, 2); fine scales see a full arc
  const ExponentReport full =
      pinned_exponent({2, 2}, GridSet2D::full(9, Rational(0), Rational(1)), {5, 6, 7, 8, 9});
  EXPECT_NEAR(full.slope, 1.0, 0.1);
  GridSet2D one(7, 0, 128);
  one.insert(10, 10);
  // one or two arcs at every scale
  EXPECT_NEAR(pinned_exponent({2, 2}, one, {2, 3, 4, 5, 6}).slope, 0.0, 0.25);
  EXPECT_THROW(pinned_exponent({1.1, 0.5}, GridSet2D::full(7, Rational(0), Rational(1)), {2, 3, 4}), DomainError);
}

namespace {

// Direct ball sums: cells whose closed square is within distance < r of the centre.
double oracle_ball(const DiscreteMeasure2D& mu, double s) {
  const auto& sup = mu.support;
  const double h = sup.delta();
  double best = 0;
  for (std::int64_t k = 1; k <= sup.side(); k *= 2) {
    const double r = static_cast<double>(k) * h;
    for (std::int64_t cj = 0; cj < sup.side(); ++cj)
      for (std::int64_t ci = 0; ci < sup.side(); ++ci) {
        const double cx = sup.cell_center(ci), cy = sup.cell_center(cj);
        double mass = 0;
        for (auto [i, j] : sup.members()) {
          const double dx = std::max({sup.cell_x(i) - cx, 0.0, cx - sup.cell_x(i) - h});
          const double dy = std::max({sup.cell_x(j) - cy, 0.0, cy - sup.cell_x(j) - h});
          if (std::hypot(dx, dy) < r) mass += mu.weight(i, j);
        }
        best = std::max(best, mass / std::pow(r, s));
      }
  }
  return best;
}

}  // namespace

TEST(BallCondition, Examples) {
  const auto uni = DiscreteMeasure2D::uniform(GridSet2D::full(4, Rational(0), Rational(1)));
  const double cu = ball_condition_check(uni, 2);
  EXPECT_LE(cu, 16);
  EXPECT_NEAR(cu, oracle_ball(uni, 2), 1e-9);

  GridSet2D pt(4, 0, 16);
  pt.insert(7, 9);
  EXPECT_NEAR(ball_condition_check(DiscreteMeasure2D::uniform(pt), 1), 16.0, 1e-9);

  GridSet2D row(4, 0, 16);
  for (int i = 0; i < 16; ++i) row.insert(i, 5);
  const auto line = DiscreteMeasure2D::uniform(row);
  const double cl = ball_condition_check(line, 1);
  EXPECT_GE(cl, 1.0);
  EXPECT_LE(cl, 4.0);
  EXPECT_NEAR(cl, oracle_ball(line, 1), 1e-9);
  EXPECT_THROW(ball_condition_check(line, 0), ParameterError);
  EXPECT_THROW(ball_condition_check(line, 2.5), ParameterError);
}

TEST(BallCondition, RandomOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const GridSet2D s = random_set(rng, 4, 0, 16, 0.2);
    if (s.empty()) continue;
    DiscreteMeasure2D mu = DiscreteMeasure2D::uniform(s);
    double total = 0;
    for (auto [i, j] : s.members()) {
      mu.weights[s.index(i, j)] = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      total += mu.weights[s.index(i, j)];
    }
    for (double& w : mu.weights) w /= total;
    const double sv = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
    ASSERT_NEAR(ball_condition_check(mu, sv), oracle_ball(mu, sv), 1e-9) << "trial " << trial;
  }
}

TEST(TubeMass, Examples) {
  const GridSet2D sq = GridSet2D::full(5, Rational(0), Rational(1));
  const auto mu = DiscreteMeasure2D::uniform(sq);
  EXPECT_NEAR(tube_mass(mu, {Line::through_angle({0.5, 0.5}, 0.3), 2.0}), 1.0, 1e-12);
  EXPECT_EQ(tube_mass(mu, {Line::through_angle({0.5, 3.0}, 0.0), 0.25}), 0.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const Tube t{Line::through_angle({u(rng), u(rng)}, u(rng) * 3.1), 1.0 / 32 * (0.5 + u(rng))};
    const GridSet2D r = rasterize_tube(t, Rational(0), Rational(1), 5);
    ASSERT_NEAR(tube_mass(mu, t), static_cast<double>(r.count()) / 1024, 1e-12);
  }
}

TEST(Measure, ValidateAndRoundTrip) {
  GridSet2D s(4, 2, 8);
  s.insert(1, 1);
  s.insert(5, 2);
  DiscreteMeasure2D mu = DiscreteMeasure2D::uniform(s);
  mu.weights[s.index(1, 1)] = 0.25;
  mu.weights[s.index(5, 2)] = 0.75;
  EXPECT_NO_THROW(mu.validate());
  std::stringstream ss;
  write_measure(ss, mu);
  const DiscreteMeasure2D back = read_measure(ss);
  EXPECT_EQ(back.support, mu.support);
  EXPECT_EQ(back.weights, mu.weights);

  DiscreteMeasure2D bad = mu;
  bad.weights[s.index(0, 0)] = 0.1;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = mu;
  bad.weights[s.index(1, 1)] = 0.3;
  EXPECT_THROW(bad.validate(), ParameterError);

  std::istringstream missing(to_text(s) + "1 1 0.5\n");
  EXPECT_THROW(read_measure(missing), ParseError);
  std::stringstream outside;
  write_gridset(outside, s);
  outside << "1 1 0.5\n3 3 0.5\n";
  EXPECT_THROW(read_measure(outside), ParseError);
}
