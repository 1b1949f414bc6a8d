#include "tubekit/constructions.hpp"
#include "tubekit/radial.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tubekit;

namespace {

GoodPairMask full_mask(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu) {
  GoodPairMask m;
  m.keep.assign(static_cast<std::size_t>(mu.support.count() * nu.support.count()), true);
  return m;
}

double recomputed_mass(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu, const GoodPairMask& mask) {
  const auto e = mu.support.members(), f = nu.support.members();
  double t = 0;
  for (std::size_t x = 0; x < e.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (mask.contains(x, y)) t += mu.weight(e[x].first, e[x].second) * nu.weight(f[y].first, f[y].second);
  return t;
}

void check_result(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu, const TubeConditionParams& p,
                  const TubeConditionResult& r) {
  EXPECT_EQ(r.certificate.violations, 0u);
  EXPECT_EQ(verify_tube_condition(mu, nu, p, r.mask).violations, 0u);
  EXPECT_NEAR(r.mask.retained_mass, recomputed_mass(mu, nu, r.mask), 1e-12);
  for (const auto& s : r.scales) {
    EXPECT_LE(static_cast<double>(s.mbad_mu), s.mbad_bound);
    EXPECT_LE(static_cast<double>(s.mbad_nu), s.mbad_bound);
  }
}

// Segment of cells on y = 1/4 inside [0, 1/2)^2, and a sparse tall block at x in [3/2, 2).
std::pair<DiscreteMeasure2D, DiscreteMeasure2D> segment_fixture() {
  GridSet2D seg(6, 0, 32);
  for (int i = 0; i < 32; ++i) seg.insert(i, 16);
  GridSet2D blk(6, 0, 128);
  for (int i = 96; i < 128; i += 2)
    for (int j = 0; j < 128; j += 4) blk.insert(i, j);
  return {DiscreteMeasure2D::uniform(seg, 1, 1), DiscreteMeasure2D::uniform(blk, 1.5, 1)};
}

}  // namespace

TEST(TubeCondition, ParameterConstraints) {
  TubeConditionParams p;
  EXPECT_EQ(p.gamma(), 2);
  EXPECT_NO_THROW(p.validate(1, 1));
  p.eta = 0.3;  // 1 * (1 - 0.5) = 0.5 < 0.6
  EXPECT_THROW(p.validate(1, 1), ParameterError);
  p = {};
  p.eta = 0.13;  // s_nu rho / 2 = 0.25 < 0.26
  EXPECT_THROW(p.validate(2, 1), ParameterError);
  EXPECT_NO_THROW(p.validate(2, 1.2));
  p = {};
  p.kmax = 0;
  EXPECT_THROW(p.validate(1, 1), ParameterError);
  p = {};
  p.rho = 1;
  EXPECT_THROW(p.validate(1, 1), ParameterError);
}

TEST(TubeCondition, ErrorsOnInputs) {
  GridSet2D a(5, 0, 32), b(5, 0, 32);
  a.insert(1, 1);
  b.insert(8, 1);  // a quarter away minus a cell
  EXPECT_THROW(tube_condition_refine(DiscreteMeasure2D::uniform(a), DiscreteMeasure2D::uniform(b), {}), DomainError);
  GridSet2D c(6, 0, 128);
  c.insert(100, 100);
  EXPECT_THROW(tube_condition_refine(DiscreteMeasure2D::uniform(a), DiscreteMeasure2D::uniform(c), {}), ResolutionMismatch);
  TubeConditionParams p;
  p.eta = 0.3;
  GridSet2D d(5, 0, 64);
  d.insert(50, 50);
  EXPECT_THROW(tube_condition_refine(DiscreteMeasure2D::uniform(a), DiscreteMeasure2D::uniform(d), p), ParameterError);
}

TEST(TubeCondition, SingleCellMeasure) {
  // every line through the mu cell carries all of mu, so every pair must go
  GridSet2D a(5, 0, 64);
  a.insert(3, 3);
  GridSet2D b(5, 0, 64);
  for (int j = 40; j < 64; j += 3) b.insert(56, j);
  const auto mu = DiscreteMeasure2D::uniform(a), nu = DiscreteMeasure2D::uniform(b);
  TubeConditionParams p;
  p.k0 = 2;
  p.kmax = 2;
  const auto before = verify_tube_condition(mu, nu, p, full_mask(mu, nu));
  EXPECT_EQ(before.violations, before.pairs_checked);
  const auto r = tube_condition_refine(mu, nu, p);
  check_result(mu, nu, p, r);
  EXPECT_EQ(r.mask.retained_mass, 0.0);
  ASSERT_EQ(r.scales.size(), 1u);
  EXPECT_GE(r.scales[0].mbad_mu, 1u);
}

TEST(TubeCondition, SegmentPartialRetention) {
  const auto [mu, nu] = segment_fixture();
  TubeConditionParams p;
  p.eta = 0.05;
  p.k0 = 2;
  p.kmax = 2;
  const auto before = verify_tube_condition(mu, nu, p, full_mask(mu, nu));
  EXPECT_GT(before.violations, 0u);
  const auto r = tube_condition_refine(mu, nu, p);
  check_result(mu, nu, p, r);
  EXPECT_GT(r.mask.retained_mass, 0.2);
  EXPECT_LT(r.mask.retained_mass, 0.6);
  EXPECT_NEAR(r.mask.retained_mass, 0.404296875, 1e-9);
  // the pairs along the segment's line are gone
  const auto e = mu.support.members(), f = nu.support.members();
  for (std::size_t x = 0; x < e.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y)
      if (f[y].second == 16) EXPECT_FALSE(r.mask.contains(x, y));
}

TEST(TubeCondition, SpreadSquaresKeepEverything) {
  const GridSet2D sq = GridSet2D::full(5, Rational(0), Rational(1, 2));
  GridSet2D far(5, 48, 16);
  for (auto [i, j] : sq.members()) far.insert(i, j);
  const auto mu = DiscreteMeasure2D::uniform(sq, 2, 1), nu = DiscreteMeasure2D::uniform(far, 2, 1);
  TubeConditionParams p;
  p.eta = 0.1;
  p.k0 = 2;
  p.kmax = 2;
  const auto r = tube_condition_refine(mu, nu, p);
  check_result(mu, nu, p, r);
  EXPECT_EQ(r.mask.retained_mass, 1.0);
  EXPECT_EQ(r.scales[0].bad_mu, 0u);
}

TEST(TubeCondition, Deterministic) {
  const auto [mu, nu] = segment_fixture();
  TubeConditionParams p;
  p.eta = 0.05;
  p.k0 = 2;
  p.kmax = 2;
  const auto a = tube_condition_refine(mu, nu, p), b = tube_condition_refine(mu, nu, p);
  EXPECT_EQ(a.mask.keep, b.mask.keep);
  EXPECT_EQ(a.mask.retained_mass, b.mask.retained_mass);
}
