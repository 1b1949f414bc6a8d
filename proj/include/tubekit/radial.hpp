#pragma once

// Radial projections and direction sets on the full angle circle, discrete measures on square
// grids, exponent fits of covering data, and the tube-condition refinement of a pair of
// measures.
//
// Angles are normalized to t = angle / (2 pi) in [0, 1). A closed cell seen from a point
// outside it subtends a closed angle interval [t0, t1]; angle cell k (at resolution m) is
// covered iff [t0, t1] meets [k, k + 1) 2^-m.

#include "tubekit/geometry.hpp"
#include "tubekit/grid.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace tubekit {

/// Angle cells covered by the closed box [x0, x1] x [y0, y1] seen from y (outside the box).
void cover_box_angles(GridSet1D& out, Vec2 y, double x0, double x1, double y0, double y1);

/// Angle cells at S's resolution subtended by the cells of S from y. DomainError if y lies in
/// a closed member cell.
GridSet1D radial_project(Vec2 y, const GridSet2D& s);

/// Directions x - y over ordered pairs of distinct member cells, covered conservatively via the
/// difference box of each cell pair; antipodally symmetric. Needs at least two cells.
GridSet1D direction_set(const GridSet2D& e);

struct ExponentReport {
  double slope = 0;
  double intercept = 0;
  /// Largest |log2 N - (intercept + slope log2(1/r))|.
  double max_residual = 0;
  std::vector<double> scales;
  std::vector<double> counts;
};

/// Least-squares slope of log2 N against log2(1/r). Needs >= 3 distinct scales and positive counts.
ExponentReport exponent_fit(const std::vector<std::pair<double, double>>& counts);

/// Covering numbers of a circle set at r = 2^-e for each e, then the fit.
ExponentReport covering_exponent(const GridSet1D& s, const std::vector<int>& exps);

/// exponent_fit of covering numbers of radial_project(y, E). y must be >= 1/4 from E.
ExponentReport pinned_exponent(Vec2 y, const GridSet2D& e, const std::vector<int>& exps);

// ---- measures -------------------------------------------------------------------------------

struct DiscreteMeasure2D {
  GridSet2D support;
  /// Dense weights over the frame, row-major like the support bits.
  std::vector<double> weights;
  double s = 1;
  double c = 1;

  static DiscreteMeasure2D uniform(const GridSet2D& support, double s = 1, double c = 1);
  /// weight > 0 exactly on the support; sum within 2^-40 of 1.
  void validate() const;
  double weight(std::int64_t i, std::int64_t j) const { return weights[support.index(i, j)]; }
  double total() const;
};

/// max over cell centers x and r = delta 2^k (up to the frame side) of mu(B(x, r)) / r^s, where
/// B(x, r) collects the cells whose closed square is within distance < r of x.
double ball_condition_check(const DiscreteMeasure2D& mu, double s);

/// Weight of the cells meeting the tube (same predicate as rasterize_tube).
double tube_mass(const DiscreteMeasure2D& mu, const Tube& t);

//   <gridset 2 block>
//   <i> <j> <weight>      one line per support cell, row-major
void write_measure(std::ostream& out, const DiscreteMeasure2D& mu);
DiscreteMeasure2D read_measure(std::istream& in);

// ---- tube condition -------------------------------------------------------------------------

struct TubeConditionParams {
  double eta = 0.1;
  double rho = 0.5;
  double eps = 1.0;
  int k0 = 1;
  int kmax = 3;
  /// No tube of radius delta_{k0 - Gamma} may carry more than m0 of either measure.
  double m0 = 1.0;

  /// round(log(2 / rho) / log(1 + eps))
  int gamma() const;
  /// Throws ParameterError unless s_mu (1 - rho) > 2 eta, s_nu rho / 2 > 2 eta, Gamma >= 1.
  void validate(double s_mu, double s_nu) const;
};

struct GoodPairMask {
  int m = 0;
  GridSet2D e, f;
  /// Row-major over (index of x in e.members(), index of y in f.members()).
  std::vector<bool> keep;
  double retained_mass = 0;

  bool contains(std::size_t xi, std::size_t yi) const { return keep[xi * f.count() + yi]; }
};

struct ScaleReport {
  int exponent = 0;  // delta_k = 2^-exponent
  std::size_t family_size = 0;
  std::size_t bad_mu = 0, bad_nu = 0;
  std::size_t mbad_mu = 0, mbad_nu = 0;
  double mbad_bound = 0;  // 2 delta_k^-eta
  std::size_t badbad_f = 0, badbad_e = 0;
  std::size_t removed_pairs = 0;
  /// Pairs removed around bad tubes but outside every associated M-Bad neighbourhood.
  std::size_t removed_outside_mbad = 0;
};

struct TubeCertificate {
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  double max_ratio = 0;  // max tube mass / delta_k^eta over retained pairs
};

struct TubeConditionResult {
  GoodPairMask mask;
  std::vector<ScaleReport> scales;
  TubeCertificate certificate;
};

/// Greedy discrete refinement: bad tubes per ladder scale, maximal M-Bad families, BadBad
/// points, neighbourhood removal, then an exhaustive certificate over every retained pair.
TubeConditionResult tube_condition_refine(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu,
                                          const TubeConditionParams& p);

/// Re-checks every retained pair at every ladder scale.
TubeCertificate verify_tube_condition(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu,
                                      const TubeConditionParams& p, const GoodPairMask& mask);

/// Ladder exponents used by the refinement (ladder entries with 2^-e >= delta).
std::vector<int> tube_ladder(const TubeConditionParams& p, int m);

}  // namespace tubekit
