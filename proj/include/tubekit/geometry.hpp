#pragma once

// Projective points, lines, delta-tubes, pencils of tubes and homographies, with rasterization
// onto square grid domains.
//
// Rasterization rule: a cell belongs to a tube's raster iff the open strip {|dist| < radius}
// meets the open cell, i.e. the overlap has positive area.
//
// Pencil parameters: for a finite tip the direction grid set lives on the normalized angle
// circle t in [0, 1) (angle pi t, lines taken mod pi); for a tip [dx:dy:0] at infinity the grid
// set holds offsets s: lines y = (dy/dx) x + s, or x = s when dx = 0. Each member cell
// contributes the line at its center parameter.

#include "tubekit/grid.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tubekit {

struct Vec2 {
  double x = 0;
  double y = 0;
};

struct ProjPoint {
  Rational x{0}, y{0}, w{1};

  static ProjPoint finite(const Rational& x, const Rational& y) { return {x, y, Rational(1)}; }
  static ProjPoint at_infinity(const Rational& dx, const Rational& dy) { return {dx, dy, Rational(0)}; }

  bool is_finite() const { return w != 0; }
  bool is_zero() const { return x == 0 && y == 0 && w == 0; }
  /// Affine coordinates; requires a finite point.
  Vec2 affine() const;
  /// Same point up to nonzero scaling.
  bool equivalent(const ProjPoint& o) const;
};

std::string to_string(const ProjPoint& p);

struct Line {
  /// a x + b y + c = 0 exactly.
  Rational a{0}, b{1}, c{0};
  /// Same line scaled so that na^2 + nb^2 = 1.
  double na = 0, nb = 1, nc = 0;

  static Line from_coeffs(const Rational& a, const Rational& b, const Rational& c);
  /// Line through two distinct projective points (one may lie at infinity).
  static Line through(const ProjPoint& p, const ProjPoint& q);
  /// Line through a finite point with direction angle theta (radians).
  static Line through_angle(Vec2 p, double theta);

  double signed_distance(Vec2 p) const { return na * p.x + nb * p.y + nc; }
  /// Direction angle in [0, pi).
  double angle() const;
};

struct Tube {
  Line line;
  double radius = 0;
};

struct Pencil {
  ProjPoint tip;
  GridSet1D directions;
  Rational radius;

  /// Center lines of the member tubes, in member order.
  std::vector<Line> lines() const;
  /// Line for a single parameter value (angle fraction or offset).
  Line line_at(double param) const;
};

/// Angle between two lines in [0, pi/2].
double crossing_angle(const Line& l1, const Line& l2);
/// Smallest crossing angle between a line of p and a line of q.
double min_crossing_angle(const Pencil& p, const Pencil& q);

/// Raster of a tube on the square [lo, hi)^2 at resolution m. Requires radius >= delta / 2.
GridSet2D rasterize_tube(const Tube& t, const Rational& lo, const Rational& hi, int m);
/// Union of the member tubes' rasters. The tip must not lie in the open square.
GridSet2D rasterize_pencil(const Pencil& p, const Rational& lo, const Rational& hi, int m);

/// delta^2 times the number of cells common to every set.
Rational intersection_measure(const std::vector<GridSet2D>& sets);

class Homography {
 public:
  Homography();  // identity
  explicit Homography(const std::array<Rational, 9>& rows);

  static Homography identity() { return Homography(); }
  static Homography translation(const Rational& tx, const Rational& ty);

  const std::array<Rational, 9>& matrix() const { return h_; }
  const Rational& at(int r, int c) const { return h_[3 * r + c]; }
  Rational determinant() const;
  Homography inverse() const;
  Homography operator*(const Homography& o) const;

  ProjPoint apply(const ProjPoint& p) const;
  /// Image of a line: coefficients transform by the inverse transpose.
  Line apply(const Line& l) const;
  /// Affine image of a finite point in doubles (w of the image must be nonzero).
  Vec2 apply(Vec2 p) const;

  /// True iff the two matrices agree up to a nonzero scalar.
  bool equivalent(const Homography& o) const;

 private:
  std::array<Rational, 9> h_;
  std::array<double, 9> d_;
};

/// The homography sending src[i] to dst[i]. No three points of either quadruple may be collinear.
Homography homography_from_points(const std::array<ProjPoint, 4>& src, const std::array<ProjPoint, 4>& dst);

struct NormalizedTips {
  Homography map;
  /// First coordinate of p4's image after rescaling its second coordinate to 1.
  Rational t0;
};

/// Sends p1 -> [1:0:0], p2 -> [0:1:0], p3 -> (0,0) and p4 -> (t0, 1); the map is built from the
/// given homogeneous representatives, which fixes t0.
NormalizedTips normalize_tips(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3, const ProjPoint& p4);

struct DistortionReport {
  /// Max over min of the local size ratios (cell-image diameters, or Jacobian stretch for pencils).
  double distortion = 1;
  double min_scale = 1;
  double max_scale = 1;
  /// Source radius times the stretch range (pencils only).
  double radius_min = 0;
  double radius_max = 0;
};

struct MappedPencil {
  Pencil pencil;
  DistortionReport report;
};

struct MappedGridSet {
  GridSet2D set;
  DistortionReport report;
};

/// Maps the tip exactly and covers each direction cell's image arc at the same parameter
/// resolution. The radius is kept; the report gives the stretch range of H over [lo, hi)^2.
MappedPencil apply_homography(const Homography& h, const Pencil& p, const Rational& lo, const Rational& hi);
/// Forward covering of every member cell's image quadrilateral on the target square at
/// resolution m. Throws DomainError if the source square meets the line sent to infinity.
MappedGridSet apply_homography(const Homography& h, const GridSet2D& s, const Rational& lo, const Rational& hi, int m);

struct Admissibility {
  bool pass = true;
  /// Empty on pass; otherwise names the first failing predicate.
  std::string failed;
};

/// Distances between tips, from tips to [0,1]^2 and from tip-pair lines to [0,1]^2 must lie in
/// [c, 1/c], and no strip of half-width c may contain all four tips.
Admissibility tips_admissible(const std::array<Vec2, 4>& tips, double c);

/// Euclidean distance from a point / a line to the closed unit square (0 when they meet).
double distance_to_unit_square(Vec2 p);
double distance_to_unit_square(const Line& l);
/// Minimum over directions of the extent of the points' projections.
double minimal_width(const std::vector<Vec2>& pts);

// ---- pencil files ----------------------------------------------------------------------------
//
//   pencil tip=<x>:<y>:<w> radius=<p/q>
//   gridset 1 m=<int> lo=<p/q> hi=<p/q>
//   <hex>

void write_pencil(std::ostream& out, const Pencil& p);
Pencil read_pencil(std::istream& in);

}  // namespace tubekit
