#include "tubekit/geometry.hpp"

#include "tubekit/errors.hpp"
#include "tubekit/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace tubekit {

namespace {

constexpr double kPi = std::numbers::pi;

struct H3 {
  Rational x, y, w;
};

H3 cross(const H3& p, const H3& q) {
  return {p.y * q.w - p.w * q.y, p.w * q.x - p.x * q.w, p.x * q.y - p.y * q.x};
}

Rational det3(const H3& a, const H3& b, const H3& c) {
  return a.x * (b.y * c.w - b.w * c.y) - a.y * (b.x * c.w - b.w * c.x) + a.w * (b.x * c.y - b.y * c.x);
}

H3 as_h3(const ProjPoint& p) { return {p.x, p.y, p.w}; }

double wrap_unit(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

}  // namespace

// ---- points and lines ------------------------------------------------------------------------

Vec2 ProjPoint::affine() const {
  if (!is_finite()) throw DomainError("point at infinity has no affine coordinates");
  return {to_double(x / w), to_double(y / w)};
}

bool ProjPoint::equivalent(const ProjPoint& o) const {
  if (is_zero() || o.is_zero()) return false;
  const H3 c = cross(as_h3(*this), as_h3(o));
  return c.x == 0 && c.y == 0 && c.w == 0;
}

std::string to_string(const ProjPoint& p) {
  return format_rational(p.x) + ":" + format_rational(p.y) + ":" + format_rational(p.w);
}

Line Line::from_coeffs(const Rational& a, const Rational& b, const Rational& c) {
  if (a == 0 && b == 0) throw DegenerateConfiguration("line needs (a, b) != (0, 0)");
  Line l;
  l.a = a;
  l.b = b;
  l.c = c;
  const double da = to_double(a), db = to_double(b), dc = to_double(c);
  const double n = std::hypot(da, db);
  l.na = da / n;
  l.nb = db / n;
  l.nc = dc / n;
  return l;
}

Line Line::through(const ProjPoint& p, const ProjPoint& q) {
  if (p.is_zero() || q.is_zero() || p.equivalent(q)) throw DegenerateConfiguration("line needs two distinct points");
  const H3 l = cross(as_h3(p), as_h3(q));
  if (l.x == 0 && l.y == 0) throw DegenerateConfiguration("both points lie at infinity");
  return from_coeffs(l.x, l.y, l.w);
}

Line Line::through_angle(Vec2 p, double theta) {
  // normal (-sin, cos)
  const double a = -std::sin(theta), b = std::cos(theta);
  return from_coeffs(Rational(a), Rational(b), Rational(-(a * p.x + b * p.y)));
}

double Line::angle() const {
  // direction (nb, -na)
  double t = std::atan2(-na, nb);
  if (t < 0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

double crossing_angle(const Line& l1, const Line& l2) {
  double d = std::fabs(l1.angle() - l2.angle());
  if (d > kPi / 2) d = kPi - d;
  return d;
}

// ---- pencils ---------------------------------------------------------------------------------

Line Pencil::line_at(double param) const {
  if (tip.is_finite()) return Line::through_angle(tip.affine(), kPi * param);
  const double dx = to_double(tip.x), dy = to_double(tip.y);
  if (tip.x == 0) return Line::from_coeffs(Rational(1), Rational(0), Rational(-param));  // x = s
  // y = (dy/dx) x + s  <=>  dy x - dx y + dx s = 0
  return Line::from_coeffs(Rational(dy), Rational(-dx), Rational(dx * param));
}

std::vector<Line> Pencil::lines() const {
  std::vector<Line> out;
  for (auto i : directions.members())
    out.push_back(line_at(to_double(directions.lo()) + (static_cast<double>(i) + 0.5) * directions.delta()));
  return out;
}

double min_crossing_angle(const Pencil& p, const Pencil& q) {
  double best = kPi / 2;
  const auto lq = q.lines();
  for (const auto& a : p.lines())
    for (const auto& b : lq) best = std::min(best, crossing_angle(a, b));
  return best;
}

// ---- rasterization ---------------------------------------------------------------------------

namespace {

void rasterize_into(GridSet2D& out, const Line& l, double r) {
  const std::int64_t n = out.side();
  const double d = out.delta();
  const double lo = to_double(out.lo());
  for (std::int64_t j = 0; j < n; ++j) {
    const double y0 = lo + static_cast<double>(j) * d, y1 = y0 + d;
    const double by_min = std::min(l.nb * y0, l.nb * y1), by_max = std::max(l.nb * y0, l.nb * y1);
    if (l.na == 0) {
      // |b y + c| < r for some y in [y0, y1]
      const double fmin = by_min + l.nc, fmax = by_max + l.nc;
      const bool meets = fmin < r && fmax > -r;
      if (meets) out.bits().set_range(j * n, (j + 1) * n);
      continue;
    }
    // a x in (-r - c - max(b y), r - c - min(b y))
    double xl = (-r - l.nc - by_max) / l.na, xh = (r - l.nc - by_min) / l.na;
    if (l.na < 0) std::swap(xl, xh);
    const double u = (xl - lo) / d, v = (xh - lo) / d;
    if (!(v > 0) || !(u < static_cast<double>(n))) continue;
    const std::int64_t first = u <= 0 ? 0 : static_cast<std::int64_t>(std::floor(u));
    const std::int64_t last = v >= static_cast<double>(n) ? n : static_cast<std::int64_t>(std::ceil(v));  // exclusive
    if (last > first) out.bits().set_range(j * n + first, j * n + last);
  }
}

}  // namespace

GridSet2D rasterize_tube(const Tube& t, const Rational& lo, const Rational& hi, int m) {
  GridSet2D out = GridSet2D::on(m, lo, hi);
  if (!(t.radius >= out.delta() / 2)) throw ParameterError("tube radius must be at least delta / 2");
  rasterize_into(out, t.line, t.radius);
  return out;
}

GridSet2D rasterize_pencil(const Pencil& p, const Rational& lo, const Rational& hi, int m) {
  if (p.tip.is_finite()) {
    const Rational tx = p.tip.x / p.tip.w, ty = p.tip.y / p.tip.w;
    if (tx > lo && tx < hi && ty > lo && ty < hi)
      throw UnsupportedConfiguration("pencil tip " + to_string(p.tip) + " lies inside the domain");
  }
  GridSet2D out = GridSet2D::on(m, lo, hi);
  const double r = to_double(p.radius);
  if (!(r >= out.delta() / 2)) throw ParameterError("tube radius must be at least delta / 2");
  for (const auto& l : p.lines()) rasterize_into(out, l, r);
  return out;
}

Rational intersection_measure(const std::vector<GridSet2D>& sets) {
  if (sets.empty()) throw ParameterError("intersection_measure needs at least one set");
  GridSet2D acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) acc = set_intersect(acc, sets[i]);
  return Rational(acc.count()) * from_grid_index(1, 2 * acc.m());
}

// ---- homographies ----------------------------------------------------------------------------

Homography::Homography() {
  h_ = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (int i = 0; i < 9; ++i) d_[i] = to_double(h_[i]);
}

Homography::Homography(const std::array<Rational, 9>& rows) : h_(rows) {
  if (determinant() == 0) throw DegenerateConfiguration("homography matrix is singular");
  for (int i = 0; i < 9; ++i) d_[i] = to_double(h_[i]);
}

Homography Homography::translation(const Rational& tx, const Rational& ty) {
  return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

Rational Homography::determinant() const {
  return det3({h_[0], h_[1], h_[2]}, {h_[3], h_[4], h_[5]}, {h_[6], h_[7], h_[8]});
}

Homography Homography::inverse() const {
  const auto& m = h_;
  const Rational det = determinant();
  std::array<Rational, 9> inv = {
      m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
      m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
      m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3],
  };
  for (auto& v : inv) v /= det;
  return Homography(inv);
}

Homography Homography::operator*(const Homography& o) const {
  std::array<Rational, 9> out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      Rational s = 0;
      for (int k = 0; k < 3; ++k) s += at(r, k) * o.at(k, c);
      out[3 * r + c] = s;
    }
  return Homography(out);
}

ProjPoint Homography::apply(const ProjPoint& p) const {
  return {h_[0] * p.x + h_[1] * p.y + h_[2] * p.w, h_[3] * p.x + h_[4] * p.y + h_[5] * p.w,
          h_[6] * p.x + h_[7] * p.y + h_[8] * p.w};
}

Line Homography::apply(const Line& l) const {
  // l' = H^-T l = C l / det(H), C the cofactor matrix
  const auto& m = h_;
  const Rational c00 = m[4] * m[8] - m[5] * m[7], c01 = m[5] * m[6] - m[3] * m[8], c02 = m[3] * m[7] - m[4] * m[6];
  const Rational c10 = m[2] * m[7] - m[1] * m[8], c11 = m[0] * m[8] - m[2] * m[6], c12 = m[1] * m[6] - m[0] * m[7];
  const Rational c20 = m[1] * m[5] - m[2] * m[4], c21 = m[2] * m[3] - m[0] * m[5], c22 = m[0] * m[4] - m[1] * m[3];
  const Rational a = c00 * l.a + c01 * l.b + c02 * l.c;
  const Rational b = c10 * l.a + c11 * l.b + c12 * l.c;
  const Rational c = c20 * l.a + c21 * l.b + c22 * l.c;
  if (a == 0 && b == 0) throw DomainError("line is sent to the line at infinity");
  return Line::from_coeffs(a, b, c);
}

Vec2 Homography::apply(Vec2 p) const {
  const double w = d_[6] * p.x + d_[7] * p.y + d_[8];
  if (w == 0) throw DomainError("point is sent to infinity");
  return {(d_[0] * p.x + d_[1] * p.y + d_[2]) / w, (d_[3] * p.x + d_[4] * p.y + d_[5]) / w};
}

bool Homography::equivalent(const Homography& o) const {
  // find a nonzero pivot and compare cross ratios entrywise
  int k = 0;
  while (k < 9 && h_[k] == 0) ++k;
  if (k == 9 || o.h_[k] == 0) return false;
  for (int i = 0; i < 9; ++i)
    if (h_[i] * o.h_[k] != o.h_[i] * h_[k]) return false;
  return true;
}

namespace {

// Columns lambda_i p_i with sum lambda_i p_i = p_4: maps e1, e2, e3, (1,1,1) to the quadruple.
Homography basis_map(const std::array<ProjPoint, 4>& p, const char* which) {
  const H3 a = as_h3(p[0]), b = as_h3(p[1]), c = as_h3(p[2]), d = as_h3(p[3]);
  for (const auto& q : p)
    if (q.is_zero()) throw DegenerateConfiguration(std::string(which) + " contains the zero vector");
  const Rational dabc = det3(a, b, c), dabd = det3(a, b, d), dacd = det3(a, c, d), dbcd = det3(b, c, d);
  if (dabc == 0 || dabd == 0 || dacd == 0 || dbcd == 0)
    throw DegenerateConfiguration(std::string(which) + " has three collinear points");
  // Cramer: lambda = [a b c]^-1 d
  const Rational l1 = det3(d, b, c) / dabc, l2 = det3(a, d, c) / dabc, l3 = det3(a, b, d) / dabc;
  return Homography({l1 * a.x, l2 * b.x, l3 * c.x, l1 * a.y, l2 * b.y, l3 * c.y, l1 * a.w, l2 * b.w, l3 * c.w});
}

}  // namespace

Homography homography_from_points(const std::array<ProjPoint, 4>& src, const std::array<ProjPoint, 4>& dst) {
  const Homography s = basis_map(src, "source");
  const Homography d = basis_map(dst, "target");
  const Homography h = d * s.inverse();
  for (int i = 0; i < 4; ++i)
    if (!h.apply(src[i]).equivalent(dst[i])) throw std::logic_error("homography verification failed");
  return h;
}

NormalizedTips normalize_tips(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3, const ProjPoint& p4) {
  const std::array<ProjPoint, 4> tips{p1, p2, p3, p4};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (tips[i].is_zero() || tips[i].equivalent(tips[j])) throw DegenerateConfiguration("tips must be distinct");
  const H3 a = as_h3(p1), b = as_h3(p2), c = as_h3(p3), d = as_h3(p4);
  if (det3(a, b, c) == 0 || det3(a, b, d) == 0 || det3(a, c, d) == 0 || det3(b, c, d) == 0)
    throw DegenerateConfiguration("three tips are collinear");
  // A = [p1 p2 p3] maps e_i to p_i; its inverse sends the tips to the coordinate points.
  const Homography A({a.x, b.x, c.x, a.y, b.y, c.y, a.w, b.w, c.w});
  const Homography inv = A.inverse();
  const ProjPoint q = inv.apply(p4);  // (t0 w, s0 w, w), all nonzero
  const Rational t0 = q.x / q.w, s0 = q.y / q.w;
  const Homography rescale({1, 0, 0, 0, 1 / s0, 0, 0, 0, 1});
  NormalizedTips out{rescale * inv, t0};
  return out;
}

// ---- applying homographies -------------------------------------------------------------------

namespace {

// Singular values of the Jacobian of h at p.
std::pair<double, double> stretch(const Homography& h, Vec2 p) {
  const double e = 1e-6;
  const Vec2 f = h.apply(p), fx = h.apply(Vec2{p.x + e, p.y}), fy = h.apply(Vec2{p.x, p.y + e});
  const double a = (fx.x - f.x) / e, b = (fy.x - f.x) / e, c = (fx.y - f.y) / e, d = (fy.y - f.y) / e;
  const double s1 = a * a + b * b + c * c + d * d;
  const double det = std::fabs(a * d - b * c);
  const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4 * det * det));
  return {std::sqrt((s1 - disc) / 2), std::sqrt((s1 + disc) / 2)};
}

void check_square_finite(const Homography& h, const Rational& lo, const Rational& hi) {
  const auto& m = h.matrix();
  int sign = 0;
  for (const Rational& x : {lo, hi})
    for (const Rational& y : {lo, hi}) {
      const Rational w = m[6] * x + m[7] * y + m[8];
      const int s = w > 0 ? 1 : (w < 0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) throw DomainError("the square meets the line sent to infinity");
      sign = s;
    }
}

// Parameter of a line in a pencil with the given tip (angle fraction or offset); nullopt at the
// offset chart's pole.
std::optional<double> line_param(const ProjPoint& tip, const Line& l) {
  if (tip.is_finite()) return wrap_unit(l.angle() / kPi);
  if (tip.x == 0) {  // x = s
    if (l.na == 0) return std::nullopt;
    return -l.nc / l.na;
  }
  // y = k x + s
  if (l.nb == 0) return std::nullopt;
  return -l.nc / l.nb;
}

double snap(double v, double cells_per_unit) {
  const double s = v * cells_per_unit;
  const double r = std::round(s);
  return std::fabs(s - r) < 1e-9 ? r / cells_per_unit : v;
}

void cover_param_arc(GridSet1D& out, double a, double b, bool circular) {
  // marks cells meeting the open arc/interval (a, b)
  const double d = out.delta(), lo = to_double(out.lo());
  auto mark = [&](double x0, double x1) {
    const double u = (x0 - lo) / d, v = (x1 - lo) / d;
    const auto first = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(u)));
    const auto last = std::min<std::int64_t>(out.cells(), static_cast<std::int64_t>(std::ceil(v)));
    for (std::int64_t k = first; k < last; ++k) out.insert(k);
  };
  if (!circular) {
    if (b > a) mark(a, b);
    return;
  }
  if (b > a) {
    mark(a, b);
  } else {  // wraps through 1 -> 0
    mark(a, 1.0);
    mark(0.0, b);
  }
}

}  // namespace

MappedPencil apply_homography(const Homography& h, const Pencil& p, const Rational& lo, const Rational& hi) {
  check_square_finite(h, lo, hi);
  const ProjPoint tip = h.apply(p.tip);
  const GridSet1D& dir = p.directions;
  if (p.tip.is_finite() && !(dir.lo() == 0 && dir.hi() == 1))
    throw DomainError("a finite tip needs directions on the angle circle [0, 1)");
  const bool circular = tip.is_finite();
  const double d = dir.delta(), dlo = to_double(dir.lo());
  const double cells_per_unit = std::ldexp(1.0, dir.m());
  std::vector<std::pair<double, double>> arcs;
  for (auto i : dir.members()) {
    const double t0 = dlo + static_cast<double>(i) * d, t1 = t0 + d, tm = t0 + d / 2;
    const auto a = line_param(tip, h.apply(p.line_at(t0)));
    const auto b = line_param(tip, h.apply(p.line_at(t1)));
    const auto c = line_param(tip, h.apply(p.line_at(tm)));
    if (!a || !b || !c) throw DomainError("a direction cell maps through the pole of the offset chart");
    double ia = snap(*a, cells_per_unit), ib = snap(*b, cells_per_unit);
    const double ic = *c;
    if (!circular) {
      if (ia > ib) std::swap(ia, ib);
      if (!(ic > ia && ic < ib)) throw DomainError("a direction cell maps through the pole of the offset chart");
    } else {
      // orient the arc so that it runs through the midpoint image
      auto inside = [](double s, double e, double x) { return s <= e ? (x > s && x < e) : (x > s || x < e); };
      if (!inside(ia, ib, ic)) std::swap(ia, ib);
    }
    arcs.emplace_back(ia, ib);
  }
  GridSet1D out;
  if (circular) {
    out = GridSet1D::on(dir.m(), 0, 1);
  } else if (!p.tip.is_finite()) {
    out = GridSet1D(dir.m(), dir.origin(), dir.cells());
    double mn = to_double(dir.lo()), mx = to_double(dir.hi());
    for (auto [a, b] : arcs) mn = std::min(mn, a), mx = std::max(mx, b);
    if (mn < to_double(dir.lo()) || mx > to_double(dir.hi()))
      out = GridSet1D::on(dir.m(), Rational(static_cast<long long>(std::floor(mn))), Rational(static_cast<long long>(std::ceil(mx)) + (std::ceil(mx) == std::floor(mn) ? 1 : 0)));
  } else {
    double mn = 0, mx = 1;
    for (auto [a, b] : arcs) mn = std::min(mn, a), mx = std::max(mx, b);
    out = GridSet1D::on(dir.m(), Rational(static_cast<long long>(std::floor(mn))), Rational(static_cast<long long>(std::ceil(mx))));
  }
  for (auto [a, b] : arcs) cover_param_arc(out, a, b, circular);
  MappedPencil mp{Pencil{tip, out, p.radius}, {}};
  double smin = std::numeric_limits<double>::infinity(), smax = 0;
  const double l = to_double(lo), side = to_double(hi - lo);
  for (int j = 0; j < 16; ++j)
    for (int k = 0; k < 16; ++k) {
      const auto [s1, s2] = stretch(h, Vec2{l + (k + 0.5) * side / 16, l + (j + 0.5) * side / 16});
      smin = std::min(smin, s1);
      smax = std::max(smax, s2);
    }
  const double r = to_double(p.radius);
  mp.report = {smax / smin, smin, smax, r * smin, r * smax};
  return mp;
}

namespace {

// Separating-axis test: true iff a convex polygon and an axis-aligned rectangle overlap in a set
// of positive area (touching along an edge or at a corner does not count).
bool polygon_meets_rect(const std::array<Vec2, 4>& poly, double x0, double y0, double x1, double y1) {
  double pminx = poly[0].x, pmaxx = poly[0].x, pminy = poly[0].y, pmaxy = poly[0].y;
  for (const auto& v : poly) {
    pminx = std::min(pminx, v.x), pmaxx = std::max(pmaxx, v.x);
    pminy = std::min(pminy, v.y), pmaxy = std::max(pmaxy, v.y);
  }
  const double btol = 1e-12 * (std::fabs(x0) + std::fabs(x1) + std::fabs(y0) + std::fabs(y1) + 1);
  if (pmaxx <= x0 + btol || pminx >= x1 - btol || pmaxy <= y0 + btol || pminy >= y1 - btol) return false;
  const std::array<Vec2, 4> rect{Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x1, y1}, Vec2{x0, y1}};
  for (int e = 0; e < 4; ++e) {
    const Vec2 a = poly[e], b = poly[(e + 1) % 4];
    const double nx = -(b.y - a.y), ny = b.x - a.x;
    double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin, rmin = pmin, rmax = -pmin;
    for (const auto& v : poly) {
      const double s = nx * v.x + ny * v.y;
      pmin = std::min(pmin, s), pmax = std::max(pmax, s);
    }
    for (const auto& v : rect) {
      const double s = nx * v.x + ny * v.y;
      rmin = std::min(rmin, s), rmax = std::max(rmax, s);
    }
    const double tol = 1e-12 * (std::fabs(pmin) + std::fabs(pmax) + 1);
    if (pmax <= rmin + tol || rmax <= pmin + tol) return false;
  }
  return true;
}

double diameter(const std::array<Vec2, 4>& q) {
  double best = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) best = std::max(best, std::hypot(q[i].x - q[j].x, q[i].y - q[j].y));
  return best;
}

}  // namespace

MappedGridSet apply_homography(const Homography& h, const GridSet2D& s, const Rational& lo, const Rational& hi, int m) {
  check_square_finite(h, s.lo(), s.hi());
  GridSet2D out = GridSet2D::on(m, lo, hi);
  const double d = s.delta(), slo = to_double(s.lo());
  const double od = out.delta(), olo = to_double(out.lo());
  const std::int64_t n = out.side();
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0;
  for (auto [i, j] : s.members()) {
    const double x0 = slo + static_cast<double>(i) * d, y0 = slo + static_cast<double>(j) * d;
    const std::array<Vec2, 4> q{h.apply(Vec2{x0, y0}), h.apply(Vec2{x0 + d, y0}), h.apply(Vec2{x0 + d, y0 + d}),
                                h.apply(Vec2{x0, y0 + d})};
    const double diam = diameter(q);
    dmin = std::min(dmin, diam), dmax = std::max(dmax, diam);
    double minx = q[0].x, maxx = q[0].x, miny = q[0].y, maxy = q[0].y;
    for (const auto& v : q) {
      minx = std::min(minx, v.x), maxx = std::max(maxx, v.x);
      miny = std::min(miny, v.y), maxy = std::max(maxy, v.y);
    }
    const auto c0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((minx - olo) / od)) - 1);
    const auto c1 = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor((maxx - olo) / od)) + 1);
    const auto r0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((miny - olo) / od)) - 1);
    const auto r1 = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor((maxy - olo) / od)) + 1);
    for (std::int64_t r = r0; r <= r1; ++r)
      for (std::int64_t c = c0; c <= c1; ++c) {
        const double cx = olo + static_cast<double>(c) * od, cy = olo + static_cast<double>(r) * od;
        if (!out.contains(c, r) && polygon_meets_rect(q, cx, cy, cx + od, cy + od)) out.insert(c, r);
      }
  }
  MappedGridSet mg{out, {}};
  const double base = d * std::sqrt(2.0);
  if (dmax > 0) mg.report = {dmax / dmin, dmin / base, dmax / base, 0, 0};
  return mg;
}

// ---- admissibility ---------------------------------------------------------------------------

double distance_to_unit_square(Vec2 p) {
  const double dx = std::max({0.0, -p.x, p.x - 1}), dy = std::max({0.0, -p.y, p.y - 1});
  return std::hypot(dx, dy);
}

double distance_to_unit_square(const Line& l) {
  const std::array<Vec2, 4> corners{Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  for (const auto& c : corners) {
    const double s = l.signed_distance(c);
    mn = std::min(mn, s), mx = std::max(mx, s);
  }
  if (mn <= 0 && mx >= 0) return 0;
  return std::min(std::fabs(mn), std::fabs(mx));
}

double minimal_width(const std::vector<Vec2>& pts) {
  if (pts.size() < 2) return 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[j].x - pts[i].x, dy = pts[j].y - pts[i].y;
      const double len = std::hypot(dx, dy);
      if (len == 0) continue;
      const double nx = -dy / len, ny = dx / len;
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (const auto& p : pts) {
        const double s = nx * p.x + ny * p.y;
        mn = std::min(mn, s), mx = std::max(mx, s);
      }
      best = std::min(best, mx - mn);
    }
  return std::isfinite(best) ? best : 0;
}

Admissibility tips_admissible(const std::array<Vec2, 4>& tips, double c) {
  if (!(c > 0 && c <= 1)) throw ParameterError("separation constant must lie in (0, 1]");
  auto in_range = [c](double v) { return v >= c && v <= 1 / c; };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double d = std::hypot(tips[i].x - tips[j].x, tips[i].y - tips[j].y);
      if (!in_range(d))
        return {false, "pairwise distance: |p" + std::to_string(i + 1) + " p" + std::to_string(j + 1) +
                           "| = " + std::to_string(d)};
    }
  for (int i = 0; i < 4; ++i) {
    const double d = distance_to_unit_square(tips[i]);
    if (!in_range(d)) return {false, "tip-to-square distance: p" + std::to_string(i + 1) + " at " + std::to_string(d)};
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Line l = Line::through(ProjPoint::finite(Rational(tips[i].x), Rational(tips[i].y)),
                                   ProjPoint::finite(Rational(tips[j].x), Rational(tips[j].y)));
      const double d = distance_to_unit_square(l);
      if (!in_range(d))
        return {false, "line-to-square distance: l(p" + std::to_string(i + 1) + ", p" + std::to_string(j + 1) +
                           ") at " + std::to_string(d)};
    }
  const double w = minimal_width({tips.begin(), tips.end()});
  if (!(w > 2 * c)) return {false, "not contained in a tube: width " + std::to_string(w)};
  return {};
}

// ---- files -----------------------------------------------------------------------------------

void write_pencil(std::ostream& out, const Pencil& p) {
  out << "pencil tip=" << to_string(p.tip) << " radius=" << format_rational(p.radius) << "\n";
  write_gridset(out, p.directions);
}

Pencil read_pencil(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing pencil header");
  std::istringstream hs(line);
  std::string tag, tip_tok, rad_tok, extra;
  hs >> tag >> tip_tok >> rad_tok;
  if (tag != "pencil" || rad_tok.empty() || (hs >> extra)) throw ParseError("bad pencil header: '" + line + "'");
  const std::string tip = header_value(tip_tok, "tip");
  const auto c1 = tip.find(':'), c2 = tip.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) throw ParseError("bad pencil tip '" + tip + "'");
  Pencil p;
  try {
    p.tip = {parse_rational(tip.substr(0, c1)), parse_rational(tip.substr(c1 + 1, c2 - c1 - 1)),
             parse_rational(tip.substr(c2 + 1))};
    p.radius = parse_rational(header_value(rad_tok, "radius"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad pencil header value: ") + e.what());
  }
  if (p.tip.is_zero()) throw ParseError("pencil tip is the zero vector");
  if (p.radius <= 0) throw ParseError("pencil radius must be positive");
  p.directions = read_gridset_1d(in);
  return p;
}

}  // namespace tubekit
