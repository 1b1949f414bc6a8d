#include "tubekit/constructions.hpp"

#include "tubekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace tubekit {

namespace {

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(std::int64_t v) {
  int e = 0;
  while ((std::int64_t{1} << e) < v) ++e;
  return e;
}

}  // namespace

void CantorSpec::validate() const {
  if (b < 1) throw ParameterError("cantor: b must be at least 1");
  if (ell < 2 || !is_power_of_two(ell)) throw ParameterError("cantor: ell must be a power of two >= 2");
  if (b > ell) throw ParameterError("cantor: b must not exceed ell");
  if (d < 1) throw ParameterError("cantor: depth must be at least 1");
  if (static_cast<std::int64_t>(d) * log2_exact(ell) > 62) throw ParameterError("cantor: d log2(ell) exceeds 62");
  if (!digits.empty()) {
    if (static_cast<int>(digits.size()) != b) throw ParameterError("cantor: digit pattern must hold b digits");
    std::set<int> seen;
    for (int g : digits) {
      if (g < 0 || g >= ell) throw ParameterError("cantor: digit out of range");
      if (!seen.insert(g).second) throw ParameterError("cantor: repeated digit");
    }
  }
}

std::vector<int> CantorSpec::kept_digits() const {
  if (!digits.empty()) {
    std::vector<int> out = digits;
    std::sort(out.begin(), out.end());
    return out;
  }
  if (b == 1) return {0};
  std::vector<int> out;
  for (int k = 0; k < b; ++k)
    out.push_back(static_cast<int>(std::lround(static_cast<double>(k) * (ell - 1) / (b - 1))));
  return out;
}

int CantorSpec::natural_m() const { return d * log2_exact(ell); }

double CantorSpec::sigma() const { return std::log(static_cast<double>(b)) / std::log(static_cast<double>(ell)); }

GridSet1D cantor_set(const CantorSpec& spec) {
  spec.validate();
  return cantor_set(spec, spec.natural_m(), Rational(0), Rational(1));
}

GridSet1D cantor_set(const CantorSpec& spec, int m, const Rational& lo, const Rational& hi) {
  spec.validate();
  GridSet1D out = GridSet1D::on(m, lo, hi);
  const BigInt leaves = pow(BigInt(spec.ell), static_cast<unsigned>(spec.d));
  const Rational leaf_cells = Rational(out.cells()) / Rational(leaves);
  if (denominator(leaf_cells) != 1 || leaf_cells < 1)
    throw ParameterError("cantor: leaf intervals are not whole cells at this resolution");
  const auto width = static_cast<std::int64_t>(numerator(leaf_cells));
  const std::vector<int> kept = spec.kept_digits();

  // leaf indices of all kept digit strings, built level by level
  std::vector<std::int64_t> idx{0};
  for (int level = 0; level < spec.d; ++level) {
    std::vector<std::int64_t> next;
    next.reserve(idx.size() * kept.size());
    for (auto v : idx)
      for (int g : kept) next.push_back(v * spec.ell + g);
    idx = std::move(next);
  }
  for (auto v : idx) out.bits().set_range(v * width, (v + 1) * width);
  return out;
}

GridSet1D ap_set(std::int64_t n, std::int64_t gap, int m, std::int64_t start) {
  if (m < 0 || m > 40) throw ParameterError("ap_set: resolution out of range");
  if (n < 1) throw ParameterError("ap_set: n must be positive");
  if (n > 1 && gap < 1) throw ParameterError("ap_set: gap must be positive");
  const std::int64_t cells = std::int64_t{1} << m;
  if (start < 0 || start + (n - 1) * gap >= cells)
    throw DomainError("ap_set: progression leaves [0, 1) at resolution " + std::to_string(m));
  GridSet1D out(m, 0, cells);
  for (std::int64_t i = 0; i < n; ++i) out.insert(start + i * gap);
  return out;
}

GridSet1D gp_set(const Rational& ratio, int count, int m, int first) {
  if (m < 0 || m > 40) throw ParameterError("gp_set: resolution out of range");
  if (!(ratio > 0 && ratio < 1)) throw DomainError("gp_set: ratio must lie in (0, 1)");
  if (count < 1 || first < 1) throw ParameterError("gp_set: need count >= 1 and first >= 1");
  GridSet1D out(m, 0, std::int64_t{1} << m);
  Rational term = 1;
  for (int k = 0; k < first; ++k) term *= ratio;
  const Rational scale(BigInt(1) << m);
  for (int k = 0; k < count; ++k, term *= ratio)
    out.insert(static_cast<std::int64_t>(floor_div(term * scale)));
  return out;
}

LatticeConfig collinear_tip_config(std::int64_t n, int m) {
  if (m < 2 || m > 30) throw ParameterError("collinear_tip_config: resolution out of range");
  const std::int64_t cells = std::int64_t{1} << m;
  if (n < 1 || n > cells / 4) throw ParameterError("collinear_tip_config: need 1 <= n <= 2^m / 4");
  const std::int64_t spacing = cells / n;
  std::vector<std::int64_t> at;
  for (std::int64_t a = 0; a < n; ++a) at.push_back(a * spacing + spacing / 2);

  const Rational delta = from_grid_index(1, m);
  GridSet1D vert(m, 0, cells), horiz(m, 0, cells);
  GridSet1D up(m + 1, -2 * cells, 4 * cells);   // s in [-1, 1)
  GridSet1D down(m + 1, 0, 4 * cells);          // s in [0, 2)
  LatticeConfig out;
  for (auto x : at) vert.insert(x);
  for (auto y : at) horiz.insert(y);
  for (auto x : at)
    for (auto y : at) {
      // y = x + s with s = (y - x) delta; y = -x + s with s = (x + y + 1) delta
      up.insert(2 * (y - x) + 2 * cells);
      down.insert(2 * (x + y + 1));
      out.points.push_back({(static_cast<double>(x) + 0.5) / static_cast<double>(cells),
                            (static_cast<double>(y) + 0.5) / static_cast<double>(cells)});
      out.point_cells.emplace_back(x, y);
    }
  out.pencils = {Pencil{ProjPoint::at_infinity(0, 1), vert, delta},
                 Pencil{ProjPoint::at_infinity(1, 0), horiz, delta},
                 Pencil{ProjPoint::at_infinity(1, 1), up, delta},
                 Pencil{ProjPoint::at_infinity(1, -1), down, delta}};
  return out;
}

LatticeConfig noncollinear_three_config(int n, int m) {
  if (m < 4 || m > 30) throw ParameterError("noncollinear_three_config: resolution out of range");
  if (n < 1 || n > m - 3) throw ParameterError("noncollinear_three_config: need 1 <= n <= m - 3");
  const std::int64_t cells = std::int64_t{1} << m;
  std::vector<std::int64_t> at;
  for (int i = 0; i < n; ++i) at.push_back(std::int64_t{1} << (i + m - n - 1));

  const int dm = m + 4;
  const double dcells = std::exp2(dm);
  GridSet1D vert(m, 0, cells), horiz(m, 0, cells);
  GridSet1D dirs(dm, 0, std::int64_t{1} << dm);
  LatticeConfig out;
  for (auto x : at) vert.insert(x);
  for (auto y : at) horiz.insert(y);
  for (auto x : at)
    for (auto y : at) {
      const Vec2 p{(static_cast<double>(x) + 0.5) / static_cast<double>(cells),
                   (static_cast<double>(y) + 0.5) / static_cast<double>(cells)};
      const double t = std::atan2(p.y, p.x) / std::numbers::pi;
      dirs.insert(static_cast<std::int64_t>(std::floor(t * dcells)));
      out.points.push_back(p);
      out.point_cells.emplace_back(x, y);
    }
  const Rational delta = from_grid_index(1, m);
  out.pencils = {Pencil{ProjPoint::finite(0, 0), dirs, delta},
                 Pencil{ProjPoint::at_infinity(0, 1), vert, delta},
                 Pencil{ProjPoint::at_infinity(1, 0), horiz, delta}};
  return out;
}

std::array<Pencil, 4> product_pencils(const GridSet1D& a) {
  if (a.empty()) throw ParameterError("product_pencils: A is empty");
  const int m = a.m();
  if (m < 2 || m > 30) throw ParameterError("product_pencils: resolution out of range");
  const std::vector<std::int64_t> mem = a.members();
  const std::int64_t k_lo = a.origin() + mem.front(), k_hi = a.origin() + mem.back() + 1;
  const std::int64_t cells = std::int64_t{1} << m;
  if (4 * k_lo < cells || 2 * k_hi > cells) throw DomainError("product_pencils: A must lie in [1/4, 1/2)");

  const Rational delta = from_grid_index(1, m);
  const double dc = static_cast<double>(cells);
  GridSet1D cone0(m, 0, cells), cone1(m, 0, cells);
  // Conservative cover of the angle interval [t0, t1] (fractions of pi).
  auto cover = [&](GridSet1D& dirs, double t0, double t1) {
    const auto c0 = static_cast<std::int64_t>(std::floor((t0 - 1e-12) * dc));
    const auto c1 = static_cast<std::int64_t>(std::floor((t1 + 1e-12) * dc));
    dirs.bits().set_range(c0, c1 + 1);
  };
  for (auto i : mem)
    for (auto j : mem) {
      const double x0 = static_cast<double>(a.origin() + i) / dc, x1 = x0 + 1 / dc;
      const double y0 = static_cast<double>(a.origin() + j) / dc, y1 = y0 + 1 / dc;
      cover(cone0, std::atan2(y0, x1) / std::numbers::pi, std::atan2(y1, x0) / std::numbers::pi);
      cover(cone1, std::atan2(1 - y1, 1 - x0) / std::numbers::pi, std::atan2(1 - y0, 1 - x1) / std::numbers::pi);
    }
  return {Pencil{ProjPoint::at_infinity(0, 1), a, delta / 2}, Pencil{ProjPoint::at_infinity(1, 0), a, delta / 2},
          Pencil{ProjPoint::finite(0, 0), cone0, delta}, Pencil{ProjPoint::finite(1, 1), cone1, delta}};
}

ProductContainment product_containment(const GridSet1D& a, const std::array<Pencil, 4>& p, std::int64_t slack) {
  const int m = a.m();
  ProductContainment out;
  out.product = reframe(product_square(a), Rational(0), Rational(1));
  GridSet2D common = GridSet2D::full(m, Rational(0), Rational(1));
  for (const auto& pencil : p)
    common = set_intersect(common, inflate(rasterize_pencil(pencil, Rational(0), Rational(1), m), slack));
  out.uncovered = set_difference(out.product, common);
  return out;
}

}  // namespace tubekit
