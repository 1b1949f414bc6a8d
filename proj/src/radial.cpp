#include "tubekit/radial.hpp"

#include "tubekit/errors.hpp"
#include "tubekit/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace tubekit {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// wrap into (-pi, pi]
double wrap(double a) {
  while (a <= -std::numbers::pi) a += kTwoPi;
  while (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

GridSet1D circle(int m) { return GridSet1D(m, 0, std::int64_t{1} << m); }

}  // namespace

void cover_box_angles(GridSet1D& out, Vec2 y, double x0, double x1, double y0, double y1) {
  const double ac = std::atan2((y0 + y1) / 2 - y.y, (x0 + x1) / 2 - y.x);
  double lo = 0, hi = 0;
  for (double x : {x0, x1})
    for (double yy : {y0, y1}) {
      const double d = wrap(std::atan2(yy - y.y, x - y.x) - ac);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  const std::int64_t n = out.cells();
  const auto k0 = static_cast<std::int64_t>(std::floor((ac + lo) / kTwoPi * static_cast<double>(n)));
  const auto k1 = static_cast<std::int64_t>(std::floor((ac + hi) / kTwoPi * static_cast<double>(n)));
  if (k1 - k0 + 1 >= n) {
    out.bits().set_range(0, n);
    return;
  }
  for (std::int64_t k = k0; k <= k1; ++k) out.insert(((k % n) + n) % n);
}

GridSet1D radial_project(Vec2 y, const GridSet2D& s) {
  GridSet1D out = circle(s.m());
  const double h = s.delta();
  for (auto [i, j] : s.members()) {
    const double x0 = s.cell_x(i), y0 = s.cell_x(j);
    if (y.x >= x0 && y.x <= x0 + h && y.y >= y0 && y.y <= y0 + h)
      throw DomainError("radial_project: the centre lies in a member cell");
    cover_box_angles(out, y, x0, x0 + h, y0, y0 + h);
  }
  return out;
}

GridSet1D direction_set(const GridSet2D& e) {
  if (e.count() < 2) throw ParameterError("direction_set needs at least two cells");
  const std::int64_t n = e.side();
  const std::int64_t w = 2 * n - 1;
  std::vector<char> seen(static_cast<std::size_t>(w * w), 0);
  const auto cells = e.members();
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = 0; b < cells.size(); ++b) {
      if (a == b) continue;
      const std::int64_t di = cells[a].first - cells[b].first, dj = cells[a].second - cells[b].second;
      if (di < 0 || (di == 0 && dj < 0)) continue;  // the mirror pair covers it
      seen[static_cast<std::size_t>((dj + n - 1) * w + (di + n - 1))] = 1;
    }
  GridSet1D out = circle(e.m());
  const double h = e.delta();
  for (std::int64_t dj = -(n - 1); dj <= n - 1; ++dj)
    for (std::int64_t di = 0; di <= n - 1; ++di) {
      if (!seen[static_cast<std::size_t>((dj + n - 1) * w + (di + n - 1))]) continue;
      if (di <= 1 && std::abs(dj) <= 1) {
        // the difference box contains the origin
        out.bits().set_range(0, out.cells());
        return out;
      }
      // x - y ranges over the box [(di - 1) h, (di + 1) h] x [(dj - 1) h, (dj + 1) h]
      const double x0 = static_cast<double>(di - 1) * h, y0 = static_cast<double>(dj - 1) * h;
      cover_box_angles(out, {0, 0}, x0, x0 + 2 * h, y0, y0 + 2 * h);
    }
  // antipodal copy
  const std::int64_t half = out.cells() / 2;
  GridSet1D sym = out;
  for (auto k : out.members()) sym.insert((k + half) % out.cells());
  return sym;
}

ExponentReport exponent_fit(const std::vector<std::pair<double, double>>& counts) {
  if (counts.size() < 3) throw ParameterError("exponent_fit needs at least three scales");
  ExponentReport rep;
  std::vector<double> xs, ys;
  for (auto [r, n] : counts) {
    if (!(r > 0) || !(n > 0)) throw ParameterError("exponent_fit needs positive scales and counts");
    rep.scales.push_back(r);
    rep.counts.push_back(n);
    xs.push_back(-std::log2(r));
    ys.push_back(std::log2(n));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw ParameterError("exponent_fit needs distinct scales");
  rep.slope = sxy / sxx;
  rep.intercept = my - rep.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i)
    rep.max_residual = std::max(rep.max_residual, std::abs(ys[i] - (rep.intercept + rep.slope * xs[i])));
  return rep;
}

ExponentReport covering_exponent(const GridSet1D& s, const std::vector<int>& exps) {
  std::vector<std::pair<double, double>> data;
  for (int e : exps)
    data.emplace_back(std::exp2(-e), static_cast<double>(covering_number(s, from_grid_index(1, e))));
  return exponent_fit(data);
}

ExponentReport pinned_exponent(Vec2 y, const GridSet2D& e, const std::vector<int>& exps) {
  const double h = e.delta();
  for (auto [i, j] : e.members()) {
    const double x0 = e.cell_x(i), y0 = e.cell_x(j);
    const double dx = std::max({x0 - y.x, 0.0, y.x - x0 - h});
    const double dy = std::max({y0 - y.y, 0.0, y.y - y0 - h});
    if (std::hypot(dx, dy) < 0.25) throw DomainError("pinned_exponent: the pin is closer than 1/4 to E");
  }
  return covering_exponent(radial_project(y, e), exps);
}

// ---- measures -------------------------------------------------------------------------------

DiscreteMeasure2D DiscreteMeasure2D::uniform(const GridSet2D& support, double s, double c) {
  if (support.empty()) throw ParameterError("uniform measure on an empty support");
  DiscreteMeasure2D mu{support, std::vector<double>(support.bits().size(), 0.0), s, c};
  const double w = 1.0 / static_cast<double>(support.count());
  for (auto [i, j] : support.members()) mu.weights[support.index(i, j)] = w;
  return mu;
}

double DiscreteMeasure2D::total() const {
  double t = 0;
  for (double w : weights) t += w;
  return t;
}

void DiscreteMeasure2D::validate() const {
  if (weights.size() != support.bits().size()) throw ParameterError("measure: weight array does not match the frame");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const bool member = support.bits().test(k);
    if (!std::isfinite(weights[k]) || weights[k] < 0) throw ParameterError("measure: negative or non-finite weight");
    if (member != (weights[k] > 0)) throw ParameterError("measure: weights must be positive exactly on the support");
  }
  if (std::abs(total() - 1) > std::exp2(-40)) throw ParameterError("measure: weights do not sum to 1");
}

double ball_condition_check(const DiscreteMeasure2D& mu, double s) {
  if (!(s > 0 && s <= 2)) throw ParameterError("ball_condition_check: s must lie in (0, 2]");
  const GridSet2D& sup = mu.support;
  const std::int64_t n = sup.side();
  // row prefix sums
  std::vector<double> pre(static_cast<std::size_t>(n * (n + 1)), 0.0);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i)
      pre[j * (n + 1) + i + 1] = pre[j * (n + 1) + i] + mu.weights[sup.index(i, j)];
  auto row_sum = [&](std::int64_t j, std::int64_t i0, std::int64_t i1) {  // cells [i0, i1] of row j
    i0 = std::max<std::int64_t>(i0, 0);
    i1 = std::min<std::int64_t>(i1, n - 1);
    return i1 < i0 ? 0.0 : pre[j * (n + 1) + i1 + 1] - pre[j * (n + 1) + i0];
  };
  double best = 0;
  for (std::int64_t k = 1; k <= n; k *= 2) {
    // cell (di, dj) is in the ball iff (2|di|-1)_+^2 + (2|dj|-1)_+^2 < 4k^2
    std::vector<std::int64_t> half(static_cast<std::size_t>(k + 1), -1);
    for (std::int64_t dj = 0; dj <= k; ++dj) {
      const std::int64_t gy = std::max<std::int64_t>(2 * dj - 1, 0);
      std::int64_t di = -1;
      while (true) {
        const std::int64_t gx = std::max<std::int64_t>(2 * (di + 1) - 1, 0);
        if (gx * gx + gy * gy < 4 * k * k)
          ++di;
        else
          break;
      }
      half[dj] = di;
    }
    const double scale = std::pow(static_cast<double>(k) * sup.delta(), s);
    for (std::int64_t cj = 0; cj < n; ++cj)
      for (std::int64_t ci = 0; ci < n; ++ci) {
        double mass = 0;
        for (std::int64_t dj = -k; dj <= k; ++dj) {
          const std::int64_t j = cj + dj, hw = half[std::abs(dj)];
          if (j < 0 || j >= n || hw < 0) continue;
          mass += row_sum(j, ci - hw, ci + hw);
        }
        best = std::max(best, mass / scale);
      }
  }
  return best;
}

namespace {

bool cell_meets_strip(const Line& l, double r, double x0, double y0, double h) {
  double lo = 1e300, hi = -1e300;
  for (double x : {x0, x0 + h})
    for (double y : {y0, y0 + h}) {
      const double f = l.signed_distance({x, y});
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  return lo < r && hi > -r;
}

}  // namespace

double tube_mass(const DiscreteMeasure2D& mu, const Tube& t) {
  const double h = mu.support.delta();
  double mass = 0;
  for (auto [i, j] : mu.support.members())
    if (cell_meets_strip(t.line, t.radius, mu.support.cell_x(i), mu.support.cell_x(j), h)) mass += mu.weight(i, j);
  return mass;
}

void write_measure(std::ostream& out, const DiscreteMeasure2D& mu) {
  write_gridset(out, mu.support);
  out << std::setprecision(17);
  for (auto [i, j] : mu.support.members()) out << i << ' ' << j << ' ' << mu.weight(i, j) << '\n';
}

DiscreteMeasure2D read_measure(std::istream& in) {
  DiscreteMeasure2D mu;
  mu.support = read_gridset_2d(in);
  mu.weights.assign(mu.support.bits().size(), 0.0);
  std::vector<char> seen(mu.weights.size(), 0);
  std::string line;
  for (std::int64_t k = 0; k < mu.support.count(); ++k) {
    if (!std::getline(in, line)) throw ParseError("measure: missing weight lines");
    std::istringstream ls(line);
    std::int64_t i = 0, j = 0;
    double w = 0;
    std::string rest;
    if (!(ls >> i >> j >> w) || (ls >> rest)) throw ParseError("measure: malformed weight line '" + line + "'");
    if (!mu.support.contains(i, j)) throw ParseError("measure: weight for a cell outside the support");
    const auto idx = mu.support.index(i, j);
    if (seen[idx]) throw ParseError("measure: repeated cell");
    if (!(w > 0)) throw ParseError("measure: weights must be positive");
    seen[idx] = 1;
    mu.weights[idx] = w;
  }
  return mu;
}

}  // namespace tubekit
