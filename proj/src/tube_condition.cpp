#include "tubekit/errors.hpp"
#include "tubekit/radial.hpp"
#include "tubekit/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tubekit {

int TubeConditionParams::gamma() const {
  return static_cast<int>(std::lround(std::log(2 / rho) / std::log(1 + eps)));
}

void TubeConditionParams::validate(double s_mu, double s_nu) const {
  if (!(eta > 0)) throw ParameterError("tube condition: eta must be positive");
  if (!(rho > 0 && rho < 1)) throw ParameterError("tube condition: rho must lie in (0, 1)");
  if (!(eps > 0 && eps <= 1)) throw ParameterError("tube condition: eps must lie in (0, 1]");
  if (k0 < 0 || kmax < k0) throw ParameterError("tube condition: need 0 <= k0 <= kmax");
  if (!(m0 > 0)) throw ParameterError("tube condition: m0 must be positive");
  if (!(s_mu * (1 - rho) > 2 * eta))
    throw ParameterError("tube condition: s_mu (1 - rho) > 2 eta fails");
  if (!(s_nu * rho / 2 > 2 * eta)) throw ParameterError("tube condition: s_nu rho / 2 > 2 eta fails");
  if (gamma() < 1) throw ParameterError("tube condition: Gamma must be at least 1");
}

std::vector<int> tube_ladder(const TubeConditionParams& p, int m) {
  std::vector<int> out;
  for (int e : hyperdyadic_exponents(p.eps, p.k0, p.kmax))
    if (e >= 1 && e <= m) out.push_back(e);
  if (out.empty()) throw ParameterError("tube condition: no ladder scale lies in [delta, 1/2]");
  return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Cell {
  double x0, y0;
  double w;
};

std::vector<Cell> cells_of(const DiscreteMeasure2D& mu) {
  std::vector<Cell> out;
  for (auto [i, j] : mu.support.members()) out.push_back({mu.support.cell_x(i), mu.support.cell_x(j), mu.weight(i, j)});
  return out;
}

double line_angle(Vec2 a, Vec2 b) {
  double t = std::atan2(b.y - a.y, b.x - a.x);
  if (t < 0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

double angle_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, kPi - d);
}

// Tubes of radius 3 delta / 2 around lines n(theta_a).(p - c) = s_b with theta_a = (a + 1/2) pi / na
// and s_b = (b - K) delta / 2. The angle step keeps every line through the support region within
// delta / 2 of a family line there (delta / 4 from the angle, delta / 4 from the offset), so each
// delta-tube is inside some family tube.
class TubeFamily {
 public:
  TubeFamily(Vec2 c, double reach, double delta) : c_(c), delta_(delta / 2), radius_(1.5 * delta) {
    na_ = static_cast<std::int64_t>(std::ceil(2 * kPi * reach / delta));
    k_ = static_cast<std::int64_t>(std::ceil(reach / delta_));
    nb_ = 2 * k_ + 1;
  }

  std::int64_t angles() const { return na_; }
  std::int64_t offsets() const { return nb_; }
  std::size_t size() const { return static_cast<std::size_t>(na_ * nb_); }
  double theta(std::int64_t a) const { return (static_cast<double>(a) + 0.5) * kPi / static_cast<double>(na_); }
  double half_step() const { return kPi / (2 * static_cast<double>(na_)); }

  /// Offset indices [lo, hi] of the family tubes at angle a meeting the closed cell.
  std::pair<std::int64_t, std::int64_t> range(std::int64_t a, double x0, double y0, double h) const {
    const double t = theta(a);
    const double nx = -std::sin(t), ny = std::cos(t);
    double lo = 1e300, hi = -1e300;
    for (double x : {x0, x0 + h})
      for (double y : {y0, y0 + h}) {
        const double f = nx * (x - c_.x) + ny * (y - c_.y);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    // s_b in (lo - R, hi + R)
    const auto b0 = static_cast<std::int64_t>(std::floor((lo - radius_) / delta_)) + k_ + 1;
    const auto b1 = static_cast<std::int64_t>(std::ceil((hi + radius_) / delta_)) + k_ - 1;
    return {std::max<std::int64_t>(b0, 0), std::min<std::int64_t>(b1, nb_ - 1)};
  }

  /// Masses of every family tube, index a * offsets() + b.
  std::vector<double> masses(const std::vector<Cell>& cells, double h) const {
    std::vector<double> out(size(), 0.0);
    std::vector<double> diff(static_cast<std::size_t>(nb_) + 1);
    for (std::int64_t a = 0; a < na_; ++a) {
      std::fill(diff.begin(), diff.end(), 0.0);
      for (const Cell& cell : cells) {
        auto [b0, b1] = range(a, cell.x0, cell.y0, h);
        if (b0 > b1) continue;
        diff[b0] += cell.w;
        diff[b1 + 1] -= cell.w;
      }
      double run = 0;
      for (std::int64_t b = 0; b < nb_; ++b) {
        run += diff[b];
        out[a * nb_ + b] = run;
      }
    }
    return out;
  }

  bool meets(std::int64_t a, std::int64_t b, const Cell& cell, double h) const {
    auto [b0, b1] = range(a, cell.x0, cell.y0, h);
    return b >= b0 && b <= b1;
  }

 private:
  Vec2 c_;
  double delta_;
  double radius_;
  std::int64_t na_ = 0, k_ = 0, nb_ = 0;
};

struct SideResult {
  std::size_t bad = 0, mbad = 0, badbad = 0;
};

// Bad tubes for `heavy` (the measure whose tube mass is bounded), their greedy maximal family,
// and removal of pairs through points of `pins` (the other support). remove(pin, other) marks
// the pair; angle(pin, other) is the direction of the line through both cell centres.
template <class Remove, class Angle>
SideResult refine_side(const TubeFamily& fam, const std::vector<Cell>& heavy, const std::vector<Cell>& pins,
                       std::size_t n_other, double h, double delta, const TubeConditionParams& p, Remove remove,
                       Angle angle, std::size_t& outside_mbad) {
  SideResult out;
  const double thresh = std::pow(delta, p.eta);
  const double inter_thresh = std::pow(delta, 2 * p.eta) / 2;
  const double sep = std::pow(delta, p.rho / 2);
  const double near = std::max(sep, 2 * fam.half_step());
  const std::vector<double> mass = fam.masses(heavy, h);

  struct Bad {
    double mass;
    std::int64_t a, b;
  };
  std::vector<Bad> bad;
  for (std::int64_t a = 0; a < fam.angles(); ++a)
    for (std::int64_t b = 0; b < fam.offsets(); ++b)
      if (mass[a * fam.offsets() + b] > thresh) bad.push_back({mass[a * fam.offsets() + b], a, b});
  std::sort(bad.begin(), bad.end(), [](const Bad& x, const Bad& y) {
    if (x.mass != y.mass) return x.mass > y.mass;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  out.bad = bad.size();

  auto common = [&](const Bad& x, const Bad& y) {
    double w = 0;
    for (const Cell& cell : heavy)
      if (fam.meets(x.a, x.b, cell, h) && fam.meets(y.a, y.b, cell, h)) w += cell.w;
    return w;
  };
  std::vector<std::size_t> mbad;
  for (std::size_t t = 0; t < bad.size(); ++t) {
    bool ok = true;
    for (auto u : mbad)
      if (!(common(bad[t], bad[u]) < inter_thresh)) {
        ok = false;
        break;
      }
    if (ok) mbad.push_back(t);
  }
  out.mbad = mbad.size();
  if (static_cast<double>(mbad.size()) > 2 * std::pow(delta, -p.eta))
    throw std::logic_error("tube condition: M-Bad family exceeds 2 delta^-eta");
  if (bad.empty()) return out;

  // M-Bad members tied to each bad tube: itself, or any member sharing mass >= delta^(2 eta) / 2
  std::vector<std::vector<std::size_t>> witness(bad.size());
  std::vector<std::int64_t> slot(fam.size(), -1);
  for (std::size_t t = 0; t < bad.size(); ++t) {
    slot[static_cast<std::size_t>(bad[t].a * fam.offsets() + bad[t].b)] = static_cast<std::int64_t>(t);
    for (std::size_t k = 0; k < mbad.size(); ++k)
      if (mbad[k] == t || common(bad[t], bad[mbad[k]]) >= inter_thresh) witness[t].push_back(k);
  }

  for (std::size_t q = 0; q < pins.size(); ++q) {
    std::vector<std::size_t> through;  // bad tubes meeting the pin cell
    for (std::int64_t a = 0; a < fam.angles(); ++a) {
      auto [b0, b1] = fam.range(a, pins[q].x0, pins[q].y0, h);
      for (std::int64_t b = b0; b <= b1; ++b) {
        const auto s = slot[static_cast<std::size_t>(a * fam.offsets() + b)];
        if (s >= 0) through.push_back(static_cast<std::size_t>(s));
      }
    }
    if (through.empty()) continue;
    std::vector<std::size_t> assoc;
    for (auto t : through) assoc.insert(assoc.end(), witness[t].begin(), witness[t].end());
    std::sort(assoc.begin(), assoc.end());
    assoc.erase(std::unique(assoc.begin(), assoc.end()), assoc.end());

    bool badbad = false;
    for (std::size_t u = 0; u < assoc.size() && !badbad; ++u)
      for (std::size_t v = u + 1; v < assoc.size() && !badbad; ++v)
        badbad = angle_gap(fam.theta(bad[mbad[assoc[u]]].a), fam.theta(bad[mbad[assoc[v]]].a)) >= sep;
    if (badbad) {
      ++out.badbad;
      for (std::size_t o = 0; o < n_other; ++o) remove(q, o);
      continue;
    }
    for (std::size_t o = 0; o < n_other; ++o) {
      const double t = angle(q, o);
      bool in_mbad = false;
      for (auto k : assoc) in_mbad = in_mbad || angle_gap(t, fam.theta(bad[mbad[k]].a)) < sep;
      bool in_bad = in_mbad;
      for (std::size_t u = 0; u < through.size() && !in_bad; ++u)
        in_bad = angle_gap(t, fam.theta(bad[through[u]].a)) < near;
      if (in_bad && remove(q, o) && !in_mbad) ++outside_mbad;
    }
  }
  return out;
}

double min_support_distance(const std::vector<Cell>& e, const std::vector<Cell>& f, double h) {
  double best = 1e300;
  for (const Cell& x : e)
    for (const Cell& y : f) {
      const double dx = std::max({x.x0 - (y.x0 + h), 0.0, y.x0 - (x.x0 + h)});
      const double dy = std::max({x.y0 - (y.y0 + h), 0.0, y.y0 - (x.y0 + h)});
      best = std::min(best, std::hypot(dx, dy));
    }
  return best;
}

Vec2 centre(const Cell& c, double h) { return {c.x0 + h / 2, c.y0 + h / 2}; }

}  // namespace

TubeConditionResult tube_condition_refine(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu,
                                          const TubeConditionParams& p) {
  p.validate(mu.s, nu.s);
  mu.validate();
  nu.validate();
  if (mu.support.m() != nu.support.m()) throw ResolutionMismatch("tube condition: measures at different resolutions");
  const int m = mu.support.m();
  const double h = mu.support.delta();
  const std::vector<Cell> e = cells_of(mu), f = cells_of(nu);
  if (min_support_distance(e, f, h) < 0.25) throw DomainError("tube condition: supports closer than 1/4");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto* side : {&e, &f})
    for (const Cell& c : *side) {
      xmin = std::min(xmin, c.x0);
      xmax = std::max(xmax, c.x0 + h);
      ymin = std::min(ymin, c.y0);
      ymax = std::max(ymax, c.y0 + h);
    }
  const Vec2 c{(xmin + xmax) / 2, (ymin + ymax) / 2};
  const double reach = std::hypot(xmax - xmin, ymax - ymin) / 2;

  // no tube at the coarse scale carries more than m0 of either measure
  const int e_h = std::max(0, static_cast<int>(std::lround(std::pow(1 + p.eps, p.k0 - p.gamma()))));
  {
    const TubeFamily coarse(c, reach, std::exp2(-e_h));
    for (const auto* side : {&e, &f}) {
      const auto ms = coarse.masses(*side, h);
      if (*std::max_element(ms.begin(), ms.end()) > p.m0)
        throw HypothesisViolation("tube condition: a tube of radius 2^-" + std::to_string(e_h) + " carries more than m0");
    }
  }

  TubeConditionResult res;
  GoodPairMask& mask = res.mask;
  mask.m = m;
  mask.e = mu.support;
  mask.f = nu.support;
  mask.keep.assign(e.size() * f.size(), true);

  std::vector<Vec2> ce, cf;
  for (const Cell& x : e) ce.push_back(centre(x, h));
  for (const Cell& y : f) cf.push_back(centre(y, h));

  for (int ex : tube_ladder(p, m)) {
    const double delta = std::exp2(-ex);
    const TubeFamily fam(c, reach, delta);
    ScaleReport rep;
    rep.exponent = ex;
    rep.family_size = fam.size();
    rep.mbad_bound = 2 * std::pow(delta, -p.eta);
    std::size_t removed = 0;
    auto drop = [&](std::size_t xi, std::size_t yi) {
      auto ref = mask.keep[xi * f.size() + yi];
      if (!ref) return false;
      ref = false;
      ++removed;
      return true;
    };
    // mu-heavy tubes through points of F, then nu-heavy tubes through points of E
    const SideResult sm = refine_side(
        fam, e, f, e.size(), h, delta, p, [&](std::size_t yi, std::size_t xi) { return drop(xi, yi); },
        [&](std::size_t yi, std::size_t xi) { return line_angle(ce[xi], cf[yi]); }, rep.removed_outside_mbad);
    const SideResult sn = refine_side(
        fam, f, e, f.size(), h, delta, p, [&](std::size_t xi, std::size_t yi) { return drop(xi, yi); },
        [&](std::size_t xi, std::size_t yi) { return line_angle(ce[xi], cf[yi]); }, rep.removed_outside_mbad);
    rep.bad_mu = sm.bad;
    rep.mbad_mu = sm.mbad;
    rep.badbad_f = sm.badbad;
    rep.bad_nu = sn.bad;
    rep.mbad_nu = sn.mbad;
    rep.badbad_e = sn.badbad;
    rep.removed_pairs = removed;
    res.scales.push_back(rep);
  }

  for (std::size_t xi = 0; xi < e.size(); ++xi)
    for (std::size_t yi = 0; yi < f.size(); ++yi)
      if (mask.keep[xi * f.size() + yi]) mask.retained_mass += e[xi].w * f[yi].w;
  res.certificate = verify_tube_condition(mu, nu, p, mask);
  return res;
}

TubeCertificate verify_tube_condition(const DiscreteMeasure2D& mu, const DiscreteMeasure2D& nu,
                                      const TubeConditionParams& p, const GoodPairMask& mask) {
  const double h = mu.support.delta();
  const std::vector<Cell> e = cells_of(mu), f = cells_of(nu);
  if (mask.keep.size() != e.size() * f.size()) throw ParameterError("tube condition: mask does not match the measures");
  TubeCertificate cert;
  const std::vector<int> ladder = tube_ladder(p, mu.support.m());
  for (std::size_t xi = 0; xi < e.size(); ++xi)
    for (std::size_t yi = 0; yi < f.size(); ++yi) {
      if (!mask.keep[xi * f.size() + yi]) continue;
      ++cert.pairs_checked;
      const Vec2 a = centre(e[xi], h), b = centre(f[yi], h);
      const Line l = Line::through_angle(a, std::atan2(b.y - a.y, b.x - a.x));
      for (int ex : ladder) {
        const double delta = std::exp2(-ex);
        const double bound = std::pow(delta, p.eta);
        const Tube t{l, delta};
        const double worst = std::max(tube_mass(mu, t), tube_mass(nu, t));
        cert.max_ratio = std::max(cert.max_ratio, worst / bound);
        if (worst > bound) ++cert.violations;
      }
    }
  return cert;
}

}  // namespace tubekit
