#include "tubekit/arith.hpp"
#include "tubekit/constructions.hpp"
#include "tubekit/errors.hpp"
#include "tubekit/experiments.hpp"
#include "tubekit/refine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace tubekit {

namespace {

// Portable draws from a fixed engine (std distributions differ between libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(n)); }
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

std::string pass_detail(std::size_t bad, std::size_t total) {
  return std::to_string(total - bad) + "/" + std::to_string(total) + " ok";
}

void expect(ExperimentResult& r, const std::string& name, bool pass, const std::string& detail = "") {
  r.assertions.push_back({name, pass, detail});
}

int checked_m(const ExperimentConfig& cfg, long long v, int lo, int hi) {
  if (v < lo || v > hi)
    throw UsageError(cfg.name + ": resolution " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::vector<long long> sweep(const ExperimentConfig& cfg, const std::vector<long long>& fallback) {
  if (cfg.params.count("m")) return {cfg.get_int("m", 0)};
  auto ms = cfg.get_int_list("ms", fallback);
  std::sort(ms.begin(), ms.end());
  return ms;
}

// Dyadic branching set in [lo_cell, lo_cell + 2^L) at resolution m: a level-l node keeps both
// children when floor(sigma (l + 1)) > floor(sigma l), otherwise one random child.
GridSet1D branching_set(int m, std::int64_t lo_cell, int levels, double sigma, Rng& rng) {
  GridSet1D out(m, 0, std::int64_t{1} << m);
  std::vector<std::int64_t> nodes{0};
  for (int l = 0; l < levels; ++l) {
    const bool both = std::floor(sigma * (l + 1)) > std::floor(sigma * l);
    std::vector<std::int64_t> next;
    for (auto v : nodes) {
      if (both) {
        next.push_back(2 * v);
        next.push_back(2 * v + 1);
      } else {
        next.push_back(2 * v + rng.below(2));
      }
    }
    nodes = std::move(next);
  }
  for (auto v : nodes) out.insert(lo_cell + v);
  return out;
}

GridSet1D random_subset(int m, std::int64_t lo_cell, std::int64_t cells, double p, Rng& rng) {
  GridSet1D out(m, 0, std::int64_t{1} << m);
  for (std::int64_t k = 0; k < cells; ++k)
    if (rng.unit() < p) out.insert(lo_cell + k);
  if (out.empty()) out.insert(lo_cell + rng.below(cells));
  return out;
}

// ---- sumprod-growth -------------------------------------------------------------------------

GridSet1D growth_fixture(const ExperimentConfig& cfg, const std::string& kind, int m, Rng& rng) {
  if (kind == "ap16") {
    if (m < 6) throw UsageError("ap16 needs m >= 6");
    return ap_set(16, std::int64_t{1} << (m - 6), m, std::int64_t{1} << (m - 2));
  }
  if (kind == "gp6") {
    if (m < 7) throw UsageError("gp6 needs m >= 7");
    return gp_set(Rational(1, 2), 6, m);
  }
  if (kind == "cantor") {
    if (m % 2) throw UsageError("cantor fixture needs an even m");
    return cantor_set({2, 4, m / 2, {}});
  }
  if (kind == "random") {
    const auto n = cfg.get_int("n", 16);
    GridSet1D a(m, 0, std::int64_t{1} << m);
    const std::int64_t q = std::int64_t{1} << (m - 2);
    if (n < 1 || n > q) throw UsageError("random fixture: n must lie in [1, 2^(m-2)]");
    while (a.count() < n) a.insert(q + rng.below(q));
    return a;
  }
  throw UsageError("unknown fixture '" + kind + "' (ap16, gp6, cantor, random)");
}

ExperimentResult sumprod_growth(const ExperimentConfig& cfg) {
  ExperimentResult r;
  const std::string kind = cfg.get("fixture", "ap16");
  Rng rng(static_cast<std::uint64_t>(cfg.get_int("seed", 1)));
  r.table.header = {"m", "cells", "sumset", "productset", "sum_ratio", "prod_ratio", "max_ratio"};
  std::vector<std::pair<double, double>> growth;
  std::size_t bad_small = 0, bad_large = 0, bad_max = 0;
  // progressions need m >= 12 before distinct products land in distinct cells
  const bool prog = kind == "ap16" || kind == "gp6";
  for (long long mm : sweep(cfg, prog ? std::vector<long long>{12, 14, 16} : std::vector<long long>{8, 10, 12})) {
    const int m = checked_m(cfg, mm, 2, 20);
    const GridSet1D a = growth_fixture(cfg, kind, m, rng);
    const double n = static_cast<double>(a.count());
    const auto s = sumset(a, a).count(), p = productset(a, a).count();
    const double sr = static_cast<double>(s) / n, pr = static_cast<double>(p) / n;
    r.table.rows.push_back({fmt(static_cast<long long>(m)), fmt(static_cast<long long>(a.count())),
                            fmt(static_cast<long long>(s)), fmt(static_cast<long long>(p)), fmt(sr), fmt(pr),
                            fmt(std::max(sr, pr))});
    growth.emplace_back(std::exp2(-m), std::max(sr, pr));
    if (kind == "ap16") {
      bad_small += !(s <= 4 * a.count());
      bad_large += !(p >= 8 * a.count());
    } else if (kind == "gp6") {
      bad_small += !(p <= 4 * a.count());
      bad_large += !(s >= 8 * a.count());
    } else if (kind == "cantor") {
      bad_max += !(std::max(s, p) >= 8 * a.count());
    }
  }
  const std::size_t rows = r.table.rows.size();
  if (kind == "ap16") {
    expect(r, "|A+A| <= 4|A|", bad_small == 0, pass_detail(bad_small, rows));
    expect(r, "|AA| >= 8|A|", bad_large == 0, pass_detail(bad_large, rows));
  } else if (kind == "gp6") {
    expect(r, "|AA| <= 4|A|", bad_small == 0, pass_detail(bad_small, rows));
    expect(r, "|A+A| >= 8|A|", bad_large == 0, pass_detail(bad_large, rows));
  } else if (kind == "cantor") {
    expect(r, "max(|A+A|, |AA|) >= 8|A|", bad_max == 0, pass_detail(bad_max, rows));
  }
  r.summary.push_back("fixture: " + kind);
  if (growth.size() >= 3) {
    const ExponentReport fit = exponent_fit(growth);
    r.summary.push_back("growth exponent (max ratio vs 1/delta): " + fmt(fit.slope));
    r.summary.push_back("fit max residual: " + fmt(fit.max_residual));
  }
  r.plot = PlotSpec{"m", {"sum_ratio", "prod_ratio"}, false};
  return r;
}

// ---- pencil-intersect -----------------------------------------------------------------------

ExperimentResult pencil_intersect(const ExperimentConfig& cfg) {
  ExperimentResult r;
  const double sigma = cfg.get_double("sigma", 0.5);
  const double C = cfg.get_double("C", 4);
  if (!(sigma > 0 && sigma <= 1)) throw UsageError("sigma must lie in (0, 1]");
  Rng rng(static_cast<std::uint64_t>(cfg.get_int("seed", 1)));
  r.table.header = {"m", "a_cells", "dirs_p3", "dirs_p4", "common_cells", "measure", "delta_pow", "ratio"};
  std::vector<std::pair<double, double>> data;
  std::size_t bad_nc = 0, bad_cont = 0;
  for (long long mm : sweep(cfg, {6, 7, 8, 9})) {
    const int m = checked_m(cfg, mm, 4, 12);
    const GridSet1D a = branching_set(m, std::int64_t{1} << (m - 2), m - 2, sigma, rng);
    bad_nc += !nonconcentration_check(a, {sigma, C}).pass;
    const auto p = product_pencils(a);
    std::vector<GridSet2D> rasters;
    for (const auto& pencil : p) rasters.push_back(rasterize_pencil(pencil, Rational(0), Rational(1), m));
    const Rational meas = intersection_measure(rasters);
    const double measure = to_double(meas);
    const double dp = std::pow(std::exp2(-m), 2 - 2 * sigma);
    bad_cont += !product_containment(a, p).holds();
    const auto common = static_cast<long long>(std::llround(measure * std::exp2(2 * m)));
    r.table.rows.push_back({fmt(static_cast<long long>(m)), fmt(static_cast<long long>(a.count())),
                            fmt(static_cast<long long>(p[2].directions.count())),
                            fmt(static_cast<long long>(p[3].directions.count())), fmt(common), fmt(measure), fmt(dp),
                            fmt(measure / dp)});
    data.emplace_back(std::exp2(-m), measure);
  }
  const std::size_t rows = r.table.rows.size();
  expect(r, "direction sets are (delta, sigma)-sets with constant C", bad_nc == 0, pass_detail(bad_nc, rows));
  expect(r, "A x A inside the four pencils (one-cell slack)", bad_cont == 0, pass_detail(bad_cont, rows));
  r.summary.push_back("sigma: " + fmt(sigma));
  if (data.size() >= 3) {
    const ExponentReport fit = exponent_fit(data);
    r.summary.push_back("measure ~ delta^" + fmt(-fit.slope) + " (reference exponent 2 - 2 sigma = " +
                        fmt(2 - 2 * sigma) + ")");
  }
  r.plot = PlotSpec{"m", {"measure", "delta_pow"}, true};
  return r;
}

// ---- trivial-bound --------------------------------------------------------------------------

ExperimentResult trivial_bound(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.table.header = {"m", "n", "common_cells", "measure", "lower", "upper"};
  std::size_t bad = 0;
  for (long long mm : sweep(cfg, {8, 10, 12})) {
    const int m = checked_m(cfg, mm, 2, 13);
    const long long n = cfg.get_int("n", std::max(1LL, 1LL << std::max(0, m / 2 - 2)));
    const LatticeConfig c = collinear_tip_config(n, m);
    std::vector<GridSet2D> rasters;
    for (const auto& p : c.pencils) rasters.push_back(rasterize_pencil(p, Rational(0), Rational(1), m));
    const Rational meas = intersection_measure(rasters);
    const Rational d2 = from_grid_index(1, 2 * m);
    const Rational lower = Rational(n * n) * d2 / 4, upper = Rational(64 * n * n) * d2;
    const bool ok = meas >= lower && meas <= upper;
    bad += !ok;
    r.table.rows.push_back({fmt(static_cast<long long>(m)), fmt(n),
                            fmt(static_cast<long long>(numerator(Rational(meas / d2)))), fmt(to_double(meas)),
                            fmt(to_double(lower)), fmt(to_double(upper))});
  }
  expect(r, "n^2 delta^2 / 4 <= measure <= 64 n^2 delta^2", bad == 0, pass_detail(bad, r.table.rows.size()));
  r.plot = PlotSpec{"m", {"measure", "lower", "upper"}, true};
  return r;
}

// ---- equiv-constructions --------------------------------------------------------------------

ExperimentResult equiv_constructions(const ExperimentConfig& cfg) {
  ExperimentResult r;
  Rng rng(static_cast<std::uint64_t>(cfg.get_int("seed", 1)));
  const long long trials = cfg.get_int("trials", 50), az_trials = cfg.get_int("az_trials", 200);
  const long long slack = cfg.get_int("slack", 1);
  if (trials < 0 || az_trials < 0 || slack < 0) throw UsageError("trial counts and slack must be nonnegative");
  r.table.header = {"check", "m", "trial", "cells", "ok"};
  std::size_t bad4 = 0, n4 = 0;
  for (long long mm : cfg.get_int_list("ms", {8, 10})) {
    const int m = checked_m(cfg, mm, 4, 12);
    const std::int64_t q = std::int64_t{1} << (m - 2);
    for (long long t = -1; t < trials; ++t) {
      GridSet1D a;
      if (t < 0) {
        const int d = (m - 2) / 2;
        a = cantor_set({2, 4, d, {}}, m, Rational(1, 4), Rational(1, 2));
      } else {
        a = random_subset(m, q, q, 0.05 + 0.5 * rng.unit(), rng);
        a = reframe(a, Rational(1, 4), Rational(1, 2));
      }
      const bool ok = product_containment(a, product_pencils(a), 1).holds();
      bad4 += !ok;
      ++n4;
      r.table.rows.push_back({t < 0 ? "pencils-cantor" : "pencils-random", fmt(static_cast<long long>(m)), fmt(t),
                              fmt(static_cast<long long>(a.count())), ok ? "1" : "0"});
    }
  }
  std::size_t bad_az = 0, bad_peak = 0;
  for (long long t = 0; t < az_trials; ++t) {
    const int m = 5 + static_cast<int>(t % 4);
    const std::int64_t n = std::int64_t{1} << m;
    GridSet1D a = random_subset(m, n / 4, n / 4, 0.1 + 0.4 * static_cast<double>(t % 5) / 4.0, rng);
    a = reframe(a, Rational(1, 4), Rational(1, 2));
    const Rational z = from_grid_index(n / 2 + rng.below(n / 2), m);
    const GridSet1D az = az_construct(a, z);
    const AzContainment c = az_check(a, z, az, slack);
    const bool ok_az = c.product_contained && c.complement_contained;
    const ConvolutionPeak peak = convolution_peak(a);
    const auto s = sumset(a, a).count();
    const bool ok_peak = peak.count * s >= a.count() * a.count();
    bad_az += !ok_az;
    bad_peak += !ok_peak;
    r.table.rows.push_back({"az", fmt(static_cast<long long>(m)), fmt(t), fmt(static_cast<long long>(a.count())),
                            ok_az ? "1" : "0"});
    r.table.rows.push_back({"peak", fmt(static_cast<long long>(m)), fmt(t), fmt(static_cast<long long>(a.count())),
                            ok_peak ? "1" : "0"});
  }
  expect(r, "A x A inside inflate(raster(P_i), 1)", bad4 == 0, pass_detail(bad4, n4));
  expect(r, "A_z product containments (slack " + std::to_string(slack) + ")", bad_az == 0,
         pass_detail(bad_az, static_cast<std::size_t>(az_trials)));
  expect(r, "convolution peak >= |A|^2 / |A+A|", bad_peak == 0,
         pass_detail(bad_peak, static_cast<std::size_t>(az_trials)));
  return r;
}

// ---- kt-refine ------------------------------------------------------------------------------

ExperimentResult kt_refine_run(const ExperimentConfig& cfg) {
  ExperimentResult r;
  const int m = checked_m(cfg, cfg.get_int("m", 10), 4, 16);
  RefineParams p{cfg.get_double("sigma", 0.5), cfg.get_double("K", 2), cfg.get_double("eps", 0.05)};
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const long long fixtures = cfg.get_int("fixtures", 200);
  Rng rng(static_cast<std::uint64_t>(cfg.get_int("seed", 1)));
  const std::int64_t n = std::int64_t{1} << m;
  const auto cap = static_cast<std::int64_t>(std::floor(4 * std::exp2(m * p.sigma)));
  const double nc_const = 2 * std::exp2(m * p.K * p.eps);
  r.table.header = {"fixture", "kind", "cells", "a_star_cells", "heavy_cells", "cover", "nonconcentration"};
  auto interval = [&]() {
    GridSet1D a(m, 0, n);
    const std::int64_t len = 1 + rng.below(cap);
    const std::int64_t start = rng.below(n - len + 1);
    a.bits().set_range(start, start + len);
    return a;
  };
  auto cantor = [&]() {
    // digit set of ell^d leaves of width w placed at a random offset
    const int ell = rng.below(2) ? 4 : 2;
    const int b = 1 + static_cast<int>(rng.below(ell));
    int d = 1;
    while (std::pow(b, d + 1) <= static_cast<double>(cap) && std::pow(ell, d + 1) <= static_cast<double>(n)) ++d;
    const std::int64_t span = static_cast<std::int64_t>(std::pow(ell, d));
    const std::int64_t w = std::max<std::int64_t>(1, (n / span) >> rng.below(3));
    const GridSet1D base = cantor_set({b, ell, d, {}});
    GridSet1D a(m, 0, n);
    const std::int64_t start = rng.below(n - span * w + 1);
    for (auto k : base.members()) {
      if (a.count() + w > cap) break;
      a.bits().set_range(start + k * w, start + (k + 1) * w);
    }
    return a;
  };
  auto random = [&]() {
    GridSet1D a(m, 0, n);
    const std::int64_t want = 1 + rng.below(cap);
    const std::int64_t window = std::min<std::int64_t>(n, want * (1 + rng.below(8)));
    const std::int64_t start = rng.below(n - window + 1);
    while (a.count() < want) a.insert(start + rng.below(window));
    return a;
  };
  std::size_t bad_cover = 0, bad_nc = 0;
  for (long long f = 0; f < fixtures; ++f) {
    std::string kind;
    GridSet1D a;
    switch (f % 4) {
      case 0: kind = "interval"; a = interval(); break;
      case 1: kind = "cantor"; a = cantor(); break;
      case 2: kind = "random"; a = random(); break;
      default: {
        kind = "union";
        a = set_union(interval(), cantor());
        const GridSet1D extra = random();
        for (auto k : extra.members()) {
          if (a.count() >= cap) break;
          a.insert(k);
        }
        while (a.count() > cap) a.erase(a.members().back());
      }
    }
    const KtDecomposition d = kt_refine(a, p);
    GridSet1D cover = d.a_star, heavy(m, 0, n);
    for (const auto& [scale, part] : d.heavy_parts) heavy = set_union(heavy, part);
    cover = set_union(cover, heavy);
    const bool ok_cover = is_subset(a, cover) && is_subset(d.a_star, a);
    const bool ok_nc = nonconcentration_check(d.a_star, {p.sigma, nc_const}).pass;
    bad_cover += !ok_cover;
    bad_nc += !ok_nc;
    r.table.rows.push_back({fmt(f), kind, fmt(static_cast<long long>(a.count())),
                            fmt(static_cast<long long>(d.a_star.count())),
                            fmt(static_cast<long long>(set_intersect(a, heavy).count())), ok_cover ? "1" : "0",
                            ok_nc ? "1" : "0"});
  }
  const auto total = static_cast<std::size_t>(fixtures);
  expect(r, "A inside A* union heavy parts", bad_cover == 0, pass_detail(bad_cover, total));
  expect(r, "A* is (sigma, 2 delta^-K eps) non-concentrated", bad_nc == 0, pass_detail(bad_nc, total));
  r.summary.push_back("nonconcentration constant: " + fmt(nc_const));
  return r;
}

// ---- tube-condition -------------------------------------------------------------------------

ExperimentResult tube_condition_run(const ExperimentConfig& cfg) {
  ExperimentResult r;
  const int m = checked_m(cfg, cfg.get_int("m", 8), 5, 10);
  TubeConditionParams p;
  p.eta = cfg.get_double("eta", 0.1);
  p.rho = cfg.get_double("rho", 0.5);
  p.eps = cfg.get_double("eps", 1.0);
  p.k0 = static_cast<int>(cfg.get_int("k0", 2));
  p.kmax = static_cast<int>(cfg.get_int("kmax", 3));
  p.m0 = cfg.get_double("m0", 1.0);
  const double s = cfg.get_double("s", 1.0);
  // C x C in [0, 1/2)^2, middle-half Cantor with leaves of whole cells
  int d = 1;
  while (2 * (d + 1) <= m - 1) ++d;
  const GridSet1D c = cantor_set({2, 4, d, {}}, m, Rational(0), Rational(1, 2));
  const GridSet2D cc = product_square(c);
  const std::int64_t shift = 3 * (std::int64_t{1} << (m - 1));  // 3/2 in cells
  GridSet2D far(m, cc.origin() + shift, cc.side());
  for (auto [i, j] : cc.members()) far.insert(i, j);
  const auto mu = DiscreteMeasure2D::uniform(cc, s, 1), nu = DiscreteMeasure2D::uniform(far, s, 1);
  TubeConditionResult res;
  try {
    res = tube_condition_refine(mu, nu, p);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  r.table.header = {"exponent", "family", "bad_mu", "bad_nu", "mbad_mu", "mbad_nu", "mbad_bound",
                    "badbad_f",  "badbad_e", "removed", "removed_outside_mbad"};
  std::size_t bad_bound = 0;
  for (const auto& sc : res.scales) {
    bad_bound += static_cast<double>(std::max(sc.mbad_mu, sc.mbad_nu)) > sc.mbad_bound;
    r.table.rows.push_back({fmt(static_cast<long long>(sc.exponent)), fmt(static_cast<long long>(sc.family_size)),
                            fmt(static_cast<long long>(sc.bad_mu)), fmt(static_cast<long long>(sc.bad_nu)),
                            fmt(static_cast<long long>(sc.mbad_mu)), fmt(static_cast<long long>(sc.mbad_nu)),
                            fmt(sc.mbad_bound), fmt(static_cast<long long>(sc.badbad_f)),
                            fmt(static_cast<long long>(sc.badbad_e)), fmt(static_cast<long long>(sc.removed_pairs)),
                            fmt(static_cast<long long>(sc.removed_outside_mbad))});
  }
  expect(r, "certificate has zero violations", res.certificate.violations == 0,
         std::to_string(res.certificate.violations) + " violations over " +
             std::to_string(res.certificate.pairs_checked) + " pairs");
  expect(r, "#(M-Bad) <= 2 delta_k^-eta", bad_bound == 0, pass_detail(bad_bound, res.scales.size()));
  if (cfg.params.count("expect_retained")) {
    const double want = cfg.get_double("expect_retained", 0);
    expect(r, "retained mass matches " + fmt(want), std::abs(res.mask.retained_mass - want) <= 1e-9,
           "retained " + fmt(res.mask.retained_mass));
  }
  r.summary.push_back("retained mass: " + fmt(res.mask.retained_mass));
  r.summary.push_back("max tube ratio over retained pairs: " + fmt(res.certificate.max_ratio));
  r.summary.push_back("support cells: " + std::to_string(cc.count()) + " x " + std::to_string(far.count()));
  return r;
}

// ---- direction-exponent ---------------------------------------------------------------------

ExperimentResult direction_exponent(const ExperimentConfig& cfg) {
  ExperimentResult r;
  const int m = checked_m(cfg, cfg.get_int("m", 10), 4, 12);
  if (m % 2) throw UsageError("direction-exponent needs an even m");
  const auto lo = cfg.get_int("r_min_exp", 2), hi = cfg.get_int("r_max_exp", 8);
  if (lo < 0 || hi > m || hi - lo < 2) throw UsageError("scale range must hold three exponents within [0, m]");
  const Vec2 pin{cfg.get_double("pin_x", 2), cfg.get_double("pin_y", 2)};
  const GridSet2D e = product_square(cantor_set({2, 4, m / 2, {}}));
  const GridSet1D dirs = direction_set(e);
  const GridSet1D pinned = radial_project(pin, e);
  std::vector<int> exps;
  for (auto k = lo; k <= hi; ++k) exps.push_back(static_cast<int>(k));
  const ExponentReport df = covering_exponent(dirs, exps);
  const ExponentReport pf = pinned_exponent(pin, e, exps);
  r.table.header = {"exp", "r", "n_directions", "n_pinned"};
  for (std::size_t i = 0; i < exps.size(); ++i)
    r.table.rows.push_back({fmt(static_cast<long long>(exps[i])), fmt(df.scales[i]), fmt(df.counts[i]),
                            fmt(pf.counts[i])});
  const double min_slope = cfg.get_double("min_slope", 0.5), max_res = cfg.get_double("max_residual", 0.15);
  const double min_pinned = cfg.get_double("min_pinned", 0.4);
  expect(r, "direction slope >= " + fmt(min_slope), df.slope >= min_slope, "slope " + fmt(df.slope));
  expect(r, "direction residual <= " + fmt(max_res), df.max_residual <= max_res, "residual " + fmt(df.max_residual));
  expect(r, "pinned slope >= " + fmt(min_pinned), pf.slope >= min_pinned, "slope " + fmt(pf.slope));
  r.summary.push_back("direction slope: " + fmt(df.slope));
  r.summary.push_back("direction residual: " + fmt(df.max_residual));
  r.summary.push_back("pinned slope: " + fmt(pf.slope));
  r.summary.push_back("pinned residual: " + fmt(pf.max_residual));
  r.plot = PlotSpec{"exp", {"n_directions", "n_pinned"}, true};
  return r;
}

using Runner = std::function<ExperimentResult(const ExperimentConfig&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"sumprod-growth", sumprod_growth},   {"pencil-intersect", pencil_intersect},
      {"trivial-bound", trivial_bound},     {"equiv-constructions", equiv_constructions},
      {"kt-refine", kt_refine_run},         {"tube-condition", tube_condition_run},
      {"direction-exponent", direction_exponent}};
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, run] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  for (const auto& [name, run] : registry())
    if (name == cfg.name) {
      ExperimentResult r = run(cfg);
      r.name = name;
      return r;
    }
  throw UsageError("unknown experiment '" + cfg.name + "'");
}

}  // namespace tubekit
