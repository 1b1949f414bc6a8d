#include "tubekit/refine.hpp"

#include "tubekit/errors.hpp"
#include "tubekit/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <string>

namespace tubekit {

std::vector<int> hyperdyadic_exponents(double eps, int k0, int kmax) {
  if (!(eps > 0 && eps <= 1)) throw ParameterError("eps must lie in (0, 1]");
  if (k0 < 0) throw ParameterError("k0 must be nonnegative");
  if (k0 > kmax) throw ParameterError("empty hyperdyadic range: k0 > kmax");
  std::vector<int> out;
  for (int k = k0; k <= kmax; ++k) {
    const double e = std::round(std::pow(1.0 + eps, k));
    if (e > 62) throw ParameterError("hyperdyadic exponent exceeds 62");
    const int ei = static_cast<int>(e);
    if (out.empty() || out.back() != ei) out.push_back(ei);
  }
  return out;
}

std::vector<Rational> hyperdyadic_ladder(double eps, int k0, int kmax) {
  std::vector<Rational> out;
  for (int e : hyperdyadic_exponents(eps, k0, kmax)) out.push_back(from_grid_index(1, e));
  return out;
}

void RefineParams::validate() const {
  if (!(sigma > 0 && sigma < 1)) throw ParameterError("sigma must lie in (0, 1)");
  if (!(K >= 1)) throw ParameterError("K must be at least 1");
  if (!(eps > 0 && eps < 1)) throw ParameterError("eps must lie in (0, 1)");
}

double kt_threshold(const RefineParams& p, int m, std::int64_t r_cells) {
  return std::exp2(m * p.K * p.eps + p.sigma * std::log2(static_cast<double>(r_cells)));
}

KtDecomposition kt_refine(const GridSet1D& a, const RefineParams& p, std::optional<Rational> upper) {
  p.validate();
  if (a.empty()) throw HypothesisViolation("kt_refine needs a nonempty set");
  const int m = a.m();
  // measure(A) <= 4 delta^(1 - sigma)  <=>  count <= 4 delta^(-sigma)
  const double cap = 4.0 * std::exp2(m * p.sigma);
  if (static_cast<double>(a.count()) > cap * (1 + 1e-12))
    throw HypothesisViolation("measure(A) <= 4 delta^(1-sigma) fails: " + std::to_string(a.count()) +
                              " cells > " + std::to_string(cap));
  const Rational top = upper ? *upper : std::max(Rational(1), a.hi() - a.lo());

  const std::int64_t n = a.cells();
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + (a.contains(k) ? 1 : 0);
  auto count_in = [&](std::int64_t lo, std::int64_t hi) {  // cells [lo, hi) clipped to the frame
    lo = std::clamp<std::int64_t>(lo, 0, n);
    hi = std::clamp<std::int64_t>(hi, 0, n);
    return hi > lo ? prefix[hi] - prefix[lo] : 0;
  };

  KtDecomposition out;
  GridSet1D removed(m, a.origin(), n);
  for (std::int64_t r = 2; from_grid_index(r, m) <= top; r *= 2) {
    // Ties go to the heavy side so rounding in the threshold never leaves a light ball over it.
    const double threshold = kt_threshold(p, m, r) * (1 - 1e-9);
    GridSet1D heavy(m, a.origin(), n);
    for (std::int64_t x = 0; x < n; ++x)
      if (static_cast<double>(count_in(x - r + 1, x + r)) >= threshold) heavy.insert(x);
    removed = set_union(removed, heavy);
    out.heavy_parts.emplace(from_grid_index(r, m), std::move(heavy));
    if (r > (std::int64_t{1} << 61) / 2) break;
  }
  out.a_star = set_difference(a, removed);
  return out;
}

namespace {

// 2^-e -> e
int scale_exponent(const Rational& s) {
  const BigInt num = numerator(s), den = denominator(s);
  if (num == 1) {
    int e = 0;
    for (BigInt d = den; d > 1; d >>= 1) ++e;
    return e;
  }
  int e = 0;
  for (BigInt v = num; v > 1; v >>= 1) --e;
  return e;
}

}  // namespace

void write_kt_decomposition(const std::filesystem::path& dir, const KtDecomposition& d) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& path, const GridSet1D& s) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write_gridset(f, s);
  };
  write(dir / "a_star.gridset", d.a_star);
  for (const auto& [scale, part] : d.heavy_parts)
    write(dir / ("heavy_" + std::to_string(scale_exponent(scale)) + ".gridset"), part);
}

KtDecomposition read_kt_decomposition(const std::filesystem::path& dir) {
  auto read = [](const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot read " + path.string());
    return read_gridset_1d(f);
  };
  KtDecomposition d;
  d.a_star = read(dir / "a_star.gridset");
  const std::regex name(R"(heavy_(-?\d+)\.gridset)");
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch match;
    const std::string file = entry.path().filename().string();
    if (!std::regex_match(file, match, name)) continue;
    const int e = std::stoi(match[1].str());
    const Rational scale = e >= 0 ? from_grid_index(1, e) : Rational(BigInt(1) << -e);
    d.heavy_parts.emplace(scale, read(entry.path()));
  }
  return d;
}

namespace {

template <class Set>
PigeonholeResult pigeonhole_impl(const Set& x, const std::vector<Set>& parts, double lambda, int dim) {
  const std::size_t M = parts.size();
  if (!(lambda > 0 && lambda <= 1)) throw HypothesisViolation("lambda must lie in (0, 1]");
  if (!(static_cast<double>(M) * lambda > 2))
    throw HypothesisViolation("M lambda > 2 fails: " + std::to_string(M) + " * " + std::to_string(lambda));
  const auto total = static_cast<double>(x.count());
  for (std::size_t i = 0; i < M; ++i) {
    if (!parts[i].same_frame(x)) throw ResolutionMismatch("part " + std::to_string(i + 1) + " is on another frame");
    if (!is_subset(parts[i], x)) throw HypothesisViolation("part " + std::to_string(i + 1) + " is not inside X");
    if (static_cast<double>(parts[i].count()) < lambda * total)
      throw HypothesisViolation("part " + std::to_string(i + 1) + " has measure below lambda measure(X)");
  }
  const double need = lambda * lambda / 2 * total;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j) {
      const auto c = set_intersect(parts[i], parts[j]).count();
      if (static_cast<double>(c) >= need) {
        const Rational cell = from_grid_index(1, x.m() * dim);
        return {i + 1, j + 1, Rational(c) * cell};
      }
    }
  throw std::logic_error("pigeonhole_pair found no pair although the hypotheses hold");
}

}  // namespace

PigeonholeResult pigeonhole_pair(const GridSet1D& x, const std::vector<GridSet1D>& parts, double lambda) {
  return pigeonhole_impl(x, parts, lambda, 1);
}

PigeonholeResult pigeonhole_pair(const GridSet2D& x, const std::vector<GridSet2D>& parts, double lambda) {
  return pigeonhole_impl(x, parts, lambda, 2);
}

}  // namespace tubekit
