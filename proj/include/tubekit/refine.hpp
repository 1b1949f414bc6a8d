#pragma once

// Scale ladders and the two refinement steps: Katz-Tao style removal of heavy balls and
// pigeonholing a large pairwise intersection out of many large subsets.

#include "tubekit/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace tubekit {

/// Exponents round((1 + eps)^k) for k0 <= k <= kmax with repeats removed, increasing.
std::vector<int> hyperdyadic_exponents(double eps, int k0, int kmax);
/// Scales 2^-e for the exponents above, strictly decreasing.
std::vector<Rational> hyperdyadic_ladder(double eps, int k0, int kmax);

struct RefineParams {
  double sigma = 0.5;
  double K = 2.0;
  double eps = 0.05;

  /// Throws ParameterError unless sigma in (0,1), K >= 1, eps in (0,1).
  void validate() const;
};

struct KtDecomposition {
  GridSet1D a_star;
  /// Keyed by the ball radius delta' (dyadic, delta < delta' <= upper).
  std::map<Rational, GridSet1D> heavy_parts;
};

/// Heavy threshold in cells for a ball of radius r cells: delta^(-K eps) r^sigma.
double kt_threshold(const RefineParams& p, int m, std::int64_t r_cells);

/// Ball of radius r cells around cell x: cells k with |k - x| < r.
/// heavy_parts[r delta] = frame cells x whose ball holds at least kt_threshold cells of A.
/// a_star = A minus every heavy part. Radii run over dyadic r delta in (delta, upper]; upper
/// defaults to max(1, hi - lo).
/// Requires A nonempty and measure(A) <= 4 delta^(1 - sigma).
KtDecomposition kt_refine(const GridSet1D& a, const RefineParams& p, std::optional<Rational> upper = std::nullopt);

/// Writes a_star.gridset and heavy_<e>.gridset (delta' = 2^-e) into `dir`, creating it.
void write_kt_decomposition(const std::filesystem::path& dir, const KtDecomposition& d);
KtDecomposition read_kt_decomposition(const std::filesystem::path& dir);

struct PigeonholeResult {
  std::size_t i = 0;  // 1-based, i < j
  std::size_t j = 0;
  Rational intersection_measure;
};

/// First pair (lexicographic, 1-based) with measure(X_i cap X_j) >= (lambda^2 / 2) measure(X).
/// Requires every part to share X's frame, sit inside X, have measure >= lambda measure(X), and
/// M lambda > 2.
PigeonholeResult pigeonhole_pair(const GridSet1D& x, const std::vector<GridSet1D>& parts, double lambda);
PigeonholeResult pigeonhole_pair(const GridSet2D& x, const std::vector<GridSet2D>& parts, double lambda);

}  // namespace tubekit
