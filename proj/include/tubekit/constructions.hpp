#pragma once

// Generators for structured fixtures: digit-restricted Cantor sets, arithmetic and geometric
// progressions, lattice pencil configurations and the four product pencils over A x A.

#include "tubekit/geometry.hpp"
#include "tubekit/grid.hpp"

#include <array>
#include <vector>

namespace tubekit {

struct CantorSpec {
  int b = 2;   // kept digits per level
  int ell = 4; // subdivision, a power of two
  int d = 4;   // depth
  /// Kept digits in [0, ell); empty means b digits spread evenly from 0 to ell - 1.
  std::vector<int> digits;

  /// Throws ParameterError on an invalid spec.
  void validate() const;
  std::vector<int> kept_digits() const;
  /// d * log2(ell)
  int natural_m() const;
  /// log b / log ell
  double sigma() const;
};

/// Digit set on [0, 1) at its natural resolution: b^d cells.
GridSet1D cantor_set(const CantorSpec& spec);
/// The same pattern scaled into [lo, hi) at resolution m; each leaf interval
/// (hi - lo) / ell^d must be a positive multiple of 2^-m.
GridSet1D cantor_set(const CantorSpec& spec, int m, const Rational& lo, const Rational& hi);

/// Cells start, start + gap, ..., start + (n-1) gap on [0, 1) at resolution m.
GridSet1D ap_set(std::int64_t n, std::int64_t gap, int m, std::int64_t start = 0);
/// Cells containing ratio^first, ..., ratio^(first + count - 1) on [0, 1); ratio in (0, 1).
GridSet1D gp_set(const Rational& ratio, int count, int m, int first = 2);

struct LatticeConfig {
  std::vector<Pencil> pencils;
  /// Lattice points in absolute coordinates, each at a cell center.
  std::vector<Vec2> points;
  /// Cell (i, j) on [0, 1)^2 holding each lattice point.
  std::vector<std::pair<std::int64_t, std::int64_t>> point_cells;
};

/// Four parallel families with slopes inf, 0, 1, -1 (tips [0:1:0], [1:0:0], [1:1:0], [1:-1:0])
/// through an n x n lattice of cell centers in [0, 1)^2, radius delta. Requires 1 <= n <= 2^m / 4.
/// The vertical and horizontal families hold n tubes; the diagonals need 2n - 1 tubes each,
/// with offsets at resolution m + 1 (at most delta / 4 from the lattice values).
LatticeConfig collinear_tip_config(std::int64_t n, int m);

/// Tip at the origin plus vertical and horizontal families through the lattice
/// {(2^i, 2^j) / 2^(n+1)}: 0 <= i, j < n, snapped to cell centers. Directions from the origin
/// are at resolution m + 4, radius delta. Requires 1 <= n <= m - 3.
LatticeConfig noncollinear_three_config(int n, int m);

/// P1 = A x R, P2 = R x A (radius delta / 2, offsets = A), P3 tip (0, 0) and P4 tip (1, 1)
/// with directions covering the cones over every cell of A x A at resolution m (radius delta).
/// A must be nonempty and inside [1/4, 1/2).
std::array<Pencil, 4> product_pencils(const GridSet1D& a);

/// A x A on [0, 1)^2 at A's resolution, and the cells of it missing from some inflate(raster(P_i), k).
struct ProductContainment {
  GridSet2D product;
  GridSet2D uncovered;
  bool holds() const { return uncovered.empty(); }
};
ProductContainment product_containment(const GridSet1D& a, const std::array<Pencil, 4>& p, std::int64_t slack = 1);

}  // namespace tubekit
