#pragma once

// Discretized set arithmetic on GridSet1D.
//
// Images are interval-arithmetic covers: a pair of member cells produces an open image
// interval, and a result cell [k*delta, (k+1)*delta) is a member iff it meets that open
// interval. Index-level operations (no spill into neighbouring cells) are named index_*.

#include "tubekit/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace tubekit {

/// A + B on [lo_A + lo_B, hi_A + hi_B).
GridSet1D sumset(const GridSet1D& a, const GridSet1D& b);
/// A - B on [lo_A - hi_B, hi_A - lo_B).
GridSet1D difference_set(const GridSet1D& a, const GridSet1D& b);
/// A * B; domains must be nonnegative. The result frame is [lo_A lo_B, hi_A hi_B) widened to
/// the delta grid.
GridSet1D productset(const GridSet1D& a, const GridSet1D& b);
/// A / B; requires lo_A >= 0 and a positive denominator: lo_B > 0, or every member of B above 0
/// (the lowest member then replaces lo_B in the frame). Result frame widened to the delta grid.
GridSet1D quotientset(const GridSet1D& a, const GridSet1D& b);
/// Cover of {p x + q : x in A}; p != 0. Result frame is the image of [lo, hi] widened to the grid.
GridSet1D affine_image(const GridSet1D& a, const Rational& p, const Rational& q);

/// {i + j} over member indices, placed on the sumset frame (cell i + j, no interval spill).
GridSet1D index_sumset(const GridSet1D& a, const GridSet1D& b);

/// r(s) = #{(i, j) in A x B : i + j = s} for s = 0 .. cells_A + cells_B - 2.
std::vector<std::int64_t> representation_counts(const GridSet1D& a, const GridSet1D& b);

/// Number of quadruples (a, b, a', b') with a + b = a' + b'.
std::uint64_t additive_energy(const GridSet1D& a, const GridSet1D& b);

// ---- graphs and Balog-Szemeredi-Gowers ------------------------------------------------------

struct PairGraph {
  GridSet1D a_set;
  GridSet1D b_set;
  /// Sorted, unique pairs of member indices (relative to each set's frame).
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;

  /// Sorts the edges and checks the endpoint and uniqueness invariants.
  static PairGraph make(GridSet1D a, GridSet1D b, std::vector<std::pair<std::int64_t, std::int64_t>> edges);
  static PairGraph complete(const GridSet1D& a, const GridSet1D& b);
};

/// #(A +_G B) realized as a set: cells i + j for (i, j) in the edge list.
GridSet1D restricted_sumset(const PairGraph& g);

struct BsgConfig {
  double C0 = 4096.0;  // 2^12
  double c0 = 5.0;
  /// Exhaustive candidate search is used when #A * #B is at most this.
  std::int64_t exhaustive_limit = std::int64_t{1} << 16;
  /// Skip the early return on the first certified candidate and always run the scan.
  bool force_exhaustive = false;
};

struct BsgAchieved {
  double a_ratio = 0;    // #A' / #A
  double b_ratio = 0;    // #B' / #B
  double sum_ratio = 0;  // #(A' + B') / (#A^1/2 #B^1/2)

  friend bool operator==(const BsgAchieved&, const BsgAchieved&) = default;
};

struct BsgResult {
  GridSet1D a_prime;
  GridSet1D b_prime;
  double K = 1;
  BsgAchieved achieved;
  bool used_fallback = false;
};

/// Ratios for a candidate pair, computed from scratch.
BsgAchieved bsg_ratios(const PairGraph& g, const GridSet1D& a_prime, const GridSet1D& b_prime);
/// True iff the candidate meets all three output inequalities.
bool bsg_contract_holds(const PairGraph& g, double K, const GridSet1D& a_prime, const GridSet1D& b_prime,
                        const BsgConfig& cfg = {});

/// Checks #G > #A #B / K and #(A +_G B) <= K (#A #B)^1/2, then extracts A', B' by popularity and
/// path counting, falling back to an exhaustive candidate scan for small graphs.
BsgResult bsg_extract(const PairGraph& g, double K, const BsgConfig& cfg = {});

// ---- convolution peak and the A_z construction ---------------------------------------------

struct ConvolutionPeak {
  std::int64_t z = 0;      // index sum i + j (relative to the frames)
  std::int64_t count = 0;  // r(z)
};

/// argmax of r(z) over index sums, smallest z on ties.
ConvolutionPeak convolution_peak(const GridSet1D& a);

/// Midpoint of the sum interval for an index sum of A + A: (2 lo/delta + z + 1) * delta.
Rational peak_value(const GridSet1D& a, std::int64_t z);

/// A_z = A/z cap (1 - A/z) on [0, 1) for A inside [1/4, 1/2) and z in [1/2, 1).
GridSet1D az_construct(const GridSet1D& a, const Rational& z);

struct AzContainment {
  bool product_contained = false;     // A_z A_z inside inflate(AA / z^2, slack)
  bool complement_contained = false;  // (1 - A_z)(1 - A_z) inside inflate(AA / z^2, slack)
};

/// Recomputes both product containments on the common frame [0, 1), inflating the target by
/// `slack` cells.
AzContainment az_check(const GridSet1D& a, const Rational& z, const GridSet1D& az, std::int64_t slack = 1);

// ---- pair-graph files ------------------------------------------------------------------------
//
//   pairgraph m=<int>
//   i j
//   ...

void write_pairgraph(std::ostream& out, const PairGraph& g);
/// Reads edges onto the given vertex sets (edges are relative indices of those sets).
PairGraph read_pairgraph(std::istream& in, const GridSet1D& a, const GridSet1D& b);
/// Reads edges with both vertex sets on [0, 1), taking the edge endpoints as the vertex sets.
PairGraph read_pairgraph(std::istream& in);

}  // namespace tubekit
