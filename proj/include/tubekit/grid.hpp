#pragma once

// Dense membership sets over the cells of a dyadic grid.
//
// A GridSet1D at resolution m covers [lo, hi) with cells [lo + i*delta, lo + (i+1)*delta),
// delta = 2^-m. Both lo and hi must be multiples of delta, so every cell is also a cell of
// the absolute grid delta*Z; `origin()` is lo / delta. GridSet2D is the same over a square
// [lo, hi)^2 with cell (i, j) = x-column i, y-row j, stored row-major (row j, then column i).

#include "tubekit/errors.hpp"
#include "tubekit/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace tubekit {

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }
  /// Sets bits [first, last) clipped to the vector.
  void set_range(std::int64_t first, std::int64_t last);
  std::size_t count() const;
  bool any() const;

  BitVector& operator|=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  /// this &= ~other
  BitVector& subtract(const BitVector& other);
  void flip_all();
  /// this |= (src shifted up by `shift` positions), bits beyond size() are dropped.
  void or_shifted(const BitVector& src, std::size_t shift);
  bool is_subset_of(const BitVector& other) const;

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

class GridSet1D {
 public:
  GridSet1D() = default;
  /// Empty set on [origin*delta, (origin+cells)*delta).
  GridSet1D(int m, std::int64_t origin, std::int64_t cells);
  /// Empty set on [lo, hi); lo and hi must be multiples of 2^-m with lo < hi.
  static GridSet1D on(int m, const Rational& lo, const Rational& hi);
  static GridSet1D full(int m, const Rational& lo, const Rational& hi);

  int m() const { return m_; }
  double delta() const;
  std::int64_t origin() const { return origin_; }
  std::int64_t cells() const { return static_cast<std::int64_t>(bits_.size()); }
  Rational lo() const { return from_grid_index(origin_, m_); }
  Rational hi() const { return from_grid_index(origin_ + cells(), m_); }

  bool contains(std::int64_t i) const { return in_range(i) && bits_.test(static_cast<std::size_t>(i)); }
  bool in_range(std::int64_t i) const { return i >= 0 && i < cells(); }
  void insert(std::int64_t i);
  void erase(std::int64_t i);
  /// Membership by absolute grid index (cell [k*delta, (k+1)*delta)).
  bool contains_abs(std::int64_t k) const { return contains(k - origin_); }

  std::int64_t count() const { return static_cast<std::int64_t>(bits_.count()); }
  bool empty() const { return !bits_.any(); }
  double measure() const;
  std::vector<std::int64_t> members() const;

  bool same_frame(const GridSet1D& other) const {
    return m_ == other.m_ && origin_ == other.origin_ && cells() == other.cells();
  }

  const BitVector& bits() const { return bits_; }
  BitVector& bits() { return bits_; }

  friend bool operator==(const GridSet1D&, const GridSet1D&) = default;

 private:
  int m_ = 0;
  std::int64_t origin_ = 0;
  BitVector bits_;
};

class GridSet2D {
 public:
  GridSet2D() = default;
  GridSet2D(int m, std::int64_t origin, std::int64_t side);
  static GridSet2D on(int m, const Rational& lo, const Rational& hi);
  static GridSet2D full(int m, const Rational& lo, const Rational& hi);

  int m() const { return m_; }
  double delta() const;
  std::int64_t origin() const { return origin_; }
  std::int64_t side() const { return side_; }
  Rational lo() const { return from_grid_index(origin_, m_); }
  Rational hi() const { return from_grid_index(origin_ + side_, m_); }

  bool in_range(std::int64_t i, std::int64_t j) const { return i >= 0 && j >= 0 && i < side_ && j < side_; }
  bool contains(std::int64_t i, std::int64_t j) const {
    return in_range(i, j) && bits_.test(index(i, j));
  }
  void insert(std::int64_t i, std::int64_t j);
  void erase(std::int64_t i, std::int64_t j);

  std::int64_t count() const { return static_cast<std::int64_t>(bits_.count()); }
  bool empty() const { return !bits_.any(); }
  double measure() const;
  /// Member cells as (i, j), row-major order.
  std::vector<std::pair<std::int64_t, std::int64_t>> members() const;

  /// Lower-left corner and center of cell (i, j) in absolute coordinates.
  double cell_x(std::int64_t i) const;
  double cell_center(std::int64_t i) const { return cell_x(i) + 0.5 * delta(); }

  bool same_frame(const GridSet2D& other) const {
    return m_ == other.m_ && origin_ == other.origin_ && side_ == other.side_;
  }

  std::size_t index(std::int64_t i, std::int64_t j) const {
    return static_cast<std::size_t>(j * side_ + i);
  }
  const BitVector& bits() const { return bits_; }
  BitVector& bits() { return bits_; }

  friend bool operator==(const GridSet2D&, const GridSet2D&) = default;

 private:
  int m_ = 0;
  std::int64_t origin_ = 0;
  std::int64_t side_ = 0;
  BitVector bits_;
};

// ---- set algebra -------------------------------------------------------------------------

GridSet1D set_union(const GridSet1D& a, const GridSet1D& b);
GridSet1D set_intersect(const GridSet1D& a, const GridSet1D& b);
GridSet1D set_difference(const GridSet1D& a, const GridSet1D& b);
GridSet1D set_complement(const GridSet1D& a);
/// All cells within k cells of a member, clipped to the domain.
GridSet1D inflate(const GridSet1D& a, std::int64_t k);

GridSet2D set_union(const GridSet2D& a, const GridSet2D& b);
GridSet2D set_intersect(const GridSet2D& a, const GridSet2D& b);
GridSet2D set_difference(const GridSet2D& a, const GridSet2D& b);
GridSet2D set_complement(const GridSet2D& a);
/// All cells within Chebyshev distance k (in cells) of a member, clipped to the domain.
GridSet2D inflate(const GridSet2D& a, std::int64_t k);

bool is_subset(const GridSet1D& a, const GridSet1D& b);
bool is_subset(const GridSet2D& a, const GridSet2D& b);

/// Copies the members of `a` that fall inside [lo, hi) onto a new frame at the same resolution.
GridSet1D reframe(const GridSet1D& a, const Rational& lo, const Rational& hi);
GridSet2D reframe(const GridSet2D& a, const Rational& lo, const Rational& hi);

/// Cartesian product a x a on the square frame of a's domain.
GridSet2D product_square(const GridSet1D& a);

// ---- scales --------------------------------------------------------------------------------

/// r / delta as a power-of-two cell count, checking delta <= r <= domain length.
std::int64_t scale_in_cells(const Rational& r, int m, std::int64_t domain_cells);

/// Number of r-boxes aligned to lo that meet the set.
std::int64_t covering_number(const GridSet1D& s, const Rational& r);
std::int64_t covering_number(const GridSet2D& s, const Rational& r);

/// Dyadic window sizes (in cells) 1, 2, 4, ... up to the domain length.
std::vector<std::int64_t> dyadic_window_sizes(std::int64_t domain_cells);

// ---- non-concentration ---------------------------------------------------------------------

struct NonConcentrationSpec {
  double sigma = 0.5;
  double C = 1.0;

  /// Throws ParameterError unless 0 < sigma <= dim and C >= 1.
  void validate(int dim) const;
  double bound(std::int64_t r_cells) const;
};

/// A window [a, a + r)^d anchored at grid point a (relative cell index) holding too many cells.
struct ConcentrationWitness {
  std::int64_t ax = 0;
  std::int64_t ay = 0;  // 0 for 1D sets
  std::int64_t r_cells = 0;
  std::int64_t count = 0;
  double bound = 0;

  friend bool operator==(const ConcentrationWitness&, const ConcentrationWitness&) = default;
};

struct NonConcentrationResult {
  bool pass = true;
  std::optional<ConcentrationWitness> witness;
};

/// Checks #(S cap W) <= C (r/delta)^sigma over every dyadic window size r and every
/// grid-anchored window W = [a, a+r) (squares in 2D) that meets the domain. On failure the
/// witness is the first violation ordered by r, then a (ax, then ay).
NonConcentrationResult nonconcentration_check(const GridSet1D& s, const NonConcentrationSpec& spec);
NonConcentrationResult nonconcentration_check(const GridSet2D& s, const NonConcentrationSpec& spec);

/// Cell counts of every window [a, a + r) for a in [-r+1, n-1]; entry a + r - 1.
std::vector<std::int64_t> window_counts(const GridSet1D& s, std::int64_t r_cells);

}  // namespace tubekit
