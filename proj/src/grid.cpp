#include "tubekit/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace tubekit {

// ---- BitVector -----------------------------------------------------------------------------

void BitVector::set_range(std::int64_t first, std::int64_t last) {
  first = std::max<std::int64_t>(first, 0);
  last = std::min<std::int64_t>(last, static_cast<std::int64_t>(size_));
  for (std::int64_t i = first; i < last;) {
    if ((i & 63) == 0 && last - i >= 64) {
      words_[static_cast<std::size_t>(i >> 6)] = ~std::uint64_t{0};
      i += 64;
    } else {
      set(static_cast<std::size_t>(i));
      ++i;
    }
  }
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

BitVector& BitVector::operator|=(const BitVector& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::subtract(const BitVector& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

void BitVector::flip_all() {
  for (auto& w : words_) w = ~w;
  clear_tail();
}

void BitVector::or_shifted(const BitVector& src, std::size_t shift) {
  const std::size_t word_shift = shift >> 6;
  const unsigned bit_shift = static_cast<unsigned>(shift & 63);
  for (std::size_t i = 0; i < src.words_.size(); ++i) {
    const std::uint64_t w = src.words_[i];
    if (w == 0) continue;
    const std::size_t dst = i + word_shift;
    if (dst < words_.size()) words_[dst] |= w << bit_shift;
    if (bit_shift != 0 && dst + 1 < words_.size()) words_[dst + 1] |= w >> (64 - bit_shift);
  }
  clear_tail();
}

bool BitVector::is_subset_of(const BitVector& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

void BitVector::clear_tail() {
  if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

// ---- frames --------------------------------------------------------------------------------

namespace {

std::pair<std::int64_t, std::int64_t> frame_of(int m, const Rational& lo, const Rational& hi) {
  if (m < 0 || m > 40) throw DomainError("resolution exponent out of range: " + std::to_string(m));
  if (!(lo < hi)) throw DomainError("empty domain [" + format_rational(lo) + ", " + format_rational(hi) + ")");
  const std::int64_t a = to_grid_index(lo, m);
  const std::int64_t b = to_grid_index(hi, m);
  return {a, b - a};
}

void require_same(const GridSet1D& a, const GridSet1D& b) {
  if (!a.same_frame(b)) throw ResolutionMismatch("1D grid sets have different resolution or domain");
}

void require_same(const GridSet2D& a, const GridSet2D& b) {
  if (!a.same_frame(b)) throw ResolutionMismatch("2D grid sets have different resolution or domain");
}

}  // namespace

GridSet1D::GridSet1D(int m, std::int64_t origin, std::int64_t cells)
    : m_(m), origin_(origin), bits_(static_cast<std::size_t>(cells)) {
  if (cells <= 0) throw DomainError("grid set needs at least one cell");
}

GridSet1D GridSet1D::on(int m, const Rational& lo, const Rational& hi) {
  auto [origin, cells] = frame_of(m, lo, hi);
  return GridSet1D(m, origin, cells);
}

GridSet1D GridSet1D::full(int m, const Rational& lo, const Rational& hi) {
  GridSet1D s = on(m, lo, hi);
  s.bits_.set_range(0, s.cells());
  return s;
}

double GridSet1D::delta() const { return std::ldexp(1.0, -m_); }

void GridSet1D::insert(std::int64_t i) {
  if (!in_range(i)) throw DomainError("cell " + std::to_string(i) + " outside domain");
  bits_.set(static_cast<std::size_t>(i));
}

void GridSet1D::erase(std::int64_t i) {
  if (in_range(i)) bits_.set(static_cast<std::size_t>(i), false);
}

double GridSet1D::measure() const { return static_cast<double>(count()) * delta(); }

std::vector<std::int64_t> GridSet1D::members() const {
  std::vector<std::int64_t> out;
  auto words = bits_.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      out.push_back(static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      bits &= bits - 1;
    }
  }
  return out;
}

GridSet2D::GridSet2D(int m, std::int64_t origin, std::int64_t side)
    : m_(m), origin_(origin), side_(side), bits_(static_cast<std::size_t>(side * side)) {
  if (side <= 0) throw DomainError("grid set needs at least one cell");
}

GridSet2D GridSet2D::on(int m, const Rational& lo, const Rational& hi) {
  auto [origin, cells] = frame_of(m, lo, hi);
  return GridSet2D(m, origin, cells);
}

GridSet2D GridSet2D::full(int m, const Rational& lo, const Rational& hi) {
  GridSet2D s = on(m, lo, hi);
  s.bits_.set_range(0, s.side_ * s.side_);
  return s;
}

double GridSet2D::delta() const { return std::ldexp(1.0, -m_); }

void GridSet2D::insert(std::int64_t i, std::int64_t j) {
  if (!in_range(i, j))
    throw DomainError("cell (" + std::to_string(i) + ", " + std::to_string(j) + ") outside domain");
  bits_.set(index(i, j));
}

void GridSet2D::erase(std::int64_t i, std::int64_t j) {
  if (in_range(i, j)) bits_.set(index(i, j), false);
}

double GridSet2D::measure() const { return static_cast<double>(count()) * delta() * delta(); }

std::vector<std::pair<std::int64_t, std::int64_t>> GridSet2D::members() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  auto words = bits_.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const auto idx = static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      out.emplace_back(idx % side_, idx / side_);
      bits &= bits - 1;
    }
  }
  return out;
}

double GridSet2D::cell_x(std::int64_t i) const {
  return std::ldexp(static_cast<double>(origin_ + i), -m_);
}

// ---- set algebra -------------------------------------------------------------------------

GridSet1D set_union(const GridSet1D& a, const GridSet1D& b) {
  require_same(a, b);
  GridSet1D out = a;
  out.bits() |= b.bits();
  return out;
}

GridSet1D set_intersect(const GridSet1D& a, const GridSet1D& b) {
  require_same(a, b);
  GridSet1D out = a;
  out.bits() &= b.bits();
  return out;
}

GridSet1D set_difference(const GridSet1D& a, const GridSet1D& b) {
  require_same(a, b);
  GridSet1D out = a;
  out.bits().subtract(b.bits());
  return out;
}

GridSet1D set_complement(const GridSet1D& a) {
  GridSet1D out = a;
  out.bits().flip_all();
  return out;
}

GridSet1D inflate(const GridSet1D& a, std::int64_t k) {
  if (k < 0) throw DomainError("negative inflation");
  GridSet1D out = a;
  // Runs of members are widened in one pass.
  std::int64_t i = 0;
  const std::int64_t n = a.cells();
  while (i < n) {
    if (!a.contains(i)) {
      ++i;
      continue;
    }
    std::int64_t j = i;
    while (j < n && a.contains(j)) ++j;
    out.bits().set_range(i - k, j + k);
    i = j;
  }
  return out;
}

GridSet2D set_union(const GridSet2D& a, const GridSet2D& b) {
  require_same(a, b);
  GridSet2D out = a;
  out.bits() |= b.bits();
  return out;
}

GridSet2D set_intersect(const GridSet2D& a, const GridSet2D& b) {
  require_same(a, b);
  GridSet2D out = a;
  out.bits() &= b.bits();
  return out;
}

GridSet2D set_difference(const GridSet2D& a, const GridSet2D& b) {
  require_same(a, b);
  GridSet2D out = a;
  out.bits().subtract(b.bits());
  return out;
}

GridSet2D set_complement(const GridSet2D& a) {
  GridSet2D out = a;
  out.bits().flip_all();
  return out;
}

GridSet2D inflate(const GridSet2D& a, std::int64_t k) {
  if (k < 0) throw DomainError("negative inflation");
  const std::int64_t n = a.side();
  // Chebyshev dilation is separable: widen along rows, then along columns.
  GridSet2D rows = a;
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i)
      if (a.contains(i, j))
        for (std::int64_t d = std::max<std::int64_t>(0, i - k); d <= std::min(n - 1, i + k); ++d)
          rows.bits().set(rows.index(d, j));
  GridSet2D out = rows;
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i)
      if (rows.contains(i, j))
        for (std::int64_t d = std::max<std::int64_t>(0, j - k); d <= std::min(n - 1, j + k); ++d)
          out.bits().set(out.index(i, d));
  return out;
}

bool is_subset(const GridSet1D& a, const GridSet1D& b) {
  require_same(a, b);
  return a.bits().is_subset_of(b.bits());
}

bool is_subset(const GridSet2D& a, const GridSet2D& b) {
  require_same(a, b);
  return a.bits().is_subset_of(b.bits());
}

GridSet1D reframe(const GridSet1D& a, const Rational& lo, const Rational& hi) {
  GridSet1D out = GridSet1D::on(a.m(), lo, hi);
  for (auto i : a.members()) {
    const std::int64_t k = i + a.origin() - out.origin();
    if (out.in_range(k)) out.insert(k);
  }
  return out;
}

GridSet2D reframe(const GridSet2D& a, const Rational& lo, const Rational& hi) {
  GridSet2D out = GridSet2D::on(a.m(), lo, hi);
  const std::int64_t shift = a.origin() - out.origin();
  for (auto [i, j] : a.members())
    if (out.in_range(i + shift, j + shift)) out.insert(i + shift, j + shift);
  return out;
}

GridSet2D product_square(const GridSet1D& a) {
  GridSet2D out(a.m(), a.origin(), a.cells());
  const auto mem = a.members();
  for (auto j : mem)
    for (auto i : mem) out.insert(i, j);
  return out;
}

// ---- scales --------------------------------------------------------------------------------

std::int64_t scale_in_cells(const Rational& r, int m, std::int64_t domain_cells) {
  const Rational cells = r * Rational(BigInt(1) << m);
  if (denominator(cells) != 1 || cells <= 0)
    throw InvalidScale("scale " + format_rational(r) + " is not a multiple of 2^-" + std::to_string(m));
  const BigInt n = numerator(cells);
  if ((n & (n - 1)) != 0) throw InvalidScale("scale " + format_rational(r) + " is not dyadic");
  if (n > domain_cells) throw InvalidScale("scale " + format_rational(r) + " exceeds the domain");
  return static_cast<std::int64_t>(n);
}

std::int64_t covering_number(const GridSet1D& s, const Rational& r) {
  const std::int64_t rc = scale_in_cells(r, s.m(), s.cells());
  std::int64_t count = 0;
  std::int64_t last_box = -1;
  for (auto i : s.members()) {
    const std::int64_t box = i / rc;
    if (box != last_box) {
      ++count;
      last_box = box;
    }
  }
  return count;
}

std::int64_t covering_number(const GridSet2D& s, const Rational& r) {
  const std::int64_t rc = scale_in_cells(r, s.m(), s.side());
  const std::int64_t boxes = (s.side() + rc - 1) / rc;
  BitVector seen(static_cast<std::size_t>(boxes * boxes));
  for (auto [i, j] : s.members()) seen.set(static_cast<std::size_t>((j / rc) * boxes + i / rc));
  return static_cast<std::int64_t>(seen.count());
}

std::vector<std::int64_t> dyadic_window_sizes(std::int64_t domain_cells) {
  std::vector<std::int64_t> out;
  for (std::int64_t r = 1; r <= domain_cells; r *= 2) out.push_back(r);
  return out;
}

// ---- non-concentration ---------------------------------------------------------------------

void NonConcentrationSpec::validate(int dim) const {
  if (!(sigma > 0.0) || sigma > static_cast<double>(dim))
    throw ParameterError("sigma must lie in (0, " + std::to_string(dim) + "]");
  if (!(C >= 1.0)) throw ParameterError("non-concentration constant must be >= 1");
}

double NonConcentrationSpec::bound(std::int64_t r_cells) const {
  return C * std::pow(static_cast<double>(r_cells), sigma);
}

std::vector<std::int64_t> window_counts(const GridSet1D& s, std::int64_t r) {
  const std::int64_t n = s.cells();
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(n + 1), 0);
  for (std::int64_t i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + (s.contains(i) ? 1 : 0);
  auto clamp = [n](std::int64_t x) { return static_cast<std::size_t>(std::clamp<std::int64_t>(x, 0, n)); };
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n + r - 1));
  for (std::int64_t a = -r + 1; a <= n - 1; ++a) out.push_back(prefix[clamp(a + r)] - prefix[clamp(a)]);
  return out;
}

NonConcentrationResult nonconcentration_check(const GridSet1D& s, const NonConcentrationSpec& spec) {
  spec.validate(1);
  for (auto r : dyadic_window_sizes(s.cells())) {
    const double bound = spec.bound(r);
    const auto counts = window_counts(s, r);
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
      if (static_cast<double>(counts[idx]) > bound) {
        ConcentrationWitness w;
        w.ax = static_cast<std::int64_t>(idx) - r + 1;
        w.r_cells = r;
        w.count = counts[idx];
        w.bound = bound;
        return {false, w};
      }
    }
  }
  return {true, std::nullopt};
}

NonConcentrationResult nonconcentration_check(const GridSet2D& s, const NonConcentrationSpec& spec) {
  spec.validate(2);
  const std::int64_t n = s.side();
  const auto stride = static_cast<std::size_t>(n + 1);
  std::vector<std::int64_t> prefix(stride * stride, 0);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto at = static_cast<std::size_t>(j + 1) * stride + static_cast<std::size_t>(i + 1);
      prefix[at] = (s.contains(i, j) ? 1 : 0) + prefix[at - 1] + prefix[at - stride] - prefix[at - stride - 1];
    }
  auto clamp = [n](std::int64_t x) { return static_cast<std::size_t>(std::clamp<std::int64_t>(x, 0, n)); };
  auto rect = [&](std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1) {
    const auto a = clamp(x0), b = clamp(x1), c = clamp(y0), d = clamp(y1);
    return prefix[d * stride + b] - prefix[c * stride + b] - prefix[d * stride + a] + prefix[c * stride + a];
  };
  for (auto r : dyadic_window_sizes(n)) {
    const double bound = spec.bound(r);
    for (std::int64_t ax = -r + 1; ax <= n - 1; ++ax)
      for (std::int64_t ay = -r + 1; ay <= n - 1; ++ay) {
        const std::int64_t count = rect(ax, ax + r, ay, ay + r);
        if (static_cast<double>(count) > bound) return {false, ConcentrationWitness{ax, ay, r, count, bound}};
      }
  }
  return {true, std::nullopt};
}

}  // namespace tubekit
