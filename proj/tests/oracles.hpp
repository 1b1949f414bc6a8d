#pragma once

// Brute-force reference implementations used only by the tests. They recompute each quantity
// straight from its definition (pairwise loops, per-cell predicates) without sharing code paths
// with the library kernels.

#include "tubekit/grid.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using tubekit::GridSet1D;
using tubekit::GridSet2D;

inline GridSet1D random_set_1d(std::mt19937_64& rng, int m, std::int64_t origin, std::int64_t cells, double density) {
  GridSet1D s(m, origin, cells);
  std::bernoulli_distribution coin(density);
  for (std::int64_t i = 0; i < cells; ++i)
    if (coin(rng)) s.insert(i);
  return s;
}

inline GridSet2D random_set_2d(std::mt19937_64& rng, int m, std::int64_t origin, std::int64_t side, double density) {
  GridSet2D s(m, origin, side);
  std::bernoulli_distribution coin(density);
  for (std::int64_t j = 0; j < side; ++j)
    for (std::int64_t i = 0; i < side; ++i)
      if (coin(rng)) s.insert(i, j);
  return s;
}

/// Double loop over window sizes and anchors; counts cells one by one.
inline std::optional<tubekit::ConcentrationWitness> nonconcentration_1d(const GridSet1D& s, double sigma, double C) {
  const std::int64_t n = s.cells();
  for (std::int64_t r = 1; r <= n; r *= 2) {
    const double bound = C * std::pow(static_cast<double>(r), sigma);
    for (std::int64_t a = -r + 1; a < n; ++a) {
      std::int64_t count = 0;
      for (std::int64_t k = a; k < a + r; ++k) count += s.contains(k) ? 1 : 0;
      if (static_cast<double>(count) > bound) return tubekit::ConcentrationWitness{a, 0, r, count, bound};
    }
  }
  return std::nullopt;
}

inline std::optional<tubekit::ConcentrationWitness> nonconcentration_2d(const GridSet2D& s, double sigma, double C) {
  const std::int64_t n = s.side();
  const auto cells = s.members();
  for (std::int64_t r = 1; r <= n; r *= 2) {
    const double bound = C * std::pow(static_cast<double>(r), sigma);
    for (std::int64_t ax = -r + 1; ax < n; ++ax)
      for (std::int64_t ay = -r + 1; ay < n; ++ay) {
        std::int64_t count = 0;
        for (auto [i, j] : cells) count += (i >= ax && i < ax + r && j >= ay && j < ay + r) ? 1 : 0;
        if (static_cast<double>(count) > bound) return tubekit::ConcentrationWitness{ax, ay, r, count, bound};
      }
  }
  return std::nullopt;
}

/// Member iff the half-open target cell [k, k+1) meets the open interval (lo, hi); all values are
/// exact fractions num/den with den > 0, expressed in units of delta.
struct Frac {
  __int128 num;
  __int128 den;
};

inline bool cell_meets_open(std::int64_t k, Frac lo, Frac hi) {
  // k < hi and k + 1 > lo
  return __int128{k} * hi.den < hi.num && __int128{k + 1} * lo.den > lo.num;
}

/// Pairwise interval-arithmetic oracle: for every member pair build the open image interval and
/// test every target cell. `op` returns the interval (lo, hi) in delta units for absolute indices.
template <class Op>
GridSet1D pairwise_image(const GridSet1D& a, const GridSet1D& b, GridSet1D frame, Op op) {
  for (auto i : a.members())
    for (auto j : b.members()) {
      auto [lo, hi] = op(a.origin() + i, b.origin() + j);
      for (std::int64_t k = 0; k < frame.cells(); ++k)
        if (cell_meets_open(frame.origin() + k, lo, hi)) frame.insert(k);
    }
  return frame;
}

// Pairwise images for the four arithmetic operations, on frames wide enough for every image.

inline std::int64_t floor_div64(std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }
inline std::int64_t ceil_div64(std::int64_t a, std::int64_t b) { return -floor_div64(-a, b); }

inline GridSet1D sum(const GridSet1D& a, const GridSet1D& b) {
  GridSet1D frame(a.m(), a.origin() + b.origin(), a.cells() + b.cells());
  return pairwise_image(a, b, frame, [](std::int64_t x, std::int64_t y) {
    return std::pair{Frac{x + y, 1}, Frac{x + y + 2, 1}};
  });
}

inline GridSet1D diff(const GridSet1D& a, const GridSet1D& b) {
  GridSet1D frame(a.m(), a.origin() - b.origin() - b.cells(), a.cells() + b.cells());
  return pairwise_image(a, b, frame, [](std::int64_t x, std::int64_t y) {
    return std::pair{Frac{x - y - 1, 1}, Frac{x - y + 1, 1}};
  });
}

inline GridSet1D prod(const GridSet1D& a, const GridSet1D& b) {
  const std::int64_t s = std::int64_t{1} << a.m();
  const std::int64_t lo = floor_div64(a.origin() * b.origin(), s);
  const std::int64_t hi = ceil_div64((a.origin() + a.cells()) * (b.origin() + b.cells()), s);
  GridSet1D frame(a.m(), lo, hi - lo);
  return pairwise_image(a, b, frame, [s](std::int64_t x, std::int64_t y) {
    return std::pair{Frac{__int128{x} * y, s}, Frac{__int128{x + 1} * (y + 1), s}};
  });
}

inline GridSet1D quot(const GridSet1D& a, const GridSet1D& b) {
  const std::int64_t s = std::int64_t{1} << a.m();
  const std::int64_t lo = floor_div64(a.origin() * s, b.origin() + b.cells());
  const std::int64_t b_low = b.origin() > 0 ? b.origin() : b.origin() + b.members().front();
  const std::int64_t hi = ceil_div64((a.origin() + a.cells()) * s, b_low);
  GridSet1D frame(a.m(), lo, hi - lo);
  return pairwise_image(a, b, frame, [s](std::int64_t x, std::int64_t y) {
    return std::pair{Frac{__int128{x} * s, y + 1}, Frac{__int128{x + 1} * s, y}};
  });
}

}  // namespace oracle
