#include "tubekit/arith.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "tubekit/grid_io.hpp"

namespace tubekit {

namespace {

using i128 = __int128;

void require_resolution(const GridSet1D& a, const GridSet1D& b) {
  if (a.m() != b.m()) throw ResolutionMismatch("operands have different resolutions");
}

std::int64_t floor_div(i128 n, i128 d) {
  i128 q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return static_cast<std::int64_t>(q);
}

std::int64_t ceil_div(i128 n, i128 d) { return -floor_div(-n, d); }

// Marks absolute cells [k_first, k_last] on `out`.
void mark_abs(GridSet1D& out, std::int64_t k_first, std::int64_t k_last) {
  out.bits().set_range(k_first - out.origin(), k_last - out.origin() + 1);
}

}  // namespace

GridSet1D sumset(const GridSet1D& a, const GridSet1D& b) {
  require_resolution(a, b);
  GridSet1D out(a.m(), a.origin() + b.origin(), a.cells() + b.cells());
  for (auto i : a.members()) out.bits().or_shifted(b.bits(), static_cast<std::size_t>(i));
  // Each index sum i + j spills into cell i + j + 1.
  BitVector spill = out.bits();
  out.bits().or_shifted(spill, 1);
  return out;
}

GridSet1D index_sumset(const GridSet1D& a, const GridSet1D& b) {
  require_resolution(a, b);
  GridSet1D out(a.m(), a.origin() + b.origin(), a.cells() + b.cells());
  for (auto i : a.members()) out.bits().or_shifted(b.bits(), static_cast<std::size_t>(i));
  return out;
}

GridSet1D difference_set(const GridSet1D& a, const GridSet1D& b) {
  require_resolution(a, b);
  const std::int64_t nb = b.cells();
  GridSet1D out(a.m(), a.origin() - b.origin() - nb, a.cells() + nb);
  // Relative cells nb + i - j - 1 and nb + i - j; build via reversed B.
  BitVector reversed(static_cast<std::size_t>(nb));
  for (auto j : b.members()) reversed.set(static_cast<std::size_t>(nb - 1 - j));
  for (auto i : a.members()) out.bits().or_shifted(reversed, static_cast<std::size_t>(i));
  BitVector spill = out.bits();
  out.bits().or_shifted(spill, 1);
  return out;
}

GridSet1D productset(const GridSet1D& a, const GridSet1D& b) {
  require_resolution(a, b);
  if (a.origin() < 0 || b.origin() < 0) throw DomainError("productset needs nonnegative domains");
  const i128 scale = i128{1} << a.m();
  const i128 a0 = a.origin(), a1 = a.origin() + a.cells();
  const i128 b0 = b.origin(), b1 = b.origin() + b.cells();
  const std::int64_t lo = floor_div(a0 * b0, scale);
  const std::int64_t hi = std::max<std::int64_t>(ceil_div(a1 * b1, scale), lo + 1);
  GridSet1D out(a.m(), lo, hi - lo);
  const auto bm = b.members();
  for (auto i : a.members()) {
    const i128 x = a.origin() + i;
    for (auto j : bm) {
      const i128 y = b.origin() + j;
      mark_abs(out, floor_div(x * y, scale), ceil_div((x + 1) * (y + 1), scale) - 1);
    }
  }
  return out;
}

GridSet1D quotientset(const GridSet1D& a, const GridSet1D& b) {
  require_resolution(a, b);
  if (a.origin() < 0) throw DomainError("quotientset needs a nonnegative numerator domain");
  // A denominator frame touching 0 is accepted when every member is positive; the lowest member
  // then bounds the frame instead.
  std::int64_t b_low = b.origin();
  if (b_low <= 0 && !b.empty()) b_low = b.origin() + b.members().front();
  if (b_low <= 0) throw DomainError("quotientset needs a positive denominator");
  const i128 scale = i128{1} << a.m();
  const i128 a0 = a.origin(), a1 = a.origin() + a.cells();
  const i128 b0 = b_low, b1 = b.origin() + b.cells();
  const std::int64_t lo = floor_div(a0 * scale, b1);
  const std::int64_t hi = std::max<std::int64_t>(ceil_div(a1 * scale, b0), lo + 1);
  GridSet1D out(a.m(), lo, hi - lo);
  const auto bm = b.members();
  for (auto i : a.members()) {
    const i128 x = a.origin() + i;
    for (auto j : bm) {
      const i128 y = b.origin() + j;
      mark_abs(out, floor_div(x * scale, y + 1), ceil_div((x + 1) * scale, y) - 1);
    }
  }
  return out;
}

GridSet1D affine_image(const GridSet1D& a, const Rational& p, const Rational& q) {
  if (p == 0) throw DomainError("affine_image needs p != 0");
  const Rational shift = q * Rational(BigInt(1) << a.m());
  // Endpoints in units of delta: p * X + q / delta.
  auto image = [&](std::int64_t x) { return p * Rational(x) + shift; };
  const Rational e0 = image(a.origin()), e1 = image(a.origin() + a.cells());
  const auto lo = static_cast<std::int64_t>(tubekit::floor_div(std::min(e0, e1)));
  const auto hi = std::max<std::int64_t>(static_cast<std::int64_t>(tubekit::ceil_div(std::max(e0, e1))), lo + 1);
  GridSet1D out(a.m(), lo, hi - lo);
  for (auto i : a.members()) {
    const Rational c0 = image(a.origin() + i), c1 = image(a.origin() + i + 1);
    const Rational& l = std::min(c0, c1);
    const Rational& h = std::max(c0, c1);
    mark_abs(out, static_cast<std::int64_t>(tubekit::floor_div(l)), static_cast<std::int64_t>(tubekit::ceil_div(h)) - 1);
  }
  return out;
}

std::vector<std::int64_t> representation_counts(const GridSet1D& a, const GridSet1D& b) {
  std::vector<std::int64_t> r(static_cast<std::size_t>(a.cells() + b.cells() - 1), 0);
  const auto bm = b.members();
  for (auto i : a.members())
    for (auto j : bm) ++r[static_cast<std::size_t>(i + j)];
  return r;
}

std::uint64_t additive_energy(const GridSet1D& a, const GridSet1D& b) {
  require_resolution(a, b);
  std::uint64_t total = 0;
  for (auto c : representation_counts(a, b)) total += static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c);
  return total;
}

// ---- graphs --------------------------------------------------------------------------------

PairGraph PairGraph::make(GridSet1D a, GridSet1D b, std::vector<std::pair<std::int64_t, std::int64_t>> edges) {
  require_resolution(a, b);
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw DomainError("pair graph has duplicate edges");
  for (auto [i, j] : edges)
    if (!a.contains(i) || !b.contains(j))
      throw DomainError("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") has a non-member endpoint");
  return PairGraph{std::move(a), std::move(b), std::move(edges)};
}

PairGraph PairGraph::complete(const GridSet1D& a, const GridSet1D& b) {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  const auto bm = b.members();
  for (auto i : a.members())
    for (auto j : bm) edges.emplace_back(i, j);
  return make(a, b, std::move(edges));
}

GridSet1D restricted_sumset(const PairGraph& g) {
  GridSet1D out(g.a_set.m(), g.a_set.origin() + g.b_set.origin(), g.a_set.cells() + g.b_set.cells());
  for (auto [i, j] : g.edges) out.insert(i + j);
  return out;
}

BsgAchieved bsg_ratios(const PairGraph& g, const GridSet1D& a_prime, const GridSet1D& b_prime) {
  const double na = static_cast<double>(g.a_set.count());
  const double nb = static_cast<double>(g.b_set.count());
  BsgAchieved r;
  r.a_ratio = static_cast<double>(a_prime.count()) / na;
  r.b_ratio = static_cast<double>(b_prime.count()) / nb;
  r.sum_ratio = static_cast<double>(index_sumset(a_prime, b_prime).count()) / std::sqrt(na * nb);
  return r;
}

bool bsg_contract_holds(const PairGraph& g, double K, const GridSet1D& a_prime, const GridSet1D& b_prime,
                        const BsgConfig& cfg) {
  if (!is_subset(a_prime, g.a_set) || !is_subset(b_prime, g.b_set)) return false;
  if (a_prime.empty() || b_prime.empty()) return false;
  const BsgAchieved r = bsg_ratios(g, a_prime, b_prime);
  return r.a_ratio >= 1.0 / (cfg.C0 * K) && r.b_ratio >= 1.0 / (cfg.C0 * K) &&
         r.sum_ratio <= cfg.C0 * std::pow(K, cfg.c0);
}

namespace {

struct Candidate {
  GridSet1D a;
  GridSet1D b;
};

// Popularity and path-counting candidates, one per choice of pivot b0 (pivots by degree).
std::vector<Candidate> path_candidates(const PairGraph& g, double K) {
  const auto na = static_cast<double>(g.a_set.count());
  const auto nb = static_cast<double>(g.b_set.count());
  const auto ne = static_cast<double>(g.edges.size());
  const double density = ne / (na * nb);

  std::vector<std::vector<std::int64_t>> nbr_a(static_cast<std::size_t>(g.a_set.cells()));
  std::vector<std::vector<std::int64_t>> nbr_b(static_cast<std::size_t>(g.b_set.cells()));
  for (auto [i, j] : g.edges) {
    nbr_a[static_cast<std::size_t>(i)].push_back(j);
    nbr_b[static_cast<std::size_t>(j)].push_back(i);
  }

  GridSet1D popular = g.a_set;
  for (auto i : g.a_set.members())
    if (static_cast<double>(nbr_a[static_cast<std::size_t>(i)].size()) < ne / (2.0 * na)) popular.erase(i);

  auto codegree = [&](std::int64_t x, std::int64_t y) {
    const auto& u = nbr_a[static_cast<std::size_t>(x)];
    const auto& v = nbr_a[static_cast<std::size_t>(y)];
    std::int64_t c = 0;
    std::size_t p = 0, q = 0;
    while (p < u.size() && q < v.size()) {
      if (u[p] == v[q]) {
        ++c;
        ++p;
        ++q;
      } else if (u[p] < v[q]) {
        ++p;
      } else {
        ++q;
      }
    }
    return c;
  };

  std::vector<std::int64_t> pivots = g.b_set.members();
  std::stable_sort(pivots.begin(), pivots.end(), [&](std::int64_t x, std::int64_t y) {
    return nbr_b[static_cast<std::size_t>(x)].size() > nbr_b[static_cast<std::size_t>(y)].size();
  });

  const double codegree_floor = density * density * nb / (8.0 * K);
  std::vector<Candidate> out;
  for (auto b0 : pivots) {
    std::vector<std::int64_t> x;
    for (auto i : nbr_b[static_cast<std::size_t>(b0)])
      if (popular.contains(i)) x.push_back(i);
    if (x.empty()) continue;
    // Drop vertices with many low-codegree partners: those break the length-3 path count.
    GridSet1D a_prime(g.a_set.m(), g.a_set.origin(), g.a_set.cells());
    for (auto u : x) {
      std::size_t bad = 0;
      for (auto v : x)
        if (u != v && static_cast<double>(codegree(u, v)) < codegree_floor) ++bad;
      if (static_cast<double>(bad) <= static_cast<double>(x.size()) / 4.0) a_prime.insert(u);
    }
    if (a_prime.empty()) continue;
    GridSet1D b_prime(g.b_set.m(), g.b_set.origin(), g.b_set.cells());
    const double need = density * static_cast<double>(a_prime.count()) / 2.0;
    for (auto j : g.b_set.members()) {
      std::int64_t hits = 0;
      for (auto i : nbr_b[static_cast<std::size_t>(j)])
        if (a_prime.contains(i)) ++hits;
      if (static_cast<double>(hits) >= need && hits > 0) b_prime.insert(j);
    }
    if (b_prime.empty()) continue;
    out.push_back({std::move(a_prime), std::move(b_prime)});
  }
  return out;
}

}  // namespace

BsgResult bsg_extract(const PairGraph& g, double K, const BsgConfig& cfg) {
  if (!(K >= 1.0)) throw HypothesisViolation("K >= 1 required");
  const auto na = static_cast<double>(g.a_set.count());
  const auto nb = static_cast<double>(g.b_set.count());
  const auto ne = static_cast<double>(g.edges.size());
  if (!(ne > na * nb / K))
    throw HypothesisViolation("#(G) > #(A)#(B)/K fails: " + std::to_string(ne) + " <= " + std::to_string(na * nb / K));
  const auto restricted = static_cast<double>(restricted_sumset(g).count());
  if (!(restricted <= K * std::sqrt(na * nb)))
    throw HypothesisViolation("#(A +_G B) <= K #(A)^1/2 #(B)^1/2 fails: " + std::to_string(restricted) + " > " +
                              std::to_string(K * std::sqrt(na * nb)));

  auto candidates = path_candidates(g, K);
  for (auto& c : candidates) {
    if (cfg.force_exhaustive) break;
    if (bsg_contract_holds(g, K, c.a, c.b, cfg)) {
      BsgResult r{c.a, c.b, K, bsg_ratios(g, c.a, c.b), false};
      return r;
    }
  }
  if (static_cast<double>(cfg.exhaustive_limit) < na * nb)
    throw HypothesisViolation("no contract-satisfying pair found and the graph is too large for exhaustive search");

  // Exhaustive scan over the candidate family plus the trivial pair; the best certified pair wins.
  candidates.push_back({g.a_set, g.b_set});
  std::optional<BsgResult> best;
  for (auto& c : candidates) {
    if (!bsg_contract_holds(g, K, c.a, c.b, cfg)) continue;
    BsgAchieved r = bsg_ratios(g, c.a, c.b);
    if (!best || r.sum_ratio < best->achieved.sum_ratio) best = BsgResult{c.a, c.b, K, r, true};
  }
  if (!best) throw HypothesisViolation("exhaustive search found no pair meeting the output inequalities");
  return *best;
}

// ---- convolution peak and A_z ---------------------------------------------------------------

ConvolutionPeak convolution_peak(const GridSet1D& a) {
  if (a.empty()) throw DomainError("convolution_peak needs a nonempty set");
  const auto r = representation_counts(a, a);
  ConvolutionPeak best;
  for (std::size_t z = 0; z < r.size(); ++z)
    if (r[z] > best.count) best = {static_cast<std::int64_t>(z), r[z]};
  return best;
}

Rational peak_value(const GridSet1D& a, std::int64_t z) {
  return from_grid_index(2 * a.origin() + z + 1, a.m());
}

GridSet1D az_construct(const GridSet1D& a, const Rational& z) {
  if (a.empty()) throw DomainError("az_construct needs a nonempty set");
  if (a.lo() < Rational(1, 4) || a.hi() > Rational(1, 2)) throw DomainError("az_construct needs A inside [1/4, 1/2)");
  if (z < Rational(1, 2) || z >= Rational(1)) throw DomainError("z must lie in [1/2, 1)");
  const Rational inv = Rational(1) / z;
  const GridSet1D scaled = reframe(affine_image(a, inv, 0), 0, 1);
  const GridSet1D reflected = reframe(affine_image(a, -inv, 1), 0, 1);
  return set_intersect(scaled, reflected);
}

AzContainment az_check(const GridSet1D& a, const Rational& z, const GridSet1D& az, std::int64_t slack) {
  const GridSet1D target =
      inflate(reframe(affine_image(productset(a, a), Rational(1) / (z * z), 0), 0, 1), slack);
  AzContainment out;
  out.product_contained = az.empty() || is_subset(reframe(productset(az, az), 0, 1), target);
  const GridSet1D flipped = reframe(affine_image(az, -1, 1), 0, 1);
  out.complement_contained = az.empty() || is_subset(reframe(productset(flipped, flipped), 0, 1), target);
  return out;
}

// ---- files ---------------------------------------------------------------------------------

void write_pairgraph(std::ostream& out, const PairGraph& g) {
  out << "pairgraph m=" << g.a_set.m() << "\n";
  for (auto [i, j] : g.edges) out << i << " " << j << "\n";
}

namespace {

std::pair<int, std::vector<std::pair<std::int64_t, std::int64_t>>> read_edges(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing pairgraph header");
  std::istringstream hs(line);
  std::string tag, mtok, extra;
  hs >> tag >> mtok;
  if (tag != "pairgraph" || mtok.empty() || (hs >> extra)) throw ParseError("bad pairgraph header: '" + line + "'");
  int m = 0;
  try {
    m = std::stoi(header_value(mtok, "m"));
  } catch (const std::logic_error&) {
    throw ParseError("bad pairgraph resolution");
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::int64_t i, j;
    if (!(ls >> i >> j) || (ls >> extra)) throw ParseError("bad edge line: '" + line + "'");
    edges.emplace_back(i, j);
  }
  return {m, std::move(edges)};
}

}  // namespace

PairGraph read_pairgraph(std::istream& in, const GridSet1D& a, const GridSet1D& b) {
  auto [m, edges] = read_edges(in);
  if (m != a.m() || m != b.m()) throw ResolutionMismatch("pairgraph resolution differs from the vertex sets");
  return PairGraph::make(a, b, std::move(edges));
}

PairGraph read_pairgraph(std::istream& in) {
  auto [m, edges] = read_edges(in);
  GridSet1D a = GridSet1D::on(m, 0, 1), b = GridSet1D::on(m, 0, 1);
  for (auto [i, j] : edges) {
    if (!a.in_range(i) || !b.in_range(j)) throw ParseError("edge endpoint outside [0, 1)");
    a.insert(i);
    b.insert(j);
  }
  return PairGraph::make(std::move(a), std::move(b), std::move(edges));
}

}  // namespace tubekit
