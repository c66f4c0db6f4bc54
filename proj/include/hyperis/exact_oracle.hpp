#pragma once

#include <array>
#include <bit>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "hyperis/parallel.hpp"
#include "hyperis/polymers.hpp"

namespace hyperis {

/// Exact i_m(Q_d) for m = 0..N (larger sizes are impossible).
struct SizeProfile {
  int d = 0;
  std::vector<BigInt> counts;

  BigInt total() const {
    BigInt s = 0;
    for (const auto& c : counts) s += c;
    return s;
  }
  /// Z(λ) = Σ_m i_m λ^m.
  Rat partition_function(const Rat& lambda) const {
    Rat z = 0;
    for (std::size_t m = counts.size(); m-- > 0;) z = z * lambda + Rat(counts[m]);
    return z;
  }
  /// E|I| = λ Z'(λ) / Z(λ).
  Rat mean_size(const Rat& lambda) const {
    Rat num = 0;
    for (std::size_t m = counts.size(); m-- > 0;) num = num * lambda + Rat(counts[m]) * Rat(m);
    return num / partition_function(lambda);
  }
};

namespace detail {

inline constexpr int kMaxListDim = 5;

/// Keep m = 0..N; a larger independent set of Q_d cannot exist.
inline void trim_profile(SizeProfile& p) {
  const std::size_t keep = Dim(p.d).N() + 1;
  for (std::size_t m = keep; m < p.counts.size(); ++m)
    if (p.counts[m] != 0) throw Error("independent set larger than N found");
  p.counts.resize(keep);
}

inline std::vector<std::uint64_t> build_independent_sets(int d, const std::vector<std::uint64_t>& lower) {
  const unsigned shift = 1u << (d - 1);
  std::vector<std::uint64_t> out;
  for (std::uint64_t a : lower)
    for (std::uint64_t b : lower)
      if ((a & b) == 0) out.push_back(a | (b << shift));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// All independent sets of Q_d as vertex bitmasks (bit v set iff v ∈ I), d <= 5.
inline const std::vector<std::uint64_t>& independent_sets(int d) {
  require(d >= 0 && d <= detail::kMaxListDim, "dimension too large for exact oracle");
  static std::mutex mu;
  static std::array<std::vector<std::uint64_t>, detail::kMaxListDim + 1> cache;
  std::lock_guard lock(mu);
  if (cache[0].empty()) cache[0] = {0, 1};
  for (int k = 1; k <= d; ++k)
    if (cache[k].empty()) cache[k] = detail::build_independent_sets(k, cache[k - 1]);
  return cache[d];
}

/// Layered transfer: an independent set of Q_d is a disjoint pair (A, B) of independent sets of
/// Q_{d-1}, placed on the two facets. d = 6 needs allow_d6 (about 6.5e10 pair tests).
inline SizeProfile size_profile(Dim dim, bool allow_d6 = false, unsigned threads = 1) {
  const int d = dim.value();
  require(d <= 5 || (d == 6 && allow_d6), "dimension too large for exact oracle");
  const auto& lower = independent_sets(d - 1);
  const std::size_t V = std::size_t{1} << d;
  const std::size_t chunk = 256;
  const std::size_t nchunks = (lower.size() + chunk - 1) / chunk;
  std::vector<std::vector<std::uint64_t>> hist(nchunks, std::vector<std::uint64_t>(V + 1, 0));
  parallel_for(nchunks, threads, [&](std::size_t c) {
    auto& h = hist[c];
    const std::size_t end = std::min(lower.size(), (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const std::uint64_t a = lower[i];
      const int pa = std::popcount(a);
      for (std::uint64_t b : lower)
        if ((a & b) == 0) ++h[static_cast<std::size_t>(pa + std::popcount(b))];
    }
  });
  SizeProfile p;
  p.d = d;
  p.counts.assign(V + 1, BigInt(0));
  for (const auto& h : hist)
    for (std::size_t m = 0; m <= V; ++m) p.counts[m] += h[m];
  detail::trim_profile(p);
  return p;
}

/// Second route: test every one of the 2^(2^d) vertex subsets, d <= 4.
inline SizeProfile exhaustive_profile(Dim dim) {
  const int d = dim.value();
  require(d <= 4, "exhaustive enumeration supports d <= 4");
  const unsigned V = 1u << d;
  // Edge v ~ v^(1<<i) with bit i of v clear: lo_mask[i] marks those v.
  std::vector<std::uint64_t> lo_mask(d, 0);
  for (int i = 0; i < d; ++i)
    for (unsigned v = 0; v < V; ++v)
      if (!((v >> i) & 1u)) lo_mask[i] |= std::uint64_t{1} << v;
  SizeProfile p;
  p.d = d;
  std::vector<std::uint64_t> h(V + 1, 0);
  const std::uint64_t limit = std::uint64_t{1} << V;
  for (std::uint64_t s = 0; s < limit; ++s) {
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) ok = ((s & lo_mask[i]) & (s >> (1u << i))) == 0;
    if (ok) ++h[static_cast<std::size_t>(std::popcount(s))];
  }
  p.counts.assign(V + 1, BigInt(0));
  for (unsigned m = 0; m <= V; ++m) p.counts[m] = h[m];
  detail::trim_profile(p);
  return p;
}

/// Size-generating polynomial (coefficient list in λ) of independent sets of Q_d avoiding `removed`.
inline std::vector<BigInt> induced_independence_poly(const VertexSet& removed, Dim dim) {
  const int d = dim.value();
  require(d <= 5, "dimension too large for exact oracle");
  std::uint64_t mask = 0;
  for (Vertex v : removed) {
    check_vertex(v, dim);
    mask |= std::uint64_t{1} << v;
  }
  std::vector<BigInt> poly(1, BigInt(0));
  for (std::uint64_t s : independent_sets(d)) {
    if (s & mask) continue;
    auto m = static_cast<std::size_t>(std::popcount(s));
    if (poly.size() <= m) poly.resize(m + 1, BigInt(0));
    poly[m] += 1;
  }
  return poly;
}

/// Exact odd polymer model for tiny d.
struct OddModelProfile {
  int d = 0;
  std::vector<std::vector<VertexSet>> configs;      // Ω_O, each Γ listed by supports
  std::map<std::pair<int, int>, BigInt> terms;      // (‖Γ‖, |N(Γ)|) -> multiplicity
  std::vector<BigInt> z_odd;                        // coefficients of Z_O(λ)

  std::uint64_t N() const { return Dim(d).N(); }
  /// Ξ_O(λ) = Σ_Γ λ^{‖Γ‖} (1+λ)^{-|N(Γ)|}.
  Rat xi(const Rat& lambda) const {
    Rat s = 0;
    for (const auto& [ab, c] : terms) s += Rat(c) * pow(lambda, ab.first) * pow(Rat(1) + lambda, -ab.second);
    return s;
  }
  Rat z(const Rat& lambda) const {
    Rat s = 0;
    for (std::size_t m = z_odd.size(); m-- > 0;) s = s * lambda + Rat(z_odd[m]);
    return s;
  }
  /// E_{O,λ}|I| = λ Z_O'(λ) / Z_O(λ).
  Rat mean_size(const Rat& lambda) const {
    Rat num = 0;
    for (std::size_t m = z_odd.size(); m-- > 0;) num = num * lambda + Rat(z_odd[m]) * Rat(m);
    return num / z(lambda);
  }
};

namespace detail {

/// Coefficients of λ^a (1+λ)^e, accumulated into `poly` with multiplicity c.
inline void add_shifted_binomial(std::vector<BigInt>& poly, int a, int e, const BigInt& c) {
  if (poly.size() < static_cast<std::size_t>(a + e + 1)) poly.resize(static_cast<std::size_t>(a + e + 1), BigInt(0));
  for (int i = 0; i <= e; ++i) poly[static_cast<std::size_t>(a + i)] += c * binomial(e, i);
}

}  // namespace detail

/// Enumerates every polymer and every pairwise-compatible collection (distance > 2).
inline OddModelProfile odd_model_exact(Dim dim) {
  const int d = dim.value();
  require(d >= 2 && d <= 4, "dimension too large for exact odd polymer model (d <= 4)");
  const auto polymers = enumerate_polymers(dim, static_cast<int>(dim.N()));
  const std::size_t n = polymers.size();
  auto compatible = [&](std::size_t i, std::size_t j) {
    for (Vertex a : polymers[i].support)
      for (Vertex b : polymers[j].support)
        if (hamming(a, b) <= 2) return false;
    return true;
  };
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ok[i][j] = i != j && compatible(i, j);

  OddModelProfile out;
  out.d = d;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t from, int size, int nb) {
    std::vector<VertexSet> cfg;
    for (std::size_t i : chosen) cfg.push_back(polymers[i].support);
    out.configs.push_back(std::move(cfg));
    out.terms[{size, nb}] += 1;
    for (std::size_t i = from; i < n; ++i) {
      bool fits = true;
      for (std::size_t j : chosen) fits = fits && ok[i][j];
      if (!fits) continue;
      chosen.push_back(i);
      rec(i + 1, size + static_cast<int>(polymers[i].support.size()), nb + static_cast<int>(polymers[i].nbhd_size));
      chosen.pop_back();
    }
  };
  rec(0, 0, 0);
  const int N = static_cast<int>(dim.N());
  out.z_odd.assign(1, BigInt(0));
  for (const auto& [ab, c] : out.terms) {
    require(ab.second <= N, "compatible neighbourhoods exceed the even side");
    detail::add_shifted_binomial(out.z_odd, ab.first, N - ab.second, c);
  }
  return out;
}

/// Independent check of Z_O: independent sets whose odd part splits into polymers only.
inline std::vector<BigInt> achievable_odd_sets_poly(Dim dim) {
  const int d = dim.value();
  require(d >= 2 && d <= 4, "achievable_odd_sets_poly supports 2 <= d <= 4");
  std::vector<BigInt> poly(1, BigInt(0));
  for (std::uint64_t s : independent_sets(d)) {
    VertexSet odd;
    for (std::uint64_t t = s; t; t &= t - 1) {
      Vertex v = static_cast<Vertex>(std::countr_zero(t));
      if (parity(v) == Parity::odd) odd.push_back(v);
    }
    bool ok = true;
    for (const auto& comp : square_components(odd, dim)) ok = ok && is_polymer(comp, dim);
    if (!ok) continue;
    auto m = static_cast<std::size_t>(std::popcount(s));
    if (poly.size() <= m) poly.resize(m + 1, BigInt(0));
    poly[m] += 1;
  }
  return poly;
}

/// Exact hard-core quantities; `sets` is populated (full distribution) only for d <= 4.
struct HardcoreExact {
  int d = 0;
  Rat lambda;
  Rat Z;
  Rat mean_size;
  std::vector<std::uint64_t> sets;

  bool has_distribution() const { return !sets.empty(); }
  Rat weight(std::uint64_t s) const { return pow(lambda, std::popcount(s)); }
  Rat probability(std::uint64_t s) const { return weight(s) / Z; }
  /// μ_λ(event) for an event given as a predicate on the vertex bitmask.
  Rat probability_of(const std::function<bool(std::uint64_t)>& event) const {
    require(has_distribution(), "full distribution only available for d <= 4");
    Rat acc = 0;
    for (auto s : sets)
      if (event(s)) acc += weight(s);
    return acc / Z;
  }
  Rat expectation(const std::function<Rat(std::uint64_t)>& f) const {
    require(has_distribution(), "full distribution only available for d <= 4");
    Rat acc = 0;
    for (auto s : sets) acc += weight(s) * f(s);
    return acc / Z;
  }
};

inline HardcoreExact hardcore_exact(Dim dim, const Rat& lambda) {
  require(dim.value() <= 5, "dimension too large for exact oracle");
  require(lambda > 0, "fugacity must be positive");
  SizeProfile p = size_profile(dim);
  HardcoreExact h;
  h.d = dim.value();
  h.lambda = lambda;
  h.Z = p.partition_function(lambda);
  h.mean_size = p.mean_size(lambda);
  if (dim.value() <= 4) h.sets = independent_sets(dim.value());
  return h;
}

/// Vertices of a bitmask as a sorted VertexSet.
inline VertexSet mask_vertices(std::uint64_t s) {
  VertexSet out;
  for (; s; s &= s - 1) out.push_back(static_cast<Vertex>(std::countr_zero(s)));
  return out;
}

}  // namespace hyperis
