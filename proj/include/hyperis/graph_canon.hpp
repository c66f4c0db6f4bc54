#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "hyperis/numeric.hpp"

namespace hyperis {

/// Simple undirected graph on at most 64 vertices, adjacency stored as bit rows.
struct SmallGraph {
  int n = 0;
  std::vector<std::uint64_t> adj;

  explicit SmallGraph(int vertices = 0) : n(vertices), adj(static_cast<std::size_t>(vertices), 0) {
    require(vertices >= 0 && vertices <= 64, "SmallGraph supports at most 64 vertices");
  }

  void add_edge(int a, int b) {
    require(a != b, "SmallGraph has no loops");
    adj[a] |= std::uint64_t{1} << b;
    adj[b] |= std::uint64_t{1} << a;
  }
  bool has_edge(int a, int b) const { return (adj[a] >> b) & 1u; }
  int degree(int v) const { return std::popcount(adj[v]); }
  int edge_count() const {
    int e = 0;
    for (int v = 0; v < n; ++v) e += degree(v);
    return e / 2;
  }
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (has_edge(a, b)) out.emplace_back(a, b);
    return out;
  }
  bool connected() const {
    if (n == 0) return false;
    std::uint64_t seen = 1, frontier = 1;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
      frontier = next & ~seen;
      seen |= next;
    }
    return std::popcount(seen) == n;
  }

  /// Upper-triangle adjacency bits, row-major over pairs (i < j).
  std::string upper_bits() const {
    std::string s;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s.push_back(has_edge(i, j) ? '1' : '0');
    return s;
  }
};

/// Largest vertex count canonized exactly.
inline constexpr int kMaxCanonicalVertices = 8;

struct GraphCertificate {
  std::string text;  // "n:bits" when exact
  bool canonical = true;
};

namespace detail {

inline GraphCertificate compute_certificate(const SmallGraph& g) {
  if (g.n > kMaxCanonicalVertices) {
    std::vector<int> deg(g.n);
    for (int v = 0; v < g.n; ++v) deg[v] = g.degree(v);
    std::sort(deg.rbegin(), deg.rend());
    std::string t = "nc" + std::to_string(g.n) + ":e" + std::to_string(g.edge_count()) + ":deg";
    for (int x : deg) t += "." + std::to_string(x);
    return {t, false};
  }
  // Lexicographically largest column-major upper-triangle string over all relabelings.
  // Fixing the first i labels fixes the first i(i-1)/2 characters, so smaller prefixes are pruned.
  std::string best;
  std::string cur;
  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(g.n));
  std::uint64_t used = 0;
  const auto search = [&](auto&& self) -> void {
    const int i = static_cast<int>(perm.size());
    if (i == g.n) {
      if (cur > best) best = cur;
      return;
    }
    const std::size_t start = cur.size();
    for (int v = 0; v < g.n; ++v) {
      if ((used >> v) & 1u) continue;
      for (int j = 0; j < i; ++j) cur.push_back(g.has_edge(perm[j], v) ? '1' : '0');
      if (best.empty() || cur.compare(0, cur.size(), best, 0, cur.size()) >= 0) {
        perm.push_back(v);
        used |= std::uint64_t{1} << v;
        self(self);
        used &= ~(std::uint64_t{1} << v);
        perm.pop_back();
      }
      cur.resize(start);
    }
  };
  search(search);
  return {std::to_string(g.n) + ":" + best, true};
}

}  // namespace detail

/// Canonical certificate; equal certificates iff isomorphic (exact up to 8 vertices).
/// Larger graphs get an invariant-based text flagged as non-canonical.
inline GraphCertificate certificate(const SmallGraph& g) {
  static std::mutex mu;
  static std::map<std::pair<int, std::string>, GraphCertificate> cache;
  auto key = std::make_pair(g.n, g.upper_bits());
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  GraphCertificate c = detail::compute_certificate(g);
  std::lock_guard lock(mu);
  if (g.n <= kMaxCanonicalVertices) cache.emplace(std::move(key), c);
  return c;
}

}  // namespace hyperis
