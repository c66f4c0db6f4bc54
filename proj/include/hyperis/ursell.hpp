#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "hyperis/graph_canon.hpp"
#include "hyperis/hypercube.hpp"

namespace hyperis {

inline constexpr int kMaxUrsellVertices = 8;
inline constexpr int kMaxUrsellEdges = 20;

namespace detail {

inline Rat ursell_subset_sum(const SmallGraph& h) {
  const auto edges = h.edges();
  const std::size_t m = edges.size();
  BigInt total = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    DisjointSets ds(static_cast<std::size_t>(h.n));
    int comps = h.n;
    for (std::size_t e = 0; e < m; ++e)
      if ((mask >> e) & 1u)
        if (ds.unite(static_cast<std::size_t>(edges[e].first), static_cast<std::size_t>(edges[e].second))) --comps;
    if (comps == 1) total += (std::popcount(mask) % 2 == 0) ? 1 : -1;
  }
  return Rat(total) / Rat(factorial(static_cast<unsigned>(h.n)));
}

}  // namespace detail

/// φ(H) = (1/|V|!) Σ_{A ⊆ E spanning connected} (-1)^{|A|}, by direct subset sum.
inline Rat ursell(const SmallGraph& h) {
  require(h.n >= 1, "Ursell function needs at least one vertex");
  require(h.n <= kMaxUrsellVertices, "Ursell function size cap exceeded (at most 8 vertices)");
  require(h.edge_count() <= kMaxUrsellEdges, "Ursell function size cap exceeded (at most 20 edges)");
  static std::mutex mu;
  static std::map<std::pair<int, std::string>, Rat> cache;
  auto key = std::make_pair(h.n, h.upper_bits());
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Rat v = detail::ursell_subset_sum(h);
  std::lock_guard lock(mu);
  cache.emplace(std::move(key), v);
  return v;
}

namespace detail {

/// Σ over spanning connected edge subsets of (-1)^{|A|} for a multigraph, by
/// deletion-contraction: S(G) = S(G - e) - S(G / e); a loop forces S = 0.
inline BigInt signed_connected_count(int n, std::vector<std::pair<int, int>> edges) {
  for (const auto& [a, b] : edges)
    if (a == b) return 0;
  if (edges.empty()) return n == 1 ? 1 : 0;
  auto [u, v] = edges.back();
  edges.pop_back();
  BigInt deleted = signed_connected_count(n, edges);
  // Contract v into u, then relabel the last vertex as v.
  std::vector<std::pair<int, int>> con;
  con.reserve(edges.size());
  auto relabel = [&](int x) {
    if (x == v) x = u;
    if (x == n - 1) x = v;
    return x;
  };
  for (auto [a, b] : edges) con.emplace_back(relabel(a), relabel(b));
  BigInt contracted = signed_connected_count(n - 1, std::move(con));
  return deleted - contracted;
}

}  // namespace detail

/// Independent route to φ(H) through recursive deletion-contraction.
inline Rat ursell_recursive(const SmallGraph& h) {
  require(h.n >= 1, "Ursell function needs at least one vertex");
  return Rat(detail::signed_connected_count(h.n, h.edges())) / Rat(factorial(static_cast<unsigned>(h.n)));
}

}  // namespace hyperis
