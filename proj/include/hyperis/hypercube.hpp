#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hyperis/numeric.hpp"

namespace hyperis {

/// Dimension of the hypercube Q_d. Each parity class has N = 2^(d-1) vertices.
class Dim {
 public:
  static constexpr int kMax = 63;

  explicit Dim(int d) : d_(d) {
    require(d >= 1 && d <= kMax, "dimension must satisfy 1 <= d <= 63, got " + std::to_string(d));
  }

  int value() const { return d_; }
  std::uint64_t N() const { return std::uint64_t{1} << (d_ - 1); }
  std::uint64_t vertex_count() const { return std::uint64_t{1} << d_; }
  friend bool operator==(Dim, Dim) = default;

 private:
  int d_;
};

/// A vertex of Q_d; coordinate i is bit i.
using Vertex = std::uint64_t;

/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

enum class Parity : int { even = 0, odd = 1 };

inline Parity parity(Vertex v) { return static_cast<Parity>(std::popcount(v) & 1); }

inline int hamming(Vertex a, Vertex b) { return std::popcount(a ^ b); }

inline void check_vertex(Vertex v, Dim d) {
  require(v < d.vertex_count(),
          "vertex " + std::to_string(v) + " outside Q_" + std::to_string(d.value()));
}

inline void canonicalize(VertexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

/// The d single-bit flips of v, ascending.
inline VertexSet neighbors(Vertex v, Dim d) {
  check_vertex(v, d);
  VertexSet out;
  out.reserve(d.value());
  for (int i = 0; i < d.value(); ++i) out.push_back(v ^ (Vertex{1} << i));
  canonicalize(out);
  return out;
}

/// Throws unless every member of s has the same parity. Returns that parity (odd for empty s).
inline Parity uniform_parity(const VertexSet& s) {
  if (s.empty()) return Parity::odd;
  Parity p = parity(s.front());
  for (Vertex v : s) require(parity(v) == p, "vertex set mixes parity classes");
  return p;
}

/// N(S): union of the neighborhoods of the members of S.
inline VertexSet neighborhood(const VertexSet& s, Dim d) {
  uniform_parity(s);
  VertexSet out;
  out.reserve(s.size() * d.value());
  for (Vertex v : s) {
    check_vertex(v, d);
    for (int i = 0; i < d.value(); ++i) out.push_back(v ^ (Vertex{1} << i));
  }
  canonicalize(out);
  return out;
}

inline std::size_t neighborhood_size(const VertexSet& s, Dim d) { return neighborhood(s, d).size(); }

/// Bipartite closure [S] = { v on the side of S : N(v) ⊆ N(S) }.
///
/// Any member of [S] shares a neighbor with S, so it lies within distance 2 of S;
/// only those candidates are tested.
inline VertexSet closure(const VertexSet& s, Dim d) {
  if (s.empty()) return {};
  const VertexSet ns = neighborhood(s, d);
  const int dd = d.value();
  VertexSet cand = s;
  for (Vertex v : s)
    for (int i = 0; i < dd; ++i)
      for (int j = i + 1; j < dd; ++j) cand.push_back(v ^ (Vertex{1} << i) ^ (Vertex{1} << j));
  canonicalize(cand);
  VertexSet out;
  for (Vertex c : cand) {
    bool inside = true;
    for (int i = 0; i < dd && inside; ++i) inside = contains(ns, c ^ (Vertex{1} << i));
    if (inside) out.push_back(c);
  }
  return out;
}

namespace detail {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace detail

/// Connected components of Q_d^2[S] (adjacency = Hamming distance exactly 2).
/// Components are returned sorted, ordered by their smallest member.
inline std::vector<VertexSet> square_components(const VertexSet& s, Dim d) {
  uniform_parity(s);
  for (Vertex v : s) check_vertex(v, d);
  detail::DisjointSets ds(s.size());
  const int dd = d.value();
  if (s.size() <= static_cast<std::size_t>(dd * dd)) {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (hamming(s[a], s[b]) == 2) ds.unite(a, b);
  } else {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (int i = 0; i < dd; ++i)
        for (int j = i + 1; j < dd; ++j) {
          Vertex u = s[a] ^ (Vertex{1} << i) ^ (Vertex{1} << j);
          auto it = std::lower_bound(s.begin(), s.end(), u);
          if (it != s.end() && *it == u) ds.unite(a, static_cast<std::size_t>(it - s.begin()));
        }
  }
  std::vector<VertexSet> comps;
  std::vector<std::size_t> slot(s.size(), SIZE_MAX);
  for (std::size_t a = 0; a < s.size(); ++a) {
    std::size_t r = ds.find(a);
    if (slot[r] == SIZE_MAX) {
      slot[r] = comps.size();
      comps.emplace_back();
    }
    comps[slot[r]].push_back(s[a]);
  }
  return comps;
}

inline bool square_connected(const VertexSet& s, Dim d) {
  return !s.empty() && square_components(s, d).size() == 1;
}

/// Vertices at Hamming distance exactly 2 from v.
inline VertexSet square_neighbors(Vertex v, Dim d) {
  check_vertex(v, d);
  VertexSet out;
  const int dd = d.value();
  out.reserve(static_cast<std::size_t>(dd) * (dd - 1) / 2);
  for (int i = 0; i < dd; ++i)
    for (int j = i + 1; j < dd; ++j) out.push_back(v ^ (Vertex{1} << i) ^ (Vertex{1} << j));
  canonicalize(out);
  return out;
}

/// Side holding the defect vertices: odd when |I∩O| <= |I∩E| (ties go to odd).
inline Parity defect_parity(std::uint64_t odd_count, std::uint64_t even_count) {
  return odd_count <= even_count ? Parity::odd : Parity::even;
}

/// All vertices of one parity class, ascending.
inline VertexSet parity_class(Parity p, Dim d) {
  VertexSet out;
  out.reserve(d.N());
  for (Vertex v = 0; v < d.vertex_count(); ++v)
    if (parity(v) == p) out.push_back(v);
  return out;
}

}  // namespace hyperis
