#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hyperis/graph_canon.hpp"
#include "hyperis/hypercube.hpp"
#include "hyperis/parallel.hpp"
#include "hyperis/symbolic/interpolate.hpp"

namespace hyperis {

/// Node cap for enumerations; exceeded caps raise BudgetExceeded.
class Budget {
 public:
  explicit Budget(std::uint64_t max_nodes = 200'000'000) : max_(max_nodes) {}
  void charge(std::uint64_t n = 1) {
    if (used_.fetch_add(n, std::memory_order_relaxed) + n > max_)
      throw BudgetExceeded("enumeration budget of " + std::to_string(max_) + " nodes exceeded");
  }
  std::uint64_t used() const { return used_.load(); }
  std::uint64_t limit() const { return max_; }

 private:
  std::uint64_t max_;
  std::atomic<std::uint64_t> used_{0};
};

struct Polymer {
  VertexSet support;
  std::size_t nbhd_size = 0;
  std::size_t closure_size = 0;
  friend bool operator==(const Polymer&, const Polymer&) = default;
};

/// The vertex used as translation root for rooted enumerations (odd, weight one).
inline constexpr Vertex kRoot = 1;

/// Q_d²[S] with vertices labelled in the sorted order of S.
inline SmallGraph square_graph(const VertexSet& s) {
  require(s.size() <= 64, "square_graph supports at most 64 vertices");
  SmallGraph g(static_cast<int>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (hamming(s[a], s[b]) == 2) g.add_edge(static_cast<int>(a), static_cast<int>(b));
  return g;
}

/// |[S]|, skipping the computation when d > 2|S| (then [S] = S: a vertex outside S meets at most 2|S| < d of N(S)).
inline std::size_t closure_size(const VertexSet& s, Dim d) {
  if (static_cast<std::size_t>(d.value()) > 2 * s.size()) return s.size();
  return closure(s, d).size();
}

/// Both polymer conditions: S connected in Q_d², and |[S]| <= N/2.
inline bool is_polymer(const VertexSet& s, Dim d) {
  if (s.empty()) return false;
  uniform_parity(s);
  if (!square_connected(s, d)) return false;
  return closure_size(s, d) <= d.N() / 2;
}

inline Polymer make_polymer(VertexSet s, Dim d) {
  canonicalize(s);
  require(is_polymer(s, d), "vertex set is not a polymer");
  Polymer p;
  p.nbhd_size = neighborhood_size(s, d);
  p.closure_size = closure(s, d).size();
  p.support = std::move(s);
  return p;
}

/// Refined defect type: isomorphism class of Q_d²[S], size, and deficiency c = d|S| - |N(S)|.
struct DefectType {
  std::string cert;
  unsigned size = 0;
  long deficiency = 0;
  bool canonical = true;

  std::string key() const { return cert + "@" + std::to_string(deficiency); }
  /// |N(S)| of any member at dimension d.
  long nbhd_at(int d) const { return static_cast<long>(size) * d - deficiency; }

  friend bool operator==(const DefectType& a, const DefectType& b) {
    return a.size == b.size && a.cert == b.cert && a.deficiency == b.deficiency;
  }
  friend bool operator<(const DefectType& a, const DefectType& b) {
    if (a.size != b.size) return a.size < b.size;
    if (a.deficiency != b.deficiency) return a.deficiency < b.deficiency;
    return a.cert < b.cert;
  }
};

/// Classify a Q_d²-connected vertex set of uniform parity (either side).
inline DefectType classify(const VertexSet& s, Dim d) {
  require(!s.empty(), "cannot classify an empty set");
  require(square_connected(s, d), "classify expects a set connected in Q_d^2");
  GraphCertificate c = certificate(square_graph(s));
  DefectType t;
  t.cert = std::move(c.text);
  t.canonical = c.canonical;
  t.size = static_cast<unsigned>(s.size());
  t.deficiency = static_cast<long>(s.size()) * d.value() - static_cast<long>(neighborhood_size(s, d));
  return t;
}

namespace detail {

/// ESU-style growth: visits every Q_d²-connected set containing `start` exactly once, up to
/// max_size. With above_start_only, only sets whose minimum is `start` are visited.
class ConnectedSetWalker {
 public:
  using Visit = std::function<void(const std::vector<Vertex>&)>;

  ConnectedSetWalker(Dim d, int max_size, bool above_start_only, Budget& budget)
      : d_(d), max_size_(max_size), above_(above_start_only), budget_(budget) {}

  /// First-level extension list for `start`.
  std::vector<Vertex> initial_extension(Vertex start) const {
    std::vector<Vertex> ext;
    for (Vertex u : square_neighbors(start, d_))
      if (!above_ || u > start) ext.push_back(u);
    return ext;
  }

  void run(Vertex start, const Visit& visit) {
    std::vector<Vertex> sub{start};
    budget_.charge();
    visit(sub);
    if (max_size_ <= 1) return;
    auto ext = initial_extension(start);
    for (std::size_t i = 0; i < ext.size(); ++i) run_branch(start, ext, i, visit);
  }

  /// Subtree that adds ext[i] to {start} (branch index i of the first level).
  void run_branch(Vertex start, const std::vector<Vertex>& ext, std::size_t i, const Visit& visit) {
    std::vector<Vertex> sub{start};
    std::vector<Vertex> rest(ext.begin() + static_cast<long>(i) + 1, ext.end());
    extend(sub, rest, ext[i], start, visit);
  }

 private:
  bool excluded(Vertex u, const std::vector<Vertex>& sub) const {
    for (Vertex p : sub)
      if (u == p || hamming(u, p) == 2) return true;
    return false;
  }

  void extend(std::vector<Vertex>& sub, std::vector<Vertex> ext, Vertex w, Vertex start, const Visit& visit) {
    for (Vertex u : square_neighbors(w, d_))
      if ((!above_ || u > start) && !excluded(u, sub)) ext.push_back(u);
    sub.push_back(w);
    budget_.charge();
    visit(sub);
    if (static_cast<int>(sub.size()) < max_size_) {
      for (std::size_t i = 0; i < ext.size(); ++i) {
        std::vector<Vertex> rest(ext.begin() + static_cast<long>(i) + 1, ext.end());
        extend(sub, std::move(rest), ext[i], start, visit);
      }
    }
    sub.pop_back();
  }

  Dim d_;
  int max_size_;
  bool above_;
  Budget& budget_;
};

}  // namespace detail

/// All odd polymers with |S| <= max_size, each once, sorted by (size, support).
inline std::vector<Polymer> enumerate_polymers(Dim d, int max_size, Budget&& budget = Budget()) {
  require(d.value() >= 2, "enumerate_polymers needs d >= 2");
  require(max_size >= 1, "max_size must be >= 1");
  require(d.value() <= 24, "enumerate_polymers supports d <= 24");
  std::vector<Polymer> out;
  detail::ConnectedSetWalker walker(d, max_size, true, budget);
  for (Vertex r : parity_class(Parity::odd, d)) {
    walker.run(r, [&](const std::vector<Vertex>& sub) {
      VertexSet s(sub.begin(), sub.end());
      canonicalize(s);
      if (closure_size(s, d) > d.N() / 2) return;
      Polymer p;
      p.nbhd_size = neighborhood_size(s, d);
      p.closure_size = closure_size(s, d);
      p.support = std::move(s);
      out.push_back(std::move(p));
    });
  }
  std::sort(out.begin(), out.end(), [](const Polymer& a, const Polymer& b) {
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return a.support < b.support;
  });
  return out;
}

struct CensusEntry {
  DefectType type;
  BigInt count;             // n_T
  std::uint64_t rooted = 0;  // polymers of this type containing the root vertex
};

/// Per-type polymer counts at a fixed dimension.
struct Census {
  int d = 0;
  int max_size = 0;
  std::map<DefectType, CensusEntry> entries;
  std::vector<std::string> warnings;  // isomorphism classes that split by deficiency

  const CensusEntry* find(const DefectType& t) const {
    auto it = entries.find(t);
    return it == entries.end() ? nullptr : &it->second;
  }
  BigInt count(const DefectType& t) const {
    const auto* e = find(t);
    return e ? e->count : BigInt(0);
  }
  /// Σ n_T over types of the given size.
  BigInt total_of_size(unsigned size) const {
    BigInt s = 0;
    for (const auto& [t, e] : entries)
      if (t.size == size) s += e.count;
    return s;
  }
};

/// w_T = λ^{|S|} (1+λ)^{-|N(S)|}.
inline Rat type_weight(const DefectType& t, int d, const Rat& lambda) {
  return pow(lambda, t.size) * pow(Rat(1) + lambda, -t.nbhd_at(d));
}

namespace detail {

inline void record_splits(Census& c) {
  std::map<std::string, std::set<long>> by_cert;
  for (const auto& [t, e] : c.entries) by_cert[t.cert].insert(t.deficiency);
  for (const auto& [cert, defs] : by_cert) {
    if (defs.size() < 2) continue;
    std::string w = "isomorphism class " + cert + " splits into deficiencies";
    for (long x : defs) w += " " + std::to_string(x);
    c.warnings.push_back(std::move(w));
  }
}

}  // namespace detail

/// Census by rooted enumeration: n_T = N · (#type-T polymers containing the root) / |S|.
/// Every polymer of size s contains s vertices and even translations act transitively on
/// the odd side, so this double count is exact with no stabilizer analysis.
inline Census census(Dim d, int max_size, unsigned threads = 1, Budget&& budget = Budget(),
                     int only_size = 0) {
  require(d.value() >= 2, "census needs d >= 2");
  require(max_size >= 1, "max_size must be >= 1");
  require(d.value() <= 24, "census supports d <= 24");
  detail::ConnectedSetWalker walker(d, max_size, false, budget);
  auto ext = walker.initial_extension(kRoot);

  using Local = std::map<DefectType, std::uint64_t>;
  std::vector<Local> parts(ext.size() + 1);
  auto visit_into = [&](Local& acc) {
    return [&, accp = &acc](const std::vector<Vertex>& sub) {
      if (only_size && static_cast<int>(sub.size()) != only_size) return;
      VertexSet s(sub.begin(), sub.end());
      canonicalize(s);
      if (closure_size(s, d) > d.N() / 2) return;
      ++(*accp)[classify(s, d)];
    };
  };
  // Slot 0 is the root alone; slots 1.. are first-level branches.
  {
    std::vector<Vertex> sub{kRoot};
    budget.charge();
    visit_into(parts[0])(sub);
  }
  if (max_size > 1)
    parallel_for(ext.size(), threads, [&](std::size_t i) { walker.run_branch(kRoot, ext, i, visit_into(parts[i + 1])); });

  Census c;
  c.d = d.value();
  c.max_size = max_size;
  for (const auto& part : parts)
    for (const auto& [t, n] : part) {
      auto& e = c.entries[t];
      e.type = t;
      e.rooted += n;
    }
  for (auto& [t, e] : c.entries) {
    BigInt num = BigInt(d.N()) * e.rooted;
    if (num % t.size != 0) throw Error("census: rooted count not divisible by polymer size for type " + t.key());
    e.count = num / t.size;
  }
  detail::record_splits(c);
  return c;
}

/// n_T(d)/N as a polynomial in d for every type of size <= max_size.
struct SymbolicCensus {
  int max_size = 0;
  std::map<DefectType, sym::Poly> per_vertex;  // n_T(d) / N
  std::map<unsigned, std::vector<int>> grid;   // sampled d values per size
  std::vector<std::string> warnings;

  /// Evaluate n_T at an integer d.
  BigInt count(const DefectType& t, int d) const {
    auto it = per_vertex.find(t);
    if (it == per_vertex.end()) return 0;
    sym::Bindings b;
    b.set(sym::Var::d, Rat(d));
    Rat v = it->second.evaluate(b) * Rat(Dim(d).N());
    if (denominator_of(v) != 1) throw Error("symbolic census gives a non-integer count");
    return numerator_of(v);
  }
};

/// Smallest d at which every size-k shape embeds and closures are trivial.
inline int census_grid_start(int size) { return 2 * size + 1; }
/// Degree of n_T(d)/N in d for size-k types (a size-k shape spans at most 2(k-1) coordinates).
inline unsigned census_degree_bound(int size) { return static_cast<unsigned>(2 * (size - 1)); }

inline SymbolicCensus symbolic_census(int max_size, unsigned threads = 1, std::uint64_t node_budget = 2'000'000'000) {
  require(max_size >= 1 && max_size <= 5, "symbolic_census supports 1 <= max_size <= 5");
  SymbolicCensus out;
  out.max_size = max_size;
  for (int k = 1; k <= max_size; ++k) {
    const unsigned deg = census_degree_bound(k);
    const int d0 = census_grid_start(k);
    std::vector<int> ds;
    for (int d = d0; d <= d0 + static_cast<int>(deg) + 1; ++d) ds.push_back(d);
    out.grid[static_cast<unsigned>(k)] = ds;
    std::vector<Census> cs;
    std::set<DefectType> types;
    for (int d : ds) {
      cs.push_back(census(Dim(d), k, threads, Budget(node_budget), k));
      for (const auto& [t, e] : cs.back().entries) types.insert(t);
      for (const auto& w : cs.back().warnings) out.warnings.push_back("d=" + std::to_string(d) + ": " + w);
    }
    for (const auto& t : types) {
      std::vector<sym::Sample> samples;
      for (std::size_t i = 0; i < ds.size(); ++i)
        samples.push_back({Rat(ds[i]), sym::Poly(Rat(cs[i].count(t), BigInt(Dim(ds[i]).N())))});
      try {
        out.per_vertex[t] = sym::interpolate_poly(samples, deg);
      } catch (const sym::InterpolationError& e) {
        throw sym::InterpolationError("type " + t.key() + ": " + e.what());
      }
    }
  }
  return out;
}

}  // namespace hyperis
