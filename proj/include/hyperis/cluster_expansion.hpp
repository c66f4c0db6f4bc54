#pragma once

#include <functional>
#include <vector>

#include "hyperis/polymers.hpp"
#include "hyperis/ursell.hpp"

namespace hyperis {

/// One cluster of an abstract polymer model, enumerated as a multiset.
struct AbstractCluster {
  std::vector<std::size_t> members;  // nondecreasing polymer indices, repeated per multiplicity
  unsigned total_size = 0;           // ‖Γ‖
  BigInt orderings;                  // (Σ mult)! / Π mult!
  Rat ursell;                        // φ(H(Γ))
};

/// Model concept: count(), polymer_size(i) >= 1, incompatible(i, j) for i != j.
/// A polymer is always incompatible with itself.
template <class Model>
concept PolymerModel = requires(const Model& m, std::size_t i) {
  { m.count() } -> std::convertible_to<std::size_t>;
  { m.polymer_size(i) } -> std::convertible_to<unsigned>;
  { m.incompatible(i, i) } -> std::convertible_to<bool>;
};

/// Incompatibility graph on the positions of a multiset.
template <PolymerModel Model>
SmallGraph incompatibility_graph(const Model& model, const std::vector<std::size_t>& members) {
  SmallGraph h(static_cast<int>(members.size()));
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (members[a] == members[b] || model.incompatible(members[a], members[b]))
        h.add_edge(static_cast<int>(a), static_cast<int>(b));
  return h;
}

inline BigInt multiset_orderings(const std::vector<std::size_t>& members) {
  BigInt r = factorial(static_cast<unsigned>(members.size()));
  std::size_t run = 1;
  for (std::size_t i = 1; i <= members.size(); ++i) {
    if (i < members.size() && members[i] == members[i - 1]) {
      ++run;
    } else {
      r /= factorial(static_cast<unsigned>(run));
      run = 1;
    }
  }
  return r;
}

/// Calls visit(cluster) for every multiset with connected H and min_total <= ‖Γ‖ <= max_total.
/// Summing orderings·φ·Π w over the stream gives the cluster expansion of log Ξ truncated by size.
template <PolymerModel Model>
void for_each_cluster(const Model& model, unsigned max_total, const std::function<void(const AbstractCluster&)>& visit,
                      unsigned min_total = 1) {
  std::vector<std::size_t> members;
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t from, unsigned total) {
    if (!members.empty() && total >= min_total) {
      SmallGraph h = incompatibility_graph(model, members);
      if (h.connected()) {
        AbstractCluster c;
        c.members = members;
        c.total_size = total;
        c.orderings = multiset_orderings(members);
        c.ursell = ursell(h);
        visit(c);
      }
    }
    for (std::size_t i = from; i < model.count(); ++i) {
      unsigned s = model.polymer_size(i);
      if (total + s > max_total) continue;
      members.push_back(i);
      rec(i, total + s);
      members.pop_back();
    }
  };
  rec(0, 0);
}

/// Universe given by an explicit size list and incompatibility matrix.
struct ExplicitModel {
  std::vector<unsigned> sizes;
  std::vector<std::vector<bool>> incompat;

  std::size_t count() const { return sizes.size(); }
  unsigned polymer_size(std::size_t i) const { return sizes[i]; }
  bool incompatible(std::size_t i, std::size_t j) const { return i == j || incompat[i][j]; }
};

}  // namespace hyperis
