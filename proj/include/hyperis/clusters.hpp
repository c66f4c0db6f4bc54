#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperis/cluster_expansion.hpp"
#include "hyperis/polymers.hpp"
#include "hyperis/symbolic/polynomial.hpp"

namespace hyperis {

enum class ObservableKind { one, size, nbhd, type_count, mixed_size_nbhd };

/// f(Γ) in Σ w(Γ) f(Γ). nbhd is Σ_S |N(S)| with multiplicity, which makes the nbhd sum the
/// λ-derivative companion of the plain sum.
struct Observable {
  ObservableKind kind = ObservableKind::one;
  unsigned power = 1;
  std::string type_key;  // for type_count

  static Observable one() { return {}; }
  static Observable size(unsigned p = 1) { return {ObservableKind::size, p, {}}; }
  static Observable nbhd(unsigned p = 1) { return {ObservableKind::nbhd, p, {}}; }
  static Observable type_count(std::string key, unsigned p = 1) { return {ObservableKind::type_count, p, std::move(key)}; }
  static Observable mixed_size_nbhd() { return {ObservableKind::mixed_size_nbhd, 1, {}}; }

  std::string name() const {
    auto pw = [&](const std::string& base) { return power == 1 ? base : base + "^" + std::to_string(power); };
    switch (kind) {
      case ObservableKind::one: return "one";
      case ObservableKind::size: return pw("size");
      case ObservableKind::nbhd: return pw("nbhd");
      case ObservableKind::type_count: return pw("type_count(" + type_key + ")");
      case ObservableKind::mixed_size_nbhd: return "mixed_size_nbhd";
    }
    return "?";
  }

  /// Parses "one", "size", "size^2", "nbhd^3", "type_count(2:1@2)^2", "mixed_size_nbhd".
  static Observable parse(const std::string& text) {
    std::string base = text;
    unsigned p = 1;
    if (auto caret = text.rfind('^'); caret != std::string::npos && text.find(')', caret) == std::string::npos) {
      base = text.substr(0, caret);
      try {
        p = static_cast<unsigned>(std::stoul(text.substr(caret + 1)));
      } catch (const std::exception&) {
        throw PreconditionError("unknown observable '" + text + "'");
      }
      require(p >= 1 && p <= 16, "observable power must be in 1..16");
    }
    if (base == "one" && p == 1) return one();
    if (base == "size") return size(p);
    if (base == "nbhd") return nbhd(p);
    if (base == "mixed_size_nbhd" && p == 1) return mixed_size_nbhd();
    if (base.rfind("type_count(", 0) == 0 && base.back() == ')')
      return type_count(base.substr(11, base.size() - 12), p);
    throw PreconditionError("unknown observable '" + text + "'");
  }
};

/// A cluster whose union support contains the root vertex.
struct RootedCluster {
  std::vector<VertexSet> polymers;  // with repetition, in universe order
  std::vector<DefectType> types;
  unsigned total_size = 0;          // ‖Γ‖
  long nbhd_sum = 0;                // Σ_S |N(S)| with multiplicity
  std::size_t nbhd_union = 0;       // |∪ N(S)|
  std::size_t union_size = 0;       // |∪ S|; the translation weight is 1/union_size
  long deficiency_sum = 0;          // ‖Γ‖·d - nbhd_sum
  BigInt orderings;
  Rat ursell;

  Rat observable(const Observable& o) const {
    switch (o.kind) {
      case ObservableKind::one: return 1;
      case ObservableKind::size: return pow(Rat(total_size), o.power);
      case ObservableKind::nbhd: return pow(Rat(nbhd_sum), o.power);
      case ObservableKind::mixed_size_nbhd: return Rat(total_size) * Rat(nbhd_sum);
      case ObservableKind::type_count: {
        long c = 0;
        for (const auto& t : types) c += t.key() == o.type_key ? 1 : 0;
        return pow(Rat(c), o.power);
      }
    }
    throw PreconditionError("unknown observable");
  }
};

namespace detail {

/// Polymers contained in a fixed connected set U, as bitmasks over U's positions.
struct UnionUniverse {
  const VertexSet& u;
  Dim d;
  std::vector<std::uint32_t> masks;
  std::vector<VertexSet> sets;

  UnionUniverse(const VertexSet& support, Dim dim) : u(support), d(dim) {
    const std::size_t n = u.size();
    for (std::uint32_t m = 1; m < (std::uint32_t{1} << n); ++m) {
      VertexSet s;
      for (std::size_t i = 0; i < n; ++i)
        if ((m >> i) & 1u) s.push_back(u[i]);
      if (!is_polymer(s, d)) continue;
      masks.push_back(m);
      sets.push_back(std::move(s));
    }
  }
  std::size_t count() const { return sets.size(); }
  unsigned polymer_size(std::size_t i) const { return static_cast<unsigned>(sets[i].size()); }
  bool incompatible(std::size_t i, std::size_t j) const {
    if (i == j || (masks[i] & masks[j])) return true;
    for (Vertex a : sets[i])
      for (Vertex b : sets[j])
        if (hamming(a, b) <= 2) return true;
    return false;
  }
};

}  // namespace detail

/// Connected sets U ∋ root with |U| <= max_size (candidate cluster unions), in walker order.
inline std::vector<VertexSet> rooted_unions(Dim d, int max_size, Budget& budget) {
  std::vector<VertexSet> out;
  detail::ConnectedSetWalker walker(d, max_size, false, budget);
  walker.run(kRoot, [&](const std::vector<Vertex>& sub) {
    VertexSet s(sub.begin(), sub.end());
    canonicalize(s);
    out.push_back(std::move(s));
  });
  return out;
}

/// Clusters with union exactly U and size in [kmin, kmax].
template <class Visit>
void for_each_cluster_with_union(const VertexSet& u, Dim d, unsigned kmin, unsigned kmax, Visit&& visit) {
  detail::UnionUniverse uni(u, d);
  if (uni.count() == 0) return;
  const std::uint32_t full = (std::uint32_t{1} << u.size()) - 1;
  std::vector<std::size_t> nb(uni.count());
  std::vector<DefectType> ty(uni.count());
  std::vector<bool> have_type(uni.count(), false);
  for (std::size_t i = 0; i < uni.count(); ++i) nb[i] = neighborhood_size(uni.sets[i], d);
  for_each_cluster(
      uni, kmax,
      [&](const AbstractCluster& ac) {
        std::uint32_t cover = 0;
        for (std::size_t i : ac.members) cover |= uni.masks[i];
        if (cover != full) return;
        RootedCluster c;
        c.total_size = ac.total_size;
        c.orderings = ac.orderings;
        c.ursell = ac.ursell;
        c.union_size = u.size();
        VertexSet all_nb;
        for (std::size_t i : ac.members) {
          if (!have_type[i]) {
            ty[i] = classify(uni.sets[i], d);
            have_type[i] = true;
          }
          c.polymers.push_back(uni.sets[i]);
          c.types.push_back(ty[i]);
          c.nbhd_sum += static_cast<long>(nb[i]);
          auto n_i = neighborhood(uni.sets[i], d);
          all_nb.insert(all_nb.end(), n_i.begin(), n_i.end());
        }
        canonicalize(all_nb);
        c.nbhd_union = all_nb.size();
        c.deficiency_sum = static_cast<long>(c.total_size) * d.value() - c.nbhd_sum;
        visit(c);
      },
      kmin);
}

/// Streams every rooted cluster with ‖Γ‖ <= max_total. Σ over all clusters of a translation-invariant
/// f equals N · Σ over the stream of f / union_size.
template <class Visit>
void enumerate_clusters(Dim d, int max_total, Visit&& visit, Budget&& budget = Budget()) {
  require(max_total >= 1 && max_total <= 6, "enumerate_clusters supports 1 <= max_total <= 6");
  require(d.value() >= 2 && d.value() <= 24, "enumerate_clusters supports 2 <= d <= 24");
  for (const auto& u : rooted_unions(d, max_total, budget))
    for_each_cluster_with_union(u, d, 1, static_cast<unsigned>(max_total), visit);
}

/// Σ_{‖Γ‖=k} w(Γ) f(Γ) = N λ^k P(λ) (1+λ)^{-kd}; `coeffs` holds P.
struct ClusterSum {
  int d = 0;
  int k = 0;
  Observable observable;
  std::vector<Rat> coeffs;

  sym::Poly poly() const {
    sym::Poly p;
    for (std::size_t i = 0; i < coeffs.size(); ++i) p += sym::Poly(coeffs[i]) * sym::lam().pow(static_cast<unsigned>(i));
    return p;
  }
  /// λ^k P(λ): for the plain observable this is R_k(λ, d) at this d.
  sym::Poly r_poly() const { return poly() * sym::lam().pow(static_cast<unsigned>(k)); }

  Rat evaluate_polynomial(const Rat& lambda) const {
    Rat acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * lambda + coeffs[i];
    return acc;
  }
  /// The stratum sum itself at λ.
  Rat stratum(const Rat& lambda) const {
    return Rat(Dim(d).N()) * pow(lambda, k) * evaluate_polynomial(lambda) * pow(Rat(1) + lambda, -static_cast<long long>(k) * d);
  }
};

/// Several observables over the same size-k stratum in one enumeration pass.
inline std::vector<ClusterSum> cluster_sums(Dim d, int k, const std::vector<Observable>& obs, unsigned threads = 1,
                                            Budget&& budget = Budget()) {
  require(k >= 1 && k <= 6, "cluster_sum supports 1 <= k <= 6");
  require(d.value() >= 2 && d.value() <= 24, "cluster_sum supports 2 <= d <= 24");
  const auto unions = rooted_unions(d, k, budget);
  // Per union: per observable, map Σc -> Rat coefficient of (1+λ)^{Σc}.
  using Acc = std::vector<std::map<long, Rat>>;
  std::vector<Acc> parts(unions.size(), Acc(obs.size()));
  parallel_for(unions.size(), threads, [&](std::size_t ui) {
    const Rat inv_u = Rat(1) / Rat(unions[ui].size());
    for_each_cluster_with_union(unions[ui], d, static_cast<unsigned>(k), static_cast<unsigned>(k),
                                [&](const RootedCluster& c) {
                                  budget.charge();
                                  Rat base = Rat(c.orderings) * c.ursell * inv_u;
                                  for (std::size_t o = 0; o < obs.size(); ++o) {
                                    Rat v = base * c.observable(obs[o]);
                                    if (v != 0) parts[ui][o][c.deficiency_sum] += v;
                                  }
                                });
  });
  std::vector<ClusterSum> out(obs.size());
  for (std::size_t o = 0; o < obs.size(); ++o) {
    std::map<long, Rat> merged;
    for (const auto& p : parts)
      for (const auto& [c, v] : p[o]) merged[c] += v;
    ClusterSum& s = out[o];
    s.d = d.value();
    s.k = k;
    s.observable = obs[o];
    for (const auto& [c, v] : merged) {
      require(c >= 0, "negative deficiency sum");
      if (s.coeffs.size() < static_cast<std::size_t>(c + 1)) s.coeffs.resize(static_cast<std::size_t>(c + 1), Rat(0));
      for (long i = 0; i <= c; ++i) s.coeffs[static_cast<std::size_t>(i)] += v * Rat(binomial(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i)));
    }
    while (!s.coeffs.empty() && s.coeffs.back() == 0) s.coeffs.pop_back();
    if (obs[o].kind == ObservableKind::one && !s.coeffs.empty())
      if (static_cast<long>(s.coeffs.size() - 1) + k > 3L * k * k)
        throw AlgebraError("cluster sum exceeds the λ-degree bound 3k^2 at k=" + std::to_string(k));
  }
  return out;
}

inline ClusterSum cluster_sum(Dim d, int k, const Observable& o, unsigned threads = 1, Budget&& budget = Budget()) {
  return std::move(cluster_sums(d, k, {o}, threads, std::move(budget)).front());
}

/// Stratum values Σ_{‖Γ‖=j} w(Γ) for j = 1..k at an exact λ.
inline std::vector<Rat> log_xi_strata(Dim d, const Rat& lambda, int k, unsigned threads = 1) {
  require(lambda > 0, "fugacity must be positive");
  std::vector<Rat> out;
  for (int j = 1; j <= k; ++j) out.push_back(cluster_sum(d, j, Observable::one(), threads).stratum(lambda));
  return out;
}

/// Σ_{‖Γ‖<=k} w(Γ).
inline Rat truncated_log_xi(Dim d, const Rat& lambda, int k, unsigned threads = 1) {
  require(k >= 0, "truncation order must be >= 0");
  require(lambda > 0, "fugacity must be positive");
  Rat s = 0;
  for (const auto& v : log_xi_strata(d, lambda, k, threads)) s += v;
  return s;
}

/// λN/(1+λ) + Σ_{‖Γ‖<=k} w(Γ) (‖Γ‖ - λ|N(Γ)|/(1+λ)).
inline Rat expected_size_truncated(Dim d, const Rat& lambda, int k, unsigned threads = 1) {
  require(k >= 0, "truncation order must be >= 0");
  require(lambda > 0, "fugacity must be positive");
  const Rat occ = lambda / (Rat(1) + lambda);
  Rat e = occ * Rat(d.N());
  for (int j = 1; j <= k; ++j) {
    auto sums = cluster_sums(d, j, {Observable::one(), Observable::nbhd()}, threads);
    e += Rat(j) * sums[0].stratum(lambda) - occ * sums[1].stratum(lambda);
  }
  return e;
}

}  // namespace hyperis
