#pragma once

#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "hyperis/asymptotics.hpp"
#include "hyperis/cluster_expansion.hpp"
#include "hyperis/clusters.hpp"
#include "hyperis/exact_oracle.hpp"
#include "hyperis/sampler.hpp"
#include "hyperis/serialization.hpp"
#include "hyperis/ursell.hpp"

namespace hyperis::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  unsigned threads = 1;
  std::uint64_t seed = 20240611;
  std::uint64_t q2_steps = 1'000'000;
  std::uint64_t q2_thin = 16;
  std::size_t d9_samples = 25'000;
  std::uint64_t d9_thin = 2048;
};

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

inline std::string fmt(const Real& x) { return format_real(x, 8); }

/// Collects sub-check outcomes; the criterion passes when every check does.
struct Checks {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool cond, const std::string& what) {
    ok = ok && cond;
    notes.push_back(std::string(cond ? "ok " : "FAIL ") + what);
  }
  std::string text() const {
    std::string s;
    for (const auto& n : notes) s += (s.empty() ? "" : "; ") + n;
    return s;
  }
};

inline SmallGraph graph_from_mask(int n, std::uint32_t mask) {
  SmallGraph g(n);
  int e = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++e)
      if ((mask >> e) & 1u) g.add_edge(a, b);
  return g;
}

inline sym::Poly drop_above(const sym::Poly& p, unsigned deg) {
  sym::Poly r;
  for (const auto& [m, c] : p.terms())
    if (m.total_degree() <= deg) r += sym::Poly::monomial(m, c);
  return r;
}

inline Real exact_log_xi(const OddModelProfile& om, const Rat& lambda) { return log_of(om.xi(lambda)); }

}  // namespace detail

inline CriterionResult symbolic_exactness() {
  using namespace sym;
  detail::Checks c;
  const Poly l = lam(), d = dvar(), b = beta(), omb = one_minus_beta();
  c.check(asym::R_poly(1) == l, "R_1 = λ");
  c.check(asym::R_poly(2) == ((Poly(2) * l.pow(3) + l.pow(4)) * d * (d - Poly(1)) - Poly(2) * l.pow(2)) * Rat(1, 4),
          "R_2 closed form");
  const auto bt = asym::compute_B(1);
  c.check(bt.size() == 1 && (bt[0] - RatFunc((d * b - Poly(1)) * b, 0, 3)).is_zero(), "B_1 = (dβ−1)β/(1−β)^3");
  const auto pt = asym::compute_P(3);
  c.check(pt.P.size() == 2 && (pt.P[0] - RatFunc(b, 0, 1)).is_zero(), "P_1 = β/(1−β)");
  RatFunc p2 = RatFunc(d * (d - Poly(1)) * (Poly(2) - b) * b.pow(3) - Poly(2) * omb.pow(2) * b.pow(2), 0, 4) * Rat(1, 4) -
               RatFunc(b * (Poly(1) - d * b).pow(2), 0, 3) * Rat(1, 2);
  c.check(pt.P.size() == 2 && (pt.P[1] - p2).is_zero(), "P_2 closed form");
  return {1, "symbolic exactness", c.ok, c.text()};
}

inline CriterionResult ursell_equivalence() {
  detail::Checks c;
  std::size_t graphs = 0, mismatches = 0;
  for (int n = 1; n <= 5; ++n) {
    const int edges = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << edges); ++mask) {
      SmallGraph g = detail::graph_from_mask(n, mask);
      ++graphs;
      if (ursell(g) != ursell_recursive(g)) ++mismatches;
    }
  }
  c.check(mismatches == 0, std::to_string(graphs) + " labelled graphs on <= 5 vertices, " + std::to_string(mismatches) +
                               " mismatches");
  c.check(ursell(detail::graph_from_mask(2, 1)) == Rat(-1, 2), "φ(K2) = -1/2");
  c.check(ursell(detail::graph_from_mask(3, 7)) == Rat(1, 3), "φ(K3) = 1/3");
  c.check(ursell(detail::graph_from_mask(4, 0b000001)) == 0 && ursell(detail::graph_from_mask(2, 0)) == 0,
          "φ(disconnected) = 0");
  return {2, "Ursell oracle equivalence", c.ok, c.text()};
}

inline CriterionResult oracle_cross_validation() {
  detail::Checks c;
  for (int d = 1; d <= 4; ++d)
    c.check(size_profile(Dim(d)).counts == exhaustive_profile(Dim(d)).counts,
            "transfer = exhaustive at d=" + std::to_string(d));
  c.check(size_profile(Dim(2)).total() == 7, "i(Q_2) = 7");
  c.check(size_profile(Dim(3)).total() == 35, "i(Q_3) = 35");
  c.check(size_profile(Dim(5)).total() == BigInt(254475), "i(Q_5) = 254475");
  const auto prof = size_profile(Dim(4));
  bool identity = true;
  for (Rat lam : {Rat(1, 4), Rat(1, 2), Rat(1), Rat(2)}) {
    const auto h = hardcore_exact(Dim(4), lam);
    for (std::size_t m = 0; m < prof.counts.size(); ++m) {
      Rat mu = h.probability_of([m](std::uint64_t s) { return static_cast<std::size_t>(std::popcount(s)) == m; });
      identity = identity && Rat(prof.counts[m]) == h.Z / pow(lam, static_cast<long long>(m)) * mu;
    }
  }
  c.check(identity, "i_m = Z λ^{-m} μ(|I|=m) exactly at d=4, λ ∈ {1/4,1/2,1,2}");
  return {3, "exact oracle cross-validation", c.ok, c.text()};
}

inline CriterionResult polymer_exactness() {
  detail::Checks c;
  const auto om = odd_model_exact(Dim(3));
  std::map<std::pair<int, int>, BigInt> want{{{0, 0}, 1}, {{1, 3}, 4}};
  c.check(om.terms == want, "Ξ_O = 1 + 4λ(1+λ)^{-3}");
  c.check(om.z_odd == std::vector<BigInt>{1, 8, 10, 4, 1}, "Z_O = (1+λ)^4 + 4λ(1+λ)");
  const auto polys = enumerate_polymers(Dim(3), 3);
  c.check(polys.size() == 4, "enumerate_polymers(3, 3) has " + std::to_string(polys.size()) + " polymers");
  return {4, "polymer/Ξ exactness", c.ok, c.text()};
}

inline CriterionResult truncation_convergence(unsigned threads = 1) {
  PrecisionScope ps(kDefaultDigits);
  detail::Checks c;
  const Dim d(4);
  const Rat lambda(1, 20);
  const Real exact = detail::exact_log_xi(odd_model_exact(d), lambda);
  const auto strata = log_xi_strata(d, lambda, 5, threads);
  Real prev = -1;
  for (int k = 1; k <= 4; ++k) {
    Real err = abs(to_real(truncated_log_xi(d, lambda, k, threads)) - exact);
    Real next = abs(to_real(strata[static_cast<std::size_t>(k)]));
    c.check(err < next, "k=" + std::to_string(k) + " |err| " + detail::fmt(err) + " < |stratum " +
                            std::to_string(k + 1) + "| " + detail::fmt(next));
    if (k > 1) c.check(err < prev, "k=" + std::to_string(k) + " error decreases");
    prev = err;
  }
  return {5, "cluster-expansion truncation convergence", c.ok, c.text()};
}

inline CriterionResult synthetic_universe() {
  using sym::Poly;
  detail::Checks c;
  // Path of incompatibilities 0 - 1 - 2, unit sizes, symbolic weights.
  ExplicitModel m{{1, 1, 1}, {{true, true, false}, {true, true, true}, {false, true, true}}};
  const unsigned order = 6;
  const std::vector<Poly> w = {Poly::var(sym::Var::w1), Poly::var(sym::Var::w2), Poly::var(sym::Var::w3)};
  const Poly u = w[0] + w[1] + w[2] + w[0] * w[2];
  Poly taylor, upow(1);
  for (unsigned n = 1; n <= order; ++n) {
    upow = detail::drop_above(upow * u, order);
    taylor += upow * Rat((n % 2 ? 1 : -1), n);
  }
  Poly clusters;
  for_each_cluster(m, order, [&](const AbstractCluster& cl) {
    Poly term(Rat(cl.orderings) * cl.ursell);
    for (std::size_t i : cl.members) term *= w[i];
    clusters += term;
  });
  c.check(clusters == detail::drop_above(taylor, order),
          "cluster expansion = Taylor(log Ξ) through total degree 6 (" + std::to_string(clusters.size()) + " terms)");
  return {6, "synthetic-universe identity", c.ok, c.text()};
}

inline CriterionResult asymptotic_desk_check() {
  PrecisionScope ps(kDefaultDigits);
  detail::Checks c;
  const auto prof = size_profile(Dim(5));
  const Real lz = log_of(prof.partition_function(1));
  const Real e2 = abs(asym::log_Z_asymptotic(1, Dim(5), 2).value - lz);
  const Real e3 = abs(asym::log_Z_asymptotic(1, Dim(5), 3).value - lz);
  c.check(e3 < e2, "log Z at d=5, λ=1: |err t=3| " + detail::fmt(e3) + " < |err t=2| " + detail::fmt(e2));
  const Real li = log_of(prof.counts.at(8));
  const auto c1 = asym::log_count_asymptotic(Rat(1, 2), Dim(5), 1);
  const auto c2 = asym::log_count_asymptotic(Rat(1, 2), Dim(5), 2);
  const Real f1 = abs(c1.via_P.value - li), f2 = abs(c2.via_P.value - li);
  c.check(f2 < f1, "log i_8(Q_5): |err t=2| " + detail::fmt(f2) + " < |err t=1| " + detail::fmt(f1));
  return {7, "asymptotic-formula desk check", c.ok, c.text()};
}

inline CriterionResult expected_size_targeting(unsigned threads = 1) {
  detail::Checks c;
  std::vector<double> gaps;
  std::string series;
  for (int dd : {10, 12, 14}) {
    const Dim d(dd);
    const Rat lb = asym::lambda_beta(Rat(1, 2), d, 4).value;
    const Rat e = expected_size_truncated(d, lb, 2, threads);
    const double n = static_cast<double>(d.N());
    const double gap = std::abs(static_cast<double>(e) - std::floor(n / 2)) / std::sqrt(n);
    gaps.push_back(gap);
    series += (series.empty() ? "" : ", ") + ("d=" + std::to_string(dd) + ": " + detail::fmt(gap));
  }
  c.check(gaps[1] < gaps[0] && gaps[2] < gaps[1], "|E − ⌊N/2⌋|/√N decreasing (" + series + ")");
  return {8, "expected-size targeting trend", c.ok, c.text()};
}

inline CriterionResult sampler_suite(const AcceptanceOptions& opt = {}) {
  detail::Checks c;
  {
    const auto exact = hardcore_exact(Dim(2), 1);
    std::map<std::uint64_t, std::size_t> index;
    std::vector<double> probs;
    for (auto s : exact.sets) {
      index[s] = probs.size();
      probs.push_back(static_cast<double>(exact.probability(s)));
    }
    std::vector<std::uint64_t> obs(probs.size(), 0);
    mc::RunConfig cfg;
    cfg.d = 2;
    cfg.steps = opt.q2_steps;
    cfg.burn_in = mc::default_burn_in(2);
    cfg.thin = opt.q2_thin;
    cfg.seed = opt.seed;
    mc::glauber_run(cfg, [&](const mc::ChainState& s) {
      std::uint64_t mask = 0;
      for (Vertex v : s.members()) mask |= std::uint64_t{1} << v;
      ++obs[index.at(mask)];
    });
    const auto t = stats::chi_square_gof(obs, probs);
    c.check(t.p_value > 0.01, "Q_2 stationary chi-square p = " + detail::fmt(t.p_value));
  }
  mc::RunConfig cfg;
  cfg.d = 9;
  cfg.lambda = 1;
  cfg.burn_in = mc::default_burn_in(9);
  cfg.thin = opt.d9_thin;
  cfg.steps = cfg.burn_in + cfg.thin * opt.d9_samples;
  cfg.seed = opt.seed;
  const auto reports = mc::sample_chains(cfg, 1, 1).front();
  const auto summary = mc::defect_statistics(reports, census(Dim(9), 1, opt.threads), 1);
  const mc::TypeStatistics* single = nullptr;
  for (const auto& t : summary.types)
    if (t.type.key() == "1:@0") single = &t;
  if (single == nullptr || !single->m_T) {
    c.check(false, "singleton type missing from the census");
    return {9, "sampler statistical suite", c.ok, c.text()};
  }
  const double mean = single->moments.mean;
  c.check(std::abs(mean - *single->m_T) < 3 * single->se, "d=9 singleton mean " + detail::fmt(mean) + " vs m_T " +
                                                              detail::fmt(*single->m_T) + " (SE " +
                                                              detail::fmt(single->se) + ")");
  const double p = single->poisson ? single->poisson->p_value : 0.0;
  c.check(p > 0.01, "Poisson GOF p = " + detail::fmt(p));
  c.check(single->var_mean_ratio >= 0.8 && single->var_mean_ratio <= 1.2,
          "var/mean = " + detail::fmt(single->var_mean_ratio));
  const double target = static_cast<double>(expected_size_truncated(Dim(9), 1, 2, opt.threads));
  c.check(std::abs(summary.size.mean - target) < 3 * summary.size_se,
          "|I| mean " + detail::fmt(summary.size.mean) + " vs truncated expectation " + detail::fmt(target) + " (SE " +
              detail::fmt(summary.size_se) + ")");
  return {9, "sampler statistical suite", c.ok, c.text()};
}

inline CriterionResult binomial_lclt_check() {
  detail::Checks c;
  const auto r = asym::binomial_lclt(1'000'000, Rat(1, 2), 500'000, 40);
  PrecisionScope ps(40);
  const Real rel = abs(r.ratio_to_peak - 1);
  c.check(rel < Real("0.001"), "Bin(10^6, 1/2) pmf at mean / 1/√(2πnpq) − 1 = " + detail::fmt(rel));
  return {10, "binomial LCLT", c.ok, c.text()};
}

inline CriterionResult reproducibility(unsigned threads = 2) {
  detail::Checks c;
  mc::RunConfig cfg;
  cfg.d = 7;
  cfg.lambda = 1;
  cfg.burn_in = mc::default_burn_in(7);
  cfg.thin = 512;
  cfg.steps = cfg.burn_in + cfg.thin * 2000;
  cfg.seed = 4242;
  auto render = [&](unsigned th) {
    const auto reps = mc::sample_chains(cfg, 2, th);
    std::ostringstream csv;
    for (const auto& chain : reps) mc::write_csv(csv, chain);
    const auto summary = mc::defect_statistics(reps.front(), census(Dim(7), 2), 1);
    return std::make_pair(csv.str(), io::to_json(summary).dump());
  };
  const auto a = render(1), b = render(1), p = render(std::max(2u, threads));
  c.check(a.first == b.first && a.second == b.second, "sampler CSV/JSON identical for identical seeds");
  c.check(a.first == p.first && a.second == p.second, "sampler output independent of thread count");

  auto symbolic = [](unsigned th) {
    std::string s = io::to_json(census(Dim(8), 3, th)).dump();
    for (const auto& cs : cluster_sums(Dim(7), 3, {Observable::one(), Observable::size()}, th))
      s += io::to_json(cs).dump();
    s += io::to_json(symbolic_census(3, th)).dump();
    s += io::to_json(asym::compute_P(3)).dump();
    return s;
  };
  c.check(symbolic(1) == symbolic(std::max(2u, threads)), "census, cluster sums and P-table identical across threads");
  return {11, "reproducibility", c.ok, c.text()};
}

/// Runs the selected criteria (all when `only` is empty) and times each one.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}, const std::vector<int>& only = {}) {
  const std::vector<std::function<CriterionResult()>> all = {
      [] { return symbolic_exactness(); },
      [] { return ursell_equivalence(); },
      [] { return oracle_cross_validation(); },
      [] { return polymer_exactness(); },
      [&] { return truncation_convergence(opt.threads); },
      [] { return synthetic_universe(); },
      [] { return asymptotic_desk_check(); },
      [&] { return expected_size_targeting(opt.threads); },
      [&] { return sampler_suite(opt); },
      [] { return binomial_lclt_check(); },
      [&] { return reproducibility(opt.threads); },
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = all[i]();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << ", " << std::fixed
     << std::setprecision(1) << r.seconds << " s): " << r.detail;
  return os.str();
}

}  // namespace hyperis::validation
