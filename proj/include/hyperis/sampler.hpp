#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hyperis/hypercube.hpp"
#include "hyperis/parallel.hpp"
#include "hyperis/polymers.hpp"
#include "hyperis/statistics.hpp"

namespace hyperis::mc {

inline constexpr int kMaxSamplerDim = 20;

/// std::mt19937_64 with draws defined in integer arithmetic, so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform on [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do r = gen_();
    while (r >= limit);
    return r % n;
  }

  /// True with probability threshold / 2^64.
  bool accept(std::uint64_t threshold) { return gen_() < threshold; }

 private:
  std::mt19937_64 gen_;
};

/// splitmix64, used to derive per-chain seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t chain_seed(std::uint64_t seed, std::size_t chain) {
  return chain == 0 ? seed : splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(chain)));
}

/// ⌊p · 2^64⌋ for 0 <= p < 1.
inline std::uint64_t probability_threshold(const Rat& p) {
  require(p >= 0 && p < 1, "probability must lie in [0, 1)");
  BigInt scaled = numerator_of(p) * (BigInt(1) << 64) / denominator_of(p);
  return static_cast<std::uint64_t>(scaled);
}

enum class Start { empty, all_even, all_odd };

struct ChainState {
  int d = 0;
  std::vector<std::uint64_t> occ;  // bitset over all 2^d vertices
  std::uint64_t size = 0;
  std::uint64_t odd = 0;
  std::uint64_t even = 0;
  std::uint64_t step = 0;

  bool occupied(Vertex v) const { return (occ[v >> 6] >> (v & 63)) & 1u; }

  VertexSet members(std::optional<Parity> side = std::nullopt) const {
    VertexSet out;
    for (std::size_t w = 0; w < occ.size(); ++w) {
      std::uint64_t bits = occ[w];
      while (bits) {
        const Vertex v = (w << 6) | static_cast<Vertex>(std::countr_zero(bits));
        bits &= bits - 1;
        if (!side || parity(v) == *side) out.push_back(v);
      }
    }
    return out;
  }

  bool is_independent() const {
    for (Vertex v : members())
      for (int i = 0; i < d; ++i)
        if (occupied(v ^ (Vertex{1} << i))) return false;
    return true;
  }
};

/// Single-site heat-bath dynamics for the hard-core model.
class GlauberChain {
 public:
  GlauberChain(Dim d, const Rat& lambda, std::uint64_t seed, Start start = Start::empty)
      : rng_(seed), threshold_(0) {
    require(d.value() <= kMaxSamplerDim, "sampler supports d <= 20");
    require(lambda > 0, "fugacity must be positive");
    threshold_ = probability_threshold(lambda / (Rat(1) + lambda));
    state_.d = d.value();
    const std::uint64_t n = d.vertex_count();
    state_.occ.assign((n + 63) / 64, 0);
    if (start != Start::empty) {
      const Parity p = start == Start::all_even ? Parity::even : Parity::odd;
      for (Vertex v = 0; v < n; ++v)
        if (parity(v) == p) set(v, true);
    }
  }

  void step() {
    const Vertex v = rng_.below(std::uint64_t{1} << state_.d);
    bool blocked = false;
    for (int i = 0; i < state_.d && !blocked; ++i) blocked = state_.occupied(v ^ (Vertex{1} << i));
    const bool want = !blocked && rng_.accept(threshold_);
    if (want != state_.occupied(v)) set(v, want);
    ++state_.step;
  }

  void run(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) step();
  }

  const ChainState& state() const { return state_; }

 private:
  void set(Vertex v, bool on) {
    auto& word = state_.occ[v >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    const std::int64_t delta = on ? 1 : -1;
    word = on ? (word | bit) : (word & ~bit);
    state_.size += static_cast<std::uint64_t>(delta);
    if (parity(v) == Parity::odd)
      state_.odd += static_cast<std::uint64_t>(delta);
    else
      state_.even += static_cast<std::uint64_t>(delta);
  }

  ChainState state_;
  Rng rng_;
  std::uint64_t threshold_;
};

struct RunConfig {
  int d = 2;
  Rat lambda = 1;
  std::uint64_t steps = 0;    // total, including burn-in
  std::uint64_t burn_in = 0;
  std::uint64_t thin = 1;
  std::uint64_t seed = 1;
  Start start = Start::all_even;
  bool verify = false;  // check independence and defect components on every snapshot
};

/// 10 · 2^d · d.
inline std::uint64_t default_burn_in(int d) { return 10ULL * (std::uint64_t{1} << d) * static_cast<std::uint64_t>(d); }

/// Calls visit(state) at every step s with burn_in < s <= steps and (s − burn_in) divisible by thin.
inline void glauber_run(const RunConfig& cfg, const std::function<void(const ChainState&)>& visit) {
  require(cfg.steps >= cfg.burn_in, "steps must be >= burn_in");
  require(cfg.thin >= 1, "thin must be >= 1");
  GlauberChain chain(Dim(cfg.d), cfg.lambda, cfg.seed, cfg.start);
  chain.run(cfg.burn_in);
  for (std::uint64_t s = cfg.burn_in; s + cfg.thin <= cfg.steps; s += cfg.thin) {
    chain.run(cfg.thin);
    if (cfg.verify && !chain.state().is_independent())
      throw Error("sampler produced a non-independent set at step " + std::to_string(chain.state().step));
    visit(chain.state());
  }
}

// ---- defects -------------------------------------------------------------------------------

struct DefectReport {
  std::uint64_t step = 0;
  std::uint64_t size = 0;  // |I|
  std::uint64_t odd = 0;
  std::uint64_t even = 0;
  Parity side = Parity::odd;
  std::map<DefectType, std::uint64_t> counts;
  std::uint64_t gamma_size = 0;  // ‖Γ‖: number of defect vertices
  std::uint64_t gamma_nbhd = 0;  // |N(Γ)|; components are at distance > 2, so neighbourhoods are disjoint

  std::uint64_t count(const std::string& key) const {
    for (const auto& [t, c] : counts)
      if (t.key() == key) return c;
    return 0;
  }
};

namespace detail {

/// Q_d^2 components of the occupied vertices of one parity, by BFS over distance-2 moves.
inline std::vector<VertexSet> defect_components(const ChainState& s, Parity side) {
  const VertexSet defects = s.members(side);
  std::set<Vertex> seen;
  std::vector<VertexSet> comps;
  for (Vertex start : defects) {
    if (seen.count(start)) continue;
    VertexSet comp{start};
    seen.insert(start);
    for (std::size_t head = 0; head < comp.size(); ++head) {
      const Vertex v = comp[head];
      for (int i = 0; i < s.d; ++i)
        for (int j = i + 1; j < s.d; ++j) {
          const Vertex u = v ^ (Vertex{1} << i) ^ (Vertex{1} << j);
          if (s.occupied(u) && seen.insert(u).second) comp.push_back(u);
        }
    }
    canonicalize(comp);
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline DefectType classify_defect(const VertexSet& comp, Dim d) {
  if (comp.size() <= 64) return classify(comp, d);
  DefectType t;
  t.cert = "nc:large" + std::to_string(comp.size());
  t.canonical = false;
  t.size = static_cast<unsigned>(comp.size());
  t.deficiency = static_cast<long>(comp.size()) * d.value() - static_cast<long>(neighborhood_size(comp, d));
  return t;
}

}  // namespace detail

/// Defect side (odd on ties), its Q_d^2 components and their types.
inline DefectReport extract_defects(const ChainState& s, bool verify = false) {
  const Dim d(s.d);
  DefectReport r;
  r.step = s.step;
  r.size = s.size;
  r.odd = s.odd;
  r.even = s.even;
  r.side = defect_parity(s.odd, s.even);
  auto comps = detail::defect_components(s, r.side);
  if (verify) {
    auto reference = square_components(s.members(r.side), d);
    auto key = [](std::vector<VertexSet> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (key(comps) != key(reference)) throw Error("defect components disagree with square_components");
  }
  for (const auto& c : comps) {
    DefectType t = detail::classify_defect(c, d);
    r.gamma_size += c.size();
    r.gamma_nbhd += static_cast<std::uint64_t>(t.nbhd_at(d.value()));
    ++r.counts[t];
  }
  return r;
}

/// Runs `chains` independent chains (seeds derived from cfg.seed) and returns their
/// reports in chain order.
inline std::vector<std::vector<DefectReport>> sample_chains(const RunConfig& cfg, std::size_t chains = 1,
                                                            unsigned threads = 1) {
  require(chains >= 1, "need at least one chain");
  std::vector<std::vector<DefectReport>> out(chains);
  parallel_for(chains, threads, [&](std::size_t c) {
    RunConfig local = cfg;
    local.seed = chain_seed(cfg.seed, c);
    glauber_run(local, [&](const ChainState& s) { out[c].push_back(extract_defects(s, cfg.verify)); });
  });
  return out;
}

// ---- statistics over reports ---------------------------------------------------------------

struct TypeStatistics {
  DefectType type;
  std::optional<BigInt> n_T;  // absent for types outside the census
  std::optional<Rat> w_T;
  std::optional<double> m_T;
  stats::Moments moments;
  double se = 0;                      // batch-means standard error of the mean
  std::optional<double> z;            // (mean − m_T) / se
  double var_mean_ratio = 0;          // 0 when the mean is 0
  std::optional<stats::TestResult> poisson;
};

struct DefectSummary {
  std::size_t samples = 0;
  std::size_t odd_side = 0;
  std::vector<TypeStatistics> types;
  stats::Moments size, gamma_size, gamma_nbhd;
  double size_se = 0;
  std::optional<stats::TestResult> jb_gamma_size, jb_gamma_nbhd;
  std::optional<std::pair<std::string, std::string>> joint_pair;
  std::optional<stats::TestResult> joint;
  std::vector<std::string> notes;
};

inline constexpr double kPoissonMeanCutoff = 5.0;
inline constexpr std::size_t kRecommendedSamples = 1000;

inline DefectSummary defect_statistics(const std::vector<DefectReport>& reports, const Census& census,
                                       const Rat& lambda) {
  require(reports.size() >= 20, "defect statistics need at least 20 samples");
  DefectSummary s;
  s.samples = reports.size();
  if (s.samples < kRecommendedSamples) s.notes.push_back("fewer than 1000 samples");

  std::set<DefectType> types;
  for (const auto& [t, e] : census.entries) types.insert(t);
  for (const auto& r : reports)
    for (const auto& [t, c] : r.counts) types.insert(t);

  std::vector<double> size, gsize, gnbhd;
  for (const auto& r : reports) {
    size.push_back(static_cast<double>(r.size));
    gsize.push_back(static_cast<double>(r.gamma_size));
    gnbhd.push_back(static_cast<double>(r.gamma_nbhd));
    s.odd_side += r.side == Parity::odd;
  }
  s.size = stats::moments(size);
  s.size_se = stats::batch_means_se(size);
  s.gamma_size = stats::moments(gsize);
  s.gamma_nbhd = stats::moments(gnbhd);
  if (s.gamma_size.variance > 0) s.jb_gamma_size = stats::jarque_bera(gsize);
  if (s.gamma_nbhd.variance > 0) s.jb_gamma_nbhd = stats::jarque_bera(gnbhd);

  std::map<DefectType, std::vector<std::uint64_t>> series;
  for (const auto& t : types) {
    auto& v = series[t];
    v.reserve(reports.size());
    for (const auto& r : reports) {
      auto it = r.counts.find(t);
      v.push_back(it == r.counts.end() ? 0 : it->second);
    }
  }

  for (const auto& t : types) {
    TypeStatistics ts;
    ts.type = t;
    const auto& raw = series[t];
    std::vector<double> x(raw.begin(), raw.end());
    ts.moments = stats::moments(x);
    ts.se = stats::batch_means_se(x);
    ts.var_mean_ratio = ts.moments.mean > 0 ? ts.moments.variance / ts.moments.mean : 0;
    if (const auto* e = census.find(t)) {
      ts.n_T = e->count;
      ts.w_T = type_weight(t, census.d, lambda);
      ts.m_T = static_cast<double>(Rat(e->count) * *ts.w_T);
      if (ts.se > 0) ts.z = (ts.moments.mean - *ts.m_T) / ts.se;
      if (*ts.m_T > 0 && *ts.m_T <= kPoissonMeanCutoff) ts.poisson = stats::poisson_gof(raw, *ts.m_T);
    }
    s.types.push_back(std::move(ts));
  }

  // Joint diagnostic on the two most frequent types.
  std::vector<std::pair<double, DefectType>> by_mean;
  for (const auto& ts : s.types)
    if (ts.moments.mean > 0) by_mean.emplace_back(ts.moments.mean, ts.type);
  std::stable_sort(by_mean.begin(), by_mean.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (by_mean.size() >= 2) {
    s.joint_pair = {by_mean[0].second.key(), by_mean[1].second.key()};
    s.joint = stats::independence_test(series[by_mean[0].second], series[by_mean[1].second]);
  }
  return s;
}

/// Two chains from opposite ground states; returns the gap between their mean |I| in units of the
/// combined standard error.
struct ConvergenceDiagnostic {
  double mean_from_even = 0;
  double mean_from_odd = 0;
  double gap_in_se = 0;
};

inline ConvergenceDiagnostic convergence_diagnostic(RunConfig cfg) {
  ConvergenceDiagnostic out;
  std::vector<double> a, b;
  cfg.start = Start::all_even;
  glauber_run(cfg, [&](const ChainState& s) { a.push_back(static_cast<double>(s.size)); });
  cfg.start = Start::all_odd;
  cfg.seed = chain_seed(cfg.seed, 1);
  glauber_run(cfg, [&](const ChainState& s) { b.push_back(static_cast<double>(s.size)); });
  out.mean_from_even = stats::moments(a).mean;
  out.mean_from_odd = stats::moments(b).mean;
  const double se = std::hypot(stats::batch_means_se(a), stats::batch_means_se(b));
  out.gap_in_se = se > 0 ? std::abs(out.mean_from_even - out.mean_from_odd) / se : 0;
  return out;
}

// ---- CSV -----------------------------------------------------------------------------------

/// One row per report: step, |I|, |I∩O|, |I∩E|, side, ‖Γ‖, |N(Γ)|, then one column per type key.
inline void write_csv(std::ostream& os, const std::vector<DefectReport>& reports) {
  std::set<std::string> keys;
  for (const auto& r : reports)
    for (const auto& [t, c] : r.counts) keys.insert(t.key());
  os << "step,size,odd,even,side,gamma_size,gamma_nbhd";
  for (const auto& k : keys) os << ",type:" << k;
  os << "\n";
  for (const auto& r : reports) {
    os << r.step << ',' << r.size << ',' << r.odd << ',' << r.even << ','
       << (r.side == Parity::odd ? "odd" : "even") << ',' << r.gamma_size << ',' << r.gamma_nbhd;
    for (const auto& k : keys) os << ',' << r.count(k);
    os << "\n";
  }
}

}  // namespace hyperis::mc
