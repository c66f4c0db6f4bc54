#include <gtest/gtest.h>

#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "hyperis/exact_oracle.hpp"
#include "hyperis/sampler.hpp"

using namespace hyperis;
using namespace hyperis::mc;

namespace {

ChainState state_with(int d, const VertexSet& vs) {
  ChainState s;
  s.d = d;
  s.occ.assign(((std::uint64_t{1} << d) + 63) / 64, 0);
  for (Vertex v : vs) {
    s.occ[v >> 6] |= std::uint64_t{1} << (v & 63);
    ++s.size;
    (parity(v) == Parity::odd ? s.odd : s.even) += 1;
  }
  return s;
}

std::uint64_t mask_of(const ChainState& s) {
  std::uint64_t m = 0;
  for (Vertex v : s.members()) m |= std::uint64_t{1} << v;
  return m;
}

}  // namespace

TEST(Rng, BelowIsInRangeAndCoversAllValues) {
  Rng r(7);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[r.below(5)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, ThresholdIsExact) {
  EXPECT_EQ(probability_threshold(Rat(1, 2)), std::uint64_t{1} << 63);
  EXPECT_EQ(probability_threshold(Rat(0)), 0u);
  EXPECT_EQ(probability_threshold(Rat(1, 4)), std::uint64_t{1} << 62);
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seeds;
  for (std::size_t c = 0; c < 100; ++c) seeds.insert(chain_seed(42, c));
  EXPECT_EQ(seeds.size(), 100u);
  EXPECT_EQ(chain_seed(42, 0), 42u);
}

TEST(Glauber, EmptyStreamWhenStepsEqualBurnIn) {
  RunConfig cfg;
  cfg.d = 3;
  cfg.steps = cfg.burn_in = 100;
  int n = 0;
  glauber_run(cfg, [&](const ChainState&) { ++n; });
  EXPECT_EQ(n, 0);
}

TEST(Glauber, RejectsBadParameters) {
  RunConfig cfg;
  cfg.steps = 5;
  cfg.burn_in = 10;
  EXPECT_THROW(glauber_run(cfg, [](const ChainState&) {}), PreconditionError);
  cfg.burn_in = 0;
  cfg.thin = 0;
  EXPECT_THROW(glauber_run(cfg, [](const ChainState&) {}), PreconditionError);
  EXPECT_THROW(GlauberChain(Dim(3), Rat(0), 1), PreconditionError);
}

TEST(Glauber, SnapshotsStayIndependentAndCountersAgree) {
  RunConfig cfg;
  cfg.d = 6;
  cfg.lambda = Rat(3, 2);
  cfg.steps = 20000;
  cfg.thin = 97;
  cfg.start = Start::empty;
  cfg.verify = true;
  glauber_run(cfg, [&](const ChainState& s) {
    EXPECT_EQ(s.members().size(), s.size);
    EXPECT_EQ(s.members(Parity::odd).size(), s.odd);
    EXPECT_EQ(s.odd + s.even, s.size);
  });
}

TEST(Glauber, StationaryDistributionOnQ2) {
  const auto exact = hardcore_exact(Dim(2), 1);
  ASSERT_EQ(exact.sets.size(), 7u);
  std::map<std::uint64_t, std::size_t> index;
  std::vector<double> probs;
  for (auto s : exact.sets) {
    index[s] = probs.size();
    probs.push_back(static_cast<double>(exact.probability(s)));
  }
  std::vector<std::uint64_t> obs(7, 0);
  RunConfig cfg;
  cfg.d = 2;
  cfg.steps = 1000000;
  cfg.burn_in = 1000;
  cfg.thin = 16;
  cfg.seed = 2024;
  std::vector<double> size2;
  glauber_run(cfg, [&](const ChainState& s) {
    ++obs[index.at(mask_of(s))];
    size2.push_back(s.size == 2 ? 1.0 : 0.0);
  });
  auto t = stats::chi_square_gof(obs, probs);
  EXPECT_GT(t.p_value, 0.01) << "chi2 = " << t.statistic;
  EXPECT_LT(std::abs(stats::moments(size2).mean - 2.0 / 7.0), 3 * stats::batch_means_se(size2));
}

TEST(Glauber, MeanSizeOnQ3) {
  const double exact = static_cast<double>(hardcore_exact(Dim(3), 1).mean_size);
  RunConfig cfg;
  cfg.d = 3;
  cfg.steps = 400000;
  cfg.burn_in = default_burn_in(3);
  cfg.thin = 16;
  cfg.seed = 99;
  std::vector<double> sizes;
  glauber_run(cfg, [&](const ChainState& s) { sizes.push_back(static_cast<double>(s.size)); });
  const double se = stats::batch_means_se(sizes);
  EXPECT_LT(std::abs(stats::moments(sizes).mean - exact), 3 * se);
}

TEST(Defects, AllEvenHasNoDefects) {
  VertexSet even;
  for (Vertex v = 0; v < 16; ++v)
    if (parity(v) == Parity::even) even.push_back(v);
  auto r = extract_defects(state_with(4, even), true);
  EXPECT_EQ(r.side, Parity::odd);
  EXPECT_TRUE(r.counts.empty());
  EXPECT_EQ(r.gamma_size, 0u);
}

TEST(Defects, SingleOddVertexAmongEvens) {
  // 0b00001 is odd; its neighbours are 0, 3, 5, 9, 17. Take even vertices away from them.
  VertexSet vs{0b00001};
  for (Vertex v = 0; v < 32; ++v)
    if (parity(v) == Parity::even && hamming(v, 0b00001) > 1) vs.push_back(v);
  canonicalize(vs);
  auto r = extract_defects(state_with(5, vs), true);
  EXPECT_EQ(r.side, Parity::odd);
  ASSERT_EQ(r.counts.size(), 1u);
  EXPECT_EQ(r.counts.begin()->first.key(), "1:@0");
  EXPECT_EQ(r.count("1:@0"), 1u);
  EXPECT_EQ(r.gamma_nbhd, 5u);
}

TEST(Defects, TieGoesToOddSide) {
  // 0b011 (even) and 0b100 (odd) are at distance 3.
  auto r = extract_defects(state_with(3, {0b011, 0b100}), true);
  EXPECT_EQ(r.side, Parity::odd);
  EXPECT_EQ(r.gamma_size, 1u);
}

TEST(Defects, PairAtDistanceTwoIsOneDefect) {
  auto r = extract_defects(state_with(6, {0b000001, 0b000111, 0b011000, 0b101000, 0b110000}), true);
  EXPECT_EQ(r.count("2:1@2"), 1u);
  EXPECT_EQ(r.gamma_size, 2u);
  EXPECT_EQ(r.gamma_nbhd, 10u);
}

TEST(Defects, ComponentsAgreeWithSquareComponentsOnSamples) {
  RunConfig cfg;
  cfg.d = 7;
  cfg.lambda = Rat(1, 2);
  cfg.steps = 60000;
  cfg.thin = 500;
  cfg.start = Start::empty;
  cfg.verify = true;
  EXPECT_NO_THROW(sample_chains(cfg, 2, 2));
}

TEST(Reproducibility, IdenticalSeedsGiveIdenticalCsv) {
  RunConfig cfg;
  cfg.d = 6;
  cfg.lambda = 1;
  cfg.steps = 30000;
  cfg.burn_in = 5000;
  cfg.thin = 250;
  cfg.seed = 77;
  auto a = sample_chains(cfg, 3, 1);
  auto b = sample_chains(cfg, 3, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    std::ostringstream sa, sb;
    write_csv(sa, a[c]);
    write_csv(sb, b[c]);
    EXPECT_EQ(sa.str(), sb.str());
  }
  std::ostringstream s0, s1;
  write_csv(s0, a[0]);
  write_csv(s1, a[1]);
  EXPECT_NE(s0.str(), s1.str());
}

TEST(DefectStatistics, ZeroDefectsAtLargeFugacity) {
  RunConfig cfg;
  cfg.d = 6;
  cfg.lambda = 200;
  cfg.steps = 200000;
  cfg.burn_in = 10000;
  cfg.thin = 100;
  auto reps = sample_chains(cfg)[0];
  auto summary = defect_statistics(reps, census(Dim(6), 1), 200);
  ASSERT_FALSE(summary.types.empty());
  const auto& single = summary.types.front();
  EXPECT_EQ(single.type.key(), "1:@0");
  EXPECT_LT(single.moments.mean, 0.01);
  ASSERT_TRUE(single.m_T.has_value());
  EXPECT_LT(*single.m_T, 1e-10);
}

TEST(DefectStatistics, NeedsSamples) {
  EXPECT_THROW(defect_statistics({}, census(Dim(5), 1), 1), PreconditionError);
}

TEST(Statistics, ChiSquarePoolsSmallCells) {
  auto t = stats::chi_square_gof({50, 30, 15, 4, 1}, {0.5, 0.3, 0.15, 0.04, 0.01});
  EXPECT_EQ(t.bins.size(), 4u);
  EXPECT_NEAR(t.statistic, 0.0, 1e-12);
  EXPECT_NEAR(t.p_value, 1.0, 1e-12);
}

TEST(Statistics, PoissonGofAcceptsExactFrequencies) {
  // Counts laid out at the Poisson(0.7) frequencies for 10^4 samples.
  boost::math::poisson_distribution<double> dist(0.7);
  std::vector<std::uint64_t> xs;
  for (unsigned k = 0; k < 8; ++k) {
    auto n = static_cast<std::size_t>(std::llround(1e4 * boost::math::pdf(dist, k)));
    xs.insert(xs.end(), n, k);
  }
  EXPECT_GT(stats::poisson_gof(xs, 0.7).p_value, 0.9);
  EXPECT_LT(stats::poisson_gof(xs, 1.4).p_value, 1e-6);
}

TEST(Statistics, JarqueBeraSeparatesShapes) {
  std::vector<double> flat, spike;
  for (int i = 0; i < 2000; ++i) flat.push_back(i % 100);
  for (int i = 0; i < 2000; ++i) spike.push_back(i % 50 == 0 ? 100.0 : 0.0);
  EXPECT_LT(stats::jarque_bera(flat).p_value, 1e-6);  // uniform: kurtosis −1.2
  EXPECT_LT(stats::jarque_bera(spike).p_value, 1e-6);
  std::vector<double> gauss;
  boost::math::normal_distribution<double> nd;
  for (int i = 1; i < 2000; ++i) gauss.push_back(boost::math::quantile(nd, i / 2000.0));
  EXPECT_GT(stats::jarque_bera(gauss).p_value, 0.5);
}

TEST(Statistics, IndependenceOnProductTable) {
  std::vector<std::uint64_t> a, b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 25; ++r) {
        a.push_back(static_cast<std::uint64_t>(i % 3));
        b.push_back(static_cast<std::uint64_t>(j));
      }
  EXPECT_NEAR(stats::independence_test(a, b).statistic, 0.0, 1e-9);
  auto dep = stats::independence_test(b, b);
  EXPECT_LT(dep.p_value, 1e-6);
}

TEST(Statistics, BatchMeansInflatesForCorrelatedData) {
  std::vector<double> iid, sticky;
  Rng r(5);
  double x = 0;
  for (int i = 0; i < 10000; ++i) {
    iid.push_back(static_cast<double>(r.below(2)));
    if (r.below(50) == 0) x = 1 - x;
    sticky.push_back(x);
  }
  const double naive = std::sqrt(stats::moments(sticky).variance / 10000.0);
  EXPECT_GT(stats::batch_means_se(sticky), 3 * naive);
  EXPECT_NEAR(stats::batch_means_se(iid), 0.005, 0.002);
}

TEST(Defects, SingletonMeanMatchesExactDistributionOnQ4) {
  // Exact E[# singleton defects] under μ_λ, from the full distribution.
  const Rat lambda(1);
  const auto exact = hardcore_exact(Dim(4), lambda);
  auto singletons = [](std::uint64_t mask) {
    VertexSet vs;
    for (Vertex v = 0; v < 16; ++v)
      if ((mask >> v) & 1u) vs.push_back(v);
    return Rat(static_cast<long long>(extract_defects(state_with(4, vs)).count("1:@0")));
  };
  const double want = static_cast<double>(exact.expectation(singletons));
  RunConfig cfg;
  cfg.d = 4;
  cfg.lambda = lambda;
  cfg.burn_in = default_burn_in(4);
  cfg.thin = 32;
  cfg.steps = cfg.burn_in + cfg.thin * 40000;
  cfg.seed = 31;
  std::vector<double> xs;
  const auto chains = sample_chains(cfg);
  for (const auto& r : chains[0]) xs.push_back(static_cast<double>(r.count("1:@0")));
  EXPECT_LT(std::abs(stats::moments(xs).mean - want), 3 * stats::batch_means_se(xs)) << "exact " << want;
}
