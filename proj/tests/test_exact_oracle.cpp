#include <gtest/gtest.h>

#include "hyperis/exact_oracle.hpp"

using namespace hyperis;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) {
  std::vector<BigInt> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(SizeProfile, SmallDimensions) {
  EXPECT_EQ(size_profile(Dim(1)).counts, ints({1, 2}));
  EXPECT_EQ(size_profile(Dim(2)).counts, ints({1, 4, 2}));
  EXPECT_EQ(size_profile(Dim(3)).total(), 35);
  EXPECT_EQ(size_profile(Dim(4)).total(), 743);
  EXPECT_EQ(size_profile(Dim(5)).total(), 254475);
  EXPECT_THROW(size_profile(Dim(6)), PreconditionError);
}

TEST(SizeProfile, InvariantsAndExhaustiveAgreement) {
  for (int dd = 1; dd <= 4; ++dd) {
    Dim d(dd);
    auto p = size_profile(d);
    EXPECT_EQ(p.counts[0], 1);
    EXPECT_EQ(p.counts[1], BigInt(d.vertex_count()));
    EXPECT_EQ(p.counts, exhaustive_profile(d).counts) << "d=" << dd;
  }
  // Both parity classes are maximum independent sets: i_N = 2 for d >= 2.
  EXPECT_EQ(size_profile(Dim(5)).counts.back(), 2);
}

TEST(InducedPoly, Examples) {
  EXPECT_EQ(induced_independence_poly({}, Dim(2)), ints({1, 4, 2}));
  for (int dd = 2; dd <= 4; ++dd) {
    Dim d(dd);
    auto p = induced_independence_poly(parity_class(Parity::odd, d), d);
    ASSERT_EQ(p.size(), d.N() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], binomial(d.N(), i));
    VertexSet all;
    for (Vertex v = 0; v < d.vertex_count(); ++v) all.push_back(v);
    EXPECT_EQ(induced_independence_poly(all, d), ints({1}));
  }
}

TEST(OddModel, DimensionThree) {
  auto om = odd_model_exact(Dim(3));
  for (Rat lam : {rat(1, 100), rat(1), rat(7, 3)}) {
    EXPECT_EQ(om.xi(lam), Rat(1) + Rat(4) * lam * pow(Rat(1) + lam, -3));
    EXPECT_EQ(om.z(lam), pow(Rat(1) + lam, 4) + Rat(4) * lam * (Rat(1) + lam));
  }
  EXPECT_EQ(om.xi(0), 1);
  EXPECT_EQ(om.configs.size(), 5u);
}

TEST(OddModel, MatchesAchievableSetsAndIsDominatedByZ) {
  for (int dd = 2; dd <= 4; ++dd) {
    Dim d(dd);
    auto om = odd_model_exact(d);
    auto ach = achievable_odd_sets_poly(d);
    EXPECT_EQ(om.z_odd, ach) << "d=" << dd;
    auto full = size_profile(d).counts;
    for (std::size_t m = 0; m < om.z_odd.size(); ++m) EXPECT_LE(om.z_odd[m], full[m]);
    for (Rat lam : {rat(1, 20), rat(2)}) EXPECT_EQ(om.z(lam), pow(Rat(1) + lam, d.N()) * om.xi(lam));
  }
}

TEST(Hardcore, Examples) {
  EXPECT_EQ(hardcore_exact(Dim(2), 1).Z, 7);
  EXPECT_EQ(hardcore_exact(Dim(3), 1).Z, 35);
  // E|I|/λ -> i_1 as λ -> 0.
  Rat tiny = rat(1, 1000000);
  Real ratio = to_real(hardcore_exact(Dim(2), tiny).mean_size / tiny);
  EXPECT_NEAR(ratio.convert_to<double>(), 4.0, 1e-4);
}

TEST(Hardcore, SizeIdentityIsExact) {
  auto prof = size_profile(Dim(4));
  for (Rat lam : {rat(1, 4), rat(1, 2), rat(1), rat(2)}) {
    auto h = hardcore_exact(Dim(4), lam);
    for (std::size_t m = 0; m < prof.counts.size(); ++m) {
      Rat mu = h.probability_of([m](std::uint64_t s) { return static_cast<std::size_t>(std::popcount(s)) == m; });
      EXPECT_EQ(Rat(prof.counts[m]), h.Z / pow(lam, static_cast<long long>(m)) * mu);
    }
    Rat mean = h.expectation([](std::uint64_t s) { return Rat(std::popcount(s)); });
    EXPECT_EQ(mean, h.mean_size);
  }
}
