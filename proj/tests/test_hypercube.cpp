#include <gtest/gtest.h>

#include <random>

#include "hyperis/hypercube.hpp"

using namespace hyperis;

namespace {

VertexSet random_same_parity(std::mt19937_64& rng, Dim d, Parity p, std::size_t max_size) {
  std::uniform_int_distribution<Vertex> pick(0, d.vertex_count() - 1);
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  VertexSet s;
  std::size_t n = std::min<std::size_t>(size(rng), d.N());
  while (s.size() < n) {
    Vertex v = pick(rng);
    if (parity(v) != p) v ^= 1;
    s.push_back(v);
    canonicalize(s);
  }
  return s;
}

bool subset(const VertexSet& a, const VertexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

TEST(Hypercube, NeighborsExamples) {
  EXPECT_EQ(neighbors(0b000, Dim(3)), (VertexSet{0b001, 0b010, 0b100}));
  EXPECT_EQ(neighbors(0b111, Dim(3)), (VertexSet{0b011, 0b101, 0b110}));
  EXPECT_EQ(neighbors(0, Dim(1)), (VertexSet{1}));
  EXPECT_THROW(neighbors(8, Dim(3)), PreconditionError);
  EXPECT_THROW(Dim(0), PreconditionError);
  EXPECT_EQ(Dim(10).N(), 512u);
}

TEST(Hypercube, NeighborsHaveOppositeParity) {
  for (int dd = 1; dd <= 8; ++dd) {
    Dim d(dd);
    for (Vertex v = 0; v < d.vertex_count(); ++v) {
      auto nb = neighbors(v, d);
      ASSERT_EQ(nb.size(), static_cast<std::size_t>(dd));
      for (Vertex u : nb) EXPECT_NE(parity(u), parity(v));
    }
  }
}

TEST(Hypercube, NeighborhoodSizes) {
  EXPECT_EQ(neighborhood_size({1}, Dim(4)), 4u);
  EXPECT_EQ(neighborhood_size({0b001, 0b010}, Dim(3)), 4u);
  for (int dd = 3; dd <= 8; ++dd) EXPECT_EQ(neighborhood_size({0b001, 0b010}, Dim(dd)), static_cast<std::size_t>(2 * dd - 2));
  EXPECT_THROW(neighborhood({0b001, 0b011}, Dim(3)), PreconditionError);
}

TEST(Hypercube, ClosureExamples) {
  EXPECT_EQ(closure({1}, Dim(3)), (VertexSet{1}));
  EXPECT_EQ(closure({0b001, 0b010}, Dim(3)), parity_class(Parity::odd, Dim(3)));
  EXPECT_TRUE(closure({}, Dim(3)).empty());
}

TEST(Hypercube, ClosureOperatorAxiomsOnRandomSets) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    Dim d(3 + trial % 5);
    Parity p = trial % 2 ? Parity::odd : Parity::even;
    VertexSet s = random_same_parity(rng, d, p, 6);
    VertexSet t = s;
    VertexSet extra = random_same_parity(rng, d, p, 3);
    t.insert(t.end(), extra.begin(), extra.end());
    canonicalize(t);
    VertexSet cs = closure(s, d);
    EXPECT_TRUE(subset(s, cs));
    EXPECT_EQ(closure(cs, d), cs);
    EXPECT_TRUE(subset(cs, closure(t, d)));
    EXPECT_EQ(neighborhood(cs, d), neighborhood(s, d));
    EXPECT_TRUE(subset(neighborhood(s, d), neighborhood(t, d)));
  }
}

TEST(Hypercube, SquareComponentsExamples) {
  EXPECT_EQ(square_components({5}, Dim(4)).size(), 1u);
  auto two = square_components({1, 1 ^ 0b110}, Dim(4));
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0].size(), 2u);
  EXPECT_EQ(square_components({0b0001, 0b1110}, Dim(4)).size(), 2u);
}

TEST(Hypercube, SquareComponentsArePartitionOfConnectedSeparatedBlocks) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Dim d(4 + trial % 4);
    VertexSet s = random_same_parity(rng, d, Parity::odd, 12);
    auto comps = square_components(s, d);
    VertexSet all;
    for (const auto& c : comps) {
      EXPECT_TRUE(square_connected(c, d));
      all.insert(all.end(), c.begin(), c.end());
    }
    canonicalize(all);
    EXPECT_EQ(all, s);
    for (std::size_t a = 0; a < comps.size(); ++a)
      for (std::size_t b = a + 1; b < comps.size(); ++b)
        for (Vertex x : comps[a])
          for (Vertex y : comps[b]) EXPECT_NE(hamming(x, y), 2);
  }
}

TEST(Hypercube, DefectParityTieGoesToOdd) {
  EXPECT_EQ(defect_parity(3, 3), Parity::odd);
  EXPECT_EQ(defect_parity(2, 5), Parity::odd);
  EXPECT_EQ(defect_parity(5, 2), Parity::even);
}
