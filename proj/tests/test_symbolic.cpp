#include <gtest/gtest.h>

#include <random>

#include "hyperis/symbolic/interpolate.hpp"
#include "hyperis/symbolic/series.hpp"

using namespace hyperis;
using namespace hyperis::sym;

namespace {

Poly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(0, 4), coef(-5, 5), ex(0, 2), den(1, 3);
  Poly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Monomial m;
    m.at(Var::lambda) = static_cast<std::uint8_t>(ex(rng));
    m.at(Var::d) = static_cast<std::uint8_t>(ex(rng));
    m.at(Var::beta) = static_cast<std::uint8_t>(ex(rng));
    p += Poly::monomial(m, rat(coef(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST(Poly, RingAxiomsOnRandomValues) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Poly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Poly, DerivativeOfF1) {
  Poly f = lam() + (Poly(1) - dvar()) * lam().pow(2);
  EXPECT_EQ(f.derivative(Var::lambda), Poly(1) + Poly(2) * (Poly(1) - dvar()) * lam());
}

TEST(Poly, EvaluateAndCanonicalText) {
  Bindings b;
  b.set(Var::lambda, 3);
  EXPECT_EQ(lam().evaluate(b), 3);
  Poly p = Poly(2) * lam().pow(3) * dvar() - rat(1, 2) * lam();
  EXPECT_EQ(p.to_string(), "2 * λ^3 d + -1/2 * λ");
  EXPECT_THROW(dvar().evaluate(b), PreconditionError);
}

TEST(Poly, DivideByOneMinus) {
  Poly p = one_minus_beta().pow(3) * (dvar() + beta());
  auto q = p.divide_by_one_minus(Var::beta);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, one_minus_beta().pow(2) * (dvar() + beta()));
  EXPECT_FALSE((beta() + Poly(2)).divide_by_one_minus(Var::beta).has_value());
}

TEST(RatFunc, NormalizesAndCompares) {
  RatFunc a(beta() * one_minus_beta(), 1, 3);
  RatFunc b(Poly(1), 0, 2);
  EXPECT_EQ(a, b);
  RatFunc sum = RatFunc(Poly(1), 0, 1) + RatFunc(Poly(-1), 0, 1);
  EXPECT_TRUE(sum.is_zero());
  EXPECT_EQ(RatFunc(one_minus_beta().pow(2)).inverse(), RatFunc(Poly(1), 0, 2));
  EXPECT_THROW(RatFunc(beta() + Poly(3)).inverse(), AlgebraError);
}

TEST(RatFunc, EvaluateB1Example) {
  RatFunc b1((dvar() * beta() - Poly(1)) * beta(), 0, 3);
  Bindings bind;
  bind.set(Var::beta, rat(1, 2)).set(Var::d, 4);
  EXPECT_EQ(b1.evaluate(bind), 4);
}

TEST(TruncSeries, SquareOfX) {
  const Poly b1 = Poly::var(Var::B1);
  TruncSeries x = TruncSeries::monomial(3, 1, RatFunc(b1 * one_minus_beta()));
  TruncSeries sq = x * x;
  EXPECT_EQ(sq[2], RatFunc(b1.pow(2) * one_minus_beta().pow(2)));
  EXPECT_FALSE(sq.truncated());
  TruncSeries cube = sq * x;
  EXPECT_TRUE(cube.is_zero());
  EXPECT_TRUE(cube.truncated());
}

TEST(TruncSeries, MultiplicationMatchesPolyThenTruncate) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t order = 4;
    std::vector<Poly> a(order), b(order);
    Poly pa, pb;
    TruncSeries sa(order), sb(order);
    for (std::size_t j = 0; j < order; ++j) {
      a[j] = random_poly(rng);
      b[j] = random_poly(rng);
      sa[j] = a[j];
      sb[j] = b[j];
      pa += a[j] * Poly::var(Var::Y, static_cast<unsigned>(j));
      pb += b[j] * Poly::var(Var::Y, static_cast<unsigned>(j));
    }
    Poly prod = pa * pb;
    TruncSeries sp = sa * sb;
    for (std::size_t j = 0; j < order; ++j) EXPECT_EQ(sp[j], RatFunc(prod.coefficient(Var::Y, static_cast<unsigned>(j))));
  }
}

TEST(NegBinomial, FirstCoefficientAndZeroSeries) {
  TruncSeries x = TruncSeries::monomial(3, 1, RatFunc(Poly::var(Var::B1)));
  Poly k = dvar() + Poly(1);
  TruncSeries e = neg_binomial_expand(k, x, 2);
  EXPECT_EQ(e[1], RatFunc(-k * Poly::var(Var::B1)));
  EXPECT_EQ(neg_binomial_coefficient(k, 2).degree(Var::d), 2u);
  TruncSeries zero(3);
  TruncSeries one = neg_binomial_expand(k, zero, 3);
  EXPECT_EQ(one[0], RatFunc(1));
  EXPECT_TRUE(one[1].is_zero() && one[2].is_zero());
}

TEST(NegBinomial, AgreesWithExactEvaluationAtRationalPoint) {
  // Y-degree-one series X = x0·Y; at order r+1 the truncation is exact through X^r.
  const Rat x0 = rat(1, 7);
  const unsigned r = 4;
  TruncSeries x = TruncSeries::monomial(r + 1, 1, RatFunc(x0));
  for (int kk : {1, 3, 6}) {
    TruncSeries e = neg_binomial_expand(Poly(kk), x, r);
    Rat total = 0;
    for (std::size_t j = 0; j <= r; ++j) total += e[j].evaluate(Bindings{}) * pow(Rat(1), 0);
    Rat ref = 0;
    for (unsigned i = 0; i <= r; ++i) ref += Rat(neg_binomial_coefficient(Poly(kk), i).constant_term()) * pow(x0, i);
    EXPECT_EQ(total, ref);
    // Exact (1+x0)^-k minus the partial sum is O(x0^(r+1)).
    Rat exact = pow(Rat(1) + x0, -kk);
    Real gap = abs(to_real(exact - total));
    EXPECT_LT(gap, to_real(Rat(binomial(kk + r, r + 1)) * pow(x0, r + 1)) * 1.0001);
  }
}

TEST(LogRatio, LowOrderCoefficients) {
  const Poly b1 = Poly::var(Var::B1);
  TruncSeries x = TruncSeries::monomial(3, 1, RatFunc(b1));
  TruncSeries l = log_ratio_expand(x, 3);
  EXPECT_TRUE(l[1].is_zero());
  EXPECT_EQ(l[2], RatFunc(one_minus_beta() * b1.pow(2), 1, 0) * rat(1, 2));
  EXPECT_TRUE(log_ratio_expand(TruncSeries(3), 3).is_zero());
}

TEST(Interpolate, RecoversPolynomialAndRejectsBadBound) {
  std::vector<Sample> s;
  for (int d = 3; d <= 6; ++d) s.push_back({Rat(d), Poly(Rat(d * d))});
  EXPECT_EQ(interpolate_poly(s, 2), dvar().pow(2));
  std::vector<Sample> cubic;
  for (int d = 3; d <= 6; ++d) cubic.push_back({Rat(d), Poly(Rat(d * d * d))});
  EXPECT_THROW(interpolate_poly(cubic, 2), InterpolationError);
  std::vector<Sample> lam_samples;
  for (int d = 3; d <= 5; ++d) lam_samples.push_back({Rat(d), lam() * Rat(d - 1)});
  EXPECT_EQ(interpolate_poly(lam_samples, 1), lam() * (dvar() - Poly(1)));
}
