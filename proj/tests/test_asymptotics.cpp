#include <gtest/gtest.h>

#include "hyperis/asymptotics.hpp"
#include "hyperis/exact_oracle.hpp"

using namespace hyperis;
using namespace hyperis::asym;
using sym::Poly;
using sym::RatFunc;
using sym::Var;

namespace {

const Poly l = sym::lam();
const Poly d = sym::dvar();
const Poly b = sym::beta();
const Poly omb = sym::one_minus_beta();
const Poly x = Poly::var(Var::X);

void expect_same(const RatFunc& got, const RatFunc& want) {
  EXPECT_TRUE((got - want).is_zero()) << "got " << got.to_string() << "\nwant " << want.to_string();
}

RatFunc b1_closed() { return RatFunc((d * b - Poly(1)) * b, 0, 3); }

RatFunc p2_closed() {
  RatFunc first(d * (d - Poly(1)) * (Poly(2) - b) * b.pow(3) - Poly(2) * omb.pow(2) * b.pow(2), 0, 4);
  RatFunc second(b * (Poly(1) - d * b).pow(2), 0, 3);
  return first * Rat(1, 4) - second * Rat(1, 2);
}

/// Solves expected_size_truncated(d, λ, k) = βN for λ by bisection.
Rat solve_expected_size(Dim dim, const Rat& beta, int k) {
  Rat lo(1, 100), hi(10);
  const Rat target = beta * Rat(BigInt(dim.N()));
  for (int it = 0; it < 70; ++it) {
    Rat mid = (lo + hi) / 2;
    (expected_size_truncated(dim, mid, k) < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST(RPoly, FirstTwoOrdersMatchClosedForms) {
  EXPECT_EQ(R_poly(1), l);
  Poly r2 = ((Poly(2) * l.pow(3) + l.pow(4)) * d * (d - Poly(1)) - Poly(2) * l.pow(2)) * Rat(1, 4);
  EXPECT_EQ(R_poly(2), r2);
}

TEST(RPoly, SizeOneTermAtUnitFugacity) {
  Rat v = R_poly(1).evaluate(bind_lambda_d(1, 10)) * Rat(BigInt(Dim(10).N())) * pow(Rat(2), -10);
  EXPECT_EQ(v, Rat(1, 2));
}

TEST(RPoly, ThirdOrderReproducesDirectClusterSums) {
  const Poly r3 = R_poly(3);
  EXPECT_LE(r3.degree(Var::d), 6u);
  EXPECT_LE(r3.degree(Var::lambda), 27u);
  for (int dd : {15, 16}) {
    sym::Bindings bd;
    bd.set(Var::d, Rat(dd));
    Poly direct = cluster_sum(Dim(dd), 3, Observable::one()).r_poly();
    Poly at_d;
    for (const auto& [m, c] : r3.terms()) {
      sym::Monomial mm = m;
      mm.at(Var::d) = 0;
      at_d += Poly::monomial(mm, c * pow(Rat(dd), m[Var::d]));
    }
    EXPECT_EQ(at_d, direct) << "d = " << dd;
  }
}

TEST(RPoly, BeyondGuaranteedRangeNeedsOptIn) {
  EXPECT_THROW(R_poly(4), PreconditionError);
  EXPECT_THROW(R_poly(0), PreconditionError);
}

TEST(FPoly, FirstOrder) { EXPECT_EQ(F_poly(1), l + (Poly(1) - d) * l.pow(2)); }

TEST(FPoly, MatchesExpectedSizeClusterSums) {
  // F_j(λ)(1+λ)^{-jd-1} against the nbhd/size observables at fixed d.
  for (int j = 1; j <= 2; ++j)
    for (int dd : {6, 9}) {
      const Rat lambda(1, 3);
      Rat via_f = F_poly(j).evaluate(bind_lambda_d(lambda, dd)) * pow(Rat(1) + lambda, -(j * dd + 1));
      auto sums = cluster_sums(Dim(dd), j, {Observable::one(), Observable::nbhd()});
      Rat via_clusters = Rat(j) * sums[0].stratum(lambda) - lambda / (Rat(1) + lambda) * sums[1].stratum(lambda);
      EXPECT_EQ(via_f, via_clusters / Rat(BigInt(Dim(dd).N()))) << "j=" << j << " d=" << dd;
    }
}

TEST(XForms, GAndSClosedForms) {
  auto g1 = G_poly(1);
  EXPECT_EQ(g1.c, 2u);
  EXPECT_EQ(g1.poly, omb * (b + x) + (Poly(1) - d) * (b + x).pow(2));
  auto s1 = S_poly(1);
  EXPECT_EQ(s1.c, 1u);
  EXPECT_EQ(s1.poly, b + x);
  auto s2 = S_poly(2);
  EXPECT_EQ(s2.c, 4u);
  EXPECT_EQ(s2.poly, Rat(1, 4) * d * (d - Poly(1)) * (Poly(2) + x - b) * (x + b).pow(3) -
                         Rat(1, 2) * omb.pow(2) * (x + b).pow(2));
}

TEST(XForms, RoundTripThroughLambda) {
  // (1-β)^{-c} S_j(β, d, X) at X = λ(1-β) - β must give back R_j(λ).
  for (int j = 1; j <= 2; ++j) {
    auto s = S_poly(j);
    const Rat beta(2, 7), lambda(5, 3);
    sym::Bindings bx;
    bx.set(Var::beta, beta).set(Var::d, Rat(11)).set(Var::X, lambda * (Rat(1) - beta) - beta);
    Rat lhs = s.poly.evaluate(bx) * pow(Rat(1) - beta, -static_cast<long long>(s.c));
    EXPECT_EQ(lhs, R_poly(j).evaluate(bind_lambda_d(lambda, 11)));
  }
}

TEST(QFunc, FirstOrderClosedForm) {
  const Poly b1 = Poly::var(Var::B1);
  RatFunc want = RatFunc(b1 * omb.pow(2)) + RatFunc(b * omb + (Poly(1) - d) * b.pow(2), 0, 1);
  expect_same(Q_func(1), want);
}

TEST(QFunc, LinearInLeadingBWithFixedCoefficient) {
  auto q = Q_table(3);
  for (int j = 1; j <= 3; ++j) {
    const auto& qj = q[static_cast<std::size_t>(j - 1)];
    const Var bj = sym::B_var(j);
    EXPECT_EQ(qj.numerator().degree(bj), 1u);
    expect_same(RatFunc(qj.numerator().coefficient(bj, 1), qj.beta_power(), qj.one_minus_beta_power()),
                RatFunc(omb.pow(2)));
  }
}

TEST(ComputeB, ClosedFormAndExample) {
  EXPECT_TRUE(compute_B(0).empty());
  auto bt = compute_B(1);
  ASSERT_EQ(bt.size(), 1u);
  expect_same(bt[0], b1_closed());
  EXPECT_EQ(bt[0].evaluate(bind_beta_d(Rat(1, 2), 4)), 4);
}

TEST(ComputeB, ResidualsVanishThroughThirdOrder) {
  auto bt = compute_B(3);
  ASSERT_EQ(bt.size(), 3u);
  auto q = Q_table(3);
  for (const auto& qj : q) {
    RatFunc r = qj;
    for (int i = 1; i <= 3; ++i) r = r.substitute(sym::B_var(i), bt[static_cast<std::size_t>(i - 1)]);
    EXPECT_TRUE(r.is_zero());
  }
}

TEST(ComputeB, FugacityApproachesNumericRootOfTruncatedExpectation) {
  // Independent route: bisection on the cluster-sum expected size at fixed d.
  const Dim dim(24);
  const Rat beta(2, 5);
  const Rat y = pow(Rat(3, 5), 24);
  const Rat lam0 = beta / (Rat(1) - beta);
  auto b2 = compute_B(2);
  Rat lam1 = lam0 + b2[0].evaluate(bind_beta_d(beta, 24)) * y;
  Rat lam2 = lam1 + b2[1].evaluate(bind_beta_d(beta, 24)) * y * y;
  Rat root = solve_expected_size(dim, beta, 2);
  auto err = [&](const Rat& v) { return abs(v - root); };
  EXPECT_LT(err(lam1), err(lam0) * Rat(1, 20));
  EXPECT_LT(err(lam2), err(lam1) * Rat(1, 20));
}

TEST(ComputeP, LowOrdersMatchClosedForms) {
  auto pt = compute_P(3);
  EXPECT_EQ(pt.r, 1);
  ASSERT_EQ(pt.P.size(), 2u);
  expect_same(pt.P[0], RatFunc(b, 0, 1));
  expect_same(pt.P[1], p2_closed());
  expect_same(pt.log_part[1], (b1_closed() * b1_closed()).times_one_minus_beta(3).times_beta(-1) * Rat(1, 2));
}

TEST(ComputeP, TrivialOrder) {
  auto pt = compute_P(1);
  EXPECT_TRUE(pt.P.empty());
  EXPECT_EQ(pt.r, 0);
}

TEST(ComputeP, ExtraFugacityTermsDoNotChangeCoefficients) {
  // B_i with i > ⌈t/2⌉-1 only reach Y^t and beyond.
  for (int t : {3, 4}) {
    auto base = compute_P(t);
    auto more = compute_P(t, {}, fugacity_order(t) + 1);
    ASSERT_EQ(base.P.size(), more.P.size());
    for (std::size_t j = 0; j < base.P.size(); ++j) expect_same(more.P[j], base.P[j]);
  }
}

TEST(LambdaBeta, Examples) {
  EXPECT_EQ(lambda_beta(Rat(1, 3), Dim(9), 2).value, Rat(1, 2));
  const Rat beta(2, 5);
  Rat want = beta / (Rat(1) - beta) + b1_closed().evaluate(bind_beta_d(beta, 12)) * pow(Rat(3, 5), 12);
  EXPECT_EQ(lambda_beta(beta, Dim(12), 4).value, want);
  // B_1(1/2, 10) = 16, so the correction is 16 · 2^{-10}.
  EXPECT_EQ(lambda_beta(Rat(1, 2), Dim(10), 4).value, Rat(1) + Rat(16, 1024));
}

TEST(LambdaBeta, WarnsOutsideRegime) {
  EXPECT_FALSE(lambda_beta(Rat(1, 100), Dim(10), 2).warnings.empty());
  EXPECT_TRUE(lambda_beta(Rat(1, 2), Dim(10), 2).warnings.empty());
  EXPECT_THROW(lambda_beta(Rat(0), Dim(10), 2), PreconditionError);
}

TEST(LogZ, TrivialAndSecondOrder) {
  PrecisionScope ps(60);
  auto z1 = log_Z_asymptotic(1, Dim(7), 1);
  EXPECT_LT(abs(z1.value - 65 * log(Real(2))), Real("1e-50"));
  const Rat lambda(3, 2);
  auto z2 = log_Z_asymptotic(lambda, Dim(9), 2);
  Real galvin = to_real(lambda * Rat(256) * pow(Rat(1) + lambda, -9));
  EXPECT_LT(abs(z2.value - log(Real(2)) - 256 * log_of(Rat(5, 2)) - galvin), Real("1e-50"));
}

TEST(LogZ, CloserToExactAtHigherOrderOnQ5) {
  const Rat exact = size_profile(Dim(5)).partition_function(1);
  Real lz = log_of(exact);
  Real e2 = abs(log_Z_asymptotic(1, Dim(5), 2).value - lz);
  Real e3 = abs(log_Z_asymptotic(1, Dim(5), 3).value - lz);
  EXPECT_LT(e3, e2);
}

TEST(LogZ, IncrementsDecreaseWithOrder) {
  for (int dd = 8; dd <= 14; ++dd) {
    std::vector<Real> v;
    for (int t = 1; t <= 4; ++t) v.push_back(log_Z_asymptotic(1, Dim(dd), t).value);
    for (int t = 1; t + 1 < 4; ++t) EXPECT_LT(abs(v[t + 1] - v[t]), abs(v[t] - v[t - 1])) << "d=" << dd;
  }
}

TEST(LogCount, TrivialAndGalvinForms) {
  PrecisionScope ps(60);
  const Rat beta(1, 3);
  auto c1 = log_count_asymptotic(beta, Dim(9), 1);
  EXPECT_LT(abs(c1.via_P.value - log(Real(2)) - log_of(binomial(256, 85))), Real("1e-50"));
  auto c2 = log_count_asymptotic(beta, Dim(9), 2);
  Real galvin = 256 * to_real(beta / (Rat(1) - beta) * pow(Rat(2, 3), 9));
  EXPECT_LT(abs(c2.via_P.value - c1.via_P.value - galvin), Real("1e-50"));
}

TEST(LogCount, PathsAgreeWithinStirlingError) {
  for (int dd : {10, 11, 12}) {
    const Dim dim(dd);
    const Rat beta(1, 2);
    auto c = log_count_asymptotic(beta, dim, 3);
    Real stirling_err = abs(stirling_binom(dim.N(), c.m) - log_binomial(dim.N(), c.m));
    EXPECT_LT(abs(c.via_P.value - c.via_lambda.value), 10 * stirling_err) << "d=" << dd;
  }
}

TEST(LogCount, SecondOrderBeatsTrivialOnQ5) {
  const auto prof = size_profile(Dim(5));
  Real exact = log_of(prof.counts.at(8));
  auto c1 = log_count_asymptotic(Rat(1, 2), Dim(5), 1);
  auto c2 = log_count_asymptotic(Rat(1, 2), Dim(5), 2);
  EXPECT_EQ(c1.m, 8u);
  EXPECT_LT(abs(c2.via_P.value - exact), abs(c1.via_P.value - exact));
}

TEST(Stirling, MatchesExactBinomials) {
  PrecisionScope ps(50);
  EXPECT_LT(abs(exp(stirling_binom(100, 50) - log_binomial(100, 50)) - 1), Real("0.01"));
  EXPECT_LT(abs(exp(stirling_binom(10000, 5000) - log_binomial(10000, 5000)) - 1), Real("0.0001"));
  EXPECT_LT(abs(stirling_binom(300, 70) - stirling_binom(300, 230)), Real("1e-40"));
  EXPECT_THROW(stirling_binom(10, 0), PreconditionError);
  EXPECT_THROW(stirling_binom(10, 10), PreconditionError);
}

TEST(BinomialLclt, Examples) {
  EXPECT_EQ(binomial_lclt(2, Rat(1, 2), 1).pmf, Rat(1, 2));
  auto peak = binomial_lclt(1000000, Rat(1, 2), 500000, 40);
  EXPECT_LT(abs(peak.ratio_to_peak - 1), Real("0.001"));
  auto off = binomial_lclt(1000000, Rat(1, 2), 500500, 40);
  // exp(-500²/(2·250000)) = e^{-1/2}
  EXPECT_LT(abs(off.ratio_to_peak - exp(Real(-0.5))), Real("0.001"));
  EXPECT_LT(abs(off.ratio_to_gaussian - 1), Real("0.001"));
}

TEST(StructuredCount, ReducesToLambdaPath) {
  auto base = log_count_asymptotic(Rat(1, 2), Dim(10), 3);
  auto s = structured_count(Rat(1, 2), Dim(10), 3, {}, {});
  EXPECT_EQ(s.value, base.via_lambda.value);
}

TEST(StructuredCount, PoissonAtZeroAndSingletonMean) {
  PrecisionScope ps(kDefaultDigits);
  const Dim dim(10);
  auto base = structured_count(Rat(1, 2), dim, 4, {}, {});
  auto with0 = structured_count(Rat(1, 2), dim, 4, {{"1:@0", 0u}}, {});
  const Rat lb = lambda_beta(Rat(1, 2), dim, 4).value;
  const Rat rho = Rat(512) * lb * pow(Rat(1) + lb, -10);
  EXPECT_LT(abs(with0.value - base.value + to_real(rho)), Real("1e-60"));
  EXPECT_NEAR(static_cast<double>(rho), 0.47, 0.02);
  auto means = type_means({"1:@0"}, dim, lb);
  EXPECT_EQ(means.at("1:@0"), rho);
}

TEST(StructuredCount, GaussianFactorAndBadMean) {
  PrecisionScope ps(kDefaultDigits);
  auto base = structured_count(Rat(1, 2), Dim(10), 3, {}, {});
  auto g = structured_count(Rat(1, 2), Dim(10), 3, {}, {{"2:1@2", DivergingType{Rat(8), Rat(2)}}});
  Real want = -Real(4) / 16 - log(2 * pi_real() * 8) / 2;
  EXPECT_LT(abs(g.value - base.value - want), Real("1e-60"));
  EXPECT_THROW(structured_count(Rat(1, 2), Dim(10), 3, {}, {{"2:1@2", DivergingType{Rat(-1), Rat(0)}}}),
               PreconditionError);
}
