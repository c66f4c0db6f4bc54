#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperis/clusters.hpp"
#include "hyperis/polymers.hpp"
#include "hyperis/symbolic/interpolate.hpp"
#include "hyperis/symbolic/ratfunc.hpp"
#include "hyperis/symbolic/series.hpp"

namespace hyperis::asym {

using sym::Poly;
using sym::RatFunc;
using sym::TruncSeries;
using sym::Var;

/// Largest j computed without the best-effort flag.
inline constexpr int kGuaranteedR = 3;

struct ROptions {
  unsigned threads = 1;
  bool allow_beyond_guaranteed = false;
  std::uint64_t node_budget = 2'000'000'000;
};

/// d values used to interpolate R_j: 2j+1 .. 4j+2 (degree bound 2j plus one check point).
inline std::vector<int> r_grid(int j) {
  std::vector<int> ds;
  for (int d = 2 * j + 1; d <= 4 * j + 2; ++d) ds.push_back(d);
  return ds;
}

namespace detail {

inline std::mutex& r_mutex() {
  static std::mutex m;
  return m;
}
inline std::map<int, Poly>& r_cache() {
  static std::map<int, Poly> c;
  return c;
}

}  // namespace detail

/// R_j(λ, d): size-j cluster strata at fixed d, interpolated in d.
inline Poly R_poly(int j, const ROptions& opt = {}) {
  require(j >= 1, "R_j needs j >= 1");
  require(j <= kGuaranteedR || opt.allow_beyond_guaranteed,
          "R_j beyond j = 3 is best-effort; enable it explicitly");
  require(j <= 6, "R_j is limited to j <= 6 by the cluster enumerator");
  {
    std::lock_guard lock(detail::r_mutex());
    if (auto it = detail::r_cache().find(j); it != detail::r_cache().end()) return it->second;
  }
  std::vector<sym::Sample> samples;
  for (int d : r_grid(j))
    samples.push_back({Rat(d), cluster_sum(Dim(d), j, Observable::one(), opt.threads, Budget(opt.node_budget)).r_poly()});
  Poly r = sym::interpolate_poly(samples, static_cast<unsigned>(2 * j));
  if (r.degree(Var::lambda) > static_cast<unsigned>(3 * j * j))
    throw AlgebraError("R_" + std::to_string(j) + " exceeds the λ-degree bound 3j^2");
  std::lock_guard lock(detail::r_mutex());
  detail::r_cache().emplace(j, r);
  return r;
}

/// F_j = λ(1+λ) ∂_λ R_j − j d λ R_j, the order-j term of the expected-size expansion.
inline Poly F_poly(int j, const ROptions& opt = {}) {
  Poly r = R_poly(j, opt);
  const Poly l = sym::lam();
  return l * (Poly(1) + l) * r.derivative(Var::lambda) - Poly(j) * sym::dvar() * l * r;
}

/// A polynomial in λ rewritten through λ = (β+X)/(1−β): f(λ) = (1−β)^{−c} · poly(β, d, X).
struct XForm {
  Poly poly;
  unsigned c = 0;
};

inline XForm to_x_form(const Poly& f) {
  XForm out;
  out.c = f.degree(Var::lambda);
  const auto coeffs = f.coefficients(Var::lambda);
  const Poly bx = sym::beta() + Poly::var(Var::X);
  for (std::size_t a = 0; a < coeffs.size(); ++a)
    out.poly += coeffs[a] * bx.pow(static_cast<unsigned>(a)) * sym::one_minus_beta().pow(out.c - static_cast<unsigned>(a));
  return out;
}

inline XForm G_poly(int j, const ROptions& opt = {}) { return to_x_form(F_poly(j, opt)); }
inline XForm S_poly(int j, const ROptions& opt = {}) { return to_x_form(R_poly(j, opt)); }

namespace detail {

/// λ = β/(1−β) + X/(1−β).
inline TruncSeries lambda_series(const TruncSeries& x) {
  TruncSeries l = x * RatFunc(Poly(1), 0, 1);
  l[0] = RatFunc(sym::beta(), 0, 1);
  return l;
}

inline TruncSeries apply_lambda_poly(const Poly& f, const TruncSeries& lam) {
  std::vector<RatFunc> cs;
  for (const auto& c : f.coefficients(Var::lambda)) cs.emplace_back(c);
  return sym::apply_polynomial(cs, lam);
}

/// X = Σ_i B_i (1−β) Y^i with symbolic B_1..B_r.
inline TruncSeries symbolic_x(std::size_t order, int r) {
  TruncSeries x(order);
  for (int i = 1; i <= r && static_cast<std::size_t>(i) < order; ++i)
    x[static_cast<std::size_t>(i)] = RatFunc(Poly::var(sym::B_var(i)) * sym::one_minus_beta());
  return x;
}

/// X with the solved B_1..B_r.
inline TruncSeries solved_x(std::size_t order, const std::vector<RatFunc>& b) {
  TruncSeries x(order);
  for (std::size_t i = 1; i <= b.size() && i < order; ++i) x[i] = b[i - 1].times_one_minus_beta(1);
  return x;
}

inline bool depends_on_b_above(const RatFunc& q, int j) {
  for (int i = j + 1; i <= 6; ++i)
    if (q.numerator().depends_on(sym::B_var(i))) return true;
  return false;
}

}  // namespace detail

/// Q_1..Q_r: Y^j coefficients of λ/(1+λ) + Σ_{i<=r} F_i(λ)(1+λ)^{−id−1} at λ = (β+X)/(1−β),
/// symbolic in B_1..B_r.
inline std::vector<RatFunc> Q_table(int r, const ROptions& opt = {}) {
  require(r >= 0 && r <= 6, "Q_j is available for 0 <= r <= 6");
  if (r == 0) return {};
  const std::size_t order = static_cast<std::size_t>(r) + 1;
  const TruncSeries x = detail::symbolic_x(order, r);
  const TruncSeries lam = detail::lambda_series(x);
  const unsigned xr = static_cast<unsigned>(r);

  TruncSeries beta_plus_x = x;
  beta_plus_x[0] = RatFunc(sym::beta());
  TruncSeries total = beta_plus_x * sym::neg_binomial_expand(Poly(1), x, xr);
  for (int i = 1; i <= r; ++i) {
    const Poly k = Poly(i) * sym::dvar() + Poly(1);
    TruncSeries term = detail::apply_lambda_poly(F_poly(i, opt), lam) * sym::neg_binomial_expand(k, x, xr);
    total += term.shifted(static_cast<std::size_t>(i)) * RatFunc(sym::one_minus_beta());
  }
  if (total[0].numerator() != sym::beta() || !total[0].is_polynomial())
    throw AlgebraError("expected-size expansion has constant term " + total[0].to_string() + ", not β");
  return {total.coefficients().begin() + 1, total.coefficients().end()};
}

/// Q_j alone, symbolic in B_1..B_j.
inline RatFunc Q_func(int j, const ROptions& opt = {}) {
  require(j >= 1, "Q_j needs j >= 1");
  return Q_table(j, opt).back();
}

/// B_1..B_r solving Q_j = 0 order by order. Each Q_j is checked to be linear in B_j with
/// coefficient (1−β)², and the solved values are substituted back as a residual check.
inline std::vector<RatFunc> compute_B(int r, const ROptions& opt = {}) {
  const auto q = Q_table(r, opt);
  const RatFunc lead(sym::one_minus_beta().pow(2));
  std::vector<RatFunc> b;
  for (int j = 1; j <= r; ++j) {
    RatFunc qj = q[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i < j; ++i) qj = qj.substitute(sym::B_var(i), b[static_cast<std::size_t>(i - 1)]);
    const Var bj = sym::B_var(j);
    if (detail::depends_on_b_above(qj, j))
      throw AlgebraError("Q_" + std::to_string(j) + " depends on a later B");
    if (qj.numerator().degree(bj) != 1)
      throw AlgebraError("Q_" + std::to_string(j) + " is not linear in B_" + std::to_string(j));
    const RatFunc linear = RatFunc(qj.numerator().coefficient(bj, 1), qj.beta_power(), qj.one_minus_beta_power());
    if (!(linear - lead).is_zero())
      throw AlgebraError("B_" + std::to_string(j) + " coefficient in Q_" + std::to_string(j) + " is " +
                         linear.to_string() + ", expected (1-β)^2");
    const RatFunc rest = RatFunc(qj.numerator().coefficient(bj, 0), qj.beta_power(), qj.one_minus_beta_power());
    b.push_back((-rest).times_one_minus_beta(-2));
  }
  for (int j = 1; j <= r; ++j) {
    RatFunc qj = q[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i <= r; ++i) qj = qj.substitute(sym::B_var(i), b[static_cast<std::size_t>(i - 1)]);
    if (!qj.is_zero()) throw AlgebraError("residual Q_" + std::to_string(j) + " does not vanish: " + qj.to_string());
  }
  return b;
}

/// Number of fugacity corrections used at truncation order t: r = ⌈t/2⌉ − 1.
inline int fugacity_order(int t) { return (t + 1) / 2 - 1; }

struct PTable {
  int t = 0;
  int r = 0;
  std::vector<RatFunc> B;        // B_1..B_r
  std::vector<RatFunc> P;        // P_1..P_{t-1}
  std::vector<RatFunc> log_part;  // contribution of log(1+X) − β log(1+X/β)
  std::vector<RatFunc> r_part;    // contribution of Σ R_j(λ)(1+λ)^{−jd}
  bool truncated = false;
};

/// P_1..P_{t−1} with B_1..B_{r_used}; r_used defaults to ⌈t/2⌉ − 1.
inline PTable compute_P(int t, const ROptions& opt = {}, std::optional<int> r_used = std::nullopt) {
  require(t >= 1, "truncation order t must be >= 1");
  PTable out;
  out.t = t;
  out.r = r_used.value_or(fugacity_order(t));
  require(out.r >= 0, "fugacity order must be >= 0");
  if (t == 1) {
    out.B = compute_B(out.r, opt);
    return out;
  }
  out.B = compute_B(out.r, opt);
  const std::size_t order = static_cast<std::size_t>(t);
  const TruncSeries x = detail::solved_x(order, out.B);
  const TruncSeries lam = detail::lambda_series(x);
  const TruncSeries log_s = sym::log_ratio_expand(x, static_cast<unsigned>(t));
  TruncSeries r_s(order);
  for (int j = 1; j <= t - 1; ++j) {
    const Poly k = Poly(j) * sym::dvar();
    TruncSeries term = detail::apply_lambda_poly(R_poly(j, opt), lam) *
                       sym::neg_binomial_expand(k, x, static_cast<unsigned>(t - 1));
    r_s += term.shifted(static_cast<std::size_t>(j));
  }
  if (!log_s[0].is_zero() || !r_s[0].is_zero()) throw AlgebraError("count expansion has a nonzero Y^0 term");
  for (std::size_t j = 1; j < order; ++j) {
    out.log_part.push_back(log_s[j]);
    out.r_part.push_back(r_s[j]);
    out.P.push_back(log_s[j] + r_s[j]);
  }
  return out;
}

// ---- numeric evaluation -------------------------------------------------------------------

/// A log-scale count or partition function with its contributing terms.
struct LogCount {
  Real value;
  unsigned digits = kDefaultDigits;
  std::vector<std::pair<std::string, Real>> terms;
  std::vector<std::string> warnings;

  Real log10_value() const { return value / log(Real(10)); }
};

inline sym::Bindings bind_lambda_d(const Rat& lambda, int d) {
  sym::Bindings b;
  b.set(Var::lambda, lambda).set(Var::d, Rat(d));
  return b;
}

inline sym::Bindings bind_beta_d(const Rat& beta, int d) {
  sym::Bindings b;
  b.set(Var::beta, beta).set(Var::d, Rat(d));
  return b;
}

/// Σ_{j<=t−1} R_j(λ, d)(1+λ)^{−jd}, exactly.
inline Rat correction_sum(const Rat& lambda, int d, int t, const ROptions& opt = {}) {
  Rat acc = 0;
  for (int j = 1; j <= t - 1; ++j)
    acc += R_poly(j, opt).evaluate(bind_lambda_d(lambda, d)) * pow(Rat(1) + lambda, -static_cast<long long>(j) * d);
  return acc;
}

/// log Z ≈ log 2 + N log(1+λ) + N Σ_{j<=t−1} R_j(λ)(1+λ)^{−jd}.
inline LogCount log_Z_asymptotic(const Rat& lambda, Dim d, int t, unsigned digits = kDefaultDigits,
                                 const ROptions& opt = {}) {
  require(lambda > 0, "λ must be positive");
  require(t >= 1, "truncation order t must be >= 1");
  PrecisionScope ps(digits);
  LogCount out;
  out.digits = digits;
  const Real n = to_real(BigInt(d.N()));
  if (to_real(lambda) <= pow(Real(2), Real(1) / Real(t)) - 1)
    out.warnings.push_back("λ <= 2^(1/t) - 1: outside the regime where the truncation is guaranteed");
  const Real base = log(Real(2)) + n * log_of(Rat(1) + lambda);
  const Real corr = n * to_real(correction_sum(lambda, d.value(), t, opt));
  out.terms = {{"log2_plus_N_log1pl", base}, {"cluster_correction", corr}};
  out.value = base + corr;
  return out;
}

struct LambdaBeta {
  Rat value;
  std::vector<Rat> B;  // B_j(β, d)
  std::vector<std::string> warnings;
};

/// λ_β = β/(1−β) + Σ_{j<=r} B_j (1−β)^{jd} with r = ⌈t/2⌉ − 1.
inline LambdaBeta lambda_beta(const Rat& beta, Dim d, int t, const ROptions& opt = {}) {
  require(beta > 0 && beta < 1, "β must lie in (0, 1)");
  require(t >= 1, "truncation order t must be >= 1");
  LambdaBeta out;
  const auto b = compute_B(fugacity_order(t), opt);
  out.value = beta / (Rat(1) - beta);
  for (std::size_t j = 1; j <= b.size(); ++j) {
    Rat bj = b[j - 1].evaluate(bind_beta_d(beta, d.value()));
    out.B.push_back(bj);
    out.value += bj * pow(Rat(1) - beta, static_cast<long long>(j) * d.value());
  }
  {
    PrecisionScope ps(kDefaultDigits);
    if (to_real(beta) <= Real(1) - pow(Real(2), Real(-1) / Real(t)))
      out.warnings.push_back("β <= 1 - 2^(-1/t): outside the regime where the truncation is guaranteed");
  }
  if (out.value <= 0) throw PreconditionError("λ_β is not positive; β is outside the usable regime");
  return out;
}

/// log binom(n, k): exact for moderate n, MPFR lgamma otherwise.
inline Real log_binomial(std::uint64_t n, std::uint64_t k) {
  require(k <= n, "binomial needs k <= n");
  if (n <= (std::uint64_t{1} << 20)) return log_of(binomial(n, k));
  return lgamma(Real(n + 1)) - lgamma(Real(k + 1)) - lgamma(Real(n - k + 1));
}

/// Independent sets of size ⌊βN⌋ in Q_d, by both routes of the fixed-size expansion.
struct CountEstimate {
  std::uint64_t m = 0;
  LogCount via_P;       // log 2 + log C(N, m) + N Σ P_j Y^j
  LogCount via_lambda;  // log Z(λ_β) − m log λ_β − ½ log(2πNβ(1−β))
  Rat lambda_beta;
};

inline CountEstimate log_count_asymptotic(const Rat& beta, Dim d, int t, unsigned digits = kDefaultDigits,
                                          const ROptions& opt = {}) {
  require(beta > 0 && beta < 1, "β must lie in (0, 1)");
  require(t >= 1, "truncation order t must be >= 1");
  PrecisionScope ps(digits);
  CountEstimate out;
  const std::uint64_t n_int = d.N();
  const Rat m_rat = beta * Rat(BigInt(n_int));
  out.m = static_cast<std::uint64_t>(BigInt(numerator_of(m_rat) / denominator_of(m_rat)));
  const Real n = to_real(BigInt(n_int));

  const auto table = compute_P(t, opt);
  const Rat y = pow(Rat(1) - beta, d.value());
  Rat psum = 0;
  for (std::size_t j = 1; j <= table.P.size(); ++j)
    psum += table.P[j - 1].evaluate(bind_beta_d(beta, d.value())) * pow(y, static_cast<long long>(j));
  {
    LogCount& a = out.via_P;
    a.digits = digits;
    const Real lb = log_binomial(n_int, out.m);
    const Real corr = n * to_real(psum);
    a.terms = {{"log2", log(Real(2))}, {"log_binomial", lb}, {"P_correction", corr}};
    a.value = log(Real(2)) + lb + corr;
  }
  {
    const auto lb = lambda_beta(beta, d, t, opt);
    out.lambda_beta = lb.value;
    LogCount z = log_Z_asymptotic(lb.value, d, t, digits, opt);
    LogCount& b = out.via_lambda;
    b.digits = digits;
    b.warnings = lb.warnings;
    b.warnings.insert(b.warnings.end(), z.warnings.begin(), z.warnings.end());
    const Real tilt = -to_real(BigInt(out.m)) * log_of(lb.value);
    const Real gauss = -log(2 * pi_real() * n * to_real(beta) * to_real(Rat(1) - beta)) / 2;
    b.terms = {{"log_Z", z.value}, {"tilt", tilt}, {"gaussian", gauss}};
    b.value = z.value + tilt + gauss;
  }
  out.via_P.warnings = out.via_lambda.warnings;
  return out;
}

/// log[(1+λ_0)^N / (λ_0^m √(2πNβ(1−β)))] with β = m/N, λ_0 = β/(1−β).
inline Real stirling_binom(std::uint64_t n, std::uint64_t m, unsigned digits = kDefaultDigits) {
  require(m >= 1 && m < n, "stirling_binom needs 0 < m < n");
  PrecisionScope ps(digits);
  const Rat beta{BigInt(m), BigInt(n)};
  const Rat l0 = beta / (Rat(1) - beta);
  return to_real(BigInt(n)) * log_of(Rat(1) + l0) - to_real(BigInt(m)) * log_of(l0) -
         log(2 * pi_real() * to_real(BigInt(n)) * to_real(beta) * to_real(Rat(1) - beta)) / 2;
}

struct LocalCLT {
  Rat pmf;             // exact C(n,k) p^k (1−p)^{n−k}
  Real peak;           // 1/√(2πnp(1−p))
  Real gaussian;       // peak · exp(−(k−np)²/(2np(1−p)))
  Real ratio_to_peak;  // pmf / peak
  Real ratio_to_gaussian;
};

inline LocalCLT binomial_lclt(std::uint64_t n, const Rat& p, std::uint64_t k, unsigned digits = kDefaultDigits) {
  require(p > 0 && p < 1, "p must lie in (0, 1)");
  require(k <= n, "k must satisfy k <= n");
  PrecisionScope ps(digits);
  LocalCLT out;
  out.pmf = Rat(binomial(n, k)) * pow(p, static_cast<long long>(k)) * pow(Rat(1) - p, static_cast<long long>(n - k));
  const Real var = to_real(BigInt(n)) * to_real(p) * to_real(Rat(1) - p);
  out.peak = 1 / sqrt(2 * pi_real() * var);
  const Real dev = to_real(BigInt(k)) - to_real(BigInt(n)) * to_real(p);
  out.gaussian = out.peak * exp(-dev * dev / (2 * var));
  const Real exact = to_real(out.pmf);
  out.ratio_to_peak = exact / out.peak;
  out.ratio_to_gaussian = exact / out.gaussian;
  return out;
}

// ---- structured counts --------------------------------------------------------------------

/// Expected number of type-T defects at fugacity λ: m_T = n_T λ^{|S|} (1+λ)^{−|N(S)|}.
/// n_T comes from the exact census for d <= kCensusDirectMax, else from the interpolated census.
inline constexpr int kCensusDirectMax = 14;

inline std::map<std::string, Rat> type_means(const std::vector<std::string>& keys, Dim d, const Rat& lambda,
                                             unsigned threads = 1) {
  unsigned max_size = 1;
  std::map<std::string, unsigned> size_of;
  for (const auto& k : keys) {
    const auto colon = k.find(':');
    require(colon != std::string::npos && colon > 0, "malformed type key '" + k + "'");
    unsigned s = static_cast<unsigned>(std::stoul(k.substr(0, colon)));
    require(s >= 1 && s <= 5, "type sizes above 5 are not supported: '" + k + "'");
    size_of[k] = s;
    max_size = std::max(max_size, s);
  }
  std::map<std::string, Rat> out;
  if (d.value() <= kCensusDirectMax) {
    const Census c = census(d, static_cast<int>(max_size), threads);
    for (const auto& k : keys) {
      bool found = false;
      for (const auto& [t, e] : c.entries)
        if (t.key() == k) {
          out[k] = Rat(e.count) * type_weight(t, d.value(), lambda);
          found = true;
        }
      require(found, "type '" + k + "' does not occur at d = " + std::to_string(d.value()));
    }
    return out;
  }
  const SymbolicCensus sc = symbolic_census(static_cast<int>(max_size), threads);
  for (const auto& k : keys) {
    bool found = false;
    for (const auto& [t, poly] : sc.per_vertex)
      if (t.key() == k) {
        out[k] = Rat(sc.count(t, d.value())) * type_weight(t, d.value(), lambda);
        found = true;
      }
    require(found, "type '" + k + "' is not in the census");
  }
  return out;
}

struct DivergingType {
  std::optional<Rat> mean;  // m_T; taken from the census when absent
  Rat offset;               // s_T: observed count minus m_T
};

/// Sets of size ⌊βN⌋ with exactly k_T defects of each fixed type and m_T + s_T of each diverging type.
inline LogCount structured_count(const Rat& beta, Dim d, int t, const std::map<std::string, unsigned>& fixed,
                                 const std::map<std::string, DivergingType>& diverging,
                                 unsigned digits = kDefaultDigits, const ROptions& opt = {}) {
  PrecisionScope ps(digits);
  const CountEstimate base = log_count_asymptotic(beta, d, t, digits, opt);
  std::vector<std::string> keys;
  for (const auto& [k, _] : fixed) keys.push_back(k);
  for (const auto& [k, v] : diverging)
    if (!v.mean) keys.push_back(k);
  const auto means = keys.empty() ? std::map<std::string, Rat>{} : type_means(keys, d, base.lambda_beta, opt.threads);

  LogCount out;
  out.digits = digits;
  out.warnings = base.via_lambda.warnings;
  out.terms.emplace_back("log_count", base.via_lambda.value);
  Real total = base.via_lambda.value;
  for (const auto& [k, kt] : fixed) {
    const Rat rho = means.at(k);
    require(rho > 0, "m_T must be positive for type '" + k + "'");
    const Real term = Real(kt) * log_of(rho) - to_real(rho) - log_of(factorial(kt));
    out.terms.emplace_back("poisson:" + k, term);
    total += term;
  }
  for (const auto& [k, v] : diverging) {
    const Rat m = v.mean ? *v.mean : means.at(k);
    require(m > 0, "m_T must be positive for type '" + k + "'");
    const Real term = -to_real(v.offset * v.offset / (2 * m)) - log(2 * pi_real() * to_real(m)) / 2;
    out.terms.emplace_back("gaussian:" + k, term);
    total += term;
  }
  out.value = total;
  return out;
}

}  // namespace hyperis::asym
