#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "hyperis/numeric.hpp"

namespace hyperis::stats {

struct Moments {
  std::size_t n = 0;
  double mean = 0;
  double variance = 0;  // unbiased
  double skewness = 0;
  double excess_kurtosis = 0;
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  double s = 0;
  for (double v : x) s += v;
  m.mean = s / static_cast<double>(m.n);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double c = v - m.mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  const double n = static_cast<double>(m.n);
  if (m.n > 1) m.variance = m2 / (n - 1);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3;
  }
  return m;
}

/// Standard error of the mean by non-overlapping batch means (⌊√n⌋ batches, at least 10).
/// Accounts for serial correlation left after thinning.
inline double batch_means_se(const std::vector<double>& x) {
  const std::size_t n = x.size();
  require(n >= 20, "batch-means standard error needs at least 20 samples");
  const std::size_t batches = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const std::size_t len = n / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += x[i];
    means.push_back(s / static_cast<double>(len));
  }
  const Moments bm = moments(means);
  const double naive = std::sqrt(moments(x).variance / static_cast<double>(n));
  return std::max(naive, std::sqrt(bm.variance / static_cast<double>(batches)));
}

struct TestResult {
  double statistic = 0;
  unsigned df = 0;
  double p_value = 1;
  std::vector<std::pair<double, double>> bins;  // (observed, expected) after pooling
};

inline double chi_square_upper_tail(double stat, unsigned df) {
  if (df == 0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, stat)));
}

/// Pearson chi-square against given cell probabilities. Adjacent cells are pooled from the
/// right until every expected count reaches min_expected.
inline TestResult chi_square_gof(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                                 double min_expected = 5.0, unsigned estimated_params = 0) {
  require(observed.size() == probs.size() && !observed.empty(), "chi-square needs matching nonempty cells");
  double n = 0;
  for (auto o : observed) n += static_cast<double>(o);
  require(n > 0, "chi-square needs at least one observation");
  std::vector<std::pair<double, double>> cells;
  for (std::size_t i = 0; i < observed.size(); ++i) cells.emplace_back(static_cast<double>(observed[i]), n * probs[i]);
  std::vector<std::pair<double, double>> pooled;
  std::pair<double, double> acc{0, 0};
  for (const auto& c : cells) {
    acc.first += c.first;
    acc.second += c.second;
    if (acc.second >= min_expected) {
      pooled.push_back(acc);
      acc = {0, 0};
    }
  }
  if (acc.second > 0 || acc.first > 0) {
    if (pooled.empty()) {
      pooled.push_back(acc);
    } else {
      pooled.back().first += acc.first;
      pooled.back().second += acc.second;
    }
  }
  TestResult r;
  r.bins = pooled;
  for (const auto& [o, e] : pooled)
    if (e > 0) r.statistic += (o - e) * (o - e) / e;
  const unsigned cells_used = static_cast<unsigned>(pooled.size());
  r.df = cells_used > 1 + estimated_params ? cells_used - 1 - estimated_params : 0;
  r.p_value = chi_square_upper_tail(r.statistic, r.df);
  return r;
}

/// Goodness of fit of nonnegative counts to Poisson(mean), with pooled upper tail.
inline TestResult poisson_gof(const std::vector<std::uint64_t>& counts, double mean, double min_expected = 5.0) {
  require(!counts.empty(), "Poisson goodness of fit needs samples");
  require(mean > 0, "Poisson goodness of fit needs a positive mean");
  const std::uint64_t top = *std::max_element(counts.begin(), counts.end());
  boost::math::poisson_distribution<double> dist(mean);
  const std::size_t cells = static_cast<std::size_t>(std::max<double>(static_cast<double>(top), mean * 4 + 10)) + 2;
  std::vector<std::uint64_t> obs(cells, 0);
  for (auto c : counts) ++obs[std::min<std::size_t>(static_cast<std::size_t>(c), cells - 1)];
  std::vector<double> probs(cells);
  for (std::size_t k = 0; k + 1 < cells; ++k) probs[k] = boost::math::pdf(dist, static_cast<double>(k));
  probs[cells - 1] = boost::math::cdf(boost::math::complement(dist, static_cast<double>(cells - 2)));
  return chi_square_gof(obs, probs, min_expected);
}

/// Jarque-Bera normality statistic, asymptotically chi-square with 2 degrees of freedom.
inline TestResult jarque_bera(const std::vector<double>& x) {
  require(x.size() >= 8, "Jarque-Bera needs at least 8 samples");
  const Moments m = moments(x);
  TestResult r;
  r.df = 2;
  if (m.variance == 0) {
    r.statistic = 0;
    r.p_value = 0;
    return r;
  }
  const double n = static_cast<double>(m.n);
  r.statistic = n / 6.0 * (m.skewness * m.skewness + m.excess_kurtosis * m.excess_kurtosis / 4.0);
  r.p_value = chi_square_upper_tail(r.statistic, 2);
  return r;
}

/// Chi-square test of independence for two count variables, each capped at `cap` (values >= cap share a cell).
/// Empty rows and columns are dropped.
inline TestResult independence_test(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                    std::uint64_t cap = 2) {
  require(a.size() == b.size() && !a.empty(), "independence test needs paired samples");
  const std::size_t k = static_cast<std::size_t>(cap) + 1;
  std::vector<std::vector<double>> table(k, std::vector<double>(k, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    table[std::min<std::uint64_t>(a[i], cap)][std::min<std::uint64_t>(b[i], cap)] += 1;
  std::vector<double> rows(k, 0), cols(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      rows[i] += table[i][j];
      cols[j] += table[i][j];
    }
  const double n = static_cast<double>(a.size());
  TestResult r;
  unsigned nr = 0, nc = 0;
  for (double v : rows) nr += v > 0;
  for (double v : cols) nc += v > 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (rows[i] == 0 || cols[j] == 0) continue;
      const double e = rows[i] * cols[j] / n;
      r.bins.emplace_back(table[i][j], e);
      r.statistic += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  r.df = (nr > 0 && nc > 0) ? (nr - 1) * (nc - 1) : 0;
  r.p_value = chi_square_upper_tail(r.statistic, r.df);
  return r;
}

}  // namespace hyperis::stats
