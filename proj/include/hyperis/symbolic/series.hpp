#pragma once

#include <string>
#include <vector>

#include "hyperis/symbolic/ratfunc.hpp"

namespace hyperis::sym {

/// Truncated power series Σ_{j<order} c_j Y^j with Y = (1-β)^d treated as transcendental.
/// Products drop every term of degree >= order and raise the truncation flag.
class TruncSeries {
 public:
  explicit TruncSeries(std::size_t order) : coeffs_(order) { require(order >= 1, "series order must be >= 1"); }

  static TruncSeries constant(std::size_t order, RatFunc c) {
    TruncSeries s(order);
    s.coeffs_[0] = std::move(c);
    return s;
  }

  /// c · Y^k (dropped, with the flag set, if k >= order).
  static TruncSeries monomial(std::size_t order, std::size_t k, RatFunc c) {
    TruncSeries s(order);
    if (k < order)
      s.coeffs_[k] = std::move(c);
    else if (!c.is_zero())
      s.truncated_ = true;
    return s;
  }

  std::size_t order() const { return coeffs_.size(); }
  const RatFunc& operator[](std::size_t j) const { return coeffs_.at(j); }
  RatFunc& operator[](std::size_t j) { return coeffs_.at(j); }
  const std::vector<RatFunc>& coefficients() const { return coeffs_; }
  bool truncated() const { return truncated_; }
  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }
  /// Index of the first nonzero coefficient (order() if the series is zero).
  std::size_t valuation() const {
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
      if (!coeffs_[j].is_zero()) return j;
    return coeffs_.size();
  }

  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) {
    require(a.order() == b.order(), "series order mismatch");
    for (std::size_t j = 0; j < a.order(); ++j) a.coeffs_[j] += b.coeffs_[j];
    a.truncated_ = a.truncated_ || b.truncated_;
    return a;
  }
  friend TruncSeries operator-(const TruncSeries& a) {
    TruncSeries r = a;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }

  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    require(a.order() == b.order(), "series order mismatch");
    const std::size_t n = a.order();
    TruncSeries r(n);
    r.truncated_ = a.truncated_ || b.truncated_;
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b.coeffs_[j].is_zero()) continue;
        if (i + j >= n) {
          r.truncated_ = true;
          continue;
        }
        r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return r;
  }

  friend TruncSeries operator*(TruncSeries a, const RatFunc& s) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }
  friend TruncSeries operator*(const RatFunc& s, TruncSeries a) { return std::move(a) * s; }

  TruncSeries& operator+=(const TruncSeries& o) { return *this = *this + o; }
  TruncSeries& operator*=(const TruncSeries& o) { return *this = *this * o; }

  /// Multiply by Y^k.
  TruncSeries shifted(std::size_t k) const {
    TruncSeries r(order());
    r.truncated_ = truncated_;
    for (std::size_t j = 0; j < order(); ++j) {
      if (coeffs_[j].is_zero()) continue;
      if (j + k < order())
        r.coeffs_[j + k] = coeffs_[j];
      else
        r.truncated_ = true;
    }
    return r;
  }

  TruncSeries pow(unsigned e) const {
    TruncSeries result = constant(order(), RatFunc(1));
    for (unsigned i = 0; i < e; ++i) result = result * *this;
    return result;
  }

  /// Apply a map to every coefficient.
  template <class Fn>
  TruncSeries map(Fn&& fn) const {
    TruncSeries r(order());
    r.truncated_ = truncated_;
    for (std::size_t j = 0; j < order(); ++j) r.coeffs_[j] = fn(coeffs_[j]);
    return r;
  }

  void mark_truncated() { truncated_ = true; }

  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < order(); ++j) {
      if (coeffs_[j].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "[" + coeffs_[j].to_string() + "]";
      if (j) out += " Y" + (j > 1 ? "^" + std::to_string(j) : std::string());
    }
    if (out.empty()) out = "0";
    if (truncated_) out += " + O(Y^" + std::to_string(order()) + ")";
    return out;
  }

 private:
  std::vector<RatFunc> coeffs_;
  bool truncated_ = false;
};

/// Evaluate Σ_a c_a · s^a for polynomial coefficients c_a (Horner).
inline TruncSeries apply_polynomial(const std::vector<RatFunc>& coeffs, const TruncSeries& s) {
  TruncSeries acc(s.order());
  for (std::size_t a = coeffs.size(); a-- > 0;) acc = acc * s + TruncSeries::constant(s.order(), coeffs[a]);
  return acc;
}

/// binom(-k, i) = (-k)(-k-1)...(-k-i+1) / i!  for a symbolic k (typically linear in d).
inline Poly neg_binomial_coefficient(const Poly& k, unsigned i) {
  Poly r(1);
  for (unsigned m = 0; m < i; ++m) r *= (-k - Poly(static_cast<long long>(m)));
  return r * (Rat(1) / Rat(factorial(i)));
}

/// (1 + X)^(-k) = Σ_{i=0}^{r} binom(-k, i) X^i, for a series X without constant term.
/// Sets the truncation flag when X^(r+1) still reaches inside the series order.
inline TruncSeries neg_binomial_expand(const Poly& k, const TruncSeries& x, unsigned r) {
  require(x[0].is_zero(), "neg_binomial_expand: X must have zero constant term");
  TruncSeries acc = TruncSeries::constant(x.order(), RatFunc(1));
  TruncSeries xpow = acc;
  for (unsigned i = 1; i <= r; ++i) {
    xpow = xpow * x;
    if (xpow.is_zero()) break;
    acc += xpow * RatFunc(neg_binomial_coefficient(k, i));
  }
  if (!(xpow * x).is_zero()) acc.mark_truncated();
  return acc;
}

/// log(1+X) - β·log(1+X/β) = Σ_{i=1}^{t-1} ((-1)^(1+i)/i)(1 - β^(1-i)) X^i.
inline TruncSeries log_ratio_expand(const TruncSeries& x, unsigned t) {
  require(x[0].is_zero(), "log_ratio_expand: X must have zero constant term");
  TruncSeries acc(x.order());
  TruncSeries xpow = TruncSeries::constant(x.order(), RatFunc(1));
  for (unsigned i = 1; i + 1 <= t; ++i) {
    xpow = xpow * x;
    if (xpow.is_zero()) break;
    // 1 - β^(1-i) = (β^(i-1) - 1) / β^(i-1)
    RatFunc factor = RatFunc(beta().pow(i - 1) - Poly(1), i - 1, 0);
    Rat sign_over_i = Rat((i % 2 == 1) ? 1 : -1) / Rat(i);
    acc += xpow * (factor * sign_over_i);
  }
  if (t >= 1 && !(xpow * x).is_zero()) acc.mark_truncated();
  return acc;
}

}  // namespace hyperis::sym
