#pragma once

#include <string>

#include "hyperis/symbolic/polynomial.hpp"

namespace hyperis::sym {

/// num / (β^a · (1-β)^b).
///
/// Every denominator that arises in the fugacity and count expansions is a product of
/// powers of β and (1-β), so that is the only denominator shape stored. The form is kept
/// reduced: num is divisible by neither β nor (1-β) while the matching power is positive,
/// which makes structural equality a test of rational-function equality.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(Poly num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)
  RatFunc(Rat c) : num_(std::move(c)) {}       // NOLINT(google-explicit-constructor)
  RatFunc(int c) : num_(c) {}                  // NOLINT(google-explicit-constructor)
  RatFunc(Poly num, unsigned beta_pow, unsigned omb_pow)
      : num_(std::move(num)), beta_pow_(beta_pow), omb_pow_(omb_pow) {
    normalize();
  }

  const Poly& numerator() const { return num_; }
  unsigned beta_power() const { return beta_pow_; }
  unsigned one_minus_beta_power() const { return omb_pow_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return beta_pow_ == 0 && omb_pow_ == 0; }
  Poly denominator() const { return beta().pow(beta_pow_) * one_minus_beta().pow(omb_pow_); }

  /// Multiply by (1-β)^k, k of either sign.
  RatFunc times_one_minus_beta(int k) const {
    RatFunc r = *this;
    if (k >= 0) {
      unsigned cancel = std::min<unsigned>(static_cast<unsigned>(k), r.omb_pow_);
      r.omb_pow_ -= cancel;
      r.num_ *= one_minus_beta().pow(static_cast<unsigned>(k) - cancel);
    } else {
      r.omb_pow_ += static_cast<unsigned>(-k);
    }
    r.normalize();
    return r;
  }

  /// Multiply by β^k, k of either sign.
  RatFunc times_beta(int k) const {
    RatFunc r = *this;
    if (k >= 0) {
      unsigned cancel = std::min<unsigned>(static_cast<unsigned>(k), r.beta_pow_);
      r.beta_pow_ -= cancel;
      r.num_ *= beta().pow(static_cast<unsigned>(k) - cancel);
    } else {
      r.beta_pow_ += static_cast<unsigned>(-k);
    }
    r.normalize();
    return r;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    unsigned bp = std::max(a.beta_pow_, b.beta_pow_);
    unsigned op = std::max(a.omb_pow_, b.omb_pow_);
    Poly n = a.lifted(bp, op) + b.lifted(bp, op);
    return RatFunc(std::move(n), bp, op);
  }
  friend RatFunc operator-(const RatFunc& a) {
    RatFunc r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return RatFunc(a.num_ * b.num_, a.beta_pow_ + b.beta_pow_, a.omb_pow_ + b.omb_pow_);
  }
  friend RatFunc operator*(const RatFunc& a, const Rat& s) {
    RatFunc r = a;
    r.num_ *= s;
    return r;
  }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  RatFunc pow(unsigned e) const {
    RatFunc result(1);
    RatFunc base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  /// Multiplicative inverse; defined only when the numerator is c·β^i·(1-β)^j.
  RatFunc inverse() const {
    if (is_zero()) throw AlgebraError("division by zero rational function");
    Poly n = num_;
    unsigned bi = n.min_degree(Var::beta);
    n = n.divide_by_var(Var::beta, bi);
    unsigned oj = 0;
    while (!n.is_constant()) {
      auto q = n.divide_by_one_minus(Var::beta);
      if (!q) throw AlgebraError("division by a polynomial that is not a power of β or (1-β): " + num_.to_string());
      n = std::move(*q);
      ++oj;
    }
    Rat c = n.constant_term();
    Poly inv_num = Poly(Rat(1) / c) * beta().pow(beta_pow_) * one_minus_beta().pow(omb_pow_);
    return RatFunc(std::move(inv_num), bi, oj);
  }

  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

  RatFunc derivative(Var v) const {
    require(v != Var::beta, "RatFunc::derivative in β is not supported");
    return RatFunc(num_.derivative(v), beta_pow_, omb_pow_);
  }

  /// Replace a numerator variable (never β) by a rational function.
  RatFunc substitute(Var v, const RatFunc& value) const {
    require(v != Var::beta, "RatFunc::substitute cannot replace β");
    auto cs = num_.coefficients(v);
    RatFunc acc;
    for (std::size_t k = cs.size(); k-- > 0;) acc = acc * value + RatFunc(cs[k]);
    return acc.times_beta(-static_cast<int>(beta_pow_)).times_one_minus_beta(-static_cast<int>(omb_pow_));
  }

  Rat evaluate(const Bindings& b) const {
    Rat n = num_.evaluate(b);
    if (beta_pow_ == 0 && omb_pow_ == 0) return n;
    const auto& bv = b.get(Var::beta);
    if (!bv) throw PreconditionError("evaluate: unbound variable β");
    Rat den = hyperis::pow(*bv, beta_pow_) * hyperis::pow(Rat(1) - *bv, omb_pow_);
    if (den == 0) throw PreconditionError("evaluate: denominator vanishes");
    return n / den;
  }

  std::string to_string() const {
    if (is_polynomial()) return num_.to_string();
    std::string den;
    if (beta_pow_) den += "β" + (beta_pow_ > 1 ? "^" + std::to_string(beta_pow_) : std::string());
    if (omb_pow_) {
      if (!den.empty()) den += " ";
      den += "(1 - β)" + (omb_pow_ > 1 ? "^" + std::to_string(omb_pow_) : std::string());
    }
    return "(" + num_.to_string() + ") / (" + den + ")";
  }

 private:
  Poly lifted(unsigned bp, unsigned op) const {
    return num_ * beta().pow(bp - beta_pow_) * one_minus_beta().pow(op - omb_pow_);
  }

  void normalize() {
    if (num_.is_zero()) {
      beta_pow_ = omb_pow_ = 0;
      return;
    }
    if (beta_pow_ > 0) {
      unsigned k = std::min(beta_pow_, num_.min_degree(Var::beta));
      if (k) {
        num_ = num_.divide_by_var(Var::beta, k);
        beta_pow_ -= k;
      }
    }
    while (omb_pow_ > 0) {
      auto q = num_.divide_by_one_minus(Var::beta);
      if (!q) break;
      num_ = std::move(*q);
      --omb_pow_;
    }
  }

  Poly num_;
  unsigned beta_pow_ = 0;
  unsigned omb_pow_ = 0;
};

}  // namespace hyperis::sym
