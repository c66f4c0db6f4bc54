#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace hyperis {

using BigInt = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition (CLI exit code 1).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration ran past its configured node/time budget (CLI exit code 2).
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Raised by the symbolic kernel when an algebraic check fails.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline constexpr unsigned kDefaultDigits = 80;

/// RAII scope for the MPFR working precision (decimal digits).
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline Rat rat(long long num, long long den = 1) {
  if (den == 0) throw PreconditionError("zero denominator");
  return Rat(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rat& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Rat pow(const Rat& base, long long e) {
  if (e < 0) {
    if (base == 0) throw PreconditionError("zero to a negative power");
    return pow(Rat(1) / base, -e);
  }
  BigInt n = boost::multiprecision::pow(numerator_of(base), static_cast<unsigned>(e));
  BigInt d = boost::multiprecision::pow(denominator_of(base), static_cast<unsigned>(e));
  return Rat(n, d);
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r;
  mpz_bin_uiui(r.backend().data(), n, k);
  return r;
}

inline BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.backend().data(), n);
  return r;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "p/q", or "p" for integers.
inline std::string to_string(const Rat& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline BigInt parse_bigint(std::string_view s) {
  require(!s.empty(), "empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  require(i < s.size(), "malformed integer literal '" + std::string(s) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    require(s[j] >= '0' && s[j] <= '9', "malformed integer literal '" + std::string(s) + "'");
  BigInt v(std::string(s.substr(i)));
  return s[0] == '-' ? BigInt(-v) : v;
}

/// Exact parse of "a/b", "12", "-0.375" or "2.5e-3". Never goes through binary floating point.
inline Rat parse_rational(std::string_view s) {
  require(!s.empty(), "empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt n = parse_bigint(s.substr(0, slash));
    BigInt d = parse_bigint(s.substr(slash + 1));
    require(d != 0, "zero denominator in '" + std::string(s) + "'");
    return Rat(n, d);
  }
  std::string_view mant = s;
  long long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    exp10 = static_cast<long long>(parse_bigint(s.substr(e + 1)).convert_to<long long>());
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      require(!seen_dot, "malformed decimal '" + std::string(s) + "'");
      seen_dot = true;
    } else {
      require(c >= '0' && c <= '9', "malformed decimal '" + std::string(s) + "'");
      digits.push_back(c);
      if (seen_dot) ++frac;
    }
  }
  require(!digits.empty(), "malformed decimal '" + std::string(s) + "'");
  Rat v{BigInt(digits)};
  v *= pow(Rat(10), exp10 - frac);
  return neg ? Rat(-v) : v;
}

inline Real to_real(const Rat& q) {
  return Real(numerator_of(q)) / Real(denominator_of(q));
}

inline Real to_real(const BigInt& v) { return Real(v); }

/// Natural log of a positive rational at the current MPFR precision.
inline Real log_of(const Rat& q) {
  if (q <= 0) throw PreconditionError("log of a non-positive value");
  return log(Real(numerator_of(q))) - log(Real(denominator_of(q)));
}

inline Real log_of(const BigInt& v) { return log_of(Rat(v)); }

/// Fixed scientific rendering with `digits` significant digits.
inline std::string format_real(const Real& x, int digits = 30) {
  return x.str(digits, std::ios_base::scientific);
}

inline Real pi_real() {
  Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p;
}

}  // namespace hyperis
