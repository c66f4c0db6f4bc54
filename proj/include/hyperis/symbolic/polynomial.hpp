#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperis/numeric.hpp"

namespace hyperis::sym {

/// Formal variables known to the kernel. Declaration order is the print order.
enum class Var : std::uint8_t {
  lambda,
  d,
  beta,
  X,
  Y,
  B1,
  B2,
  B3,
  B4,
  B5,
  B6,
  w1,
  w2,
  w3,
  w4,
};

inline constexpr std::size_t kVarCount = 15;

inline std::string_view var_name(Var v) {
  static constexpr std::array<std::string_view, kVarCount> names = {
      "λ", "d", "β", "X", "Y", "B1", "B2", "B3", "B4", "B5", "B6", "w1", "w2", "w3", "w4"};
  return names[static_cast<std::size_t>(v)];
}

/// ASCII spelling used in JSON keys.
inline std::string_view var_ascii(Var v) {
  static constexpr std::array<std::string_view, kVarCount> names = {
      "lambda", "d", "beta", "X", "Y", "B1", "B2", "B3", "B4", "B5", "B6", "w1", "w2", "w3", "w4"};
  return names[static_cast<std::size_t>(v)];
}

inline Var B_var(int j) {
  require(j >= 1 && j <= 6, "only B1..B6 are available as formal symbols");
  return static_cast<Var>(static_cast<int>(Var::B1) + j - 1);
}

inline Var w_var(int i) {
  require(i >= 1 && i <= 4, "only w1..w4 are available as formal symbols");
  return static_cast<Var>(static_cast<int>(Var::w1) + i - 1);
}

struct Monomial {
  std::array<std::uint8_t, kVarCount> exp{};

  unsigned operator[](Var v) const { return exp[static_cast<std::size_t>(v)]; }
  std::uint8_t& at(Var v) { return exp[static_cast<std::size_t>(v)]; }
  unsigned total_degree() const {
    unsigned s = 0;
    for (auto e : exp) s += e;
    return s;
  }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kVarCount; ++i) {
    unsigned e = unsigned{a.exp[i]} + b.exp[i];
    if (e > 255) throw AlgebraError("monomial exponent overflow");
    m.exp[i] = static_cast<std::uint8_t>(e);
  }
  return m;
}

/// Variable bindings for evaluation.
class Bindings {
 public:
  Bindings& set(Var v, Rat value) {
    values_[static_cast<std::size_t>(v)] = std::move(value);
    return *this;
  }
  const std::optional<Rat>& get(Var v) const { return values_[static_cast<std::size_t>(v)]; }

 private:
  std::array<std::optional<Rat>, kVarCount> values_;
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Invariant: no stored coefficient is zero; terms are kept in monomial order.
class Poly {
 public:
  using Terms = std::map<Monomial, Rat>;

  Poly() = default;
  Poly(Rat c) {  // NOLINT(google-explicit-constructor): constants promote naturally
    if (c != 0) terms_.emplace(Monomial{}, std::move(c));
  }
  Poly(long long c) : Poly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(Rat(c)) {}        // NOLINT(google-explicit-constructor)

  static Poly var(Var v, unsigned power = 1) {
    Monomial m;
    m.at(v) = static_cast<std::uint8_t>(power);
    Poly p;
    p.terms_.emplace(m, Rat(1));
    return p;
  }

  static Poly monomial(const Monomial& m, Rat c) {
    Poly p;
    if (c != 0) p.terms_.emplace(m, std::move(c));
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{}); }
  Rat constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rat(0) : it->second;
  }

  unsigned degree(Var v) const {
    unsigned deg = 0;
    for (const auto& [m, c] : terms_) deg = std::max(deg, m[v]);
    return deg;
  }
  unsigned min_degree(Var v) const {
    if (terms_.empty()) return 0;
    unsigned deg = 255;
    for (const auto& [m, c] : terms_) deg = std::min(deg, m[v]);
    return deg;
  }
  unsigned total_degree() const {
    unsigned deg = 0;
    for (const auto& [m, c] : terms_) deg = std::max(deg, m.total_degree());
    return deg;
  }
  bool depends_on(Var v) const { return degree(v) > 0; }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Rat& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend Poly operator*(Poly a, const Rat& s) { return a *= s; }
  friend Poly operator*(const Rat& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly&, const Poly&) = default;

  Poly pow(unsigned e) const {
    Poly result(1);
    Poly base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  Poly derivative(Var v) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      unsigned e = m[v];
      if (e == 0) continue;
      Monomial mm = m;
      mm.at(v) = static_cast<std::uint8_t>(e - 1);
      r.add_term(mm, c * e);
    }
    return r;
  }

  /// Coefficient of v^k, as a polynomial in the remaining variables.
  Poly coefficient(Var v, unsigned k) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      if (m[v] != k) continue;
      Monomial mm = m;
      mm.at(v) = 0;
      r.add_term(mm, c);
    }
    return r;
  }

  /// Coefficients of v^0 .. v^deg.
  std::vector<Poly> coefficients(Var v) const {
    std::vector<Poly> out(degree(v) + 1);
    for (const auto& [m, c] : terms_) {
      Monomial mm = m;
      mm.at(v) = 0;
      out[m[v]].add_term(mm, c);
    }
    return out;
  }

  /// Composition: replace v by `value` everywhere.
  Poly substitute(Var v, const Poly& value) const {
    auto cs = coefficients(v);
    Poly r;
    for (std::size_t k = cs.size(); k-- > 0;) r = r * value + cs[k];
    return r;
  }

  Poly substitute(Var v, const Rat& value) const { return substitute(v, Poly(value)); }

  Rat evaluate(const Bindings& b) const {
    Rat total = 0;
    for (const auto& [m, c] : terms_) {
      Rat t = c;
      for (std::size_t i = 0; i < kVarCount; ++i) {
        if (m.exp[i] == 0) continue;
        const auto& val = b.get(static_cast<Var>(i));
        if (!val) throw PreconditionError("evaluate: unbound variable " + std::string(var_name(static_cast<Var>(i))));
        t *= hyperis::pow(*val, m.exp[i]);
      }
      total += t;
    }
    return total;
  }

  /// Divide by v^k; throws unless every term carries at least v^k.
  Poly divide_by_var(Var v, unsigned k) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      if (m[v] < k) throw AlgebraError("polynomial not divisible by " + std::string(var_name(v)));
      Monomial mm = m;
      mm.at(v) = static_cast<std::uint8_t>(m[v] - k);
      r.terms_.emplace(mm, c);
    }
    return r;
  }

  /// Exact quotient by (1 - v), if it exists.
  std::optional<Poly> divide_by_one_minus(Var v) const {
    // p = (1-v) q  <=>  a_k = q_k - q_{k-1}; so q_k = a_k + q_{k-1}.
    auto a = coefficients(v);
    if (a.size() == 1) {
      if (a[0].is_zero()) return Poly{};
      return std::nullopt;
    }
    std::vector<Poly> q(a.size() - 1);
    Poly prev;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
      q[k] = a[k] + prev;
      prev = q[k];
    }
    if (!(a.back() + prev).is_zero()) return std::nullopt;
    Poly r;
    for (std::size_t k = 0; k < q.size(); ++k) r += q[k] * Poly::var(v, static_cast<unsigned>(k));
    return r;
  }

  /// Canonical text: "c * λ^a d^b β^e Y^f" terms joined by " + ", in descending monomial order.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      if (!first) os << " + ";
      first = false;
      os << hyperis::to_string(c);
      const char* sep = " * ";
      for (std::size_t i = 0; i < kVarCount; ++i) {
        if (m.exp[i] == 0) continue;
        os << sep << var_name(static_cast<Var>(i));
        sep = " ";
        if (m.exp[i] > 1) os << "^" << unsigned{m.exp[i]};
      }
    }
    return os.str();
  }

 private:
  void add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

inline Poly operator*(const Poly& a, long long s) { return a * Rat(s); }

inline Poly lam() { return Poly::var(Var::lambda); }
inline Poly dvar() { return Poly::var(Var::d); }
inline Poly beta() { return Poly::var(Var::beta); }
inline Poly one_minus_beta() { return Poly(1) - beta(); }

}  // namespace hyperis::sym
