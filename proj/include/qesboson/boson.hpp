#pragma once

// Two-mode boson operator polynomials kept in normal order
// a1d^p a1^q a2d^r a2^s (creation left of annihilation, mode 1 before mode 2).

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qesboson/scalar.hpp"

namespace qesboson {

enum class Ladder : std::uint8_t { A1, A1d, A2, A2d };

/// Exponents of a1d, a1, a2d, a2 in that fixed order.
struct Exponents {
  int p = 0;
  int q = 0;
  int r = 0;
  int s = 0;

  auto operator<=>(const Exponents&) const = default;

  /// Occupation change (n1, n2) produced by this monomial.
  std::pair<int, int> shift() const { return {p - q, r - s}; }
  bool is_identity() const { return p == 0 && q == 0 && r == 0 && s == 0; }
};

template <CoefficientField S>
struct BosonMonomial {
  S coeff;
  Exponents exps;
};

template <CoefficientField S>
class BosonOperator {
 public:
  using scalar_type = S;
  using term_map = std::map<Exponents, S>;

  BosonOperator() = default;

  static BosonOperator identity(const S& c = scalar_traits<S>::from_int(1)) {
    return monomial(c, {});
  }
  static BosonOperator monomial(const S& c, Exponents e) {
    BosonOperator out;
    out.add_term(e, c);
    return out;
  }
  static BosonOperator elementary(Ladder f) {
    switch (f) {
      case Ladder::A1d: return monomial(one(), {1, 0, 0, 0});
      case Ladder::A1: return monomial(one(), {0, 1, 0, 0});
      case Ladder::A2d: return monomial(one(), {0, 0, 1, 0});
      case Ladder::A2: return monomial(one(), {0, 0, 0, 1});
    }
    return {};
  }
  static BosonOperator a1d(int n = 1) { return monomial(one(), {n, 0, 0, 0}); }
  static BosonOperator a1(int n = 1) { return monomial(one(), {0, n, 0, 0}); }
  static BosonOperator a2d(int n = 1) { return monomial(one(), {0, 0, n, 0}); }
  static BosonOperator a2(int n = 1) { return monomial(one(), {0, 0, 0, n}); }
  static BosonOperator n1() { return monomial(one(), {1, 1, 0, 0}); }
  static BosonOperator n2() { return monomial(one(), {0, 0, 1, 1}); }

  const term_map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  std::vector<BosonMonomial<S>> monomials() const {
    std::vector<BosonMonomial<S>> out;
    out.reserve(terms_.size());
    for (const auto& [e, c] : terms_) out.push_back({c, e});
    return out;
  }

  S coefficient(Exponents e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? S{} : it->second;
  }

  void add_term(Exponents e, const S& c) {
    if (scalar_traits<S>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second = it->second + c;
      if (scalar_traits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  BosonOperator& operator+=(const BosonOperator& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BosonOperator& operator-=(const BosonOperator& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, S{} - c);
    return *this;
  }
  BosonOperator& operator*=(const S& c) {
    if (scalar_traits<S>::is_zero(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, v] : terms_) v = v * c;
    return *this;
  }

  friend BosonOperator operator+(BosonOperator a, const BosonOperator& b) { return a += b; }
  friend BosonOperator operator-(BosonOperator a, const BosonOperator& b) { return a -= b; }
  friend BosonOperator operator-(BosonOperator a) { return a *= (S{} - one()); }
  friend BosonOperator operator*(BosonOperator a, const S& c) { return a *= c; }
  friend BosonOperator operator*(const S& c, BosonOperator a) { return a *= c; }
  friend BosonOperator operator*(const BosonOperator& a, const BosonOperator& b) {
    BosonOperator out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) multiply_monomials(out, ca * cb, ea, eb);
    return out;
  }
  friend bool operator==(const BosonOperator& a, const BosonOperator& b) { return a.terms_ == b.terms_; }

  BosonOperator pow(int n) const {
    BosonOperator out = identity();
    for (int i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  BosonOperator adjoint() const {
    BosonOperator out;
    for (const auto& [e, c] : terms_) out.add_term({e.q, e.p, e.s, e.r}, scalar_traits<S>::conj(c));
    return out;
  }

  bool is_hermitian() const { return *this == adjoint(); }

  template <CoefficientField T>
  BosonOperator<T> cast() const {
    BosonOperator<T> out;
    for (const auto& [e, c] : terms_) out.add_term(e, scalar_cast<T>(c));
    return out;
  }

 private:
  static S one() { return scalar_traits<S>::from_int(1); }

  // (a^dag)^p1 a^q1 (a^dag)^p2 a^q2 = sum_k C(q1,k) C(p2,k) k! (a^dag)^(p1+p2-k) a^(q1+q2-k)
  static std::vector<std::pair<long long, std::pair<int, int>>> single_mode_product(int p1, int q1, int p2, int q2) {
    std::vector<std::pair<long long, std::pair<int, int>>> out;
    const int kmax = std::min(q1, p2);
    for (int k = 0; k <= kmax; ++k) {
      long long c = binomial(q1, k) * binomial(p2, k) * falling_factorial(k, k);
      out.push_back({c, {p1 + p2 - k, q1 + q2 - k}});
    }
    return out;
  }

  static void multiply_monomials(BosonOperator& out, const S& c, const Exponents& a, const Exponents& b) {
    auto mode1 = single_mode_product(a.p, a.q, b.p, b.q);
    auto mode2 = single_mode_product(a.r, a.s, b.r, b.s);
    for (const auto& [c1, e1] : mode1)
      for (const auto& [c2, e2] : mode2)
        out.add_term({e1.first, e1.second, e2.first, e2.second}, c * scalar_traits<S>::from_int(c1 * c2));
  }

  term_map terms_;
};

/// Canonical normal-ordered expansion of a product of elementary ladder operators.
template <CoefficientField S>
BosonOperator<S> normal_order(std::span<const Ladder> product) {
  BosonOperator<S> out = BosonOperator<S>::identity();
  for (Ladder f : product) out = out * BosonOperator<S>::elementary(f);
  return out;
}

template <CoefficientField S>
BosonOperator<S> normal_order(std::initializer_list<Ladder> product) {
  return normal_order<S>(std::span<const Ladder>(product.begin(), product.size()));
}

template <CoefficientField S>
BosonOperator<S> commutator(const BosonOperator<S>& a, const BosonOperator<S>& b) {
  return a * b - b * a;
}

/// Minimal integer charge (c1, c2) with c1*dn1 + c2*dn2 = 0 for every term.
/// Normalised with gcd 1 and the first nonzero component positive. An operator
/// whose every term is diagonal conserves both occupations separately; the
/// total number (1, 1) is reported in that case.
template <CoefficientField S>
std::optional<std::pair<int, int>> conserved_charge(const BosonOperator<S>& op) {
  if (op.is_zero()) throw Error(ErrorKind::InvalidArgument, "conserved_charge of the zero operator");
  std::optional<std::pair<int, int>> direction;
  for (const auto& [e, c] : op.terms()) {
    auto [d1, d2] = e.shift();
    if (d1 == 0 && d2 == 0) continue;
    int g = std::gcd(d1, d2);
    std::pair<int, int> dir{d1 / g, d2 / g};
    if (dir.first < 0 || (dir.first == 0 && dir.second < 0)) dir = {-dir.first, -dir.second};
    if (!direction) {
      direction = dir;
    } else if (*direction != dir) {
      return std::nullopt;
    }
  }
  if (!direction) return std::pair<int, int>{1, 1};
  std::pair<int, int> charge{direction->second, -direction->first};
  if (charge.first < 0 || (charge.first == 0 && charge.second < 0)) charge = {-charge.first, -charge.second};
  return charge;
}

template <CoefficientField S>
bool conserves(const BosonOperator<S>& op, std::pair<int, int> charge) {
  for (const auto& [e, c] : op.terms()) {
    auto [d1, d2] = e.shift();
    if (charge.first * d1 + charge.second * d2 != 0) return false;
  }
  return true;
}

// Text form: terms joined by " + ", each `coeff*a1d^p a1^q a2d^r a2^s` with
// zero exponents omitted; the identity term is the bare coefficient.
template <CoefficientField S>
std::string to_string(const BosonOperator<S>& op) {
  if (op.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : op.terms()) {
    if (!first) out += " + ";
    first = false;
    out += scalar_traits<S>::format(c);
    if (e.is_identity()) continue;
    out += "*";
    std::vector<std::string> factors;
    if (e.p) factors.push_back("a1d^" + std::to_string(e.p));
    if (e.q) factors.push_back("a1^" + std::to_string(e.q));
    if (e.r) factors.push_back("a2d^" + std::to_string(e.r));
    if (e.s) factors.push_back("a2^" + std::to_string(e.s));
    for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? " " : "") + factors[i];
  }
  return out;
}

template <CoefficientField S>
BosonOperator<S> parse_boson_operator(std::string_view text) {
  BosonOperator<S> out;
  text = detail::trim(text);
  if (text == "0") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(" + ", pos);
    std::string_view term = detail::trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (term.empty()) throw Error(ErrorKind::ParseError, "empty term");
    Exponents e;
    std::string_view coeff_text = term;
    if (auto star = term.find('*'); star != std::string_view::npos) {
      coeff_text = term.substr(0, star);
      std::string factors(term.substr(star + 1));
      std::istringstream in(factors);
      std::string f;
      std::array<bool, 4> seen{};
      while (in >> f) {
        auto caret = f.find('^');
        std::string name = f.substr(0, caret);
        int power = 1;
        if (caret != std::string::npos) {
          std::string_view digits(f.data() + caret + 1, f.size() - caret - 1);
          auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), power);
          if (ec != std::errc() || ptr != digits.data() + digits.size() || power < 0)
            throw Error(ErrorKind::ParseError, "bad exponent in '" + f + "'");
        }
        int slot = name == "a1d" ? 0 : name == "a1" ? 1 : name == "a2d" ? 2 : name == "a2" ? 3 : -1;
        if (slot < 0) throw Error(ErrorKind::ParseError, "unknown factor '" + name + "'");
        if (seen[slot]) throw Error(ErrorKind::ParseError, "repeated factor '" + name + "'");
        seen[slot] = true;
        (slot == 0 ? e.p : slot == 1 ? e.q : slot == 2 ? e.r : e.s) = power;
      }
    }
    out.add_term(e, scalar_traits<S>::parse(coeff_text));
    if (next == std::string_view::npos) break;
    pos = next + 3;
  }
  return out;
}

}  // namespace qesboson
