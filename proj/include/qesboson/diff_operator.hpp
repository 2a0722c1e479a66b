#pragma once

// One-variable differential operators sum c * x^a (d/dx)^b acting on
// polynomials, i.e. the Bargmann-Fock image of a1d -> x, a1 -> d/dx.

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qesboson/scalar.hpp"

namespace qesboson {

struct DiffTermKey {
  int a = 0;  ///< power of x
  int b = 0;  ///< derivative order

  auto operator<=>(const DiffTermKey&) const = default;
  int offset() const { return a - b; }
};

template <CoefficientField S>
struct DiffTerm {
  S coeff;
  int a;
  int b;
};

template <CoefficientField S>
class DiffOperator {
 public:
  using scalar_type = S;
  using term_map = std::map<DiffTermKey, S>;

  DiffOperator() = default;

  static DiffOperator term(const S& c, int a, int b) {
    DiffOperator out;
    out.add_term(a, b, c);
    return out;
  }
  static DiffOperator constant(const S& c) { return term(c, 0, 0); }
  static DiffOperator x(int a = 1) { return term(one(), a, 0); }
  static DiffOperator d(int b = 1) { return term(one(), 0, b); }
  /// x d/dx
  static DiffOperator euler() { return term(one(), 1, 1); }

  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::vector<DiffTerm<S>> term_list() const {
    std::vector<DiffTerm<S>> out;
    for (const auto& [k, c] : terms_) out.push_back({c, k.a, k.b});
    return out;
  }

  S coefficient(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? S{} : it->second;
  }

  void add_term(int a, int b, const S& c) {
    if (a < 0 || b < 0) throw Error(ErrorKind::InvalidArgument, "negative power in differential term");
    if (scalar_traits<S>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) {
      it->second = it->second + c;
      if (scalar_traits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Largest a - b over the terms (how far the operator raises degree).
  int max_offset() const {
    int m = std::numeric_limits<int>::min();
    for (const auto& [k, c] : terms_) m = std::max(m, k.offset());
    return m;
  }
  int min_offset() const {
    int m = std::numeric_limits<int>::max();
    for (const auto& [k, c] : terms_) m = std::min(m, k.offset());
    return m;
  }

  DiffOperator& operator+=(const DiffOperator& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.a, k.b, c);
    return *this;
  }
  DiffOperator& operator-=(const DiffOperator& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.a, k.b, S{} - c);
    return *this;
  }
  DiffOperator& operator*=(const S& c) {
    if (scalar_traits<S>::is_zero(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v = v * c;
    return *this;
  }
  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
  friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a -= b; }
  friend DiffOperator operator*(DiffOperator a, const S& c) { return a *= c; }
  friend DiffOperator operator*(const S& c, DiffOperator a) { return a *= c; }
  friend bool operator==(const DiffOperator& a, const DiffOperator& b) { return a.terms_ == b.terms_; }

  /// Composition A∘B via Leibniz: d^b x^a = sum_k C(b,k) a!/(a-k)! x^(a-k) d^(b-k).
  friend DiffOperator operator*(const DiffOperator& lhs, const DiffOperator& rhs) {
    DiffOperator out;
    for (const auto& [k1, c1] : lhs.terms_) {
      for (const auto& [k2, c2] : rhs.terms_) {
        const int kmax = std::min(k1.b, k2.a);
        for (int k = 0; k <= kmax; ++k) {
          const long long w = binomial(k1.b, k) * falling_factorial(k2.a, k);
          out.add_term(k1.a + k2.a - k, k1.b - k + k2.b, c1 * c2 * scalar_traits<S>::from_int(w));
        }
      }
    }
    return out;
  }

  DiffOperator pow(int n) const {
    DiffOperator out = constant(one());
    for (int i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  template <CoefficientField T>
  DiffOperator<T> cast() const {
    DiffOperator<T> out;
    for (const auto& [k, c] : terms_) out.add_term(k.a, k.b, scalar_cast<T>(c));
    return out;
  }

 private:
  static S one() { return scalar_traits<S>::from_int(1); }
  term_map terms_;
};

template <CoefficientField S>
DiffOperator<S> commutator(const DiffOperator<S>& a, const DiffOperator<S>& b) {
  return a * b - b * a;
}

/// Exact image of a coefficient sequence (lowest degree first):
/// c x^a d^b sends x^n to c n!/(n-b)! x^(n-b+a).
template <CoefficientField S>
std::vector<S> act(const DiffOperator<S>& op, const std::vector<S>& poly) {
  std::vector<S> out;
  for (std::size_t n = 0; n < poly.size(); ++n) {
    if (scalar_traits<S>::is_zero(poly[n])) continue;
    for (const auto& [k, c] : op.terms()) {
      const long long w = falling_factorial(static_cast<long long>(n), k.b);
      if (w == 0) continue;
      const std::size_t target = n - static_cast<std::size_t>(k.b) + static_cast<std::size_t>(k.a);
      if (target >= out.size()) out.resize(target + 1);
      out[target] = out[target] + c * scalar_traits<S>::from_int(w) * poly[n];
    }
  }
  while (!out.empty() && scalar_traits<S>::is_zero(out.back())) out.pop_back();
  return out;
}

template <CoefficientField S>
std::vector<S> monomial_vector(int n) {
  std::vector<S> v(static_cast<std::size_t>(n) + 1);
  v.back() = scalar_traits<S>::from_int(1);
  return v;
}

template <CoefficientField S>
std::string to_string(const DiffOperator<S>& op) {
  if (op.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : op.terms()) {
    if (!first) out += " + ";
    first = false;
    out += scalar_traits<S>::format(c);
    if (k.a) out += "*x^" + std::to_string(k.a);
    if (k.b) out += "*d^" + std::to_string(k.b);
  }
  return out;
}

}  // namespace qesboson
