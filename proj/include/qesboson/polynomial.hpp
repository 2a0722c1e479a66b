#pragma once

#include <algorithm>
#include <vector>

#include "qesboson/scalar.hpp"

namespace qesboson {

/// Dense univariate polynomial, coefficients stored lowest degree first.
template <CoefficientField S>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const S& c) { return Polynomial(std::vector<S>{c}); }
  /// The indeterminate itself.
  static Polynomial x() { return Polynomial(std::vector<S>{S{}, scalar_traits<S>::from_int(1)}); }

  const std::vector<S>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  S leading() const { return c_.empty() ? S{} : c_.back(); }
  S operator[](std::size_t i) const { return i < c_.size() ? c_[i] : S{}; }

  template <class T>
  T evaluate(const T& at) const {
    T acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + scalar_cast_to<T>(*it);
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const S& k) {
    for (auto& v : c_) v = v * k;
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const S& k) { return a *= k; }
  friend Polynomial operator*(const S& k, Polynomial a) { return a *= k; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<S> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<S> out(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * scalar_traits<S>::from_int(static_cast<long long>(i));
    return Polynomial(std::move(out));
  }

  template <CoefficientField T>
  Polynomial<T> cast() const {
    std::vector<T> out;
    out.reserve(c_.size());
    for (const auto& v : c_) out.push_back(scalar_cast<T>(v));
    return Polynomial<T>(std::move(out));
  }

 private:
  template <class T>
  static T scalar_cast_to(const S& v) {
    if constexpr (std::is_same_v<T, S>) {
      return v;
    } else {
      return T(scalar_traits<S>::to_complex(v));
    }
  }

  void trim() {
    while (!c_.empty() && scalar_traits<S>::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<S> c_;
};

}  // namespace qesboson
