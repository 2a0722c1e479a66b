#pragma once

// Coefficient fields used across the library. Algebraic identities run over
// ComplexRational (exact); spectra and Fock-space actions run over
// std::complex<double>. Every template in the library is written against
// scalar_traits<S> so both instantiate from the same code.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <complex>
#include <cstdio>
#include <string>
#include <string_view>

#include "qesboson/errors.hpp"

namespace qesboson {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(long long re) : re_(re) {}  // NOLINT: implicit integer promotion is intended
  ComplexRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  /// Exact: every finite double is a dyadic rational.
  explicit ComplexRational(const Complex& z) : re_(z.real()), im_(z.imag()) {}

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  ComplexRational conj() const { return {re_, -im_}; }
  Complex to_complex() const { return {re_.convert_to<double>(), im_.convert_to<double>()}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    if (im_ == 0 && o.im_ == 0) {
      re_ *= o.re_;
      return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    if (o.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by exact zero");
    if (o.im_ == 0) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    Rational den = o.re_ * o.re_ + o.im_ * o.im_;
    Rational re = (re_ * o.re_ + im_ * o.im_) / den;
    Rational im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

 private:
  Rational re_{0};
  Rational im_{0};
};

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::ParseError, "bad real number '" + std::string(s) + "'");
  return value;
}

inline BigInt parse_bigint(std::string_view s) {
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty integer");
  for (char c : s)
    if (c < '0' || c > '9') throw Error(ErrorKind::ParseError, "bad integer '" + std::string(s) + "'");
  return BigInt(std::string(s));
}

/// Accepts `p`, `p/q`, or a decimal literal with optional exponent; decimals
/// are read exactly (0.1 becomes 1/10, not the nearest double).
inline Rational parse_rational(std::string_view s) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_bigint(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator");
    out = Rational(parse_bigint(s.substr(0, slash)), den);
  } else {
    long long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view ex = s.substr(e + 1);
      bool neg_exp = false;
      if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
        neg_exp = ex.front() == '-';
        ex.remove_prefix(1);
      }
      exponent = parse_bigint(ex).convert_to<long long>();
      if (neg_exp) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
      exponent -= static_cast<long long>(s.size() - dot - 1);
    } else {
      digits = std::string(s);
    }
    if (digits.empty()) throw Error(ErrorKind::ParseError, "bad rational literal");
    BigInt mantissa = parse_bigint(digits);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    out = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  }
  return negative ? Rational(-out) : out;
}

/// Splits "(re,im)" into its two halves; plain text is returned as the real part.
inline std::pair<std::string_view, std::string_view> split_complex(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.front() != '(') return {s, {}};
  if (s.back() != ')') throw Error(ErrorKind::ParseError, "unterminated complex literal");
  s = s.substr(1, s.size() - 2);
  auto comma = s.find(',');
  if (comma == std::string_view::npos) throw Error(ErrorKind::ParseError, "complex literal needs ','");
  return {s.substr(0, comma), s.substr(comma + 1)};
}

}  // namespace detail

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& x) { return x == Complex{}; }
  static Complex from_int(long long n) { return Complex(static_cast<double>(n), 0.0); }
  static Complex from_rational(const Rational& r) { return Complex(r.convert_to<double>(), 0.0); }
  static Complex from_complex(const Complex& z) { return z; }
  static Complex to_complex(const Complex& x) { return x; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static std::string format(const Complex& x) {
    if (x.imag() == 0.0) return detail::format_double(x.real());
    return "(" + detail::format_double(x.real()) + "," + detail::format_double(x.imag()) + ")";
  }
  static Complex parse(std::string_view s) {
    auto [re, im] = detail::split_complex(s);
    return {detail::parse_double(re), im.empty() ? 0.0 : detail::parse_double(im)};
  }
};

template <>
struct scalar_traits<ComplexRational> {
  static constexpr bool exact = true;
  static bool is_zero(const ComplexRational& x) { return x.is_zero(); }
  static ComplexRational from_int(long long n) { return ComplexRational(n); }
  static ComplexRational from_rational(const Rational& r) { return ComplexRational(r); }
  static ComplexRational from_complex(const Complex& z) { return ComplexRational(z); }
  static Complex to_complex(const ComplexRational& x) { return x.to_complex(); }
  static ComplexRational conj(const ComplexRational& x) { return x.conj(); }
  static std::string format(const ComplexRational& x) {
    if (x.is_real()) return detail::format_rational(x.real());
    return "(" + detail::format_rational(x.real()) + "," + detail::format_rational(x.imag()) + ")";
  }
  static ComplexRational parse(std::string_view s) {
    auto [re, im] = detail::split_complex(s);
    return {detail::parse_rational(re), im.empty() ? Rational(0) : detail::parse_rational(im)};
  }
};

template <class S>
concept CoefficientField = requires(const S& a, const S& b) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { scalar_traits<S>::is_zero(a) } -> std::convertible_to<bool>;
};

template <CoefficientField To, CoefficientField From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else {
    return scalar_traits<To>::from_complex(scalar_traits<From>::to_complex(x));
  }
}

/// n!/(n-k)!, zero when k > n. Exact in 64-bit for every size this library uses.
inline long long falling_factorial(long long n, long long k) {
  if (k < 0 || n < 0) return 0;
  if (k > n) return 0;
  long long out = 1;
  for (long long i = 0; i < k; ++i) out *= (n - i);
  return out;
}

inline long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (long long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace qesboson
