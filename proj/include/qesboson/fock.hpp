#pragma once

// Truncated two-mode Fock space: sparse state vectors, ladder action of
// BosonOperator, and conserved-charge sectors.
//
// Ladder factors sqrt(n!/(n-k)!) are built from 64-bit falling factorials,
// which stay exact for occupations up to ~60 and exponents <= 4; sector
// sizes in this library are far below that.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qesboson/boson.hpp"

namespace qesboson {

using Occupation = std::pair<int, int>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

class FockVector {
 public:
  using amplitude_map = std::map<Occupation, Complex>;

  explicit FockVector(int cutoff = 0) : cutoff_(cutoff) {
    if (cutoff < 0) throw Error(ErrorKind::InvalidArgument, "negative cutoff");
  }

  static FockVector basis(int n1, int n2, int cutoff) {
    FockVector v(cutoff);
    v.add(n1, n2, 1.0);
    return v;
  }

  /// Maximum total occupation n1 + n2.
  int cutoff() const { return cutoff_; }
  const amplitude_map& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }

  Complex amplitude(int n1, int n2) const {
    auto it = amps_.find({n1, n2});
    return it == amps_.end() ? Complex{} : it->second;
  }

  void add(int n1, int n2, Complex c) {
    if (n1 < 0 || n2 < 0) throw Error(ErrorKind::InvalidArgument, "negative occupation");
    if (n1 + n2 > cutoff_)
      throw Error(ErrorKind::TruncationOverflow,
                  "state |" + std::to_string(n1) + "," + std::to_string(n2) + "> exceeds cutoff " + std::to_string(cutoff_));
    if (c == Complex{}) return;
    auto [it, inserted] = amps_.try_emplace({n1, n2}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) amps_.erase(it);
    }
  }

  FockVector with_cutoff(int cutoff) const {
    FockVector out(cutoff);
    for (const auto& [n, c] : amps_) out.add(n.first, n.second, c);
    return out;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [n, c] : amps_) s += std::norm(c);
    return std::sqrt(s);
  }

  FockVector& operator+=(const FockVector& o) {
    if (o.cutoff_ > cutoff_) *this = with_cutoff(o.cutoff_);
    for (const auto& [n, c] : o.amps_) add(n.first, n.second, c);
    return *this;
  }
  FockVector& operator*=(Complex c) {
    if (c == Complex{}) {
      amps_.clear();
      return *this;
    }
    for (auto& [n, v] : amps_) v *= c;
    return *this;
  }
  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a += (FockVector(b) *= -1.0); }
  friend FockVector operator*(Complex c, FockVector v) { return v *= c; }

 private:
  int cutoff_;
  amplitude_map amps_;
};

namespace detail {

inline double ladder_factor(int n, int lower, int raise) {
  if (n < lower) return 0.0;
  const int mid = n - lower;
  return std::sqrt(static_cast<double>(falling_factorial(n, lower))) *
         std::sqrt(static_cast<double>(falling_factorial(mid + raise, raise)));
}

/// Image of |n1,n2> under a single normal-ordered monomial; nullopt when annihilated.
inline std::optional<std::pair<Occupation, double>> act_monomial(const Exponents& e, int n1, int n2) {
  if (n1 < e.q || n2 < e.s) return std::nullopt;
  double amp = ladder_factor(n1, e.q, e.p) * ladder_factor(n2, e.s, e.r);
  return std::pair<Occupation, double>{{n1 - e.q + e.p, n2 - e.s + e.r}, amp};
}

}  // namespace detail

/// Linear ladder action; throws TruncationOverflow when a raised component
/// would leave the vector's cutoff.
template <CoefficientField S>
FockVector apply(const BosonOperator<S>& op, const FockVector& v) {
  FockVector out(v.cutoff());
  for (const auto& [n, amp] : v.amplitudes()) {
    for (const auto& [e, c] : op.terms()) {
      auto image = detail::act_monomial(e, n.first, n.second);
      if (!image) continue;
      out.add(image->first.first, image->first.second, scalar_traits<S>::to_complex(c) * image->second * amp);
    }
  }
  return out;
}

/// States with c1*n1 + c2*n2 = value, each occupation at most `cutoff`.
class Sector {
 public:
  Sector(std::pair<int, int> charge, int value, int cutoff) : charge_(charge), value_(value), cutoff_(cutoff) {
    if (charge.first == 0 && charge.second == 0) throw Error(ErrorKind::InvalidArgument, "trivial charge");
    if (cutoff < 0) throw Error(ErrorKind::InvalidArgument, "negative cutoff");
    const auto [c1, c2] = charge;
    for (int n1 = 0; n1 <= cutoff; ++n1) {
      if (c2 == 0) {
        if (c1 * n1 != value) continue;
        for (int n2 = 0; n2 <= cutoff; ++n2) basis_.push_back({n1, n2});
        continue;
      }
      const int rest = value - c1 * n1;
      if (rest % c2 != 0) continue;
      const int n2 = rest / c2;
      if (n2 >= 0 && n2 <= cutoff) basis_.push_back({n1, n2});
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
  }

  static Sector total_number(int n, int cutoff) { return Sector({1, 1}, n, cutoff); }
  static Sector number_difference(int l, int cutoff) { return Sector({1, -1}, l, cutoff); }

  std::pair<int, int> charge() const { return charge_; }
  int value() const { return value_; }
  int cutoff() const { return cutoff_; }
  const std::vector<Occupation>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }

  std::optional<std::size_t> index_of(Occupation n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// True when the charge class is finite and lies entirely inside the cutoff,
  /// so sector matrices carry no truncation error.
  bool complete() const {
    const auto [c1, c2] = charge_;
    if (c1 <= 0 || c2 <= 0) return false;
    if (value_ < 0) return true;
    return value_ / c1 <= cutoff_ && value_ / c2 <= cutoff_;
  }

 private:
  std::pair<int, int> charge_;
  int value_;
  int cutoff_;
  std::vector<Occupation> basis_;
  std::map<Occupation, std::size_t> index_;
};

/// M[i][j] = <basis_i| op |basis_j>. Components leaving a truncated sector are
/// projected out (the sector's cutoff is a projection, not an error).
template <CoefficientField S>
MatrixXc matrix_in_sector(const BosonOperator<S>& op, const Sector& sec) {
  if (!conserves(op, sec.charge()))
    throw Error(ErrorKind::ChargeViolation, "operator does not conserve charge (" + std::to_string(sec.charge().first) +
                                                "," + std::to_string(sec.charge().second) + ")");
  const auto dim = static_cast<Eigen::Index>(sec.dimension());
  MatrixXc m = MatrixXc::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto [n1, n2] = sec.basis()[static_cast<std::size_t>(j)];
    for (const auto& [e, c] : op.terms()) {
      auto image = detail::act_monomial(e, n1, n2);
      if (!image) continue;
      auto i = sec.index_of(image->first);
      if (!i) continue;
      m(static_cast<Eigen::Index>(*i), j) += scalar_traits<S>::to_complex(c) * image->second;
    }
  }
  return m;
}

inline FockVector to_fock(const VectorXc& coeffs, const Sector& sec, int cutoff) {
  FockVector v(cutoff);
  for (std::size_t i = 0; i < sec.dimension(); ++i)
    v.add(sec.basis()[i].first, sec.basis()[i].second, coeffs(static_cast<Eigen::Index>(i)));
  return v;
}

}  // namespace qesboson
