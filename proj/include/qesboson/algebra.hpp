#pragma once

// Schwinger su(2)/su(1,1) generators, their Casimirs, the similarity maps
// S = (a2d)^(alpha n1) and T = a2^(alpha n1), and the four one-variable
// Gelfand-Dyson realizations they produce.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qesboson/diff_operator.hpp"
#include "qesboson/fock.hpp"

namespace qesboson {

enum class AlgebraKind { Su2, Su11 };

constexpr std::string_view to_string(AlgebraKind k) { return k == AlgebraKind::Su2 ? "su2-schwinger" : "su11-schwinger"; }

template <CoefficientField S>
struct GeneratorSet {
  AlgebraKind kind;
  BosonOperator<S> plus;
  BosonOperator<S> minus;
  BosonOperator<S> zero;
  /// N = n1 + n2 for su(2), L = n1 - n2 for su(1,1).
  BosonOperator<S> charge;
};

template <CoefficientField S>
GeneratorSet<S> su2_schwinger() {
  using Op = BosonOperator<S>;
  const S half = scalar_traits<S>::from_rational(Rational(1, 2));
  return {AlgebraKind::Su2, Op::a1d() * Op::a2(), Op::a2d() * Op::a1(), (Op::n1() - Op::n2()) * half, Op::n1() + Op::n2()};
}

template <CoefficientField S>
GeneratorSet<S> su11_schwinger() {
  using Op = BosonOperator<S>;
  const S half = scalar_traits<S>::from_rational(Rational(1, 2));
  return {AlgebraKind::Su11, Op::a1d() * Op::a2d(), Op::a2() * Op::a1(), (Op::n1() + Op::n2() + Op::identity()) * half,
          Op::n1() - Op::n2()};
}

struct IdentityCheck {
  std::string name;
  bool holds = false;
  std::string residual;  ///< text form of lhs - rhs; "0" when the identity holds
};

/// Commutation table and charge neutrality as exact operator identities.
template <CoefficientField S>
std::vector<IdentityCheck> commutation_identities(const GeneratorSet<S>& g) {
  using Op = BosonOperator<S>;
  const bool su2 = g.kind == AlgebraKind::Su2;
  const std::string P = su2 ? "J+" : "K+";
  const std::string M = su2 ? "J-" : "K-";
  const std::string Z = su2 ? "J0" : "K0";
  const std::string C = su2 ? "N" : "L";
  const S two = scalar_traits<S>::from_int(su2 ? 2 : -2);
  std::vector<std::tuple<std::string, Op>> residuals{
      {"[" + P + "," + M + "] = " + (su2 ? "2" : "-2") + Z, commutator(g.plus, g.minus) - g.zero * two},
      {"[" + Z + "," + P + "] = " + P, commutator(g.zero, g.plus) - g.plus},
      {"[" + Z + "," + M + "] = -" + M, commutator(g.zero, g.minus) + g.minus},
      {"[" + C + "," + P + "] = 0", commutator(g.charge, g.plus)},
      {"[" + C + "," + M + "] = 0", commutator(g.charge, g.minus)},
      {"[" + C + "," + Z + "] = 0", commutator(g.charge, g.zero)},
  };
  std::vector<IdentityCheck> out;
  for (auto& [name, res] : residuals) out.push_back({name, res.is_zero(), to_string(res)});
  return out;
}

/// Casimir in generator form, checked against its number-operator form:
/// su(2): J-J+ + J0(J0+1) = N(N+2)/4; su(1,1): -K-K+ + K0(K0+1) = (L+1)(L-1)/4.
template <CoefficientField S>
BosonOperator<S> casimir(const GeneratorSet<S>& g) {
  using Op = BosonOperator<S>;
  const Op one = Op::identity();
  const S quarter = scalar_traits<S>::from_rational(Rational(1, 4));
  Op generator_form;
  Op number_form;
  if (g.kind == AlgebraKind::Su2) {
    generator_form = g.minus * g.plus + g.zero * (g.zero + one);
    number_form = g.charge * (g.charge + one * scalar_traits<S>::from_int(2)) * quarter;
  } else {
    generator_form = g.zero * (g.zero + one) - g.minus * g.plus;
    number_form = (g.charge + one) * (g.charge - one) * quarter;
  }
  if (!(generator_form == number_form))
    throw Error(ErrorKind::IdentityFailure, std::string(to_string(g.kind)) + " Casimir: generator form " +
                                                to_string(generator_form) + " differs from " + to_string(number_form));
  return generator_form;
}

// ---------------------------------------------------------------------------
// Similarity transforms

enum class TransformKind { S, T };

struct TransformSpec {
  TransformKind kind = TransformKind::S;
  Rational alpha{1};
};

inline std::string describe(const TransformSpec& t) {
  return std::string(t.kind == TransformKind::S ? "S" : "T") + "(alpha=" + detail::format_rational(t.alpha) + ")";
}

struct TransformedState {
  FockVector state;
  /// Components mapped to zero because the mode-2 occupation would go negative.
  std::vector<Occupation> annihilated;
};

namespace detail {

/// sqrt(a!/b!) for non-negative integers.
inline double sqrt_factorial_ratio(int a, int b) {
  if (a >= b) return std::sqrt(static_cast<double>(falling_factorial(a, a - b)));
  return 1.0 / std::sqrt(static_cast<double>(falling_factorial(b, b - a)));
}

inline int integer_shift(const Rational& alpha, int n1) {
  Rational shift = alpha * n1;
  if (denominator(shift) != 1)
    throw Error(ErrorKind::NonIntegerShift,
                "alpha*n1 = " + format_rational(shift) + " is not an integer (n1 = " + std::to_string(n1) + ")");
  return numerator(shift).convert_to<int>();
}

}  // namespace detail

/// S|n1,n2> = (a2d)^(alpha n1)|n1,n2> = sqrt((n2+alpha n1)!/n2!) |n1, n2+alpha n1>
/// T|n1,n2> = a2^(alpha n1)|n1,n2>    = sqrt(n2!/(n2-alpha n1)!) |n1, n2-alpha n1>
/// Negative powers act as the inverse on the range; components whose mode-2
/// occupation would become negative are annihilated and reported.
inline TransformedState transform_state(const TransformSpec& t, const FockVector& v) {
  std::vector<std::tuple<int, int, Complex>> images;
  std::vector<Occupation> annihilated;
  int cutoff = v.cutoff();
  for (const auto& [n, amp] : v.amplitudes()) {
    const auto [n1, n2] = n;
    const int k = detail::integer_shift(t.alpha, n1);
    const int m = t.kind == TransformKind::S ? n2 + k : n2 - k;
    if (m < 0) {
      annihilated.push_back(n);
      continue;
    }
    const double c = t.kind == TransformKind::S ? detail::sqrt_factorial_ratio(m, n2) : detail::sqrt_factorial_ratio(n2, m);
    images.emplace_back(n1, m, amp * c);
    cutoff = std::max(cutoff, n1 + m);
  }
  TransformedState out{FockVector(cutoff), std::move(annihilated)};
  for (const auto& [n1, m, c] : images) out.state.add(n1, m, c);
  return out;
}

/// Inverse of transform_state on its range; InverseUndefined when a component
/// has no preimage with non-negative occupation.
inline FockVector inverse_transform_state(const TransformSpec& t, const FockVector& v) {
  std::vector<std::tuple<int, int, Complex>> images;
  int cutoff = v.cutoff();
  for (const auto& [n, amp] : v.amplitudes()) {
    const auto [n1, m] = n;
    const int k = detail::integer_shift(t.alpha, n1);
    const int n2 = t.kind == TransformKind::S ? m - k : m + k;
    if (n2 < 0)
      throw Error(ErrorKind::InverseUndefined, "component |" + std::to_string(n1) + "," + std::to_string(m) + "> has no preimage");
    const double c = t.kind == TransformKind::S ? detail::sqrt_factorial_ratio(n2, m) : detail::sqrt_factorial_ratio(m, n2);
    images.emplace_back(n1, n2, amp * c);
    cutoff = std::max(cutoff, n1 + n2);
  }
  FockVector out(cutoff);
  for (const auto& [n1, n2, c] : images) out.add(n1, n2, c);
  return out;
}

/// Key of a transformed term  a1d^p a1^q Y^k R^e, where Y = a2d a2 and the
/// mode-2 residue R is a2d (S, placed left of Y) or a2 (T, placed right of Y).
struct TransformedKey {
  int p = 0;
  int q = 0;
  int k = 0;
  Rational e{0};

  bool operator<(const TransformedKey& o) const { return std::tie(p, q, k, e) < std::tie(o.p, o.q, o.k, o.e); }
  bool operator==(const TransformedKey& o) const { return std::tie(p, q, k, e) == std::tie(o.p, o.q, o.k, o.e); }
};

template <CoefficientField S>
class TransformedOperator {
 public:
  explicit TransformedOperator(TransformKind kind) : kind_(kind) {}

  TransformKind kind() const { return kind_; }
  const std::map<TransformedKey, S>& terms() const { return terms_; }

  void add_term(const TransformedKey& key, const S& c) {
    if (scalar_traits<S>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second = it->second + c;
      if (scalar_traits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// True when no mode-2 residue power survives (all e = 0).
  bool is_polynomial() const {
    for (const auto& [k, c] : terms_)
      if (k.e != 0) return false;
    return true;
  }

  BosonOperator<S> to_boson_operator() const {
    require_polynomial();
    BosonOperator<S> out;
    for (const auto& [k, c] : terms_)
      out += BosonOperator<S>::monomial(c, {k.p, k.q, 0, 0}) * BosonOperator<S>::n2().pow(k.k);
    return out;
  }

  /// Bargmann-Fock image with a1d -> x, a1 -> d/dx and Y replaced by `sector_value`.
  DiffOperator<S> to_diff_operator(const Rational& sector_value) const {
    require_polynomial();
    const S v = scalar_traits<S>::from_rational(sector_value);
    DiffOperator<S> out;
    for (const auto& [k, c] : terms_) {
      S w = c;
      for (int i = 0; i < k.k; ++i) w = w * v;
      out.add_term(k.p, k.q, w);
    }
    return out;
  }

 private:
  void require_polynomial() const {
    if (!is_polynomial())
      throw Error(ErrorKind::ModeTwoResidue, "transformed operator keeps mode-2 powers: " + to_string(*this));
  }

  template <CoefficientField U>
  friend std::string to_string(const TransformedOperator<U>& op);

  TransformKind kind_;
  std::map<TransformedKey, S> terms_;
};

template <CoefficientField S>
std::string to_string(const TransformedOperator<S>& op) {
  if (op.terms_.empty()) return "0";
  std::string out;
  bool first = true;
  const std::string residue = op.kind_ == TransformKind::S ? "a2d" : "a2";
  for (const auto& [k, c] : op.terms_) {
    if (!first) out += " + ";
    first = false;
    out += scalar_traits<S>::format(c);
    if (k.p) out += "*a1d^" + std::to_string(k.p);
    if (k.q) out += "*a1^" + std::to_string(k.q);
    if (k.k) out += "*N2^" + std::to_string(k.k);
    if (k.e != 0) out += "*" + residue + "^(" + detail::format_rational(k.e) + ")";
  }
  return out;
}

/// Conjugates every term with the elementary rules
///   S: a1d -> a1d X^a, a1 -> a1 X^-a, a2d -> a2d, a2 -> a2 - a n1 X^-1   (X = a2d)
///   T: a1d -> a1d Z^a, a1 -> a1 Z^-a, a2 -> a2, a2d -> a2d + a n1 Z^-1   (Z = a2)
/// and commutes mode-2 factors through Y = a2d a2 (X Y = (Y-1) X, Z Y = (Y+1) Z).
/// Throws FractionalResidue if a non-integer mode-2 power survives.
template <CoefficientField S>
TransformedOperator<S> transform_operator(const TransformSpec& t, const BosonOperator<S>& op) {
  using Op = BosonOperator<S>;
  const S alpha = scalar_traits<S>::from_rational(t.alpha);
  TransformedOperator<S> out(t.kind);
  for (const auto& [e, c] : op.terms()) {
    const int delta = e.p - e.q;
    Rational residue = t.kind == TransformKind::S ? t.alpha * delta + e.r - e.s : t.alpha * delta + e.s - e.r;
    // polynomial in Y with mode-1 operator coefficients, index = power of Y
    std::vector<Op> poly{Op::identity()};
    const int factors = t.kind == TransformKind::S ? e.s : e.r;
    for (int i = 0; i < factors; ++i) {
      // S: (Y - alpha n1 - i);  T: (Y + alpha*delta + alpha n1 - i)
      Op shift = t.kind == TransformKind::S
                     ? Op::n1() * (S{} - alpha) - Op::identity(scalar_traits<S>::from_int(i))
                     : Op::n1() * alpha + Op::identity(alpha * scalar_traits<S>::from_int(delta) - scalar_traits<S>::from_int(i));
      std::vector<Op> next(poly.size() + 1);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k + 1] += poly[k];
        next[k] += poly[k] * shift;
      }
      poly = std::move(next);
    }
    const Op head = Op::monomial(c, {e.p, e.q, 0, 0});
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Op product = head * poly[k];
      for (const auto& [m, coeff] : product.terms())
        out.add_term({m.p, m.q, static_cast<int>(k), residue}, coeff);
    }
  }
  for (const auto& [k, c] : out.terms())
    if (denominator(k.e) != 1)
      throw Error(ErrorKind::FractionalResidue, "non-integer mode-2 power survives in " + to_string(out));
  return out;
}

// ---------------------------------------------------------------------------
// Gelfand-Dyson realizations

enum class RealizationLabel { GdSu2First, GdSu2Second, GdSu11First, GdSu11Second };

constexpr std::string_view to_string(RealizationLabel l) {
  switch (l) {
    case RealizationLabel::GdSu2First: return "gd-su2-first";
    case RealizationLabel::GdSu2Second: return "gd-su2-second";
    case RealizationLabel::GdSu11First: return "gd-su11-first";
    case RealizationLabel::GdSu11Second: return "gd-su11-second";
  }
  return "";
}

inline RealizationLabel parse_realization_label(std::string_view s) {
  for (auto l : {RealizationLabel::GdSu2First, RealizationLabel::GdSu2Second, RealizationLabel::GdSu11First,
                 RealizationLabel::GdSu11Second})
    if (to_string(l) == s) return l;
  throw Error(ErrorKind::ParseError, "unknown realization '" + std::string(s) + "'");
}

inline constexpr std::array<RealizationLabel, 4> all_realizations{RealizationLabel::GdSu2First, RealizationLabel::GdSu2Second,
                                                                  RealizationLabel::GdSu11First, RealizationLabel::GdSu11Second};

struct RealizationParams {
  RealizationLabel label = RealizationLabel::GdSu2First;
  /// Eigenvalue of a2d a2 after the transform: 2j for su(2), L' for su(1,1).
  Rational sector_value{0};
};

inline AlgebraKind algebra_of(RealizationLabel l) {
  return (l == RealizationLabel::GdSu2First || l == RealizationLabel::GdSu2Second) ? AlgebraKind::Su2 : AlgebraKind::Su11;
}

/// The similarity map producing each realization.
inline TransformSpec realization_transform(RealizationLabel l) {
  switch (l) {
    case RealizationLabel::GdSu2First: return {TransformKind::S, Rational(1)};
    case RealizationLabel::GdSu2Second: return {TransformKind::T, Rational(-1)};
    case RealizationLabel::GdSu11First: return {TransformKind::T, Rational(1)};
    case RealizationLabel::GdSu11Second: return {TransformKind::S, Rational(-1)};
  }
  return {};
}

template <CoefficientField S>
struct Realization {
  RealizationParams params;
  DiffOperator<S> plus;
  DiffOperator<S> minus;
  DiffOperator<S> zero;
  /// Image of N (su(2)) or L (su(1,1)) as a constant operator.
  DiffOperator<S> charge;

  std::vector<std::pair<std::string, const DiffOperator<S>*>> named() const {
    const bool su2 = algebra_of(params.label) == AlgebraKind::Su2;
    return {{su2 ? "J+" : "K+", &plus}, {su2 ? "J-" : "K-", &minus}, {su2 ? "J0" : "K0", &zero}, {su2 ? "N" : "L", &charge}};
  }
};

/// Closed forms with v = sector value:
///   gd-su2-first   J+ = -x^2 d + v x,        J- = d,               J0 = x d - v/2
///   gd-su2-second  J+ = x,                   J- = -x d^2 + v d,    J0 = x d - v/2
///   gd-su11-first  K+ = x^2 d + (v+1) x,     K- = d,               K0 = x d + (v+1)/2
///   gd-su11-second K+ = x,                   K- = x d^2 + (v+1) d, K0 = x d + (v+1)/2
/// `corrupt_plus` shifts the linear coefficient of the raising generator by +1
/// (negative control for the verifiers).
template <CoefficientField S>
Realization<S> gd_realization(const RealizationParams& p, bool corrupt_plus = false) {
  using D = DiffOperator<S>;
  const S v = scalar_traits<S>::from_rational(p.sector_value);
  const S one = scalar_traits<S>::from_int(1);
  const S half = scalar_traits<S>::from_rational(Rational(1, 2));
  const S bump = corrupt_plus ? one : S{};
  Realization<S> out{p, {}, {}, {}, {}};
  switch (p.label) {
    case RealizationLabel::GdSu2First:
      out.plus = D::term(S{} - one, 2, 1) + D::term(v + bump, 1, 0);
      out.minus = D::d();
      out.zero = D::euler() + D::constant(S{} - v * half);
      out.charge = D::constant(v);
      break;
    case RealizationLabel::GdSu2Second:
      out.plus = D::term(one + bump, 1, 0);
      out.minus = D::term(S{} - one, 1, 2) + D::term(v, 0, 1);
      out.zero = D::euler() + D::constant(S{} - v * half);
      out.charge = D::constant(v);
      break;
    case RealizationLabel::GdSu11First:
      out.plus = D::term(one, 2, 1) + D::term(v + one + bump, 1, 0);
      out.minus = D::d();
      out.zero = D::euler() + D::constant((v + one) * half);
      out.charge = D::constant(S{} - v);
      break;
    case RealizationLabel::GdSu11Second:
      out.plus = D::term(one + bump, 1, 0);
      out.minus = D::term(one, 1, 2) + D::term(v + one, 0, 1);
      out.zero = D::euler() + D::constant((v + one) * half);
      out.charge = D::constant(S{} - v);
      break;
  }
  return out;
}

struct RealizationCheck {
  std::string name;
  double residual = 0.0;
  bool pass = false;
  std::string detail;
};

struct RealizationReport {
  RealizationParams params;
  std::vector<RealizationCheck> checks;
  /// Informational comparisons against alternative reference conventions; never
  /// affect `pass()`.
  std::vector<RealizationCheck> notes;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

namespace detail {

/// max |coefficient| of [A,B] - c*Z applied to x^0..x^d, computed by repeated
/// action (independent of operator composition).
template <CoefficientField S>
double relation_residual(const DiffOperator<S>& a, const DiffOperator<S>& b, const DiffOperator<S>& rhs, int max_degree) {
  double worst = 0.0;
  for (int n = 0; n <= max_degree; ++n) {
    auto xn = monomial_vector<S>(n);
    auto ab = act(a, act(b, xn));
    auto ba = act(b, act(a, xn));
    auto r = act(rhs, xn);
    const std::size_t len = std::max({ab.size(), ba.size(), r.size()});
    ab.resize(len);
    ba.resize(len);
    r.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      const S diff = ab[i] - ba[i] - r[i];
      if (!scalar_traits<S>::is_zero(diff)) worst = std::max(worst, std::max(std::abs(scalar_traits<S>::to_complex(diff)), 1e-300));
    }
  }
  return worst;
}

template <CoefficientField S>
std::vector<RealizationCheck> commutation_checks(const Realization<S>& r, int max_degree) {
  const bool su2 = algebra_of(r.params.label) == AlgebraKind::Su2;
  const S two = scalar_traits<S>::from_int(su2 ? 2 : -2);
  const std::string P = su2 ? "J+'" : "K+'";
  const std::string M = su2 ? "J-'" : "K-'";
  const std::string Z = su2 ? "J0'" : "K0'";
  std::vector<RealizationCheck> out;
  auto add = [&](std::string name, double res) { out.push_back({std::move(name), res, res == 0.0, ""}); };
  add("[" + P + "," + M + "] = " + (su2 ? "2" : "-2") + Z, relation_residual(r.plus, r.minus, r.zero * two, max_degree));
  add("[" + Z + "," + P + "] = " + P, relation_residual(r.zero, r.plus, r.plus, max_degree));
  add("[" + Z + "," + M + "] = -" + M, relation_residual(r.zero, r.minus, r.minus * scalar_traits<S>::from_int(-1), max_degree));
  return out;
}

/// Matrix of a DiffOperator on the monomials listed in `degrees`, projected.
template <CoefficientField S>
MatrixXc monomial_matrix(const DiffOperator<S>& op, const std::vector<int>& degrees) {
  const auto dim = static_cast<Eigen::Index>(degrees.size());
  MatrixXc m = MatrixXc::Zero(dim, dim);
  std::map<int, Eigen::Index> where;
  for (Eigen::Index i = 0; i < dim; ++i) where[degrees[static_cast<std::size_t>(i)]] = i;
  for (Eigen::Index j = 0; j < dim; ++j) {
    auto image = act(op, monomial_vector<S>(degrees[static_cast<std::size_t>(j)]));
    for (std::size_t n = 0; n < image.size(); ++n) {
      auto it = where.find(static_cast<int>(n));
      if (it != where.end()) m(it->second, j) = scalar_traits<S>::to_complex(image[n]);
    }
  }
  return m;
}

}  // namespace detail

/// Sector whose transformed states |n1, v> carry the realization: N = v for
/// su(2); L = -v, truncated to `max_dim` states, for su(1,1).
inline Sector realization_sector(const RealizationParams& p, int max_dim) {
  if (denominator(p.sector_value) != 1 || p.sector_value < 0)
    throw Error(ErrorKind::InvalidArgument, "Fock comparison needs a non-negative integer sector value");
  const int v = numerator(p.sector_value).convert_to<int>();
  if (algebra_of(p.label) == AlgebraKind::Su2) return Sector::total_number(v, v);
  return Sector::number_difference(-v, v + max_dim - 1);
}

/// Largest |entry| difference between the transform_state conjugation of a
/// Schwinger generator and the realization's monomial matrix, under
/// x^n <-> sqrt(n!) |n, v>.
template <CoefficientField S>
double fock_conjugation_residual(const BosonOperator<S>& generator, const DiffOperator<S>& realized, const RealizationParams& p,
                                 int max_dim) {
  const Sector sec = realization_sector(p, max_dim);
  const TransformSpec t = realization_transform(p.label);
  const MatrixXc g = matrix_in_sector(generator, sec);
  const auto dim = static_cast<Eigen::Index>(sec.dimension());
  const int v = numerator(p.sector_value).convert_to<int>();
  std::vector<double> scale(sec.dimension());
  std::vector<int> degrees(sec.dimension());
  for (std::size_t i = 0; i < sec.dimension(); ++i) {
    const auto [n1, n2] = sec.basis()[i];
    auto image = transform_state(t, FockVector::basis(n1, n2, n1 + n2)).state;
    if (image.amplitudes().size() != 1 || image.amplitudes().begin()->first != Occupation{n1, v})
      throw Error(ErrorKind::IdentityFailure, "transformed basis state does not land on |n1, v>");
    const double d = image.amplitudes().begin()->second.real();
    scale[i] = d / std::sqrt(std::tgamma(n1 + 1.0));  // similarity weight times dictionary weight
    degrees[i] = n1;
  }
  MatrixXc conj(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      conj(i, j) = g(i, j) * scale[static_cast<std::size_t>(i)] / scale[static_cast<std::size_t>(j)];
  const MatrixXc mono = detail::monomial_matrix(realized, degrees);
  return (conj - mono).cwiseAbs().maxCoeff();
}

struct VerifyOptions {
  int max_degree = 10;
  int max_dim = 9;
  double fock_tolerance = 1e-12;
  bool corrupt_plus = false;
};

/// Commutation relations on monomials (exact), agreement with transform_operator
/// (exact), and agreement with transform_state conjugation in Fock space.
inline RealizationReport verify_realization(const RealizationParams& p, const VerifyOptions& opt = {}) {
  using Q = ComplexRational;
  RealizationReport report{p, {}, {}};
  const Realization<Q> r = gd_realization<Q>(p, opt.corrupt_plus);
  for (auto& c : detail::commutation_checks(r, opt.max_degree)) report.checks.push_back(std::move(c));

  const bool su2 = algebra_of(p.label) == AlgebraKind::Su2;
  const GeneratorSet<Q> g = su2 ? su2_schwinger<Q>() : su11_schwinger<Q>();
  const TransformSpec t = realization_transform(p.label);
  const std::vector<std::pair<const BosonOperator<Q>*, const DiffOperator<Q>*>> pairs{
      {&g.plus, &r.plus}, {&g.minus, &r.minus}, {&g.zero, &r.zero}, {&g.charge, &r.charge}};
  const auto names = r.named();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    RealizationCheck c{"transform_operator " + describe(t) + " of " + names[i].first, 0.0, false, ""};
    try {
      const DiffOperator<Q> mech = transform_operator(t, *pairs[i].first).to_diff_operator(p.sector_value);
      const DiffOperator<Q> diff = mech - *pairs[i].second;
      c.pass = diff.is_zero();
      c.residual = c.pass ? 0.0 : 1.0;
      c.detail = c.pass ? "" : "mechanical: " + to_string(mech) + "; emitted: " + to_string(*pairs[i].second);
    } catch (const Error& e) {
      c.detail = e.what();
      c.residual = 1.0;
    }
    report.checks.push_back(std::move(c));
  }

  if (denominator(p.sector_value) == 1 && p.sector_value >= 0 && (!su2 || p.sector_value + 1 <= opt.max_dim)) {
    for (std::size_t i = 0; i < 3; ++i) {
      RealizationCheck c{"Fock conjugation of " + names[i].first, 0.0, false, ""};
      c.residual = fock_conjugation_residual(*pairs[i].first, *pairs[i].second, p, opt.max_dim);
      c.pass = c.residual < opt.fock_tolerance;
      report.checks.push_back(std::move(c));
    }
  }

  if (p.label == RealizationLabel::GdSu2Second) {
    // reference variant J-' = -x d^2 + (v-1) d
    const Q v = scalar_traits<Q>::from_rational(p.sector_value);
    Realization<Q> reference = r;
    reference.minus = DiffOperator<Q>::term(Q(-1), 1, 2) + DiffOperator<Q>::term(v - Q(1), 0, 1);
    const double res = detail::relation_residual(reference.plus, reference.minus, reference.zero * Q(2), opt.max_degree);
    report.notes.push_back({"reference J-' = -x d^2 + (N'-1) d satisfies [J+',J-'] = 2J0'", res, res == 0.0,
                            res == 0.0 ? "" : "reference coefficient (N'-1) breaks the relation; N' is required"});
  }
  if (p.label == RealizationLabel::GdSu11Second) {
    // which similarity reproduces K+' = x, K-' = x d^2 + (v+1) d, K0' = x d + (v+1)/2
    for (TransformSpec cand : {TransformSpec{TransformKind::S, Rational(-1)}, TransformSpec{TransformKind::T, Rational(-1)},
                               TransformSpec{TransformKind::T, Rational(1)}}) {
      RealizationCheck c{"candidate " + describe(cand) + " reproduces the reference K' generators", 1.0, false, ""};
      try {
        bool all = true;
        for (std::size_t i = 0; i < 3; ++i) {
          auto mech = transform_operator(cand, *pairs[i].first).to_diff_operator(p.sector_value);
          all = all && (mech - *pairs[i].second).is_zero();
        }
        c.pass = all;
        c.residual = all ? 0.0 : 1.0;
        if (!all) c.detail = "different generators";
      } catch (const Error& e) {
        c.detail = e.what();
      }
      report.notes.push_back(std::move(c));
    }
  }
  return report;
}


// ---------------------------------------------------------------------------
// Full identity suite

struct SuiteEntry {
  std::string group;
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

struct AlgebraSuiteOptions {
  int sector_max = 8;      ///< sectors N = 0..max and L = -max..max; realization values 0..max
  int cutoff = 12;         ///< per-mode cutoff for the infinite su(1,1) sectors
  double tolerance = 1e-12;
  bool corrupt_plus = false;
};

struct AlgebraSuiteReport {
  std::vector<SuiteEntry> entries;
  std::vector<SuiteEntry> notes;

  bool pass() const {
    return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.pass; });
  }
  std::size_t identity_count() const { return entries.size(); }
};

namespace detail {

/// Largest entry of lhs - rhs restricted to states away from the cutoff
/// (one-step shifts out of a truncated sector are projected away).
inline double interior_residual(const MatrixXc& diff, const Sector& sec) {
  double worst = 0.0;
  for (std::size_t j = 0; j < sec.dimension(); ++j) {
    const auto [n1, n2] = sec.basis()[j];
    if (!sec.complete() && (n1 >= sec.cutoff() || n2 >= sec.cutoff())) continue;
    for (std::size_t i = 0; i < sec.dimension(); ++i)
      worst = std::max(worst, std::abs(diff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  }
  return worst;
}

}  // namespace detail

/// Exact operator identities (commutators and Casimirs of both Schwinger
/// algebras), the same identities as sector matrices, and every realization
/// check for sector values 0..sector_max.
inline AlgebraSuiteReport verify_algebra(const AlgebraSuiteOptions& opt = {}) {
  using Q = ComplexRational;
  if (opt.sector_max < 0 || opt.cutoff < opt.sector_max + 1)
    throw Error(ErrorKind::InvalidArgument, "need 0 <= sector_max < cutoff");
  AlgebraSuiteReport out;
  for (const auto& g : {su2_schwinger<Q>(), su11_schwinger<Q>()}) {
    const std::string group(to_string(g.kind));
    for (const auto& c : commutation_identities(g)) out.entries.push_back({group, c.name, c.holds, c.holds ? 0.0 : 1.0, c.residual});
    SuiteEntry cas{group, "Casimir generator form = number form", true, 0.0, ""};
    try {
      casimir(g);
    } catch (const Error& e) {
      cas = {group, cas.name, false, 1.0, e.what()};
    }
    out.entries.push_back(cas);

    // matrix form on sectors
    const bool su2 = g.kind == AlgebraKind::Su2;
    const Complex two(su2 ? 2.0 : -2.0, 0.0);
    double worst = 0.0;
    const int lo = su2 ? 0 : -opt.sector_max;
    for (int value = lo; value <= opt.sector_max; ++value) {
      const Sector sec = su2 ? Sector::total_number(value, value) : Sector::number_difference(value, opt.cutoff);
      const MatrixXc P = matrix_in_sector(g.plus, sec);
      const MatrixXc M = matrix_in_sector(g.minus, sec);
      const MatrixXc Z = matrix_in_sector(g.zero, sec);
      const MatrixXc C = matrix_in_sector(g.charge, sec);
      const MatrixXc I = MatrixXc::Identity(P.rows(), P.cols());
      const MatrixXc cas_lhs = su2 ? MatrixXc(M * P + Z * (Z + I)) : MatrixXc(Z * (Z + I) - M * P);
      const MatrixXc cas_rhs = su2 ? MatrixXc(C * (C + 2.0 * I) / 4.0) : MatrixXc((C + I) * (C - I) / 4.0);
      for (const MatrixXc& d : {MatrixXc(P * M - M * P - two * Z), MatrixXc(Z * P - P * Z - P), MatrixXc(Z * M - M * Z + M),
                                MatrixXc(C * P - P * C), MatrixXc(C * M - M * C), MatrixXc(cas_lhs - cas_rhs)})
        worst = std::max(worst, detail::interior_residual(d, sec));
    }
    out.entries.push_back({group, std::string("sector matrices: commutators and Casimir, ") + (su2 ? "N" : "|L|") + " <= " +
                                      std::to_string(opt.sector_max),
                           worst < opt.tolerance, worst, ""});
  }

  for (const RealizationLabel label : all_realizations) {
    for (int v = 0; v <= opt.sector_max; ++v) {
      const RealizationParams p{label, Rational(v)};
      VerifyOptions vo;
      vo.max_dim = std::min(9, opt.sector_max + 1);
      vo.fock_tolerance = opt.tolerance;
      vo.corrupt_plus = opt.corrupt_plus;
      const auto report = verify_realization(p, vo);
      const std::string group = std::string(to_string(label)) + " v=" + std::to_string(v);
      for (const auto& c : report.checks) out.entries.push_back({group, c.name, c.pass, c.residual, c.detail});
      if (v == opt.sector_max)
        for (const auto& c : report.notes) out.notes.push_back({group, c.name, c.pass, c.residual, c.detail});
    }
  }
  return out;
}

}  // namespace qesboson
