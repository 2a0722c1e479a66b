#pragma once

// Concrete two-mode systems: the Karassiov-Klimov family, the thermal su(1,1)
// Hamiltonian, the anharmonic and sextic constructions with their
// Schroedinger-form potentials, and the two-variable Hermite polynomials.
//
// Every operator is built over ComplexRational from double parameters (an
// exact conversion), so transformed forms and recurrences are exact.

#include <nlohmann/json.hpp>

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qesboson/algebra.hpp"
#include "qesboson/qes.hpp"

namespace qesboson {

using Exact = ComplexRational;

namespace detail {
inline Exact exact(Complex z) { return Exact(z); }
inline Exact exact(double x) { return Exact(Complex(x, 0.0)); }
}  // namespace detail

// ---------------------------------------------------------------------------
// Comparison against reference (hand-transcribed) forms

struct CoefficientDiff {
  std::string term;
  Complex mechanical;
  Complex reference;
  bool match = false;
};

struct ReferenceDiff {
  std::string name;
  std::vector<CoefficientDiff> rows;

  bool matches() const {
    for (const auto& r : rows)
      if (!r.match) return false;
    return true;
  }
  std::size_t mismatches() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.match ? 0 : 1;
    return n;
  }
};

inline nlohmann::json to_json(const ReferenceDiff& d) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : d.rows)
    rows.push_back({{"term", r.term},
                    {"mechanical", complex_json(r.mechanical)},
                    {"reference", complex_json(r.reference)},
                    {"match", r.match}});
  return {{"name", d.name}, {"matches", d.matches()}, {"rows", rows}};
}

inline ReferenceDiff diff_operators(std::string name, const DiffOperator<Exact>& mechanical, const DiffOperator<Exact>& reference) {
  ReferenceDiff out{std::move(name), {}};
  std::map<DiffTermKey, std::pair<Exact, Exact>> keys;
  for (const auto& [k, c] : mechanical.terms()) keys[k].first = c;
  for (const auto& [k, c] : reference.terms()) keys[k].second = c;
  for (const auto& [k, v] : keys) {
    std::string term = "x^" + std::to_string(k.a) + " d^" + std::to_string(k.b);
    out.rows.push_back({term, v.first.to_complex(), v.second.to_complex(), v.first == v.second});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Karassiov-Klimov family  H = w1 n1 + w2 n2 + kappa a1d^s a2^r + kappa_bar a1^s a2d^r

struct KKParams {
  int s = 2;
  int r = 2;
  double omega1 = 1.0;
  double omega2 = 1.0;
  Complex kappa{0.5, 0.0};
  Complex kappa_bar{0.5, 0.0};

  bool hermitian() const { return kappa_bar == std::conj(kappa); }
};

inline void validate(const KKParams& p) {
  if (p.s <= 0 || p.r <= 0 || p.r > p.s) throw Error(ErrorKind::InvalidArgument, "Karassiov-Klimov exponents need 0 < r <= s");
}

template <CoefficientField S = Exact>
BosonOperator<S> kk_build(const KKParams& p) {
  validate(p);
  using Op = BosonOperator<S>;
  auto c = [](Complex z) { return scalar_traits<S>::from_complex(z); };
  return Op::n1() * c(p.omega1) + Op::n2() * c(p.omega2) + Op::monomial(c(p.kappa), {p.s, 0, 0, p.r}) +
         Op::monomial(c(p.kappa_bar), {0, p.s, p.r, 0});
}

/// s = r = 2 written with the Schwinger su(2) generators:
/// (w1 - w2) J0 + kappa J+^2 + kappa_bar J-^2 + (w1 + w2) N / 2.
template <CoefficientField S = Exact>
BosonOperator<S> kk_su2_form(const KKParams& p) {
  auto c = [](Complex z) { return scalar_traits<S>::from_complex(z); };
  const auto g = su2_schwinger<S>();
  const S half = scalar_traits<S>::from_rational(Rational(1, 2));
  return g.zero * (c(p.omega1) - c(p.omega2)) + g.plus.pow(2) * c(p.kappa) + g.minus.pow(2) * c(p.kappa_bar) +
         g.charge * ((c(p.omega1) + c(p.omega2)) * half);
}

/// Conserved charge (r/g, s/g), g = gcd(r, s).
inline std::pair<int, int> kk_charge(const KKParams& p) {
  validate(p);
  const int g = std::gcd(p.r, p.s);
  return {p.r / g, p.s / g};
}

inline TransformSpec kk_transform(const KKParams& p) { return {TransformKind::S, Rational(p.r, p.s)}; }

struct KKSector {
  int value = 0;                    ///< M = (r/g) n1 + (s/g) n2
  std::pair<int, int> charge{1, 1};
  Rational sector_value{0};         ///< eigenvalue of a2d a2 after the transform: g M / s
  MonomialBasis basis;              ///< mode-1 occupations present in the sector
};

inline KKSector kk_sector(const KKParams& p, int value) {
  if (value < 0) throw Error(ErrorKind::InvalidArgument, "sector value must be non-negative");
  const auto charge = kk_charge(p);
  const auto [rp, sp] = charge;
  const int g = std::gcd(p.r, p.s);
  KKSector out;
  out.value = value;
  out.charge = charge;
  out.sector_value = Rational(g * value, p.s);
  int residue = 0;
  while (residue < sp && (rp * residue - value) % sp != 0) ++residue;
  const int bound = value / rp;
  out.basis.residue = residue;
  out.basis.stride = sp;
  out.basis.top = residue <= bound ? residue + sp * ((bound - residue) / sp) : residue - 1;
  return out;
}

inline DiffOperator<Exact> kk_transformed(const KKParams& p, const Rational& sector_value) {
  return transform_operator(kk_transform(p), kk_build<Exact>(p)).to_diff_operator(sector_value);
}

struct QesRun {
  KKSector sector;
  DiffOperator<Exact> op;
  QesBlock<Exact> blk;
  SpectrumResult block_spectrum;
  EnergyPolynomialRun<Exact> run;
  SpectrumResult energy_spectrum;
};

/// Transformed operator, invariant block and energy polynomials for sector M.
inline QesRun kk_qes(const KKParams& p, int value) {
  KKSector sec = kk_sector(p, value);
  DiffOperator<Exact> op = kk_transformed(p, sec.sector_value);
  QesBlock<Exact> blk = block(op, sec.basis);
  SpectrumResult bs = spectrum(blk);
  EnergyPolynomialRun<Exact> run = energy_polynomials(recurrence(op), sec.basis);
  SpectrumResult es = spectrum(run);
  for (auto* s : {&bs, &es}) {
    s->params["model"] = "kk";
    s->params["sector"] = value;
    s->params["sectorValue"] = detail::format_rational(sec.sector_value);
  }
  return {std::move(sec), std::move(op), std::move(blk), std::move(bs), std::move(run), std::move(es)};
}

/// Transformed operator with the first-order coefficient (w1 - r/s) and the
/// power (N' - (r/s) x d)^r, as it is commonly transcribed.
inline DiffOperator<Exact> kk_reference_general(const KKParams& p, const Rational& v) {
  using D = DiffOperator<Exact>;
  const Exact alpha(Rational(p.r, p.s));
  const Exact nv(v);
  D inner = D::constant(nv) - D::euler() * alpha;
  return D::euler() * (detail::exact(p.omega1) - alpha) + D::constant(nv * detail::exact(p.omega2)) +
         D::x(p.s) * inner.pow(p.r) * detail::exact(p.kappa) + D::d(p.s) * detail::exact(p.kappa_bar);
}

/// s = r = 2: (kb + k x^4) d^2 + x (w1 - w2 + 2k (3 - N') x^2) d - N' (w1 + k (1 - N') x^2).
inline DiffOperator<Exact> kk_reference_su2(const KKParams& p, const Rational& v) {
  using D = DiffOperator<Exact>;
  const Exact k = detail::exact(p.kappa);
  const Exact nv(v);
  return D::term(detail::exact(p.kappa_bar), 0, 2) + D::term(k, 4, 2) + D::term(detail::exact(p.omega1) - detail::exact(p.omega2), 1, 1) +
         D::term(Exact(2) * k * (Exact(3) - nv), 3, 1) - D::constant(nv * detail::exact(p.omega1)) -
         D::term(nv * k * (Exact(1) - nv), 2, 0);
}

/// Row-by-row comparison of the mechanical recurrence against the reference
/// three-term form written in the input-degree (transposed) convention:
/// diag, raise = coefficient of x^{n+s} in D x^n, lower = coefficient of x^{n-s}.
inline ReferenceDiff kk_recurrence_diff(const KKParams& p, const Rational& v, int nmax, bool su2_form) {
  const DiffOperator<Exact> op = kk_transformed(p, v);
  const Exact alpha(Rational(p.r, p.s));
  const Exact nv(v);
  const Exact k = detail::exact(p.kappa);
  const Exact kb = detail::exact(p.kappa_bar);
  ReferenceDiff out{su2_form ? "kk-su2-recurrence" : "kk-recurrence", {}};
  for (int n = 0; n <= nmax; ++n) {
    const auto image = act(op, monomial_vector<Exact>(n));
    auto at = [&](int deg) { return deg >= 0 && deg < static_cast<int>(image.size()) ? image[static_cast<std::size_t>(deg)] : Exact{}; };
    const Exact ne(n);
    Exact diag;
    Exact raise;
    Exact lower = kb * Exact(falling_factorial(n, p.s));
    if (su2_form) {
      diag = detail::exact(p.omega1) * (ne - nv) - detail::exact(p.omega2) * ne;
      raise = k * (nv - ne) * (nv - ne - Exact(1));
    } else {
      diag = detail::exact(p.omega1) - alpha + nv * detail::exact(p.omega2);
      raise = k;
      for (int i = 0; i < p.r; ++i) raise = raise * (nv - alpha * ne);
    }
    const std::string idx = "(n=" + std::to_string(n) + ")";
    out.rows.push_back({"diag" + idx, at(n).to_complex(), diag.to_complex(), at(n) == diag});
    out.rows.push_back({"raise" + idx, at(n + p.s).to_complex(), raise.to_complex(), at(n + p.s) == raise});
    out.rows.push_back({"lower" + idx, at(n - p.s).to_complex(), lower.to_complex(), at(n - p.s) == lower});
  }
  return out;
}

inline std::vector<ReferenceDiff> kk_reference_diffs(const KKParams& p, const Rational& v) {
  std::vector<ReferenceDiff> out;
  const auto mech = kk_transformed(p, v);
  out.push_back(diff_operators("kk-transformed", mech, kk_reference_general(p, v)));
  const int nmax = static_cast<int>(std::ceil(v.convert_to<double>() * p.s / p.r)) + p.s;
  out.push_back(kk_recurrence_diff(p, v, nmax, false));
  if (p.s == 2 && p.r == 2) {
    out.push_back(diff_operators("kk-su2-differential", mech, kk_reference_su2(p, v)));
    out.push_back(kk_recurrence_diff(p, v, nmax, true));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Potentials

enum class Domain { FullLine, HalfLine };

/// Laurent polynomial: power -> coefficient.
using Laurent = std::map<int, Complex>;

namespace detail {

inline Laurent laurent_mul(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) out[i + j] += x * y;
  return out;
}
inline Laurent laurent_add(Laurent a, const Laurent& b, Complex scale = 1.0) {
  for (const auto& [i, y] : b) a[i] += scale * y;
  return a;
}
inline Laurent laurent_derivative(const Laurent& a) {
  Laurent out;
  for (const auto& [i, x] : a)
    if (i != 0) out[i - 1] += static_cast<double>(i) * x;
  return out;
}
inline Laurent laurent_prune(Laurent a, double tol = 0.0) {
  for (auto it = a.begin(); it != a.end();) it = std::abs(it->second) <= tol ? a.erase(it) : std::next(it);
  return a;
}
inline Complex laurent_eval(const Laurent& a, double z) {
  Complex acc = 0.0;
  for (const auto& [i, c] : a) acc += c * std::pow(z, i);
  return acc;
}

}  // namespace detail

/// Schroedinger-form potential: -kinetic u'' + V u = E u, with
/// V(z) = sum_i v_i z^i + centrifugal / z^2. The gauge function W relates the
/// QES eigenfunction R to u by R = exp(gauge_sign * integral W) u.
struct PotentialModel {
  std::string model;
  Domain domain = Domain::FullLine;
  double kinetic = 0.5;
  Laurent v;  ///< all powers of V, including -2 for the centrifugal term
  Laurent w;
  int gauge_sign = -1;
  /// QES eigenvalue E corresponds to Schroedinger eigenvalue E + energy_offset.
  double energy_offset = 0.0;
  nlohmann::json params = nlohmann::json::object();

  Complex potential(double z) const { return detail::laurent_eval(v, z); }
  Complex weight(double z) const { return detail::laurent_eval(w, z); }
  Complex centrifugal() const {
    auto it = v.find(-2);
    return it == v.end() ? Complex{} : it->second;
  }
  Complex coefficient(int power) const {
    auto it = v.find(power);
    return it == v.end() ? Complex{} : it->second;
  }
  bool real_valued(double tol = 1e-14) const {
    for (const auto& [i, c] : v)
      if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) return false;
    return true;
  }
};

namespace detail {

inline Laurent coefficient_column(const DiffOperator<Exact>& op, int b) {
  Laurent out;
  for (const auto& [k, c] : op.terms())
    if (k.b == b) out[k.a] += c.to_complex();
  return laurent_prune(std::move(out));
}

inline void require_order_two(const DiffOperator<Exact>& op) {
  for (const auto& [k, c] : op.terms())
    if (k.b > 2) throw Error(ErrorKind::InvalidArgument, "gauge reduction needs a second-order operator");
}

}  // namespace detail

/// -kappa d^2 + B(x) d + C(x) on the full line: W = -B / (2 kappa),
/// V = B^2 / (4 kappa) - B' / 2 + C, and R = exp(-integral W) u.
inline PotentialModel full_line_potential(const DiffOperator<Exact>& op) {
  detail::require_order_two(op);
  const Laurent second = detail::coefficient_column(op, 2);
  if (second.size() != 1 || second.begin()->first != 0 || second.begin()->second.imag() != 0.0 || second.begin()->second.real() >= 0.0)
    throw Error(ErrorKind::InvalidArgument, "second-order part must be -kappa d^2 with kappa > 0");
  const double kappa = -second.begin()->second.real();
  const Laurent b = detail::coefficient_column(op, 1);
  const Laurent c = detail::coefficient_column(op, 0);
  PotentialModel out;
  out.domain = Domain::FullLine;
  out.kinetic = kappa;
  out.gauge_sign = -1;
  out.w = detail::laurent_add({}, b, -1.0 / (2.0 * kappa));
  Laurent v = detail::laurent_add(detail::laurent_mul(b, b), {}, 1.0);
  for (auto& [i, x] : v) x /= 4.0 * kappa;
  v = detail::laurent_add(v, detail::laurent_derivative(b), -0.5);
  v = detail::laurent_add(v, c);
  out.v = detail::laurent_prune(v);
  return out;
}

/// -x d^2 + P(x) d + C(x) under x = z^2/4: the z-operator is
/// -d_z^2 + 2 W(z) d_z + C(z^2/4) with W = (1/z + (2/z) P(z^2/4)) / 2, and
/// V = W^2 - W' + C. R = exp(+integral W) u.
inline PotentialModel radial_potential(const DiffOperator<Exact>& op) {
  detail::require_order_two(op);
  const Laurent second = detail::coefficient_column(op, 2);
  if (second.size() != 1 || second.begin()->first != 1 || second.begin()->second != Complex(-1.0, 0.0))
    throw Error(ErrorKind::InvalidArgument, "second-order part must be -x d^2");
  auto substitute = [](const Laurent& poly) {
    Laurent out;
    for (const auto& [a, c] : poly) out[2 * a] += c / std::pow(4.0, a);
    return out;
  };
  const Laurent p = substitute(detail::coefficient_column(op, 1));
  const Laurent c = substitute(detail::coefficient_column(op, 0));
  Laurent bz{{-1, 1.0}};
  bz = detail::laurent_add(bz, detail::laurent_mul(Laurent{{-1, 2.0}}, p));
  PotentialModel out;
  out.domain = Domain::HalfLine;
  out.kinetic = 1.0;
  out.gauge_sign = +1;
  out.w = detail::laurent_prune(detail::laurent_add({}, bz, 0.5));
  Laurent v = detail::laurent_mul(out.w, out.w);
  v = detail::laurent_add(v, detail::laurent_derivative(out.w), -1.0);
  v = detail::laurent_add(v, c);
  out.v = detail::laurent_prune(v, 1e-300);
  for (const auto& [i, x] : out.v)
    if (i < -2 || i == -1) throw Error(ErrorKind::InvalidArgument, "radial potential has an unexpected singular term z^" + std::to_string(i));
  return out;
}

inline ReferenceDiff diff_potentials(std::string name, const Laurent& mechanical, const Laurent& reference, double tol = 1e-12) {
  ReferenceDiff out{std::move(name), {}};
  std::map<int, std::pair<Complex, Complex>> keys;
  for (const auto& [i, c] : mechanical) keys[i].first = c;
  for (const auto& [i, c] : reference) keys[i].second = c;
  for (const auto& [i, v] : keys) {
    const double scale = std::max({1.0, std::abs(v.first), std::abs(v.second)});
    out.rows.push_back({"z^" + std::to_string(i), v.first, v.second, std::abs(v.first - v.second) <= tol * scale});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Thermal su(1,1) Hamiltonian  H = w (n1 - n2) - i g (a1d a2d - a1 a2)

struct ThermalParams {
  double omega = 1.0;
  double gamma = 0.0;
};

struct ThermalModel {
  BosonOperator<Exact> hamiltonian;
  BosonOperator<Exact> generator_form;  ///< w L - i g (K+ - K-)
  bool identity_holds = false;
  Rational sector_value{0};             ///< L' = -two_j - 1
  DiffOperator<Exact> first;            ///< via T(alpha=1)
  DiffOperator<Exact> second;           ///< via S(alpha=-1)
  std::vector<ReferenceDiff> diffs;
};

inline ThermalModel thermal_build(const ThermalParams& p, const Rational& two_j) {
  using Op = BosonOperator<Exact>;
  using D = DiffOperator<Exact>;
  const Exact w = detail::exact(p.omega);
  const Exact ig = detail::exact(Complex(0.0, p.gamma));
  ThermalModel m;
  m.hamiltonian = (Op::n1() - Op::n2()) * w - (Op::monomial(Exact(1), {1, 0, 1, 0}) - Op::monomial(Exact(1), {0, 1, 0, 1})) * ig;
  const auto g = su11_schwinger<Exact>();
  m.generator_form = g.charge * w - (g.plus - g.minus) * ig;
  m.identity_holds = m.hamiltonian == m.generator_form;
  m.sector_value = -two_j - 1;
  m.first = transform_operator({TransformKind::T, Rational(1)}, m.hamiltonian).to_diff_operator(m.sector_value);
  m.second = transform_operator({TransformKind::S, Rational(-1)}, m.hamiltonian).to_diff_operator(m.sector_value);
  const Exact tj(two_j);
  // w(-2j-1) - i g ((x^2 - 1) d - 2j x)   and   w(-2j-1) - i g (x - x d^2 + 2j d)
  const D ref_first = D::constant(w * (Exact(-1) - tj)) - (D::term(Exact(1), 2, 1) - D::d() - D::term(tj, 1, 0)) * ig;
  const D ref_second = D::constant(w * (Exact(-1) - tj)) - (D::x() - D::term(Exact(1), 1, 2) + D::term(tj, 0, 1)) * ig;
  m.diffs.push_back(diff_operators("thermal-first", m.first, ref_first));
  m.diffs.push_back(diff_operators("thermal-second", m.second, ref_second));
  return m;
}

// ---------------------------------------------------------------------------
// Anharmonic construction
// H = w1 n1 + w2 n2 + a1 a1d a2d + a2 a1 a2 - (1/2) a1^2 a2^2

struct AnharmonicParams {
  double omega1 = 0.5;
  double omega2 = 0.5;
  Complex alpha1{0.0, 0.0};
  Complex alpha2{0.0, 0.0};
  int k = 0;
};

struct AnharmonicModel {
  BosonOperator<Exact> hamiltonian;
  BosonOperator<Exact> generator_form;  ///< (w1+w2)(K0 - 1/2) + (w1-w2) L/2 + a1 K+ + a2 K- - K-^2/2
  bool identity_holds = false;
  Rational sector_value{0};             ///< L' = -2k - 1
  DiffOperator<Exact> differential;     ///< via T(alpha=1)
  MonomialBasis basis;                  ///< x^0 .. x^{2k}
  PotentialModel potential;
  std::vector<ReferenceDiff> diffs;
};

inline AnharmonicModel anharmonic_build(const AnharmonicParams& p) {
  if (p.k < 0) throw Error(ErrorKind::InvalidArgument, "k must be non-negative");
  using Op = BosonOperator<Exact>;
  using D = DiffOperator<Exact>;
  const Exact w1 = detail::exact(p.omega1);
  const Exact w2 = detail::exact(p.omega2);
  const Exact a1 = detail::exact(p.alpha1);
  const Exact a2 = detail::exact(p.alpha2);
  const Exact half(Rational(1, 2));
  AnharmonicModel m;
  m.hamiltonian = Op::n1() * w1 + Op::n2() * w2 + Op::monomial(a1, {1, 0, 1, 0}) + Op::monomial(a2, {0, 1, 0, 1}) -
                  Op::monomial(half, {0, 2, 0, 2});
  const auto g = su11_schwinger<Exact>();
  m.generator_form = (g.zero - Op::identity(half)) * (w1 + w2) + g.charge * ((w1 - w2) * half) + g.plus * a1 + g.minus * a2 -
                     g.minus.pow(2) * half;
  m.identity_holds = m.hamiltonian == m.generator_form;
  m.sector_value = Rational(-2 * p.k - 1);
  m.differential = transform_operator({TransformKind::T, Rational(1)}, m.hamiltonian).to_diff_operator(m.sector_value);
  m.basis = MonomialBasis::dense(2 * p.k);
  m.potential = full_line_potential(m.differential);
  m.potential.model = "anharmonic";
  m.potential.params = {{"omega1", p.omega1}, {"omega2", p.omega2}, {"alpha1", complex_json(p.alpha1)},
                        {"alpha2", complex_json(p.alpha2)}, {"k", p.k}};

  const Exact kk(p.k);
  const D ref_op = D::term(-half, 0, 2) + D::term(a2, 0, 1) + D::term(w1 + w2, 1, 1) + D::term(a1, 2, 1) -
                   D::term(Exact(2) * kk * a1, 1, 0) - D::constant(w1 * (Exact(2) * kk + Exact(1)));
  m.diffs.push_back(diff_operators("anharmonic-differential", m.differential, ref_op));
  const Complex W = p.omega1 + p.omega2;
  const double kd = p.k;
  const Laurent ref_v{{0, 0.5 * (p.alpha2 * p.alpha2 - p.omega1 * (4 * kd + 3) - p.omega2)},
                      {1, p.alpha2 * W - p.alpha1 * (2 * kd + 1)},
                      {2, 0.5 * (p.alpha1 * p.alpha2 + W * W)},
                      {3, p.alpha1 * W},
                      {4, 0.5 * p.alpha1 * p.alpha1}};
  m.diffs.push_back(diff_potentials("anharmonic-potential", m.potential.v, detail::laurent_prune(ref_v)));
  const Laurent ref_w{{0, -p.alpha2}, {1, -W}, {2, -p.alpha1}};
  m.diffs.push_back(diff_potentials("anharmonic-weight", m.potential.w, detail::laurent_prune(ref_w)));
  return m;
}

/// Pointwise check of exp(-g) H' (exp(g) f) = -kinetic f'' + V f with
/// g = gauge_sign * integral W, evaluated with second-order Taylor jets at x
/// rather than through V's closed form. Returns |lhs - rhs| / max(1, |lhs|, |rhs|).
inline double gauge_residual(const DiffOperator<Exact>& op, const PotentialModel& pm, const Polynomial<Complex>& f, double x) {
  const Complex W = pm.weight(x);
  const Complex dW = detail::laurent_eval(detail::laurent_derivative(pm.w), x);
  const Complex g1 = static_cast<double>(pm.gauge_sign) * W;
  const Complex g2 = static_cast<double>(pm.gauge_sign) * dW;
  const Complex f0 = f.evaluate(Complex(x));
  const Complex f1 = f.derivative().evaluate(Complex(x));
  const Complex f2 = f.derivative().derivative().evaluate(Complex(x));
  const Complex h[3] = {f0, f1 + g1 * f0, f2 + 2.0 * g1 * f1 + (g2 + g1 * g1) * f0};
  Complex lhs = 0.0;
  for (const auto& [k, c] : op.terms()) lhs += c.to_complex() * std::pow(x, k.a) * h[k.b];
  const Complex rhs = -pm.kinetic * f2 + pm.potential(x) * f0;
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// ---------------------------------------------------------------------------
// Sextic construction
// H = (w1 + a1) n1 + (w1 - a1) n2 + a+ a1d a2d + (a- - 1/2) a1 a2
//     - (1/2)(a2d a1 a2^2 + a1d a1^2 a2) + w1

struct SexticParams {
  double omega1 = 1.0;
  double alpha1 = 0.0;
  double alpha_plus = 1.0;
  double alpha_minus = -3.0;
  int k = 0;
};

struct SexticModel {
  BosonOperator<Exact> hamiltonian;
  BosonOperator<Exact> generator_form;  ///< 2 w1 K0 + a+ K+ + a- K- + a1 L - K0 K-
  bool identity_holds = false;
  Rational sector_value{0};             ///< L' = -2k - 1
  DiffOperator<Exact> differential;     ///< via T(alpha=1)
  MonomialBasis basis;
  PotentialModel potential;
  std::vector<ReferenceDiff> diffs;
};

inline SexticModel sextic_build(const SexticParams& p) {
  if (p.k < 0) throw Error(ErrorKind::InvalidArgument, "k must be non-negative");
  using Op = BosonOperator<Exact>;
  using D = DiffOperator<Exact>;
  const Exact w1 = detail::exact(p.omega1);
  const Exact a1 = detail::exact(p.alpha1);
  const Exact ap = detail::exact(p.alpha_plus);
  const Exact am = detail::exact(p.alpha_minus);
  const Exact half(Rational(1, 2));
  SexticModel m;
  m.hamiltonian = Op::n1() * (w1 + a1) + Op::n2() * (w1 - a1) + Op::monomial(ap, {1, 0, 1, 0}) +
                  Op::monomial(am - half, {0, 1, 0, 1}) - Op::monomial(half, {0, 1, 1, 2}) - Op::monomial(half, {1, 2, 0, 1}) +
                  Op::identity(w1);
  const auto g = su11_schwinger<Exact>();
  m.generator_form = g.zero * (Exact(2) * w1) + g.plus * ap + g.minus * am + g.charge * a1 - g.zero * g.minus;
  m.identity_holds = m.hamiltonian == m.generator_form;
  m.sector_value = Rational(-2 * p.k - 1);
  m.differential = transform_operator({TransformKind::T, Rational(1)}, m.hamiltonian).to_diff_operator(m.sector_value);
  m.basis = MonomialBasis::dense(2 * p.k);
  m.potential = radial_potential(m.differential);
  m.potential.model = "sextic";
  m.potential.params = {{"omega1", p.omega1}, {"alpha1", p.alpha1}, {"alphaPlus", p.alpha_plus}, {"alphaMinus", p.alpha_minus}, {"k", p.k}};

  const Exact kk(p.k);
  const D ref_op = D::term(Exact(-1), 1, 2) + D::term(am + kk, 0, 1) + D::term(Exact(2) * w1, 1, 1) + D::term(ap, 2, 1) -
                   D::constant(Exact(2) * kk * (ap + w1)) - D::term(Exact(2) * kk * ap, 1, 0);
  m.diffs.push_back(diff_operators("sextic-differential", m.differential, ref_op));
  const double kd = p.k;
  const double s = 1 + 2 * p.alpha_minus + 2 * kd;
  const Laurent ref_v{{0, p.alpha_minus * p.omega1 - kd * (2 * p.alpha1 + p.omega1)},
                      {-2, s * (s + 2) / 4},
                      {2, (p.alpha_plus * (p.alpha_minus - 3 * kd - 1) + 2 * p.omega1 * p.omega1) / 8},
                      {4, p.alpha_plus * p.omega1 / 16},
                      {6, (p.alpha_plus / 16) * (p.alpha_plus / 16)}};
  m.diffs.push_back(diff_potentials("sextic-potential", m.potential.v, detail::laurent_prune(ref_v)));
  const Laurent ref_w{{3, p.alpha_plus / 16}, {1, p.omega1 / 2}, {-1, s / 2}};
  m.diffs.push_back(diff_potentials("sextic-weight", m.potential.w, detail::laurent_prune(ref_w)));
  return m;
}

// ---------------------------------------------------------------------------
// Two-variable Hermite polynomials: (1/2)(-d1 d2 + x1 d1 + x2 d2 - n) R = 0

struct Polynomial2 {
  std::map<std::pair<int, int>, Rational> terms;  ///< (i, j) -> coefficient of x1^i x2^j

  double evaluate(double x1, double x2) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms) acc += c.convert_to<double>() * std::pow(x1, e.first) * std::pow(x2, e.second);
    return acc;
  }
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) d = std::max(d, e.first + e.second);
    return d;
  }
};

struct HermiteSolution {
  int n = 0;
  Polynomial2 poly;
};

/// Exact null space of (L - n), L = -d1 d2 + x1 d1 + x2 d2, on monomials of
/// total degree <= degree, for every n <= degree (or only `only_n`).
inline std::vector<HermiteSolution> hermite2d(int degree, std::optional<int> only_n = std::nullopt) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be non-negative");
  std::vector<std::pair<int, int>> mono;  // ascending total degree
  for (int t = 0; t <= degree; ++t)
    for (int i = t; i >= 0; --i) mono.push_back({i, t - i});
  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t c = 0; c < mono.size(); ++c) index[mono[c]] = c;
  const std::size_t dim = mono.size();
  std::vector<HermiteSolution> out;
  for (int n = 0; n <= degree; ++n) {
    if (only_n && *only_n != n) continue;
    std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
      const auto [i, j] = mono[c];
      a[c][c] += Rational(i + j - n);
      if (i > 0 && j > 0) a[index[{i - 1, j - 1}]][c] -= Rational(i * j);
    }
    // reduced row echelon form
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < dim && row < dim; ++col) {
      std::size_t sel = row;
      while (sel < dim && a[sel][col] == 0) ++sel;
      if (sel == dim) continue;
      std::swap(a[sel], a[row]);
      const Rational inv = 1 / a[row][col];
      for (auto& x : a[row]) x *= inv;
      for (std::size_t r = 0; r < dim; ++r) {
        if (r == row || a[r][col] == 0) continue;
        const Rational f = a[r][col];
        for (std::size_t c = 0; c < dim; ++c) a[r][c] -= f * a[row][c];
      }
      pivot_col.push_back(static_cast<int>(col));
      ++row;
    }
    std::vector<bool> is_pivot(dim);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    for (std::size_t free = 0; free < dim; ++free) {
      if (is_pivot[free]) continue;
      HermiteSolution s{n, {}};
      s.poly.terms[mono[free]] = 1;
      for (std::size_t r = 0; r < pivot_col.size(); ++r) {
        const Rational v = -a[r][free];
        if (v != 0) s.poly.terms[mono[static_cast<std::size_t>(pivot_col[r])]] = v;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

/// (1/2)(-d1 d2 R + x1 d1 R + x2 d2 R - n R) at a point, from exact derivatives.
inline double hermite_residual(const HermiteSolution& s, double x1, double x2) {
  double mixed = 0.0;
  double euler = 0.0;
  double value = 0.0;
  for (const auto& [e, c] : s.poly.terms) {
    const auto [i, j] = e;
    const double cd = c.convert_to<double>();
    value += cd * std::pow(x1, i) * std::pow(x2, j);
    euler += cd * (i + j) * std::pow(x1, i) * std::pow(x2, j);
    if (i > 0 && j > 0) mixed += cd * i * j * std::pow(x1, i - 1) * std::pow(x2, j - 1);
  }
  return 0.5 * (-mixed + euler - s.n * value);
}

inline std::string to_string(const Polynomial2& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += detail::format_rational(it->second);
    if (it->first.first) out += "*x1^" + std::to_string(it->first.first);
    if (it->first.second) out += "*x2^" + std::to_string(it->first.second);
  }
  return out;
}

}  // namespace qesboson
