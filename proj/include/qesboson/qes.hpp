#pragma once

// Quasi-exactly-solvable machinery for one-variable differential operators:
// invariant monomial subspaces, the finite block, the banded recurrence
// sum_k c_k(n) P_{n+k} = E P_n, energy polynomials and the reconstruction of
// two-mode eigenvectors.

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qesboson/algebra.hpp"
#include "qesboson/diff_operator.hpp"
#include "qesboson/linalg.hpp"
#include "qesboson/polynomial.hpp"
#include "qesboson/spectrum.hpp"

namespace qesboson {

/// Monomials x^n with n = residue + stride*t, n <= top.
struct MonomialBasis {
  int residue = 0;
  int stride = 1;
  int top = 0;

  static MonomialBasis dense(int d) { return {0, 1, d}; }

  std::vector<int> degrees() const {
    std::vector<int> out;
    for (int n = residue; n <= top; n += stride) out.push_back(n);
    return out;
  }
  std::size_t size() const { return top < residue ? 0 : static_cast<std::size_t>((top - residue) / stride + 1); }
  bool contains(int n) const { return n >= residue && n <= top && (n - residue) % stride == 0; }
};

namespace detail {

/// Degrees carrying a nonzero coefficient in D x^n.
template <CoefficientField S>
std::vector<int> image_support(const DiffOperator<S>& op, int n) {
  std::vector<int> out;
  const auto image = act(op, monomial_vector<S>(n));
  for (std::size_t i = 0; i < image.size(); ++i)
    if (!scalar_traits<S>::is_zero(image[i])) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace detail

/// Smallest top <= dmax such that span{x^n : n = residue mod stride, n <= top}
/// is mapped into itself. Exact: the images are computed term by term.
template <CoefficientField S>
std::optional<int> invariant_degree(const DiffOperator<S>& op, int dmax, int stride = 1, int residue = 0) {
  if (dmax < 0 || stride <= 0 || residue < 0) throw Error(ErrorKind::InvalidArgument, "invalid invariant_degree arguments");
  int worst = -1;  // highest degree reached from the basis so far
  for (int top = residue; top <= dmax; top += stride) {
    const auto support = detail::image_support(op, top);
    for (int m : support) {
      if (m < residue || (m - residue) % stride != 0) return std::nullopt;  // leaks off the progression for every larger top
      worst = std::max(worst, m);
    }
    if (worst <= top) return top;
  }
  return std::nullopt;
}

template <CoefficientField S>
struct QesBlock {
  MonomialBasis basis;
  std::vector<std::vector<S>> exact;  ///< exact[i][j] = coefficient of x^{deg_i} in D x^{deg_j}
  MatrixXc matrix;
  double certificate = 0.0;  ///< largest |coefficient| leaking outside the basis; 0 for a genuine block
};

template <CoefficientField S>
QesBlock<S> block(const DiffOperator<S>& op, const MonomialBasis& basis) {
  const auto degrees = basis.degrees();
  const auto dim = degrees.size();
  QesBlock<S> out{basis, std::vector<std::vector<S>>(dim, std::vector<S>(dim)), MatrixXc::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)), 0.0};
  std::string leaks;
  for (std::size_t j = 0; j < dim; ++j) {
    const auto image = act(op, monomial_vector<S>(degrees[j]));
    for (std::size_t n = 0; n < image.size(); ++n) {
      if (scalar_traits<S>::is_zero(image[n])) continue;
      const int deg = static_cast<int>(n);
      if (!basis.contains(deg)) {
        out.certificate = std::max(out.certificate, std::abs(scalar_traits<S>::to_complex(image[n])));
        if (leaks.empty()) leaks = "x^" + std::to_string(degrees[j]) + " -> x^" + std::to_string(deg);
        continue;
      }
      const auto i = static_cast<std::size_t>((deg - basis.residue) / basis.stride);
      out.exact[i][j] = image[n];
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = scalar_traits<S>::to_complex(image[n]);
    }
  }
  if (!leaks.empty()) throw Error(ErrorKind::NotInvariant, "basis is not invariant: " + leaks);
  return out;
}

template <CoefficientField S>
QesBlock<S> block(const DiffOperator<S>& op, int d) {
  return block(op, MonomialBasis::dense(d));
}

template <CoefficientField S>
SpectrumResult spectrum(const QesBlock<S>& b) {
  SpectrumResult out;
  out.provenance = Provenance::QesBlock;
  out.eigenvalues = eigenvalues_general(b.matrix);
  out.certificate = b.certificate;
  out.params["dimension"] = b.basis.size();
  return out;
}

// ---------------------------------------------------------------------------
// Recurrence

/// Banded coefficients of the eigenvalue equation in the monomial basis:
/// sum_k c_k(n) P_{n+k} = E P_n, where c_k(n) is the coefficient of x^n in
/// D x^{n+k}. Built either symbolically from a DiffOperator (each c_k is a
/// polynomial in n) or from an explicit matrix.
template <CoefficientField S>
class Recurrence {
 public:
  /// c x^a d^b contributes c (n+k)!/(n+k-b)! to offset k = b - a.
  static Recurrence from_operator(const DiffOperator<S>& op) {
    Recurrence out;
    for (const auto& [key, c] : op.terms()) {
      const int k = key.b - key.a;
      Polynomial<S> ff = Polynomial<S>::constant(c);
      for (int i = 0; i < key.b; ++i)
        ff = ff * (Polynomial<S>::x() + Polynomial<S>::constant(scalar_traits<S>::from_int(k - i)));
      auto [it, inserted] = out.symbolic_.try_emplace(k, ff);
      if (!inserted) it->second += ff;
    }
    for (auto it = out.symbolic_.begin(); it != out.symbolic_.end();) it = it->second.is_zero() ? out.symbolic_.erase(it) : std::next(it);
    return out;
  }

  /// c_k(n) = m[n][n+k] for a square matrix indexed by degree.
  static Recurrence from_matrix(const std::vector<std::vector<S>>& m) {
    Recurrence out;
    out.tabulated_ = true;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[i].size(); ++j)
        if (!scalar_traits<S>::is_zero(m[i][j]))
          out.table_[{static_cast<int>(j) - static_cast<int>(i), static_cast<int>(i)}] = m[i][j];
    return out;
  }

  bool tabulated() const { return tabulated_; }
  const std::map<int, Polynomial<S>>& symbolic() const { return symbolic_; }

  std::vector<int> offsets() const {
    std::set<int> ks;
    if (tabulated_) {
      for (const auto& [key, c] : table_) ks.insert(key.first);
    } else {
      for (const auto& [k, p] : symbolic_) ks.insert(k);
    }
    return {ks.begin(), ks.end()};
  }

  S coefficient(int k, int n) const {
    if (tabulated_) {
      auto it = table_.find({k, n});
      return it == table_.end() ? S{} : it->second;
    }
    auto it = symbolic_.find(k);
    if (it == symbolic_.end()) return S{};
    return it->second.evaluate(scalar_traits<S>::from_int(n));
  }

 private:
  bool tabulated_ = false;
  std::map<int, Polynomial<S>> symbolic_;
  std::map<std::pair<int, int>, S> table_;
};

template <CoefficientField S>
Recurrence<S> recurrence(const DiffOperator<S>& op) {
  return Recurrence<S>::from_operator(op);
}

/// Exact check that the recurrence reproduces act(D, x^m) for every m <= nmax;
/// returns the first mismatch, if any.
template <CoefficientField S>
std::optional<std::string> recurrence_mismatch(const DiffOperator<S>& op, const Recurrence<S>& rec, int nmax) {
  const auto ks = rec.offsets();
  for (int m = 0; m <= nmax; ++m) {
    const auto image = act(op, monomial_vector<S>(m));
    std::map<int, S> predicted;
    for (int k : ks) {
      const int n = m - k;
      if (n < 0) continue;
      const S c = rec.coefficient(k, n);
      if (!scalar_traits<S>::is_zero(c)) predicted[n] = c;
    }
    for (std::size_t n = 0; n < image.size(); ++n) {
      auto it = predicted.find(static_cast<int>(n));
      const S p = it == predicted.end() ? S{} : it->second;
      if (!(p == image[n])) return "x^" + std::to_string(m) + ": coefficient of x^" + std::to_string(n) + " differs";
      if (it != predicted.end()) predicted.erase(it);
    }
    if (!predicted.empty()) return "x^" + std::to_string(m) + ": recurrence predicts x^" + std::to_string(predicted.begin()->first);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Energy polynomials

/// One independent chain of the recurrence. With w = (largest positive offset)
/// / step seeds, P at chain position t + w follows from row t; the last w rows
/// are the termination conditions, whose determinant is the eigenvalue
/// polynomial of the chain.
template <CoefficientField S>
struct EnergyChain {
  std::vector<int> degrees;
  int step = 1;
  int width = 0;
  /// p[t][i]: coefficient of seed i in P_{degrees[t]}, as a polynomial in E.
  std::vector<std::vector<Polynomial<S>>> p;
  Polynomial<S> determinant;
  std::vector<Complex> roots;
};

template <CoefficientField S>
struct EnergyPolynomialRun {
  MonomialBasis basis;
  Recurrence<S> rec;
  std::vector<EnergyChain<S>> chains;
  Polynomial<S> characteristic;  ///< product of the chain determinants
  std::vector<Complex> roots;

  /// P_n(E) for single-seed chains (seed P = 1 at the chain start).
  std::optional<Polynomial<S>> polynomial(int degree) const {
    for (const auto& c : chains) {
      if (c.width != 1) continue;
      for (std::size_t t = 0; t < c.degrees.size(); ++t)
        if (c.degrees[t] == degree) return c.p[t][0];
    }
    return std::nullopt;
  }
};

namespace detail {

template <CoefficientField S>
Polynomial<S> determinant(std::vector<std::vector<Polynomial<S>>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial<S>::constant(scalar_traits<S>::from_int(1));
  if (n == 1) return m[0][0];
  Polynomial<S> out;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<Polynomial<S>>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial<S>> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const Polynomial<S> term = m[0][col] * determinant(std::move(minor));
    if (col % 2 == 0) {
      out += term;
    } else {
      out -= term;
    }
  }
  return out;
}

/// Splits the basis into the classes coupled by the recurrence offsets.
inline std::vector<std::vector<int>> recurrence_chains(const MonomialBasis& basis, const std::vector<int>& offsets, int& step) {
  int g = 0;
  for (int k : offsets) g = std::gcd(g, std::abs(k));
  const auto degrees = basis.degrees();
  if (g == 0) {
    step = basis.stride;
    std::vector<std::vector<int>> out;
    for (int n : degrees) out.push_back({n});
    return out;
  }
  step = std::lcm(g, basis.stride);
  std::map<int, std::vector<int>> classes;
  for (int n : degrees) classes[((n % step) + step) % step].push_back(n);
  std::vector<std::vector<int>> out;
  for (auto& [r, list] : classes) out.push_back(std::move(list));
  return out;
}

}  // namespace detail

template <CoefficientField S>
EnergyPolynomialRun<S> energy_polynomials(const Recurrence<S>& rec, const MonomialBasis& basis) {
  using P = Polynomial<S>;
  const S one = scalar_traits<S>::from_int(1);
  EnergyPolynomialRun<S> run{basis, rec, {}, P::constant(one), {}};
  const auto offsets = rec.offsets();
  int step = 1;
  for (auto& degrees : detail::recurrence_chains(basis, offsets, step)) {
    EnergyChain<S> chain;
    chain.degrees = degrees;
    chain.step = step;
    int kmax = 0;
    for (int k : offsets) {
      if (k % step != 0) throw Error(ErrorKind::InvalidArgument, "recurrence offset " + std::to_string(k) + " is incompatible with the basis stride");
      kmax = std::max(kmax, k);
    }
    const int m = static_cast<int>(degrees.size());
    const int w = std::min(kmax / step, m);
    chain.width = w;
    chain.p.assign(static_cast<std::size_t>(m), std::vector<P>(static_cast<std::size_t>(w)));
    for (int i = 0; i < w; ++i) chain.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = P::constant(one);
    auto value = [&](int pos) -> const std::vector<P>* {
      if (pos < 0 || pos >= m) return nullptr;
      return &chain.p[static_cast<std::size_t>(pos)];
    };
    // row residual sum_k c_k(n_t) P_{t+k} - E P_t, seed by seed, excluding offset `skip`
    auto row = [&](int t, std::optional<int> skip) {
      std::vector<P> acc(static_cast<std::size_t>(w));
      const int n = degrees[static_cast<std::size_t>(t)];
      for (int k : offsets) {
        if (skip && k == *skip) continue;
        const auto* pk = value(t + k / step);
        if (!pk) continue;
        const S c = rec.coefficient(k, n);
        if (scalar_traits<S>::is_zero(c)) continue;
        for (int i = 0; i < w; ++i) acc[static_cast<std::size_t>(i)] += (*pk)[static_cast<std::size_t>(i)] * c;
      }
      for (int i = 0; i < w; ++i)
        acc[static_cast<std::size_t>(i)] -= P::x() * chain.p[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      return acc;
    };
    if (w == 0) {
      chain.determinant = P::constant(one);
      for (int t = 0; t < m; ++t)
        chain.determinant = chain.determinant * (P::constant(rec.coefficient(0, degrees[static_cast<std::size_t>(t)])) - P::x());
    } else {
      for (int t = 0; t + w < m; ++t) {
        const int n = degrees[static_cast<std::size_t>(t)];
        const S lead = rec.coefficient(kmax, n);
        if (scalar_traits<S>::is_zero(lead))
          throw Error(ErrorKind::ForwardSolveBlocked, "leading recurrence coefficient c_" + std::to_string(kmax) + "(" + std::to_string(n) + ") vanishes");
        const S inv = one / lead;
        auto acc = row(t, kmax);
        for (int i = 0; i < w; ++i)
          chain.p[static_cast<std::size_t>(t + w)][static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)] * (S{} - inv);
      }
      std::vector<std::vector<P>> term;
      for (int t = m - w; t < m; ++t) term.push_back(row(t, std::nullopt));
      chain.determinant = detail::determinant(std::move(term));
    }
    chain.roots = polynomial_roots(chain.determinant);
    run.characteristic = run.characteristic * chain.determinant;
    run.roots.insert(run.roots.end(), chain.roots.begin(), chain.roots.end());
    run.chains.push_back(std::move(chain));
  }
  sort_spectrum(run.roots);
  return run;
}

template <CoefficientField S>
EnergyPolynomialRun<S> energy_polynomials(const Recurrence<S>& rec, int d) {
  return energy_polynomials(rec, MonomialBasis::dense(d));
}

template <CoefficientField S>
SpectrumResult spectrum(const EnergyPolynomialRun<S>& run) {
  SpectrumResult out;
  out.provenance = Provenance::EnergyPolynomial;
  out.eigenvalues = run.roots;
  out.params["dimension"] = run.basis.size();
  out.params["chains"] = run.chains.size();
  return out;
}

/// Coefficients P_n(E) over the run's basis for an eigenvalue E: the chain
/// owning the nearest root is solved forward numerically, seeded by the null
/// vector of its termination matrix; the other chains are zero.
template <CoefficientField S>
std::vector<Complex> eigen_coefficients(const EnergyPolynomialRun<S>& run, Complex energy) {
  const EnergyChain<S>* best = nullptr;
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& c : run.chains)
    for (const auto& z : c.roots)
      if (std::abs(z - energy) < dist) {
        dist = std::abs(z - energy);
        best = &c;
      }
  if (!best) throw Error(ErrorKind::InvalidArgument, "energy polynomial run has no roots");
  const auto& c = *best;
  const int m = static_cast<int>(c.degrees.size());
  const int w = c.width;
  const auto offsets = run.rec.offsets();
  auto coeff = [&](int k, int t) { return scalar_traits<S>::to_complex(run.rec.coefficient(k, c.degrees[static_cast<std::size_t>(t)])); };
  // numeric solve for each unit seed, then combine with the termination null vector
  std::vector<std::vector<Complex>> basis_solutions;
  int kmax = 0;
  for (int k : offsets) kmax = std::max(kmax, k);
  std::vector<Complex> values(static_cast<std::size_t>(m));
  if (w == 0) {
    // triangular: pick the row whose diagonal matches and solve upwards from it
    int start = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int t = 0; t < m; ++t) {
      const double d = std::abs(coeff(0, t) - energy);
      if (d < best_d) {
        best_d = d;
        start = t;
      }
    }
    values[static_cast<std::size_t>(start)] = 1.0;
    for (int t = start + 1; t < m; ++t) {
      Complex acc = 0.0;
      for (int k : offsets)
        if (k < 0 && t + k / c.step >= start) acc += coeff(k, t) * values[static_cast<std::size_t>(t + k / c.step)];
      const Complex diag = energy - coeff(0, t);
      values[static_cast<std::size_t>(t)] = std::abs(diag) > 0 ? acc / diag : 0.0;
    }
  } else {
    for (int seed = 0; seed < w; ++seed) {
      std::vector<Complex> v(static_cast<std::size_t>(m));
      v[static_cast<std::size_t>(seed)] = 1.0;
      for (int t = 0; t + w < m; ++t) {
        Complex acc = -energy * v[static_cast<std::size_t>(t)];
        for (int k : offsets) {
          if (k == kmax) continue;
          const int pos = t + k / c.step;
          if (pos < 0 || pos >= m) continue;
          acc += coeff(k, t) * v[static_cast<std::size_t>(pos)];
        }
        v[static_cast<std::size_t>(t + w)] = -acc / coeff(kmax, t);
      }
      basis_solutions.push_back(std::move(v));
    }
    MatrixXc term(w, w);
    for (int r = 0; r < w; ++r) {
      const int t = m - w + r;
      for (int seed = 0; seed < w; ++seed) {
        const auto& v = basis_solutions[static_cast<std::size_t>(seed)];
        Complex acc = -energy * v[static_cast<std::size_t>(t)];
        for (int k : offsets) {
          const int pos = t + k / c.step;
          if (pos < 0 || pos >= m) continue;
          acc += coeff(k, t) * v[static_cast<std::size_t>(pos)];
        }
        term(r, seed) = acc;
      }
    }
    Eigen::JacobiSVD<MatrixXc> svd(term, Eigen::ComputeFullV);
    const VectorXc seeds = svd.matrixV().col(w - 1);
    for (int seed = 0; seed < w; ++seed)
      for (int t = 0; t < m; ++t)
        values[static_cast<std::size_t>(t)] += seeds(seed) * basis_solutions[static_cast<std::size_t>(seed)][static_cast<std::size_t>(t)];
  }
  std::vector<Complex> out(run.basis.size());
  for (int t = 0; t < m; ++t)
    out[static_cast<std::size_t>((c.degrees[static_cast<std::size_t>(t)] - run.basis.residue) / run.basis.stride)] = values[static_cast<std::size_t>(t)];
  return out;
}

struct Wavefunction {
  FockVector state;
  std::optional<double> residual;  ///< ||H psi - E psi|| / ||psi|| when H is supplied
};

/// Maps P(x) = sum P_n x^n to sum P_n sqrt(n!) |n, v> and applies the inverse
/// similarity transform. Fractional v (S with alpha = r/s) enters through
/// Gamma functions; the target occupation n2 must be a non-negative integer.
inline FockVector inverse_dictionary(const std::vector<int>& degrees, const std::vector<Complex>& coeffs, const TransformSpec& t,
                                     const Rational& sector_value) {
  std::vector<std::tuple<int, int, Complex>> comps;
  int cutoff = 0;
  const double v = sector_value.convert_to<double>();
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (coeffs[i] == Complex{}) continue;
    const int n1 = degrees[i];
    const Rational n2r = t.kind == TransformKind::S ? Rational(sector_value - t.alpha * n1) : Rational(sector_value + t.alpha * n1);
    if (denominator(n2r) != 1 || n2r < 0)
      throw Error(ErrorKind::InverseUndefined,
                  "monomial x^" + std::to_string(n1) + " has no preimage (mode-2 occupation " + detail::format_rational(n2r) + ")");
    if (v + 1.0 <= 0.0) throw Error(ErrorKind::InverseUndefined, "sector value " + detail::format_rational(sector_value) + " has no Fock realization");
    const int n2 = numerator(n2r).convert_to<int>();
    const double log_ratio = t.kind == TransformKind::S ? std::lgamma(n2 + 1.0) - std::lgamma(v + 1.0) : std::lgamma(v + 1.0) - std::lgamma(n2 + 1.0);
    const double weight = std::exp(0.5 * (std::lgamma(n1 + 1.0) + log_ratio));
    comps.emplace_back(n1, n2, coeffs[i] * weight);
    cutoff = std::max(cutoff, n1 + n2);
  }
  FockVector out(cutoff);
  for (const auto& [n1, n2, c] : comps) out.add(n1, n2, c);
  return out;
}

template <CoefficientField S, CoefficientField H>
Wavefunction wavefunction_fock(const EnergyPolynomialRun<S>& run, Complex energy, const TransformSpec& t, const Rational& sector_value,
                               const BosonOperator<H>* hamiltonian = nullptr) {
  const auto coeffs = eigen_coefficients(run, energy);
  Wavefunction out{inverse_dictionary(run.basis.degrees(), coeffs, t, sector_value), std::nullopt};
  if (hamiltonian) {
    int raise = 0;
    for (const auto& [e, c] : hamiltonian->terms()) raise = std::max(raise, e.p + e.r);
    const FockVector psi = out.state.with_cutoff(out.state.cutoff() + raise);
    const FockVector hpsi = apply(*hamiltonian, psi);
    const double norm = psi.norm();
    out.residual = norm == 0.0 ? std::numeric_limits<double>::infinity() : (hpsi - energy * psi).norm() / norm;
  }
  return out;
}

template <CoefficientField S>
Wavefunction wavefunction_fock(const EnergyPolynomialRun<S>& run, Complex energy, const TransformSpec& t, const Rational& sector_value) {
  return wavefunction_fock<S, S>(run, energy, t, sector_value, nullptr);
}

}  // namespace qesboson
