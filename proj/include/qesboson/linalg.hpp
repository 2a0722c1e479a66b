#pragma once

// Dense eigenvalue helpers shared by the QES blocks, the Fock oracle and the
// energy-polynomial root finder.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qesboson/fock.hpp"
#include "qesboson/polynomial.hpp"

namespace qesboson {

/// Lexicographic (Re, Im) order used for every reported spectrum.
inline void sort_spectrum(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// Diagonal similarity D^-1 A D with power-of-two entries equalising row and
/// column norms (Parlett-Reinsch). Eigenvalues are unchanged; rounding in the
/// subsequent QR iteration drops for badly scaled monomial-basis blocks.
inline MatrixXc balance(MatrixXc a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

inline std::vector<Complex> eigenvalues_general(const MatrixXc& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<MatrixXc> solver(balance(m), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "complex QR iteration did not converge");
  std::vector<Complex> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  sort_spectrum(out);
  return out;
}

inline std::vector<Complex> eigenvalues_hermitian(const MatrixXc& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.emplace_back(solver.eigenvalues()(i), 0.0);
  sort_spectrum(out);
  return out;
}

inline bool is_hermitian(const MatrixXc& m, double tol = 0.0) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Roots of a polynomial from the eigenvalues of its balanced companion matrix,
/// each refined by a few Newton steps on the original coefficients.
template <CoefficientField S>
std::vector<Complex> polynomial_roots(const Polynomial<S>& poly) {
  const Polynomial<Complex> p = poly.template cast<Complex>();
  const int deg = p.degree();
  if (deg <= 0) return {};
  const auto& c = p.coefficients();
  MatrixXc companion = MatrixXc::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  std::vector<Complex> roots = eigenvalues_general(companion);
  const Polynomial<Complex> dp = p.derivative();
  for (auto& z : roots) {
    for (int it = 0; it < 3; ++it) {
      const Complex fz = p.evaluate(z);
      const Complex dz = dp.evaluate(z);
      if (dz == Complex{}) break;
      const Complex step = fz / dz;
      const Complex candidate = z - step;
      if (std::abs(p.evaluate(candidate)) >= std::abs(fz)) break;
      z = candidate;
    }
  }
  sort_spectrum(roots);
  return roots;
}

}  // namespace qesboson
