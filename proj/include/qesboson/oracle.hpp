#pragma once

// Independent ground truth: exact diagonalization of charge sectors of the
// truncated two-mode Fock space, and a finite-difference Schroedinger solver
// for reconstructed potentials.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "qesboson/fock.hpp"
#include "qesboson/linalg.hpp"
#include "qesboson/models.hpp"
#include "qesboson/spectrum.hpp"

namespace qesboson {

struct OracleConfig {
  std::vector<int> cutoff_ladder{8, 12, 16};  ///< per-mode cutoffs for sectors that are not finite
  double tolerance = 1e-8;                    ///< allowed drift between the last two ladder rungs
};

inline void validate(const OracleConfig& cfg) {
  if (cfg.cutoff_ladder.empty()) throw Error(ErrorKind::InvalidArgument, "empty cutoff ladder");
  for (std::size_t i = 1; i < cfg.cutoff_ladder.size(); ++i)
    if (cfg.cutoff_ladder[i] <= cfg.cutoff_ladder[i - 1]) throw Error(ErrorKind::InvalidArgument, "cutoff ladder must increase");
  if (!(cfg.tolerance > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
}

inline std::vector<Complex> sector_eigenvalues(const MatrixXc& m) {
  const double scale = m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
  return is_hermitian(m, 1e-14 * scale) ? eigenvalues_hermitian(m) : eigenvalues_general(m);
}

/// Finite sectors (both charge components positive) are diagonalized whole;
/// otherwise the cutoff ladder is climbed and the lowest eigenvalues of the
/// last two rungs must agree within the tolerance.
template <CoefficientField S>
SpectrumResult sector_spectrum(const BosonOperator<S>& op, std::pair<int, int> charge, int value, const OracleConfig& cfg = {}) {
  validate(cfg);
  if (!conserves(op, charge))
    throw Error(ErrorKind::ChargeViolation, "operator does not conserve charge (" + std::to_string(charge.first) + "," +
                                                std::to_string(charge.second) + ")");
  SpectrumResult out;
  out.provenance = Provenance::FockOracle;
  out.params = {{"charge", {charge.first, charge.second}}, {"sector", value}};
  const auto [c1, c2] = charge;
  if (c1 > 0 && c2 > 0) {
    const int cutoff = value < 0 ? 0 : std::max(value / c1, value / c2);
    const Sector sec(charge, value, cutoff);
    const MatrixXc m = matrix_in_sector(op, sec);
    out.eigenvalues = sector_eigenvalues(m);
    out.convergence = {{"complete", true}, {"dimension", sec.dimension()}, {"hermitian", is_hermitian(m, 1e-14 * std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0))}};
    return out;
  }
  std::vector<std::vector<Complex>> rungs;
  for (int cutoff : cfg.cutoff_ladder) rungs.push_back(sector_eigenvalues(matrix_in_sector(op, Sector(charge, value, cutoff))));
  const auto& first = rungs.front();
  double drift = 0.0;
  if (rungs.size() >= 2) {
    const auto& a = rungs[rungs.size() - 2];
    const auto& b = rungs.back();
    const std::size_t count = std::min({first.size(), a.size(), b.size()});
    for (std::size_t i = 0; i < count; ++i) drift = std::max(drift, std::abs(a[i] - b[i]));
  }
  out.eigenvalues = rungs.back();
  out.converged = drift <= cfg.tolerance;
  out.convergence = {{"complete", false}, {"ladder", cfg.cutoff_ladder}, {"drift", drift}, {"compared", first.size()}};
  if (!out.converged)
    throw Error(ErrorKind::NonConvergent, "eigenvalues drift by " + detail::format_double(drift) + " between the last two cutoffs");
  return out;
}

// ---------------------------------------------------------------------------
// Finite differences

struct FdConfig {
  std::optional<double> lo;  ///< left wall; forced to 0 on the half line
  std::optional<double> hi;
  int intervals = 256;        ///< coarsest grid of the Richardson ladder
  int max_intervals = 1 << 14;
  double agreement = 1e-6;    ///< Richardson estimates of consecutive grid pairs must agree to this
  double decay = 36.0;        ///< WKB exponent left beyond the outermost turning point
};

inline void validate(const FdConfig& cfg) {
  if (cfg.intervals < 64) throw Error(ErrorKind::InvalidArgument, "grids need at least 64 intervals");
  if (cfg.lo && cfg.hi && !(*cfg.hi > *cfg.lo)) throw Error(ErrorKind::InvalidArgument, "empty finite-difference domain");
  if ((cfg.lo && !std::isfinite(*cfg.lo)) || (cfg.hi && !std::isfinite(*cfg.hi)))
    throw Error(ErrorKind::InvalidArgument, "domain bounds must be finite");
}

/// Lowest `count` Dirichlet eigenvalues of -kinetic u'' + V u on [lo, hi]
/// with `intervals` equal steps (second-order central differences).
inline std::vector<double> fd_eigenvalues_raw(const PotentialModel& pm, double lo, double hi, int intervals, int count) {
  if (!pm.real_valued()) throw Error(ErrorKind::InvalidArgument, "finite differences need a real potential");
  const int n = intervals - 1;
  const double h = (hi - lo) / intervals;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag(i) = 2.0 * pm.kinetic / (h * h) + pm.potential(lo + (i + 1) * h).real();
  off.setConstant(-pm.kinetic / (h * h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "tridiagonal eigensolver failed");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + std::min<Eigen::Index>(count, n));
  return out;
}

namespace detail {

inline double real_potential(const PotentialModel& pm, double z) { return pm.potential(z).real(); }

/// Outward walk from `start` (direction +1/-1) until the WKB integral of
/// sqrt((V - e)/kinetic) beyond the last turning point reaches `decay`.
inline double wkb_wall(const PotentialModel& pm, double start, int direction, double e, double decay) {
  double z = start;
  double step = 1e-3;
  double integral = 0.0;
  for (int iter = 0; iter < 2000000; ++iter) {
    const double v = real_potential(pm, z) - e;
    if (v > 0) {
      integral += std::sqrt(v / pm.kinetic) * step;
    } else {
      integral = 0.0;
    }
    if (integral >= decay) return z;
    z += direction * step;
    if (std::abs(z - start) > 1e4) break;
    step = std::min(1e-2, std::max(1e-4, 1e-3 * std::abs(z)));
  }
  throw Error(ErrorKind::InvalidArgument, "potential is not confining");
}

}  // namespace detail

/// Domain chosen by a coarse solve followed by WKB walls at the highest
/// requested level; explicit bounds in `cfg` win.
inline std::pair<double, double> fd_domain(const PotentialModel& pm, const FdConfig& cfg, int count) {
  const bool half = pm.domain == Domain::HalfLine;
  double lo = half ? 0.0 : cfg.lo.value_or(0.0);
  double hi = cfg.hi.value_or(0.0);
  if (cfg.hi && (half || cfg.lo)) return {lo, hi};
  // initial box: walls where V rises 100 above its value at the start point
  const double centre = half ? 1.0 : 0.0;
  const double base = detail::real_potential(pm, centre);
  auto wall = [&](int dir) {
    double z = centre;
    double step = 0.25;
    while (detail::real_potential(pm, z) - base < 100.0) {
      z += dir * step;
      step *= 1.1;
      if (std::abs(z) > 1e4) throw Error(ErrorKind::InvalidArgument, "potential is not confining");
    }
    return z;
  };
  double right = cfg.hi ? *cfg.hi : wall(+1);
  double left = half ? 0.0 : (cfg.lo ? *cfg.lo : wall(-1));
  for (int pass = 0; pass < 2; ++pass) {
    const auto levels = fd_eigenvalues_raw(pm, left, right, 800, count);
    const double e = levels.back();
    // walk outwards from the bottom of the well
    double zmin = half ? right / 2000 : left;
    for (int i = 1; i <= 2000; ++i) {
      const double z = left + (right - left) * i / 2000.0;
      if (detail::real_potential(pm, z) < detail::real_potential(pm, zmin)) zmin = z;
    }
    if (!cfg.hi) right = detail::wkb_wall(pm, zmin, +1, e, cfg.decay);
    if (!half && !cfg.lo) left = detail::wkb_wall(pm, zmin, -1, e, cfg.decay);
  }
  return {left, right};
}

/// Richardson-extrapolated levels: R(N) = (4 E(2N) - E(N)) / 3, with N doubled
/// until R(N) and R(2N) agree to `agreement` (relative to max(1, |E|)).
inline SpectrumResult fd_spectrum(const PotentialModel& pm, const FdConfig& cfg, int count) {
  validate(cfg);
  if (count <= 0) throw Error(ErrorKind::InvalidArgument, "count must be positive");
  const auto [lo, hi] = fd_domain(pm, cfg, count);
  auto richardson = [](const std::vector<double>& coarse, const std::vector<double>& fine) {
    std::vector<double> out(std::min(coarse.size(), fine.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return out;
  };
  int n = cfg.intervals;
  auto e1 = fd_eigenvalues_raw(pm, lo, hi, n, count);
  auto e2 = fd_eigenvalues_raw(pm, lo, hi, 2 * n, count);
  double gap = std::numeric_limits<double>::infinity();
  while (4 * n <= cfg.max_intervals) {
    auto e4 = fd_eigenvalues_raw(pm, lo, hi, 4 * n, count);
    const auto r1 = richardson(e1, e2);
    const auto r2 = richardson(e2, e4);
    gap = 0.0;
    for (std::size_t i = 0; i < r2.size(); ++i) gap = std::max(gap, std::abs(r1[i] - r2[i]) / std::max(1.0, std::abs(r2[i])));
    if (gap <= cfg.agreement) {
      SpectrumResult out;
      out.provenance = Provenance::FiniteDifference;
      for (double e : r2) out.eigenvalues.emplace_back(e, 0.0);
      out.params = pm.params;
      out.params["model"] = pm.model;
      out.convergence = {{"lo", lo}, {"hi", hi}, {"intervals", {2 * n, 4 * n}}, {"richardsonGap", gap}};
      return out;
    }
    e1 = std::move(e2);
    e2 = std::move(e4);
    n *= 2;
  }
  throw Error(ErrorKind::GridDisagreement, "Richardson estimates still differ by " + detail::format_double(gap) + " at " +
                                               std::to_string(2 * n) + " intervals");
}

/// Observed order log2((E(N) - E(2N)) / (E(2N) - E(4N))) of level `level`.
inline double fd_convergence_order(const PotentialModel& pm, double lo, double hi, int intervals, int level = 0) {
  const auto a = fd_eigenvalues_raw(pm, lo, hi, intervals, level + 1);
  const auto b = fd_eigenvalues_raw(pm, lo, hi, 2 * intervals, level + 1);
  const auto c = fd_eigenvalues_raw(pm, lo, hi, 4 * intervals, level + 1);
  const auto i = static_cast<std::size_t>(level);
  return std::log2((a[i] - b[i]) / (b[i] - c[i]));
}

}  // namespace qesboson
