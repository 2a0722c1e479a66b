#pragma once

// Spectrum records shared by every solver, and the multiset comparison used
// to cross-check them.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qesboson/linalg.hpp"

namespace qesboson {

enum class Provenance { QesBlock, EnergyPolynomial, FockOracle, FiniteDifference };

constexpr std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::QesBlock: return "qes-block";
    case Provenance::EnergyPolynomial: return "energy-polynomial";
    case Provenance::FockOracle: return "fock-oracle";
    case Provenance::FiniteDifference: return "finite-difference";
  }
  return "";
}

struct SpectrumResult {
  Provenance provenance = Provenance::QesBlock;
  std::vector<Complex> eigenvalues;  ///< sorted by (Re, Im)
  nlohmann::json params = nlohmann::json::object();
  std::vector<double> residuals;
  std::optional<double> certificate;
  bool converged = true;
  /// Free-form solver bookkeeping (cutoff ladder, grid sizes, drifts).
  nlohmann::json convergence = nlohmann::json::object();
};

enum class CompareMode {
  Full,       ///< both multisets must be matched completely
  SubsetOfB,  ///< every value of `a` must be matched; extra values of `b` are allowed
};

struct ComparePair {
  Complex a;
  Complex b;
  double delta = 0.0;
};

struct CompareReport {
  std::vector<ComparePair> pairs;
  std::vector<Complex> unmatched_a;
  std::vector<Complex> unmatched_b;
  double max_delta = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Greedy nearest-pair multiset matching: candidate pairs within `tol` are
/// accepted in order of increasing distance, so each value is used once.
inline CompareReport compare(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol,
                             CompareMode mode = CompareMode::Full) {
  struct Candidate {
    double d;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(a[i] - b[j]);
      if (d <= tol) cands.push_back({d, i, j});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.d < y.d; });
  std::vector<bool> used_a(a.size()), used_b(b.size());
  CompareReport out;
  out.tolerance = tol;
  for (const auto& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    out.pairs.push_back({a[c.i], b[c.j], c.d});
    out.max_delta = std::max(out.max_delta, c.d);
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const ComparePair& x, const ComparePair& y) {
    if (x.a.real() != y.a.real()) return x.a.real() < y.a.real();
    return x.a.imag() < y.a.imag();
  });
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!used_a[i]) out.unmatched_a.push_back(a[i]);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!used_b[j]) out.unmatched_b.push_back(b[j]);
  out.pass = out.unmatched_a.empty() && (mode == CompareMode::SubsetOfB || out.unmatched_b.empty());
  return out;
}

inline CompareReport compare(const SpectrumResult& a, const SpectrumResult& b, double tol, CompareMode mode = CompareMode::Full) {
  return compare(a.eigenvalues, b.eigenvalues, tol, mode);
}

inline nlohmann::json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline nlohmann::json to_json(const SpectrumResult& s) {
  nlohmann::json j;
  j["provenance"] = std::string(to_string(s.provenance));
  j["params"] = s.params;
  j["eigenvalues"] = nlohmann::json::array();
  for (const auto& z : s.eigenvalues) j["eigenvalues"].push_back(complex_json(z));
  j["residuals"] = s.residuals;
  j["certificate"] = s.certificate ? nlohmann::json(*s.certificate) : nlohmann::json(nullptr);
  j["converged"] = s.converged;
  j["convergence"] = s.convergence;
  return j;
}

inline nlohmann::json to_json(const CompareReport& r) {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : r.pairs) j["pairs"].push_back({{"a", complex_json(p.a)}, {"b", complex_json(p.b)}, {"delta", p.delta}});
  j["unmatchedA"] = nlohmann::json::array();
  for (const auto& z : r.unmatched_a) j["unmatchedA"].push_back(complex_json(z));
  j["unmatchedB"] = nlohmann::json::array();
  for (const auto& z : r.unmatched_b) j["unmatchedB"].push_back(complex_json(z));
  j["maxDelta"] = r.max_delta;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.pass ? "pass" : "fail";
  return j;
}

}  // namespace qesboson
