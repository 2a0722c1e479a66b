// One PASS/FAIL line per acceptance criterion. Tolerances, draw counts and
// time budgets are fixed below; QESBOSON_SEED only changes the random draws.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "qesboson.hpp"

using namespace qesboson;
using Q = ComplexRational;

namespace {

constexpr double kAlgebraTol = 1e-12;
constexpr double kSpectrumTol = 1e-9;
constexpr double kSexticTol = 1e-4;
constexpr double kGaugeTol = 1e-8;
constexpr double kHermiteTol = 1e-10;
constexpr double kResidualTol = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::mt19937_64& rng() {
  static std::mt19937_64 g([] {
    const char* s = std::getenv("QESBOSON_SEED");
    return s ? std::strtoull(s, nullptr, 10) : 20240607ULL;
  }());
  return g;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

KKParams random_kk(int s, int r) {
  KKParams p;
  p.s = s;
  p.r = r;
  p.omega1 = uniform(0.1, 3.0);
  p.omega2 = uniform(0.1, 3.0);
  p.kappa = std::polar(std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 2.0 * M_PI));
  p.kappa_bar = std::conj(p.kappa);
  return p;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QESBOSON_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

template <class F>
bool throws_kind(ErrorKind kind, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

// --- 1 ---------------------------------------------------------------------

Outcome algebra_identities() {
  using Op = BosonOperator<Q>;
  int count = 0;
  for (const auto& g : {su2_schwinger<Q>(), su11_schwinger<Q>()}) {
    for (const auto& c : commutation_identities(g)) {
      if (!c.holds) return {false, c.name + " residual " + c.residual};
      ++count;
    }
    casimir(g);  // throws on mismatch
    ++count;
  }
  // sector matrices: N <= 8 (complete) and |L| <= 8 with cutoff 12
  double worst = 0.0;
  int sectors = 0;
  for (const bool su2 : {true, false}) {
    const auto g = su2 ? su2_schwinger<Q>() : su11_schwinger<Q>();
    const Op cas = casimir(g);
    for (int v = su2 ? 0 : -8; v <= 8; ++v) {
      const Sector sec = su2 ? Sector::total_number(v, 12) : Sector::number_difference(v, 12);
      auto m = [&](const Op& op) { return matrix_in_sector(op, sec); };
      const MatrixXc P = m(g.plus), M = m(g.minus), Z = m(g.zero), C = m(g.charge), K = m(cas);
      const MatrixXc I = MatrixXc::Identity(P.rows(), P.cols());
      const double two = su2 ? 2.0 : -2.0;
      const MatrixXc expect = su2 ? MatrixXc(C * (C + 2.0 * I) / 4.0) : MatrixXc((C + I) * (C - I) / 4.0);
      for (const MatrixXc& d : {MatrixXc(P * M - M * P - two * Z), MatrixXc(Z * P - P * Z - P), MatrixXc(Z * M - M * Z + M),
                                MatrixXc(C * P - P * C), MatrixXc(C * M - M * C), MatrixXc(C * Z - Z * C), MatrixXc(K - expect)})
        worst = std::max(worst, detail::interior_residual(d, sec));
      ++sectors;
    }
  }
  return {worst < kAlgebraTol, std::to_string(count) + " exact identities; " + std::to_string(sectors) + " sectors, max residual " + fmt(worst)};
}

// --- 2 ---------------------------------------------------------------------

Outcome realization_equivalence() {
  int checks = 0;
  for (const auto label : all_realizations)
    for (int v = 0; v <= 8; ++v) {
      VerifyOptions opt;
      opt.max_dim = 9;
      opt.fock_tolerance = kAlgebraTol;
      const auto rep = verify_realization({label, Rational(v)}, opt);
      for (const auto& c : rep.checks) {
        if (!c.pass) return {false, std::string(to_string(label)) + " v=" + std::to_string(v) + ": " + c.name + " " + c.detail};
        ++checks;
      }
    }
  return {true, std::to_string(checks) + " checks over 4 realizations, sector values 0..8"};
}

// --- 3, 4, 5, 10 -----------------------------------------------------------

struct KKStats {
  int draws = 0;
  int sectors = 0;
  int eigenpairs = 0;
  double worst_delta = 0.0;
  double worst_residual = 0.0;
  std::string failure;
};

KKStats& residual_stats() {
  static KKStats s;
  return s;
}

Outcome kk_three_way(int s, int r, int draws, int max_sector) {
  KKStats st;
  for (int d = 0; d < draws; ++d) {
    const KKParams p = (s == 2 && r == 2 && d == 0) ? KKParams{} : random_kk(s, r);
    const auto hc = kk_build<Complex>(p);
    const auto hq = kk_build<Q>(p);
    for (int M = 0; M <= max_sector; ++M) {
      const auto q = kk_qes(p, M);
      const auto oracle = sector_spectrum(hc, kk_charge(p), M);
      const auto c1 = compare(q.block_spectrum, q.energy_spectrum, kSpectrumTol);
      const auto c2 = compare(q.block_spectrum, oracle, kSpectrumTol);
      const auto c3 = compare(q.energy_spectrum, oracle, kSpectrumTol);
      st.worst_delta = std::max({st.worst_delta, c1.max_delta, c2.max_delta, c3.max_delta});
      if ((!c1.pass || !c2.pass || !c3.pass) && st.failure.empty())
        st.failure = "draw " + std::to_string(d) + " sector " + std::to_string(M) + " disagrees";
      if (s == 2 && r == 2 && d == 0 && M == 2 && !compare(oracle.eigenvalues, {1.0, 2.0, 3.0}, kSpectrumTol).pass)
        st.failure = "fixture N=2 is not {1,2,3}";
      for (const auto& e : q.energy_spectrum.eigenvalues) {
        const auto wf = wavefunction_fock(q.run, e, kk_transform(p), q.sector.sector_value, &hq);
        auto& rs = residual_stats();
        rs.worst_residual = std::max(rs.worst_residual, *wf.residual);
        ++rs.eigenpairs;
      }
      ++st.sectors;
    }
    ++st.draws;
  }
  const std::string summary = std::to_string(st.draws) + " draws, " + std::to_string(st.sectors) + " sectors, max |delta| " + fmt(st.worst_delta);
  return {st.failure.empty(), st.failure.empty() ? summary : st.failure + "; " + summary};
}

Outcome eigenvector_residuals() {
  const auto& rs = residual_stats();
  if (rs.eigenpairs == 0) return {false, "no eigenpairs were reconstructed"};
  return {rs.worst_residual < kResidualTol,
          std::to_string(rs.eigenpairs) + " KK eigenpairs from criteria 3-5, max ||H psi - E psi||/||psi|| " + fmt(rs.worst_residual)};
}

// --- 6 ---------------------------------------------------------------------

Outcome recurrence_fidelity() {
  std::vector<std::pair<std::string, DiffOperator<Q>>> ops;
  for (const auto& [s, r] : std::vector<std::pair<int, int>>{{2, 2}, {2, 1}, {3, 1}, {3, 2}, {4, 2}}) {
    const KKParams p = random_kk(s, r);
    for (int M : {0, 3, 6}) ops.emplace_back("kk s=" + std::to_string(s) + " r=" + std::to_string(r), kk_transformed(p, kk_sector(p, M).sector_value));
  }
  const auto th = thermal_build({uniform(0.1, 3), uniform(0.1, 3)}, Rational(3));
  ops.emplace_back("thermal first", th.first);
  ops.emplace_back("thermal second", th.second);
  const auto an = anharmonic_build({uniform(0.1, 3), uniform(0.1, 3), {uniform(-1, 1), uniform(-1, 1)}, {uniform(-1, 1), 0.0}, 2});
  ops.emplace_back("anharmonic", an.differential);
  const auto sx = sextic_build({uniform(0.1, 3), uniform(-1, 1), 4.0, -5.0, 2});
  ops.emplace_back("sextic", sx.differential);
  for (const auto label : all_realizations) {
    const auto g = gd_realization<Q>({label, Rational(5)});
    for (const auto& [name, op] : g.named()) ops.emplace_back(std::string(to_string(label)) + " " + name, *op);
  }
  for (const auto& [name, op] : ops)
    if (auto bad = recurrence_mismatch(op, recurrence(op), 20)) return {false, name + ": " + *bad};

  // reference transcriptions: informational
  nlohmann::json report = nlohmann::json::array();
  int mismatched_rows = 0;
  auto add = [&](const ReferenceDiff& d) {
    report.push_back(to_json(d));
    mismatched_rows += static_cast<int>(d.mismatches());
  };
  for (const auto& d : kk_reference_diffs(KKParams{2, 2, 1.3, 0.7, {0.3, 0.2}, {0.3, -0.2}}, Rational(4))) add(d);
  for (const auto& d : kk_reference_diffs(KKParams{2, 1, 1.3, 0.7, {0.3, 0.2}, {0.3, -0.2}}, Rational(2))) add(d);
  std::ofstream("acceptance_reference_diff.json") << report.dump(2) << '\n';
  return {true, std::to_string(ops.size()) + " operators exact for n <= 20; reference diff written (" + std::to_string(report.size()) +
                    " tables, " + std::to_string(mismatched_rows) + " differing rows)"};
}

// --- 7 ---------------------------------------------------------------------

Outcome sextic_cross_check() {
  std::string detail;
  bool ok = true;
  const std::vector<std::pair<int, double>> points{{0, 1.0}, {1, 4.0}, {2, 16.0}};
  for (const auto& [k, ap] : points) {
    const SexticParams p{1.0, 0.3, ap, -3.0 - k, k};
    const auto m = sextic_build(p);
    const auto qes = spectrum(block(m.differential, m.basis));
    const auto fd = fd_spectrum(m.potential, {}, static_cast<int>(m.basis.size()) + 4);
    std::vector<Complex> shifted;
    for (const auto& e : qes.eigenvalues) shifted.push_back(e + m.potential.energy_offset);
    const auto c = compare(shifted, fd.eigenvalues, kSexticTol, CompareMode::SubsetOfB);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : shifted)
      for (const auto& f : fd.eigenvalues) best = std::min(best, std::abs(e - f));
    ok = ok && !c.pairs.empty();
    if (!detail.empty()) detail += "; ";
    detail += "k=" + std::to_string(k) + " a+=" + fmt(ap) + ": " + std::to_string(c.pairs.size()) + "/" + std::to_string(shifted.size()) +
              " matched (closest " + fmt(best) + ")";
  }
  return {ok, detail};
}

// --- 8 ---------------------------------------------------------------------

Outcome anharmonic_gauge() {
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const AnharmonicParams p{uniform(0.1, 3), uniform(0.1, 3), {uniform(-1, 1), uniform(-1, 1)}, {uniform(-1, 1), uniform(-1, 1)},
                             draw % 4};
    const auto m = anharmonic_build(p);
    std::vector<Complex> c;
    for (int i = 0; i <= 4; ++i) c.emplace_back(uniform(-1, 1), uniform(-1, 1));
    const Polynomial<Complex> f(c);
    for (int i = 0; i < 100; ++i) worst = std::max(worst, gauge_residual(m.differential, m.potential, f, uniform(-2, 2)));
  }
  using Op = BosonOperator<Q>;
  using D = DiffOperator<Q>;
  bool exact = true;
  const Q half(Rational(1, 2));
  for (int k = 0; k <= 3; ++k) {
    const auto m = anharmonic_build({0.5, 0.5, 0.0, 0.0, k});
    const Op h50 = (Op::n1() + Op::n2() - Op::monomial(Q(1), {0, 2, 0, 2})) * half;
    exact = exact && m.hamiltonian == h50 && m.identity_holds;
    for (int n = 0; n <= 6; ++n) {
      const Q energy(Rational(n - 2 * k - 1, 2));
      const D shifted = m.differential - D::constant(energy);
      exact = exact && shifted == D::term(-half, 0, 2) + D::euler() - D::constant(Q(Rational(n, 2)));
    }
  }
  return {worst < kGaugeTol && exact, "50 draws x 100 points, max residual " + fmt(worst) + "; specialization " + (exact ? "exact" : "differs")};
}

// --- 9 ---------------------------------------------------------------------

Outcome hermite() {
  const auto sols = hermite2d(6);
  double worst = 0.0;
  for (const auto& s : sols)
    for (int i = 0; i < 100; ++i) worst = std::max(worst, std::abs(hermite_residual(s, uniform(-2, 2), uniform(-2, 2))));
  return {!sols.empty() && worst < kHermiteTol, std::to_string(sols.size()) + " solutions up to degree 6, max residual " + fmt(worst)};
}

// --- 11 --------------------------------------------------------------------

Outcome negative_controls() {
  std::vector<std::pair<std::string, bool>> cases;
  AlgebraSuiteOptions bad;
  bad.sector_max = 3;
  bad.corrupt_plus = true;
  cases.emplace_back("corrupted J+ fails the suite", !verify_algebra(bad).pass());
  cases.emplace_back("cli --corrupt j-plus exits 1", cli("algebra-verify --corrupt j-plus --sector-max 3") == 1);
  const auto h21 = kk_build<Complex>({2, 1});
  cases.emplace_back("wrong charge -> ChargeViolation", throws_kind(ErrorKind::ChargeViolation, [&] { sector_spectrum(h21, {1, 1}, 2); }));
  const auto leak = kk_build<Complex>({}) + BosonOperator<Complex>::a1();
  cases.emplace_back("non-conserving -> ChargeViolation",
                     throws_kind(ErrorKind::ChargeViolation, [&] { matrix_in_sector(leak, Sector::total_number(2, 2)); }));
  cases.emplace_back("leaking block -> NotInvariant",
                     throws_kind(ErrorKind::NotInvariant, [] { block(kk_transformed(KKParams{}, Rational(2)), 3); }));
  cases.emplace_back("fractional shift -> NonIntegerShift", throws_kind(ErrorKind::NonIntegerShift, [] {
                       transform_state({TransformKind::S, Rational(1, 2)}, FockVector::basis(1, 1, 2));
                     }));
  cases.emplace_back("no preimage -> InverseUndefined", throws_kind(ErrorKind::InverseUndefined, [] {
                       inverse_dictionary({3}, {1.0}, {TransformKind::S, Rational(1)}, Rational(2));
                     }));
  const std::string params = "acceptance_thermal.json";
  std::ofstream(params) << R"({"omega": 1.0, "gamma": 0.5, "twoJ": 2})" << '\n';
  cases.emplace_back("cli thermal qes exits 3", cli("solve thermal " + params + " --method qes --out-dir acceptance_out") == 3);
  const std::string sextic = "acceptance_sextic.json";
  std::ofstream(sextic) << R"({"omega1": 1.0, "alphaPlus": 4.0, "alphaMinus": -4.0, "k": 1})" << '\n';
  cases.emplace_back("cli sextic dump is fine on (0.1, 2)", cli("potential sextic " + sextic + " --range 0.1,2") == 0);
  cases.emplace_back("cli radial range through 0 exits 2", cli("potential sextic " + sextic + " --range -1,1") == 2);
  cases.emplace_back("cli bad flag exits 2", cli("solve kk --nope") == 2);
  std::string failed;
  for (const auto& [name, ok] : cases)
    if (!ok) failed += (failed.empty() ? "" : ", ") + name;
  return {failed.empty(), failed.empty() ? std::to_string(cases.size()) + " controls raised the expected errors" : "silent: " + failed};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "algebra identity suite", 10, algebra_identities},
      {2, "realization equivalence", 10, realization_equivalence},
      {3, "KK s=r=2 three-way spectra", 60, [] { return kk_three_way(2, 2, 25, 10); }},
      {4, "KK s=2 r=1 three-way spectra", 30, [] { return kk_three_way(2, 1, 10, 10); }},
      {5, "KK s=3 r=1 three-way spectra", 30, [] { return kk_three_way(3, 1, 5, 9); }},
      {6, "recurrence fidelity", 5, recurrence_fidelity},
      {7, "sextic QES vs finite differences", 60, sextic_cross_check},
      {8, "anharmonic gauge identity", 10, anharmonic_gauge},
      {9, "Hermite-2D residuals", 5, hermite},
      {10, "eigenvector residuals", 30, eigenvector_residuals},
      {11, "negative controls", 5, negative_controls},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_s) + " s budget";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s [%2d] %-36s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
