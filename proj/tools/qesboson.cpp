#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "qesboson.hpp"

namespace {

using namespace qesboson;
using nlohmann::json;

enum Exit { Ok = 0, Mismatch = 1, Usage = 2, Unsupported = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("QESBOSON_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240607ULL;
}

void emit(const json& doc, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << doc.dump(2) << '\n';
  else
    io::write_json(out, doc);
}

// ---------------------------------------------------------------------------

struct AlgebraArgs {
  std::string corrupt;
  int sector_max = 8;
  std::string out;
};

int run_algebra(const AlgebraArgs& a) {
  if (!a.corrupt.empty() && a.corrupt != "j-plus") throw UsageError("--corrupt accepts only j-plus");
  if (a.sector_max < 0 || a.sector_max > 11) throw UsageError("--sector-max must be in 0..11");
  AlgebraSuiteOptions opt;
  opt.sector_max = a.sector_max;
  opt.corrupt_plus = a.corrupt == "j-plus";
  const auto report = verify_algebra(opt);
  json entries = json::array();
  std::size_t failed = 0;
  for (const auto& e : report.entries) {
    entries.push_back({{"group", e.group}, {"name", e.name}, {"pass", e.pass}, {"residual", e.residual}, {"detail", e.detail}});
    failed += e.pass ? 0 : 1;
  }
  json notes = json::array();
  for (const auto& e : report.notes)
    notes.push_back({{"group", e.group}, {"name", e.name}, {"holds", e.pass}, {"residual", e.residual}, {"detail", e.detail}});
  const auto manifest = io::make_manifest("algebra-verify", {{"corrupt", a.corrupt}, {"sectorMax", a.sector_max}}, {});
  emit({{"manifest", io::to_json(manifest)},
        {"identities", entries},
        {"identityCount", report.identity_count()},
        {"failed", failed},
        {"notes", notes},
        {"verdict", report.pass() ? "pass" : "fail"}},
       a.out);
  return report.pass() ? Ok : Mismatch;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string model;
  std::string params;
  std::optional<int> sector;
  std::string method = "both";
  std::string out_dir = ".";
};

class SolveWriter {
 public:
  SolveWriter(const SolveArgs& a, json params) : dir_(a.out_dir), model_(a.model) {
    manifest_ = io::make_manifest("solve", {{"model", a.model}, {"method", a.method}, {"sector", a.sector ? json(*a.sector) : json(nullptr)},
                                            {"params", std::move(params)}},
                                  {a.params});
    std::filesystem::create_directories(dir_);
  }

  void spectrum(const std::string& tag, const SpectrumResult& s) {
    json doc = to_json(s);
    doc["manifest"] = io::to_json(manifest_);
    const std::string base = (dir_ / (model_ + "-" + tag)).string();
    io::write_json(base + ".json", doc);
    io::write_text(base + ".csv", io::eigenvalue_csv(s, manifest_));
    summary_["files"].push_back(base + ".json");
    summary_["files"].push_back(base + ".csv");
    summary_["spectra"][tag] = doc["eigenvalues"];
  }

  void report(const std::string& tag, json doc) {
    doc["manifest"] = io::to_json(manifest_);
    const std::string path = (dir_ / (model_ + "-" + tag + ".json")).string();
    io::write_json(path, doc);
    summary_["files"].push_back(path);
  }

  json& summary() { return summary_; }

 private:
  std::filesystem::path dir_;
  std::string model_;
  io::RunManifest manifest_;
  json summary_ = {{"files", json::array()}, {"spectra", json::object()}};
};

int finish(SolveWriter& w, std::optional<bool> verdict) {
  w.summary()["verdict"] = verdict ? json(*verdict ? "pass" : "fail") : json(nullptr);
  std::cout << w.summary().dump(2) << '\n';
  return verdict && !*verdict ? Mismatch : Ok;
}

int solve_kk(const SolveArgs& a, const json& raw) {
  const KKParams p = io::parse_kk(raw);
  if (!a.sector) throw UsageError("kk needs --sector");
  SolveWriter w(a, io::to_json(p));
  std::optional<bool> verdict;
  std::optional<QesRun> q;
  if (a.method != "oracle") {
    q = kk_qes(p, *a.sector);
    w.spectrum("qes-block", q->block_spectrum);
    w.spectrum("energy-polynomial", q->energy_spectrum);
    const auto self = compare(q->block_spectrum, q->energy_spectrum, 1e-9);
    w.report("compare-block-energy", to_json(self));
    verdict = self.pass;
  }
  if (a.method != "qes") {
    const auto oracle = sector_spectrum(kk_build<Complex>(p), kk_charge(p), *a.sector);
    w.spectrum("oracle", oracle);
    if (q) {
      const auto c1 = compare(q->block_spectrum, oracle, 1e-9);
      const auto c2 = compare(q->energy_spectrum, oracle, 1e-9);
      w.report("compare-block-oracle", to_json(c1));
      w.report("compare-energy-oracle", to_json(c2));
      verdict = *verdict && c1.pass && c2.pass;
    }
  }
  return finish(w, verdict);
}

int solve_thermal(const SolveArgs& a, const json& raw) {
  if (a.method != "oracle")
    throw UnsupportedError("thermal supports only --method oracle (operator-identity mode); its sectors have no Fock spectrum to compare");
  const auto in = io::parse_thermal(raw);
  SolveWriter w(a, {{"omega", in.params.omega}, {"gamma", in.params.gamma}, {"twoJ", in.two_j}});
  const auto m = thermal_build(in.params, Rational(in.two_j));
  json diffs = json::array();
  for (const auto& d : m.diffs) diffs.push_back(to_json(d));
  w.report("identity", {{"generatorIdentity", m.identity_holds},
                        {"sectorValue", qesboson::detail::format_rational(m.sector_value)},
                        {"firstForm", to_string(m.first)},
                        {"secondForm", to_string(m.second)},
                        {"referenceDiffs", diffs}});
  return finish(w, m.identity_holds);
}

template <class Model>
int solve_potential_model(const SolveArgs& a, const Model& m, json params) {
  SolveWriter w(a, std::move(params));
  std::optional<bool> verdict;
  std::optional<SpectrumResult> qes;
  if (!m.identity_holds) verdict = false;
  if (a.method != "oracle") {
    qes = spectrum(block(m.differential, m.basis));
    qes->params = m.potential.params;
    qes->params["model"] = m.potential.model;
    for (auto& e : qes->eigenvalues) e += m.potential.energy_offset;
    w.spectrum("qes-block", *qes);
  }
  if (a.method != "qes") {
    if (!m.potential.real_valued()) throw UnsupportedError("finite differences need real parameters");
    const int count = static_cast<int>(m.basis.size()) * 2 + 6;
    const auto fd = fd_spectrum(m.potential, FdConfig{}, count);
    w.spectrum("finite-difference", fd);
    if (qes) {
      // the QES levels need not be the lowest ones, so they only have to appear somewhere in the fd list
      const auto c = compare(*qes, fd, 1e-4, CompareMode::SubsetOfB);
      auto doc = to_json(c);
      doc["mode"] = "qes-subset-of-fd";
      w.report("compare", doc);
      verdict = (!verdict || *verdict) && c.pass;
    }
  }
  return finish(w, verdict);
}

int run_solve(const SolveArgs& a) {
  if (a.method != "qes" && a.method != "oracle" && a.method != "both") throw UsageError("--method must be qes, oracle or both");
  const json raw = io::read_json_file(a.params);
  if (a.model == "kk") return solve_kk(a, raw);
  if (a.model == "thermal") return solve_thermal(a, raw);
  if (a.sector) throw UsageError("--sector applies only to kk; anharmonic and sextic take k from the params file");
  if (a.model == "anharmonic") {
    const auto m = anharmonic_build(io::parse_anharmonic(raw));
    return solve_potential_model(a, m, m.potential.params);
  }
  if (a.model == "sextic") {
    const auto m = sextic_build(io::parse_sextic(raw));
    return solve_potential_model(a, m, m.potential.params);
  }
  throw UsageError("unknown model '" + a.model + "'");
}

// ---------------------------------------------------------------------------

struct PotentialArgs {
  std::string model;
  std::string params;
  int samples = 201;
  std::vector<double> range;
  std::string out;
};

int run_potential(const PotentialArgs& a) {
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  const json raw = io::read_json_file(a.params);
  PotentialModel pm;
  if (a.model == "anharmonic")
    pm = anharmonic_build(io::parse_anharmonic(raw)).potential;
  else if (a.model == "sextic")
    pm = sextic_build(io::parse_sextic(raw)).potential;
  else
    throw UsageError("potential supports anharmonic and sextic");
  if (!pm.real_valued()) throw UnsupportedError("complex potentials cannot be dumped as a real table");
  double lo = pm.domain == Domain::HalfLine ? 0.05 : -4.0;
  double hi = 4.0;
  if (!a.range.empty()) {
    if (a.range.size() != 2) throw UsageError("--range takes two numbers");
    lo = a.range[0];
    hi = a.range[1];
  }
  if (!(hi > lo)) throw UsageError("empty range");
  if (pm.domain == Domain::HalfLine && lo <= 0.0) throw UsageError("radial models live on z > 0; range must not reach z = 0");
  const auto manifest = io::make_manifest("potential", {{"model", a.model}, {"samples", a.samples}, {"range", {lo, hi}}, {"params", pm.params}},
                                          {a.params});
  std::string text = io::manifest_comment(manifest) + "z,V,W\n";
  for (int i = 0; i < a.samples; ++i) {
    const double z = lo + (hi - lo) * i / (a.samples - 1);
    text += qesboson::detail::format_double(z) + "," + qesboson::detail::format_double(pm.potential(z).real()) + "," +
            qesboson::detail::format_double(pm.weight(z).real()) + "\n";
  }
  if (a.out.empty() || a.out == "-")
    std::cout << text;
  else
    io::write_text(a.out, text);
  return Ok;
}

// ---------------------------------------------------------------------------

struct HermiteArgs {
  std::optional<int> n;
  int degree = 4;
  int points = 10;
  std::string out;
};

int run_hermite(const HermiteArgs& a) {
  if (a.degree < 0) throw UsageError("--degree must be non-negative");
  if (a.n && *a.n < 0) throw UsageError("--n must be non-negative");
  if (a.points < 1) throw UsageError("--points must be positive");
  std::mt19937_64 rng(seed_from_env());
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < a.points; ++i) pts.emplace_back(dist(rng), dist(rng));
  const auto sols = hermite2d(a.degree, a.n);
  json list = json::array();
  for (const auto& s : sols) {
    json coeffs = json::array();
    for (const auto& [e, c] : s.poly.terms)
      coeffs.push_back({{"i", e.first}, {"j", e.second}, {"value", qesboson::detail::format_rational(c)}});
    double worst = 0.0;
    json residuals = json::array();
    for (const auto& [x1, x2] : pts) {
      const double r = hermite_residual(s, x1, x2);
      worst = std::max(worst, std::abs(r));
      residuals.push_back({{"x1", x1}, {"x2", x2}, {"residual", r}});
    }
    list.push_back({{"n", s.n}, {"polynomial", to_string(s.poly)}, {"coefficients", coeffs}, {"residuals", residuals}, {"maxResidual", worst}});
  }
  json doc{{"manifest", io::to_json(io::make_manifest("hermite2d", {{"n", a.n ? json(*a.n) : json(nullptr)}, {"degree", a.degree}, {"points", a.points}}, {}))},
           {"solutions", list}};
  if (a.n && *a.n > a.degree) doc["warning"] = "degree " + std::to_string(a.degree) + " is below n = " + std::to_string(*a.n) + "; no solutions fit";
  emit(doc, a.out);
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode boson Hamiltonians through one-variable differential realizations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qesboson::kVersion));

  AlgebraArgs alg;
  auto* c_alg = app.add_subcommand("algebra-verify", "check commutators, Casimirs and all four realizations");
  c_alg->add_option("--corrupt", alg.corrupt, "negative control: corrupt a generator (j-plus)");
  c_alg->add_option("--sector-max", alg.sector_max, "largest sector value checked");
  c_alg->add_option("-o,--out", alg.out, "report path (default stdout)");

  SolveArgs sol;
  auto* c_sol = app.add_subcommand("solve", "spectra by QES block / energy polynomials and by an independent oracle");
  c_sol->add_option("model", sol.model, "kk | thermal | anharmonic | sextic")->required();
  c_sol->add_option("params", sol.params, "JSON parameter file")->required();
  c_sol->add_option("--sector", sol.sector, "conserved-charge sector M (kk)");
  c_sol->add_option("--method", sol.method, "qes | oracle | both");
  c_sol->add_option("--out-dir", sol.out_dir, "directory for spectrum files");

  PotentialArgs pot;
  auto* c_pot = app.add_subcommand("potential", "dump V and W on a grid as CSV");
  c_pot->add_option("model", pot.model, "anharmonic | sextic")->required();
  c_pot->add_option("params", pot.params, "JSON parameter file")->required();
  c_pot->add_option("--samples", pot.samples, "number of grid points");
  c_pot->add_option("--range", pot.range, "lo hi")->expected(2)->delimiter(',');
  c_pot->add_option("-o,--out", pot.out, "CSV path (default stdout)");

  HermiteArgs her;
  auto* c_her = app.add_subcommand("hermite2d", "polynomial solutions of the two-variable Hermite equation");
  c_her->add_option("--n", her.n, "only this eigenvalue n");
  c_her->add_option("--degree", her.degree, "largest total degree searched");
  c_her->add_option("--points", her.points, "random residual sample points (seed QESBOSON_SEED)");
  c_her->add_option("-o,--out", her.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (*c_alg) return run_algebra(alg);
    if (*c_sol) return run_solve(sol);
    if (*c_pot) return run_potential(pot);
    if (*c_her) return run_hermite(her);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return Unsupported;
  } catch (const qesboson::Error& e) {
    std::cerr << e.what() << '\n';
    switch (e.kind()) {
      case qesboson::ErrorKind::ParseError:
      case qesboson::ErrorKind::InvalidArgument: return Usage;
      default: return Mismatch;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  }
  return Usage;
}
