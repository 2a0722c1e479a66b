#include <catch_amalgamated.hpp>

#include <random>

#include "qesboson.hpp"

using namespace qesboson;
using Q = ComplexRational;
using D = DiffOperator<Q>;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<Complex> reals(std::initializer_list<double> xs) {
  std::vector<Complex> out;
  for (double x : xs) out.emplace_back(x, 0.0);
  return out;
}

std::uint64_t test_seed() {
  if (const char* s = std::getenv("QESBOSON_SEED")) return std::strtoull(s, nullptr, 10);
  return 11;
}

}  // namespace

TEST_CASE("Karassiov-Klimov builders", "[models]") {
  const KKParams p;
  CHECK(kk_build<Q>(p) == kk_su2_form<Q>(p));
  KKParams odd{2, 2, 1.7, 0.3, {0.2, -0.4}, {0.2, 0.4}};
  CHECK(kk_build<Q>(odd) == kk_su2_form<Q>(odd));
  CHECK(kk_charge({2, 1}) == std::pair{1, 2});
  CHECK(kk_charge({3, 1}) == std::pair{1, 3});
  CHECK(kk_charge({4, 2}) == std::pair{1, 2});
  CHECK_THROWS_AS(kk_build<Q>({1, 2}), Error);
}

TEST_CASE("second harmonic sector n1 + 2 n2 = 2", "[models]") {
  KKParams p{2, 1, 1.0, 1.0, 1.0, 1.0};
  const auto q = kk_qes(p, 2);
  CHECK(q.sector.basis.degrees() == std::vector<int>{0, 2});
  // [[2 w1, sqrt2 k], [sqrt2 kb, w2]] = [[2, sqrt2], [sqrt2, 1]]
  CHECK(compare(q.block_spectrum.eigenvalues, reals({0, 3}), 1e-12).pass);
  CHECK(compare(q.energy_spectrum.eigenvalues, reals({0, 3}), 1e-12).pass);
  const auto o = sector_spectrum(kk_build<Complex>(p), kk_charge(p), 2);
  CHECK(compare(o.eigenvalues, reals({0, 3}), 1e-12).pass);
  KKParams q2{2, 1, 0.7, 1.9, {0.3, 0.1}, {0.3, -0.1}};
  const double a = 1.4, b = 1.9, c = 2.0 * std::norm(Complex(0.3, 0.1));
  const double disc = std::sqrt((a - b) * (a - b) + 4 * c);
  CHECK(compare(kk_qes(q2, 2).block_spectrum.eigenvalues, reals({(a + b - disc) / 2, (a + b + disc) / 2}), 1e-12).pass);
}

TEST_CASE("free oscillators read off the diagonal", "[models]") {
  KKParams p{2, 2, 1.0, 2.0, 0.0, 0.0};
  const auto q = kk_qes(p, 2);
  CHECK(compare(q.block_spectrum.eigenvalues, reals({2, 3, 4}), 1e-12).pass);
  const D op = kk_transformed(p, Rational(2));
  for (const auto& [k, c] : op.terms()) CHECK(k.b <= 1);
  CHECK(compare(sector_spectrum(kk_build<Complex>(p), {1, 1}, 2).eigenvalues, reals({2, 3, 4}), 1e-12).pass);
}

TEST_CASE("reference transcriptions are diffed, not trusted", "[models]") {
  const auto diffs = kk_reference_diffs(KKParams{}, Rational(2));
  REQUIRE(diffs.size() == 4);
  for (const auto& d : diffs) CHECK_FALSE(d.rows.empty());
  const auto j = to_json(diffs.front());
  CHECK(j.contains("rows"));
}

TEST_CASE("thermal model", "[models]") {
  const auto m = thermal_build({1.3, 0.4}, Rational(2));
  CHECK(m.identity_holds);
  CHECK(m.sector_value == Rational(-3));
  // first-order structure: no second derivative in the T form
  for (const auto& [k, c] : m.first.terms()) CHECK(k.b <= 1);
  const auto free = thermal_build({2.0, 0.0}, Rational(0));
  const auto o = sector_spectrum(free.hamiltonian.cast<Complex>(), {1, -1}, 1);
  for (const auto& e : o.eigenvalues) CHECK_THAT(e.real(), WithinAbs(2.0, 1e-14));
}

TEST_CASE("anharmonic construction", "[models]") {
  const auto m = anharmonic_build({0.5, 0.5, 0.0, 0.0, 1});
  CHECK(m.identity_holds);
  CHECK(m.differential == D::term(Q(Rational(-1, 2)), 0, 2) + D::euler() - D::constant(Q(Rational(3, 2))));
  const auto spec = spectrum(block(m.differential, 2));
  // E = (n - 2k - 1)/2 with n = 2 deg R
  CHECK(compare(spec.eigenvalues, reals({-1.5, -0.5, 0.5}), 1e-12).pass);

  const auto q = anharmonic_build({0.8, 0.3, 0.6, 0.2, 1});
  CHECK_THAT(q.potential.coefficient(4).real(), WithinAbs(0.5 * 0.36, 1e-15));

  const auto h = anharmonic_build({0.9, 0.4, 0.0, 0.3, 0});
  for (const auto& [pw, c] : h.potential.v) CHECK(pw <= 2);
  const auto fd = fd_spectrum(h.potential, {}, 5);
  for (std::size_t i = 1; i + 1 < fd.eigenvalues.size(); ++i)
    CHECK_THAT(fd.eigenvalues[i + 1].real() - fd.eigenvalues[i].real(), WithinAbs(fd.eigenvalues[1].real() - fd.eigenvalues[0].real(), 1e-6));
}

TEST_CASE("gauge identity holds pointwise", "[models]") {
  std::mt19937_64 rng(test_seed());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int draw = 0; draw < 5; ++draw) {
    const auto m = anharmonic_build({u(rng) + 1.5, u(rng) + 1.5, {u(rng), u(rng)}, {u(rng), u(rng)}, draw % 3});
    const Polynomial<Complex> f(std::vector<Complex>{{u(rng), 0}, {u(rng), u(rng)}, {0, u(rng)}, {u(rng), 0}});
    for (int i = 0; i < 10; ++i) CHECK(gauge_residual(m.differential, m.potential, f, 2.0 * u(rng)) < 1e-10);
  }
}

TEST_CASE("sextic construction", "[models]") {
  const auto m = sextic_build({1.0, 0.2, 16.0, -3.0, 0});
  CHECK(m.identity_holds);
  CHECK_THAT(m.potential.coefficient(6).real(), WithinAbs(1.0, 1e-15));
  const double s = 1 + 2 * -3.0;
  CHECK_THAT(m.potential.centrifugal().real(), WithinAbs(s * (s + 2) / 4, 1e-15));
  CHECK(m.potential.domain == Domain::HalfLine);

  const auto k1 = sextic_build({1.0, 0.3, 4.0, -4.0, 1});
  const auto qes = spectrum(block(k1.differential, k1.basis));
  const auto fd = fd_spectrum(k1.potential, {}, 6);
  CHECK(compare(qes.eigenvalues, fd.eigenvalues, 1e-4, CompareMode::SubsetOfB).pass);
}

TEST_CASE("two-variable Hermite polynomials", "[models]") {
  const auto n0 = hermite2d(0);
  REQUIRE(n0.size() == 1);
  CHECK(to_string(n0[0].poly) == "1");
  const auto n1 = hermite2d(1, 1);
  CHECK(n1.size() == 2);
  for (const auto& s : n1) CHECK(s.poly.degree() == 1);
  const auto n2 = hermite2d(2, 2);
  bool mixed = false;
  for (const auto& s : n2) {
    if (s.poly.terms.count({1, 1}) && s.poly.terms.count({0, 0})) {
      mixed = true;
      CHECK(s.poly.terms.at({0, 0}) == Rational(-1, 2));
    }
    for (double x : {-1.3, 0.4, 2.2}) CHECK(std::abs(hermite_residual(s, x, 0.7 - x)) < 1e-12);
  }
  CHECK(mixed);
  CHECK(hermite2d(1, 3).empty());
}

TEST_CASE("Fock oracle", "[oracle]") {
  const auto free = kk_build<Complex>({2, 2, 1.0, 2.0, 0.0, 0.0});
  CHECK(compare(sector_spectrum(free, {1, 1}, 2).eigenvalues, reals({2, 3, 4}), 1e-12).pass);
  const auto h = kk_build<Complex>({});
  const auto o = sector_spectrum(h, {1, 1}, 2);
  CHECK(compare(o.eigenvalues, reals({1, 2, 3}), 1e-12).pass);
  CHECK(o.convergence["complete"] == true);
  CHECK_THROWS_AS(sector_spectrum(h, {1, 2}, 2), Error);
  OracleConfig bad;
  bad.cutoff_ladder = {12, 8};
  CHECK_THROWS_AS(sector_spectrum(h, {1, 1}, 2, bad), Error);
}

TEST_CASE("oracle spectra are similarity invariant", "[oracle]") {
  const KKParams p{2, 2, 1.1, 0.6, {0.3, 0.2}, {0.3, -0.2}};
  const Sector sec = Sector::total_number(6, 6);
  const MatrixXc m = matrix_in_sector(kk_build<Complex>(p), sec);
  Eigen::VectorXcd d(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto [n1, n2] = sec.basis()[static_cast<std::size_t>(i)];
    d(i) = std::sqrt(std::tgamma(n2 + n1 + 1.0) / std::tgamma(n2 + 1.0));
  }
  const MatrixXc conj = d.asDiagonal() * m * d.cwiseInverse().asDiagonal();
  CHECK(compare(eigenvalues_general(conj), eigenvalues_general(m), 1e-10).pass);
  for (const auto& e : sector_spectrum(kk_build<Complex>(p), {1, 1}, 6).eigenvalues) CHECK(std::abs(e.imag()) < 1e-12);
}

TEST_CASE("finite-difference solver", "[oracle]") {
  PotentialModel ho;
  ho.v = {{2, 0.5}};
  const auto e = fd_spectrum(ho, {}, 4);
  for (int n = 0; n < 4; ++n) CHECK_THAT(e.eigenvalues[static_cast<std::size_t>(n)].real(), WithinAbs(n + 0.5, 1e-6));
  const double order = fd_convergence_order(ho, -8, 8, 200);
  CHECK(order > 1.8);
  CHECK(order < 2.2);

  PotentialModel box;
  FdConfig cfg;
  cfg.lo = 0.0;
  cfg.hi = M_PI;
  const auto b = fd_spectrum(box, cfg, 3);
  for (int n = 1; n <= 3; ++n) CHECK_THAT(b.eigenvalues[static_cast<std::size_t>(n - 1)].real(), WithinAbs(n * n / 2.0, 1e-6));

  PotentialModel flat;
  CHECK_THROWS_AS(fd_spectrum(flat, {}, 2), Error);
  FdConfig tight;
  tight.lo = -8.0;
  tight.hi = 8.0;
  tight.max_intervals = 256;
  CHECK_THROWS_AS(fd_spectrum(ho, tight, 3), Error);
}

TEST_CASE("parameter files", "[io]") {
  using nlohmann::json;
  const auto kk = io::parse_kk(json{{"s", 2}, {"r", 1}, {"kappa", {{"re", 0.5}, {"im", 0.25}}}});
  CHECK(kk.kappa == Complex(0.5, 0.25));
  CHECK(kk.kappa_bar == Complex(0.5, -0.25));
  CHECK(io::parse_kk(json{{"kappa", json::array({1, 2})}}).kappa == Complex(1, 2));
  CHECK_THROWS_AS(io::parse_kk(json{{"kapa", 1}}), Error);
  CHECK_THROWS_AS(io::parse_kk(json{{"s", 1.5}}), Error);
  CHECK_THROWS_AS(io::parse_sextic(json{{"k", -1}}), Error);
  CHECK(io::parse_anharmonic(json{{"alpha1", 0.25}}).alpha1 == Complex(0.25, 0));
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
