#include <catch_amalgamated.hpp>

#include "qesboson.hpp"

using namespace qesboson;
using Q = ComplexRational;
using D = DiffOperator<Q>;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<Complex> reals(std::initializer_list<double> xs) {
  std::vector<Complex> out;
  for (double x : xs) out.emplace_back(x, 0.0);
  return out;
}

bool same(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) { return compare(a, b, tol).pass; }

KKParams fixture() { return {}; }  // s = r = 2, w1 = w2 = 1, kappa = kappa_bar = 1/2

}  // namespace

TEST_CASE("invariant degrees", "[qes]") {
  const D kk = kk_transformed(fixture(), Rational(2));
  CHECK(invariant_degree(kk, 10) == 2);
  const auto an = anharmonic_build({0.5, 0.5, 0.3, 0.0, 1});
  CHECK(invariant_degree(an.differential, 10) == 2);
  // x^2 d keeps constants, so degree 0 is invariant
  CHECK(invariant_degree(D::term(Q(1), 2, 1), 6) == 0);
  CHECK_FALSE(invariant_degree(D::term(Q(1), 2, 1) + D::x(), 6).has_value());
}

TEST_CASE("QES blocks and their spectra", "[qes]") {
  const D kk = kk_transformed(fixture(), Rational(2));
  CHECK(same(spectrum(block(kk, 2)).eigenvalues, reals({1, 2, 3}), 1e-12));
  CHECK_THROWS_AS(block(kk, 3), Error);
  const D c = D::constant(Q(Rational(7, 3))) + D::euler();
  const auto b0 = block(c, 0);
  CHECK(b0.exact[0][0] == Q(Rational(7, 3)));
  const D swap = D::x() + D::d();  // x sends x^1 to x^2
  CHECK_THROWS_AS(block(swap, 1), Error);
  // j = 1/2 with w1 = w2 = 1 and kappa = 0: both states at 1
  KKParams free = fixture();
  free.kappa = free.kappa_bar = 0.0;
  CHECK(same(kk_qes(free, 1).block_spectrum.eigenvalues, reals({1, 1}), 1e-12));
}

TEST_CASE("spectrum sorting and small blocks", "[qes]") {
  QesBlock<Q> b;
  b.basis = MonomialBasis::dense(2);
  b.matrix = MatrixXc::Zero(3, 3);
  b.matrix.diagonal() << Complex(2), Complex(1), Complex(0);
  CHECK(spectrum(b).eigenvalues == reals({0, 1, 2}));
  b.basis = MonomialBasis::dense(1);
  b.matrix = MatrixXc::Zero(2, 2);
  b.matrix(0, 1) = b.matrix(1, 0) = 1.0;
  const auto s = spectrum(b).eigenvalues;
  CHECK_THAT(s[0].real(), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(s[1].real(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("recurrences are derived from act", "[qes]") {
  const auto euler = recurrence(D::euler());
  CHECK(euler.offsets() == std::vector<int>{0});
  CHECK(euler.coefficient(0, 5) == Q(5));

  const D kk = kk_transformed(fixture(), Rational(2));
  const auto rec = recurrence(kk);
  CHECK(rec.offsets() == std::vector<int>{-2, 0, 2});
  const Q k(Rational(1, 2));
  for (int n = 0; n <= 8; ++n) {
    // P_{n+2} carries kappa_bar (n+2)(n+1); P_{n-2} carries kappa (2j-n+2)(2j-n+1) with 2j = 2
    CHECK(rec.coefficient(2, n) == k * Q((n + 2) * (n + 1)));
    CHECK(rec.coefficient(-2, n) == k * Q((4 - n) * (3 - n)));
  }
  CHECK_FALSE(recurrence_mismatch(kk, rec, 20).has_value());

  KKParams sh = fixture();
  sh.s = 2;
  sh.r = 1;
  const auto rec2 = recurrence(kk_transformed(sh, Rational(1)));
  CHECK(rec2.offsets() == std::vector<int>{-2, 0, 2});
  CHECK(rec2.symbolic().at(0).degree() == 1);
}

TEST_CASE("energy polynomials", "[qes]") {
  std::vector<std::vector<Q>> m{{0, 1}, {1, 0}};
  const auto run = energy_polynomials(Recurrence<Q>::from_matrix(m), 1);
  CHECK(same(spectrum(run).eigenvalues, reals({-1, 1}), 1e-12));
  const auto p1 = run.polynomial(1);
  REQUIRE(p1.has_value());
  CHECK(p1->degree() == 1);

  const D kk = kk_transformed(fixture(), Rational(2));
  const auto kr = energy_polynomials(recurrence(kk), 2);
  CHECK(kr.chains.size() == 2);  // even and odd degrees
  CHECK(same(spectrum(kr).eigenvalues, reals({1, 2, 3}), 1e-12));

  // a vanishing superdiagonal entry inside the basis blocks the forward solve
  std::vector<std::vector<Q>> split{{1, 1, 0}, {1, 2, 0}, {0, 1, 3}};
  CHECK_THROWS_AS(energy_polynomials(Recurrence<Q>::from_matrix(split), 2), Error);
}

TEST_CASE("wavefunctions map back to Fock space", "[qes]") {
  const KKParams p = fixture();
  const auto q = kk_qes(p, 2);
  const auto h = kk_build<Q>(p);
  const auto w2 = wavefunction_fock(q.run, Complex(2.0), kk_transform(p), q.sector.sector_value, &h);
  CHECK(w2.residual.value() < 1e-12);
  CHECK(w2.state.amplitudes().size() == 1);
  CHECK(std::abs(w2.state.amplitude(1, 1)) > 0.0);
  const auto w1 = wavefunction_fock(q.run, Complex(1.0), kk_transform(p), q.sector.sector_value, &h);
  CHECK(w1.residual.value() < 1e-12);
  const Complex a = w1.state.amplitude(2, 0);
  const Complex b = w1.state.amplitude(0, 2);
  CHECK_THAT(std::abs(a + b), WithinAbs(0.0, 1e-12));
  CHECK(std::abs(a) > 0.1);

  // identity transform, degree 0: vacuum sector
  const auto run0 = energy_polynomials(recurrence(D::constant(Q(4))), 0);
  const auto v = wavefunction_fock(run0, Complex(4.0), {TransformKind::S, Rational(0)}, Rational(0));
  CHECK(v.state.amplitudes().size() == 1);
  CHECK(v.state.amplitude(0, 0) != Complex{});
}

TEST_CASE("inverse dictionary refuses states outside Fock space", "[qes]") {
  CHECK_THROWS_AS(inverse_dictionary({0, 1, 2, 3}, std::vector<Complex>(4, 1.0), {TransformKind::S, Rational(1)}, Rational(2)), Error);
}

TEST_CASE("spectrum comparison", "[spectrum]") {
  const auto a = reals({1, 2, 3});
  CHECK(compare(a, a, 1e-12).max_delta == 0.0);
  CHECK(compare(a, reals({3, 2, 1}), 1e-12).pass);
  CHECK_FALSE(compare(a, reals({1, 2}), 1e-12).pass);
  CHECK(compare(reals({1, 2}), a, 1e-12, CompareMode::SubsetOfB).pass);
  const auto r = compare(reals({1, 1}), reals({1, 1.5}), 1e-3);
  CHECK(r.unmatched_a.size() == 1);
  CHECK(r.unmatched_b.size() == 1);
  CHECK(to_json(r)["verdict"] == "fail");
}
