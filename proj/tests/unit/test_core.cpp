#include <catch_amalgamated.hpp>

#include <random>

#include "qesboson.hpp"

using namespace qesboson;
using Q = ComplexRational;
using Op = BosonOperator<Q>;
using D = DiffOperator<Q>;
using Catch::Matchers::WithinAbs;

namespace {

std::uint64_t test_seed() {
  if (const char* s = std::getenv("QESBOSON_SEED")) return std::strtoull(s, nullptr, 10);
  return 7;
}

Op sector_op(Q c, int p, int q, int r, int s) { return Op::monomial(c, {p, q, r, s}); }

}  // namespace

TEST_CASE("normal ordering of elementary products", "[boson]") {
  using L = Ladder;
  CHECK(normal_order<Q>({L::A1, L::A1d}) == Op::n1() + Op::identity());
  CHECK(normal_order<Q>({L::A1, L::A2d}) == sector_op(1, 0, 1, 1, 0));
  CHECK(normal_order<Q>({L::A2, L::A2d, L::A2d}) == sector_op(1, 0, 0, 2, 1) + Op::a2d() * Q(2));
}

TEST_CASE("ordering identity: AB - BA equals commutator", "[boson]") {
  const std::vector<Exponents> mons{{1, 0, 0, 0}, {0, 2, 1, 0}, {2, 1, 0, 1}, {0, 0, 3, 2}, {1, 1, 1, 1}};
  for (const auto& a : mons)
    for (const auto& b : mons) {
      const Op A = Op::monomial(1, a);
      const Op B = Op::monomial(1, b);
      CHECK(A * B - B * A == commutator(A, B));
    }
}

TEST_CASE("Schwinger commutators", "[boson][algebra]") {
  const auto j = su2_schwinger<Q>();
  CHECK(commutator(Op::a1(), Op::a1d()) == Op::identity());
  CHECK(commutator(j.plus, j.minus) == Op::n1() - Op::n2());
  const auto k = su11_schwinger<Q>();
  CHECK(commutator(k.plus, k.minus) == (Op::n1() + Op::n2() + Op::identity()) * Q(-1));
  for (const auto& g : {j, k})
    for (const auto& c : commutation_identities(g)) CHECK(c.holds);
}

TEST_CASE("apply uses ladder factors and honours the cutoff", "[fock]") {
  const auto v = apply(Op::n1(), FockVector::basis(3, 5, 8));
  CHECK_THAT(std::abs(v.amplitude(3, 5) - 3.0), WithinAbs(0.0, 1e-14));
  const auto w = apply(sector_op(1, 1, 0, 0, 1), FockVector::basis(1, 1, 2));
  CHECK_THAT(w.amplitude(2, 0).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(apply(sector_op(1, 0, 1, 0, 1), FockVector::basis(0, 4, 4)).empty());
  CHECK_THROWS_MATCHES(apply(Op::a1d(), FockVector::basis(2, 2, 4)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::TruncationOverflow; }));
}

TEST_CASE("apply is linear on random vectors", "[fock]") {
  std::mt19937_64 rng(test_seed());
  std::normal_distribution<double> g;
  const Op op = su2_schwinger<Q>().plus * Q(Rational(3, 2)) + Op::n2();
  for (int trial = 0; trial < 5; ++trial) {
    FockVector u(6), v(6), mix(6);
    const Complex a(g(rng), g(rng)), b(g(rng), g(rng));
    for (int n1 = 0; n1 <= 4; ++n1)
      for (int n2 = 0; n1 + n2 <= 5; ++n2) {
        const Complex x(g(rng), g(rng)), y(g(rng), g(rng));
        u.add(n1, n2, x);
        v.add(n1, n2, y);
        mix.add(n1, n2, a * x + b * y);
      }
    const auto lhs = apply(op, mix);
    const auto ru = apply(op, u);
    const auto rv = apply(op, v);
    for (const auto& [n, c] : lhs.amplitudes()) CHECK(std::abs(c - a * ru.amplitude(n.first, n.second) - b * rv.amplitude(n.first, n.second)) < 1e-12);
  }
}

TEST_CASE("conserved charges", "[boson]") {
  KKParams p;
  p.s = 2;
  p.r = 1;
  CHECK(conserved_charge(kk_build<Q>(p)) == std::pair{1, 2});
  const auto j = su2_schwinger<Q>();
  CHECK(conserved_charge(j.plus + j.minus + j.zero) == std::pair{1, 1});
  const auto k = su11_schwinger<Q>();
  CHECK(conserved_charge(k.plus + k.minus + k.zero) == std::pair{1, -1});
  CHECK(conserved_charge(Op::a1() + Op::a1d(2)) == std::pair{0, 1});
  CHECK_FALSE(conserved_charge(Op::a1() + Op::a2()).has_value());
}

TEST_CASE("sector matrices", "[fock]") {
  // ascending n1 basis: |0,2>, |1,1>, |2,0>
  const Sector sec = Sector::total_number(2, 2);
  const MatrixXc n1 = matrix_in_sector(Op::n1(), sec);
  CHECK(n1.isApprox(Eigen::Vector3cd(Complex(0), Complex(1), Complex(2)).asDiagonal().toDenseMatrix()));
  const MatrixXc kk = matrix_in_sector(sector_op(1, 2, 0, 0, 2) + sector_op(1, 0, 2, 2, 0), sec);
  CHECK_THAT(std::abs(kk(0, 2) - 2.0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(std::abs(kk(2, 0) - 2.0), WithinAbs(0.0, 1e-14));
  CHECK(kk.row(1).isZero());
  CHECK(kk.col(1).isZero());
  const Op h = kk_build<Q>({});
  const MatrixXc m = matrix_in_sector(h, Sector::total_number(4, 4));
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const MatrixXc md = matrix_in_sector(h.adjoint(), Sector::total_number(4, 4));
  CHECK((md - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(matrix_in_sector(Op::a1(), sec), Error);
}

TEST_CASE("Casimir sector values", "[algebra]") {
  const auto j = su2_schwinger<Q>();
  const Op c2 = casimir(j);
  CHECK(matrix_in_sector(c2, Sector::total_number(2, 2)).isApprox(2.0 * MatrixXc::Identity(3, 3)));
  CHECK(matrix_in_sector(c2, Sector::total_number(0, 0)).isZero());
  const Op c11 = casimir(su11_schwinger<Q>());
  const MatrixXc m = matrix_in_sector(c11, Sector::number_difference(0, 5));
  CHECK(m.isApprox(-0.25 * MatrixXc::Identity(6, 6)));
}

TEST_CASE("similarity transforms of states", "[algebra]") {
  // S multiplies by (a2d)^(alpha n1), so |1,1> picks up sqrt(2!/1!)
  const auto s = transform_state({TransformKind::S, Rational(1)}, FockVector::basis(1, 1, 2)).state;
  CHECK_THAT(s.amplitude(1, 2).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  const auto t = transform_state({TransformKind::T, Rational(1)}, FockVector::basis(2, 3, 5)).state;
  CHECK_THAT(t.amplitude(2, 1).real(), WithinAbs(std::sqrt(6.0), 1e-14));
  const auto id = transform_state({TransformKind::S, Rational(1)}, FockVector::basis(0, 4, 4)).state;
  CHECK(id.amplitude(0, 4) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(transform_state({TransformKind::S, Rational(1, 2)}, FockVector::basis(1, 0, 1)), Error);
  const auto back = inverse_transform_state({TransformKind::S, Rational(1)}, s);
  CHECK_THAT(back.amplitude(1, 1).real(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("similarity transforms of operators", "[algebra]") {
  const auto j = su2_schwinger<Q>();
  const auto jm = transform_operator({TransformKind::S, Rational(1)}, j.minus).to_diff_operator(Rational(2));
  CHECK(jm == D::d());
  const auto k = su11_schwinger<Q>();
  const auto km = transform_operator({TransformKind::T, Rational(1)}, k.minus).to_diff_operator(Rational(3));
  CHECK(km == D::d());
  // a1d^2 a2 under S(1/2): x^2 (N' - x d / 2)
  KKParams p;
  p.s = 2;
  p.r = 1;
  p.kappa = 1.0;
  p.kappa_bar = 0.0;
  p.omega1 = p.omega2 = 0.0;
  const auto h = transform_operator(kk_transform(p), kk_build<Q>(p)).to_diff_operator(Rational(3));
  CHECK(h == D::term(Q(3), 2, 0) - D::term(Q(Rational(1, 2)), 3, 1));
}

TEST_CASE("Gelfand-Dyson realizations", "[algebra]") {
  const auto r = gd_realization<Q>({RealizationLabel::GdSu2First, Rational(2)});
  CHECK(act(r.zero, monomial_vector<Q>(2)) == monomial_vector<Q>(2));
  CHECK(act(r.plus, monomial_vector<Q>(2)).empty());
  const auto k = gd_realization<Q>({RealizationLabel::GdSu11First, Rational(3)});
  CHECK(act(k.zero, monomial_vector<Q>(0)) == std::vector<Q>{Q(2)});
  for (const auto label : all_realizations)
    for (int v = 0; v <= 4; ++v) {
      const auto rep = verify_realization({label, Rational(v)});
      INFO(to_string(label) << " v=" << v);
      CHECK(rep.pass());
    }
  const auto bad = verify_realization({RealizationLabel::GdSu2First, Rational(2)}, {.corrupt_plus = true});
  CHECK_FALSE(bad.pass());
}

TEST_CASE("fractional sector values use Gamma weights", "[algebra]") {
  const auto rep = verify_realization({RealizationLabel::GdSu2First, Rational(3, 2)});
  CHECK(rep.pass());
}

TEST_CASE("full identity suite", "[algebra]") {
  AlgebraSuiteOptions opt;
  opt.sector_max = 4;
  const auto rep = verify_algebra(opt);
  CHECK(rep.pass());
  CHECK(rep.identity_count() >= 12);
  opt.corrupt_plus = true;
  CHECK_FALSE(verify_algebra(opt).pass());
}

TEST_CASE("differential operators act exactly", "[diff]") {
  CHECK(act(D::euler(), monomial_vector<Q>(3)) == std::vector<Q>{0, 0, 0, 3});
  CHECK(act(D::d(2), monomial_vector<Q>(0)).empty());
  const D a = D::term(Q(2), 2, 1) + D::d();
  const D b = D::x() - D::d(2);
  for (int n = 0; n <= 6; ++n) CHECK(act(a * b, monomial_vector<Q>(n)) == act(a, act(b, monomial_vector<Q>(n))));
}

TEST_CASE("operator text round trip", "[boson]") {
  const Op h = kk_build<Q>({});
  CHECK(parse_boson_operator<Q>(to_string(h)) == h);
  CHECK_THROWS_AS(parse_boson_operator<Q>("1*b1"), Error);
}
