#include <cmath>
#include <random>

#include "doctest.h"
#include "ringsteer/noise.hpp"
#include "ringsteer/universal.hpp"
#include "support.hpp"

using namespace ringsteer;
using testsupport::random_npt_2x3;
using testsupport::random_unit_vector;

namespace {

DensityOperator bell_density(int label) { return pure_density(bell_state(label)); }

// branch weight denominator: every untrusted projection succeeds with 1/d^2,
// one projector of dim d1 and n-2 of dim d2
double ideal_denominator(int d1, int d2, int n) {
  return static_cast<double>(d1) * d1 * std::pow(static_cast<double>(d2), 2 * (n - 2));
}

DensityOperator product_state(const Vector& a, const Vector& b) {
  Vector v = kron(a, b);
  return DensityOperator::unchecked(
      HilbertShape({static_cast<int>(a.size()), static_cast<int>(b.size())}),
      v * v.adjoint());
}

}  // namespace

TEST_SUITE("universal") {

TEST_CASE("tomographic basis spans and reconstructs") {
  for (int d : {2, 3}) {
    TomographicBasis basis = tomographic_basis(d);
    CHECK(basis.d == d);
    REQUIRE(static_cast<int>(basis.projectors.size()) == d * d);
    for (const Matrix& p : basis.projectors) {
      CHECK((p - p.adjoint()).norm() < 1e-14);
      CHECK((p * p - p).norm() < 1e-14);  // rank one projectors
      CHECK(p.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(tomographic_basis(1), std::invalid_argument);
}

TEST_CASE("npt witness catches the canonical states") {
  HermitianOperator w = npt_witness(bell_density(0));
  CHECK(real_trace_product(w.matrix(), bell_density(0).matrix()) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(w.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  HermitianOperator ww = npt_witness(werner_state(0.7));
  CHECK(real_trace_product(ww.matrix(), werner_state(0.7).matrix()) ==
        doctest::Approx((1.0 - 3.0 * 0.7) / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(npt_witness(werner_state(0.2)), UnsupportedStateError);
  CHECK_THROWS_AS(npt_witness(werner_state(0.0)), UnsupportedStateError);
  CHECK_THROWS_AS(npt_witness(DensityOperator(HilbertShape({4}),
                                              Matrix::Identity(4, 4) / 4.0)),
                  std::invalid_argument);
}

TEST_CASE("witness scores every product state nonnegatively") {
  std::mt19937_64 rng(101);
  for (const DensityOperator& rho :
       {bell_density(0), werner_state(0.5), random_npt_2x3(42)}) {
    HermitianOperator w = npt_witness(rho);
    const int d1 = rho.shape().dim(0), d2 = rho.shape().dim(1);
    for (int k = 0; k < 250; ++k) {
      DensityOperator sigma =
          product_state(random_unit_vector(d1, rng), random_unit_vector(d2, rng));
      CHECK(real_trace_product(w.matrix(), sigma.matrix()) >= -1e-10);
    }
  }
}

TEST_CASE("decomposition reconstructs the witness") {
  for (const DensityOperator& rho : {bell_density(0), random_npt_2x3(42)}) {
    HermitianOperator w = npt_witness(rho);
    WitnessDecomposition d = decompose(w);
    const int d1 = rho.shape().dim(0), d2 = rho.shape().dim(1);
    REQUIRE(d.beta.rows() == d1 * d1);
    REQUIRE(d.beta.cols() == d2 * d2);
    CHECK(d.residual < 1e-10);
    Matrix recon = Matrix::Zero(w.dim(), w.dim());
    for (int s = 0; s < d.beta.rows(); ++s)
      for (int t = 0; t < d.beta.cols(); ++t)
        recon += d.beta(s, t) * kron(d.basis1.projectors[s], d.basis2.projectors[t]);
    CHECK((recon - w.matrix()).norm() < 1e-10);
  }

  // the identity has an exact expansion too
  HermitianOperator id(HilbertShape({2, 2}), Matrix::Identity(4, 4));
  CHECK(decompose(id).residual < 1e-10);

  // dimension mismatch between witness and bases
  HermitianOperator w23 = npt_witness(random_npt_2x3(42));
  CHECK_THROWS_AS(decompose(w23, tomographic_basis(2), tomographic_basis(2)),
                  std::invalid_argument);
}

TEST_CASE("product gamma evaluates the score functional") {
  WitnessDecomposition d = decompose(npt_witness(bell_density(0)));
  DensityOperator half(HilbertShape({2}), Matrix::Identity(2, 2) / 2.0);
  // -Tr(W (I/2 x I/2)) = -Tr(W)/4 = -1/4
  CHECK(product_gamma(d, half, half) == doctest::Approx(-0.25).epsilon(1e-10));
  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  DensityOperator p0(HilbertShape({2}), Matrix(e0 * e0.adjoint()));
  DensityOperator p1(HilbertShape({2}), Matrix(e1 * e1.adjoint()));
  // W is the partial transpose of the singlet projector, so <01|W|01> = 1/2
  // while <00|W|00> = 0
  CHECK(product_gamma(d, p0, p1) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(product_gamma(d, p0, p0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("ring construction wires the target state to the trusted pair") {
  UniversalNetwork net = build_universal_network(bell_density(0), 3);
  CHECK(net.n == 3);
  CHECK(net.d1 == 2);
  CHECK(net.d2 == 2);
  CHECK(net.all_zero_weight == doctest::Approx(1.0 / 16.0).epsilon(1e-10));
  CHECK(net.ring.nodes() == 3);
  CHECK(net.ring.trusted() == 0);

  // the trusted projectors are rank one products
  Matrix p = net.trusted_projector(1, 2);
  CHECK((p * p - p).norm() < 1e-12);

  UniversalNetwork wide = build_universal_network(random_npt_2x3(42), 3);
  CHECK(wide.d1 == 2);
  CHECK(wide.d2 == 3);
  CHECK(wide.all_zero_weight ==
        doctest::Approx(1.0 / ideal_denominator(2, 3, 3)).epsilon(1e-9));

  CHECK_THROWS_AS(build_universal_network(bell_density(0), 2), std::invalid_argument);
  CHECK_THROWS_AS(build_universal_network(werner_state(0.1), 3), UnsupportedStateError);
  CHECK_THROWS_AS(
      build_universal_network(
          DensityOperator(HilbertShape({2}), Matrix::Identity(2, 2) / 2.0), 3),
      std::invalid_argument);
}

TEST_CASE("simulated score matches the branch weight times the witness trace") {
  struct Case {
    DensityOperator rho;
    int n;
  };
  const Case cases[] = {
      {bell_density(0), 3}, {bell_density(0), 4},
      {werner_state(0.4), 3}, {werner_state(0.7), 3},
      {random_npt_2x3(42), 3}, {random_npt_2x3(42), 4},
  };
  for (const auto& c : cases) {
    UniversalNetwork net = build_universal_network(c.rho, c.n);
    const double wtrace = real_trace_product(net.witness.matrix(), c.rho.matrix());
    const double s = evaluate_universal(net);
    CHECK(s > 0.0);
    CHECK(s == doctest::Approx(-wtrace / ideal_denominator(net.d1, net.d2, c.n))
                   .epsilon(1e-9));
    CHECK(net.all_zero_weight ==
          doctest::Approx(1.0 / ideal_denominator(net.d1, net.d2, c.n)).epsilon(1e-9));
  }
}

TEST_CASE("reference formula agrees with the simulation on triangles") {
  for (const DensityOperator& rho :
       {bell_density(0), werner_state(0.4), werner_state(0.7), random_npt_2x3(42)}) {
    UniversalNetwork net = build_universal_network(rho, 3);
    const double wtrace = real_trace_product(net.witness.matrix(), rho.matrix());
    CHECK(evaluate_universal(net) ==
          doctest::Approx(universal_reference_value(wtrace, net.d1, net.d2, 3))
              .epsilon(1e-9));
  }
  // spot value: werner 2/3 scores (1/4) / 16
  UniversalNetwork net = build_universal_network(werner_state(2.0 / 3.0), 3);
  CHECK(evaluate_universal(net) == doctest::Approx(1.0 / 64.0).epsilon(1e-9));
}

TEST_CASE("external witness path accepts separable targets") {
  HermitianOperator w = npt_witness(bell_density(0));
  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  DensityOperator sep = product_state(e0, e1);
  UniversalNetwork net = build_universal_network(sep, 3, w);
  // Tr(W |01><01|) = 1/2, so the score goes negative
  CHECK(evaluate_universal(net) == doctest::Approx(-0.5 / 16.0).epsilon(1e-9));
}

TEST_CASE("score is linear in the decomposition") {
  UniversalNetwork net = build_universal_network(bell_density(0), 3);
  WitnessDecomposition doubled = net.decomp;
  doubled.beta *= 2.0;
  CHECK(evaluate_universal(net, doubled) ==
        doctest::Approx(2.0 * evaluate_universal(net)).epsilon(1e-12));
}

TEST_CASE("sampled maximum of the score functional stays nonpositive") {
  for (const DensityOperator& rho : {bell_density(0), random_npt_2x3(42)}) {
    WitnessDecomposition d = decompose(npt_witness(rho));
    SohsCheckResult r = universal_sohs_check(d, 300);
    CHECK(r.samples == 300);
    CHECK(r.max_value <= 1e-9);
  }
  WitnessDecomposition d = decompose(npt_witness(bell_density(0)));
  CHECK_THROWS_AS(universal_sohs_check(d, 99), std::invalid_argument);

  // determinism under a fixed seed
  SohsCheckResult a = universal_sohs_check(d, 120, 7);
  SohsCheckResult b = universal_sohs_check(d, 120, 7);
  CHECK(a.max_value == b.max_value);
}

}  // TEST_SUITE
