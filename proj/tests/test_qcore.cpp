#include <random>

#include "doctest.h"
#include "ringsteer/qcore.hpp"
#include "support.hpp"

using namespace ringsteer;
using testsupport::random_hermitian;
using testsupport::random_unit_vector;
using testsupport::random_unitary;

namespace {

// Independent partial trace: raw nested loops over kept and summed digits.
Matrix brute_partial_trace(const Matrix& m, const HilbertShape& shape,
                           const std::vector<int>& keep) {
  std::vector<bool> kept(shape.factors(), false);
  for (int f : keep) kept[f] = true;
  int kept_dim = 1, summed_dim = 1;
  std::vector<int> kept_factors, summed_factors;
  for (int f = 0; f < shape.factors(); ++f) {
    if (kept[f]) {
      kept_dim *= shape.dim(f);
      kept_factors.push_back(f);
    } else {
      summed_dim *= shape.dim(f);
      summed_factors.push_back(f);
    }
  }
  auto assemble = [&](int kept_index, int summed_index) {
    std::vector<int> digits(shape.factors());
    for (int i = static_cast<int>(kept_factors.size()) - 1; i >= 0; --i) {
      int d = shape.dim(kept_factors[i]);
      digits[kept_factors[i]] = kept_index % d;
      kept_index /= d;
    }
    for (int i = static_cast<int>(summed_factors.size()) - 1; i >= 0; --i) {
      int d = shape.dim(summed_factors[i]);
      digits[summed_factors[i]] = summed_index % d;
      summed_index /= d;
    }
    return shape.index(digits);
  };
  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (int r = 0; r < kept_dim; ++r)
    for (int c = 0; c < kept_dim; ++c)
      for (int s = 0; s < summed_dim; ++s)
        out(r, c) += m(assemble(r, s), assemble(c, s));
  return out;
}

}  // namespace

TEST_SUITE("qcore") {

TEST_CASE("shape digit round trip") {
  HilbertShape shape({2, 3, 4});
  CHECK(shape.total() == 24);
  for (int i = 0; i < shape.total(); ++i) {
    auto d = shape.digits(i);
    REQUIRE(d.size() == 3);
    CHECK(shape.index(d) == i);
  }
  CHECK(shape.digits(23) == std::vector<int>{1, 2, 3});
  CHECK(shape.digits(4) == std::vector<int>{0, 1, 0});
  CHECK_THROWS_AS(HilbertShape({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(HilbertShape({4096, 2}), std::invalid_argument);
}

TEST_CASE("kron layout puts the first factor on the slow index") {
  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(3);
  e0(0) = 1.0;
  e1(2) = 1.0;
  Vector v = kron(e0, e1);
  REQUIRE(v.size() == 6);
  CHECK(std::abs(v(2) - 1.0) == 0.0);

  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(3, 3);
  a(1, 0) = 2.0;
  b(2, 1) = 3.0;
  Matrix m = kron(a, b);
  CHECK(m(1 * 3 + 2, 0 * 3 + 1) == complexd(6.0, 0.0));
}

TEST_CASE("state vector normalizes and canonicalizes phase") {
  Vector v(2);
  v << complexd(0.0, 0.6), complexd(0.0, 0.8);
  StateVector psi(HilbertShape({2}), v);
  StateVector c = psi.canonicalized();
  CHECK(c.amplitudes()(1).real() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(c.amplitudes()(1).imag()) < 1e-12);
  CHECK(phase_distance(c.amplitudes(), psi.amplitudes()) < 1e-12);

  Vector bad(2);
  bad << 0.5, 0.5;
  CHECK_THROWS_AS(StateVector(HilbertShape({2}), bad), std::invalid_argument);
}

TEST_CASE("density operator validation") {
  Matrix m = Matrix::Identity(2, 2) / 2.0;
  DensityOperator rho(HilbertShape({2}), m);
  CHECK(rho.purity() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho.is_psd());

  Matrix off = m;
  off(0, 1) = complexd(0.6, 0.0);
  off(1, 0) = complexd(0.6, 0.0);
  CHECK_THROWS_AS(DensityOperator(HilbertShape({2}), off), std::invalid_argument);

  Matrix traceless = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(HilbertShape({2}), traceless), std::invalid_argument);

  Matrix skew = m;
  skew(0, 1) = complexd(0.0, 0.1);
  CHECK_THROWS_AS(DensityOperator(HilbertShape({2}), skew), std::invalid_argument);
}

TEST_CASE("partial trace matches a brute force contraction") {
  std::mt19937_64 rng(11);
  HilbertShape shape({2, 3, 2});
  Matrix h = random_hermitian(12, rng);

  for (const auto& keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    Matrix got = partial_trace(h, shape, keep);
    Matrix want = brute_partial_trace(h, shape, keep);
    CHECK((got - want).norm() < 1e-12);
  }
}

TEST_CASE("partial trace keeps factor order regardless of keep spelling") {
  std::mt19937_64 rng(12);
  HilbertShape shape({2, 3, 2});
  Matrix h = random_hermitian(12, rng);
  Matrix a = partial_trace(h, shape, {0, 2});
  Matrix b = partial_trace(h, shape, {2, 0});
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("partial trace of a product splits into factors") {
  std::mt19937_64 rng(13);
  Vector u = random_unit_vector(2, rng), w = random_unit_vector(3, rng);
  Matrix ru = u * u.adjoint(), rw = w * w.adjoint();
  Matrix joint = kron(ru, rw);
  CHECK((partial_trace(joint, HilbertShape({2, 3}), {0}) - ru).norm() < 1e-12);
  CHECK((partial_trace(joint, HilbertShape({2, 3}), {1}) - rw).norm() < 1e-12);
}

TEST_CASE("partial transpose flags maximal entanglement") {
  Vector phi(4);
  phi << 1, 0, 0, 1;
  phi /= std::sqrt(2.0);
  DensityOperator rho(HilbertShape({2, 2}), phi * phi.adjoint());
  HermitianOperator pt = partial_transpose(rho, 1);
  EigResult eig = eig_hermitian(pt.matrix());
  CHECK(eig.values(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(eig.values(3) == doctest::Approx(0.5).epsilon(1e-12));
  // transposing either factor gives the same spectrum
  EigResult other = eig_hermitian(partial_transpose(rho, 0).matrix());
  CHECK((eig.values - other.values).norm() < 1e-12);
}

TEST_CASE("partial transpose is an involution") {
  std::mt19937_64 rng(14);
  HilbertShape shape({2, 3});
  Matrix h = random_hermitian(6, rng);
  CHECK((partial_transpose(partial_transpose(h, shape, 1), shape, 1) - h).norm() == 0.0);
}

TEST_CASE("permute subsystems round trips exactly") {
  std::mt19937_64 rng(15);
  HilbertShape shape({2, 3, 4});
  Vector v = random_unit_vector(24, rng);
  std::vector<int> order{2, 0, 1}, inverse{1, 2, 0};
  Vector w = permute_subsystems(v, shape, order);
  HilbertShape moved({4, 2, 3});
  Vector back = permute_subsystems(w, moved, inverse);
  CHECK((back - v).norm() == 0.0);
}

TEST_CASE("permuting an outer product commutes with permuting its vector") {
  std::mt19937_64 rng(16);
  HilbertShape shape({2, 2, 3});
  Vector v = random_unit_vector(12, rng);
  std::vector<int> order{1, 2, 0};
  Matrix direct = permute_subsystems(Matrix(v * v.adjoint()), shape, order);
  Vector pv = permute_subsystems(v, shape, order);
  CHECK((direct - pv * pv.adjoint()).norm() < 1e-14);
}

TEST_CASE("permute moves a basis vector where the index map says") {
  HilbertShape shape({2, 3, 2});
  Vector v = Vector::Zero(12);
  v(shape.index({1, 2, 0})) = 1.0;
  Vector w = permute_subsystems(v, shape, {2, 0, 1});
  HilbertShape moved({2, 2, 3});
  CHECK(std::abs(w(moved.index({0, 1, 2})) - 1.0) == 0.0);
}

TEST_CASE("hermitian eigensolver reconstructs and sorts") {
  std::mt19937_64 rng(17);
  Matrix h = random_hermitian(5, rng);
  EigResult eig = eig_hermitian(h);
  Matrix recon = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    recon += eig.values(i) * (eig.vectors.col(i) * eig.vectors.col(i).adjoint());
  CHECK((recon - h).norm() < 1e-12);
  for (int i = 1; i < 5; ++i) CHECK(eig.values(i) >= eig.values(i - 1));
  CHECK((eig.vectors.adjoint() * eig.vectors - Matrix::Identity(5, 5)).norm() < 1e-12);

  Matrix skew = h;
  skew(0, 1) += complexd(0.0, 1.0);
  CHECK_THROWS_AS(eig_hermitian(skew), std::invalid_argument);
}

TEST_CASE("schmidt decomposition reconstructs bipartite states") {
  std::mt19937_64 rng(18);
  HilbertShape shape({3, 2});
  StateVector psi(shape, random_unit_vector(6, rng));
  SchmidtResult sd = schmidt_decompose(psi);
  REQUIRE(sd.coefficients.size() == 2);
  CHECK(sd.coefficients(0) >= sd.coefficients(1));
  CHECK(sd.coefficients(1) >= 0.0);
  CHECK(sd.coefficients.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  Vector recon = Vector::Zero(6);
  for (int i = 0; i < 2; ++i)
    recon += sd.coefficients(i) * kron(Vector(sd.left.col(i)), Vector(sd.right.col(i)));
  CHECK((recon - psi.amplitudes()).norm() < 1e-12);
  CHECK((sd.left.adjoint() * sd.left - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((sd.right.adjoint() * sd.right - Matrix::Identity(2, 2)).norm() < 1e-12);

  CHECK_THROWS_AS(schmidt_decompose(StateVector(HilbertShape({2, 2, 2}),
                                                random_unit_vector(8, rng))),
                  std::invalid_argument);
}

TEST_CASE("phase distance ignores global phase") {
  std::mt19937_64 rng(19);
  Vector v = random_unit_vector(4, rng);
  Vector rotated = std::exp(complexd(0.0, 1.234)) * v;
  CHECK(phase_distance(v, rotated) < 1e-12);
  Vector w = random_unit_vector(4, rng);
  double d = phase_distance(v, w);
  double overlap = std::abs(v.dot(w));
  CHECK(d == doctest::Approx(std::sqrt(2.0 - 2.0 * overlap)).epsilon(1e-10));
}

TEST_CASE("real trace product agrees with the direct trace") {
  std::mt19937_64 rng(20);
  Matrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
  CHECK(real_trace_product(a, b) == doctest::Approx((a * b).trace().real()).epsilon(1e-12));
  CHECK_THROWS_AS(real_trace_product(a, random_hermitian(3, rng)), std::invalid_argument);
}

TEST_CASE("parallel map covers the range once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, [&](long long b, long long e) {
    for (long long i = b; i < e; ++i) hits[static_cast<size_t>(i)] += 1;
  });
  for (int h : hits) CHECK(h == 1);
  CHECK(thread_count() >= 1);
}

}  // TEST_SUITE
