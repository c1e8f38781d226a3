#pragma once

#include <random>

#include "ringsteer/qcore.hpp"

namespace ringsteer::testsupport {

inline Vector random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complexd(gauss(rng), gauss(rng));
  v /= v.norm();
  return v;
}

inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = complexd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

inline Matrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = complexd(gauss(rng), gauss(rng));
  return (g + g.adjoint()) / 2.0;
}

// Mostly-pure random 2x3 state, regenerated until its partial transpose has
// a clearly negative eigenvalue.
inline DensityOperator random_npt_2x3(std::uint64_t seed) {
  const HilbertShape shape({2, 3});
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vector psi = random_unit_vector(6, rng);
    Matrix m = 0.85 * (psi * psi.adjoint());
    m += (0.15 / 6.0) * Matrix::Identity(6, 6);
    const Matrix pt = partial_transpose(m, shape, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-3) return DensityOperator(shape, m);
  }
  throw NumericError("no NPT sample found, seed is pathological");
}

}  // namespace ringsteer::testsupport
