#include "ringsteer/universal.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace ringsteer {
namespace {

constexpr double kSwapCheckTol = 1e-9;
constexpr double kResidualTol = 1e-8;
constexpr double kZeroBranch = 1e-14;

StateVector max_entangled(int d) {
  Vector v = Vector::Zero(d * d);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(i * d + i) = a;
  return StateVector(HilbertShape({d, d}), std::move(v));
}

Matrix max_entangled_projector(int d) {
  const Vector v = max_entangled(d).amplitudes();
  return v * v.adjoint();
}

double hs_inner(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();  // Tr(ab)
}

Eigen::MatrixXd basis_gram(const TomographicBasis& basis) {
  const int m = static_cast<int>(basis.projectors.size());
  Eigen::MatrixXd gram(m, m);
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) gram(s, t) = hs_inner(basis.projectors[s], basis.projectors[t]);
  return gram;
}

}  // namespace

TomographicBasis tomographic_basis(int d) {
  if (d < 2) throw std::invalid_argument("tomographic basis needs dimension >= 2");
  TomographicBasis basis;
  basis.d = d;
  basis.projectors.reserve(static_cast<size_t>(d) * d);
  for (int j = 0; j < d; ++j) {
    Vector e = Vector::Zero(d);
    e(j) = 1.0;
    basis.projectors.push_back(e * e.adjoint());
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Vector plus = Vector::Zero(d);
      plus(j) = r;
      plus(k) = r;
      Vector phased = Vector::Zero(d);
      phased(j) = r;
      phased(k) = complexd(0.0, r);
      basis.projectors.push_back(plus * plus.adjoint());
      basis.projectors.push_back(phased * phased.adjoint());
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_gram(basis));
  if (lu.rank() != d * d)
    throw NumericError("tomographic projectors fail to span the operator space");
  return basis;
}

HermitianOperator npt_witness(const DensityOperator& rho) {
  if (rho.shape().factors() != 2)
    throw std::invalid_argument("npt_witness expects a bipartite state");
  const Matrix pt = partial_transpose(rho.matrix(), rho.shape(), 1);
  const EigResult eig = eig_hermitian(pt);
  if (eig.values(0) >= -kPsdTol)
    throw UnsupportedStateError(
        "state is PPT across its bipartition, no transpose witness exists");
  const Vector eta = eig.vectors.col(0);
  Matrix w = partial_transpose(Matrix(eta * eta.adjoint()), rho.shape(), 1);
  w = ((w + w.adjoint()) / 2.0).eval();
  return HermitianOperator(rho.shape(), std::move(w));
}

WitnessDecomposition decompose(const HermitianOperator& witness,
                               const TomographicBasis& basis1,
                               const TomographicBasis& basis2) {
  if (witness.shape().factors() != 2)
    throw std::invalid_argument("decompose expects a bipartite operator");
  if (basis1.d != witness.shape().dim(0) || basis2.d != witness.shape().dim(1))
    throw std::invalid_argument("decompose: basis dimensions do not match the operator");
  WitnessDecomposition dec;
  dec.basis1 = basis1;
  dec.basis2 = basis2;
  const int m1 = static_cast<int>(basis1.projectors.size());
  const int m2 = static_cast<int>(basis2.projectors.size());

  Eigen::MatrixXd overlaps(m1, m2);
  for (int s = 0; s < m1; ++s)
    for (int t = 0; t < m2; ++t)
      overlaps(s, t) =
          hs_inner(kron(basis1.projectors[s], basis2.projectors[t]), witness.matrix());

  // beta = g1^-1 overlaps g2^-1, the dual coefficients under the
  // Hilbert-Schmidt pairing.
  const Eigen::MatrixXd half = Eigen::LDLT<Eigen::MatrixXd>(basis_gram(basis1)).solve(overlaps);
  dec.beta = Eigen::LDLT<Eigen::MatrixXd>(basis_gram(basis2)).solve(half.transpose()).transpose();

  Matrix recon = Matrix::Zero(witness.dim(), witness.dim());
  for (int s = 0; s < m1; ++s)
    for (int t = 0; t < m2; ++t)
      recon += dec.beta(s, t) * kron(basis1.projectors[s], basis2.projectors[t]);
  dec.residual = (recon - witness.matrix()).norm();
  if (dec.residual > kResidualTol) {
    std::ostringstream msg;
    msg << "witness decomposition residual " << dec.residual << " exceeds " << kResidualTol;
    throw NumericError(msg.str());
  }
  return dec;
}

WitnessDecomposition decompose(const HermitianOperator& witness) {
  return decompose(witness, tomographic_basis(witness.shape().dim(0)),
                   tomographic_basis(witness.shape().dim(1)));
}

Matrix UniversalNetwork::trusted_projector(int s, int t) const {
  return kron(decomp.basis2.projectors.at(t), decomp.basis1.projectors.at(s));
}

UniversalNetwork build_universal_network(const DensityOperator& rho_tilde, int n,
                                         const HermitianOperator& witness) {
  if (rho_tilde.shape().factors() != 2)
    throw std::invalid_argument("target state must be bipartite");
  if (!(witness.shape() == rho_tilde.shape()))
    throw std::invalid_argument("witness dimensions do not match the target state");
  if (n < 3) throw std::invalid_argument("the construction needs at least 3 nodes");
  const int d1 = rho_tilde.shape().dim(0);
  const int d2 = rho_tilde.shape().dim(1);
  long long total = static_cast<long long>(d1) * d1 * d1 * d2;
  for (int i = 2; i < n; ++i) total *= static_cast<long long>(d2) * d2;
  if (total > kMaxTotalDim)
    throw std::invalid_argument("ring dimension exceeds the dense simulation cap");

  WitnessDecomposition dec = decompose(witness);

  std::vector<DensityOperator> sources;
  sources.push_back(pure_density(max_entangled(d1)));
  sources.push_back(rho_tilde);
  for (int i = 2; i < n; ++i) sources.push_back(pure_density(max_entangled(d2)));

  std::vector<Measurement> ms;
  ms.emplace_back(std::vector<Matrix>{Matrix::Identity(d2 * d1, d2 * d1)});
  ms.push_back(binary_projector_measurement(max_entangled_projector(d1)));
  for (int i = 2; i < n; ++i)
    ms.push_back(binary_projector_measurement(max_entangled_projector(d2)));

  RingNetwork ring(std::move(sources), std::move(ms), 0);

  const std::vector<TrustedBranch> branches = untrusted_branches(ring);
  const TrustedBranch* zero_branch = nullptr;
  for (const TrustedBranch& br : branches) {
    bool all_zero = true;
    for (int a : br.outcomes) all_zero = all_zero && a == 0;
    if (all_zero) {
      zero_branch = &br;
      break;
    }
  }
  if (zero_branch == nullptr || zero_branch->weight <= kZeroBranch)
    throw NumericError("all-zero untrusted branch carries no weight");

  // The surviving trusted pair must be the target state with its factors
  // swapped into the trusted slot order.
  const Matrix expected = permute_subsystems(rho_tilde, {1, 0}).matrix();
  const double gap = (zero_branch->unnormalized / zero_branch->weight - expected).norm();
  if (gap > kSwapCheckTol) {
    std::ostringstream msg;
    msg << "conditioned trusted pair deviates from the swapped target by " << gap;
    throw NumericError(msg.str());
  }

  return UniversalNetwork{.ring = std::move(ring),
                          .rho_tilde = rho_tilde,
                          .n = n,
                          .d1 = d1,
                          .d2 = d2,
                          .witness = witness,
                          .decomp = std::move(dec),
                          .all_zero_weight = zero_branch->weight,
                          .all_zero_operator = zero_branch->unnormalized};
}

UniversalNetwork build_universal_network(const DensityOperator& rho_tilde, int n) {
  return build_universal_network(rho_tilde, n, npt_witness(rho_tilde));
}

double evaluate_universal(const UniversalNetwork& net, const WitnessDecomposition& decomp) {
  if (decomp.basis1.d != net.d1 || decomp.basis2.d != net.d2)
    throw std::invalid_argument("decomposition dimensions do not match the network");
  const int m1 = net.d1 * net.d1;
  const int m2 = net.d2 * net.d2;
  // Per-row partials merged in index order so the sum is reproducible under
  // any thread count.
  std::vector<double> row(m1, 0.0);
  parallel_for(m1, [&](long long lo, long long hi) {
    for (long long s = lo; s < hi; ++s) {
      double acc = 0.0;
      for (int t = 0; t < m2; ++t) {
        const Matrix proj = kron(decomp.basis2.projectors[t],
                                 decomp.basis1.projectors[static_cast<int>(s)]);
        acc -= decomp.beta(s, t) * hs_inner(proj, net.all_zero_operator);
      }
      row[s] = acc;
    }
  });
  double total = 0.0;
  for (double r : row) total += r;
  return total;
}

double evaluate_universal(const UniversalNetwork& net) {
  return evaluate_universal(net, net.decomp);
}

double universal_reference_value(double witness_trace, int d1, int d2, int n) {
  return -witness_trace /
         (static_cast<double>(d1) * d1 * std::pow(static_cast<double>(d2), n - 1));
}

double product_gamma(const WitnessDecomposition& decomp, const DensityOperator& a,
                     const DensityOperator& b) {
  if (a.dim() != decomp.basis1.d || b.dim() != decomp.basis2.d)
    throw std::invalid_argument("product state dimensions do not match the decomposition");
  const int m1 = static_cast<int>(decomp.basis1.projectors.size());
  const int m2 = static_cast<int>(decomp.basis2.projectors.size());
  Eigen::VectorXd fa(m1), fb(m2);
  for (int s = 0; s < m1; ++s) fa(s) = hs_inner(decomp.basis1.projectors[s], a.matrix());
  for (int t = 0; t < m2; ++t) fb(t) = hs_inner(decomp.basis2.projectors[t], b.matrix());
  return -fa.dot(decomp.beta * fb);
}

SohsCheckResult universal_sohs_check(const WitnessDecomposition& decomp, int samples,
                                     std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("need at least 100 samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d1 = decomp.basis1.d;
  const int d2 = decomp.basis2.d;

  auto random_unit = [&](int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = complexd(gauss(rng), gauss(rng));
    v /= v.norm();
    return v;
  };
  auto feature = [](const std::vector<Matrix>& ps, const Vector& u) {
    Eigen::VectorXd f(static_cast<int>(ps.size()));
    for (int s = 0; s < static_cast<int>(ps.size()); ++s)
      f(s) = (u.adjoint() * ps[s] * u).value().real();
    return f;
  };
  auto score = [&](const Vector& u, const Vector& v) {
    return -feature(decomp.basis1.projectors, u)
                .dot(decomp.beta * feature(decomp.basis2.projectors, v));
  };

  Vector best_u = random_unit(d1);
  Vector best_v = random_unit(d2);
  double best = score(best_u, best_v);
  for (int i = 1; i < samples; ++i) {
    Vector u = random_unit(d1);
    Vector v = random_unit(d2);
    const double g = score(u, v);
    if (g > best) {
      best = g;
      best_u = std::move(u);
      best_v = std::move(v);
    }
  }

  // Sharpen the best sample with a shrinking random walk.
  double step = 0.5;
  int stall = 0;
  for (int it = 0; it < 4000 && step > 1e-7; ++it) {
    Vector u = best_u + step * random_unit(d1);
    Vector v = best_v + step * random_unit(d2);
    u /= u.norm();
    v /= v.norm();
    const double g = score(u, v);
    if (g > best) {
      best = g;
      best_u = std::move(u);
      best_v = std::move(v);
      stall = 0;
    } else if (++stall >= 60) {
      step *= 0.5;
      stall = 0;
    }
  }
  return SohsCheckResult{best, samples};
}

}  // namespace ringsteer
