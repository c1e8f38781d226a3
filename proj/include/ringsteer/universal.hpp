#pragma once

#include <cstdint>

#include "ringsteer/network.hpp"

namespace ringsteer {

// Input states the construction cannot certify (PPT across the cut).
struct UnsupportedStateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// d^2 rank-1 projectors spanning the Hermitian operators on C^d: the
// computational projectors plus (|j>+|k>)/sqrt2 and (|j>+i|k>)/sqrt2 pairs.
struct TomographicBasis {
  int d = 0;
  std::vector<Matrix> projectors;
};

TomographicBasis tomographic_basis(int d);

// Entanglement witness from the partial transpose: W = (|eta><eta|)^T_B with
// eta the most negative eigenvector of rho^T_B. Requires an NPT state.
HermitianOperator npt_witness(const DensityOperator& rho);

struct WitnessDecomposition {
  TomographicBasis basis1, basis2;
  Eigen::MatrixXd beta;  // W = sum_{s,t} beta(s,t) tau_s x omega_t
  double residual = 0.0;
};

WitnessDecomposition decompose(const HermitianOperator& witness,
                               const TomographicBasis& basis1,
                               const TomographicBasis& basis2);
// Same, with the bases built from the witness dimensions.
WitnessDecomposition decompose(const HermitianOperator& witness);

// Ring carrying the target state one swap away from the trusted node: the
// node1-node2 source holds rho_tilde, the trusted-node1 source a d1
// maximally entangled pair, every other source a d2 one; untrusted nodes
// project onto their source's maximally entangled state (binary outcome).
// The trusted node measures, per input (s, t), the binary projector
// omega_t x tau_s on its (d2, d1) pair.
struct UniversalNetwork {
  RingNetwork ring;  // trusted node has a placeholder one-outcome measurement
  DensityOperator rho_tilde;
  int n = 0, d1 = 0, d2 = 0;
  HermitianOperator witness;
  WitnessDecomposition decomp;
  double all_zero_weight = 0.0;
  Matrix all_zero_operator;  // unnormalized trusted-pair operator, all outcomes 0

  Matrix trusted_projector(int s, int t) const;
};

// Builds the ring from the partial-transpose witness of rho_tilde and
// verifies numerically that conditioning on all-zero untrusted outcomes
// leaves the trusted pair holding rho_tilde (factors swapped into the
// trusted slot order).
UniversalNetwork build_universal_network(const DensityOperator& rho_tilde, int n);
// Same wiring and verification, but scoring against a caller-supplied
// witness; rho_tilde may then be separable.
UniversalNetwork build_universal_network(const DensityOperator& rho_tilde, int n,
                                         const HermitianOperator& witness);

// -sum_{s,t} beta(s,t) p(all outcomes 0 | s,t), straight off the simulated
// network. Positive exactly when the witness catches rho_tilde.
double evaluate_universal(const UniversalNetwork& net, const WitnessDecomposition& decomp);
double evaluate_universal(const UniversalNetwork& net);

// Reference value -Tr(W rho_tilde) / (d1^2 d2^(n-1)).
double universal_reference_value(double witness_trace, int d1, int d2, int n);

// -sum beta Tr(tau a) Tr(omega b): the score functional on one product state.
double product_gamma(const WitnessDecomposition& decomp, const DensityOperator& a,
                     const DensityOperator& b);

struct SohsCheckResult {
  double max_value = 0.0;
  int samples = 0;
};

// Max of the score functional over sampled pure product states, sharpened by
// hill climbing. Stays <= 0 up to numerical slack for a valid witness.
SohsCheckResult universal_sohs_check(const WitnessDecomposition& decomp,
                                     int samples = 1000,
                                     std::uint64_t seed = 0x75a11ce5eedULL);

}  // namespace ringsteer
