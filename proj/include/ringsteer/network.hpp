#pragma once

#include <array>
#include <optional>
#include <utility>

#include "ringsteer/qcore.hpp"

namespace ringsteer {

// Bell states on two qubits with the outcome labeling used everywhere in
// this codebase: 0 = phi+, 1 = psi+, 2 = phi-, 3 = psi-.
StateVector bell_state(int label);
const char* bell_name(int label);

class Measurement {
 public:
  // Validates: equal square dims, Hermitian and summing to identity within
  // completeness_tol, PSD within 1e-10. The default suits operators built in
  // process; loosen it for externally supplied ones.
  explicit Measurement(std::vector<Matrix> operators,
                       double completeness_tol = kHermTol);

  int dim() const { return static_cast<int>(ops_[0].rows()); }
  int outcomes() const { return static_cast<int>(ops_.size()); }
  const Matrix& op(int a) const { return ops_.at(a); }
  const std::vector<Matrix>& ops() const { return ops_; }

  // All operators are orthogonal projectors.
  bool projective(double tol = kPsdTol) const;

 private:
  std::vector<Matrix> ops_;
};

Measurement bell_basis();
// Product projectors |j><j| on a space of the given dimension.
Measurement computational_basis(int dim);
// {P, 1-P} for a projector P.
Measurement binary_projector_measurement(const Matrix& p);

// Dense joint outcome distribution over nodes, node 0's outcome slowest.
class CorrelationTable {
 public:
  static constexpr int kMaxNodes = 8;

  CorrelationTable(std::vector<int> alphabet, std::vector<double> p);

  int nodes() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<int>& alphabet() const { return alphabet_; }
  long long cells() const { return static_cast<long long>(p_.size()); }
  const std::vector<double>& probabilities() const { return p_; }

  long long index(const std::vector<int>& outcomes) const;
  std::vector<int> outcomes(long long index) const;
  double prob(const std::vector<int>& outcomes) const { return p_[index(outcomes)]; }
  double prob(long long index) const { return p_.at(index); }

 private:
  std::vector<int> alphabet_;
  std::vector<double> p_;
};

// n nodes on a ring; source i sits on the slot pair (A_i^2, A_{i+1}^1),
// indices wrapping, so node i measures the pair (A_i^1, A_i^2) and the
// canonical slot order is A_1^1, A_1^2, A_2^1, ..., A_n^2.
class RingNetwork {
 public:
  RingNetwork(std::vector<DensityOperator> sources,
              std::vector<Measurement> measurements, int trusted = 0);

  int nodes() const { return static_cast<int>(sources_.size()); }
  int trusted() const { return trusted_; }
  const DensityOperator& source(int i) const { return sources_.at(i); }
  const Measurement& measurement(int i) const { return measurements_.at(i); }

  // Dims of the 2n slots in canonical order.
  std::vector<int> slot_dims() const;
  // Total pair dim of each node.
  std::vector<int> node_dims() const;

 private:
  std::vector<DensityOperator> sources_;
  std::vector<Measurement> measurements_;
  int trusted_;
};

// All sources phi+, all nodes measuring the Bell basis.
RingNetwork ideal_ring(int n);

// Tensor the sources in source order, then permute slots to canonical order.
DensityOperator build_ring_state(const RingNetwork& net);

// Exact distribution via operator contraction of the global density matrix.
CorrelationTable joint_distribution(const RingNetwork& net);

// Independent route: sequential projections on the global pure vector,
// never materializing a density matrix. Requires pure sources and projective
// measurements and refuses anything else.
CorrelationTable joint_distribution_swapchain(const RingNetwork& net);

struct TrustedBranch {
  std::vector<int> outcomes;  // untrusted outcomes, ascending node order
  double weight;
  Matrix unnormalized;  // operator left on the trusted pair
};

// One branch per untrusted outcome combination.
std::vector<TrustedBranch> untrusted_branches(const RingNetwork& net);

struct ConditionalState {
  double weight = 0.0;
  std::optional<DensityOperator> state;  // empty when the branch has zero weight
};

ConditionalState conditional_trusted_state(const RingNetwork& net,
                                           const std::vector<int>& untrusted_outcomes);

// Peres criterion, decisive for a pair of qubits: PPT iff separable.
bool is_ppt_separable_2x2(const DensityOperator& rho);

// Residuals of the four basis-swap identities on qubits 1..4: phi_0 on (1,2)
// times phi_b on (3,4) re-expanded as signed Bell pairs on (1,4) and (2,3).
// Entry b is the 2-norm of lhs minus rhs; all four are zero analytically.
std::array<double, 4> bell_swap_identity_errors();

// Contraction core shared with the self-testing module: contract per-node
// measurements on consecutive slot pairs from the last node down to node 1,
// leaving node 0 open. tail[k] belongs to node k+1.
std::vector<std::pair<std::vector<int>, Matrix>> contract_tail_nodes(
    const Matrix& global, const std::vector<int>& pair_dims,
    const std::vector<Measurement>& tail);

// Full joint table for per-node measurements on consecutive slot pairs.
CorrelationTable measure_all_nodes(const Matrix& global,
                                   const std::vector<int>& pair_dims,
                                   const std::vector<Measurement>& per_node);

}  // namespace ringsteer
