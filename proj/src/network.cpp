#include "ringsteer/network.hpp"

#include <algorithm>
#include <cmath>

namespace ringsteer {

namespace {

const HilbertShape kTwoQubits({2, 2});

constexpr double kTableSumTol = 1e-10;
constexpr double kTableCellSlack = 1e-12;
constexpr double kZeroBranch = 1e-14;

Matrix pair_op_trace(const Matrix& m, const Matrix& op) {
  // out(I,J) = Tr(block_{I,J} op) over trailing-factor blocks
  const int d = static_cast<int>(op.rows());
  const int big = static_cast<int>(m.rows()) / d;
  Matrix out = Matrix::Zero(big, big);
  for (int bj = 0; bj < big; ++bj)
    for (int b = 0; b < d; ++b) {
      const auto col = m.col(static_cast<Eigen::Index>(bj) * d + b);
      for (int a = 0; a < d; ++a) {
        const complexd w = op(b, a);
        if (w == complexd(0.0, 0.0)) continue;
        for (int bi = 0; bi < big; ++bi)
          out(bi, bj) += w * col[static_cast<Eigen::Index>(bi) * d + a];
      }
    }
  return out;
}

// v viewed as (L, d, R); out[l,a,r] = sum_b P(a,b) v[l,b,r]
Vector apply_pair_op(const Vector& v, const Matrix& p, long long left,
                     long long right) {
  const int d = static_cast<int>(p.rows());
  Vector out = Vector::Zero(v.size());
  for (long long l = 0; l < left; ++l) {
    const long long base = l * d * right;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const complexd w = p(a, b);
        if (w == complexd(0.0, 0.0)) continue;
        const long long src = base + b * right;
        const long long dst = base + a * right;
        for (long long r = 0; r < right; ++r) out[dst + r] += w * v[src + r];
      }
  }
  return out;
}

long long radix_index(const std::vector<int>& alphabet,
                      const std::vector<int>& outcomes) {
  long long idx = 0;
  for (size_t i = 0; i < alphabet.size(); ++i)
    idx = idx * alphabet[i] + outcomes[i];
  return idx;
}

std::vector<int> node_order_trusted_first(int n, int trusted) {
  std::vector<int> order{trusted};
  for (int i = 0; i < n; ++i)
    if (i != trusted) order.push_back(i);
  return order;
}

// slot permutation realizing a node-block reordering
std::vector<int> slot_order_of_nodes(const std::vector<int>& node_order) {
  std::vector<int> slots;
  for (int i : node_order) {
    slots.push_back(2 * i);
    slots.push_back(2 * i + 1);
  }
  return slots;
}

}  // namespace

StateVector bell_state(int label) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (label) {
    case 0: v[0] = s; v[3] = s; break;   // phi+
    case 1: v[1] = s; v[2] = s; break;   // psi+
    case 2: v[0] = s; v[3] = -s; break;  // phi-
    case 3: v[1] = s; v[2] = -s; break;  // psi-
    default: throw std::invalid_argument("bell_state: label must be 0..3");
  }
  return StateVector(kTwoQubits, std::move(v));
}

const char* bell_name(int label) {
  switch (label) {
    case 0: return "phi+";
    case 1: return "psi+";
    case 2: return "phi-";
    case 3: return "psi-";
    default: throw std::invalid_argument("bell_name: label must be 0..3");
  }
}

Measurement::Measurement(std::vector<Matrix> operators, double completeness_tol)
    : ops_(std::move(operators)) {
  if (ops_.empty()) throw std::invalid_argument("Measurement: no operators");
  const Eigen::Index d = ops_[0].rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& m : ops_) {
    if (m.rows() != d || m.cols() != d)
      throw std::invalid_argument("Measurement: operator dims differ");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > completeness_tol)
      throw std::invalid_argument("Measurement: operator not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol)
      throw std::invalid_argument("Measurement: operator not PSD within 1e-10");
    sum += m;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > completeness_tol)
    throw std::invalid_argument("Measurement: operators do not sum to identity");
}

bool Measurement::projective(double tol) const {
  for (int a = 0; a < outcomes(); ++a)
    for (int b = 0; b < outcomes(); ++b) {
      const Matrix want = (a == b) ? ops_[a] : Matrix::Zero(dim(), dim());
      if ((ops_[a] * ops_[b] - want).cwiseAbs().maxCoeff() > tol) return false;
    }
  return true;
}

Measurement bell_basis() {
  std::vector<Matrix> ops;
  for (int a = 0; a < 4; ++a) {
    const StateVector psi = bell_state(a);
    ops.push_back(psi.amplitudes() * psi.amplitudes().adjoint());
  }
  return Measurement(std::move(ops));
}

Measurement computational_basis(int dim) {
  if (dim < 1) throw std::invalid_argument("computational_basis: dim < 1");
  std::vector<Matrix> ops;
  for (int j = 0; j < dim; ++j) {
    Matrix p = Matrix::Zero(dim, dim);
    p(j, j) = 1.0;
    ops.push_back(std::move(p));
  }
  return Measurement(std::move(ops));
}

Measurement binary_projector_measurement(const Matrix& p) {
  if (p.rows() != p.cols())
    throw std::invalid_argument("binary_projector_measurement: not square");
  Matrix rest = Matrix::Identity(p.rows(), p.cols()) - p;
  return Measurement({p, std::move(rest)});
}

CorrelationTable::CorrelationTable(std::vector<int> alphabet, std::vector<double> p)
    : alphabet_(std::move(alphabet)), p_(std::move(p)) {
  if (alphabet_.empty())
    throw std::invalid_argument("CorrelationTable: no nodes");
  if (nodes() > kMaxNodes)
    throw std::invalid_argument(
        "CorrelationTable: dense storage is capped at 8 nodes; larger tables "
        "would not fit the memory budget");
  long long cells = 1;
  for (int a : alphabet_) {
    if (a < 1 || a > 10)
      throw std::invalid_argument("CorrelationTable: alphabet size out of range");
    cells *= a;
  }
  if (cells > 1 << 20)
    throw std::invalid_argument(
        "CorrelationTable: cell count exceeds the memory budget");
  if (static_cast<long long>(p_.size()) != cells)
    throw std::invalid_argument("CorrelationTable: cell count mismatch");
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= -kTableCellSlack && x <= 1.0 + kTableCellSlack))
      throw std::invalid_argument("CorrelationTable: probability out of range: " +
                                  std::to_string(x));
    sum += x;
  }
  if (std::abs(sum - 1.0) > kTableSumTol)
    throw std::invalid_argument("CorrelationTable: probabilities sum to " +
                                std::to_string(sum));
}

long long CorrelationTable::index(const std::vector<int>& outcomes) const {
  if (static_cast<int>(outcomes.size()) != nodes())
    throw std::invalid_argument("CorrelationTable: outcome count mismatch");
  long long idx = 0;
  for (int i = 0; i < nodes(); ++i) {
    if (outcomes[i] < 0 || outcomes[i] >= alphabet_[i])
      throw std::invalid_argument("CorrelationTable: outcome out of range");
    idx = idx * alphabet_[i] + outcomes[i];
  }
  return idx;
}

std::vector<int> CorrelationTable::outcomes(long long index) const {
  if (index < 0 || index >= cells())
    throw std::invalid_argument("CorrelationTable: index out of range");
  std::vector<int> out(nodes());
  for (int i = nodes() - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % alphabet_[i]);
    index /= alphabet_[i];
  }
  return out;
}

RingNetwork::RingNetwork(std::vector<DensityOperator> sources,
                         std::vector<Measurement> measurements, int trusted)
    : sources_(std::move(sources)),
      measurements_(std::move(measurements)),
      trusted_(trusted) {
  const int n = nodes();
  if (n < 2) throw std::invalid_argument("RingNetwork: need at least 2 nodes");
  if (measurements_.size() != sources_.size())
    throw std::invalid_argument("RingNetwork: one measurement per node required");
  if (trusted_ < 0 || trusted_ >= n)
    throw std::invalid_argument("RingNetwork: trusted node out of range");
  for (const auto& s : sources_)
    if (s.shape().factors() != 2)
      throw std::invalid_argument("RingNetwork: sources must be bipartite");
  for (int i = 0; i < n; ++i) {
    // node i holds the second half of source i-1 and the first half of source i
    const int d_in = sources_[(i + n - 1) % n].shape().dim(1);
    const int d_out = sources_[i].shape().dim(0);
    if (measurements_[i].dim() != d_in * d_out)
      throw std::invalid_argument(
          "RingNetwork: measurement dim mismatch at node " + std::to_string(i));
  }
}

std::vector<int> RingNetwork::slot_dims() const {
  const int n = nodes();
  std::vector<int> dims(2 * n);
  for (int i = 0; i < n; ++i) {
    dims[2 * i] = sources_[(i + n - 1) % n].shape().dim(1);  // A_i^1
    dims[2 * i + 1] = sources_[i].shape().dim(0);            // A_i^2
  }
  return dims;
}

std::vector<int> RingNetwork::node_dims() const {
  const auto slots = slot_dims();
  std::vector<int> out(nodes());
  for (int i = 0; i < nodes(); ++i) out[i] = slots[2 * i] * slots[2 * i + 1];
  return out;
}

RingNetwork ideal_ring(int n) {
  std::vector<DensityOperator> sources(n, pure_density(bell_state(0)));
  std::vector<Measurement> ms(n, bell_basis());
  return RingNetwork(std::move(sources), std::move(ms), 0);
}

DensityOperator build_ring_state(const RingNetwork& net) {
  const int n = net.nodes();
  Matrix m = net.source(0).matrix();
  std::vector<int> dims = net.source(0).shape().dims();
  for (int i = 1; i < n; ++i) {
    m = kron(m, net.source(i).matrix());
    for (int d : net.source(i).shape().dims()) dims.push_back(d);
  }
  const HilbertShape source_shape{dims};

  // source-order slot list: source i covers (A_i^2, A_{i+1}^1)
  std::vector<int> slot_of_pos(2 * n);
  for (int i = 0; i < n; ++i) {
    slot_of_pos[2 * i] = 2 * i + 1;
    slot_of_pos[2 * i + 1] = (2 * (i + 1)) % (2 * n);
  }
  std::vector<int> order(2 * n);  // canonical position k <- source-order position
  for (int pos = 0; pos < 2 * n; ++pos) order[slot_of_pos[pos]] = pos;

  Matrix canonical = permute_subsystems(m, source_shape, order);
  return DensityOperator::unchecked(HilbertShape(net.slot_dims()),
                                    std::move(canonical));
}

std::vector<std::pair<std::vector<int>, Matrix>> contract_tail_nodes(
    const Matrix& global, const std::vector<int>& pair_dims,
    const std::vector<Measurement>& tail) {
  const int n = static_cast<int>(pair_dims.size());
  if (static_cast<int>(tail.size()) != n - 1)
    throw std::invalid_argument("contract_tail_nodes: need n-1 measurements");
  long long total = 1;
  for (int d : pair_dims) total *= d;
  if (global.rows() != total || global.cols() != total)
    throw std::invalid_argument("contract_tail_nodes: state dim mismatch");
  for (int k = 0; k < n - 1; ++k)
    if (tail[k].dim() != pair_dims[k + 1])
      throw std::invalid_argument("contract_tail_nodes: measurement dim mismatch");

  std::vector<std::pair<std::vector<int>, Matrix>> out;
  std::vector<int> prefix;
  // contract the trailing node first, recursing towards node 1
  std::function<void(const Matrix&, int)> walk = [&](const Matrix& m, int node) {
    if (node == 0) {
      std::vector<int> outcomes(prefix.rbegin(), prefix.rend());
      out.emplace_back(std::move(outcomes), m);
      return;
    }
    const Measurement& meas = tail[node - 1];
    for (int a = 0; a < meas.outcomes(); ++a) {
      prefix.push_back(a);
      walk(pair_op_trace(m, meas.op(a)), node - 1);
      prefix.pop_back();
    }
  };
  walk(global, n - 1);

  // branches come out with the last node's outcome varying slowest; reorder
  // to ascending-node lexicographic order
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

CorrelationTable measure_all_nodes(const Matrix& global,
                                   const std::vector<int>& pair_dims,
                                   const std::vector<Measurement>& per_node) {
  if (per_node.size() != pair_dims.size())
    throw std::invalid_argument("measure_all_nodes: one measurement per node");
  std::vector<Measurement> tail(per_node.begin() + 1, per_node.end());
  auto branches = contract_tail_nodes(global, pair_dims, tail);

  std::vector<int> alphabet;
  for (const auto& m : per_node) alphabet.push_back(m.outcomes());
  long long cells = 1;
  for (int a : alphabet) cells *= a;
  std::vector<double> p(cells, 0.0);

  long long idx = 0;
  const int a0 = per_node[0].outcomes();
  for (const auto& [outcomes, op] : branches) {
    (void)outcomes;
    for (int a = 0; a < a0; ++a) {
      // branches are sorted, and the trusted outcome is the slowest digit
      const long long cell = static_cast<long long>(a) * (cells / a0) + idx;
      p[cell] = (per_node[0].op(a).transpose().cwiseProduct(op)).sum().real();
    }
    ++idx;
  }
  return CorrelationTable(std::move(alphabet), std::move(p));
}

namespace {

// Global state with the trusted node's pair moved to the front and the node
// outcome order that produces.
struct TrustedFirstState {
  DensityOperator state;
  std::vector<int> pair_dims;     // trusted first
  std::vector<int> node_order;    // node_order[k] = original node at position k
};

TrustedFirstState trusted_first_state(const RingNetwork& net) {
  DensityOperator rho = build_ring_state(net);
  const auto node_order = node_order_trusted_first(net.nodes(), net.trusted());
  std::vector<int> pair_dims;
  const auto all_dims = net.node_dims();
  for (int i : node_order) pair_dims.push_back(all_dims[i]);
  if (net.trusted() != 0)
    rho = permute_subsystems(rho, slot_order_of_nodes(node_order));
  return {std::move(rho), std::move(pair_dims), node_order};
}

}  // namespace

CorrelationTable joint_distribution(const RingNetwork& net) {
  const auto tf = trusted_first_state(net);
  std::vector<Measurement> per_node;
  for (int i : tf.node_order) per_node.push_back(net.measurement(i));
  CorrelationTable permuted =
      measure_all_nodes(tf.state.matrix(), tf.pair_dims, per_node);
  if (net.trusted() == 0) return permuted;

  // map outcomes back to original node positions
  std::vector<int> alphabet(net.nodes());
  for (int k = 0; k < net.nodes(); ++k)
    alphabet[tf.node_order[k]] = permuted.alphabet()[k];
  std::vector<double> p(permuted.cells(), 0.0);
  for (long long i = 0; i < permuted.cells(); ++i) {
    const auto perm_out = permuted.outcomes(i);
    std::vector<int> orig(net.nodes());
    for (int k = 0; k < net.nodes(); ++k) orig[tf.node_order[k]] = perm_out[k];
    p[radix_index(alphabet, orig)] = permuted.prob(i);
  }
  return CorrelationTable(std::move(alphabet), std::move(p));
}

std::vector<TrustedBranch> untrusted_branches(const RingNetwork& net) {
  const auto tf = trusted_first_state(net);
  std::vector<Measurement> tail;
  for (size_t k = 1; k < tf.node_order.size(); ++k)
    tail.push_back(net.measurement(tf.node_order[k]));
  auto raw = contract_tail_nodes(tf.state.matrix(), tf.pair_dims, tail);

  // permuted tail order is ascending original order with trusted removed, so
  // outcome vectors are already in ascending untrusted-node order
  std::vector<TrustedBranch> out;
  out.reserve(raw.size());
  for (auto& [outcomes, op] : raw) {
    TrustedBranch b;
    b.outcomes = outcomes;
    b.weight = op.trace().real();
    b.unnormalized = std::move(op);
    out.push_back(std::move(b));
  }
  return out;
}

ConditionalState conditional_trusted_state(const RingNetwork& net,
                                           const std::vector<int>& untrusted_outcomes) {
  if (static_cast<int>(untrusted_outcomes.size()) != net.nodes() - 1)
    throw std::invalid_argument(
        "conditional_trusted_state: need one outcome per untrusted node");
  const auto branches = untrusted_branches(net);
  for (const auto& b : branches) {
    if (b.outcomes != untrusted_outcomes) continue;
    ConditionalState cs;
    cs.weight = b.weight;
    if (b.weight > kZeroBranch) {
      const auto slots = net.slot_dims();
      const HilbertShape pair_shape(
          {slots[2 * net.trusted()], slots[2 * net.trusted() + 1]});
      Matrix m = b.unnormalized / b.weight;
      m = (m + m.adjoint().eval()) / 2.0;  // scrub contraction roundoff
      cs.state = DensityOperator::unchecked(pair_shape, std::move(m));
    } else {
      cs.weight = std::max(cs.weight, 0.0);
    }
    return cs;
  }
  throw std::invalid_argument("conditional_trusted_state: outcome out of range");
}

CorrelationTable joint_distribution_swapchain(const RingNetwork& net) {
  const int n = net.nodes();
  // pure sources only
  std::vector<Vector> source_vecs;
  for (int i = 0; i < n; ++i) {
    const DensityOperator& rho = net.source(i);
    if (std::abs(rho.purity() - 1.0) > 1e-10)
      throw std::invalid_argument(
          "joint_distribution_swapchain: sources must be pure");
    EigResult es = eig_hermitian(rho.matrix());
    Vector v = es.vectors.col(rho.dim() - 1);
    source_vecs.push_back(v / v.norm());
  }
  for (int i = 0; i < n; ++i)
    if (!net.measurement(i).projective())
      throw std::invalid_argument(
          "joint_distribution_swapchain: measurements must be projective");

  // global pure vector in canonical slot order
  Vector psi = source_vecs[0];
  std::vector<int> dims = net.source(0).shape().dims();
  for (int i = 1; i < n; ++i) {
    psi = kron(psi, source_vecs[i]);
    const auto& sd = net.source(i).shape().dims();
    dims.insert(dims.end(), sd.begin(), sd.end());
  }
  std::vector<int> slot_of_pos(2 * n);
  for (int i = 0; i < n; ++i) {
    slot_of_pos[2 * i] = 2 * i + 1;
    slot_of_pos[2 * i + 1] = (2 * (i + 1)) % (2 * n);
  }
  std::vector<int> order(2 * n);
  for (int pos = 0; pos < 2 * n; ++pos) order[slot_of_pos[pos]] = pos;
  psi = permute_subsystems(psi, HilbertShape(dims), order);

  const auto pair_dims = net.node_dims();
  std::vector<long long> left(n, 1), right(n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < i) left[i] *= pair_dims[j];
      if (j > i) right[i] *= pair_dims[j];
    }

  std::vector<int> alphabet;
  for (int i = 0; i < n; ++i) alphabet.push_back(net.measurement(i).outcomes());
  long long cells = 1;
  for (int a : alphabet) cells *= a;
  std::vector<double> p(cells, 0.0);

  const int t = net.trusted();
  std::vector<int> untrusted;
  for (int i = 0; i < n; ++i)
    if (i != t) untrusted.push_back(i);

  std::vector<int> outcome(n, 0);
  // project node by node down each untrusted branch, trusted node last
  std::function<void(const Vector&, size_t)> walk = [&](const Vector& v, size_t k) {
    if (k == untrusted.size()) {
      for (int a = 0; a < alphabet[t]; ++a) {
        outcome[t] = a;
        const Vector w =
            apply_pair_op(v, net.measurement(t).op(a), left[t], right[t]);
        p[radix_index(alphabet, outcome)] = w.squaredNorm();
      }
      return;
    }
    const int node = untrusted[k];
    for (int a = 0; a < alphabet[node]; ++a) {
      outcome[node] = a;
      Vector w = apply_pair_op(v, net.measurement(node).op(a), left[node],
                               right[node]);
      const double nrm2 = w.squaredNorm();
      if (nrm2 <= 0.0) {
        // dead branch: every completion has probability zero
        continue;
      }
      walk(w, k + 1);
    }
  };
  walk(psi, 0);
  return CorrelationTable(std::move(alphabet), std::move(p));
}

bool is_ppt_separable_2x2(const DensityOperator& rho) {
  if (rho.shape().dims() != std::vector<int>{2, 2})
    throw std::invalid_argument("is_ppt_separable_2x2: need a 2x2 bipartition");
  const Matrix pt = partial_transpose(rho.matrix(), rho.shape(), 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -kPsdTol;
}

std::array<double, 4> bell_swap_identity_errors() {
  // Signed Bell pairs (first on qubits 1,4, second on 2,3) reproducing
  // phi_0 x phi_b; the pair sets mirror the witness refinement rows.
  struct Term {
    int k, l, sign;
  };
  static constexpr Term kTerms[4][4] = {
      {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}},
      {{1, 0, 1}, {0, 1, 1}, {2, 3, 1}, {3, 2, 1}},
      {{2, 0, 1}, {0, 2, 1}, {1, 3, -1}, {3, 1, -1}},
      {{3, 0, 1}, {0, 3, -1}, {1, 2, 1}, {2, 1, -1}},
  };
  const HilbertShape four({2, 2, 2, 2});
  std::array<double, 4> errors{};
  for (int b = 0; b < 4; ++b) {
    const Vector lhs = kron(bell_state(0), bell_state(b)).amplitudes();
    Vector rhs = Vector::Zero(16);
    for (const Term& t : kTerms[b])
      rhs += static_cast<double>(t.sign) *
             kron(bell_state(t.k), bell_state(t.l)).amplitudes();
    rhs /= 2.0;
    // rhs factors are ordered (1,4,2,3); bring them back to (1,2,3,4).
    rhs = permute_subsystems(rhs, four, {0, 2, 3, 1});
    errors[b] = (lhs - rhs).norm();
  }
  return errors;
}

}  // namespace ringsteer
