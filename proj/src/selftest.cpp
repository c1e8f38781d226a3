#include "ringsteer/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ringsteer/witness.hpp"

namespace ringsteer {
namespace {

constexpr double kHypothesisTol = 1e-10;

void require_two_qubits(const StateVector& psi, const char* what) {
  if (psi.shape().factors() != 2 || psi.shape().dim(0) != 2 || psi.shape().dim(1) != 2) {
    std::ostringstream msg;
    msg << what << " must be a state of two qubits";
    throw HypothesisError(msg.str());
  }
}

void require_bell_like(const Measurement& m, const char* who) {
  std::ostringstream msg;
  if (m.dim() != 4 || m.outcomes() != 4) {
    msg << who << " measurement must have 4 outcomes on a 4-dimensional pair";
    throw HypothesisError(msg.str());
  }
  if (!m.projective(kHypothesisTol)) {
    msg << who << " measurement is not projective within 1e-10";
    throw HypothesisError(msg.str());
  }
}

Matrix conjugate_each(const Matrix& u, const Matrix& op) { return u * op * u.adjoint(); }

Measurement conjugated(const Measurement& m, const Matrix& u) {
  std::vector<Matrix> ops;
  ops.reserve(m.outcomes());
  for (int a = 0; a < m.outcomes(); ++a) ops.push_back(conjugate_each(u, m.op(a)));
  return Measurement(std::move(ops));
}

}  // namespace

Realization::Realization(StateVector psi, Measurement node1, Measurement node2)
    : psi_(std::move(psi)), node1_(std::move(node1)), node2_(std::move(node2)) {
  require_two_qubits(psi_, "source");
  require_bell_like(node1_, "node 1");
  require_bell_like(node2_, "node 2");
}

Realization ideal_realization() {
  return Realization(bell_state(0), bell_basis(), bell_basis());
}

Realization gauged_realization(const Realization& r, const Matrix& v) {
  if (v.rows() != 2 || v.cols() != 2 ||
      (v * v.adjoint() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kHypothesisTol)
    throw HypothesisError("gauge must be a 2x2 unitary");
  const Matrix iv = kron(Matrix::Identity(2, 2), v);
  const Matrix vv = kron(v, v);
  StateVector psi(r.psi().shape(), iv * r.psi().amplitudes());
  return Realization(std::move(psi), conjugated(r.node1(), iv), conjugated(r.node2(), vv));
}

CorrelationTable realization_distribution(const StateVector& s1, const StateVector& s2,
                                          const StateVector& s3,
                                          const Measurement& trusted,
                                          const Measurement& m1, const Measurement& m2) {
  require_two_qubits(s1, "source 1");
  require_two_qubits(s2, "source 2");
  require_two_qubits(s3, "source 3");
  require_bell_like(m1, "node 1");
  require_bell_like(m2, "node 2");
  if (trusted.dim() != 4) throw HypothesisError("trusted measurement must act on a qubit pair");

  // Source factors land on slots (0.1, 1.2), (0.2, 2.1), (1.1, 2.2); reorder
  // to per-node pairs 0.1, 0.2, 1.1, 1.2, 2.1, 2.2.
  const StateVector product = kron(kron(s1, s2), s3);
  const StateVector wired = permute_subsystems(product, {0, 2, 4, 1, 3, 5});
  const Matrix global = wired.amplitudes() * wired.amplitudes().adjoint();
  return measure_all_nodes(global, {4, 4, 4}, {trusted, m1, m2});
}

PremiseReport verify_premises(const CorrelationTable& table, double tol) {
  if (table.nodes() != 3)
    throw std::invalid_argument("premise check expects a 3-node table");
  for (int a : table.alphabet())
    if (a != 4) throw std::invalid_argument("premise check expects 4-outcome nodes");

  const WitnessSpec spec = WitnessSpec::for_nodes(3);
  PremiseReport report;
  report.pass = true;
  for (long long i = 0; i < table.cells(); ++i) {
    const double target = spec.accepts(i) ? 1.0 / 16.0 : 0.0;
    const double gap = std::abs(table.prob(i) - target);
    if (gap > report.worst_gap) {
      report.worst_gap = gap;
      if (gap > tol) {
        const std::vector<int> cell = table.outcomes(i);
        std::ostringstream msg;
        msg << "p(" << cell[0] << "," << cell[1] << "," << cell[2] << ") = "
            << table.prob(i) << ", expected " << target;
        report.violation = msg.str();
      }
    }
    if (gap > tol) report.pass = false;
  }
  report.w3 = evaluate(spec, table);
  if (std::abs(report.w3 - 1.0) > tol) {
    report.pass = false;
    if (report.violation.empty()) {
      std::ostringstream msg;
      msg << "witness sum = " << report.w3 << ", expected 1";
      report.violation = msg.str();
    }
  }
  return report;
}

AlignmentResult extract_alignment(const StateVector& psi) {
  require_two_qubits(psi, "source");
  const SchmidtResult sd = schmidt_decompose(psi);
  // u f_i = conj(e_i) maps the second-wire Schmidt basis onto the conjugated
  // first-wire one; for a degenerate spectrum any consistent pairing aligns
  // a maximally entangled state exactly, so the decomposition's deterministic
  // phase convention is the tie-break.
  const Matrix unitary = sd.left.conjugate() * sd.right.adjoint();
  Vector rotated = kron(Matrix::Identity(2, 2), unitary) * psi.amplitudes();
  StateVector aligned(psi.shape(), std::move(rotated));
  const double distance =
      phase_distance(aligned.amplitudes(), bell_state(0).amplitudes());
  return AlignmentResult{unitary, std::move(aligned), distance};
}

CertificationReport certify_realization(const Realization& r) {
  CertificationReport report;
  const CorrelationTable table = realization_distribution(
      r.psi(), r.psi(), r.psi(), bell_basis(), r.node1(), r.node2());
  report.premises = verify_premises(table);

  const AlignmentResult align = extract_alignment(r.psi());
  report.alignment = align.unitary;
  report.unitarity_residual =
      (align.unitary * align.unitary.adjoint() - Matrix::Identity(2, 2)).norm();
  report.state_distance = align.distance;

  const Matrix c1 = kron(Matrix::Identity(2, 2), align.unitary);
  const Matrix c2 = kron(align.unitary, align.unitary);
  const Measurement reference = bell_basis();
  double worst = report.state_distance;
  for (int a = 0; a < 4; ++a) {
    report.node1_distance[a] = (conjugate_each(c1, r.node1().op(a)) - reference.op(a)).norm();
    report.node2_distance[a] = (conjugate_each(c2, r.node2().op(a)) - reference.op(a)).norm();
    worst = std::max({worst, report.node1_distance[a], report.node2_distance[a]});
  }
  report.max_deviation = worst;
  return report;
}

}  // namespace ringsteer
