#pragma once

#include <array>

#include "ringsteer/network.hpp"

namespace ringsteer {

// The certification hypotheses are violated (non-projective measurement,
// wrong dimensions) as opposed to merely failing certification.
struct HypothesisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Candidate triangle experiment: one shared two-qubit pure source state and
// a projective 4-outcome measurement for each untrusted node. The trusted
// node always measures the Bell basis.
class Realization {
 public:
  Realization(StateVector psi, Measurement node1, Measurement node2);

  const StateVector& psi() const { return psi_; }
  const Measurement& node1() const { return node1_; }
  const Measurement& node2() const { return node2_; }

 private:
  StateVector psi_;
  Measurement node1_, node2_;
};

Realization ideal_realization();

// Rewires r by a 2x2 unitary v on the second wire of the source, with the
// compensating conjugations on the untrusted measurements. Leaves the
// correlation table unchanged.
Realization gauged_realization(const Realization& r, const Matrix& v);

// Triangle with explicit per-source states: source k feeds (slot pairs)
// node0.1/node1.2, node0.2/node2.1, node1.1/node2.2. Exposed so tests can
// check gauge invariance wire by wire.
CorrelationTable realization_distribution(const StateVector& s1, const StateVector& s2,
                                          const StateVector& s3,
                                          const Measurement& trusted,
                                          const Measurement& m1, const Measurement& m2);

struct PremiseReport {
  bool pass = false;
  double w3 = 0.0;
  double worst_gap = 0.0;   // largest deviation from the target cell value
  std::string violation;    // names the worst cell when failing, else empty
};

// Premises on a 3-node table with 4-letter alphabets: every supported string
// at 1/16 within tol, everything else below tol, and the witness sum at 1.
PremiseReport verify_premises(const CorrelationTable& table, double tol = 1e-9);

struct AlignmentResult {
  Matrix unitary;      // u with u f_i = conj(e_i) for the Schmidt pairs (e, f)
  StateVector aligned; // (1 x u) psi
  double distance = 0.0;  // phase-minimized distance from aligned to phi+
};

AlignmentResult extract_alignment(const StateVector& psi);

struct CertificationReport {
  PremiseReport premises;
  Matrix alignment;
  double unitarity_residual = 0.0;
  double state_distance = 0.0;
  std::array<double, 4> node1_distance{};  // per outcome, to the Bell projectors
  std::array<double, 4> node2_distance{};
  double max_deviation = 0.0;
};

// Simulates the triangle, checks the premises, and measures how far the
// realization sits from the Bell-basis reference after Schmidt alignment:
// node 1 conjugated by (1 x u), node 2 by (u x u).
CertificationReport certify_realization(const Realization& r);

}  // namespace ringsteer
