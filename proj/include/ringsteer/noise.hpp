#pragma once

#include "ringsteer/witness.hpp"

namespace ringsteer {

// v |phi+><phi+| + (1-v)/4 * identity, entangled precisely for v > 1/3.
DensityOperator werner_state(double v);

// Bell measurement mixed with white noise: w N_a + (1-w)/4 * identity.
Measurement noisy_bell_measurement(double w);

struct VisibilityConfig {
  std::vector<double> source_v;  // one per source
  std::vector<double> node_w;    // one per untrusted node (nodes 2..n)
};

// Werner sources, noisy Bell measurements at the untrusted nodes, perfect
// Bell measurement at the trusted node.
RingNetwork noisy_ring(int n, const VisibilityConfig& cfg);

double noisy_witness_value(int n, const VisibilityConfig& cfg);

struct ThresholdResult {
  int n = 0;
  double threshold = 0.0;
  int iterations = 0;
};

// Bisection on a single knob: source 1's visibility, everything else ideal.
// Solves W_n(v) = 1/2 to the given tolerance.
ThresholdResult visibility_threshold(int n, double tol = 1e-6);

}  // namespace ringsteer
