#pragma once

#include "ringsteer/witness.hpp"

namespace ringsteer {

struct ProductStateParams {
  Eigen::Vector3d bloch1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d bloch2 = Eigen::Vector3d::Zero();
};

struct SohsResult {
  double value = 0.0;
  ProductStateParams argmax;
  std::vector<int> best_response;  // untrusted outcome string attaining value
  long long iterations = 0;        // objective evaluations
  int restarts = 0;
};

// Largest single Bell-cell probability reachable with a product state on the
// trusted pair. Multi-start direct search over the four pure-state angles;
// restarts are seeded deterministically.
SohsResult trusted_cell_max(int restarts = 32);

// Best score a product trusted pair plus a deterministic untrusted response
// string can fake. Response strings are enumerated exhaustively.
SohsResult tsohs_value(const WitnessSpec& w, int restarts = 32);

// Exhaustive angle-grid version of trusted_cell_max, used as a slow
// independent check. resolution >= 8 points per angle.
double sohs_grid_oracle(int resolution);

struct GapReport {
  int n = 0;
  double quantum = 0.0;
  double restricted_bound = 0.0;
  double gap = 0.0;
};

// Ideal ring value vs the product-state bound for the same witness.
GapReport quantum_gap_report(int n);

}  // namespace ringsteer
