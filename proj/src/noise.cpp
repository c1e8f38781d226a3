#include "ringsteer/noise.hpp"

namespace ringsteer {

DensityOperator werner_state(double v) {
  if (v < 0.0 || v > 1.0)
    throw std::invalid_argument("werner_state: visibility must be in [0, 1]");
  const Vector phi = bell_state(0).amplitudes();
  Matrix m = v * (phi * phi.adjoint()) +
             (1.0 - v) / 4.0 * Matrix::Identity(4, 4);
  return DensityOperator(HilbertShape({2, 2}), std::move(m));
}

Measurement noisy_bell_measurement(double w) {
  if (w < 0.0 || w > 1.0)
    throw std::invalid_argument("noisy_bell_measurement: weight must be in [0, 1]");
  const Measurement ideal = bell_basis();
  std::vector<Matrix> ops;
  for (int a = 0; a < 4; ++a)
    ops.push_back(w * ideal.op(a) + (1.0 - w) / 4.0 * Matrix::Identity(4, 4));
  return Measurement(std::move(ops));
}

RingNetwork noisy_ring(int n, const VisibilityConfig& cfg) {
  if (n < 2) throw std::invalid_argument("noisy_ring: need at least 2 nodes");
  if (static_cast<int>(cfg.source_v.size()) != n)
    throw std::invalid_argument("noisy_ring: need one visibility per source");
  if (static_cast<int>(cfg.node_w.size()) != n - 1)
    throw std::invalid_argument(
        "noisy_ring: need one measurement weight per untrusted node");
  std::vector<DensityOperator> sources;
  for (double v : cfg.source_v) sources.push_back(werner_state(v));
  std::vector<Measurement> ms;
  ms.push_back(bell_basis());
  for (double w : cfg.node_w) ms.push_back(noisy_bell_measurement(w));
  return RingNetwork(std::move(sources), std::move(ms), 0);
}

double noisy_witness_value(int n, const VisibilityConfig& cfg) {
  return evaluate(WitnessSpec::for_nodes(n), joint_distribution(noisy_ring(n, cfg)));
}

ThresholdResult visibility_threshold(int n, double tol) {
  if (tol <= 0) throw std::invalid_argument("visibility_threshold: bad tolerance");
  VisibilityConfig cfg{std::vector<double>(n, 1.0),
                       std::vector<double>(n - 1, 1.0)};
  auto value_at = [&](double v) {
    cfg.source_v[0] = v;
    return noisy_witness_value(n, cfg);
  };
  double lo = 0.0, hi = 1.0;
  if (value_at(lo) >= 0.5 || value_at(hi) <= 0.5)
    throw NumericError("visibility_threshold: 1/2 is not bracketed on [0, 1]");
  ThresholdResult out;
  out.n = n;
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2;
    (value_at(mid) < 0.5 ? lo : hi) = mid;
    ++out.iterations;
  }
  out.threshold = (lo + hi) / 2;
  return out;
}

}  // namespace ringsteer
