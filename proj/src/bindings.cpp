#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringsteer/bounds.hpp"
#include "ringsteer/noise.hpp"
#include "ringsteer/selftest.hpp"
#include "ringsteer/universal.hpp"
#include "ringsteer/witness.hpp"

namespace py = pybind11;

namespace {

using namespace ringsteer;

py::dict report_dict(const CertificationReport& rep) {
  py::dict d;
  d["premises_pass"] = rep.premises.pass;
  d["w3"] = rep.premises.w3;
  d["worst_gap"] = rep.premises.worst_gap;
  d["violation"] = rep.premises.violation;
  d["alignment"] = rep.alignment;
  d["unitarity_residual"] = rep.unitarity_residual;
  d["state_distance"] = rep.state_distance;
  d["node1_distance"] = rep.node1_distance;
  d["node2_distance"] = rep.node2_distance;
  d["max_deviation"] = rep.max_deviation;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact simulation and verification suite for no-input steering on ring networks";

  py::class_<CorrelationTable>(m, "CorrelationTable")
      .def_property_readonly("alphabet", &CorrelationTable::alphabet)
      .def_property_readonly("probabilities", &CorrelationTable::probabilities)
      .def_property_readonly("nodes", &CorrelationTable::nodes)
      .def("prob",
           py::overload_cast<const std::vector<int>&>(&CorrelationTable::prob, py::const_),
           py::arg("outcomes"));

  m.def(
      "simulate_ideal", [](int n) { return joint_distribution(ideal_ring(n)); }, py::arg("n"),
      "joint distribution of the all-Bell ring");

  m.def(
      "simulate_noisy",
      [](int n, std::vector<double> source_v, std::vector<double> node_w) {
        VisibilityConfig cfg{std::move(source_v), std::move(node_w)};
        return joint_distribution(noisy_ring(n, cfg));
      },
      py::arg("n"), py::arg("source_v"), py::arg("node_w"),
      "joint distribution with isotropic-noise sources and measurements");

  m.def(
      "witness_value",
      [](const CorrelationTable& t) { return evaluate(WitnessSpec::for_nodes(t.nodes()), t); },
      py::arg("table"), "sum of the table's probabilities over accepted strings");

  m.def(
      "witness_support",
      [](int n) { return WitnessSpec::for_nodes(n).support(); }, py::arg("n"),
      "accepted outcome strings in lexicographic order");

  m.def(
      "tsohs_bound",
      [](int n, int restarts) { return tsohs_value(WitnessSpec::for_nodes(n), restarts).value; },
      py::arg("n"), py::arg("restarts") = 32,
      "restricted-model bound via multistart direct search");

  m.def("grid_bound", &sohs_grid_oracle, py::arg("resolution"),
        "angle-grid version of the product-state bound");

  m.def(
      "threshold",
      [](int n, double tol) { return visibility_threshold(n, tol).threshold; }, py::arg("n"),
      py::arg("tol") = 1e-6, "critical source visibility solving W_n = 1/2");

  m.def(
      "noisy_witness_value",
      [](int n, std::vector<double> source_v, std::vector<double> node_w) {
        return noisy_witness_value(n, VisibilityConfig{std::move(source_v), std::move(node_w)});
      },
      py::arg("n"), py::arg("source_v"), py::arg("node_w"));

  m.def(
      "swap_identity_errors",
      [] {
        const std::array<double, 4> e = bell_swap_identity_errors();
        return std::vector<double>(e.begin(), e.end());
      },
      "residuals of the four basis-swap identities");

  m.def(
      "universal_score",
      [](const Matrix& rho, int d1, int d2, int n, int samples, std::uint64_t seed) {
        const DensityOperator state(HilbertShape({d1, d2}), rho);
        const UniversalNetwork net = build_universal_network(state, n);
        const double s_value = evaluate_universal(net);
        const double witness_trace = real_trace_product(net.witness.matrix(), state.matrix());
        const SohsCheckResult check = universal_sohs_check(net.decomp, samples, seed);
        py::dict d;
        d["S_value"] = s_value;
        d["closed_form"] = universal_reference_value(witness_trace, d1, d2, n);
        d["witness_trace"] = witness_trace;
        d["sohs_check_max"] = check.max_value;
        d["all_zero_weight"] = net.all_zero_weight;
        return d;
      },
      py::arg("rho"), py::arg("d1"), py::arg("d2"), py::arg("n"), py::arg("samples") = 1000,
      py::arg("seed") = 0x75a11ce5eedULL,
      "build the witness network for a bipartite state and score it");

  m.def("certify_ideal", [] { return report_dict(certify_realization(ideal_realization())); });

  m.def(
      "certify",
      [](const Vector& psi, std::vector<Matrix> node1, std::vector<Matrix> node2) {
        Realization r(StateVector(HilbertShape({2, 2}), psi),
                      Measurement(std::move(node1), 1e-10),
                      Measurement(std::move(node2), 1e-10));
        return report_dict(certify_realization(r));
      },
      py::arg("psi"), py::arg("node1"), py::arg("node2"),
      "certify a candidate source state and untrusted measurements");
}
