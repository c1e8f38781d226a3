#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ringsteer/bounds.hpp"
#include "ringsteer/io.hpp"
#include "ringsteer/noise.hpp"
#include "ringsteer/selftest.hpp"
#include "ringsteer/universal.hpp"
#include "ringsteer/witness.hpp"

namespace {

using nlohmann::json;
using namespace ringsteer;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_file(out_path, content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_double_list(const std::string& text, const std::string& ctx) {
  std::vector<double> out;
  size_t start = 0;
  while (true) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(start, comma - start);
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(ctx + ": not a number: '" + tok + "'");
    }
    if (comma == text.size()) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> broadcast(std::vector<double> values, int count, const std::string& ctx) {
  if (static_cast<int>(values.size()) == 1) values.assign(count, values[0]);
  if (static_cast<int>(values.size()) != count)
    throw ParseError(ctx + ": expected 1 or " + std::to_string(count) + " values");
  return values;
}

RingNetwork strategy_network(const std::string& strategy, int n) {
  if (strategy == "ideal") return ideal_ring(n);
  if (strategy.rfind("werner:", 0) == 0) {
    const std::vector<double> v = parse_double_list(strategy.substr(7), "--strategy werner");
    if (v.size() != 1) throw ParseError("--strategy werner:V takes a single visibility");
    VisibilityConfig cfg;
    cfg.source_v.assign(n, v[0]);
    cfg.node_w.assign(n - 1, 1.0);
    return noisy_ring(n, cfg);
  }
  if (strategy.rfind("file:", 0) == 0) return load_network_file(strategy.substr(5));
  throw ParseError("strategy must be ideal, werner:V, or file:PATH");
}

json bloch_json(const Eigen::Vector3d& v) { return json{v(0), v(1), v(2)}; }

json complex_matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json premise_json(const PremiseReport& p) {
  json j;
  j["premises_pass"] = p.pass;
  j["w3"] = p.w3;
  j["worst_gap"] = p.worst_gap;
  j["violation"] = p.violation;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact simulation and verification suite for no-input steering on ring networks"};
  app.require_subcommand(1);
  app.footer("Set RINGSTEER_THREADS to bound worker threads (default: hardware concurrency).");

  int n = 3;
  std::string strategy = "ideal";
  std::string format = "csv";
  std::string out_path;
  std::string table_path;

  CLI::App* simulate = app.add_subcommand("simulate", "joint outcome distribution of a ring strategy");
  simulate->add_option("--n", n, "node count")->check(CLI::Range(2, 8))->capture_default_str();
  simulate->add_option("--strategy", strategy, "ideal, werner:V, or file:PATH")->capture_default_str();
  simulate->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  simulate->add_option("--out", out_path, "write the report here instead of stdout");

  std::string witness_format = "json";
  CLI::App* witness_cmd = app.add_subcommand("witness", "witness support listing and value");
  witness_cmd->add_option("--n", n, "node count")->check(CLI::Range(2, 8))->capture_default_str();
  witness_cmd->add_option("--strategy", strategy, "ideal, werner:V, or file:PATH")
      ->capture_default_str();
  witness_cmd->add_option("--table", table_path, "score this correlation csv instead of simulating");
  witness_cmd->add_option("--format", witness_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  witness_cmd->add_option("--out", out_path, "write the report here instead of stdout");

  int restarts = 32;
  int grid = 0;
  CLI::App* bound = app.add_subcommand("bound", "restricted-model bound certification");
  bound->add_option("--n", n, "node count")->check(CLI::Range(2, 8))->capture_default_str();
  bound->add_option("--restarts", restarts, "optimizer restarts")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
  bound->add_option("--grid", grid, "also run the angle-grid oracle at this resolution (0 = skip)")
      ->check(CLI::Range(0, 4096));
  bound->add_option("--out", out_path, "write the report here instead of stdout");

  std::string values_list, source_v_list = "1", node_w_list = "1";
  CLI::App* sweep = app.add_subcommand("noise-sweep", "witness value over visibility settings");
  sweep->add_option("--n", n, "node count")->check(CLI::Range(2, 8))->capture_default_str();
  sweep->add_option("--values", values_list,
                    "comma list; sweep every combination of these visibilities over all knobs");
  sweep->add_option("--source-v", source_v_list, "per-source visibilities (single value broadcasts)")
      ->capture_default_str();
  sweep->add_option("--node-w", node_w_list,
                    "per untrusted node measurement visibilities (single value broadcasts)")
      ->capture_default_str();
  sweep->add_option("--out", out_path, "write the report here instead of stdout");

  double threshold_tol = 1e-6;
  CLI::App* threshold = app.add_subcommand("threshold", "critical source visibility by bisection");
  threshold->add_option("--n", n, "node count")->check(CLI::Range(2, 8))->capture_default_str();
  threshold->add_option("--tol", threshold_tol, "bisection tolerance")->capture_default_str();
  threshold->add_option("--out", out_path, "write the report here instead of stdout");

  std::string state_path;
  int samples = 1000;
  std::uint64_t seed = 0x75a11ce5eedULL;
  CLI::App* universal = app.add_subcommand("universal", "witness-based score for a target state");
  universal->add_option("--state", state_path, "density matrix file (d1 d2 header, re im pairs)")
      ->required();
  universal->add_option("--n", n, "node count")->check(CLI::Range(3, 8))->capture_default_str();
  universal->add_option("--samples", samples, "product states sampled by the model check")
      ->check(CLI::Range(100, 1000000))
      ->capture_default_str();
  universal->add_option("--seed", seed, "sampling seed")->capture_default_str();
  universal->add_option("--out", out_path, "write the report here instead of stdout");

  std::string realization_path, profile = "exact";
  CLI::App* selftest = app.add_subcommand("selftest", "certify a realization or check a table");
  selftest->add_option("--realization", realization_path, "realization json file");
  selftest->add_option("--table", table_path, "correlation csv (premise check only)");
  selftest->add_option("--profile", profile, "premise tolerance profile for tables")
      ->check(CLI::IsMember({"exact", "experimental"}))
      ->capture_default_str();
  selftest->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* swap_check = app.add_subcommand("swap-check", "verify the four basis-swap identities");
  swap_check->add_option("--out", out_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(simulate)) {
      const RingNetwork net = strategy_network(strategy, n);
      if (simulate->count("--n") != 0 && net.nodes() != n)
        throw ParseError("--n disagrees with the strategy file's node count");
      const CorrelationTable t = joint_distribution(net);
      emit(out_path, format == "csv" ? correlation_csv(t) : dump(correlation_json(t)));
    } else if (app.got_subcommand(witness_cmd)) {
      const CorrelationTable t = table_path.empty()
                                     ? joint_distribution(strategy_network(strategy, n))
                                     : load_correlation_csv(table_path);
      const WitnessSpec w = WitnessSpec::for_nodes(t.nodes());
      const double value = evaluate(w, t);
      if (witness_format == "csv") {
        emit(out_path, "# value " + format_sig(value, 12) + "\n" + support_csv(w));
      } else {
        json j;
        j["n"] = t.nodes();
        j["value"] = value;
        j["support_size"] = w.support_size();
        json strings = json::array();
        for (const std::vector<int>& s : w.support()) strings.push_back(outcome_string(s));
        j["support"] = std::move(strings);
        emit(out_path, dump(j));
      }
    } else if (app.got_subcommand(bound)) {
      const SohsResult r = tsohs_value(WitnessSpec::for_nodes(n), restarts);
      json j;
      j["witness_n"] = n;
      j["value"] = r.value;
      j["argmax_bloch_vectors"] = json{bloch_json(r.argmax.bloch1), bloch_json(r.argmax.bloch2)};
      j["best_response"] = r.best_response;
      j["iterations"] = r.iterations;
      j["restarts"] = r.restarts;
      if (grid > 0) j["grid_value"] = sohs_grid_oracle(grid);
      emit(out_path, dump(j));
    } else if (app.got_subcommand(sweep)) {
      std::ostringstream csv;
      csv << "# witness value per visibility assignment\n";
      for (int i = 1; i <= n; ++i) csv << 'v' << i << ',';
      for (int i = 2; i <= n; ++i) csv << 'w' << i << ',';
      csv << "W\n";
      auto row = [&](const VisibilityConfig& cfg) {
        for (double v : cfg.source_v) csv << format_sig(v, 12) << ',';
        for (double w : cfg.node_w) csv << format_sig(w, 12) << ',';
        csv << format_sig(noisy_witness_value(n, cfg), 12) << '\n';
      };
      if (!values_list.empty()) {
        const std::vector<double> values = parse_double_list(values_list, "--values");
        const int knobs = 2 * n - 1;
        std::vector<int> digit(knobs, 0);
        while (true) {
          VisibilityConfig cfg;
          for (int k = 0; k < n; ++k) cfg.source_v.push_back(values[digit[k]]);
          for (int k = n; k < knobs; ++k) cfg.node_w.push_back(values[digit[k]]);
          row(cfg);
          int k = knobs - 1;
          while (k >= 0 && ++digit[k] == static_cast<int>(values.size())) digit[k--] = 0;
          if (k < 0) break;
        }
      } else {
        VisibilityConfig cfg;
        cfg.source_v = broadcast(parse_double_list(source_v_list, "--source-v"), n, "--source-v");
        cfg.node_w = broadcast(parse_double_list(node_w_list, "--node-w"), n - 1, "--node-w");
        row(cfg);
      }
      emit(out_path, csv.str());
    } else if (app.got_subcommand(threshold)) {
      const ThresholdResult r = visibility_threshold(n, threshold_tol);
      json j;
      j["n"] = r.n;
      j["threshold"] = r.threshold;
      j["iterations"] = r.iterations;
      emit(out_path, dump(j));
    } else if (app.got_subcommand(universal)) {
      const MatrixFile mf = load_matrix_file(state_path);
      const DensityOperator rho(mf.shape, mf.matrix);
      const UniversalNetwork net = build_universal_network(rho, n);
      const double s_value = evaluate_universal(net);
      const double witness_trace = real_trace_product(net.witness.matrix(), rho.matrix());
      const SohsCheckResult check = universal_sohs_check(net.decomp, samples, seed);
      json j;
      j["S_value"] = s_value;
      j["closed_form"] = universal_reference_value(witness_trace, net.d1, net.d2, n);
      j["sohs_check_max"] = check.max_value;
      j["witness_trace"] = witness_trace;
      j["n"] = n;
      j["d1"] = net.d1;
      j["d2"] = net.d2;
      j["samples"] = check.samples;
      j["all_zero_weight"] = net.all_zero_weight;
      emit(out_path, dump(j));
    } else if (app.got_subcommand(selftest)) {
      if (realization_path.empty() == table_path.empty())
        throw ParseError("selftest needs exactly one of --realization or --table");
      json j;
      if (!realization_path.empty()) {
        const Realization r = load_realization_file(realization_path);
        const CertificationReport rep = certify_realization(r);
        j = premise_json(rep.premises);
        j["alignment"] = complex_matrix_json(rep.alignment);
        j["unitarity_residual"] = rep.unitarity_residual;
        j["state_distance"] = rep.state_distance;
        j["node1_distance"] = rep.node1_distance;
        j["node2_distance"] = rep.node2_distance;
        j["max_deviation"] = rep.max_deviation;
      } else {
        const CorrelationTable t = load_correlation_csv(table_path);
        j = premise_json(verify_premises(t, profile == "experimental" ? 1e-3 : 1e-9));
        j["profile"] = profile;
      }
      emit(out_path, dump(j));
    } else if (app.got_subcommand(swap_check)) {
      const std::array<double, 4> errors = bell_swap_identity_errors();
      double max_error = 0.0;
      json ids = json::array();
      for (int b = 0; b < 4; ++b) {
        max_error = std::max(max_error, errors[b]);
        json id;
        id["right_label"] = b;
        id["error"] = errors[b];
        id["pass"] = errors[b] <= 1e-12;
        ids.push_back(std::move(id));
      }
      json j;
      j["identities"] = std::move(ids);
      j["max_error"] = max_error;
      j["pass"] = max_error <= 1e-12;
      emit(out_path, dump(j));
      if (max_error > 1e-12) return 3;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
