#include "ringsteer/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ringsteer/noise.hpp"

namespace ringsteer {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& tok, const std::string& ctx) {
  try {
    size_t used = 0;
    const double x = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ParseError(ctx + ": not a number: '" + tok + "'");
  }
}

long long to_int(const std::string& tok, const std::string& ctx) {
  try {
    size_t used = 0;
    const long long x = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ParseError(ctx + ": not an integer: '" + tok + "'");
  }
}

const nlohmann::json& field(const nlohmann::json& j, const char* name,
                            const std::string& ctx) {
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(ctx + ": missing field '" + name + "'");
  return *it;
}

double number_field(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_number()) throw ParseError(ctx + ": expected a number");
  return j.get<double>();
}

complexd complex_from(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(ctx + ": complex entries are [re, im] pairs");
  return complexd(number_field(j[0], ctx + "[0]"), number_field(j[1], ctx + "[1]"));
}

Vector vector_from(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from(j[i], ctx + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix_from(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) throw ParseError(ctx + ": expected an array of rows");
  const size_t rows = j.size();
  Matrix m;
  for (size_t r = 0; r < rows; ++r) {
    const nlohmann::json& row = j[r];
    const std::string rctx = ctx + "[" + std::to_string(r) + "]";
    if (!row.is_array()) throw ParseError(rctx + ": expected a row array");
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(row.size()));
    if (row.size() != static_cast<size_t>(m.cols()))
      throw ParseError(rctx + ": ragged row");
    for (size_t c = 0; c < row.size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from(row[c], rctx + "[" + std::to_string(c) + "]");
  }
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Measurement measurement_from_spec(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected an object");
  const std::string type = field(j, "type", ctx).get<std::string>();
  if (type == "bell") return bell_basis();
  if (type == "noisy_bell")
    return noisy_bell_measurement(number_field(field(j, "w", ctx), ctx + ".w"));
  if (type == "computational") return computational_basis(4);
  if (type == "operators") {
    const nlohmann::json& ops = field(j, "operators", ctx);
    if (!ops.is_array() || ops.empty())
      throw ParseError(ctx + ".operators: expected a nonempty array");
    std::vector<Matrix> mats;
    for (size_t i = 0; i < ops.size(); ++i)
      mats.push_back(matrix_from(ops[i], ctx + ".operators[" + std::to_string(i) + "]"));
    return Measurement(std::move(mats), 1e-10);
  }
  throw ParseError(ctx + ": unknown measurement type '" + type + "'");
}

DensityOperator source_from_spec(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected an object");
  const std::string type = field(j, "type", ctx).get<std::string>();
  if (type == "phi_plus") return pure_density(bell_state(0));
  if (type == "bell") {
    const long long label = static_cast<long long>(
        number_field(field(j, "label", ctx), ctx + ".label"));
    if (label < 0 || label > 3) throw ParseError(ctx + ".label: must be 0..3");
    return pure_density(bell_state(static_cast<int>(label)));
  }
  if (type == "werner")
    return werner_state(number_field(field(j, "v", ctx), ctx + ".v"));
  if (type == "maximally_mixed") return werner_state(0.0);
  if (type == "matrix") {
    const nlohmann::json& dims = field(j, "dims", ctx);
    if (!dims.is_array() || dims.size() != 2)
      throw ParseError(ctx + ".dims: expected [d1, d2]");
    const int d1 = static_cast<int>(number_field(dims[0], ctx + ".dims[0]"));
    const int d2 = static_cast<int>(number_field(dims[1], ctx + ".dims[1]"));
    const Matrix m = matrix_from(field(j, "entries", ctx), ctx + ".entries");
    return DensityOperator(HilbertShape({d1, d2}), m);
  }
  throw ParseError(ctx + ": unknown source type '" + type + "'");
}

}  // namespace

std::string format_sig(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

std::string outcome_string(const std::vector<int>& outcomes) {
  std::string s;
  s.reserve(outcomes.size());
  for (int a : outcomes) {
    if (a < 0 || a > 9) throw std::invalid_argument("outcome digit out of range");
    s += static_cast<char>('0' + a);
  }
  return s;
}

std::string correlation_csv(const CorrelationTable& t) {
  std::ostringstream out;
  out << "# alphabet";
  for (int a : t.alphabet()) out << ' ' << a;
  out << "\nstring,probability\n";
  for (long long i = 0; i < t.cells(); ++i)
    out << outcome_string(t.outcomes(i)) << ',' << format_sig(t.prob(i), 12) << '\n';
  return out.str();
}

CorrelationTable parse_correlation_csv(std::istream& in) {
  std::vector<int> alphabet_hint;
  bool header_seen = false;
  int nodes = -1;
  std::map<std::vector<int>, double> cells;
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string ctx = "correlation csv line " + std::to_string(lineno);
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text[0] == '#') {
      std::istringstream meta(text.substr(1));
      std::string word;
      if (meta >> word && word == "alphabet") {
        int a = 0;
        while (meta >> a) alphabet_hint.push_back(a);
      }
      continue;
    }
    if (!header_seen) {
      const std::vector<std::string> cols = split(text, ',');
      if (cols.size() != 2 || trim(cols[0]) != "string" || trim(cols[1]) != "probability")
        throw ParseError(ctx + ": expected header 'string,probability'");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> parts = split(text, ',');
    if (parts.size() != 2) throw ParseError(ctx + ": expected 'string,probability'");
    const std::string digits = trim(parts[0]);
    if (digits.empty()) throw ParseError(ctx + ": empty outcome string");
    std::vector<int> outcomes;
    outcomes.reserve(digits.size());
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError(ctx + ": outcome strings are digit sequences");
      outcomes.push_back(c - '0');
    }
    if (nodes < 0) nodes = static_cast<int>(outcomes.size());
    if (static_cast<int>(outcomes.size()) != nodes)
      throw ParseError(ctx + ": outcome string length differs from earlier rows");
    if (!cells.emplace(outcomes, to_double(trim(parts[1]), ctx)).second)
      throw ParseError(ctx + ": duplicate outcome string '" + digits + "'");
  }
  if (!header_seen || cells.empty())
    throw ParseError("correlation csv: no data rows");

  std::vector<int> alphabet;
  if (!alphabet_hint.empty()) {
    if (static_cast<int>(alphabet_hint.size()) != nodes)
      throw ParseError("correlation csv: alphabet hint length differs from outcome strings");
    alphabet = alphabet_hint;
  } else {
    alphabet.assign(nodes, 1);
    for (const auto& [outcomes, p] : cells)
      for (int k = 0; k < nodes; ++k) alphabet[k] = std::max(alphabet[k], outcomes[k] + 1);
  }

  long long total = 1;
  for (int a : alphabet) total *= a;
  std::vector<double> p(static_cast<size_t>(total), 0.0);
  for (const auto& [outcomes, value] : cells) {
    long long idx = 0;
    for (int k = 0; k < nodes; ++k) {
      if (outcomes[k] >= alphabet[k])
        throw ParseError("correlation csv: outcome '" + outcome_string(outcomes) +
                         "' exceeds the declared alphabet");
      idx = idx * alphabet[k] + outcomes[k];
    }
    p[static_cast<size_t>(idx)] = value;
  }
  return CorrelationTable(std::move(alphabet), std::move(p));
}

CorrelationTable load_correlation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open correlation csv: " + path);
  return parse_correlation_csv(in);
}

nlohmann::json correlation_json(const CorrelationTable& t) {
  nlohmann::json j;
  j["alphabet"] = t.alphabet();
  nlohmann::json cells = nlohmann::json::object();
  for (long long i = 0; i < t.cells(); ++i)
    cells[outcome_string(t.outcomes(i))] = t.prob(i);
  j["probabilities"] = std::move(cells);
  return j;
}

std::string support_csv(const WitnessSpec& w) {
  std::ostringstream out;
  out << "string\n";
  for (const std::vector<int>& s : w.support()) out << outcome_string(s) << '\n';
  return out.str();
}

std::string matrix_file_text(const HilbertShape& shape, const Matrix& m) {
  std::ostringstream out;
  out << "# factor dims, then row-major re im pairs\n";
  for (int i = 0; i < shape.factors(); ++i) out << (i ? " " : "") << shape.dim(i);
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_sig(m(r, c).real(), 17) << ' ' << format_sig(m(r, c).imag(), 17);
    }
    out << '\n';
  }
  return out.str();
}

MatrixFile parse_matrix_file(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.size() < 2) throw ParseError("matrix file: missing 'd1 d2' header");
  const long long d1 = to_int(tokens[0], "matrix file dims");
  const long long d2 = to_int(tokens[1], "matrix file dims");
  if (d1 < 1 || d2 < 1 || d1 * d2 > kMaxTotalDim)
    throw ParseError("matrix file: dims out of range");
  const long long total = d1 * d2;
  const size_t expected = 2 + static_cast<size_t>(2 * total * total);
  if (tokens.size() != expected) {
    std::ostringstream msg;
    msg << "matrix file: expected " << expected - 2 << " numbers for a " << total << "x"
        << total << " complex matrix, found " << tokens.size() - 2;
    throw ParseError(msg.str());
  }
  Matrix m(total, total);
  size_t pos = 2;
  for (long long r = 0; r < total; ++r)
    for (long long c = 0; c < total; ++c) {
      const double re = to_double(tokens[pos++], "matrix file entry");
      const double im = to_double(tokens[pos++], "matrix file entry");
      m(r, c) = complexd(re, im);
    }
  return MatrixFile{HilbertShape({static_cast<int>(d1), static_cast<int>(d2)}), std::move(m)};
}

MatrixFile load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  return parse_matrix_file(in);
}

nlohmann::json realization_json(const Realization& r) {
  nlohmann::json j;
  nlohmann::json state = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.psi().amplitudes().size(); ++i) {
    const complexd a = r.psi().amplitudes()(i);
    state.push_back({a.real(), a.imag()});
  }
  j["state"] = std::move(state);
  nlohmann::json n1 = nlohmann::json::array(), n2 = nlohmann::json::array();
  for (int a = 0; a < 4; ++a) {
    n1.push_back(matrix_to_json(r.node1().op(a)));
    n2.push_back(matrix_to_json(r.node2().op(a)));
  }
  j["node1"] = std::move(n1);
  j["node2"] = std::move(n2);
  return j;
}

Realization parse_realization_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("realization: expected a JSON object");
  Vector amps = vector_from(field(j, "state", "realization"), "realization.state");
  if (amps.size() != 4) throw ParseError("realization.state: expected 4 amplitudes");
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw ParseError("realization.state: not normalized");
  amps /= norm;

  auto measurement = [&](const char* name) {
    const nlohmann::json& ops = field(j, name, "realization");
    if (!ops.is_array() || ops.size() != 4)
      throw ParseError(std::string("realization.") + name + ": expected 4 operators");
    std::vector<Matrix> mats;
    for (size_t i = 0; i < 4; ++i) {
      Matrix m = matrix_from(ops[i], std::string("realization.") + name + "[" +
                                         std::to_string(i) + "]");
      if (m.rows() != 4 || m.cols() != 4)
        throw ParseError(std::string("realization.") + name + "[" + std::to_string(i) +
                         "]: expected a 4x4 operator");
      mats.push_back(std::move(m));
    }
    return Measurement(std::move(mats), 1e-10);
  };

  return Realization(StateVector(HilbertShape({2, 2}), std::move(amps)),
                     measurement("node1"), measurement("node2"));
}

Realization load_realization_file(const std::string& path) {
  return parse_realization_json(load_json_file(path));
}

RingNetwork parse_network_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  const double n_raw = number_field(field(j, "n", "scenario"), "scenario.n");
  const int n = static_cast<int>(n_raw);
  if (n < 2 || n != n_raw) throw ParseError("scenario.n: expected an integer >= 2");

  int trusted = 1;
  if (j.contains("trusted")) {
    trusted = static_cast<int>(number_field(j["trusted"], "scenario.trusted"));
    if (trusted < 1 || trusted > n)
      throw ParseError("scenario.trusted: 1-based node index out of range");
  }

  const nlohmann::json& sources = field(j, "sources", "scenario");
  const nlohmann::json& ms = field(j, "measurements", "scenario");
  if (!sources.is_array() || static_cast<int>(sources.size()) != n)
    throw ParseError("scenario.sources: expected one source per node");
  if (!ms.is_array() || static_cast<int>(ms.size()) != n)
    throw ParseError("scenario.measurements: expected one measurement per node");

  std::vector<DensityOperator> src;
  std::vector<Measurement> meas;
  for (int i = 0; i < n; ++i) {
    src.push_back(source_from_spec(sources[i], "scenario.sources[" + std::to_string(i) + "]"));
    meas.push_back(measurement_from_spec(ms[i], "scenario.measurements[" + std::to_string(i) + "]"));
  }
  return RingNetwork(std::move(src), std::move(meas), trusted - 1);
}

RingNetwork load_network_file(const std::string& path) {
  return parse_network_json(load_json_file(path));
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace ringsteer
