#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "ringsteer/network.hpp"
#include "ringsteer/selftest.hpp"
#include "ringsteer/witness.hpp"

namespace ringsteer {

// Malformed or unreadable input files. Distinct from NumericError so the CLI
// can map bad input and failed verification to different exit codes.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// %.{digits}g rendering, locale independent.
std::string format_sig(double x, int digits);

// One digit per node, node 0 first ("012" for outcomes 0,1,2).
std::string outcome_string(const std::vector<int>& outcomes);

// Correlation tables as `string,probability` rows (12 significant digits)
// behind an `# alphabet ...` hint line. The parser accepts files without the
// hint by inferring each node's alphabet from the largest outcome present,
// treats missing rows as zero cells, and rejects duplicates.
std::string correlation_csv(const CorrelationTable& t);
CorrelationTable parse_correlation_csv(std::istream& in);
CorrelationTable load_correlation_csv(const std::string& path);
nlohmann::json correlation_json(const CorrelationTable& t);

// Accepted outcome strings, one per row.
std::string support_csv(const WitnessSpec& w);

// Dense operator file: a `d1 d2` header line, then total x total row-major
// `re im` pairs, one matrix row per line; `#` starts a comment anywhere.
struct MatrixFile {
  HilbertShape shape;
  Matrix matrix;
};
std::string matrix_file_text(const HilbertShape& shape, const Matrix& m);
MatrixFile parse_matrix_file(std::istream& in);
MatrixFile load_matrix_file(const std::string& path);

// Realizations as JSON: complex numbers are [re, im] pairs, operators are
// row-major nested arrays. States off unit norm by more than 1e-6 are
// rejected, smaller defects are renormalized.
nlohmann::json realization_json(const Realization& r);
Realization parse_realization_json(const nlohmann::json& j);
Realization load_realization_file(const std::string& path);

// Ring scenario files: n, 1-based trusted node, one source and one
// measurement spec per node, each chosen by name + parameters
// (sources: phi_plus, bell, werner, maximally_mixed, matrix;
// measurements: bell, noisy_bell, computational, operators).
RingNetwork parse_network_json(const nlohmann::json& j);
RingNetwork load_network_file(const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ringsteer
