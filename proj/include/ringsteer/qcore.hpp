#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ringsteer {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Validation tolerances for constructed objects.
inline constexpr double kStateNormTol = 1e-12;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// Total dimension cap. Dense desk-scale code: a 4096x4096 complex matrix is
// 256 MB, anything past that is a different tool.
inline constexpr int kMaxTotalDim = 4096;

// Raised when an internal numeric cross-check fails (as opposed to bad input).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered tensor-factor dimensions. Factor 0 is the slowest-varying index in
// the standard Kronecker layout.
class HilbertShape {
 public:
  HilbertShape() = default;
  explicit HilbertShape(std::vector<int> dims);

  int factors() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(i); }
  int total() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  bool operator==(const HilbertShape& o) const { return dims_ == o.dims_; }

  // Linear index <-> per-factor digits, factor 0 slowest.
  std::vector<int> digits(int index) const;
  int index(const std::vector<int>& digits) const;

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

class StateVector {
 public:
  StateVector(HilbertShape shape, Vector amplitudes);

  const HilbertShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amps_; }
  int dim() const { return shape_.total(); }

  // Global phase fixed by rotating the largest-magnitude amplitude to be
  // real positive (first such index on ties).
  StateVector canonicalized() const;

 private:
  HilbertShape shape_;
  Vector amps_;
};

class DensityOperator {
 public:
  // Validates hermiticity and unit trace; checks positivity by full
  // eigendecomposition when the dimension is small enough to afford it.
  DensityOperator(HilbertShape shape, Matrix mat);

  // For internal transformations that preserve the invariants structurally.
  static DensityOperator unchecked(HilbertShape shape, Matrix mat);

  const HilbertShape& shape() const { return shape_; }
  const Matrix& matrix() const { return mat_; }
  int dim() const { return shape_.total(); }

  double purity() const;
  bool is_psd(double tol = kPsdTol) const;

 private:
  DensityOperator() = default;
  HilbertShape shape_;
  Matrix mat_;
};

DensityOperator pure_density(const StateVector& psi);

class HermitianOperator {
 public:
  HermitianOperator(HilbertShape shape, Matrix mat);

  const HilbertShape& shape() const { return shape_; }
  const Matrix& matrix() const { return mat_; }
  int dim() const { return shape_.total(); }

 private:
  HilbertShape shape_;
  Matrix mat_;
};

// Kronecker products, first argument is the slower-varying factor.
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
StateVector kron(const StateVector& a, const StateVector& b);
DensityOperator kron(const DensityOperator& a, const DensityOperator& b);

// Trace out everything not in `keep`. The kept factors stay in their
// original relative order no matter how `keep` is spelled.
Matrix partial_trace(const Matrix& m, const HilbertShape& shape,
                     std::vector<int> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep);

// Transpose the given factor between row and column indices.
Matrix partial_transpose(const Matrix& m, const HilbertShape& shape, int factor);
HermitianOperator partial_transpose(const DensityOperator& rho, int factor);

// Reorder tensor factors: output factor k is input factor order[k].
// Pure index shuffling, so the round trip through the inverse permutation is
// exact, not merely within tolerance.
Vector permute_subsystems(const Vector& v, const HilbertShape& shape,
                          const std::vector<int>& order);
Matrix permute_subsystems(const Matrix& m, const HilbertShape& shape,
                          const std::vector<int>& order);
StateVector permute_subsystems(const StateVector& psi, const std::vector<int>& order);
DensityOperator permute_subsystems(const DensityOperator& rho,
                                   const std::vector<int>& order);

struct EigResult {
  RealVector values;  // ascending
  Matrix vectors;     // columns, each with its first nonzero entry real positive
};

// Rejects inputs that are not Hermitian within tolerance.
EigResult eig_hermitian(const Matrix& m, double herm_tol = kPsdTol);

struct SchmidtResult {
  RealVector coefficients;  // nonnegative, descending
  Matrix left;              // columns per coefficient
  Matrix right;
};

// Requires a shape with exactly two factors; regroup upstream if needed.
SchmidtResult schmidt_decompose(const StateVector& psi);

// min over the global phase of || a - b ||_2 for unit vectors.
double phase_distance(const Vector& a, const Vector& b);

// Re Tr(ab): the Hilbert-Schmidt pairing, exact for Hermitian factors.
double real_trace_product(const Matrix& a, const Matrix& b);

// Chunked deterministic parallel map over [0, count). Thread count comes from
// the RINGSTEER_THREADS environment variable (default: hardware concurrency).
// fn(begin, end) must touch disjoint output only.
void parallel_for(long long count, const std::function<void(long long, long long)>& fn);
int thread_count();

}  // namespace ringsteer
