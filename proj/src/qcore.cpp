#include "ringsteer/qcore.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace ringsteer {

namespace {

// Dimension above which the density-operator constructor skips the
// eigenvalue positivity check (hermiticity and trace are always checked).
constexpr int kPsdCheckDim = 256;

void check_square(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument(std::string(what) + ": matrix is " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", shape says " +
                                std::to_string(dim));
  }
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

// Lookup table mapping input linear indices to output linear indices under a
// factor reordering.
std::vector<int> permutation_lookup(const HilbertShape& shape,
                                    const std::vector<int>& order) {
  const int nf = shape.factors();
  if (static_cast<int>(order.size()) != nf)
    throw std::invalid_argument("permute_subsystems: order length mismatch");
  std::vector<bool> seen(nf, false);
  for (int k : order) {
    if (k < 0 || k >= nf || seen[k])
      throw std::invalid_argument("permute_subsystems: not a permutation");
    seen[k] = true;
  }
  std::vector<int> newdims(nf);
  for (int k = 0; k < nf; ++k) newdims[k] = shape.dim(order[k]);
  const auto in_strides = strides_of(shape.dims());
  const auto out_strides = strides_of(newdims);
  // position of input factor f in the output
  std::vector<int> pos(nf);
  for (int k = 0; k < nf; ++k) pos[order[k]] = k;

  std::vector<int> lut(shape.total());
  for (int i = 0; i < shape.total(); ++i) {
    int rem = i, out = 0;
    for (int f = 0; f < nf; ++f) {
      const int digit = rem / in_strides[f];
      rem -= digit * in_strides[f];
      out += digit * out_strides[pos[f]];
    }
    lut[i] = out;
  }
  return lut;
}

HilbertShape permuted_shape(const HilbertShape& shape, const std::vector<int>& order) {
  std::vector<int> d(order.size());
  for (size_t k = 0; k < order.size(); ++k) d[k] = shape.dim(order[k]);
  return HilbertShape(d);
}

}  // namespace

HilbertShape::HilbertShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("HilbertShape: no factors");
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("HilbertShape: factor dim < 1");
    if (total_ > kMaxTotalDim / d)
      throw std::invalid_argument("HilbertShape: total dimension exceeds " +
                                  std::to_string(kMaxTotalDim));
    total_ *= d;
  }
}

std::vector<int> HilbertShape::digits(int index) const {
  if (index < 0 || index >= total_)
    throw std::invalid_argument("HilbertShape::digits: index out of range");
  std::vector<int> out(dims_.size());
  for (int f = static_cast<int>(dims_.size()) - 1; f >= 0; --f) {
    out[f] = index % dims_[f];
    index /= dims_[f];
  }
  return out;
}

int HilbertShape::index(const std::vector<int>& digits) const {
  if (digits.size() != dims_.size())
    throw std::invalid_argument("HilbertShape::index: digit count mismatch");
  int idx = 0;
  for (size_t f = 0; f < dims_.size(); ++f) {
    if (digits[f] < 0 || digits[f] >= dims_[f])
      throw std::invalid_argument("HilbertShape::index: digit out of range");
    idx = idx * dims_[f] + digits[f];
  }
  return idx;
}

StateVector::StateVector(HilbertShape shape, Vector amplitudes)
    : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
  if (amps_.size() != shape_.total())
    throw std::invalid_argument("StateVector: amplitude count mismatch");
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kStateNormTol)
    throw std::invalid_argument("StateVector: norm " + std::to_string(norm) +
                                " is not 1 within tolerance");
}

StateVector StateVector::canonicalized() const {
  int imax = 0;
  double best = -1.0;
  for (int i = 0; i < amps_.size(); ++i) {
    const double a = std::abs(amps_[i]);
    if (a > best + 1e-15) {
      best = a;
      imax = i;
    }
  }
  const complexd z = amps_[imax];
  if (std::abs(z) == 0.0) return *this;
  Vector v = amps_ * (std::conj(z) / std::abs(z));
  v /= v.norm();
  return StateVector(shape_, std::move(v));
}

DensityOperator::DensityOperator(HilbertShape shape, Matrix mat)
    : shape_(std::move(shape)), mat_(std::move(mat)) {
  check_square(mat_, shape_.total(), "DensityOperator");
  if (hermiticity_defect(mat_) > kHermTol)
    throw std::invalid_argument("DensityOperator: not Hermitian within 1e-12");
  if (std::abs(mat_.trace().real() - 1.0) > kHermTol ||
      std::abs(mat_.trace().imag()) > kHermTol)
    throw std::invalid_argument("DensityOperator: trace is not 1");
  if (dim() <= kPsdCheckDim) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol)
      throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                  std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityOperator DensityOperator::unchecked(HilbertShape shape, Matrix mat) {
  DensityOperator rho;
  rho.shape_ = std::move(shape);
  rho.mat_ = std::move(mat);
  check_square(rho.mat_, rho.shape_.total(), "DensityOperator");
  return rho;
}

double DensityOperator::purity() const {
  return (mat_ * mat_).trace().real();
}

bool DensityOperator::is_psd(double tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

DensityOperator pure_density(const StateVector& psi) {
  const Vector& a = psi.amplitudes();
  return DensityOperator::unchecked(psi.shape(), a * a.adjoint());
}

HermitianOperator::HermitianOperator(HilbertShape shape, Matrix mat)
    : shape_(std::move(shape)), mat_(std::move(mat)) {
  check_square(mat_, shape_.total(), "HermitianOperator");
  if (hermiticity_defect(mat_) > kHermTol)
    throw std::invalid_argument("HermitianOperator: not Hermitian within 1e-12");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  std::vector<int> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  return StateVector(HilbertShape(dims), kron(a.amplitudes(), b.amplitudes()));
}

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  return DensityOperator::unchecked(HilbertShape(dims),
                                    kron(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& m, const HilbertShape& shape,
                     std::vector<int> keep) {
  check_square(m, shape.total(), "partial_trace");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw std::invalid_argument("partial_trace: duplicate keep index");
  for (int k : keep)
    if (k < 0 || k >= shape.factors())
      throw std::invalid_argument("partial_trace: keep index out of range");

  std::vector<int> traced;
  for (int f = 0; f < shape.factors(); ++f)
    if (!std::binary_search(keep.begin(), keep.end(), f)) traced.push_back(f);

  const auto strides = strides_of(shape.dims());
  int keep_dim = 1, traced_dim = 1;
  for (int k : keep) keep_dim *= shape.dim(k);
  for (int t : traced) traced_dim *= shape.dim(t);

  // Offsets of every keep-side and traced-side digit combination.
  auto offsets = [&](const std::vector<int>& factors) {
    std::vector<int> offs{0};
    for (int f : factors) {
      std::vector<int> next;
      next.reserve(offs.size() * shape.dim(f));
      for (int base : offs)
        for (int d = 0; d < shape.dim(f); ++d)
          next.push_back(base + d * strides[f]);
      offs = std::move(next);
    }
    return offs;
  };
  const std::vector<int> keep_offs = offsets(keep);
  const std::vector<int> traced_offs = offsets(traced);

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (int i = 0; i < keep_dim; ++i)
    for (int j = 0; j < keep_dim; ++j) {
      complexd acc = 0.0;
      for (int t = 0; t < traced_dim; ++t)
        acc += m(keep_offs[i] + traced_offs[t], keep_offs[j] + traced_offs[t]);
      out(i, j) = acc;
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep) {
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> dims;
  for (int k : sorted) dims.push_back(rho.shape().dim(k));
  return DensityOperator::unchecked(
      HilbertShape(dims), partial_trace(rho.matrix(), rho.shape(), keep));
}

Matrix partial_transpose(const Matrix& m, const HilbertShape& shape, int factor) {
  check_square(m, shape.total(), "partial_transpose");
  if (factor < 0 || factor >= shape.factors())
    throw std::invalid_argument("partial_transpose: factor out of range");
  const auto strides = strides_of(shape.dims());
  const int d = shape.dim(factor);
  const int stride = strides[factor];
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < shape.total(); ++i) {
    const int di = (i / stride) % d;
    for (int j = 0; j < shape.total(); ++j) {
      const int dj = (j / stride) % d;
      // swap the factor's row and column digits
      const int ii = i + (dj - di) * stride;
      const int jj = j + (di - dj) * stride;
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

HermitianOperator partial_transpose(const DensityOperator& rho, int factor) {
  return HermitianOperator(rho.shape(),
                           partial_transpose(rho.matrix(), rho.shape(), factor));
}

Vector permute_subsystems(const Vector& v, const HilbertShape& shape,
                          const std::vector<int>& order) {
  if (v.size() != shape.total())
    throw std::invalid_argument("permute_subsystems: size mismatch");
  const auto lut = permutation_lookup(shape, order);
  Vector out(v.size());
  for (int i = 0; i < v.size(); ++i) out[lut[i]] = v[i];
  return out;
}

Matrix permute_subsystems(const Matrix& m, const HilbertShape& shape,
                          const std::vector<int>& order) {
  check_square(m, shape.total(), "permute_subsystems");
  const auto lut = permutation_lookup(shape, order);
  Matrix out(m.rows(), m.cols());
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) out(lut[i], lut[j]) = m(i, j);
  return out;
}

StateVector permute_subsystems(const StateVector& psi, const std::vector<int>& order) {
  return StateVector(permuted_shape(psi.shape(), order),
                     permute_subsystems(psi.amplitudes(), psi.shape(), order));
}

DensityOperator permute_subsystems(const DensityOperator& rho,
                                   const std::vector<int>& order) {
  return DensityOperator::unchecked(
      permuted_shape(rho.shape(), order),
      permute_subsystems(rho.matrix(), rho.shape(), order));
}

namespace {

// First entry of magnitude above tol rotated to be real positive.
void fix_column_phase(Matrix& m, int col, Matrix* companion = nullptr,
                      double tol = 1e-12) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const complexd z = m(r, col);
    if (std::abs(z) > tol) {
      const complexd phase = std::conj(z) / std::abs(z);
      m.col(col) *= phase;
      if (companion) companion->col(col) *= std::conj(phase);
      return;
    }
  }
}

}  // namespace

EigResult eig_hermitian(const Matrix& m, double herm_tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("eig_hermitian: matrix not square");
  if (hermiticity_defect(m) > herm_tol)
    throw std::invalid_argument("eig_hermitian: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericError("eig_hermitian: eigensolver failed");
  EigResult out{es.eigenvalues(), es.eigenvectors()};
  for (int c = 0; c < out.vectors.cols(); ++c) fix_column_phase(out.vectors, c);
  return out;
}

SchmidtResult schmidt_decompose(const StateVector& psi) {
  if (psi.shape().factors() != 2)
    throw std::invalid_argument(
        "schmidt_decompose: state must declare exactly two factors");
  const int da = psi.shape().dim(0);
  const int db = psi.shape().dim(1);
  Matrix a(da, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) a(i, j) = psi.amplitudes()[i * db + j];

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int r = std::min(da, db);
  SchmidtResult out;
  out.coefficients = svd.singularValues().head(r);
  out.left = svd.matrixU().leftCols(r);
  // psi = sum_k s_k u_k (conj v_k); SVD gives A = U S V^dagger.
  out.right = svd.matrixV().conjugate().leftCols(r);
  for (int c = 0; c < r; ++c) fix_column_phase(out.left, c, &out.right);
  return out;
}

double phase_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("phase_distance: size mismatch");
  const double overlap = std::abs(a.dot(b));  // |<a|b>|
  const double d2 = std::max(0.0, a.squaredNorm() + b.squaredNorm() - 2.0 * overlap);
  return std::sqrt(d2);
}

double real_trace_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("real_trace_product: square matrices of equal dim required");
  return (a.transpose().cwiseProduct(b)).sum().real();
}

int thread_count() {
  if (const char* env = std::getenv("RINGSTEER_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(long long count,
                  const std::function<void(long long, long long)>& fn) {
  const int threads = std::min<long long>(thread_count(), std::max(1LL, count));
  if (threads <= 1 || count < 2) {
    if (count > 0) fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const long long chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long lo = t * chunk;
    const long long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ringsteer
