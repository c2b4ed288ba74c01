#include "densecode/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace densecode {

namespace {

constexpr double kLog2e = 1.4426950408889634;  // 1/ln(2)

double xlog2x(double x) { return x > 0.0 ? x * std::log(x) * kLog2e : 0.0; }

std::vector<int> validate_keep(int n_qubits, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_qubits)
      throw std::invalid_argument("partial_trace: qubit index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep must be strictly ascending");
  }
  std::vector<int> traced;
  size_t k = 0;
  for (int q = 0; q < n_qubits; ++q) {
    if (k < keep.size() && keep[k] == q) {
      ++k;
    } else {
      traced.push_back(q);
    }
  }
  return traced;
}

// Scatter the bits of `value` (big-endian over `positions`) into a full
// register index.
long scatter_bits(long value, const std::vector<int>& positions, int n_qubits) {
  long out = 0;
  const int np = static_cast<int>(positions.size());
  for (int i = 0; i < np; ++i) {
    const long bit = (value >> (np - 1 - i)) & 1;
    out |= bit << (n_qubits - 1 - positions[i]);
  }
  return out;
}

std::vector<long> scatter_table(const std::vector<int>& positions, int n_qubits) {
  const long dim = 1L << positions.size();
  std::vector<long> table(dim);
  for (long v = 0; v < dim; ++v) table[v] = scatter_bits(v, positions, n_qubits);
  return table;
}

}  // namespace

const Matrix& pauli(int m) {
  static const Matrix table[4] = {
      (Matrix(2, 2) << 1, 0, 0, 1).finished(),
      (Matrix(2, 2) << 0, 1, 1, 0).finished(),
      (Matrix(2, 2) << 0, cxd(0, -1), cxd(0, 1), 0).finished(),
      (Matrix(2, 2) << 1, 0, 0, -1).finished(),
  };
  if (m < 0 || m > 3) throw std::invalid_argument("pauli: index must be 0..3");
  return table[m];
}

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
  const long prod_rows = static_cast<long>(a.rows()) * b.rows();
  const long prod_cols = static_cast<long>(a.cols()) * b.cols();
  if (prod_rows > (1L << 32) || prod_cols > (1L << 32))
    throw std::invalid_argument("kron: product dimension exceeds 2^32");
  Matrix out(prod_rows, prod_cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_density_matrix(const Matrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  if (std::abs(m.trace().real() - 1.0) > tol) return false;
  if (std::abs(m.trace().imag()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Matrix partial_trace(const Matrix& rho, int n_qubits,
                     const std::vector<int>& keep) {
  const long dim = 1L << n_qubits;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  const std::vector<int> traced = validate_keep(n_qubits, keep);
  if (traced.empty()) return rho;

  const auto keep_idx = scatter_table(keep, n_qubits);
  const auto traced_idx = scatter_table(traced, n_qubits);
  const long dk = static_cast<long>(keep_idx.size());
  const long dt = static_cast<long>(traced_idx.size());

  Matrix out = Matrix::Zero(dk, dk);
  for (long a = 0; a < dk; ++a) {
    for (long b = 0; b < dk; ++b) {
      cxd acc = 0.0;
      for (long t = 0; t < dt; ++t)
        acc += rho(keep_idx[a] | traced_idx[t], keep_idx[b] | traced_idx[t]);
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix reduced_density_from_ket(const Vector& amplitudes, int n_qubits,
                                const std::vector<int>& keep) {
  const long dim = 1L << n_qubits;
  if (amplitudes.size() != dim)
    throw std::invalid_argument("reduced_density_from_ket: dimension mismatch");
  const std::vector<int> traced = validate_keep(n_qubits, keep);
  const auto keep_idx = scatter_table(keep, n_qubits);
  const auto traced_idx = scatter_table(traced, n_qubits);
  const long dk = static_cast<long>(keep_idx.size());
  const long dt = static_cast<long>(traced_idx.size());

  // rho_keep = M M^dagger with M the amplitude vector reshaped so that rows
  // carry the kept qubits and columns the traced ones.
  Matrix m(dk, dt);
  for (long a = 0; a < dk; ++a)
    for (long t = 0; t < dt; ++t) m(a, t) = amplitudes(keep_idx[a] | traced_idx[t]);
  return m * m.adjoint();
}

Spectrum hermitian_eig(const Matrix& m, bool with_vectors) {
  if (!is_hermitian(m))
    throw std::invalid_argument("hermitian_eig: input not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const Eigen::Index n = m.rows();
  Spectrum out;
  out.values = es.eigenvalues().reverse();
  if (with_vectors) {
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double largest_eigenvalue(const Matrix& hermitian) {
  return hermitian_eig(hermitian).values(0);
}

double entropy_of_eigenvalues(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) {
    if (v < -kEigClampTol)
      throw std::invalid_argument("entropy: eigenvalue below -1e-9, not a state");
    if (v > 0.0) s -= xlog2x(v);
  }
  return s;
}

double von_neumann_entropy(const Matrix& rho) {
  if (!is_hermitian(rho))
    throw std::invalid_argument("von_neumann_entropy: input not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 || std::abs(rho.trace().imag()) > 1e-9)
    throw std::invalid_argument("von_neumann_entropy: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return entropy_of_eigenvalues(
      std::span<const double>(es.eigenvalues().data(), es.eigenvalues().size()));
}

double shannon_entropy(std::span<const double> p) {
  double sum = 0.0;
  double s = 0.0;
  for (double x : p) {
    if (x < -kEigClampTol)
      throw std::invalid_argument("shannon_entropy: negative probability");
    if (x > 0.0) {
      sum += x;
      s -= xlog2x(x);
    }
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("shannon_entropy: probabilities do not sum to 1");
  return s;
}

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double binary_entropy_inverse_upper(double h) {
  if (h < -1e-12 || h > 1.0 + 1e-12)
    throw std::invalid_argument("binary_entropy_inverse_upper: value outside [0,1]");
  h = std::clamp(h, 0.0, 1.0);
  double lo = 0.5, hi = 1.0;  // H decreases from 1 to 0 on this branch
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) > h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool majorizes(std::span<const double> p, std::span<const double> q) {
  const size_t n = std::max(p.size(), q.size());
  std::vector<double> ps(n, 0.0), qs(n, 0.0);
  std::copy(p.begin(), p.end(), ps.begin());
  std::copy(q.begin(), q.end(), qs.begin());
  auto check = [](const std::vector<double>& d) {
    double sum = 0.0;
    for (double x : d) {
      if (x < -kEigClampTol)
        throw std::invalid_argument("majorizes: negative probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("majorizes: probabilities do not sum to 1");
  };
  check(ps);
  check(qs);
  std::sort(ps.rbegin(), ps.rend());
  std::sort(qs.rbegin(), qs.rend());
  double cp = 0.0, cq = 0.0;
  for (size_t k = 0; k < n; ++k) {
    cp += ps[k];
    cq += qs[k];
    if (cp < cq - 1e-12) return false;
  }
  return true;
}

namespace detail {

double entropy_psd_unchecked(const Matrix& rho) {
  if (rho.rows() == 2) {
    double lo, hi;
    eig2x2(rho, lo, hi);
    double s = 0.0;
    if (lo > 0.0) s -= xlog2x(lo);
    if (hi > 0.0) s -= xlog2x(hi);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > 0.0) s -= xlog2x(v);
  }
  return s;
}

void eig2x2(const Matrix& m, double& lo, double& hi) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double off = std::norm(m(0, 1));
  const double tr = a + d;
  const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * off));
  lo = 0.5 * (tr - disc);
  hi = 0.5 * (tr + disc);
}

}  // namespace detail

}  // namespace densecode
