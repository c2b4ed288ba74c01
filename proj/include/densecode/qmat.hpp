#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace densecode {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerance ledger shared by all modules. Dimensions never exceed 32, so
// double precision supports these comfortably.
inline constexpr double kHermitianTol = 1e-9;   // Hermiticity / trace checks
inline constexpr double kEigClampTol = 1e-9;    // eigenvalues in [-tol,0] -> 0
inline constexpr double kEntropyTol = 1e-8;     // entropy comparisons
inline constexpr double kStrictGuard = 1e-9;    // strict ">" predicates

// Qubit ordering convention: big-endian. Qubit 0 is the leftmost tensor
// factor, i.e. the most significant bit of a computational-basis index.
// All modules share this convention.

/// Eigensystem of a Hermitian operator, eigenvalues sorted descending.
struct Spectrum {
  Eigen::VectorXd values;
  Matrix vectors;  // empty unless requested; columns match values
  bool has_vectors() const { return vectors.size() > 0; }
};

const Matrix& pauli(int m);  // 0:identity, 1:sigma_x, 2:sigma_y, 3:sigma_z
Matrix identity(Eigen::Index dim);

/// Tensor product. Throws if the product dimension would overflow 2^32.
Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_density_matrix(const Matrix& m, double tol = kHermitianTol);

/// Reduced state on `keep` (strictly ascending qubit indices). Kept qubits
/// retain their relative order in the result.
Matrix partial_trace(const Matrix& rho, int n_qubits,
                     const std::vector<int>& keep);

/// Reduced state of a pure state, computed from the amplitude vector.
Matrix reduced_density_from_ket(const Vector& amplitudes, int n_qubits,
                                const std::vector<int>& keep);

/// Throws if m is not Hermitian within kHermitianTol.
Spectrum hermitian_eig(const Matrix& m, bool with_vectors = false);

double largest_eigenvalue(const Matrix& hermitian);

/// S(rho) = -Tr(rho log2 rho) in bits. Eigenvalues in [-kEigClampTol, 0]
/// are clamped to zero; anything lower is rejected.
double von_neumann_entropy(const Matrix& rho);

/// Entropy of an eigenvalue/probability list with the 0*log(0)=0 convention.
double entropy_of_eigenvalues(std::span<const double> values);

/// H(p) = -sum p_x log2 p_x; requires p_x >= 0 and sum p = 1 within tol.
double shannon_entropy(std::span<const double> p);

/// Binary entropy H(x) in bits, symmetric about 1/2.
double binary_entropy(double x);

/// Inverse of the binary entropy on the branch alpha in [1/2, 1],
/// solved by bisection to 1e-10.
double binary_entropy_inverse_upper(double h);

/// True iff every partial sum of descending-sorted p dominates that of q.
/// The shorter list is zero-padded.
bool majorizes(std::span<const double> p, std::span<const double> q);

namespace detail {
// Entropy of an already-validated PSD Hermitian matrix; skips the
// Hermiticity check so optimizer inner loops stay cheap.
double entropy_psd_unchecked(const Matrix& rho);
// Eigenvalues of a 2x2 Hermitian matrix by the trace/determinant formula.
void eig2x2(const Matrix& m, double& lo, double& hi);
}  // namespace detail

}  // namespace densecode
