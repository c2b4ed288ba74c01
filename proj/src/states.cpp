#include "densecode/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace densecode {

Ket make_ket(int n_qubits, Vector amplitudes) {
  if (n_qubits < 1 || n_qubits > 5)
    throw std::invalid_argument("make_ket: n_qubits must be 1..5");
  if (amplitudes.size() != (Eigen::Index{1} << n_qubits))
    throw std::invalid_argument("make_ket: amplitude count does not match qubit count");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("make_ket: state is not normalized");
  return Ket{n_qubits, std::move(amplitudes)};
}

Matrix density(const Ket& psi) {
  return psi.amplitudes * psi.amplitudes.adjoint();
}

SystemLayout make_layout(int n_qubits, std::vector<int> senders, int receiver) {
  if (n_qubits < 2 || n_qubits > 5)
    throw std::invalid_argument("make_layout: n_qubits must be 2..5");
  if (senders.size() != static_cast<size_t>(n_qubits - 1))
    throw std::invalid_argument("make_layout: need exactly n_qubits-1 senders");
  std::vector<bool> seen(n_qubits, false);
  auto mark = [&](int q) {
    if (q < 0 || q >= n_qubits)
      throw std::invalid_argument("make_layout: qubit index out of range");
    if (seen[q]) throw std::invalid_argument("make_layout: duplicate qubit index");
    seen[q] = true;
  };
  for (int s : senders) mark(s);
  mark(receiver);
  return SystemLayout{n_qubits, std::move(senders), receiver};
}

SystemLayout default_layout(int n_qubits) {
  std::vector<int> senders(n_qubits - 1);
  std::iota(senders.begin(), senders.end(), 0);
  return make_layout(n_qubits, std::move(senders), n_qubits - 1);
}

Ket gghz(int n_parties, double alpha, double phi) {
  if (n_parties < 2 || n_parties > 5)
    throw std::invalid_argument("gghz: n_parties must be 2..5");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("gghz: alpha must lie strictly in (0,1)");
  const Eigen::Index dim = Eigen::Index{1} << n_parties;
  Vector amps = Vector::Zero(dim);
  amps(0) = std::sqrt(alpha);
  amps(dim - 1) = std::sqrt(1.0 - alpha) * std::exp(cxd(0.0, phi));
  return Ket{n_parties, std::move(amps)};
}

Ket haar_pure(int n_qubits, Rng& rng) {
  if (n_qubits < 1 || n_qubits > 5)
    throw std::invalid_argument("haar_pure: n_qubits must be 1..5");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vector amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i) amps(i) = rng.normal_complex();
  amps /= amps.norm();
  return Ket{n_qubits, std::move(amps)};
}

Matrix haar_rank2_mixed(int n_qubits, Rng& rng) {
  if (n_qubits < 2 || n_qubits > 4)
    throw std::invalid_argument("haar_rank2_mixed: n_qubits must be 2..4");
  const Ket parent = haar_pure(n_qubits + 1, rng);
  std::vector<int> keep(n_qubits);
  std::iota(keep.begin(), keep.end(), 0);
  return reduced_density_from_ket(parent.amplitudes, n_qubits + 1, keep);
}

Matrix ghz_prime_mixture(double q) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("ghz_prime_mixture: q must lie in [0,1]");
  Vector ghz = Vector::Zero(8), ghz_prime = Vector::Zero(8);
  const double r = 1.0 / std::sqrt(2.0);
  ghz(0) = r;
  ghz(7) = r;
  ghz_prime(0) = r;
  ghz_prime(7) = -r;
  return q * (ghz * ghz.adjoint()) + (1.0 - q) * (ghz_prime * ghz_prime.adjoint());
}

Matrix rank8_family(const Matrix& rho, double p) {
  if (rho.rows() != 8 || rho.cols() != 8)
    throw std::invalid_argument("rank8_family: rho must be a three-qubit state");
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("rank8_family: p must lie in [0,1]");
  return (1.0 - p) * rho + (p / 8.0) * Matrix::Identity(8, 8);
}

}  // namespace densecode
