#pragma once

#include <vector>

#include "densecode/qmat.hpp"
#include "densecode/rng.hpp"

namespace densecode {

/// Normalized pure state on 1..5 qubits.
struct Ket {
  int n_qubits = 0;
  Vector amplitudes;
};

/// Validates dimensions and normalization (1e-9) before returning.
Ket make_ket(int n_qubits, Vector amplitudes);

Matrix density(const Ket& psi);

/// Partition of the register into senders and a single receiver.
struct SystemLayout {
  int n_qubits = 0;
  std::vector<int> senders;
  int receiver = 0;

  int n_senders() const { return static_cast<int>(senders.size()); }
};

/// Throws unless senders + receiver form a disjoint cover of 0..n-1.
SystemLayout make_layout(int n_qubits, std::vector<int> senders, int receiver);

/// Senders 0..n-2 in order, receiver last.
SystemLayout default_layout(int n_qubits);

/// sqrt(alpha)|0...0> + sqrt(1-alpha) e^{i phi}|1...1> on n_parties qubits.
/// alpha must lie strictly inside (0,1).
Ket gghz(int n_parties, double alpha, double phi);

/// Haar-uniform pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalized.
Ket haar_pure(int n_qubits, Rng& rng);

/// Rank-<=2 mixed state induced from a Haar-uniform pure state on one extra
/// ancilla qubit, appended as the last tensor factor and traced out.
Matrix haar_rank2_mixed(int n_qubits, Rng& rng);

/// q|GHZ><GHZ| + (1-q)|GHZ'><GHZ'| with GHZ' = (|000> - |111>)/sqrt(2).
Matrix ghz_prime_mixture(double q);

/// (1-p) rho + (p/8) I_8 for a three-qubit rho; full rank for p > 0.
Matrix rank8_family(const Matrix& rho, double p);

}  // namespace densecode
