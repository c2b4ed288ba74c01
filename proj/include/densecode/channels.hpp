#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "densecode/qmat.hpp"
#include "densecode/rng.hpp"
#include "densecode/states.hpp"

namespace densecode {

/// Single-qubit Pauli channel weights; identity weight is the remainder.
struct SinglePauli {
  double lambda_x = 0.0, lambda_y = 0.0, lambda_z = 0.0;
};

/// The same Pauli applied to every sender qubit with probability q[m]
/// (m = 0 identity, 1..3 the Paulis); the receiver is untouched.
struct FullyCorrelatedPauli {
  std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};
};

/// Independent depolarizing noise of strength p on each sender qubit.
struct UncorrelatedDepolarizing {
  double p = 0.0;
};

using NoiseSpec = std::variant<SinglePauli, FullyCorrelatedPauli, UncorrelatedDepolarizing>;

/// Throws std::invalid_argument on weight constraint violations.
void validate(const NoiseSpec& spec);

std::string noise_label(const NoiseSpec& spec);

/// Weighted unitary Kraus terms of a register channel: Pauli strings over
/// the sender qubits, identity on the receiver.
std::vector<std::pair<double, Matrix>> kraus_terms(const SystemLayout& layout,
                                                   const NoiseSpec& spec);

Matrix pauli_single(const Matrix& rho, const SinglePauli& spec);

Matrix fully_correlated_pauli(const Matrix& rho, const SystemLayout& layout,
                              const std::array<double, 4>& q);

/// Product expansion over per-sender Pauli weights {1-p, p/3, p/3, p/3};
/// equals composing a single-qubit depolarizing map on each sender.
Matrix uncorrelated_depolarizing(const Matrix& rho, const SystemLayout& layout,
                                 double p);

Matrix apply_noise(const Matrix& rho, const SystemLayout& layout,
                   const NoiseSpec& spec);

/// True iff the channel commutes with every Pauli string on the sender
/// register, tested on `trials` random density matrices to 1e-10.
bool covariance_check(const std::function<Matrix(const Matrix&)>& channel,
                      const SystemLayout& layout, int trials, Rng& rng,
                      double tol = 1e-10);
bool covariance_check(const NoiseSpec& spec, const SystemLayout& layout, int trials,
                      Rng& rng);

/// Choi state (channel x id applied to a maximally entangled pair); PSD iff
/// the channel is completely positive.
Matrix choi_matrix(const std::function<Matrix(const Matrix&)>& channel,
                   Eigen::Index dim);

/// Random full-rank density matrix (Hilbert-Schmidt style: GG^dag normalized).
Matrix random_density_matrix(Eigen::Index dim, Rng& rng);

/// Key-value serialization used by the experiment config files
/// (channel=correlated_pauli with q=[...], channel=depolarizing with p=...).
NoiseSpec noise_from_config(const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> noise_to_config(const NoiseSpec& spec);

}  // namespace densecode
