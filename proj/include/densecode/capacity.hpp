#pragma once

#include <optional>
#include <span>
#include <vector>

#include "densecode/channels.hpp"
#include "densecode/optim.hpp"
#include "densecode/qmat.hpp"
#include "densecode/states.hpp"

namespace densecode {

/// Dense-coding capacity of a shared state, normalized to [N/(N+1), 1].
/// raw_capacity is the second max-argument over the normalizer and may fall
/// below the classical floor N/(N+1).
struct CapacityResult {
  double capacity = 0.0;
  double raw_capacity = 0.0;
  bool dense_codeable = false;
  double entropy_receiver = 0.0;  // S(rho_R), bits
  double entropy_state = 0.0;     // S(rho) noiseless / minimized S(rho~) noisy
  std::optional<std::vector<double>> optimal_unitary_params;
  bool certified = true;  // false when the entropy minimizer hit its budget
};

double receiver_lambda_max(const Matrix& rho, const SystemLayout& layout);
double receiver_lambda_max(const Ket& psi, const SystemLayout& layout);

CapacityResult noiseless_capacity(const Matrix& rho, const SystemLayout& layout);
CapacityResult noiseless_capacity(const Ket& psi, const SystemLayout& layout);

/// S(rho_R) > S(rho) with a 1e-9 strictness guard; equality counts as not
/// dense codeable.
bool is_dense_codeable(const Matrix& rho, const SystemLayout& layout);

/// Largest global eigenvalue strictly above the largest receiver eigenvalue
/// (same guard); necessary for dense codeability.
bool prop1_necessary(const Matrix& rho, const SystemLayout& layout);

/// Product of per-sender ZYZ Euler unitaries: params holds 3 angles per
/// sender, factors ordered as layout.senders. Dimension 2^N.
Matrix local_unitary(std::span<const double> params);

/// The same product embedded on the full register (identity on the receiver).
Matrix embed_sender_unitary(std::span<const double> params,
                            const SystemLayout& layout);

/// Minimized von Neumann entropy of the channel output over local encoding
/// unitaries on the senders, multi-start simplex over the 3N Euler angles.
/// Restart start points are a fixed deterministic set, so results depend
/// only on (state, spec, opt). For unitarily covariant channels
/// (uncorrelated depolarizing) the objective is flat and the identity
/// encoding is returned directly.
struct MinEntropyResult {
  double entropy = 0.0;
  std::vector<double> params;
  bool converged = true;
};
MinEntropyResult min_encoded_entropy(const Ket& psi, const SystemLayout& layout,
                                     const NoiseSpec& spec,
                                     const OptimizerConfig& opt = {});
MinEntropyResult min_encoded_entropy(const Matrix& rho, const SystemLayout& layout,
                                     const NoiseSpec& spec,
                                     const OptimizerConfig& opt = {});

/// Channel-output entropy for one specific encoding (diagnostics / tests).
double encoded_entropy(const Ket& psi, const SystemLayout& layout,
                       const NoiseSpec& spec, std::span<const double> params);

CapacityResult noisy_capacity(const Ket& psi, const SystemLayout& layout,
                              const NoiseSpec& spec, const OptimizerConfig& opt = {});
CapacityResult noisy_capacity(const Matrix& rho, const SystemLayout& layout,
                              const NoiseSpec& spec, const OptimizerConfig& opt = {});

struct Theorem3Flags {
  bool cond_i = false;   // largest noisy eigenvalue <= max{q1+q2, 1-q1-q2}
  bool cond_ii = false;  // receiver marginal attains the largest single-party
                         // eigenvalue
};
Theorem3Flags theorem3_conditions(const Ket& psi, const FullyCorrelatedPauli& spec,
                                  const OptimizerConfig& opt = {},
                                  const SystemLayout& layout = default_layout(3));

/// cond_ii alone (no optimization needed).
bool receiver_attains_max_lambda(const Ket& psi, const SystemLayout& layout);

/// Largest eigenvalue of the noisy state after a given encoding.
double encoded_noisy_lambda_max(const Ket& psi, const SystemLayout& layout,
                                const NoiseSpec& spec, std::span<const double> params);

}  // namespace densecode
