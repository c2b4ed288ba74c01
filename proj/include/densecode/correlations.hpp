#pragma once

#include "densecode/optim.hpp"
#include "densecode/qmat.hpp"
#include "densecode/states.hpp"

namespace densecode {

enum class MeasureKind { Concurrence, Discord, TangleScore, DiscordScore, Ggm };

/// A named correlation value. Units: tangle-related quantities in ebits,
/// discord-related in bits, concurrence and GGM dimensionless.
struct MeasureValue {
  MeasureKind kind;
  double value = 0.0;
  bool converged = true;  // false when an optimizer hit its iteration cap
};

enum class MeasuredSide { First, Second };

/// Wootters concurrence of a two-qubit state: max{0, l1-l2-l3-l4} with l_i
/// the descending square-rooted eigenvalues of rho * rho_tilde and
/// rho_tilde = (sy x sy) rho^* (sy x sy), conjugation in the computational
/// basis. Computed through the Hermitian form sqrt(rho) rho_tilde sqrt(rho).
MeasureValue concurrence(const Matrix& rho);

/// Result of minimizing the measured conditional entropy over rank-1
/// projective measurements {B_i} on one qubit, parameterized by the Bloch
/// angles (theta, phi) of the retained projector axis.
struct ConditionalEntropyResult {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  bool converged = true;
};

/// min over (theta, phi) of sum_i p_i S(rho_{A|i}) where the measurement
/// acts on `measured_qubit` and A is the rest of the register. Coarse
/// grid_resolution^2 scan followed by simplex refinement from the best
/// three cells.
ConditionalEntropyResult min_conditional_entropy(const Matrix& rho, int n_qubits,
                                                 int measured_qubit,
                                                 const OptimizerConfig& opt = {});

/// Quantum discord D = I - J of an n-qubit state with the projective
/// measurement on `measured_qubit`; the unmeasured remainder plays A.
MeasureValue quantum_discord_on(const Matrix& rho, int n_qubits, int measured_qubit,
                                const OptimizerConfig& opt = {});

/// Two-qubit quantum discord, measurement on the chosen side.
MeasureValue quantum_discord(const Matrix& rho, MeasuredSide side,
                             const OptimizerConfig& opt = {});

/// Tangle monogamy score with the receiver as the nodal observer:
/// C^2_{S1..SN:R} - sum_i C^2(rho_{SiR}). Pure states only; the N:1 term
/// equals 4 det(rho_R).
MeasureValue tangle_score(const Ket& psi, const SystemLayout& layout);

/// Discord monogamy score with the receiver as nodal observer and every
/// measurement on the receiver qubit. For the pure-state overload the N:1
/// term is S(rho_R); for mixed states it is the discord across the
/// senders:receiver split.
MeasureValue discord_score(const Ket& psi, const SystemLayout& layout,
                           const OptimizerConfig& opt = {});
MeasureValue discord_score(const Matrix& rho, const SystemLayout& layout,
                           const OptimizerConfig& opt = {});

/// Generalized geometric measure of a pure state: 1 minus the largest
/// reduced-density-matrix eigenvalue over all bipartitions (subsets of
/// size 1..floor(n/2) suffice; complements share spectra).
MeasureValue ggm(const Ket& psi);

/// Largest single-party reduced eigenvalue for each qubit of a pure state.
std::vector<double> single_party_lambdas(const Ket& psi);

}  // namespace densecode
