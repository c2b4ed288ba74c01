#include "densecode/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace densecode {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kRankCutoff = 1e-12;

// sum_j -mu_j log2(mu_j / p) for a branch with unnormalized eigenvalues mu
// summing to p; equals p * S(X/p).
double branch_entropy(std::span<const double> mu, double p) {
  double s = 0.0;
  const double log2p = std::log(p) * kLog2e;
  for (double m : mu)
    if (m > 0.0) s -= m * (std::log(m) * kLog2e - log2p);
  return s;
}

// Objective sum_i p_i S(rho_{A|i}) for the projective measurement with
// retained axis (theta, phi) on one qubit. Uses a low-rank Gram form when
// the state has rank <= 2, which covers the pure and rank-2 families.
class ConditionalEntropyObjective {
 public:
  ConditionalEntropyObjective(const Matrix& rho, int n_qubits, int measured_qubit)
      : rho_(rho), dim_a_(1L << (n_qubits - 1)) {
    full_idx_.resize(dim_a_ * 2);
    const int shift = n_qubits - 1 - measured_qubit;
    const long mq_bit = 1L << shift;
    const long low_mask = mq_bit - 1;
    for (long a = 0; a < dim_a_; ++a) {
      const long high = (a & ~low_mask) << 1;
      const long low = a & low_mask;
      full_idx_[2 * a] = high | low;
      full_idx_[2 * a + 1] = high | mq_bit | low;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double w = es.eigenvalues()(i);
      if (w > kRankCutoff) {
        weights_.push_back(w);
        vectors_.push_back(es.eigenvectors().col(i));
      }
    }
    low_rank_ = weights_.size() <= 2;
  }

  double operator()(double theta, double phi) const {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const cxd e = std::exp(cxd(0.0, phi));
    const cxd beta0[2] = {c, s * e};
    const cxd beta1[2] = {-s * std::conj(e), c};
    return low_rank_ ? eval_low_rank(beta0) + eval_low_rank(beta1)
                     : eval_dense(beta0) + eval_dense(beta1);
  }

 private:
  double eval_low_rank(const cxd beta[2]) const {
    const int r = static_cast<int>(weights_.size());
    // v_k[a] = <a,beta|e_k>
    cxd v[2][32];
    for (int k = 0; k < r; ++k)
      for (long a = 0; a < dim_a_; ++a)
        v[k][a] = std::conj(beta[0]) * vectors_[k](full_idx_[2 * a]) +
                  std::conj(beta[1]) * vectors_[k](full_idx_[2 * a + 1]);
    // Gram matrix M_kl = sqrt(w_k w_l) <v_k|v_l>; its spectrum is the
    // nonzero spectrum of the conditional branch operator.
    double m00 = 0.0;
    for (long a = 0; a < dim_a_; ++a) m00 += std::norm(v[0][a]);
    m00 *= weights_[0];
    if (r == 1) {
      return 0.0;  // pure branch
    }
    double m11 = 0.0;
    cxd m01 = 0.0;
    for (long a = 0; a < dim_a_; ++a) {
      m11 += std::norm(v[1][a]);
      m01 += std::conj(v[0][a]) * v[1][a];
    }
    m11 *= weights_[1];
    m01 *= std::sqrt(weights_[0] * weights_[1]);
    const double p = m00 + m11;
    if (p < 1e-14) return 0.0;
    const double disc =
        std::sqrt(std::max(0.0, (m00 - m11) * (m00 - m11) + 4.0 * std::norm(m01)));
    const double mu[2] = {0.5 * (p - disc), 0.5 * (p + disc)};
    return branch_entropy(mu, p);
  }

  double eval_dense(const cxd beta[2]) const {
    Matrix x(dim_a_, dim_a_);
    for (long a = 0; a < dim_a_; ++a) {
      for (long ap = a; ap < dim_a_; ++ap) {
        cxd acc = 0.0;
        for (int b = 0; b < 2; ++b)
          for (int bp = 0; bp < 2; ++bp)
            acc += std::conj(beta[b]) * rho_(full_idx_[2 * a + b], full_idx_[2 * ap + bp]) *
                   beta[bp];
        x(a, ap) = acc;
        x(ap, a) = std::conj(acc);
      }
    }
    const double p = x.trace().real();
    if (p < 1e-14) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
    std::vector<double> mu(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    for (double& m : mu) m = std::max(0.0, m);
    return branch_entropy(mu, p);
  }

  const Matrix& rho_;
  long dim_a_;
  std::vector<long> full_idx_;
  std::vector<double> weights_;
  std::vector<Vector> vectors_;
  bool low_rank_ = false;
};

std::vector<int> sorted_pair(int a, int b) {
  return a < b ? std::vector<int>{a, b} : std::vector<int>{b, a};
}

double det2_hermitian(const Matrix& m) {
  return m(0, 0).real() * m(1, 1).real() - std::norm(m(0, 1));
}

void require_density(const Matrix& rho, Eigen::Index dim, const char* who) {
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument(std::string(who) + ": wrong dimension");
  if (!is_hermitian(rho))
    throw std::invalid_argument(std::string(who) + ": state not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(who) + ": trace is not 1");
}

}  // namespace

MeasureValue concurrence(const Matrix& rho) {
  require_density(rho, 4, "concurrence");
  const Matrix yy = kron(pauli(2), pauli(2));
  const Matrix rho_tilde = yy * rho.conjugate() * yy;

  Spectrum s = hermitian_eig(rho, true);
  Eigen::VectorXd roots = s.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_rho = s.vectors * roots.asDiagonal() * s.vectors.adjoint();
  Matrix m = sqrt_rho * rho_tilde * sqrt_rho;
  m = 0.5 * (m + Matrix(m.adjoint()));

  const Spectrum ms = hermitian_eig(m);
  // Rank-deficient inputs leave eigenvalue dust ~1e-16 whose square roots
  // would pollute the sum at the 1e-8 level; flush it before the sqrt.
  Eigen::VectorXd clamped = ms.values.cwiseMax(0.0);
  for (Eigen::Index i = 0; i < clamped.size(); ++i)
    if (clamped(i) < 1e-13) clamped(i) = 0.0;
  const Eigen::VectorXd lambda = clamped.cwiseSqrt();
  const double c = lambda(0) - lambda(1) - lambda(2) - lambda(3);
  return {MeasureKind::Concurrence, std::max(0.0, c), true};
}

ConditionalEntropyResult min_conditional_entropy(const Matrix& rho, int n_qubits,
                                                 int measured_qubit,
                                                 const OptimizerConfig& opt) {
  require_density(rho, Eigen::Index{1} << n_qubits, "min_conditional_entropy");
  if (measured_qubit < 0 || measured_qubit >= n_qubits)
    throw std::invalid_argument("min_conditional_entropy: measured qubit out of range");

  const ConditionalEntropyObjective objective(rho, n_qubits, measured_qubit);
  const int g = std::max(2, opt.grid_resolution);
  const double dtheta = M_PI / (g - 1);
  const double dphi = 2.0 * M_PI / g;

  struct Cell {
    double value, theta, phi;
  };
  std::array<Cell, 3> best;
  best.fill({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  auto offer = [&](double v, double th, double ph) {
    for (size_t i = 0; i < best.size(); ++i) {
      if (v < best[i].value) {
        for (size_t j = best.size() - 1; j > i; --j) best[j] = best[j - 1];
        best[i] = {v, th, ph};
        break;
      }
    }
  };
  for (int i = 0; i < g; ++i) {
    const double theta = i * dtheta;
    for (int j = 0; j < g; ++j) {
      const double phi = j * dphi;
      offer(objective(theta, phi), theta, phi);
    }
  }

  ConditionalEntropyResult result{best[0].value, best[0].theta, best[0].phi, true};
  bool best_converged = true;
  auto f = [&](const std::vector<double>& x) { return objective(x[0], x[1]); };
  for (const Cell& cell : best) {
    if (!std::isfinite(cell.value)) continue;
    const SimplexResult r =
        nelder_mead(f, {cell.theta, cell.phi}, dtheta, opt.max_iters, 1e-7);
    if (r.fmin < result.value) {
      result.value = r.fmin;
      result.theta = r.x[0];
      result.phi = r.x[1];
      best_converged = r.converged;
    }
  }
  result.converged = best_converged;
  return result;
}

MeasureValue quantum_discord_on(const Matrix& rho, int n_qubits, int measured_qubit,
                                const OptimizerConfig& opt) {
  require_density(rho, Eigen::Index{1} << n_qubits, "quantum_discord");
  const double s_ab = von_neumann_entropy(rho);
  const Matrix rho_b = partial_trace(rho, n_qubits, {measured_qubit});
  const double s_b = detail::entropy_psd_unchecked(rho_b);
  const ConditionalEntropyResult cond =
      min_conditional_entropy(rho, n_qubits, measured_qubit, opt);

  double d = s_b - s_ab + cond.value;
  bool converged = cond.converged;
  if (d < -1e-6) converged = false;  // optimizer missed the minimum
  d = std::max(d, 0.0);
  return {MeasureKind::Discord, d, converged};
}

MeasureValue quantum_discord(const Matrix& rho, MeasuredSide side,
                             const OptimizerConfig& opt) {
  return quantum_discord_on(rho, 2, side == MeasuredSide::First ? 0 : 1, opt);
}

MeasureValue tangle_score(const Ket& psi, const SystemLayout& layout) {
  if (layout.n_qubits != psi.n_qubits)
    throw std::invalid_argument("tangle_score: layout does not match state");
  const Matrix rho_r =
      reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {layout.receiver});
  double value = 4.0 * det2_hermitian(rho_r);
  for (int s : layout.senders) {
    const Matrix pair = reduced_density_from_ket(psi.amplitudes, psi.n_qubits,
                                                 sorted_pair(s, layout.receiver));
    const double c = concurrence(pair).value;
    value -= c * c;
  }
  return {MeasureKind::TangleScore, value, true};
}

MeasureValue discord_score(const Ket& psi, const SystemLayout& layout,
                           const OptimizerConfig& opt) {
  if (layout.n_qubits != psi.n_qubits)
    throw std::invalid_argument("discord_score: layout does not match state");
  const Matrix rho_r =
      reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {layout.receiver});
  double value = detail::entropy_psd_unchecked(rho_r);
  bool converged = true;
  for (int s : layout.senders) {
    const Matrix pair = reduced_density_from_ket(psi.amplitudes, psi.n_qubits,
                                                 sorted_pair(s, layout.receiver));
    const int receiver_pos = layout.receiver < s ? 0 : 1;
    const MeasureValue d = quantum_discord_on(pair, 2, receiver_pos, opt);
    value -= d.value;
    converged = converged && d.converged;
  }
  return {MeasureKind::DiscordScore, value, converged};
}

MeasureValue discord_score(const Matrix& rho, const SystemLayout& layout,
                           const OptimizerConfig& opt) {
  require_density(rho, Eigen::Index{1} << layout.n_qubits, "discord_score");
  const MeasureValue n_to_one =
      quantum_discord_on(rho, layout.n_qubits, layout.receiver, opt);
  double value = n_to_one.value;
  bool converged = n_to_one.converged;
  for (int s : layout.senders) {
    const Matrix pair =
        partial_trace(rho, layout.n_qubits, sorted_pair(s, layout.receiver));
    const int receiver_pos = layout.receiver < s ? 0 : 1;
    const MeasureValue d = quantum_discord_on(pair, 2, receiver_pos, opt);
    value -= d.value;
    converged = converged && d.converged;
  }
  return {MeasureKind::DiscordScore, value, converged};
}

MeasureValue ggm(const Ket& psi) {
  const int n = psi.n_qubits;
  if (n < 2) throw std::invalid_argument("ggm: need at least two qubits");
  double lambda_max = 0.0;
  const int half = n / 2;
  for (long mask = 1; mask < (1L << n); ++mask) {
    const int size = __builtin_popcountl(mask);
    if (size < 1 || size > half) continue;
    std::vector<int> keep;
    for (int q = 0; q < n; ++q)
      if (mask & (1L << q)) keep.push_back(q);
    const Matrix reduced = reduced_density_from_ket(psi.amplitudes, n, keep);
    double lo, hi;
    if (reduced.rows() == 2) {
      detail::eig2x2(reduced, lo, hi);
    } else {
      hi = hermitian_eig(reduced).values(0);
    }
    lambda_max = std::max(lambda_max, hi);
  }
  return {MeasureKind::Ggm, 1.0 - lambda_max, true};
}

std::vector<double> single_party_lambdas(const Ket& psi) {
  std::vector<double> out(psi.n_qubits);
  for (int q = 0; q < psi.n_qubits; ++q) {
    const Matrix r = reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {q});
    double lo, hi;
    detail::eig2x2(r, lo, hi);
    out[q] = hi;
  }
  return out;
}

}  // namespace densecode
