#include "densecode/capacity.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "densecode/rng.hpp"

namespace densecode {

namespace {

constexpr double kLog2e = 1.4426950408889634;

// Single-qubit ZYZ Euler unitary Rz(a) Ry(b) Rz(c).
Eigen::Matrix2cd euler_zyz(double a, double b, double c) {
  const double cb = std::cos(0.5 * b);
  const double sb = std::sin(0.5 * b);
  Eigen::Matrix2cd u;
  u(0, 0) = std::exp(cxd(0.0, -0.5 * (a + c))) * cb;
  u(0, 1) = -std::exp(cxd(0.0, -0.5 * (a - c))) * sb;
  u(1, 0) = std::exp(cxd(0.0, 0.5 * (a - c))) * sb;
  u(1, 1) = std::exp(cxd(0.0, 0.5 * (a + c))) * cb;
  return u;
}

void apply_single_qubit(Vector& v, int n_qubits, int qubit,
                        const Eigen::Matrix2cd& u) {
  const long bit = 1L << (n_qubits - 1 - qubit);
  const long dim = v.size();
  for (long i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const cxd a = v(i);
    const cxd b = v(i | bit);
    v(i) = u(0, 0) * a + u(0, 1) * b;
    v(i | bit) = u(1, 0) * a + u(1, 1) * b;
  }
}

Vector encode(const Ket& psi, const SystemLayout& layout,
              std::span<const double> params) {
  Vector enc = psi.amplitudes;
  for (int i = 0; i < layout.n_senders(); ++i)
    apply_single_qubit(enc, psi.n_qubits, layout.senders[i],
                       euler_zyz(params[3 * i], params[3 * i + 1], params[3 * i + 2]));
  return enc;
}

// Entropy of sum_m w_m |K_m psi><K_m psi| through the Gram matrix of the
// weighted Kraus images; valid because the Kraus operators are unitary.
double pure_channel_entropy(const Vector& enc,
                            const std::vector<std::pair<double, Matrix>>& terms) {
  std::vector<Vector> images;
  std::vector<double> weights;
  for (const auto& [w, k] : terms) {
    if (w <= 0.0) continue;
    images.push_back(k * enc);
    weights.push_back(w);
  }
  const int r = static_cast<int>(images.size());
  Matrix gram(r, r);
  for (int m = 0; m < r; ++m) {
    for (int k = m; k < r; ++k) {
      const cxd g = std::sqrt(weights[m] * weights[k]) * images[m].dot(images[k]);
      gram(m, k) = g;
      gram(k, m) = std::conj(g);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > 0.0) s -= v * std::log(v) * kLog2e;
  }
  return s;
}

void check_layout(const SystemLayout& layout, int n_qubits, const char* who) {
  if (layout.n_qubits != n_qubits)
    throw std::invalid_argument(std::string(who) + ": layout does not match state");
}

CapacityResult assemble(int n_senders, double s_receiver, double s_state) {
  const double denom = n_senders + 1.0;
  const double floor = n_senders / denom;
  CapacityResult out;
  out.raw_capacity = (n_senders + s_receiver - s_state) / denom;
  out.capacity = std::max(floor, out.raw_capacity);
  out.dense_codeable = out.raw_capacity > floor + kStrictGuard;
  out.entropy_receiver = s_receiver;
  out.entropy_state = s_state;
  return out;
}

// Deterministic start points for the multi-start unitary search; identical
// across calls so capacity results are a pure function of their arguments.
std::vector<std::vector<double>> restart_points(int dim, int count) {
  Rng rng(0x6f70746d753158ULL);
  std::vector<std::vector<double>> starts;
  starts.reserve(count);
  for (int r = 0; r < count; ++r) {
    std::vector<double> x(dim);
    for (int i = 0; i < dim; ++i) {
      const bool polar = (i % 3) == 1;
      x[i] = polar ? rng.uniform(0.0, M_PI) : rng.uniform(0.0, 2.0 * M_PI);
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

MinEntropyResult minimize_entropy(
    const std::function<double(const std::vector<double>&)>& objective,
    int n_params, const OptimizerConfig& opt) {
  MinEntropyResult best;
  best.entropy = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n_params, 0.0);  // identity encoding
  for (auto& s : restart_points(n_params, opt.restarts)) starts.push_back(std::move(s));

  for (const auto& start : starts) {
    const SimplexResult r = nelder_mead(objective, start, 0.6, opt.max_iters, opt.tol);
    if (r.fmin < best.entropy) {
      best.entropy = r.fmin;
      best.params = r.x;
      best.converged = r.converged;
    }
  }
  return best;
}

}  // namespace

double receiver_lambda_max(const Matrix& rho, const SystemLayout& layout) {
  const Matrix r = partial_trace(rho, layout.n_qubits, {layout.receiver});
  double lo, hi;
  detail::eig2x2(r, lo, hi);
  return hi;
}

double receiver_lambda_max(const Ket& psi, const SystemLayout& layout) {
  const Matrix r =
      reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {layout.receiver});
  double lo, hi;
  detail::eig2x2(r, lo, hi);
  return hi;
}

CapacityResult noiseless_capacity(const Matrix& rho, const SystemLayout& layout) {
  const Eigen::Index dim = Eigen::Index{1} << layout.n_qubits;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("noiseless_capacity: dimension mismatch");
  const Matrix rho_r = partial_trace(rho, layout.n_qubits, {layout.receiver});
  const double s_r = detail::entropy_psd_unchecked(rho_r);
  const double s = von_neumann_entropy(rho);
  return assemble(layout.n_senders(), s_r, s);
}

CapacityResult noiseless_capacity(const Ket& psi, const SystemLayout& layout) {
  check_layout(layout, psi.n_qubits, "noiseless_capacity");
  const Matrix rho_r =
      reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {layout.receiver});
  return assemble(layout.n_senders(), detail::entropy_psd_unchecked(rho_r), 0.0);
}

bool is_dense_codeable(const Matrix& rho, const SystemLayout& layout) {
  const Matrix rho_r = partial_trace(rho, layout.n_qubits, {layout.receiver});
  const double s_r = detail::entropy_psd_unchecked(rho_r);
  const double s = von_neumann_entropy(rho);
  return s_r - s > kStrictGuard;
}

bool prop1_necessary(const Matrix& rho, const SystemLayout& layout) {
  const double mu1 = largest_eigenvalue(rho);
  const double lambda1 = receiver_lambda_max(rho, layout);
  return mu1 - lambda1 > kStrictGuard;
}

Matrix local_unitary(std::span<const double> params) {
  if (params.size() % 3 != 0 || params.empty())
    throw std::invalid_argument("local_unitary: need 3 Euler angles per sender");
  Matrix u = euler_zyz(params[0], params[1], params[2]);
  for (size_t i = 3; i < params.size(); i += 3)
    u = kron(u, Matrix(euler_zyz(params[i], params[i + 1], params[i + 2])));
  return u;
}

Matrix embed_sender_unitary(std::span<const double> params,
                            const SystemLayout& layout) {
  if (params.size() != static_cast<size_t>(3 * layout.n_senders()))
    throw std::invalid_argument("embed_sender_unitary: need 3 angles per sender");
  std::vector<Matrix> factors(layout.n_qubits, pauli(0));
  for (int i = 0; i < layout.n_senders(); ++i)
    factors[layout.senders[i]] =
        euler_zyz(params[3 * i], params[3 * i + 1], params[3 * i + 2]);
  Matrix u = factors[0];
  for (int q = 1; q < layout.n_qubits; ++q) u = kron(u, factors[q]);
  return u;
}

MinEntropyResult min_encoded_entropy(const Ket& psi, const SystemLayout& layout,
                                     const NoiseSpec& spec,
                                     const OptimizerConfig& opt) {
  check_layout(layout, psi.n_qubits, "min_encoded_entropy");
  validate(spec);
  const int n_params = 3 * layout.n_senders();

  if (std::holds_alternative<UncorrelatedDepolarizing>(spec)) {
    // The per-qubit depolarizing map commutes with every single-qubit
    // unitary, so the output entropy does not depend on the encoding.
    const Matrix out = apply_noise(density(psi), layout, spec);
    return {detail::entropy_psd_unchecked(out), std::vector<double>(n_params, 0.0),
            true};
  }

  const auto terms = kraus_terms(layout, spec);
  const auto objective = [&](const std::vector<double>& x) {
    return pure_channel_entropy(encode(psi, layout, x), terms);
  };
  return minimize_entropy(objective, n_params, opt);
}

MinEntropyResult min_encoded_entropy(const Matrix& rho, const SystemLayout& layout,
                                     const NoiseSpec& spec,
                                     const OptimizerConfig& opt) {
  const Eigen::Index dim = Eigen::Index{1} << layout.n_qubits;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("min_encoded_entropy: dimension mismatch");
  validate(spec);
  const int n_params = 3 * layout.n_senders();

  if (std::holds_alternative<UncorrelatedDepolarizing>(spec)) {
    const Matrix out = apply_noise(rho, layout, spec);
    return {detail::entropy_psd_unchecked(out), std::vector<double>(n_params, 0.0),
            true};
  }

  const auto objective = [&](const std::vector<double>& x) {
    const Matrix u = embed_sender_unitary(x, layout);
    const Matrix out = apply_noise(u * rho * u.adjoint(), layout, spec);
    return detail::entropy_psd_unchecked(out);
  };
  return minimize_entropy(objective, n_params, opt);
}

double encoded_entropy(const Ket& psi, const SystemLayout& layout,
                       const NoiseSpec& spec, std::span<const double> params) {
  check_layout(layout, psi.n_qubits, "encoded_entropy");
  if (std::holds_alternative<UncorrelatedDepolarizing>(spec)) {
    const Vector enc = encode(psi, layout, params);
    const Matrix out = apply_noise(Matrix(enc * enc.adjoint()), layout, spec);
    return detail::entropy_psd_unchecked(out);
  }
  return pure_channel_entropy(encode(psi, layout, params), kraus_terms(layout, spec));
}

CapacityResult noisy_capacity(const Ket& psi, const SystemLayout& layout,
                              const NoiseSpec& spec, const OptimizerConfig& opt) {
  const MinEntropyResult m = min_encoded_entropy(psi, layout, spec, opt);
  const Matrix rho_r =
      reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {layout.receiver});
  CapacityResult out =
      assemble(layout.n_senders(), detail::entropy_psd_unchecked(rho_r), m.entropy);
  out.optimal_unitary_params = m.params;
  out.certified = m.converged;
  return out;
}

CapacityResult noisy_capacity(const Matrix& rho, const SystemLayout& layout,
                              const NoiseSpec& spec, const OptimizerConfig& opt) {
  const MinEntropyResult m = min_encoded_entropy(rho, layout, spec, opt);
  const Matrix rho_r = partial_trace(rho, layout.n_qubits, {layout.receiver});
  CapacityResult out =
      assemble(layout.n_senders(), detail::entropy_psd_unchecked(rho_r), m.entropy);
  out.optimal_unitary_params = m.params;
  out.certified = m.converged;
  return out;
}

bool receiver_attains_max_lambda(const Ket& psi, const SystemLayout& layout) {
  check_layout(layout, psi.n_qubits, "receiver_attains_max_lambda");
  double lambda_r = 0.0, lambda_max = 0.0;
  for (int q = 0; q < psi.n_qubits; ++q) {
    const Matrix r = reduced_density_from_ket(psi.amplitudes, psi.n_qubits, {q});
    double lo, hi;
    detail::eig2x2(r, lo, hi);
    if (q == layout.receiver) lambda_r = hi;
    lambda_max = std::max(lambda_max, hi);
  }
  return lambda_r >= lambda_max - 1e-12;
}

double encoded_noisy_lambda_max(const Ket& psi, const SystemLayout& layout,
                                const NoiseSpec& spec,
                                std::span<const double> params) {
  const Vector enc = encode(psi, layout, params);
  const Matrix out = apply_noise(Matrix(enc * enc.adjoint()), layout, spec);
  return largest_eigenvalue(out);
}

Theorem3Flags theorem3_conditions(const Ket& psi, const FullyCorrelatedPauli& spec,
                                  const OptimizerConfig& opt,
                                  const SystemLayout& layout) {
  if (psi.n_qubits != 3)
    throw std::invalid_argument("theorem3_conditions: expects a three-qubit state");
  Theorem3Flags flags;
  flags.cond_ii = receiver_attains_max_lambda(psi, layout);

  const NoiseSpec noise{spec};
  const MinEntropyResult m = min_encoded_entropy(psi, layout, noise, opt);
  const double lambda1 = encoded_noisy_lambda_max(psi, layout, noise, m.params);
  const double c = spec.q[1] + spec.q[2];
  flags.cond_i = lambda1 <= std::max(c, 1.0 - c) + 1e-12;
  return flags;
}

}  // namespace densecode
