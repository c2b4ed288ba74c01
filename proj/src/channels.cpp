#include "densecode/channels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace densecode {

namespace {

Matrix pauli_string(const SystemLayout& layout, const std::vector<int>& labels) {
  // labels[i] is the Pauli index on sender i; receiver gets the identity.
  std::vector<int> per_qubit(layout.n_qubits, 0);
  for (size_t i = 0; i < layout.senders.size(); ++i)
    per_qubit[layout.senders[i]] = labels[i];
  Matrix op = pauli(per_qubit[0]);
  for (int q = 1; q < layout.n_qubits; ++q) op = kron(op, pauli(per_qubit[q]));
  return op;
}

Matrix kraus_sum(const Matrix& rho,
                 const std::vector<std::pair<double, Matrix>>& terms) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    out.noalias() += w * (k * rho * k.adjoint());
  }
  return out;
}

std::vector<double> parse_number_list(std::string text) {
  for (char& c : text)
    if (c == '[' || c == ']' || c == ',') c = ' ';
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

void validate(const NoiseSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SinglePauli>) {
          if (s.lambda_x < 0 || s.lambda_y < 0 || s.lambda_z < 0 ||
              s.lambda_x + s.lambda_y + s.lambda_z > 1.0 + 1e-12)
            throw std::invalid_argument("SinglePauli: weights must be >= 0 and sum <= 1");
        } else if constexpr (std::is_same_v<T, FullyCorrelatedPauli>) {
          double sum = 0.0;
          for (double q : s.q) {
            if (q < 0.0)
              throw std::invalid_argument("FullyCorrelatedPauli: weights must be >= 0");
            sum += q;
          }
          if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("FullyCorrelatedPauli: weights must sum to 1");
        } else {
          if (s.p < 0.0 || s.p > 1.0)
            throw std::invalid_argument("UncorrelatedDepolarizing: p must lie in [0,1]");
        }
      },
      spec);
}

std::string noise_label(const NoiseSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SinglePauli>) return "single_pauli";
        if constexpr (std::is_same_v<T, FullyCorrelatedPauli>) return "correlated_pauli";
        return "depolarizing";
      },
      spec);
}

std::vector<std::pair<double, Matrix>> kraus_terms(const SystemLayout& layout,
                                                   const NoiseSpec& spec) {
  validate(spec);
  const int n_senders = layout.n_senders();
  std::vector<std::pair<double, Matrix>> terms;
  if (const auto* cp = std::get_if<FullyCorrelatedPauli>(&spec)) {
    for (int m = 0; m < 4; ++m) {
      std::vector<int> labels(n_senders, m);
      terms.emplace_back(cp->q[m], pauli_string(layout, labels));
    }
    return terms;
  }
  if (const auto* dep = std::get_if<UncorrelatedDepolarizing>(&spec)) {
    const double w[4] = {1.0 - dep->p, dep->p / 3.0, dep->p / 3.0, dep->p / 3.0};
    std::vector<int> labels(n_senders, 0);
    const long count = 1L << (2 * n_senders);
    for (long code = 0; code < count; ++code) {
      double weight = 1.0;
      for (int i = 0; i < n_senders; ++i) {
        labels[i] = static_cast<int>((code >> (2 * i)) & 3);
        weight *= w[labels[i]];
      }
      terms.emplace_back(weight, pauli_string(layout, labels));
    }
    return terms;
  }
  throw std::invalid_argument("kraus_terms: SinglePauli acts on one qubit, not a register");
}

Matrix pauli_single(const Matrix& rho, const SinglePauli& spec) {
  validate(NoiseSpec{spec});
  if (rho.rows() != 2 || rho.cols() != 2)
    throw std::invalid_argument("pauli_single: expects a one-qubit state");
  const double w0 = 1.0 - spec.lambda_x - spec.lambda_y - spec.lambda_z;
  return w0 * rho + spec.lambda_x * (pauli(1) * rho * pauli(1)) +
         spec.lambda_y * (pauli(2) * rho * pauli(2)) +
         spec.lambda_z * (pauli(3) * rho * pauli(3));
}

Matrix fully_correlated_pauli(const Matrix& rho, const SystemLayout& layout,
                              const std::array<double, 4>& q) {
  const NoiseSpec spec = FullyCorrelatedPauli{q};
  return kraus_sum(rho, kraus_terms(layout, spec));
}

Matrix uncorrelated_depolarizing(const Matrix& rho, const SystemLayout& layout,
                                 double p) {
  const NoiseSpec spec = UncorrelatedDepolarizing{p};
  return kraus_sum(rho, kraus_terms(layout, spec));
}

Matrix apply_noise(const Matrix& rho, const SystemLayout& layout,
                   const NoiseSpec& spec) {
  if (const auto* sp = std::get_if<SinglePauli>(&spec)) {
    if (layout.n_qubits != 1 && rho.rows() != 2)
      throw std::invalid_argument("apply_noise: SinglePauli needs a one-qubit state");
    return pauli_single(rho, *sp);
  }
  return kraus_sum(rho, kraus_terms(layout, spec));
}

bool covariance_check(const std::function<Matrix(const Matrix&)>& channel,
                      const SystemLayout& layout, int trials, Rng& rng, double tol) {
  const Eigen::Index dim = Eigen::Index{1} << layout.n_qubits;
  const int n_senders = layout.n_senders();
  std::vector<Matrix> strings;
  std::vector<int> labels(n_senders, 0);
  for (long code = 0; code < (1L << (2 * n_senders)); ++code) {
    for (int i = 0; i < n_senders; ++i)
      labels[i] = static_cast<int>((code >> (2 * i)) & 3);
    strings.push_back(pauli_string(layout, labels));
  }
  for (int t = 0; t < trials; ++t) {
    const Matrix rho = random_density_matrix(dim, rng);
    const Matrix lhs_base = channel(rho);
    for (const Matrix& w : strings) {
      const Matrix lhs = channel(w * rho * w.adjoint());
      const Matrix rhs = w * lhs_base * w.adjoint();
      if ((lhs - rhs).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

bool covariance_check(const NoiseSpec& spec, const SystemLayout& layout, int trials,
                      Rng& rng) {
  return covariance_check(
      [&](const Matrix& rho) { return apply_noise(rho, layout, spec); }, layout,
      trials, rng);
}

Matrix choi_matrix(const std::function<Matrix(const Matrix&)>& channel,
                   Eigen::Index dim) {
  Matrix choi = Matrix::Zero(dim * dim, dim * dim);
  Matrix unit = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      unit(i, k) = 1.0;
      const Matrix block = channel(unit) / static_cast<double>(dim);
      unit(i, k) = 0.0;
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
          choi(r * dim + i, c * dim + k) += block(r, c);
    }
  }
  return choi;
}

Matrix random_density_matrix(Eigen::Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.normal_complex();
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

NoiseSpec noise_from_config(const std::map<std::string, std::string>& kv) {
  const auto it = kv.find("channel");
  if (it == kv.end()) throw std::invalid_argument("noise config: missing 'channel'");
  const std::string& kind = it->second;
  if (kind == "correlated_pauli") {
    const auto qit = kv.find("q");
    if (qit == kv.end())
      throw std::invalid_argument("noise config: correlated_pauli needs q=[q0,q1,q2,q3]");
    const std::vector<double> q = parse_number_list(qit->second);
    if (q.size() != 4)
      throw std::invalid_argument("noise config: q must have four entries");
    NoiseSpec spec = FullyCorrelatedPauli{{q[0], q[1], q[2], q[3]}};
    validate(spec);
    return spec;
  }
  if (kind == "depolarizing") {
    const auto pit = kv.find("p");
    if (pit == kv.end())
      throw std::invalid_argument("noise config: depolarizing needs p=<value>");
    NoiseSpec spec = UncorrelatedDepolarizing{std::stod(pit->second)};
    validate(spec);
    return spec;
  }
  if (kind == "single_pauli") {
    const auto lit = kv.find("lambda");
    if (lit == kv.end())
      throw std::invalid_argument("noise config: single_pauli needs lambda=[x,y,z]");
    const std::vector<double> l = parse_number_list(lit->second);
    if (l.size() != 3)
      throw std::invalid_argument("noise config: lambda must have three entries");
    NoiseSpec spec = SinglePauli{l[0], l[1], l[2]};
    validate(spec);
    return spec;
  }
  throw std::invalid_argument("noise config: unknown channel '" + kind + "'");
}

std::map<std::string, std::string> noise_to_config(const NoiseSpec& spec) {
  std::map<std::string, std::string> kv;
  kv["channel"] = noise_label(spec);
  std::ostringstream out;
  out.precision(17);
  if (const auto* cp = std::get_if<FullyCorrelatedPauli>(&spec)) {
    out << "[" << cp->q[0] << "," << cp->q[1] << "," << cp->q[2] << "," << cp->q[3]
        << "]";
    kv["q"] = out.str();
  } else if (const auto* dep = std::get_if<UncorrelatedDepolarizing>(&spec)) {
    out << dep->p;
    kv["p"] = out.str();
  } else {
    const auto& sp = std::get<SinglePauli>(spec);
    out << "[" << sp.lambda_x << "," << sp.lambda_y << "," << sp.lambda_z << "]";
    kv["lambda"] = out.str();
  }
  return kv;
}

}  // namespace densecode
