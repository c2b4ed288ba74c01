#include <cmath>

#include "densecode/capacity.hpp"
#include "densecode/channels.hpp"
#include "densecode/qmat.hpp"
#include "densecode/states.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace densecode;

TEST_CASE("single-qubit Pauli channel") {
  Rng rng(8);
  const Matrix rho = random_density_matrix(2, rng);

  // zero weights: identity channel
  CHECK((pauli_single(rho, SinglePauli{}) - rho).cwiseAbs().maxCoeff() < 1e-15);

  // fully depolarizing point p = 3/4
  const SinglePauli dep{0.25, 0.25, 0.25};
  const Matrix out = pauli_single(rho, dep);
  CHECK((out - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // pure sigma_z noise keeps the diagonal
  const SinglePauli dephase{0.0, 0.0, 0.3};
  const Matrix deph = pauli_single(rho, dephase);
  CHECK(std::abs(deph(0, 0) - rho(0, 0)) < 1e-15);
  CHECK(std::abs(deph(1, 1) - rho(1, 1)) < 1e-15);

  CHECK_THROWS_AS(pauli_single(rho, SinglePauli{0.5, 0.4, 0.3}), std::invalid_argument);
}

TEST_CASE("fully correlated Pauli channel") {
  Rng rng(12);
  const SystemLayout layout = default_layout(3);
  const Matrix rho = random_density_matrix(8, rng);

  // q = (1,0,0,0): identity
  CHECK((fully_correlated_pauli(rho, layout, {1, 0, 0, 0}) - rho).cwiseAbs().maxCoeff() <
        1e-15);

  // invalid weights
  CHECK_THROWS_AS(fully_correlated_pauli(rho, layout, {0.5, 0.2, 0.2, 0.2}),
                  std::invalid_argument);

  // gGHZ: identity and sigma_z x sigma_z fix the state, sigma_x/sigma_y map it
  // to an orthogonal two-term state, so S(output) = H(q1 + q2)
  const std::array<double, 4> q{0.485, 0.015, 0.015, 0.485};
  for (double alpha : {0.3, 0.5, 0.8}) {
    const Matrix g = density(gghz(3, alpha, 0.9));
    const Matrix noisy = fully_correlated_pauli(g, layout, q);
    CHECK(von_neumann_entropy(noisy) ==
          doctest::Approx(binary_entropy(0.03)).epsilon(1e-9));
  }

  // trace preservation and positivity on random input
  const Matrix noisy = fully_correlated_pauli(rho, layout, q);
  CHECK(std::abs(noisy.trace().real() - 1.0) < 1e-12);
  CHECK(hermitian_eig(noisy).values.minCoeff() > -1e-9);
}

TEST_CASE("uncorrelated depolarizing channel") {
  Rng rng(21);
  const SystemLayout layout = default_layout(3);
  const Matrix rho = random_density_matrix(8, rng);

  CHECK((uncorrelated_depolarizing(rho, layout, 0.0) - rho).cwiseAbs().maxCoeff() <
        1e-14);

  // p = 3/4 fully depolarizes the senders
  const Matrix out = uncorrelated_depolarizing(rho, layout, 0.75);
  const Matrix senders = partial_trace(out, 3, {0, 1});
  CHECK((senders - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(uncorrelated_depolarizing(rho, layout, 1.5), std::invalid_argument);
}

TEST_CASE("uncorrelated channel equals per-qubit composition") {
  Rng rng(34);
  const SystemLayout layout = default_layout(3);
  const double p = 0.13;

  auto depolarize_one = [&](const Matrix& rho, int qubit) {
    Matrix out = (1.0 - p) * rho;
    for (int m = 1; m <= 3; ++m) {
      Matrix op = Matrix::Ones(1, 1);
      for (int q = 0; q < 3; ++q)
        op = kron(op, q == qubit ? pauli(m) : Matrix(Matrix::Identity(2, 2)));
      out += (p / 3.0) * (op * rho * op);
    }
    return out;
  };

  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = random_density_matrix(8, rng);
    const Matrix direct = uncorrelated_depolarizing(rho, layout, p);
    const Matrix composed = depolarize_one(depolarize_one(rho, 0), 1);
    CHECK((direct - composed).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("channels preserve trace and positivity on random inputs") {
  Rng rng(55);
  const SystemLayout layout = default_layout(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = random_density_matrix(8, rng);
    for (const NoiseSpec spec :
         {NoiseSpec{FullyCorrelatedPauli{{0.4, 0.3, 0.2, 0.1}}},
          NoiseSpec{UncorrelatedDepolarizing{0.2}}}) {
      const Matrix out = apply_noise(rho, layout, spec);
      CHECK(std::abs(out.trace().real() - 1.0) < 1e-12);
      CHECK(hermitian_eig(out).values.minCoeff() > -1e-9);
    }
  }
}

TEST_CASE("Choi matrices of the channels are positive semidefinite") {
  const SystemLayout layout = default_layout(3);
  for (const NoiseSpec spec :
       {NoiseSpec{FullyCorrelatedPauli{{0.485, 0.015, 0.015, 0.485}}},
        NoiseSpec{UncorrelatedDepolarizing{0.1}}}) {
    const Matrix choi = choi_matrix(
        [&](const Matrix& rho) { return apply_noise(rho, layout, spec); }, 8);
    CHECK(std::abs(choi.trace().real() - 1.0) < 1e-12);
    CHECK(hermitian_eig(choi).values.minCoeff() > -1e-9);
  }
}

TEST_CASE("covariance under Pauli strings") {
  Rng rng(89);
  const SystemLayout layout = default_layout(3);

  CHECK(covariance_check(NoiseSpec{FullyCorrelatedPauli{{0.7, 0.1, 0.1, 0.1}}}, layout,
                         3, rng));
  CHECK(covariance_check(NoiseSpec{UncorrelatedDepolarizing{0.3}}, layout, 3, rng));

  // amplitude damping on a sender is not covariant; sigma_x on |1><1| already
  // witnesses it
  const bool damped_covariant = covariance_check(
      [&](const Matrix& rho) { return testsupport::amplitude_damping(rho, 3, 0, 0.4); },
      layout, 3, rng);
  CHECK_FALSE(damped_covariant);
}

TEST_CASE("depolarizing commutes with arbitrary sender unitaries") {
  Rng rng(144);
  const SystemLayout layout = default_layout(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix rho = random_density_matrix(8, rng);
    const Matrix u = kron(kron(testsupport::random_unitary(2, rng),
                               testsupport::random_unitary(2, rng)),
                          Matrix(Matrix::Identity(2, 2)));
    const Matrix lhs = uncorrelated_depolarizing(u * rho * u.adjoint(), layout, 0.2);
    const Matrix rhs = u * uncorrelated_depolarizing(rho, layout, 0.2) * u.adjoint();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("noise spec round-trips through the config format") {
  const NoiseSpec corr = FullyCorrelatedPauli{{0.485, 0.015, 0.015, 0.485}};
  const NoiseSpec back = noise_from_config(noise_to_config(corr));
  CHECK(std::get<FullyCorrelatedPauli>(back).q[0] == doctest::Approx(0.485));
  CHECK(std::get<FullyCorrelatedPauli>(back).q[3] == doctest::Approx(0.485));

  const NoiseSpec dep = UncorrelatedDepolarizing{0.04};
  CHECK(std::get<UncorrelatedDepolarizing>(noise_from_config(noise_to_config(dep))).p ==
        doctest::Approx(0.04));

  std::map<std::string, std::string> kv{{"channel", "correlated_pauli"},
                                        {"q", "[0.485,0.015,0.015,0.485]"}};
  CHECK(std::get<FullyCorrelatedPauli>(noise_from_config(kv)).q[1] ==
        doctest::Approx(0.015));
  kv["q"] = "0.5,0.5";
  CHECK_THROWS_AS(noise_from_config(kv), std::invalid_argument);
  kv.erase("q");
  CHECK_THROWS_AS(noise_from_config(kv), std::invalid_argument);
}
