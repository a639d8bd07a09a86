// Copyright 2026 The qchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qchaos/vqe.hpp"

using namespace qchaos;
using std::numbers::pi;

namespace {

double dense_energy(const StateVector& s, const IsingHamiltonian& h) {
  const auto v = oracle::to_vec(s);
  const auto dense = oracle::ising(h.n, h.g, h.field_axis == Axis::X ? 'X' : 'Y');
  return (v.adjoint() * dense * v)(0, 0).real();
}

double circuit_energy(const CircuitSpec& spec, const ParameterSet& p, const IsingHamiltonian& h) {
  return energy(run_circuit(spec, p), h);
}

// Periodic transverse-field chain via Jordan-Wigner in the even-parity
// (antiperiodic) sector: E0 = -sum_k sqrt(1 + g^2 - 2 g cos k).
double free_fermion_ground_energy(int n, double g) {
  double e = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = pi * (2 * m + 1) / n;
    e -= std::sqrt(1 + g * g - 2 * g * std::cos(k));
  }
  return e;
}

}  // namespace

TEST(Hamiltonian, GroundStateExpectationIsN) {
  for (double g : {0.0, 0.7, 1.0}) {
    const IsingHamiltonian h{6, g, Axis::X};
    EXPECT_NEAR(energy(StateVector(6), h), 6.0, 1e-14);
  }
}

TEST(Hamiltonian, TwoSiteChainDoublesCoupling) {
  const IsingHamiltonian h{2, 0.0, Axis::X};
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(dense_hamiltonian(h));
  const auto ev = solver.eigenvalues();
  EXPECT_NEAR(ev[0], -2.0, 1e-14);
  EXPECT_NEAR(ev[3], 2.0, 1e-14);
  EXPECT_LT((dense_hamiltonian(h) - 2.0 * oracle::pauli_string("ZZ")).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, ProductEigenstatesOfTheField) {
  // ZZ averages to zero on |+>^n and |->^n; the field term gives +-g n.
  const int n = 6;
  std::vector<cplx> plus(1u << n, 1.0 / 8.0);
  std::vector<cplx> minus(plus);
  for (std::size_t i = 0; i < minus.size(); ++i) minus[i] *= std::popcount(i) % 2 ? -1.0 : 1.0;
  EXPECT_NEAR(energy(StateVector(n, plus), {n, 0.7, Axis::X}), 0.7 * n, 1e-12);
  EXPECT_NEAR(energy(StateVector(n, minus), {n, 0.7, Axis::X}), -0.7 * n, 1e-12);
}

TEST(Hamiltonian, MatchesDensePauliSum) {
  std::mt19937_64 rng(8);
  for (Axis axis : {Axis::X, Axis::Y}) {
    const IsingHamiltonian h{6, 0.8, axis};
    const auto s = haar_state(6, rng);
    EXPECT_NEAR(energy(s, h), dense_energy(s, h), 1e-12);
    EXPECT_LT((dense_hamiltonian(h) - oracle::ising(6, 0.8, axis == Axis::X ? 'X' : 'Y')).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(Hamiltonian, ExpectationIsReal) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = haar_state(8, rng);
    const cplx e = inner(s, apply_hamiltonian({8, 1.3, Axis::Y}, s));
    EXPECT_LT(std::abs(e.imag()), 1e-10);
  }
}

TEST(GroundEnergy, ClassicalLimit) {
  EXPECT_NEAR(exact_ground_energy({4, 0.0, Axis::X}), -4.0, 1e-12);
}

TEST(GroundEnergy, FieldAxisDoesNotMatter) {
  for (int n : {4, 8, 10}) {
    EXPECT_NEAR(exact_ground_energy({n, 1.0, Axis::X}), exact_ground_energy({n, 1.0, Axis::Y}), 1e-9);
  }
}

TEST(GroundEnergy, MatchesFreeFermionClosedForm) {
  for (double g : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(exact_ground_energy({8, g, Axis::X}), free_fermion_ground_energy(8, g), 1e-9) << "g=" << g;
    EXPECT_NEAR(exact_ground_energy({12, g, Axis::X}), free_fermion_ground_energy(12, g), 1e-8) << "g=" << g;
  }
  // Critical point: sum of 2 sin(k/2) collapses to 2 / sin(pi / 2n).
  EXPECT_NEAR(exact_ground_energy({8, 1.0, Axis::X}), -2.0 / std::sin(pi / 16), 1e-9);
}

TEST(GroundEnergy, LanczosAgreesWithDense) {
  const IsingHamiltonian h{8, 0.9, Axis::Y};
  const double lanczos = lanczos_ground_energy(8, [&](const StateVector& v) { return apply_hamiltonian(h, v); });
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(dense_hamiltonian(h), Eigen::EigenvaluesOnly);
  EXPECT_NEAR(lanczos, solver.eigenvalues()[0], 1e-9);
}

TEST(GroundEnergy, RealStatesCannotSeeTheYField) {
  // sigma_y has purely imaginary entries, so real states only feel the ZZ part.
  for (int n : {4, 8}) EXPECT_NEAR(real_state_min_energy({n, 1.0, Axis::Y}), -n, 1e-12);
  EXPECT_NEAR(real_state_min_energy({8, 1.0, Axis::X}), exact_ground_energy({8, 1.0, Axis::X}), 1e-9);
}

TEST(Gradient, SingleRotationClosedForm) {
  // RyCZ, n=2, L=1, second angle zero: E = 2 cos(2 theta), dE/dtheta = -4 sin(2 theta).
  const CircuitSpec spec{2, 1, Architecture::RyCZ, 0};
  const IsingHamiltonian h{2, 0.0, Axis::X};
  for (double theta : {0.1, 0.9, 2.4}) {
    ParameterSet p(1, 2);
    p(1, 0) = theta;
    const auto eg = energy_and_gradient(spec, p, h);
    EXPECT_NEAR(eg.energy, 2 * std::cos(2 * theta), 1e-14);
    EXPECT_NEAR(eg.grad(1, 0), -4 * std::sin(2 * theta), 1e-13);
    EXPECT_NEAR(eg.grad(1, 1), 0.0, 1e-14);
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(10);
  const double step = 1e-5;
  double worst = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    const auto arch = kAllArchitectures[instance % 4];
    const int n = 2 + 2 * (instance % 4);
    const CircuitSpec spec{n, 1 + instance % 5, arch, static_cast<std::uint64_t>(300 + instance)};
    const IsingHamiltonian h{n, 0.3 + 0.1 * instance, instance % 2 ? Axis::Y : Axis::X};
    auto p = sample_parameters(spec);
    const auto g = gradient(spec, p, h);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p.flat()[i];
      p.flat()[i] = saved + step;
      const double up = circuit_energy(spec, p, h);
      p.flat()[i] = saved - step;
      const double down = circuit_energy(spec, p, h);
      p.flat()[i] = saved;
      worst = std::max(worst, std::abs((up - down) / (2 * step) - g.flat()[i]));
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Gradient, AxisSwapEquivalence) {
  // Conjugating by the global Clifford that swaps x and y maps RxCZ on the
  // y-field chain onto RyCZ on the x-field chain with negated angles.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CircuitSpec rx{6, 4, Architecture::RxCZ, seed};
    const CircuitSpec ry{6, 4, Architecture::RyCZ, seed};
    const auto p = sample_parameters(rx);
    auto neg = p;
    for (double& v : neg.flat()) v = -v;
    EXPECT_NEAR(circuit_energy(rx, p, {6, 1.0, Axis::Y}), circuit_energy(ry, neg, {6, 1.0, Axis::X}), 1e-12);
  }
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  Adam adam(AdamConfig{}, 3);
  std::vector<double> p{0.1, 0.2, 0.3};
  const std::vector<double> zero(3, 0.0);
  for (int i = 0; i < 100; ++i) adam.step(p, zero);
  EXPECT_EQ(p, (std::vector<double>{0.1, 0.2, 0.3}));
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  const AdamConfig cfg;
  for (double g : {3.7, -0.02}) {
    Adam adam(cfg, 1);
    std::vector<double> p{1.0};
    const std::vector<double> grad{g};
    adam.step(p, grad);
    EXPECT_NEAR(p[0] - 1.0, -cfg.alpha * (g > 0 ? 1 : -1), 1e-6);
  }
}

TEST(Adam, RejectsBadConfig) {
  EXPECT_THROW((AdamConfig{-1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((AdamConfig{0.05, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((AdamConfig{0.05, 0.9, 0.999, 0.0}).validate(), std::invalid_argument);
}

TEST(Optimize, TraceShapeAndVariationalBound) {
  const CircuitSpec spec{6, 4, Architecture::RyCP, 12};
  const IsingHamiltonian h{6, 1.0, Axis::X};
  const auto trace = adam_optimize(spec, h, {0.05, 0.9, 0.999, 1e-8, 200});
  ASSERT_EQ(trace.energies.size(), 201u);
  for (double e : trace.energies) EXPECT_GE(e, trace.ground_energy - 1e-9);
  EXPECT_LT(trace.final_gap(), trace.initial_gap());
  EXPECT_EQ(trace.initial_params, sample_parameters(spec));
}

TEST(Optimize, RealCircuitStuckAboveRealStateBound) {
  const IsingHamiltonian h{6, 1.0, Axis::Y};
  const double bound = real_state_min_energy(h) - exact_ground_energy(h);
  EXPECT_GT(bound, 0.5);
  const auto trace = adam_optimize({6, 6, Architecture::RyCZ, 3}, h, {0.05, 0.9, 0.999, 1e-8, 300});
  EXPECT_GE(trace.final_gap(), bound - 1e-9);
}

TEST(Optimize, RealCircuitSolvesXFieldChain) {
  // n=8, L=10: a majority of 10 seeds must close the gap below 0.1.
  const IsingHamiltonian h{8, 1.0, Axis::X};
  const auto rows = depth_sweep(Architecture::RyCZ, 8, {10}, h, AdamConfig{}, 10, 1);
  int solved = 0;
  for (const auto& r : rows) solved += r.final_gap < 0.1;
  EXPECT_GT(solved, 5);
}

TEST(Sweep, SeedsAndSummary) {
  const IsingHamiltonian h{4, 1.0, Axis::X};
  const AdamConfig cfg{0.05, 0.9, 0.999, 1e-8, 20};
  const auto rows = depth_sweep(Architecture::RxCZ, 4, {1, 3}, h, cfg, 3, 50, 2);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].layers, i < 3 ? 1 : 3);
    EXPECT_EQ(rows[i].seed, 50u + i % 3);
  }
  const auto serial = depth_sweep(Architecture::RxCZ, 4, {1, 3}, h, cfg, 3, 50, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].final_gap, serial[i].final_gap);
  const auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_NEAR(summary[0].mean_final_gap, (rows[0].final_gap + rows[1].final_gap + rows[2].final_gap) / 3, 1e-15);
  EXPECT_LE(summary[1].min_final_gap, summary[1].mean_final_gap);
  EXPECT_THROW(depth_sweep(Architecture::RxCZ, 4, {0}, h, cfg, 1, 0), std::invalid_argument);
}
