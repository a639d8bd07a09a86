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

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qchaos/circuit.hpp"

using namespace qchaos;
using std::numbers::pi;

namespace {

StateVector random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_state(n, rng);
}

}  // namespace

TEST(Rotation, YAxisMatchesRealMatrix) {
  const double theta = 0.37;
  StateVector s(1);
  apply_rotation(s, Axis::Y, 0, theta);
  EXPECT_NEAR(s[0].real(), std::cos(theta), 1e-15);
  EXPECT_NEAR(s[1].real(), -std::sin(theta), 1e-15);
  EXPECT_EQ(s[0].imag(), 0.0);
  EXPECT_EQ(s[1].imag(), 0.0);
}

TEST(Rotation, XAxisZeroAngleIsIdentity) {
  auto s = random_state(3, 11);
  const auto before = oracle::to_vec(s);
  for (int q = 0; q < 3; ++q) apply_rotation(s, Axis::X, q, 0.0);
  EXPECT_LT(oracle::distance(s, before), 1e-15);
}

TEST(Rotation, XAxisQuarterTurnFlipsWithPhase) {
  StateVector s(1);
  apply_rotation(s, Axis::X, 0, pi / 2);
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
  EXPECT_NEAR(s[1].real(), 0.0, 1e-15);
  EXPECT_NEAR(s[1].imag(), 1.0, 1e-15);
}

TEST(Rotation, MatchesDenseSingleQubitMatrix) {
  for (Axis axis : {Axis::X, Axis::Y}) {
    auto s = random_state(3, 5);
    const oracle::Vec expected = oracle::site(oracle::rotation(axis == Axis::X ? 'X' : 'Y', 1.1), 1, 3) * oracle::to_vec(s);
    apply_rotation(s, axis, 1, 1.1);
    EXPECT_LT(oracle::distance(s, expected), 1e-14);
  }
}

TEST(Entangler, CzFlipsOnlyDoublyExcited) {
  for (std::size_t b = 0; b < 4; ++b) {
    auto s = StateVector::basis(2, b);
    apply_entangler(s, Entangler::CZ, 0, 1);
    EXPECT_EQ(s[b], (b == 3 ? cplx{-1.0, 0.0} : cplx{1.0, 0.0}));
  }
}

TEST(Entangler, CpPutsPhaseIOnDoublyExcited) {
  auto s = StateVector::basis(2, 3);
  apply_entangler(s, Entangler::CP, 0, 1);
  EXPECT_EQ(s[3], (cplx{0.0, 1.0}));
  apply_entangler(s, Entangler::CP, 0, 1, /*inverse=*/true);
  EXPECT_EQ(s[3], (cplx{1.0, 0.0}));
}

TEST(Entangler, RejectsNonAdjacentPair) {
  StateVector s(4);
  EXPECT_THROW(apply_entangler(s, Entangler::CZ, 0, 2), std::invalid_argument);
  EXPECT_THROW(apply_entangler(s, Entangler::CZ, 1, 1), std::invalid_argument);
  EXPECT_NO_THROW(apply_entangler(s, Entangler::CZ, 3, 0));
}

TEST(Layer, BrickworkPairsWrapAround) {
  using P = std::vector<std::pair<int, int>>;
  EXPECT_EQ(entangler_pairs(4, 1), (P{{0, 1}, {2, 3}}));
  EXPECT_EQ(entangler_pairs(4, 2), (P{{1, 2}, {3, 0}}));
  EXPECT_EQ(entangler_pairs(2, 2), (P{{1, 0}}));
}

TEST(Layer, AlternatingArchitectureSwitchesAxis) {
  EXPECT_EQ(rotation_axis(Architecture::RxCZRyCZ, 1), Axis::X);
  EXPECT_EQ(rotation_axis(Architecture::RxCZRyCZ, 2), Axis::Y);
  EXPECT_EQ(rotation_axis(Architecture::RxCZRyCZ, 3), Axis::X);
  for (int l = 1; l <= 4; ++l) {
    EXPECT_EQ(rotation_axis(Architecture::RxCZ, l), Axis::X);
    EXPECT_EQ(rotation_axis(Architecture::RyCZ, l), Axis::Y);
    EXPECT_EQ(rotation_axis(Architecture::RyCP, l), Axis::Y);
  }
}

TEST(Circuit, ZeroAnglesLeaveGroundState) {
  const CircuitSpec spec{2, 1, Architecture::RyCZ, 0};
  const auto s = run_circuit(spec, ParameterSet(1, 2));
  EXPECT_EQ(s[0], (cplx{1.0, 0.0}));
  EXPECT_EQ(s.norm2(), 1.0);
}

TEST(Circuit, EmptyCircuitIsExactGroundState) {
  for (auto arch : kAllArchitectures) {
    const CircuitSpec spec{6, 0, arch, 3};
    const auto s = run_circuit(spec, sample_parameters(spec));
    EXPECT_EQ(s[0], (cplx{1.0, 0.0}));
    for (std::size_t i = 1; i < s.dim(); ++i) EXPECT_EQ(s[i], (cplx{0.0, 0.0}));
  }
}

TEST(Circuit, MatchesDenseKroneckerOracle) {
  double worst = 0.0;
  for (auto arch : kAllArchitectures) {
    for (int n : {2, 4}) {
      for (int layers : {1, 2, 5}) {
        const CircuitSpec spec{n, layers, arch, 40u + static_cast<unsigned>(layers)};
        const auto params = sample_parameters(spec);
        const auto s = run_circuit(spec, params);
        const oracle::Vec ground = oracle::Vec::Unit(Eigen::Index{1} << n, 0);
        worst = std::max(worst, oracle::distance(s, oracle::circuit_unitary(spec, params, layers) * ground));
      }
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Circuit, InverseUndoesForwardEvolution) {
  for (auto arch : kAllArchitectures) {
    const CircuitSpec spec{6, 7, arch, 9};
    const auto params = sample_parameters(spec);
    auto s = random_state(6, 2);
    const auto start = oracle::to_vec(s);
    evolve(s, spec, params, 7);
    evolve_inverse(s, spec, params, 7);
    EXPECT_LT(oracle::distance(s, start), 1e-12) << to_string(arch);
  }
}

TEST(Circuit, RealArchitectureKeepsAmplitudesReal) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CircuitSpec spec{6, 8, Architecture::RyCZ, seed};
    const auto s = run_circuit(spec, sample_parameters(spec));
    double max_imag = 0.0;
    for (const auto& a : s.amps()) max_imag = std::max(max_imag, std::abs(a.imag()));
    ASSERT_LT(max_imag, 1e-12);
  }
}

TEST(Circuit, NormPreservedUnderRandomGates) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> gate(0, 4);
  std::uniform_int_distribution<int> qubit(0, 5);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi);
  auto s = random_state(6, 1);
  for (int i = 0; i < 1000; ++i) {
    const int q = qubit(rng);
    switch (gate(rng)) {
      case 0: apply_rotation(s, Axis::X, q, angle(rng)); break;
      case 1: apply_rotation(s, Axis::Y, q, angle(rng)); break;
      case 2: apply_entangler(s, Entangler::CZ, q, (q + 1) % 6); break;
      case 3: apply_entangler(s, Entangler::CP, q, (q + 1) % 6); break;
      default: apply_pauli(s, Pauli::Y, q); break;
    }
    ASSERT_NEAR(s.norm2(), 1.0, 1e-10);
  }
}

TEST(Circuit, ShapeMismatchAndOddNRejected) {
  EXPECT_THROW(run_circuit({4, 2, Architecture::RyCZ, 0}, ParameterSet(3, 4)), std::invalid_argument);
  EXPECT_THROW(run_circuit({3, 1, Architecture::RyCZ, 0}, ParameterSet(1, 3)), std::invalid_argument);
  EXPECT_THROW(CircuitSpec({16, 1, Architecture::RyCZ, 0}).validate(), std::invalid_argument);
}

TEST(Parameters, SeedIsDeterministic) {
  const CircuitSpec spec{8, 5, Architecture::RyCP, 123};
  EXPECT_EQ(sample_parameters(spec), sample_parameters(spec));
  EXPECT_EQ(spec.num_parameters(), 40u);
}

TEST(Parameters, DifferentSeedsDiffer) {
  EXPECT_FALSE(sample_parameters({4, 2, Architecture::RyCZ, 1}) == sample_parameters({4, 2, Architecture::RyCZ, 2}));
}

TEST(Parameters, ShallowDrawIsPrefixOfDeepDraw) {
  const auto deep = sample_parameters({6, 30, Architecture::RxCZ, 8});
  EXPECT_EQ(deep.prefix(10), sample_parameters({6, 10, Architecture::RxCZ, 8}));
}

TEST(Parameters, UniformMeanNearPi) {
  const auto p = sample_parameters({10, 1000, Architecture::RyCZ, 2024});
  double mean = 0.0;
  for (double v : p.flat()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 2 * pi);
    mean += v;
  }
  mean /= static_cast<double>(p.size());
  const double stderr_ = 2 * pi / std::sqrt(12.0) / std::sqrt(static_cast<double>(p.size()));
  EXPECT_LT(std::abs(mean - pi), 3 * stderr_);
}

TEST(Parameters, IndexingIsLayerMajor) {
  ParameterSet p(2, 3);
  p(2, 1) = 5.0;
  EXPECT_EQ(p.flat()[4], 5.0);
}

TEST(Architecture, NamesRoundTrip) {
  for (auto arch : kAllArchitectures) EXPECT_EQ(parse_architecture(to_string(arch)), arch);
  EXPECT_FALSE(parse_architecture("RzCZ").has_value());
}
