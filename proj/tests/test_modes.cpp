// Copyright 2026 The fibrecnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "fibrecnot/errors.hpp"
#include "fibrecnot/modes.hpp"
#include "test_support.hpp"

namespace fibrecnot {
namespace {

using testing::max_abs_diff;

LayoutPtr four_modes() { return make_layout({"C_H", "C_V", "T_H", "T_V"}); }

TEST(ModeLayout, RejectsDuplicatesAndUnknownLabels) {
  EXPECT_THROW(ModeLayout({"C_H", "C_H"}), LayoutError);
  const auto layout = four_modes();
  EXPECT_EQ(layout->id("T_H").index, 2u);
  EXPECT_THROW(layout->id("C_H2"), LayoutError);
  for (std::size_t i = 0; i < layout->size(); ++i) {
    EXPECT_EQ(layout->id(layout->label(ModeId{i})).index, i);
  }
}

TEST(CircuitUnitary, RejectsNonUnitaryAndWrongSize) {
  const auto layout = four_modes();
  EXPECT_THROW(CircuitUnitary(layout, Matrix::Identity(3, 3)), LayoutError);
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = 1.1;
  EXPECT_THROW(CircuitUnitary(layout, m), DomainError);
}

TEST(BeamsplitterBlock, PureTransmission) {
  const Block2 b = beamsplitter_block(0.0);
  EXPECT_EQ(b(0, 0), Complex(0.0));
  EXPECT_EQ(b(1, 1), Complex(0.0));
  EXPECT_EQ(b(0, 1), Complex(1.0));
  EXPECT_EQ(b(1, 0), Complex(1.0));
}

TEST(BeamsplitterBlock, OneThirdAmplitudes) {
  const Block2 b = beamsplitter_block(1.0 / 3.0, SignedSide::kFirst);
  EXPECT_NEAR(b(0, 0).real(), -std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_NEAR(b(1, 1).real(), std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_NEAR(b(0, 1).real(), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(b(1, 0).real(), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_EQ(b.imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(BeamsplitterBlock, TotalReflectionSignFollowsFlag) {
  const Block2 first = beamsplitter_block(1.0, SignedSide::kFirst);
  const Block2 second = beamsplitter_block(1.0, SignedSide::kSecond);
  EXPECT_EQ(first(0, 0), Complex(-1.0));
  EXPECT_EQ(first(1, 1), Complex(1.0));
  EXPECT_EQ(second(0, 0), Complex(1.0));
  EXPECT_EQ(second(1, 1), Complex(-1.0));
  EXPECT_EQ(first(0, 1), Complex(0.0));
}

TEST(BeamsplitterBlock, DomainErrors) {
  EXPECT_THROW(beamsplitter_block(-0.01), DomainError);
  EXPECT_THROW(beamsplitter_block(1.01), DomainError);
  EXPECT_THROW(beamsplitter_block(std::nan("")), DomainError);
}

TEST(BeamsplitterBlock, UnitaryOverRandomReflectivities) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double r = u(rng);
    for (auto side : {SignedSide::kFirst, SignedSide::kSecond}) {
      EXPECT_LT(unitarity_defect(beamsplitter_block(r, side)), 1e-10);
    }
  }
}

TEST(Embed, IdentityBlockGivesIdentity) {
  const auto layout = four_modes();
  const auto u = embed(Block2::Identity(), "C_V", "T_H", layout);
  EXPECT_EQ(max_abs_diff(u.matrix(), Matrix::Identity(4, 4)), 0.0);
}

TEST(Embed, LeavesOtherModesUntouched) {
  const auto layout = four_modes();
  const auto u = embed(beamsplitter_block(0.5), "T_H", "T_V", layout);
  EXPECT_EQ(u(layout->id("C_H"), layout->id("C_H")), Complex(1.0));
  EXPECT_EQ(u(layout->id("C_V"), layout->id("C_V")), Complex(1.0));
  EXPECT_EQ(u(layout->id("T_H"), layout->id("C_H")), Complex(0.0));
  EXPECT_NEAR(std::abs(u(layout->id("T_V"), layout->id("T_H"))), std::sqrt(0.5), 1e-15);
  EXPECT_LT(unitarity_defect(u.matrix()), 1e-10);
}

TEST(Embed, TimesAdjointIsIdentity) {
  const auto layout = four_modes();
  const auto u = embed(beamsplitter_block(0.27), "C_H", "T_V", layout);
  EXPECT_LT(max_abs_diff(compose(u, u.adjoint()).matrix(), Matrix::Identity(4, 4)), 1e-12);
}

TEST(Embed, Errors) {
  const auto layout = four_modes();
  EXPECT_THROW(embed(Block2::Identity(), "C_H", "C_H", layout), LayoutError);
  EXPECT_THROW(embed(Block2::Identity(), "C_H", "X", layout), LayoutError);
}

TEST(Compose, IdentityAndInverse) {
  std::mt19937_64 rng(3);
  const auto layout = four_modes();
  const auto u = testing::random_circuit(layout, rng);
  EXPECT_LT(max_abs_diff(compose(u, CircuitUnitary::identity(layout)).matrix(), u.matrix()), 1e-15);
  EXPECT_LT(max_abs_diff(compose(u, u.adjoint()).matrix(), Matrix::Identity(4, 4)), 1e-12);
}

TEST(Compose, TwoBalancedBlocksOnSamePair) {
  // [[-s, s], [s, s]]^2 with s = 1/sqrt2: (-s)(-s) + s*s = 1 on the diagonal, -s*s + s*s = 0 off it.
  const auto layout = four_modes();
  const auto b = embed(beamsplitter_block(0.5), "C_H", "T_H", layout);
  EXPECT_LT(max_abs_diff(compose(b, b).matrix(), Matrix::Identity(4, 4)), 1e-12);
}

TEST(Compose, LayoutMismatch) {
  const auto a = CircuitUnitary::identity(four_modes());
  const auto b = CircuitUnitary::identity(make_layout({"C_H", "C_V", "T_H", "X"}));
  EXPECT_THROW(compose(a, b), LayoutError);
}

TEST(Compose, AssociativeOnRandomTriples) {
  std::mt19937_64 rng(5);
  const auto layout = testing::numbered_layout(7);
  for (int k = 0; k < 50; ++k) {
    const auto a = testing::random_circuit(layout, rng);
    const auto b = testing::random_circuit(layout, rng);
    const auto c = testing::random_circuit(layout, rng);
    EXPECT_LT(max_abs_diff(compose(compose(a, b), c).matrix(), compose(a, compose(b, c)).matrix()), 1e-12);
    EXPECT_LT(unitarity_defect(compose(compose(a, b), c).matrix()), 1e-10);
  }
}

TEST(HvSwap, InvolutionAndAction) {
  const auto layout = four_modes();
  const auto s = hv_swap("C", layout);
  EXPECT_LT(max_abs_diff(compose(s, s).matrix(), Matrix::Identity(4, 4)), 1e-15);
  EXPECT_EQ(s(layout->id("C_V"), layout->id("C_H")), Complex(1.0));
  EXPECT_EQ(s(layout->id("C_H"), layout->id("C_H")), Complex(0.0));
  EXPECT_THROW(hv_swap("D1", layout), LayoutError);
}

TEST(HvSwap, ConjugatedCouplerSwapsReflectivities) {
  const auto layout = four_modes();
  auto coupler = [&](double rh, double rv) {
    return compose(embed(beamsplitter_block(rh), "C_H", "T_H", layout),
                   embed(beamsplitter_block(rv), "C_V", "T_V", layout));
  };
  const auto swaps = compose(hv_swap("C", layout), hv_swap("T", layout));
  const auto conjugated = compose_all({swaps, coupler(1.0 / 3.0, 1.0), swaps});
  EXPECT_LT(max_abs_diff(conjugated.matrix(), coupler(1.0, 1.0 / 3.0).matrix()), 1e-15);
}

TEST(PhasePlate, Examples) {
  const auto layout = four_modes();
  EXPECT_EQ(max_abs_diff(phase_plate("T_V", 0.0, layout).matrix(), Matrix::Identity(4, 4)), 0.0);
  const auto pi = phase_plate("C_V", std::numbers::pi, layout);
  EXPECT_LT(max_abs_diff(compose(pi, pi).matrix(), Matrix::Identity(4, 4)), 1e-15);
  const auto quarter = phase_plate("T_V", std::numbers::pi / 2.0, layout);
  const Complex in = Complex(0.6, 0.8);
  const Complex out = quarter(layout->id("T_V"), layout->id("T_V")) * in;
  EXPECT_LT(std::abs(out - Complex(0.0, 1.0) * in), 1e-15);
  EXPECT_THROW(phase_plate("nope", 1.0, layout), LayoutError);
}

TEST(PhasePlate, CommutesWithSwapOnDisjointModes) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const auto layout = four_modes();
  for (int k = 0; k < 100; ++k) {
    const auto s = hv_swap("C", layout);
    const auto p = phase_plate(k % 2 ? "T_V" : "T_H", u(rng), layout);
    EXPECT_LT(max_abs_diff(compose(s, p).matrix(), compose(p, s).matrix()), 1e-12);
  }
}

TEST(Constructors, UnitaryOverRandomParameters) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto layout = four_modes();
  for (int k = 0; k < 200; ++k) {
    const auto c = compose_all({embed(beamsplitter_block(u(rng)), "C_H", "T_H", layout),
                                phase_plate("C_V", 6.0 * u(rng), layout), hv_swap("T", layout),
                                embed(beamsplitter_block(u(rng), SignedSide::kSecond), "C_V", "T_V", layout)});
    EXPECT_LT(unitarity_defect(c.matrix()), 1e-10);
  }
}

}  // namespace
}  // namespace fibrecnot
