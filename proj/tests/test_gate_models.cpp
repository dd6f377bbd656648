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

#include <cmath>

#include "fibrecnot/errors.hpp"
#include "fibrecnot/gate_models.hpp"
#include "fibrecnot/metrics.hpp"
#include "test_support.hpp"

namespace fibrecnot {
namespace {

using testing::max_table_diff;

// Rows whose ideal output differs from the input: the rows where the gate acts.
std::vector<std::size_t> flip_rows(LogicalBasis basis) {
  const TruthTable ideal = ideal_truth_table(basis);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < 4; ++i) {
    if (ideal.entries[i][i] == 0.0) rows.push_back(i);
  }
  return rows;
}

TEST(IdealCnot, ComputationalBasisTruthTable) {
  const auto layout = ideal_layout();
  const auto t = truth_table(build_ideal_cnot(layout), LogicalBasis::kZZ, standard_post_selection(*layout));
  EXPECT_LT(max_table_diff(t, ideal_truth_table(LogicalBasis::kZZ)), 1e-9);
  EXPECT_NEAR(t.entries[0][0], 1.0, 1e-9);  // 00 -> 00
  EXPECT_NEAR(t.entries[2][3], 1.0, 1e-9);  // 10 -> 11
  for (double s : *t.success) EXPECT_NEAR(s, 1.0 / 9.0, 1e-9);
}

TEST(IdealCnot, DiagonalBasisIsRoleReversed) {
  const auto layout = ideal_layout();
  const auto t = truth_table(build_ideal_cnot(layout), LogicalBasis::kXX, standard_post_selection(*layout));
  // (a, b) -> (a xor b, b)
  EXPECT_NEAR(t.entries[logical_index(0, 1)][logical_index(1, 1)], 1.0, 1e-9);
  EXPECT_NEAR(t.entries[logical_index(1, 1)][logical_index(0, 1)], 1.0, 1e-9);
  EXPECT_NEAR(t.entries[logical_index(1, 0)][logical_index(1, 0)], 1.0, 1e-9);
  EXPECT_LT(max_table_diff(t, ideal_truth_table(LogicalBasis::kXX)), 1e-9);
  for (double s : *t.success) EXPECT_NEAR(s, 1.0 / 9.0, 1e-9);
}

TEST(IdealCnot, MissingModes) {
  EXPECT_THROW(build_ideal_cnot(make_layout({"C_H", "C_V", "T_H", "T_V"})), LayoutError);
  EXPECT_THROW(build_model_circuit(GateParams{}, ideal_layout()), LayoutError);
}

TEST(IdealEta, QuotedValues) {
  EXPECT_EQ(ideal_eta(LogicalBasis::kZZ), (EtaSet{1.0, 0.5, 1.0, 0.5}));
  EXPECT_EQ(ideal_eta(LogicalBasis::kXX), (EtaSet{0.5, 1.0, 0.5, 1.0}));
  EXPECT_EQ(params_for_basis(GateParams{}, LogicalBasis::kXX).eta, ideal_eta(LogicalBasis::kXX));
}

TEST(ModelCircuit, ReducesToIdealNetwork) {
  const auto layout = ideal_layout();
  const auto ps = standard_post_selection(*layout);
  const auto ideal_circuit = build_ideal_cnot(layout);
  for (auto basis : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
    const auto model = model_truth_table(GateParams{}, basis);
    const auto ideal = truth_table(ideal_circuit, basis, ps);
    EXPECT_LT(max_table_diff(model, ideal), 1e-9);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR((*model.success)[i], (*ideal.success)[i], 1e-9);
  }
}

TEST(ModelCircuit, UnitaryForRandomParameters) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    GateParams p;
    for (auto key : kGateParamKeys) set_param(p, key, u(rng));
    EXPECT_LT(unitarity_defect(build_model_circuit(p, model_layout()).matrix()), 1e-10);
  }
}

TEST(ModelCircuit, MismatchErrorsAreEqualDiagonalTermsOnFlipRows) {
  for (double x : {0.0, 0.35, 0.8, 0.97}) {
    GateParams p;
    p.overlap = x;
    for (auto basis : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
      const auto t = model_truth_table(p, basis);
      const auto ideal = ideal_truth_table(basis);
      const auto rows = flip_rows(basis);
      ASSERT_EQ(rows.size(), 2u);
      for (std::size_t i = 0; i < 4; ++i) {
        if (std::find(rows.begin(), rows.end(), i) != rows.end()) continue;
        for (std::size_t o = 0; o < 4; ++o) EXPECT_NEAR(t.entries[i][o], ideal.entries[i][o], 1e-9);
      }
      EXPECT_NEAR(t.entries[rows[0]][rows[0]], t.entries[rows[1]][rows[1]], 1e-9);
      if (x < 1.0) {
        EXPECT_GT(t.entries[rows[0]][rows[0]], 1e-3);
      }
      // All remaining probability stays on the ideal (flipped) output.
      for (auto r : rows) {
        std::size_t target = 0;
        for (std::size_t o = 0; o < 4; ++o) {
          if (ideal.entries[r][o] == 1.0) target = o;
        }
        EXPECT_NEAR(t.entries[r][r] + t.entries[r][target], 1.0, 1e-9);
      }
    }
  }
}

// Fully distinguishable photons: each travels alone, and a coincidence is either photon landing
// in either port. Independent of the mismatch-copy construction.
TEST(ModelCircuit, ZeroOverlapMatchesClassicalSplitting) {
  const auto layout = ideal_layout();
  const auto u = build_ideal_cnot(layout);
  const auto ps = standard_post_selection(*layout);
  GateParams p;
  p.overlap = 0.0;
  const auto model = model_truth_table(p, LogicalBasis::kZZ);
  for (int b = 0; b < 2; ++b) {
    const auto c_in = static_cast<Eigen::Index>(layout->id("C_H").index);
    const auto t_in = static_cast<Eigen::Index>(layout->id(b ? "T_H" : "T_V").index);
    std::array<double, 4> row{};
    double success = 0.0;
    for (auto m : ps.control) {
      for (auto n : ps.target) {
        const auto mi = static_cast<Eigen::Index>(m.index);
        const auto ni = static_cast<Eigen::Index>(n.index);
        const double pr = std::norm(u.matrix()(mi, c_in)) * std::norm(u.matrix()(ni, t_in)) +
                          std::norm(u.matrix()(ni, c_in)) * std::norm(u.matrix()(mi, t_in));
        const int cb = layout->label(m).find("_H") != std::string::npos;
        const int tb = layout->label(n).find("_H") != std::string::npos;
        row[logical_index(cb, tb)] += pr;
        success += pr;
      }
    }
    const std::size_t r = logical_index(1, b);
    for (std::size_t o = 0; o < 4; ++o) EXPECT_NEAR(model.entries[r][o], row[o] / success, 1e-9);
    EXPECT_NEAR((*model.success)[r], success, 1e-9);
  }
}

TEST(ModelCircuit, DiagonalSettingEqualsDiagonalReadoutOfIdealNetwork) {
  // With ideal mixers the role-exchanged XX setting and an explicit diagonal readout of the ZZ
  // circuit see the same physics.
  for (double x : {1.0, 0.9, 0.5}) {
    GateParams p;
    p.overlap = x;
    const auto layout = model_layout();
    const auto zz_circuit = build_model_circuit(p, layout);
    const auto via_readout = truth_table(zz_circuit, LogicalBasis::kXX, standard_post_selection(*layout));
    EXPECT_LT(max_table_diff(via_readout, model_truth_table(p, LogicalBasis::kXX)), 1e-9);
  }
}

TEST(ModelCircuit, LogicalFidelityIsMonotoneInOverlap) {
  for (auto basis : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
    const auto ideal = ideal_truth_table(basis);
    double previous = -1.0;
    for (int k = 0; k <= 100; ++k) {
      GateParams p;
      p.overlap = k / 100.0;
      const double f = logical_fidelity(model_truth_table(p, basis), ideal);
      EXPECT_GE(f, previous - 1e-12) << "overlap " << p.overlap;
      previous = f;
    }
    EXPECT_NEAR(previous, 1.0, 1e-9);
  }
}

TEST(ModelCircuit, ResidualPhaseShowsUpOnlyInSuperpositions) {
  GateParams p;
  p.residual_phase_t = 0.3;
  // Target analysis mixes H and V, so a phase error on T_V leaks into the ZZ table.
  const auto t = model_truth_table(p, LogicalBasis::kZZ);
  EXPECT_LT(t.entries[0][0], 1.0 - 1e-3);
  p.residual_phase_t = 0.0;
  p.residual_phase_c = 0.3;
  // The control is neither mixed before nor after in ZZ.
  EXPECT_LT(max_table_diff(model_truth_table(p, LogicalBasis::kZZ), ideal_truth_table(LogicalBasis::kZZ)), 1e-9);
}

TEST(GateParams, ValidationAndConfigRoundTrip) {
  GateParams p;
  p.overlap = 0.97;
  p.eta.eta_4b = 0.47;
  p.residual_phase_c = -0.125;
  const GateParams back = parse_gate_params(format_gate_params(p));
  EXPECT_EQ(back, p);

  EXPECT_THROW(parse_gate_params("overlap = 1.2\n"), DomainError);
  EXPECT_THROW(parse_gate_params("overlap = 0.9\nwibble = 3\n"), ParseError);
  EXPECT_THROW(parse_gate_params("overlap = abc\n"), ParseError);
  EXPECT_THROW(parse_gate_params("overlap = 0.9\noverlap = 0.8\n"), ParseError);
  const GateParams partial = parse_gate_params("# comment\n  eta_3a = 0.95   # trailing\n");
  EXPECT_DOUBLE_EQ(partial.eta.eta_3a, 0.95);
  EXPECT_DOUBLE_EQ(partial.overlap, 1.0);
  try {
    parse_gate_params("overlap = 0.9\n\nR_X = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Visibility, EndpointsFromTheEngine) {
  // Distinguishable: both reflect or both transmit, R^2 + T^2 = 5/9. Identical: (T - R)^2 = 1/9.
  const double expected_max = (5.0 / 9.0 - 1.0 / 9.0) / (5.0 / 9.0);
  EXPECT_NEAR(max_visibility(), expected_max, 1e-12);
  EXPECT_NEAR(overlap_to_visibility(1.0), expected_max, 1e-12);
  EXPECT_EQ(overlap_to_visibility(0.0), 0.0);
  EXPECT_NEAR(max_visibility(0.5), 1.0, 1e-12);
}

TEST(Visibility, QuadraticInOverlapAndInvertible) {
  for (int k = 0; k <= 100; ++k) {
    const double x = k / 100.0;
    const double v = overlap_to_visibility(x);
    EXPECT_NEAR(v, x * x * max_visibility(), 1e-12);
    EXPECT_NEAR(visibility_to_overlap(v), x, 1e-9);
  }
  const double x94 = normalized_visibility_to_overlap(0.94);
  EXPECT_NEAR(overlap_to_normalized_visibility(x94), 0.94, 1e-12);
  EXPECT_NEAR(visibility_to_overlap(0.94 * max_visibility()), x94, 1e-12);
}

TEST(Visibility, DomainErrors) {
  EXPECT_THROW(overlap_to_visibility(1.5), DomainError);
  EXPECT_THROW(visibility_to_overlap(0.9), DomainError);  // above V_max = 0.8
  EXPECT_THROW(visibility_to_overlap(-0.1), DomainError);
  EXPECT_THROW(normalized_visibility_to_overlap(1.1), DomainError);
}

}  // namespace
}  // namespace fibrecnot
