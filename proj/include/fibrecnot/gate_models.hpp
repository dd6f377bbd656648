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

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "fibrecnot/modes.hpp"
#include "fibrecnot/two_photon.hpp"

namespace fibrecnot {

/// ZZ: |0> = |V>, |1> = |H>.  XX: |0/1> = (|H> +/- |V>)/sqrt(2).
enum class LogicalBasis { kZZ, kXX };

std::string_view to_string(LogicalBasis basis);
/// Accepts "ZZ" / "XX". Throws ValidationError otherwise.
LogicalBasis parse_basis(std::string_view text);

/// Encoding/analysis mixer reflectivities. `a` is the control photon, `b` the target;
/// 3 mixes before the gate, 4 after. eta = 1 leaves H and V unmixed, eta = 1/2 is a
/// Hadamard-like rotation.
struct EtaSet {
  double eta_3a = 1.0;
  double eta_3b = 0.5;
  double eta_4a = 1.0;
  double eta_4b = 0.5;
  friend bool operator==(const EtaSet&, const EtaSet&) = default;
};

EtaSet ideal_eta(LogicalBasis basis);

struct GateParams {
  double R_H_central = 1.0 / 3.0;
  double R_V_central = 1.0;
  // Physical coupler values; the 90-degree splices around the outer couplers are composed
  // explicitly, so these act with H and V exchanged on the gate fibre.
  double R_H_outer1 = 1.0 / 3.0;
  double R_V_outer1 = 1.0;
  double R_H_outer2 = 1.0 / 3.0;
  double R_V_outer2 = 1.0;
  double overlap = 1.0;
  // ZZ-setting mixer values. The XX setting exchanges the control and target roles.
  EtaSet eta = ideal_eta(LogicalBasis::kZZ);
  double residual_phase_c = 0.0;
  double residual_phase_t = 0.0;

  /// Throws DomainError if any reflectivity, eta or the overlap leaves [0, 1] or a phase is
  /// not finite.
  void validate() const;

  friend bool operator==(const GateParams&, const GateParams&) = default;
};

/// Flat list of the tunable GateParams fields, in config-file order.
inline constexpr std::array<std::string_view, 13> kGateParamKeys = {
    "R_H_central", "R_V_central", "R_H_outer1", "R_V_outer1", "R_H_outer2",
    "R_V_outer2",  "overlap",     "eta_3a",     "eta_3b",     "eta_4a",
    "eta_4b",      "residual_phase_c", "residual_phase_t"};

bool is_gate_param_key(std::string_view key);
double get_param(const GateParams& params, std::string_view key);
void set_param(GateParams& params, std::string_view key, double value);

/// `key = value` text; unknown keys are rejected with a ParseError naming the line.
GateParams parse_gate_params(std::string_view text);
std::string format_gate_params(const GateParams& params);

/// Copy of `params` with the mixer roles arranged for `basis`: unchanged for ZZ, control and
/// target exchanged for XX.
GateParams params_for_basis(const GateParams& params, LogicalBasis basis);

/// C_H C_V T_H T_V D1_H D1_V D2_H D2_V: control, target and the two dump fibres.
LayoutPtr ideal_layout();
/// ideal_layout() followed by a mismatch copy of every mode (suffix "2": C_H2, C_V2, ...).
LayoutPtr model_layout();

/// Partially polarizing coupler between `fibre_a` (signed side) and `fibre_b`. Reflection
/// keeps the photon in its fibre. `copy` selects the mode copy ("" or "2").
CircuitUnitary ppfc(std::string_view fibre_a, std::string_view fibre_b, double r_h, double r_v,
                    const LayoutPtr& layout, std::string_view copy = "");

/// Ideal post-selected CNOT (control "1" = H) with the target Hadamards included.
/// Layout must contain the control, target and both dump fibres.
CircuitUnitary build_ideal_cnot(const LayoutPtr& layout);

/// Full imperfection model: mismatch splitter on the control photon, encoding mixers, the three
/// couplers on both mode copies, residual phases, analysis mixers. Layout must contain the
/// mismatch copies. The mixers are used as given; see params_for_basis.
CircuitUnitary build_model_circuit(const GateParams& params, const LayoutPtr& layout);

/// Detection ports over every control-fibre and target-fibre mode present in the layout
/// (mismatch copies included).
PostSelection standard_post_selection(const ModeLayout& layout);

/// Two-photon dip visibility (C_dist - C_match) / C_dist at a single coupler of the given
/// reflectivity, evaluated with the engine. Domain: overlap in [0, 1].
double overlap_to_visibility(double overlap, double reflectivity = 1.0 / 3.0);
/// Inverse of overlap_to_visibility on [0, max_visibility(reflectivity)].
double visibility_to_overlap(double visibility, double reflectivity = 1.0 / 3.0);
double max_visibility(double reflectivity = 1.0 / 3.0);

/// Visibility as a fraction of the coupler's maximum (1 for identical photons).
double overlap_to_normalized_visibility(double overlap, double reflectivity = 1.0 / 3.0);
double normalized_visibility_to_overlap(double normalized, double reflectivity = 1.0 / 3.0);

}  // namespace fibrecnot
