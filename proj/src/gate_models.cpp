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

#include "fibrecnot/gate_models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fibrecnot/errors.hpp"
#include "fibrecnot/keyvalue.hpp"

namespace fibrecnot {

std::string_view to_string(LogicalBasis basis) { return basis == LogicalBasis::kZZ ? "ZZ" : "XX"; }

LogicalBasis parse_basis(std::string_view text) {
  if (text == "ZZ") return LogicalBasis::kZZ;
  if (text == "XX") return LogicalBasis::kXX;
  throw ValidationError("unknown basis '" + std::string(text) + "' (expected ZZ or XX)");
}

EtaSet ideal_eta(LogicalBasis basis) {
  if (basis == LogicalBasis::kZZ) return EtaSet{1.0, 0.5, 1.0, 0.5};
  return EtaSet{0.5, 1.0, 0.5, 1.0};
}

namespace {

void check_unit(std::string_view name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " = " + format_double(v) + " outside [0, 1]");
  }
}

double* field(GateParams& p, std::string_view key) {
  if (key == "R_H_central") return &p.R_H_central;
  if (key == "R_V_central") return &p.R_V_central;
  if (key == "R_H_outer1") return &p.R_H_outer1;
  if (key == "R_V_outer1") return &p.R_V_outer1;
  if (key == "R_H_outer2") return &p.R_H_outer2;
  if (key == "R_V_outer2") return &p.R_V_outer2;
  if (key == "overlap") return &p.overlap;
  if (key == "eta_3a") return &p.eta.eta_3a;
  if (key == "eta_3b") return &p.eta.eta_3b;
  if (key == "eta_4a") return &p.eta.eta_4a;
  if (key == "eta_4b") return &p.eta.eta_4b;
  if (key == "residual_phase_c") return &p.residual_phase_c;
  if (key == "residual_phase_t") return &p.residual_phase_t;
  return nullptr;
}

}  // namespace

void GateParams::validate() const {
  for (auto key : kGateParamKeys) {
    const double v = get_param(*this, key);
    if (key.starts_with("residual_phase")) {
      if (!std::isfinite(v)) throw DomainError(std::string(key) + " must be finite");
    } else {
      check_unit(key, v);
    }
  }
}

bool is_gate_param_key(std::string_view key) {
  return std::find(kGateParamKeys.begin(), kGateParamKeys.end(), key) != kGateParamKeys.end();
}

double get_param(const GateParams& params, std::string_view key) {
  auto* f = field(const_cast<GateParams&>(params), key);
  if (f == nullptr) throw ValidationError("unknown gate parameter '" + std::string(key) + "'");
  return *f;
}

void set_param(GateParams& params, std::string_view key, double value) {
  auto* f = field(params, key);
  if (f == nullptr) throw ValidationError("unknown gate parameter '" + std::string(key) + "'");
  *f = value;
}

GateParams parse_gate_params(std::string_view text) {
  GateParams params;
  for (const auto& kv : parse_key_values(text)) {
    if (!is_gate_param_key(kv.key)) throw ParseError(kv.line, 1, "unknown key '" + kv.key + "'");
    set_param(params, kv.key, parse_double(kv.value, kv.line));
  }
  params.validate();
  return params;
}

std::string format_gate_params(const GateParams& params) {
  std::string out;
  for (auto key : kGateParamKeys) {
    out += std::string(key) + " = " + format_double(get_param(params, key)) + "\n";
  }
  return out;
}

GateParams params_for_basis(const GateParams& params, LogicalBasis basis) {
  GateParams p = params;
  if (basis == LogicalBasis::kXX) {
    p.eta = EtaSet{params.eta.eta_3b, params.eta.eta_3a, params.eta.eta_4b, params.eta.eta_4a};
  }
  return p;
}

LayoutPtr ideal_layout() {
  static const LayoutPtr layout =
      make_layout({"C_H", "C_V", "T_H", "T_V", "D1_H", "D1_V", "D2_H", "D2_V"});
  return layout;
}

LayoutPtr model_layout() {
  static const LayoutPtr layout = [] {
    std::vector<std::string> labels = ideal_layout()->labels();
    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i) labels.push_back(labels[i] + "2");
    return make_layout(std::move(labels));
  }();
  return layout;
}

CircuitUnitary ppfc(std::string_view fibre_a, std::string_view fibre_b, double r_h, double r_v,
                    const LayoutPtr& layout, std::string_view copy) {
  const std::string a(fibre_a), b(fibre_b), c(copy);
  return compose(embed(beamsplitter_block(r_h), a + "_H" + c, b + "_H" + c, layout),
                 embed(beamsplitter_block(r_v), a + "_V" + c, b + "_V" + c, layout));
}

namespace {

void require_fibres(const ModeLayout& layout, std::initializer_list<std::string_view> fibres,
                    std::string_view copy) {
  for (auto f : fibres) {
    for (auto pol : {"_H", "_V"}) {
      const std::string label = std::string(f) + pol + std::string(copy);
      if (!layout.contains(label)) throw LayoutError("layout is missing mode '" + label + "'");
    }
  }
}

// Central coupler, then each outer coupler wrapped in the 90-degree splices.
CircuitUnitary coupler_network(const GateParams& p, const LayoutPtr& layout, std::string_view copy) {
  return compose_all({
      ppfc("C", "T", p.R_H_central, p.R_V_central, layout, copy),
      hv_swap("C", layout, copy),
      ppfc("C", "D1", p.R_H_outer1, p.R_V_outer1, layout, copy),
      hv_swap("C", layout, copy),
      hv_swap("T", layout, copy),
      ppfc("T", "D2", p.R_H_outer2, p.R_V_outer2, layout, copy),
      hv_swap("T", layout, copy),
  });
}

CircuitUnitary mixer(std::string_view fibre, double eta, const LayoutPtr& layout, std::string_view copy) {
  const std::string f(fibre), c(copy);
  return embed(beamsplitter_block(eta), f + "_H" + c, f + "_V" + c, layout);
}

}  // namespace

CircuitUnitary build_ideal_cnot(const LayoutPtr& layout) {
  if (!layout) throw LayoutError("null layout");
  require_fibres(*layout, {"C", "T", "D1", "D2"}, "");
  const GateParams nominal;
  const auto hadamard_t = mixer("T", 0.5, layout, "");
  return compose_all({hadamard_t, coupler_network(nominal, layout, ""), hadamard_t});
}

CircuitUnitary build_model_circuit(const GateParams& params, const LayoutPtr& layout) {
  params.validate();
  if (!layout) throw LayoutError("null layout");
  require_fibres(*layout, {"C", "T", "D1", "D2"}, "");
  require_fibres(*layout, {"C", "T", "D1", "D2"}, "2");

  // Control photon: amplitude x stays in the matched modes, sqrt(1 - x^2) moves to the copy.
  const double r = params.overlap * params.overlap;
  CircuitUnitary u = compose(embed(beamsplitter_block(r, SignedSide::kSecond), "C_H", "C_H2", layout),
                             embed(beamsplitter_block(r, SignedSide::kSecond), "C_V", "C_V2", layout));
  for (std::string_view copy : {"", "2"}) {
    u = compose_all({u, mixer("C", params.eta.eta_3a, layout, copy),
                     mixer("T", params.eta.eta_3b, layout, copy)});
  }
  for (std::string_view copy : {"", "2"}) {
    const std::string c(copy);
    u = compose_all({u, coupler_network(params, layout, copy),
                     phase_plate("C_V" + c, params.residual_phase_c, layout),
                     phase_plate("T_V" + c, params.residual_phase_t, layout)});
  }
  for (std::string_view copy : {"", "2"}) {
    u = compose_all({u, mixer("C", params.eta.eta_4a, layout, copy),
                     mixer("T", params.eta.eta_4b, layout, copy)});
  }
  return u;
}

PostSelection standard_post_selection(const ModeLayout& layout) {
  PostSelection ps;
  for (std::string_view copy : {"", "2"}) {
    for (auto pol : {"_H", "_V"}) {
      const std::string c = "C" + std::string(pol) + std::string(copy);
      const std::string t = "T" + std::string(pol) + std::string(copy);
      if (layout.contains(c)) ps.control.push_back(layout.id(c));
      if (layout.contains(t)) ps.target.push_back(layout.id(t));
    }
  }
  ps.validate();
  return ps;
}

namespace {

// Coincidence probability at one coupler for a control photon with the given overlap.
double single_coupler_coincidence(double overlap, double reflectivity) {
  static const LayoutPtr layout = make_layout({"a", "b", "a2", "b2"});
  const CircuitUnitary u = compose_all({
      embed(beamsplitter_block(overlap * overlap, SignedSide::kSecond), "a", "a2", layout),
      embed(beamsplitter_block(reflectivity), "a", "b", layout),
      embed(beamsplitter_block(reflectivity), "a2", "b2", layout),
  });
  const PhotonPairState out = evolve_pair(u, ModePair::of(layout->id("a"), layout->id("b")));
  PostSelection ps{{layout->id("a"), layout->id("a2")}, {layout->id("b"), layout->id("b2")}};
  return coincidence_probabilities(out, ps, false).success_probability;
}

}  // namespace

double overlap_to_visibility(double overlap, double reflectivity) {
  check_unit("overlap", overlap);
  check_unit("reflectivity", reflectivity);
  const double distinguishable = single_coupler_coincidence(0.0, reflectivity);
  if (distinguishable < kDegenerateSuccessThreshold) {
    throw DomainError("visibility undefined: no coincidences for distinguishable photons");
  }
  return (distinguishable - single_coupler_coincidence(overlap, reflectivity)) / distinguishable;
}

double max_visibility(double reflectivity) { return overlap_to_visibility(1.0, reflectivity); }

// Coincidence rates are affine in overlap^2 (matched and mismatched outputs never share a mode
// pair), so V(x) = x^2 * V(1).
double visibility_to_overlap(double visibility, double reflectivity) {
  const double vmax = max_visibility(reflectivity);
  if (!(visibility >= 0.0 && visibility <= vmax * (1.0 + 1e-15))) {
    throw DomainError("visibility " + format_double(visibility) + " outside [0, " + format_double(vmax) + "]");
  }
  if (vmax <= 0.0) throw DomainError("coupler shows no two-photon interference");
  return std::min(1.0, std::sqrt(visibility / vmax));
}

double overlap_to_normalized_visibility(double overlap, double reflectivity) {
  return overlap_to_visibility(overlap, reflectivity) / max_visibility(reflectivity);
}

double normalized_visibility_to_overlap(double normalized, double reflectivity) {
  if (!(normalized >= 0.0 && normalized <= 1.0)) {
    throw DomainError("normalized visibility " + format_double(normalized) + " outside [0, 1]");
  }
  return visibility_to_overlap(normalized * max_visibility(reflectivity), reflectivity);
}

}  // namespace fibrecnot
