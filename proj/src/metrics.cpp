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

#include "fibrecnot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fibrecnot/errors.hpp"
#include "fibrecnot/keyvalue.hpp"

namespace fibrecnot {

using nlohmann::json;

void TruthTable::validate(double tol) const {
  for (std::size_t i = 0; i < 4; ++i) {
    double row = 0.0;
    for (double p : entries[i]) {
      if (!(p >= 0.0)) throw ValidationError("negative or non-finite entry in row " + std::string(kLogicalLabels[i]));
      row += p;
    }
    if (std::abs(row - 1.0) > tol) {
      throw ValidationError("row " + std::string(kLogicalLabels[i]) + " sums to " + format_double(row));
    }
  }
  if (success) {
    for (std::size_t i = 0; i < 4; ++i) {
      const double s = (*success)[i];
      if (!(s > 0.0 && s <= 1.0 + tol)) {
        throw ValidationError("success probability of row " + std::string(kLogicalLabels[i]) + " outside (0, 1]");
      }
    }
  }
}

TruthTable ideal_truth_table(LogicalBasis basis) {
  TruthTable t;
  t.basis = basis;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const std::size_t out = basis == LogicalBasis::kZZ ? logical_index(a, a ^ b) : logical_index(a ^ b, b);
      t.entries[logical_index(a, b)][out] = 1.0;
    }
  }
  t.provenance["source"] = "ideal";
  return t;
}

namespace {

// |V> -> |0_X> = (|H> + |V>)/sqrt2, |H> -> |1_X> = (|H> - |V>)/sqrt2, in (H, V) order.
Block2 diagonal_encoder() {
  const double s = std::numbers::sqrt2 / 2.0;
  Block2 e;
  e << s, s, -s, s;
  return e;
}

int bit_of(const std::string& label) {
  if (label.find("_H") != std::string::npos) return 1;
  if (label.find("_V") != std::string::npos) return 0;
  throw LayoutError("detection mode '" + label + "' has no polarization");
}

CircuitUnitary basis_frame(const CircuitUnitary& circuit, LogicalBasis basis) {
  if (basis == LogicalBasis::kZZ) return circuit;
  const auto& layout = circuit.layout_ptr();
  CircuitUnitary enc = CircuitUnitary::identity(layout);
  CircuitUnitary dec = CircuitUnitary::identity(layout);
  const Block2 e = diagonal_encoder();
  for (std::string_view copy : {"", "2"}) {
    for (std::string_view fibre : {"C", "T"}) {
      const std::string h = std::string(fibre) + "_H" + std::string(copy);
      const std::string v = std::string(fibre) + "_V" + std::string(copy);
      if (!layout->contains(h) || !layout->contains(v)) continue;
      enc = compose(enc, embed(e, h, v, layout));
      dec = compose(dec, embed(e.adjoint(), h, v, layout));
    }
  }
  return compose_all({enc, circuit, dec});
}

}  // namespace

TruthTable truth_table(const CircuitUnitary& circuit, LogicalBasis basis, const PostSelection& ps) {
  ps.validate();
  const auto& layout = circuit.layout();
  const CircuitUnitary framed = basis_frame(circuit, basis);
  std::vector<int> control_bits, target_bits;
  for (auto m : ps.control) control_bits.push_back(bit_of(layout.label(m)));
  for (auto m : ps.target) target_bits.push_back(bit_of(layout.label(m)));

  TruthTable t;
  t.basis = basis;
  std::array<double, 4> success{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const std::size_t row = logical_index(a, b);
      const ModeId c = layout.id(a == 1 ? "C_H" : "C_V");
      const ModeId tm = layout.id(b == 1 ? "T_H" : "T_V");
      const PhotonPairState out = evolve_pair(framed, ModePair::of(c, tm));
      CoincidenceResult res;
      try {
        res = coincidence_probabilities(out, ps);
      } catch (const DegeneratePostSelection& e) {
        throw DegeneratePostSelection("input row " + std::string(kLogicalLabels[row]) + ": " + e.what());
      }
      std::size_t k = 0;
      for (std::size_t i = 0; i < ps.control.size(); ++i) {
        for (std::size_t j = 0; j < ps.target.size(); ++j, ++k) {
          t.entries[row][logical_index(control_bits[i], target_bits[j])] += res.outcomes[k].probability;
        }
      }
      for (double& p : t.entries[row]) p /= res.success_probability;
      success[row] = res.success_probability;
    }
  }
  t.success = success;
  t.provenance["source"] = "simulation";
  return t;
}

TruthTable model_truth_table(const GateParams& params, LogicalBasis basis) {
  const LayoutPtr layout = model_layout();
  const CircuitUnitary u = build_model_circuit(params_for_basis(params, basis), layout);
  TruthTable t = truth_table(u, LogicalBasis::kZZ, standard_post_selection(*layout));
  t.basis = basis;
  t.provenance["source"] = "model";
  return t;
}

namespace {

void require_same_basis(const TruthTable& a, const TruthTable& b) {
  if (a.basis != b.basis) {
    throw ValidationError("basis mismatch: " + std::string(to_string(a.basis)) + " vs " +
                          std::string(to_string(b.basis)));
  }
}

}  // namespace

double logical_fidelity(const TruthTable& measured, const TruthTable& ideal) {
  require_same_basis(measured, ideal);
  double f = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t o = 0; o < 4; ++o) f += ideal.entries[i][o] * measured.entries[i][o];
  }
  return f / 4.0;
}

Interval process_fidelity_bounds(double f_zz, double f_xx) {
  return Interval{f_zz + f_xx - 1.0, std::min(f_zz, f_xx)};
}

double average_fidelity(double process_fidelity) {
  return (kHilbertDimension * process_fidelity + 1.0) / (kHilbertDimension + 1.0);
}

Interval average_fidelity_bounds(const Interval& process) {
  return Interval{average_fidelity(process.low), average_fidelity(process.high)};
}

double similarity(const TruthTable& model, const TruthTable& measured) {
  require_same_basis(model, measured);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double m = model.entries[i][j];
      const double e = measured.entries[i][j];
      if (m < 0.0 || e < 0.0) throw ValidationError("similarity needs non-negative tables");
      s += std::sqrt(m * e);
    }
  }
  return s * s / 16.0;
}

FidelityReport make_fidelity_report(double f_zz, double f_xx) {
  FidelityReport r;
  r.f_zz = f_zz;
  r.f_xx = f_xx;
  r.process = process_fidelity_bounds(f_zz, f_xx);
  r.average = average_fidelity_bounds(r.process);
  return r;
}

std::string format_table_text(const TruthTable& table) {
  std::string out = "# basis: " + std::string(to_string(table.basis)) + "\n";
  if (table.success) {
    out += "# success:";
    for (double s : *table.success) out += " " + format_double(s);
    out += "\n";
  }
  for (const auto& row : table.entries) {
    for (std::size_t j = 0; j < 4; ++j) out += (j ? " " : "") + format_double(row[j]);
    out += "\n";
  }
  return out;
}

TruthTable parse_table_text(std::string_view text) {
  TruthTable t;
  bool have_basis = false;
  std::size_t rows = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("#")) {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "basis:") {
        std::string b;
        hs >> b;
        try {
          t.basis = parse_basis(b);
        } catch (const ValidationError& e) {
          throw ParseError(line_no, 0, e.what());
        }
        have_basis = true;
      } else if (key == "success:") {
        std::array<double, 4> s{};
        std::string tok;
        for (auto& v : s) {
          if (!(hs >> tok)) throw ParseError(line_no, 0, "success line needs 4 values");
          v = parse_double(tok, line_no);
        }
        t.success = s;
      }
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> vals;
    while (ls >> tok) vals.push_back(parse_double(tok, line_no));
    if (vals.empty()) continue;
    if (vals.size() != 4) throw ParseError(line_no, 0, "expected 4 columns, found " + std::to_string(vals.size()));
    if (rows == 4) throw ParseError(line_no, 0, "more than 4 rows");
    std::copy(vals.begin(), vals.end(), t.entries[rows].begin());
    ++rows;
  }
  if (!have_basis) throw ParseError(0, 0, "missing '# basis: ZZ|XX' header");
  if (rows != 4) throw ParseError(line_no, 0, "expected 4 rows, found " + std::to_string(rows));
  return t;
}

std::string format_table_doc(const TruthTable& table) {
  json j;
  j["basis"] = std::string(to_string(table.basis));
  j["entries"] = table.entries;
  j["success"] = table.success ? json(*table.success) : json(nullptr);
  j["provenance"] = table.provenance;
  return j.dump(2) + "\n";
}

TruthTable parse_table_doc(std::string_view text) {
  try {
    const json j = json::parse(text);
    TruthTable t;
    t.basis = parse_basis(j.at("basis").get<std::string>());
    t.entries = j.at("entries").get<Table4>();
    if (j.contains("success") && !j.at("success").is_null()) t.success = j.at("success").get<std::array<double, 4>>();
    if (j.contains("provenance")) t.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    return t;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("truth table document: ") + e.what());
  }
}

std::string format_table_csv(const TruthTable& table, bool header) {
  std::string out = header ? "basis,input,output,probability\n" : "";
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t o = 0; o < 4; ++o) {
      out += std::string(to_string(table.basis)) + "," + std::string(kLogicalLabels[i]) + "," +
             std::string(kLogicalLabels[o]) + "," + format_double(table.entries[i][o]) + "\n";
    }
  }
  return out;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_report_text(const FidelityReport& r) {
  std::string out;
  out += "F_ZZ = " + fixed(r.f_zz) + (r.se_zz ? " +/- " + fixed(*r.se_zz) : "") + "\n";
  out += "F_XX = " + fixed(r.f_xx) + (r.se_xx ? " +/- " + fixed(*r.se_xx) : "") + "\n";
  out += "process fidelity: " + fixed(r.process.low) + " <= F_P <= " + fixed(r.process.high) + "\n";
  out += "average gate fidelity: " + fixed(r.average.low) + " <= F_avg <= " + fixed(r.average.high) + "\n";
  if (r.process.low < 0.0) out += "note: lower process-fidelity bound is negative (reported unclamped)\n";
  return out;
}

std::string format_report_doc(const FidelityReport& r) {
  json j;
  j["F_ZZ"] = r.f_zz;
  j["F_XX"] = r.f_xx;
  j["F_P_low"] = r.process.low;
  j["F_P_high"] = r.process.high;
  j["F_avg_low"] = r.average.low;
  j["F_avg_high"] = r.average.high;
  j["se_ZZ"] = r.se_zz ? json(*r.se_zz) : json(nullptr);
  j["se_XX"] = r.se_xx ? json(*r.se_xx) : json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace fibrecnot
