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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "fibrecnot/gate_models.hpp"
#include "fibrecnot/modes.hpp"
#include "fibrecnot/two_photon.hpp"

namespace fibrecnot {

using Table4 = std::array<std::array<double, 4>, 4>;

/// Logical index of the two-qubit state |control target>: 2 * control + target.
constexpr std::size_t logical_index(int control, int target) {
  return static_cast<std::size_t>(2 * control + target);
}

inline constexpr std::array<std::string_view, 4> kLogicalLabels = {"00", "01", "10", "11"};

/// Post-selected conditional probabilities P[input][output], inputs and outputs ordered
/// 00, 01, 10, 11 (control bit first).
struct TruthTable {
  LogicalBasis basis = LogicalBasis::kZZ;
  Table4 entries{};
  /// Absent for tables built from conditional counts.
  std::optional<std::array<double, 4>> success;
  std::map<std::string, std::string> provenance;

  /// Non-negative entries, rows summing to 1 within `tol`, success in (0, 1].
  void validate(double tol = 1e-9) const;
};

/// The exact permutation tables: CNOT in ZZ, and (a, b) -> (a xor b, b) in XX.
TruthTable ideal_truth_table(LogicalBasis basis);

/// Encodes each logical input in `basis` on the matched C/T input modes, evolves, post-selects
/// on `ps` and measures both output photons in `basis`. Output bits are read from the mode label
/// (`_H` is 1, `_V` is 0), summing over mode copies. Throws DegeneratePostSelection naming the
/// row on failure.
TruthTable truth_table(const CircuitUnitary& circuit, LogicalBasis basis, const PostSelection& ps);

/// Model table for one basis setting: the mixers of params_for_basis(params, basis) perform the
/// basis change, so the circuit is read in raw polarization and tagged with `basis`.
TruthTable model_truth_table(const GateParams& params, LogicalBasis basis);

/// (1/4) sum_io ideal[i][o] * measured[i][o]. Throws ValidationError on basis mismatch.
double logical_fidelity(const TruthTable& measured, const TruthTable& ideal);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// low = F_ZZ + F_XX - 1, high = min(F_ZZ, F_XX). The lower bound is not clamped.
Interval process_fidelity_bounds(double f_zz, double f_xx);

/// Two-qubit conversion (d F_P + 1) / (d + 1), d = 4.
inline constexpr double kHilbertDimension = 4.0;
double average_fidelity(double process_fidelity);
Interval average_fidelity_bounds(const Interval& process);

/// (sum_ij sqrt(M_ij E_ij))^2 / 16, exactly as written; no renormalisation.
double similarity(const TruthTable& model, const TruthTable& measured);

struct FidelityReport {
  double f_zz = 0.0;
  double f_xx = 0.0;
  Interval process;
  Interval average;
  std::optional<double> se_zz;
  std::optional<double> se_xx;
};

FidelityReport make_fidelity_report(double f_zz, double f_xx);

std::string format_table_text(const TruthTable& table);
/// Parses format_table_text output. Throws ParseError with line numbers.
TruthTable parse_table_text(std::string_view text);

std::string format_table_doc(const TruthTable& table);
TruthTable parse_table_doc(std::string_view text);

/// Bar heights, one per input/output pair: basis,input,output,probability.
std::string format_table_csv(const TruthTable& table, bool header = true);

std::string format_report_text(const FidelityReport& report);
std::string format_report_doc(const FidelityReport& report);

}  // namespace fibrecnot
