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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fibrecnot/gate_models.hpp"
#include "fibrecnot/metrics.hpp"

namespace fibrecnot {

/// Fourfold coincidences for one logical input, outputs ordered 00, 01, 10, 11.
struct CountRecord {
  LogicalBasis basis = LogicalBasis::kZZ;
  std::size_t input = 0;  // logical_index of the prepared input
  std::array<std::uint64_t, 4> counts{};
  std::array<double, 4> accidentals{};
  double integration_time = 1.0;  // seconds

  void validate() const;
  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// Records for one or both bases; a basis that is present has all four inputs.
class CountSet {
 public:
  /// Throws ValidationError on a duplicate (basis, input) key.
  void add(const CountRecord& record);

  const std::vector<CountRecord>& records() const { return records_; }
  bool has_basis(LogicalBasis basis) const;
  /// Throws ValidationError if absent.
  const CountRecord& at(LogicalBasis basis, std::size_t input) const;

  /// Every present basis has all four inputs.
  void validate() const;

  friend bool operator==(const CountSet&, const CountSet&) = default;

 private:
  std::vector<CountRecord> records_;
};

/// Line-oriented count file:
///   # comment
///   basis ZZ
///   input 10 counts 3 1 0 97 acc 0.5 0.5 0.5 0.5 t 600
/// Data lines belong to the most recent `basis` header. Throws ParseError with line/column.
CountSet parse_counts(std::string_view text);
std::string format_counts(const CountSet& set);
std::string format_counts_doc(const CountSet& set);

struct CorrectedCounts {
  std::array<double, 4> values{};
  std::array<bool, 4> clamped{};
  bool any_clamped() const { return clamped[0] || clamped[1] || clamped[2] || clamped[3]; }
};

/// counts - accidentals, clamped at zero.
CorrectedCounts subtract_accidentals(const CountRecord& record);

/// Rows are accidental-corrected counts over their totals. Success probabilities are left absent.
/// Clamped outputs are listed in the provenance under "clamped". Throws ValidationError naming the
/// input on a zero-total row.
TruthTable counts_to_truth_table(const CountSet& set, LogicalBasis basis);

/// Multinomial draw of `trials_per_input` events per row from `table`, plus independent Poisson
/// accidentals of mean `accidental_rate` per output (recorded in the accidentals column).
/// Deterministic in `seed`.
CountSet synth_counts(const TruthTable& table, std::uint64_t trials_per_input, double accidental_rate,
                      std::uint64_t seed);

/// Poisson-resampled standard error of logical_fidelity. Resample r draws from its own engine
/// seeded with (seed, r), so the OpenMP and serial versions agree bit for bit.
double bootstrap_fidelity_error(const CountSet& set, LogicalBasis basis, const TruthTable& ideal,
                                std::size_t resamples, std::uint64_t seed);
double bootstrap_fidelity_error_serial(const CountSet& set, LogicalBasis basis, const TruthTable& ideal,
                                       std::size_t resamples, std::uint64_t seed);

inline constexpr std::size_t kMinBootstrapResamples = 100;

}  // namespace fibrecnot
