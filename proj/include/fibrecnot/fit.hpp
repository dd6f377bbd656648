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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fibrecnot/gate_models.hpp"
#include "fibrecnot/metrics.hpp"

namespace fibrecnot {

/// Axis-aligned search box.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t dimension() const { return lower.size(); }
  bool contains(std::span<const double> x) const;
};

using Objective = std::function<double(std::span<const double>)>;

struct OptimumPoint {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Exhaustive maximisation over a `points`-per-axis grid including both box ends. Ties go to the
/// lexicographically smallest grid tuple. The objective must be safe to call concurrently.
OptimumPoint grid_search(const Objective& f, const Box& box, std::size_t points);
/// Single-threaded reference; returns exactly the same point as grid_search.
OptimumPoint grid_search_serial(const Objective& f, const Box& box, std::size_t points);

/// Compass search along the coordinate axes. A move is taken only if it raises the objective by
/// more than `tolerance`; a sweep without a move halves every step. Stops once all steps are below
/// `step_tolerance`.
OptimumPoint coordinate_refine(const Objective& f, const Box& box, OptimumPoint start,
                               std::vector<double> initial_step, double tolerance,
                               double step_tolerance = 1e-9);

enum class FitObjective { kProduct, kMean };

std::string_view to_string(FitObjective objective);

struct FitSpec {
  /// GateParams keys freed in the FULL stage.
  std::vector<std::string> free = {"overlap", "eta_3a", "eta_3b", "eta_4a", "eta_4b"};
  /// Per-key search bounds; keys without an entry use default_bounds().
  std::map<std::string, Interval> bounds;
  std::size_t grid = 5;
  double tolerance = 1e-12;
  FitObjective objective = FitObjective::kProduct;
  /// Values of every parameter that is not being fitted.
  GateParams base;

  Interval bounds_for(std::string_view key) const;
  /// Throws ValidationError: no free parameter, unknown key, bounds outside the domain, grid < 2.
  void validate() const;
};

/// Default search interval for one GateParams key.
Interval default_bounds(std::string_view key);

/// `key = value` file: `free = a, b, ...`, `grid = N`, `tolerance = x`, `objective = product|mean`,
/// `bound.<key> = lo hi`, and any GateParams key to set `base`.
FitSpec parse_fit_spec(std::string_view text);

struct SimilarityRow {
  std::string name;
  double s_zz = 0.0;
  double s_xx = 0.0;
  double objective = 0.0;
  GateParams params;
};

/// Three rows: IDEAL, INTERFERENCE, FULL MODEL.
struct SimilarityReport {
  std::array<SimilarityRow, 3> rows;
  GateParams fitted;  // FULL MODEL parameters
  double objective = 0.0;

  static SimilarityReport from_values(std::array<double, 3> s_zz, std::array<double, 3> s_xx);
};

double fit_objective(FitObjective kind, double s_zz, double s_xx);

/// Maximises the objective over the free parameters of each stage (grid then coordinate
/// refinement). Stage k+1 is also refined from stage k's optimum, so the stage objectives are
/// non-decreasing.
SimilarityReport fit(const TruthTable& e_zz, const TruthTable& e_xx, const FitSpec& spec);

struct ErrorBreakdown {
  // Percentage points.
  double zz_interference = 0.0;
  double zz_full = 0.0;
  double xx_interference = 0.0;
  double xx_full = 0.0;
};

/// INTERFERENCE - IDEAL and FULL - INTERFERENCE per basis, times 100.
ErrorBreakdown report_errors_breakdown(const SimilarityReport& report);

std::string format_similarity_text(const SimilarityReport& report);
std::string format_similarity_doc(const SimilarityReport& report);
SimilarityReport parse_similarity_doc(std::string_view text);
std::string format_breakdown_text(const ErrorBreakdown& b);

}  // namespace fibrecnot
