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

#include "fibrecnot/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "fibrecnot/errors.hpp"
#include "fibrecnot/keyvalue.hpp"

namespace fibrecnot {

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lower[k] && x[k] <= upper[k])) return false;
  }
  return true;
}

namespace {

void check_box(const Box& box, std::size_t points) {
  if (box.lower.empty() || box.lower.size() != box.upper.size()) throw ValidationError("invalid search box");
  for (std::size_t k = 0; k < box.dimension(); ++k) {
    if (!(box.lower[k] <= box.upper[k])) throw ValidationError("search box has lower > upper");
  }
  if (points < 2) throw ValidationError("grid needs at least 2 points per axis");
}

std::size_t grid_size(const Box& box, std::size_t points) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < box.dimension(); ++k) total *= points;
  return total;
}

// Last axis varies fastest, so flat order is lexicographic tuple order.
void grid_point(const Box& box, std::size_t points, std::size_t flat, std::vector<double>& x) {
  for (std::size_t k = box.dimension(); k-- > 0;) {
    const std::size_t i = flat % points;
    flat /= points;
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    x[k] = (i + 1 == points) ? box.upper[k] : box.lower[k] + t * (box.upper[k] - box.lower[k]);
  }
}

double checked(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw ValidationError("objective is not finite");
  return v;
}

OptimumPoint select_best(const Box& box, std::size_t points, const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  OptimumPoint out;
  out.x.resize(box.dimension());
  grid_point(box, points, best, out.x);
  out.value = values[best];
  out.evaluations = values.size();
  return out;
}

}  // namespace

OptimumPoint grid_search_serial(const Objective& f, const Box& box, std::size_t points) {
  check_box(box, points);
  const std::size_t n = grid_size(box, points);
  std::vector<double> values(n);
  std::vector<double> x(box.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    grid_point(box, points, i, x);
    values[i] = checked(f, x);
  }
  return select_best(box, points, values);
}

OptimumPoint grid_search(const Objective& f, const Box& box, std::size_t points) {
  check_box(box, points);
  const auto n = static_cast<long long>(grid_size(box, points));
  std::vector<double> values(static_cast<std::size_t>(n));
  bool failed = false;
#pragma omp parallel
  {
    std::vector<double> x(box.dimension());
#pragma omp for schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i) {
      grid_point(box, points, static_cast<std::size_t>(i), x);
      const double v = f(x);
      if (!std::isfinite(v)) {
#pragma omp atomic write
        failed = true;
      }
      values[static_cast<std::size_t>(i)] = v;
    }
  }
  if (failed) throw ValidationError("objective is not finite");
  return select_best(box, points, values);
}

OptimumPoint coordinate_refine(const Objective& f, const Box& box, OptimumPoint start,
                               std::vector<double> step, double tolerance, double step_tolerance) {
  if (!box.contains(start.x)) throw ValidationError("refinement start outside the search box");
  if (step.size() != box.dimension()) throw ValidationError("step vector has the wrong dimension");
  OptimumPoint cur = std::move(start);
  std::vector<double> trial = cur.x;
  for (int iter = 0; iter < 100000; ++iter) {
    const double max_step = *std::max_element(step.begin(), step.end());
    if (max_step < step_tolerance) break;
    bool moved = false;
    for (std::size_t k = 0; k < box.dimension(); ++k) {
      if (step[k] < step_tolerance) continue;
      for (double dir : {+1.0, -1.0}) {
        trial = cur.x;
        trial[k] = std::clamp(cur.x[k] + dir * step[k], box.lower[k], box.upper[k]);
        if (trial[k] == cur.x[k]) continue;
        const double v = checked(f, trial);
        ++cur.evaluations;
        if (v > cur.value + tolerance) {
          cur.x = trial;
          cur.value = v;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      for (double& s : step) s *= 0.5;
    }
  }
  return cur;
}

std::string_view to_string(FitObjective objective) {
  return objective == FitObjective::kProduct ? "product" : "mean";
}

Interval default_bounds(std::string_view key) {
  const GateParams nominal;
  if (key == "overlap") return {0.0, 1.0};
  if (key.starts_with("eta_")) {
    const double v = get_param(nominal, key);
    return v == 1.0 ? Interval{0.8, 1.0} : Interval{0.35, 0.65};
  }
  if (key.starts_with("residual_phase")) return {-0.5, 0.5};
  const double v = get_param(nominal, key);
  return {std::max(0.0, v - 0.1), std::min(1.0, v + 0.1)};
}

Interval FitSpec::bounds_for(std::string_view key) const {
  if (auto it = bounds.find(std::string(key)); it != bounds.end()) return it->second;
  return default_bounds(key);
}

void FitSpec::validate() const {
  if (free.empty()) throw ValidationError("fit needs at least one free parameter");
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (!is_gate_param_key(free[i])) throw ValidationError("unknown free parameter '" + free[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (free[i] == free[j]) throw ValidationError("parameter '" + free[i] + "' listed twice");
    }
  }
  for (const auto& [key, b] : bounds) {
    if (!is_gate_param_key(key)) throw ValidationError("bounds for unknown parameter '" + key + "'");
    if (!(b.low <= b.high)) throw ValidationError("bounds for '" + key + "' have lower > upper");
    if (!key.starts_with("residual_phase") && !(b.low >= 0.0 && b.high <= 1.0)) {
      throw ValidationError("bounds for '" + key + "' leave [0, 1]");
    }
    if (!std::isfinite(b.low) || !std::isfinite(b.high)) throw ValidationError("bounds must be finite");
  }
  if (grid < 2) throw ValidationError("grid must be >= 2");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
  base.validate();
}

FitSpec parse_fit_spec(std::string_view text) {
  FitSpec spec;
  for (const auto& kv : parse_key_values(text)) {
    if (kv.key == "free") {
      spec.free.clear();
      std::string item;
      std::istringstream ss(kv.value);
      while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) continue;
        item = item.substr(first, last - first + 1);
        if (!is_gate_param_key(item)) throw ParseError(kv.line, 0, "unknown free parameter '" + item + "'");
        spec.free.push_back(item);
      }
    } else if (kv.key == "grid") {
      const long long g = parse_integer(kv.value, kv.line);
      if (g < 2) throw ParseError(kv.line, 0, "grid must be >= 2");
      spec.grid = static_cast<std::size_t>(g);
    } else if (kv.key == "tolerance") {
      spec.tolerance = parse_double(kv.value, kv.line);
    } else if (kv.key == "objective") {
      if (kv.value == "product") {
        spec.objective = FitObjective::kProduct;
      } else if (kv.value == "mean") {
        spec.objective = FitObjective::kMean;
      } else {
        throw ParseError(kv.line, 0, "objective must be 'product' or 'mean'");
      }
    } else if (kv.key.starts_with("bound.")) {
      const std::string key = kv.key.substr(6);
      if (!is_gate_param_key(key)) throw ParseError(kv.line, 1, "bounds for unknown parameter '" + key + "'");
      std::istringstream ss(kv.value);
      std::string lo, hi, extra;
      if (!(ss >> lo >> hi) || (ss >> extra)) throw ParseError(kv.line, 0, "expected 'bound.<key> = lo hi'");
      spec.bounds[key] = Interval{parse_double(lo, kv.line), parse_double(hi, kv.line)};
    } else if (is_gate_param_key(kv.key)) {
      set_param(spec.base, kv.key, parse_double(kv.value, kv.line));
    } else {
      throw ParseError(kv.line, 1, "unknown key '" + kv.key + "'");
    }
  }
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw ValidationError(std::string("fit spec: ") + e.what());
  }
  return spec;
}

SimilarityReport SimilarityReport::from_values(std::array<double, 3> s_zz, std::array<double, 3> s_xx) {
  SimilarityReport r;
  const std::array<const char*, 3> names = {"IDEAL", "INTERFERENCE", "FULL MODEL"};
  for (std::size_t i = 0; i < 3; ++i) {
    r.rows[i].name = names[i];
    r.rows[i].s_zz = s_zz[i];
    r.rows[i].s_xx = s_xx[i];
    r.rows[i].objective = fit_objective(FitObjective::kProduct, s_zz[i], s_xx[i]);
  }
  r.objective = r.rows[2].objective;
  return r;
}

double fit_objective(FitObjective kind, double s_zz, double s_xx) {
  return kind == FitObjective::kProduct ? s_zz * s_xx : 0.5 * (s_zz + s_xx);
}

namespace {

struct StageResult {
  GateParams params;
  double s_zz = 0.0;
  double s_xx = 0.0;
  double objective = 0.0;
};

StageResult evaluate(const GateParams& p, const TruthTable& e_zz, const TruthTable& e_xx, FitObjective kind) {
  StageResult r;
  r.params = p;
  r.s_zz = similarity(model_truth_table(p, LogicalBasis::kZZ), e_zz);
  r.s_xx = similarity(model_truth_table(p, LogicalBasis::kXX), e_xx);
  r.objective = fit_objective(kind, r.s_zz, r.s_xx);
  return r;
}

StageResult fit_stage(const TruthTable& e_zz, const TruthTable& e_xx, const FitSpec& spec,
                      const std::vector<std::string>& free, const GateParams& base,
                      const std::vector<GateParams>& warm_starts) {
  Box box;
  for (const auto& key : free) {
    const Interval b = spec.bounds_for(key);
    box.lower.push_back(b.low);
    box.upper.push_back(b.high);
  }
  auto to_params = [&](std::span<const double> x) {
    GateParams p = base;
    for (std::size_t k = 0; k < free.size(); ++k) set_param(p, free[k], x[k]);
    return p;
  };
  const Objective f = [&](std::span<const double> x) {
    return evaluate(to_params(x), e_zz, e_xx, spec.objective).objective;
  };

  std::vector<OptimumPoint> starts;
  starts.push_back(grid_search(f, box, spec.grid));
  for (const auto& w : warm_starts) {
    OptimumPoint s;
    for (const auto& key : free) s.x.push_back(get_param(w, key));
    if (!box.contains(s.x)) continue;
    s.value = checked(f, s.x);
    starts.push_back(std::move(s));
  }

  std::vector<double> step(box.dimension());
  for (std::size_t k = 0; k < step.size(); ++k) {
    step[k] = 0.5 * (box.upper[k] - box.lower[k]) / static_cast<double>(spec.grid - 1);
  }
  OptimumPoint best;
  bool have = false;
  for (auto& s : starts) {
    OptimumPoint r = coordinate_refine(f, box, std::move(s), step, spec.tolerance);
    if (!have || r.value > best.value) {
      best = std::move(r);
      have = true;
    }
  }
  return evaluate(to_params(best.x), e_zz, e_xx, spec.objective);
}

}  // namespace

SimilarityReport fit(const TruthTable& e_zz, const TruthTable& e_xx, const FitSpec& spec) {
  spec.validate();
  if (e_zz.basis != LogicalBasis::kZZ || e_xx.basis != LogicalBasis::kXX) {
    throw ValidationError("fit needs a ZZ table and an XX table");
  }
  e_zz.validate(1e-6);
  e_xx.validate(1e-6);

  const StageResult ideal = evaluate(GateParams{}, e_zz, e_xx, spec.objective);

  GateParams interference_base = spec.base;
  interference_base.overlap = 1.0;
  const StageResult interference = fit_stage(e_zz, e_xx, spec, {"overlap"}, interference_base, {ideal.params});

  const StageResult full = fit_stage(e_zz, e_xx, spec, spec.free, spec.base, {interference.params, ideal.params});

  SimilarityReport report;
  const std::array<const StageResult*, 3> stages = {&ideal, &interference, &full};
  const std::array<const char*, 3> names = {"IDEAL", "INTERFERENCE", "FULL MODEL"};
  for (std::size_t i = 0; i < 3; ++i) {
    report.rows[i] = SimilarityRow{names[i], stages[i]->s_zz, stages[i]->s_xx, stages[i]->objective,
                                   stages[i]->params};
  }
  report.fitted = full.params;
  report.objective = full.objective;
  return report;
}

ErrorBreakdown report_errors_breakdown(const SimilarityReport& report) {
  const auto& r = report.rows;
  return ErrorBreakdown{100.0 * (r[1].s_zz - r[0].s_zz), 100.0 * (r[2].s_zz - r[1].s_zz),
                        100.0 * (r[1].s_xx - r[0].s_xx), 100.0 * (r[2].s_xx - r[1].s_xx)};
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_similarity_text(const SimilarityReport& report) {
  std::string out = pad("MODEL TYPE", 16) + pad("S_ZZ", 8) + "S_XX\n";
  for (const auto& row : report.rows) {
    out += pad(row.name, 16) + pad(fixed(row.s_zz, 3), 8) + fixed(row.s_xx, 3) + "\n";
  }
  return out;
}

std::string format_breakdown_text(const ErrorBreakdown& b) {
  std::string out;
  out += "ZZ: interference " + fixed(b.zz_interference, 1) + " pp, encoding/analysis " + fixed(b.zz_full, 1) + " pp\n";
  out += "XX: interference " + fixed(b.xx_interference, 1) + " pp, encoding/analysis " + fixed(b.xx_full, 1) + " pp\n";
  return out;
}

namespace {

nlohmann::json params_json(const GateParams& p) {
  nlohmann::json j = nlohmann::json::object();
  for (auto key : kGateParamKeys) j[std::string(key)] = get_param(p, key);
  return j;
}

GateParams params_from_json(const nlohmann::json& j) {
  GateParams p;
  for (const auto& [key, value] : j.items()) set_param(p, key, value.get<double>());
  return p;
}

}  // namespace

std::string format_similarity_doc(const SimilarityReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"model", row.name},
                    {"S_ZZ", row.s_zz},
                    {"S_XX", row.s_xx},
                    {"objective", row.objective},
                    {"params", params_json(row.params)}});
  }
  nlohmann::json j = {{"rows", rows}, {"fitted", params_json(report.fitted)}, {"objective", report.objective}};
  return j.dump(2) + "\n";
}

SimilarityReport parse_similarity_doc(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& rows = j.at("rows");
    if (rows.size() != 3) throw ValidationError("similarity report needs 3 rows");
    SimilarityReport r;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& row = rows.at(i);
      r.rows[i].name = row.at("model").get<std::string>();
      r.rows[i].s_zz = row.at("S_ZZ").get<double>();
      r.rows[i].s_xx = row.at("S_XX").get<double>();
      r.rows[i].objective = row.value("objective", r.rows[i].s_zz * r.rows[i].s_xx);
      if (row.contains("params")) r.rows[i].params = params_from_json(row.at("params"));
    }
    if (j.contains("fitted")) r.fitted = params_from_json(j.at("fitted"));
    r.objective = j.value("objective", r.rows[2].objective);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, 0, std::string("similarity report document: ") + e.what());
  }
}

}  // namespace fibrecnot
