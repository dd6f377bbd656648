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

#include "fibrecnot/counts.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fibrecnot/errors.hpp"
#include "fibrecnot/keyvalue.hpp"

namespace fibrecnot {

void CountRecord::validate() const {
  if (input > 3) throw ValidationError("logical input index out of range");
  for (double a : accidentals) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("accidentals must be finite and >= 0");
  }
  if (!(integration_time > 0.0) || !std::isfinite(integration_time)) {
    throw ValidationError("integration time must be > 0");
  }
}

void CountSet::add(const CountRecord& record) {
  record.validate();
  for (const auto& r : records_) {
    if (r.basis == record.basis && r.input == record.input) {
      throw ValidationError("duplicate record (" + std::string(to_string(record.basis)) + ", " +
                            std::string(kLogicalLabels[record.input]) + ")");
    }
  }
  records_.push_back(record);
}

bool CountSet::has_basis(LogicalBasis basis) const {
  return std::any_of(records_.begin(), records_.end(), [&](const auto& r) { return r.basis == basis; });
}

const CountRecord& CountSet::at(LogicalBasis basis, std::size_t input) const {
  for (const auto& r : records_) {
    if (r.basis == basis && r.input == input) return r;
  }
  throw ValidationError("no record for (" + std::string(to_string(basis)) + ", " +
                        std::string(kLogicalLabels.at(input)) + ")");
}

void CountSet::validate() const {
  for (auto basis : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
    if (!has_basis(basis)) continue;
    for (std::size_t i = 0; i < 4; ++i) at(basis, i);
  }
}

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::size_t parse_input_label(const Token& tok, std::size_t line) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (tok.text == kLogicalLabels[i]) return i;
  }
  throw ParseError(line, tok.column, "input must be one of 00, 01, 10, 11 (got '" + tok.text + "')");
}

}  // namespace

CountSet parse_counts(std::string_view text) {
  CountSet set;
  std::optional<LogicalBasis> basis;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;

    if (toks[0].text == "basis") {
      if (toks.size() != 2) throw ParseError(line_no, toks[0].column, "expected 'basis <ZZ|XX>'");
      if (toks[1].text != "ZZ" && toks[1].text != "XX") {
        throw ParseError(line_no, toks[1].column, "unknown basis '" + toks[1].text + "'");
      }
      basis = parse_basis(toks[1].text);
      continue;
    }
    if (toks[0].text != "input") {
      throw ParseError(line_no, toks[0].column, "expected 'basis' or 'input', found '" + toks[0].text + "'");
    }
    if (!basis) throw ParseError(line_no, toks[0].column, "data line before any 'basis' header");
    if (toks.size() != 14) {
      throw ParseError(line_no, toks.back().column,
                       "expected 'input <xy> counts c c c c acc a a a a t <seconds>' (14 fields, found " +
                           std::to_string(toks.size()) + ")");
    }
    auto expect = [&](std::size_t k, std::string_view word) {
      if (toks[k].text != word) {
        throw ParseError(line_no, toks[k].column, "expected '" + std::string(word) + "', found '" + toks[k].text + "'");
      }
    };
    expect(2, "counts");
    expect(7, "acc");
    expect(12, "t");

    CountRecord rec;
    rec.basis = *basis;
    rec.input = parse_input_label(toks[1], line_no);
    for (std::size_t o = 0; o < 4; ++o) {
      const auto& tok = toks[3 + o];
      long long v = 0;
      try {
        v = parse_integer(tok.text, line_no);
      } catch (const ParseError&) {
        throw ParseError(line_no, tok.column, "count must be a non-negative integer, got '" + tok.text + "'");
      }
      if (v < 0) throw ParseError(line_no, tok.column, "count must be non-negative");
      rec.counts[o] = static_cast<std::uint64_t>(v);
    }
    for (std::size_t o = 0; o < 4; ++o) {
      const auto& tok = toks[8 + o];
      double v = 0.0;
      try {
        v = parse_double(tok.text, line_no);
      } catch (const ParseError&) {
        throw ParseError(line_no, tok.column, "accidental must be a number, got '" + tok.text + "'");
      }
      if (v < 0.0) throw ParseError(line_no, tok.column, "accidental must be non-negative");
      rec.accidentals[o] = v;
    }
    try {
      rec.integration_time = parse_double(toks[13].text, line_no);
    } catch (const ParseError&) {
      throw ParseError(line_no, toks[13].column, "integration time must be a number");
    }
    if (!(rec.integration_time > 0.0)) throw ParseError(line_no, toks[13].column, "integration time must be > 0");
    try {
      set.add(rec);
    } catch (const ValidationError& e) {
      throw ParseError(line_no, toks[1].column, e.what());
    }
  }
  for (auto b : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
    if (!set.has_basis(b)) continue;
    for (std::size_t i = 0; i < 4; ++i) {
      bool found = false;
      for (const auto& r : set.records()) found = found || (r.basis == b && r.input == i);
      if (!found) {
        throw ParseError(0, 0, "basis " + std::string(to_string(b)) + " is missing input " +
                                   std::string(kLogicalLabels[i]));
      }
    }
  }
  return set;
}

std::string format_counts(const CountSet& set) {
  std::string out;
  for (auto b : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
    if (!set.has_basis(b)) continue;
    out += "basis " + std::string(to_string(b)) + "\n";
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& r = set.at(b, i);
      out += "input " + std::string(kLogicalLabels[i]) + " counts";
      for (auto c : r.counts) out += " " + std::to_string(c);
      out += " acc";
      for (auto a : r.accidentals) out += " " + format_double(a);
      out += " t " + format_double(r.integration_time) + "\n";
    }
  }
  return out;
}

std::string format_counts_doc(const CountSet& set) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : set.records()) {
    j.push_back({{"basis", std::string(to_string(r.basis))},
                 {"input", std::string(kLogicalLabels[r.input])},
                 {"counts", r.counts},
                 {"accidentals", r.accidentals},
                 {"integration_time", r.integration_time}});
  }
  return nlohmann::json{{"records", j}}.dump(2) + "\n";
}

CorrectedCounts subtract_accidentals(const CountRecord& record) {
  CorrectedCounts out;
  for (std::size_t o = 0; o < 4; ++o) {
    const double v = static_cast<double>(record.counts[o]) - record.accidentals[o];
    out.clamped[o] = v < 0.0;
    out.values[o] = std::max(0.0, v);
  }
  return out;
}

namespace {

std::array<double, 4> normalize_row(const std::array<double, 4>& v, LogicalBasis basis, std::size_t input) {
  const double total = v[0] + v[1] + v[2] + v[3];
  if (!(total > 0.0)) {
    throw ValidationError("basis " + std::string(to_string(basis)) + " input " +
                          std::string(kLogicalLabels[input]) + " has zero total after subtraction");
  }
  return {v[0] / total, v[1] / total, v[2] / total, v[3] / total};
}

TruthTable table_from_rows(LogicalBasis basis, const std::array<std::array<double, 4>, 4>& rows) {
  TruthTable t;
  t.basis = basis;
  for (std::size_t i = 0; i < 4; ++i) t.entries[i] = normalize_row(rows[i], basis, i);
  return t;
}

}  // namespace

TruthTable counts_to_truth_table(const CountSet& set, LogicalBasis basis) {
  if (!set.has_basis(basis)) throw ValidationError("no records for basis " + std::string(to_string(basis)));
  std::array<std::array<double, 4>, 4> rows{};
  std::string clamped;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = subtract_accidentals(set.at(basis, i));
    rows[i] = c.values;
    for (std::size_t o = 0; o < 4; ++o) {
      if (!c.clamped[o]) continue;
      if (!clamped.empty()) clamped += ",";
      clamped += std::string(kLogicalLabels[i]) + "->" + std::string(kLogicalLabels[o]);
    }
  }
  TruthTable t = table_from_rows(basis, rows);
  t.provenance["source"] = "counts";
  t.provenance["accidentals"] = "subtracted";
  if (!clamped.empty()) t.provenance["clamped"] = clamped;
  return t;
}

CountSet synth_counts(const TruthTable& table, std::uint64_t trials_per_input, double accidental_rate,
                      std::uint64_t seed) {
  if (trials_per_input == 0) throw ValidationError("trials per input must be > 0");
  if (!(accidental_rate >= 0.0) || !std::isfinite(accidental_rate)) {
    throw ValidationError("accidental rate must be finite and >= 0");
  }
  table.validate(1e-6);
  std::mt19937_64 rng(seed);
  CountSet set;
  for (std::size_t i = 0; i < 4; ++i) {
    CountRecord rec;
    rec.basis = table.basis;
    rec.input = i;
    // Multinomial as a chain of conditional binomials.
    std::uint64_t remaining = trials_per_input;
    double mass_left = 1.0;
    for (std::size_t o = 0; o < 4; ++o) {
      std::uint64_t k = remaining;
      if (o < 3) {
        const double p = mass_left > 0.0 ? std::clamp(table.entries[i][o] / mass_left, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(remaining, p);
        k = draw(rng);
      }
      rec.counts[o] = k;
      remaining -= k;
      mass_left -= table.entries[i][o];
    }
    for (std::size_t o = 0; o < 4; ++o) {
      if (accidental_rate > 0.0) {
        std::poisson_distribution<std::uint64_t> noise(accidental_rate);
        rec.counts[o] += noise(rng);
      }
      rec.accidentals[o] = accidental_rate;
    }
    rec.integration_time = 1.0;
    set.add(rec);
  }
  return set;
}

namespace {

struct BootstrapInput {
  LogicalBasis basis;
  std::array<std::array<double, 4>, 4> corrected;
};

BootstrapInput prepare_bootstrap(const CountSet& set, LogicalBasis basis, const TruthTable& ideal,
                                 std::size_t resamples) {
  if (resamples < kMinBootstrapResamples) {
    throw ValidationError("bootstrap needs at least " + std::to_string(kMinBootstrapResamples) + " resamples");
  }
  if (ideal.basis != basis) throw ValidationError("ideal table basis does not match");
  counts_to_truth_table(set, basis);  // zero-total rows fail here
  BootstrapInput in{basis, {}};
  for (std::size_t i = 0; i < 4; ++i) in.corrected[i] = subtract_accidentals(set.at(basis, i)).values;
  return in;
}

double resample_fidelity(const BootstrapInput& in, const TruthTable& ideal, std::uint64_t seed, std::size_t r) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  std::mt19937_64 rng(seq);
  std::array<std::array<double, 4>, 4> rows{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t o = 0; o < 4; ++o) {
      const double mean = in.corrected[i][o];
      if (mean > 0.0) {
        std::poisson_distribution<std::uint64_t> draw(mean);
        rows[i][o] = static_cast<double>(draw(rng));
      }
    }
  }
  return logical_fidelity(table_from_rows(in.basis, rows), ideal);
}

double sample_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

double bootstrap_fidelity_error_serial(const CountSet& set, LogicalBasis basis, const TruthTable& ideal,
                                       std::size_t resamples, std::uint64_t seed) {
  const BootstrapInput in = prepare_bootstrap(set, basis, ideal, resamples);
  std::vector<double> f(resamples);
  for (std::size_t r = 0; r < resamples; ++r) f[r] = resample_fidelity(in, ideal, seed, r);
  return sample_std(f);
}

double bootstrap_fidelity_error(const CountSet& set, LogicalBasis basis, const TruthTable& ideal,
                                std::size_t resamples, std::uint64_t seed) {
  const BootstrapInput in = prepare_bootstrap(set, basis, ideal, resamples);
  std::vector<double> f(resamples);
  bool failed = false;
  const auto n = static_cast<long long>(resamples);
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < n; ++r) {
    try {
      f[static_cast<std::size_t>(r)] = resample_fidelity(in, ideal, seed, static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) {
    // Rerun serially to surface the exception from the lowest failing resample.
    return bootstrap_fidelity_error_serial(set, basis, ideal, resamples, seed);
  }
  return sample_std(f);
}

}  // namespace fibrecnot
