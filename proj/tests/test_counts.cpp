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
#include <random>

#include "fibrecnot/counts.hpp"
#include "fibrecnot/errors.hpp"
#include "test_support.hpp"

namespace fibrecnot {
namespace {

constexpr const char* kTwoBases = R"(# two-basis run
basis ZZ
input 00 counts 95 2 2 1 acc 0 0 0 0 t 600
input 01 counts 1 96 2 1 acc 0 0 0 0 t 600
input 10 counts 2 1 8 89 acc 0 0 0 0 t 600
input 11 counts 1 3 90 6 acc 0 0 0 0 t 600
basis XX
input 00 counts 94 2 3 1 acc 0.5 0.5 0.5 0.5 t 600
input 01 counts 1 7 2 90 acc 0.5 0.5 0.5 0.5 t 600
input 10 counts 2 1 95 2 acc 0.5 0.5 0.5 0.5 t 600
input 11 counts 1 88 3 8 acc 0.5 0.5 0.5 0.5 t 600
)";

CountRecord record(std::array<std::uint64_t, 4> counts, std::array<double, 4> acc, std::size_t input = 0) {
  CountRecord r;
  r.input = input;
  r.counts = counts;
  r.accidentals = acc;
  return r;
}

// Table whose rows put probability f on the ideal output and spread the rest.
TruthTable table_with_fidelity(double f) {
  TruthTable t = ideal_truth_table(LogicalBasis::kZZ);
  for (auto& row : t.entries) {
    for (auto& p : row) p = p == 1.0 ? f : (1.0 - f) / 3.0;
  }
  return t;
}

CountSet exact_counts(const TruthTable& t, double n) {
  CountSet set;
  for (std::size_t i = 0; i < 4; ++i) {
    CountRecord r;
    r.basis = t.basis;
    r.input = i;
    for (std::size_t o = 0; o < 4; ++o) r.counts[o] = static_cast<std::uint64_t>(std::llround(t.entries[i][o] * n));
    set.add(r);
  }
  return set;
}

TEST(ParseCounts, TwoBases) {
  const CountSet set = parse_counts(kTwoBases);
  EXPECT_TRUE(set.has_basis(LogicalBasis::kZZ));
  EXPECT_TRUE(set.has_basis(LogicalBasis::kXX));
  EXPECT_EQ(set.records().size(), 8u);
  EXPECT_EQ(set.at(LogicalBasis::kXX, 1).counts[3], 90u);
  EXPECT_DOUBLE_EQ(set.at(LogicalBasis::kXX, 1).accidentals[2], 0.5);
  EXPECT_DOUBLE_EQ(set.at(LogicalBasis::kZZ, 3).integration_time, 600.0);
  EXPECT_EQ(parse_counts(format_counts(set)), set);
}

TEST(ParseCounts, SingleBasisIsValid) {
  const std::string zz_only(kTwoBases, std::string_view(kTwoBases).find("basis XX"));
  const CountSet set = parse_counts(zz_only);
  EXPECT_TRUE(set.has_basis(LogicalBasis::kZZ));
  EXPECT_FALSE(set.has_basis(LogicalBasis::kXX));
}

TEST(ParseCounts, DuplicateKeyNamesTheLine) {
  const std::string text = "basis ZZ\n"
                           "input 10 counts 1 2 3 4 acc 0 0 0 0 t 1\n"
                           "input 10 counts 1 2 3 4 acc 0 0 0 0 t 1\n";
  try {
    parse_counts(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(ParseCounts, MissingInputRow) {
  const std::string text = "basis ZZ\n"
                           "input 00 counts 1 2 3 4 acc 0 0 0 0 t 1\n"
                           "input 01 counts 1 2 3 4 acc 0 0 0 0 t 1\n"
                           "input 11 counts 1 2 3 4 acc 0 0 0 0 t 1\n";
  try {
    parse_counts(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("missing input 10"), std::string::npos);
  }
}

TEST(ParseCounts, ColumnAddressedDiagnostics) {
  try {
    parse_counts("basis ZZ\ninput 00 counts 1 -2 3 4 acc 0 0 0 0 t 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 19u);
  }
  EXPECT_THROW(parse_counts("input 00 counts 1 2 3 4 acc 0 0 0 0 t 1\n"), ParseError);
  EXPECT_THROW(parse_counts("basis ZX\n"), ParseError);
  EXPECT_THROW(parse_counts("basis ZZ\ninput 02 counts 1 2 3 4 acc 0 0 0 0 t 1\n"), ParseError);
  EXPECT_THROW(parse_counts("basis ZZ\ninput 00 counts 1 2 3 4 acc 0 0 0 0 t 0\n"), ParseError);
  EXPECT_THROW(parse_counts("basis ZZ\ninput 00 counts 1 2 3 acc 0 0 0 0 t 1\n"), ParseError);
  EXPECT_THROW(parse_counts("basis ZZ\ninput 00 cnts 1 2 3 4 acc 0 0 0 0 t 1\n"), ParseError);
}

TEST(SubtractAccidentals, Examples) {
  const auto c = subtract_accidentals(record({100, 2, 3, 1}, {1, 1, 1, 1}));
  EXPECT_EQ(c.values, (std::array<double, 4>{99, 1, 2, 0}));
  EXPECT_FALSE(c.any_clamped());
  const auto same = subtract_accidentals(record({5, 6, 7, 8}, {0, 0, 0, 0}));
  EXPECT_EQ(same.values, (std::array<double, 4>{5, 6, 7, 8}));
  const auto clamped = subtract_accidentals(record({5, 0, 7, 8}, {0, 2.5, 0, 0}));
  EXPECT_EQ(clamped.values[1], 0.0);
  EXPECT_TRUE(clamped.clamped[1]);
  EXPECT_FALSE(clamped.clamped[0]);
}

TEST(SubtractAccidentals, MonotoneAndIdempotent) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> count(0, 50);
  std::uniform_real_distribution<double> acc(0.0, 40.0);
  for (int k = 0; k < 500; ++k) {
    auto r = record({std::uint64_t(count(rng)), std::uint64_t(count(rng)), std::uint64_t(count(rng)),
                     std::uint64_t(count(rng))},
                    {acc(rng), acc(rng), acc(rng), acc(rng)});
    auto bigger = r;
    for (auto& a : bigger.accidentals) a += acc(rng);
    const auto c1 = subtract_accidentals(r);
    const auto c2 = subtract_accidentals(bigger);
    for (std::size_t o = 0; o < 4; ++o) EXPECT_LE(c2.values[o], c1.values[o]);
    auto zero = r;
    zero.accidentals = {0, 0, 0, 0};
    for (std::size_t o = 0; o < 4; ++o) EXPECT_EQ(subtract_accidentals(zero).values[o], double(r.counts[o]));
  }
}

TEST(CountsToTruthTable, NormalisesRows) {
  CountSet set;
  for (std::size_t i = 0; i < 4; ++i) set.add(record({90, 0, 0, 10}, {0, 0, 0, 0}, i));
  const auto t = counts_to_truth_table(set, LogicalBasis::kZZ);
  EXPECT_EQ(t.entries[0], (std::array<double, 4>{0.9, 0.0, 0.0, 0.1}));
  EXPECT_FALSE(t.success.has_value());
  EXPECT_THROW(counts_to_truth_table(set, LogicalBasis::kXX), ValidationError);
}

TEST(CountsToTruthTable, ClampingIsRecorded) {
  CountSet set;
  for (std::size_t i = 0; i < 4; ++i) set.add(record({90, 1, 0, 10}, {0, 2, 0, 0}, i));
  const auto t = counts_to_truth_table(set, LogicalBasis::kZZ);
  EXPECT_EQ(t.entries[2][1], 0.0);
  ASSERT_TRUE(t.provenance.count("clamped"));
  EXPECT_NE(t.provenance.at("clamped").find("10->01"), std::string::npos);
}

TEST(CountsToTruthTable, ZeroTotalNamesTheInput) {
  CountSet set;
  for (std::size_t i = 0; i < 4; ++i) {
    set.add(i == 2 ? record({1, 1, 0, 0}, {3, 3, 3, 3}, i) : record({50, 1, 1, 1}, {0, 0, 0, 0}, i));
  }
  try {
    counts_to_truth_table(set, LogicalBasis::kZZ);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("input 10"), std::string::npos);
  }
}

TEST(SynthCounts, IdealTableAtLargeN) {
  const auto ideal = ideal_truth_table(LogicalBasis::kZZ);
  const auto set = synth_counts(ideal, 1000000, 0.0, 42);
  const auto t = counts_to_truth_table(set, LogicalBasis::kZZ);
  // Zero-probability cells stay exactly empty; the permutation cell takes every event.
  EXPECT_EQ(testing::max_table_diff(t, ideal), 0.0);
}

TEST(SynthCounts, RoundTripWithinThreeSigma) {
  std::mt19937_64 rng(99);
  const double n = 100000.0;
  for (int k = 0; k < 5; ++k) {
    const auto truth = testing::random_row_stochastic(rng, k % 2 ? LogicalBasis::kXX : LogicalBasis::kZZ);
    const auto back = counts_to_truth_table(synth_counts(truth, 100000, 0.0, 1000 + k), truth.basis);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t o = 0; o < 4; ++o) {
        const double p = truth.entries[i][o];
        const double sigma = std::sqrt(p * (1.0 - p) / n);
        EXPECT_LE(std::abs(back.entries[i][o] - p), 3.0 * sigma + 1e-12) << "table " << k << " cell " << i << o;
      }
    }
  }
}

TEST(SynthCounts, DeterministicAndRecordsRate) {
  const auto table = table_with_fidelity(0.9);
  const auto a = synth_counts(table, 5000, 3.5, 7);
  const auto b = synth_counts(table, 5000, 3.5, 7);
  EXPECT_EQ(format_counts(a), format_counts(b));
  EXPECT_NE(format_counts(a), format_counts(synth_counts(table, 5000, 3.5, 8)));
  for (const auto& r : a.records()) {
    for (double acc : r.accidentals) EXPECT_EQ(acc, 3.5);
  }
}

TEST(SynthCounts, ParameterErrors) {
  const auto table = table_with_fidelity(0.9);
  EXPECT_THROW(synth_counts(table, 0, 0.0, 1), ValidationError);
  EXPECT_THROW(synth_counts(table, 10, -1.0, 1), ValidationError);
}

TEST(Bootstrap, ParallelMatchesSerialBitForBit) {
  const auto set = synth_counts(table_with_fidelity(0.9), 2000, 1.0, 3);
  const auto ideal = ideal_truth_table(LogicalBasis::kZZ);
  const double par = bootstrap_fidelity_error(set, LogicalBasis::kZZ, ideal, 500, 11);
  const double ser = bootstrap_fidelity_error_serial(set, LogicalBasis::kZZ, ideal, 500, 11);
  EXPECT_EQ(par, ser);
  EXPECT_EQ(par, bootstrap_fidelity_error(set, LogicalBasis::kZZ, ideal, 500, 11));
}

TEST(Bootstrap, ScalesAsInverseSqrtN) {
  const auto table = table_with_fidelity(0.9);
  const auto ideal = ideal_truth_table(LogicalBasis::kZZ);
  const double small = bootstrap_fidelity_error(exact_counts(table, 1000), LogicalBasis::kZZ, ideal, 2000, 5);
  const double large = bootstrap_fidelity_error(exact_counts(table, 100000), LogicalBasis::kZZ, ideal, 2000, 5);
  EXPECT_NEAR(small / large, 10.0, 2.0);
}

TEST(Bootstrap, VanishesForHugeCleanCounts) {
  const auto ideal = ideal_truth_table(LogicalBasis::kZZ);
  EXPECT_EQ(bootstrap_fidelity_error(exact_counts(ideal, 1e9), LogicalBasis::kZZ, ideal, 200, 5), 0.0);
  const double se = bootstrap_fidelity_error(exact_counts(table_with_fidelity(0.9), 1e9), LogicalBasis::kZZ, ideal, 200, 5);
  EXPECT_LT(se, 1e-4);
}

// Binomial estimate: var F = (1/16) sum_rows f (1 - f) / N, so se = 0.02 at f = 0.9 needs
// N = 0.09 / (4 * 0.02^2) ~= 56 events per input.
TEST(Bootstrap, TwoPercentErrorAtFiftySixEvents) {
  const auto table = table_with_fidelity(0.9);
  const double n = 0.09 / (4.0 * 0.02 * 0.02);
  const auto set = exact_counts(table, std::round(n));
  const double se = bootstrap_fidelity_error(set, LogicalBasis::kZZ, ideal_truth_table(LogicalBasis::kZZ), 4000, 9);
  EXPECT_NEAR(se, 0.02, 0.004);
}

TEST(Bootstrap, Errors) {
  const auto set = synth_counts(table_with_fidelity(0.9), 100, 0.0, 3);
  const auto ideal = ideal_truth_table(LogicalBasis::kZZ);
  EXPECT_THROW(bootstrap_fidelity_error(set, LogicalBasis::kZZ, ideal, 99, 1), ValidationError);
  EXPECT_THROW(bootstrap_fidelity_error(set, LogicalBasis::kXX, ideal, 100, 1), ValidationError);
}

}  // namespace
}  // namespace fibrecnot
