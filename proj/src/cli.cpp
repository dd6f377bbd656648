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

#include "fibrecnot/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibrecnot/counts.hpp"
#include "fibrecnot/errors.hpp"
#include "fibrecnot/fit.hpp"
#include "fibrecnot/gate_models.hpp"
#include "fibrecnot/keyvalue.hpp"
#include "fibrecnot/metrics.hpp"

namespace fibrecnot {

namespace {

// Thrown for bad flag values found after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "text";
};

std::vector<LogicalBasis> parse_basis_list(const std::string& text) {
  std::vector<LogicalBasis> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "ZZ" || item == "XX") {
      const auto b = parse_basis(item);
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    } else {
      throw UsageError("--basis expects ZZ, XX or ZZ,XX (got '" + text + "')");
    }
  }
  if (out.empty()) throw UsageError("--basis is empty");
  return out;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string tables_text(const std::vector<TruthTable>& tables) {
  std::string s;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) s += "\n";
    s += format_table_text(tables[i]);
  }
  return s;
}

nlohmann::json table_json(const TruthTable& t) { return nlohmann::json::parse(format_table_doc(t)); }

std::string tables_doc(const std::vector<TruthTable>& tables) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tables) arr.push_back(table_json(t));
  return nlohmann::json{{"tables", arr}}.dump(2) + "\n";
}

std::string tables_csv(const std::vector<TruthTable>& tables) {
  std::string s;
  for (std::size_t i = 0; i < tables.size(); ++i) s += format_table_csv(tables[i], i == 0);
  return s;
}

// Emits to --out when given, stdout otherwise.
void emit(const GlobalOptions& g, const std::string& contents, std::ostream& out, CommandOutcome& outcome) {
  if (g.out.empty()) {
    out << contents;
  } else {
    write_file(g.out, contents);
    outcome.artifacts.push_back(g.out);
  }
}

std::vector<TruthTable> read_tables(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(0, 0, "'" + path + "' is not valid JSON");
    std::vector<TruthTable> out;
    if (j.contains("tables")) {
      for (const auto& t : j.at("tables")) out.push_back(parse_table_doc(t.dump()));
    } else {
      out.push_back(parse_table_doc(text));
    }
    return out;
  }
  // Text tables separated by their '# basis:' headers.
  std::vector<TruthTable> out;
  std::istringstream in(text);
  std::string line, chunk;
  while (std::getline(in, line)) {
    if (line.starts_with("# basis:") && !chunk.empty()) {
      out.push_back(parse_table_text(chunk));
      chunk.clear();
    }
    chunk += line + "\n";
  }
  if (!chunk.empty()) out.push_back(parse_table_text(chunk));
  return out;
}

void cmd_simulate(const GlobalOptions& g, bool ideal, const std::string& config, const std::string& basis_text,
                  const std::string& plot, std::ostream& out, CommandOutcome& outcome) {
  if (ideal == !config.empty()) throw UsageError("simulate needs exactly one of --ideal or --config");
  const auto bases = parse_basis_list(basis_text);
  std::vector<TruthTable> tables;
  if (ideal) {
    const LayoutPtr layout = ideal_layout();
    const CircuitUnitary u = build_ideal_cnot(layout);
    const PostSelection ps = standard_post_selection(*layout);
    for (auto b : bases) {
      TruthTable t = truth_table(u, b, ps);
      t.provenance["source"] = "ideal network";
      tables.push_back(std::move(t));
    }
  } else {
    const GateParams params = parse_gate_params(read_file(config));
    for (auto b : bases) {
      TruthTable t = model_truth_table(params, b);
      t.provenance["config"] = std::filesystem::path(config).filename().string();
      tables.push_back(std::move(t));
    }
  }
  emit(g, g.format == "doc" ? tables_doc(tables) : tables_text(tables), out, outcome);
  if (!plot.empty()) {
    write_file(plot, tables_csv(tables));
    outcome.artifacts.push_back(plot);
  }
  for (const auto& t : tables) {
    outcome.summary += "basis " + std::string(to_string(t.basis)) + ": success";
    for (double s : *t.success) outcome.summary += " " + fixed(s, 6);
    outcome.summary += "\n";
  }
}

void cmd_synth(const GlobalOptions& g, bool ideal, const std::string& table_path, const std::string& config,
               const std::string& basis_text, long long trials, double rate, std::ostream& out,
               CommandOutcome& outcome) {
  const int sources = int(ideal) + int(!table_path.empty()) + int(!config.empty());
  if (sources != 1) throw UsageError("synth needs exactly one of --ideal, --table or --config");
  if (trials <= 0) throw UsageError("--trials must be > 0");
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw UsageError("--rate must be >= 0");
  const auto bases = parse_basis_list(basis_text);

  std::vector<TruthTable> tables;
  if (ideal) {
    for (auto b : bases) tables.push_back(ideal_truth_table(b));
  } else if (!config.empty()) {
    const GateParams params = parse_gate_params(read_file(config));
    for (auto b : bases) tables.push_back(model_truth_table(params, b));
  } else {
    for (auto& t : read_tables(table_path)) {
      if (std::find(bases.begin(), bases.end(), t.basis) != bases.end()) tables.push_back(std::move(t));
    }
    if (tables.empty()) throw ValidationError("no table in '" + table_path + "' matches --basis");
  }

  CountSet merged;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    // Each basis gets its own stream derived from the seed.
    const CountSet part = synth_counts(tables[i], static_cast<std::uint64_t>(trials), rate, g.seed + 0x9e3779b97f4a7c15ULL * i);
    for (const auto& r : part.records()) merged.add(r);
  }
  std::string contents;
  if (g.format == "doc") {
    contents = format_counts_doc(merged);
  } else {
    contents = "# synthetic fourfold coincidences: trials " + std::to_string(trials) + ", accidental rate " +
               format_double(rate) + ", seed " + std::to_string(g.seed) + "\n" + format_counts(merged);
  }
  emit(g, contents, out, outcome);
  outcome.summary = "synthesized " + std::to_string(merged.records().size()) + " records\n";
}

void cmd_analyze(const GlobalOptions& g, const std::string& counts_path, const std::string& basis_text,
                 const std::string& reference, long long resamples, const std::string& plot, std::ostream& out,
                 CommandOutcome& outcome) {
  if (resamples < static_cast<long long>(kMinBootstrapResamples)) {
    throw UsageError("--resamples must be >= " + std::to_string(kMinBootstrapResamples));
  }
  const CountSet set = parse_counts(read_file(counts_path));
  std::vector<LogicalBasis> bases;
  if (basis_text.empty()) {
    for (auto b : {LogicalBasis::kZZ, LogicalBasis::kXX}) {
      if (set.has_basis(b)) bases.push_back(b);
    }
  } else {
    bases = parse_basis_list(basis_text);
  }
  if (bases.empty()) throw ValidationError("count file has no records");

  std::vector<TruthTable> references;
  if (reference != "ideal") references = read_tables(reference);
  auto reference_for = [&](LogicalBasis b) {
    if (reference == "ideal") return ideal_truth_table(b);
    for (const auto& t : references) {
      if (t.basis == b) return t;
    }
    throw ValidationError("reference '" + reference + "' has no " + std::string(to_string(b)) + " table");
  };

  std::vector<TruthTable> tables;
  std::map<LogicalBasis, std::pair<double, double>> fidelity;
  std::string text;
  for (auto b : bases) {
    TruthTable t = counts_to_truth_table(set, b);
    const TruthTable ref = reference_for(b);
    const double f = logical_fidelity(t, ref);
    const double se = bootstrap_fidelity_error(set, b, ref, static_cast<std::size_t>(resamples), g.seed);
    fidelity[b] = {f, se};
    tables.push_back(std::move(t));
  }

  nlohmann::json doc;
  if (fidelity.size() == 2) {
    FidelityReport r = make_fidelity_report(fidelity[LogicalBasis::kZZ].first, fidelity[LogicalBasis::kXX].first);
    r.se_zz = fidelity[LogicalBasis::kZZ].second;
    r.se_xx = fidelity[LogicalBasis::kXX].second;
    text = format_report_text(r);
    doc["report"] = nlohmann::json::parse(format_report_doc(r));
  } else {
    const auto& [b, fs] = *fidelity.begin();
    text = "F_" + std::string(to_string(b)) + " = " + fixed(fs.first) + " +/- " + fixed(fs.second) + "\n";
    doc["report"] = {{"F_" + std::string(to_string(b)), fs.first}, {"se_" + std::string(to_string(b)), fs.second}};
  }
  doc["tables"] = nlohmann::json::array();
  for (const auto& t : tables) doc["tables"].push_back(table_json(t));
  doc["resamples"] = resamples;
  doc["seed"] = g.seed;

  out << text;
  if (!g.out.empty()) {
    write_file(g.out, g.format == "doc" ? doc.dump(2) + "\n" : tables_text(tables) + "\n" + text);
    outcome.artifacts.push_back(g.out);
  }
  if (!plot.empty()) {
    write_file(plot, tables_csv(tables));
    outcome.artifacts.push_back(plot);
  }
  outcome.summary = text;
}

void cmd_fit(const GlobalOptions& g, const std::string& counts_path, const std::string& spec_path, std::ostream& out,
             CommandOutcome& outcome) {
  const CountSet set = parse_counts(read_file(counts_path));
  if (!set.has_basis(LogicalBasis::kZZ) || !set.has_basis(LogicalBasis::kXX)) {
    throw ValidationError("fit needs both ZZ and XX records in '" + counts_path + "'");
  }
  const FitSpec spec = spec_path.empty() ? FitSpec{} : parse_fit_spec(read_file(spec_path));
  const TruthTable e_zz = counts_to_truth_table(set, LogicalBasis::kZZ);
  const TruthTable e_xx = counts_to_truth_table(set, LogicalBasis::kXX);
  const SimilarityReport report = fit(e_zz, e_xx, spec);

  std::string text = format_similarity_text(report);
  text += "\nfitted parameters (FULL MODEL):\n" + format_gate_params(report.fitted);
  text += "normalized visibility = " + fixed(overlap_to_normalized_visibility(report.fitted.overlap), 6) + "\n";
  text += "objective (" + std::string(to_string(spec.objective)) + ") = " + fixed(report.objective, 9) + "\n";
  text += "\n" + format_breakdown_text(report_errors_breakdown(report));
  out << text;
  if (!g.out.empty()) {
    write_file(g.out, g.format == "doc" ? format_similarity_doc(report) : text);
    outcome.artifacts.push_back(g.out);
  }
  outcome.summary = format_similarity_text(report);
}

std::array<double, 3> parse_triple(const std::string& text, const char* flag) {
  std::array<double, 3> v{};
  std::istringstream ss(text);
  std::string item;
  std::size_t k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 3) throw UsageError(std::string(flag) + " expects three comma-separated values");
    try {
      v[k++] = parse_double(item);
    } catch (const ParseError&) {
      throw UsageError(std::string(flag) + " value '" + item + "' is not a number");
    }
  }
  if (k != 3) throw UsageError(std::string(flag) + " expects three comma-separated values");
  return v;
}

void cmd_report(const GlobalOptions& g, const std::string& doc_path, const std::string& zz, const std::string& xx,
                std::ostream& out, CommandOutcome& outcome) {
  SimilarityReport report;
  if (!doc_path.empty()) {
    if (!zz.empty() || !xx.empty()) throw UsageError("report takes either a report document or --zz/--xx");
    report = parse_similarity_doc(read_file(doc_path));
  } else {
    if (zz.empty() || xx.empty()) throw UsageError("report needs a report document or both --zz and --xx");
    report = SimilarityReport::from_values(parse_triple(zz, "--zz"), parse_triple(xx, "--xx"));
  }
  const ErrorBreakdown b = report_errors_breakdown(report);
  std::string text = format_similarity_text(report) + "\n" + format_breakdown_text(b);
  if (g.format == "doc") {
    nlohmann::json j = nlohmann::json::parse(format_similarity_doc(report));
    j["breakdown_pp"] = {{"ZZ", {{"interference", b.zz_interference}, {"encoding_analysis", b.zz_full}}},
                         {"XX", {{"interference", b.xx_interference}, {"encoding_analysis", b.xx_full}}}};
    emit(g, j.dump(2) + "\n", out, outcome);
  } else {
    emit(g, text, out, outcome);
  }
  outcome.summary = text;
}

}  // namespace

CommandOutcome run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandOutcome outcome;
  CLI::App app{"Simulation and analysis of the post-selected two-photon fibre CNOT gate", "fibrecnot"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed for synthesis and bootstrap")->capture_default_str();
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "doc"}))->capture_default_str();

  bool ideal = false;
  std::string config, basis = "ZZ,XX", plot;
  auto* simulate = app.add_subcommand("simulate", "Truth tables of the ideal network or the imperfection model");
  simulate->add_flag("--ideal", ideal, "Exact ideal gate, no config");
  simulate->add_option("--config", config, "GateParams key = value file")->check(CLI::ExistingFile);
  simulate->add_option("--basis", basis, "ZZ, XX or ZZ,XX")->capture_default_str();
  simulate->add_option("--plot", plot, "Write bar-height CSV");

  bool synth_ideal = false;
  std::string synth_table, synth_config, synth_basis = "ZZ,XX";
  long long trials = 100000;
  double rate = 0.0;
  auto* synth = app.add_subcommand("synth", "Synthetic fourfold coincidence counts");
  synth->add_flag("--ideal", synth_ideal, "Draw from the ideal tables");
  synth->add_option("--table", synth_table, "Truth-table file (text or doc)")->check(CLI::ExistingFile);
  synth->add_option("--config", synth_config, "GateParams file; draws from the model")->check(CLI::ExistingFile);
  synth->add_option("--basis", synth_basis, "ZZ, XX or ZZ,XX")->capture_default_str();
  synth->add_option("--trials", trials, "Post-selected events per logical input")->capture_default_str();
  synth->add_option("--rate", rate, "Mean accidental counts per output")->capture_default_str();

  std::string counts_path, analyze_basis, reference = "ideal", analyze_plot;
  long long resamples = 1000;
  auto* analyze = app.add_subcommand("analyze", "Fidelities, bounds and bootstrap errors from a count file");
  analyze->add_option("counts", counts_path, "Count file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--basis", analyze_basis, "Restrict to ZZ, XX or ZZ,XX");
  analyze->add_option("--reference", reference, "'ideal' or a truth-table file")->capture_default_str();
  analyze->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
  analyze->add_option("--plot", analyze_plot, "Write bar-height CSV");

  std::string fit_counts, fit_spec;
  auto* fitcmd = app.add_subcommand("fit", "Fit the imperfection model and print the similarity table");
  fitcmd->add_option("counts", fit_counts, "Count file with ZZ and XX records")->required()->check(CLI::ExistingFile);
  fitcmd->add_option("--spec", fit_spec, "FitSpec key = value file")->check(CLI::ExistingFile);

  std::string report_doc, report_zz, report_xx;
  auto* report = app.add_subcommand("report", "Similarity table and per-stage gains");
  report->add_option("report", report_doc, "Similarity report document from `fit --format doc`")
      ->check(CLI::ExistingFile);
  report->add_option("--zz", report_zz, "S_ZZ for IDEAL,INTERFERENCE,FULL");
  report->add_option("--xx", report_xx, "S_XX for IDEAL,INTERFERENCE,FULL");

  for (auto* sub : {simulate, synth, analyze, fitcmd, report}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::ParseError& e) {
    err << "fibrecnot: " << e.what() << "\n" << "Run with --help for usage.\n";
    outcome.exit_code = kExitUsage;
    return outcome;
  }

  try {
    if (simulate->parsed()) {
      cmd_simulate(g, ideal, config, basis, plot, out, outcome);
    } else if (synth->parsed()) {
      cmd_synth(g, synth_ideal, synth_table, synth_config, synth_basis, trials, rate, out, outcome);
    } else if (analyze->parsed()) {
      cmd_analyze(g, counts_path, analyze_basis, reference, resamples, analyze_plot, out, outcome);
    } else if (fitcmd->parsed()) {
      cmd_fit(g, fit_counts, fit_spec, out, outcome);
    } else if (report->parsed()) {
      cmd_report(g, report_doc, report_zz, report_xx, out, outcome);
    }
  } catch (const UsageError& e) {
    err << "fibrecnot: " << e.what() << "\n";
    outcome.exit_code = kExitUsage;
  } catch (const std::exception& e) {
    err << "fibrecnot: " << e.what() << "\n";
    outcome.exit_code = kExitDomain;
  }
  if (outcome.exit_code != kExitOk) outcome.artifacts.clear();
  return outcome;
}

}  // namespace fibrecnot
