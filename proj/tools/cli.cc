// Copyright 2026 The cfc-lab Authors
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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "cfc/analysis.h"
#include "cfc/circuits.h"
#include "cfc/classical.h"
#include "cfc/errors.h"
#include "cfc/json_io.h"
#include "cfc/parallel.h"

namespace cfc::cli {
namespace {

using Cell = std::variant<std::string, double, long long, bool>;
using Row = std::vector<Cell>;

struct Output {
  nlohmann::json json;
  std::vector<std::string> header;
  std::vector<Row> rows;
  // CSV may carry a different (fuller) table than the human view.
  std::optional<std::vector<std::string>> csv_header;
  std::optional<std::vector<Row>> csv_rows;
  int exit_code = kExitOk;
};

struct GlobalConfig {
  std::string format = "table";
  std::string output;
  std::vector<double> grid{1e-2, 5e-3, 2.5e-3};
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
};

std::string render_cell(const Cell& cell, bool full_precision) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return full_precision ? format_double(v) : format_short(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

void write_csv(const std::vector<std::string>& header, const std::vector<Row>& rows, std::ostream& out) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << render_cell(row[i], true);
    }
    out << '\n';
  }
}

void write_table(const std::vector<std::string>& header, const std::vector<Row>& rows, std::ostream& out) {
  std::vector<std::vector<std::string>> text;
  text.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (const auto& cell : row) {
      line.push_back(render_cell(cell, false));
    }
    text.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : text) {
    for (std::size_t i = 0; i < line.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  for (const auto& line : text) {
    std::string s;
    for (std::size_t i = 0; i < line.size(); ++i) {
      std::string cell = line[i];
      if (i + 1 < line.size()) {
        cell.resize(width[i], ' ');
        cell += "  ";
      }
      s += cell;
    }
    out << s << '\n';
  }
}

void emit(const Output& output, const GlobalConfig& config, std::ostream& out) {
  if (config.format == "json") {
    out << dump_json(output.json) << '\n';
  } else if (config.format == "csv") {
    write_csv(output.csv_header.value_or(output.header), output.csv_rows.value_or(output.rows), out);
  } else {
    write_table(output.header, output.rows, out);
  }
}

LimitOptions limit_options(const GlobalConfig& config) {
  return LimitOptions{config.grid, config.tolerance, std::nullopt};
}

BitProcess parse_bit(int bit) { return bit == 0 ? BitProcess::kZeroBit : BitProcess::kOneBit; }

nlohmann::json limit_json(const LimitEstimate& e) {
  return {{"value", e.value}, {"residual", e.residual}, {"converged", e.converged}};
}

// ---------------------------------------------------------------- reduced

struct ReducedArgs {
  int bit = 0;
  double theta1 = 1e-2;
  double theta2 = 1e-2;
  bool postselect = false;
  bool paper_table = false;
  double epsilon = 0.05;
};

Output cmd_reduced(const ReducedArgs& args, const GlobalConfig& config) {
  const ReducedParams params{args.theta1, args.theta2, parse_bit(args.bit)};
  const Circuit circuit = build_reduced(params);
  const ThetaValues thetas = reduced_thetas(params);
  const LimitOptions options = limit_options(config);
  const std::string t1(kTheta1);
  const std::string t2(kTheta2);

  Output out;
  out.header = {"quantity", "site", "bin", "polarization", "value"};
  nlohmann::json bins = nlohmann::json::array();
  const OutcomeDistribution dist = propagate(circuit, thetas);
  for (const auto& o : dist.outcomes) {
    bins.push_back({{"bin", o.name},
                    {"role", std::string(to_string(o.role))},
                    {"polarization", std::string(to_string(o.pol))},
                    {"p", o.p}});
    out.rows.push_back({std::string("probability"), std::string("-"), o.name, std::string(to_string(o.pol)), o.p});
  }

  bool converged = true;
  nlohmann::json sites = nlohmann::json::array();
  for (const std::string& site : {t1, t2}) {
    nlohmann::json j{{"site", site}};
    const double theta = site == t1 ? args.theta1 : args.theta2;
    if (theta > 0.0) {
      const double f = fisher_at(circuit, site, thetas);
      j["fisher_at_theta"] = f;
      out.rows.push_back({std::string("fisher_at_theta"), site, std::string("-"), std::string("-"), f});
    } else {
      j["fisher_at_theta"] = nullptr;
    }
    const ThetaFamily family = site == t1 ? isolate(circuit, t1) : tied(circuit, {t1, t2});
    const LimitEstimate limit = fisher_limit(circuit, site, family, options);
    converged = converged && limit.converged;
    j["limit"] = limit_json(limit);
    out.rows.push_back({std::string("fisher_limit"), site, std::string("-"), std::string("-"), limit.value});
    if (site == t2 && args.theta1 > 0.0) {
      const LimitEstimate fixed = fisher_limit(circuit, t2, with_fixed(t2, thetas), options);
      converged = converged && fixed.converged;
      j["limit_at_fixed_theta1"] = limit_json(fixed);
      out.rows.push_back(
          {std::string("fisher_limit_fixed_theta1"), site, std::string("-"), std::string("-"), fixed.value});
    }
    if (args.postselect) {
      const std::vector<BinRole> keep(kSuccessRoles.begin(), kSuccessRoles.end());
      const double f = fisher_at(circuit, site, thetas, keep);
      j["fisher_postselected"] = f;
      out.rows.push_back({std::string("fisher_postselected"), site, std::string("-"), std::string("-"), f});
    }
    sites.push_back(std::move(j));
  }

  out.json = {{"command", "reduced"},
              {"bit", args.bit},
              {"theta1", args.theta1},
              {"theta2", args.theta2},
              {"postselect", args.postselect},
              {"converged", converged},
              {"bins", std::move(bins)},
              {"sites", std::move(sites)}};
  out.exit_code = converged ? kExitOk : kExitNumerical;
  return out;
}

struct TableRow {
  std::string quantity;
  double computed;
  double expected;
  double tolerance;
  bool pass;
};

TableRow check(std::string quantity, double computed, double expected, double tolerance) {
  const bool pass = std::isfinite(computed) && std::abs(computed - expected) <= tolerance;
  return TableRow{std::move(quantity), computed, expected, tolerance, pass};
}

Output cmd_published_table(const ReducedArgs& args, const GlobalConfig& config) {
  const LimitOptions options = limit_options(config);
  const std::string t1(kTheta1);
  const std::string t2(kTheta2);
  const Circuit reference = build_reference();
  const Circuit zero = build_reduced({0.0, 0.0, BitProcess::kZeroBit});
  const Circuit one = build_reduced({0.0, 0.0, BitProcess::kOneBit});
  std::vector<TableRow> rows;

  const std::string ref(kReferenceParam);
  rows.push_back(check("F_ref", fisher_limit(reference, ref, isolate(reference, ref), options).value, 4.0, 1e-9));

  const ViolationReport report = d_vio_reduced(args.epsilon, options);
  const auto& site1 = report.sites.at(0);
  const auto& site2 = report.sites.at(1);
  rows.push_back(check("F0(theta1)", site1.fisher_zero->value, 1.6, 1e-6));
  rows.push_back(check("F1(theta1)", site1.fisher_one->value, 1.6, 1e-6));
  rows.push_back(check("F1(theta2)", site2.fisher_one->value, 0.4, 1e-6));
  rows.push_back(check("F0(theta2), theta1 -> 0", site2.fisher_zero->value, 0.0, 1e-6));

  double worst = 0.0;
  for (double theta1 : {0.05, 0.1, 0.2, 0.3}) {
    const ThetaValues fixed{{t1, theta1}, {t2, 0.0}};
    const double f = fisher_limit(zero, t2, with_fixed(t2, fixed), options).value;
    worst = std::max(worst, std::abs(f - 0.8 * (1.0 - std::cos(theta1))));
  }
  rows.push_back(check("max |F0(theta2;theta1) - (4/5)(1-cos theta1)|", worst, 0.0, 1e-9));

  rows.push_back(check("P(D0 | 0-bit)", propagate(zero, zero.zero_thetas()).role_probability(BinRole::kD0),
                       0.04, 1e-12));
  rows.push_back(
      check("P(D0 | 1-bit)", propagate(one, one.zero_thetas()).role_probability(BinRole::kD0), 0.0, 1e-12));
  rows.push_back(check("n_gamma", report.repetitions.n_gamma, 74.0, 0.0));
  rows.push_back(check("sum of contributions", report.raw_sum, 0.45, 1e-9));
  rows.push_back(check("D_vio", report.d_vio, 33.3, 1e-9));

  const std::vector<BinRole> keep(kSuccessRoles.begin(), kSuccessRoles.end());
  double post_one = 0.0;
  std::vector<double> post_zero;
  for (double theta : options.grid) {
    for (const std::string& site : {t1, t2}) {
      post_one = std::max(post_one, fisher_at(one, site, tied(one, {t1, t2})(theta), keep));
    }
    post_zero.push_back(std::max(fisher_at(zero, t1, tied(zero, {t1, t2})(theta), keep),
                                 fisher_at(zero, t2, tied(zero, {t1, t2})(theta), keep)));
  }
  rows.push_back(check("max post-selected F, 1-bit", post_one, 0.0, 1e-12));
  bool decreasing = true;
  for (std::size_t i = 1; i < post_zero.size(); ++i) {
    decreasing = decreasing && post_zero[i] < post_zero[i - 1];
  }
  TableRow finest = check("post-selected F, 0-bit, finest grid point", post_zero.back(), 0.0, 1e-4);
  finest.pass = finest.pass && post_zero.back() < 1e-4 && decreasing;
  rows.push_back(finest);

  Output out;
  out.header = {"quantity", "computed", "expected", "tolerance", "pass"};
  nlohmann::json jrows = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& r : rows) {
    all_pass = all_pass && r.pass;
    out.rows.push_back({r.quantity, r.computed, r.expected, r.tolerance, r.pass});
    jrows.push_back({{"quantity", r.quantity},
                     {"computed", r.computed},
                     {"expected", r.expected},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}});
  }
  out.json = {{"command", "reduced"}, {"paper_table", true}, {"all_pass", all_pass}, {"rows", std::move(jrows)}};
  out.exit_code = all_pass ? kExitOk : kExitNumerical;
  return out;
}

// ------------------------------------------------------------------- full

struct FullArgs {
  int outer = 3;
  int inner = 4;
  std::string mode = "sum";
  std::string sim_mode = "auto";
  int bit = 0;
  double epsilon = 0.05;
};

Output cmd_full(const FullArgs& args, const GlobalConfig& config) {
  Output out;
  out.header = {"quantity", "value"};
  nlohmann::json j{{"command", "full"}, {"N", args.outer}, {"M", args.inner}, {"mode", args.mode}};
  if (args.mode == "sum") {
    const double v = d_vio_full_sum(args.outer, args.inner);
    j["d_vio"] = v;
    out.rows.push_back({std::string("d_vio_sum"), v});
  } else if (args.mode == "asymptotic") {
    const AsymptoticEstimate a = d_vio_full_asymptotic(args.outer, args.inner);
    j["d_vio"] = a.value;
    j["regime_valid"] = a.regime_valid;
    out.rows.push_back({std::string("d_vio_asymptotic"), a.value});
    out.rows.push_back({std::string("regime_valid"), a.regime_valid});
  } else {
    FullSimulationOptions options;
    options.limit = limit_options(config);
    options.epsilon = args.epsilon;
    options.mode = args.sim_mode == "fisher" ? SimulationMode::kFisher
                   : args.sim_mode == "flux" ? SimulationMode::kFlux
                                             : SimulationMode::kAuto;
    const BitProcess bit = parse_bit(args.bit);
    const ViolationReport report = d_vio_full_simulated(args.outer, args.inner, bit, options);
    j["bit"] = args.bit;
    j["report"] = to_json(report);
    j["d_vio"] = report.raw_sum;
    out.rows.push_back({std::string("d_vio_raw"), report.raw_sum});
    out.rows.push_back({std::string("n_gamma"), static_cast<long long>(report.repetitions.n_gamma)});
    out.rows.push_back({std::string("d_vio_scaled"), report.d_vio});
    out.rows.push_back({std::string("p_success"), report.repetitions.p_success});
    out.rows.push_back({std::string("method"), report.method});
    out.rows.push_back({std::string("converged"), report.converged});
    out.exit_code = report.converged ? kExitOk : kExitNumerical;
  }
  out.json = std::move(j);
  return out;
}

// -------------------------------------------------------------- classical

struct ClassicalArgs {
  std::size_t length = 10000;
  std::string message;
};

Output cmd_classical(const ClassicalArgs& args, const GlobalConfig& config) {
  std::vector<bool> message;
  if (!args.message.empty()) {
    for (char c : args.message) {
      if (c != '0' && c != '1') {
        throw ConfigurationError("--message must be a string of 0 and 1");
      }
      message.push_back(c == '1');
    }
  } else {
    message = balanced_message(args.length, config.seed);
  }
  const ClassicalTranscript t = run_classical(message);
  const bool ok = t.post_selection_counterfactual();

  Output out;
  out.header = {"quantity", "value"};
  out.rows = {{std::string("length"), static_cast<long long>(t.minutes.size())},
              {std::string("kept"), static_cast<long long>(t.kept_indices.size())},
              {std::string("discarded"), static_cast<long long>(t.discard_count)},
              {std::string("discard_fraction"), t.discard_fraction()},
              {std::string("channel_crossings"), static_cast<long long>(t.crossing_count)},
              {std::string("kept_counterfactual"), ok}};
  out.csv_header = std::vector<std::string>{"minute", "parity", "bit", "sent", "received", "kept"};
  out.csv_rows.emplace();
  for (const auto& r : t.minutes) {
    out.csv_rows->push_back({static_cast<long long>(r.minute), std::string(r.even ? "even" : "odd"),
                             static_cast<long long>(r.bit), static_cast<long long>(r.ball_sent),
                             static_cast<long long>(r.ball_received), static_cast<long long>(r.kept)});
  }
  out.json = {{"command", "classical"},
              {"length", t.minutes.size()},
              {"seed", args.message.empty() ? nlohmann::json(config.seed) : nlohmann::json(nullptr)},
              {"kept", t.kept_indices.size()},
              {"discarded", t.discard_count},
              {"discard_fraction", t.discard_fraction()},
              {"channel_crossings", t.crossing_count},
              {"kept_counterfactual", ok}};
  out.exit_code = ok ? kExitOk : kExitNumerical;
  return out;
}

// ------------------------------------------------------------------ sweep

struct Range {
  long long start = 0;
  long long stop = 0;
  long long step = 1;
};

Range parse_range(const std::string& text) {
  Range r;
  std::vector<long long> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoll(item, &used));
      if (used != item.size()) {
        throw ConfigurationError("");
      }
    } catch (const std::exception&) {
      throw ConfigurationError("range '" + text + "' must be start:stop[:step]");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ConfigurationError("range '" + text + "' must be start:stop[:step]");
  }
  r.start = parts[0];
  r.stop = parts[1];
  r.step = parts.size() == 3 ? parts[2] : 1;
  if (r.step <= 0 || r.stop < r.start) {
    throw ConfigurationError("range '" + text + "' needs start <= stop and a positive step");
  }
  return r;
}

struct SweepArgs {
  std::string n_range = "2:10";
  std::string m_range = "2:10";
};

Output cmd_sweep(const SweepArgs& args, const GlobalConfig&) {
  const Range nr = parse_range(args.n_range);
  const Range mr = parse_range(args.m_range);
  std::vector<std::pair<int, int>> points;
  for (long long n = nr.start; n <= nr.stop; n += nr.step) {
    for (long long m = mr.start; m <= mr.stop; m += mr.step) {
      if (n < 2 || m < 2 || n > kMaxFullSize || m > kMaxFullSize) {
        throw ConfigurationError("sweep points need 2 <= N, M <= " + std::to_string(kMaxFullSize));
      }
      points.emplace_back(static_cast<int>(n), static_cast<int>(m));
    }
  }
  struct Result {
    double sum;
    double asym;
  };
  std::vector<Result> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    results[i] = {d_vio_full_sum(points[i].first, points[i].second),
                  d_vio_full_asymptotic(points[i].first, points[i].second).value};
  });

  Output out;
  out.header = {"N", "M", "D_sum", "D_asym", "relative_gap"};
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double gap = std::abs(results[i].asym - results[i].sum) / results[i].sum;
    out.rows.push_back({static_cast<long long>(points[i].first), static_cast<long long>(points[i].second),
                        results[i].sum, results[i].asym, gap});
    rows.push_back({{"N", points[i].first},
                    {"M", points[i].second},
                    {"D_sum", results[i].sum},
                    {"D_asym", results[i].asym},
                    {"relative_gap", gap}});
  }
  out.json = {{"command", "sweep"}, {"rows", std::move(rows)}};
  return out;
}

// ---------------------------------------------------------------- circuit

struct CircuitArgs {
  std::string kind = "reduced";
  int bit = 0;
  int outer = 3;
  int inner = 4;
};

Output cmd_circuit(const CircuitArgs& args) {
  Circuit circuit = args.kind == "reference" ? build_reference()
                    : args.kind == "reduced" ? build_reduced({0.0, 0.0, parse_bit(args.bit)})
                                             : build_full({args.outer, args.inner, parse_bit(args.bit)});
  Output out;
  out.json = circuit_to_json(circuit);
  out.header = {"index", "element"};
  long long index = 0;
  for (const auto& e : out.json["elements"]) {
    out.rows.push_back({index++, e.dump()});
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cfc_lab: Fisher-information analysis of nested-interferometer counterfactual communication"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");

  GlobalConfig config;
  app.add_option("--format", config.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("-o,--output", config.output, "Write the report to this file instead of stdout");
  app.add_option("--grid", config.grid, "Extrapolation grid in radians, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance", config.tolerance, "Extrapolation residual threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for generated messages")->capture_default_str();

  ReducedArgs reduced;
  auto* sub_reduced = app.add_subcommand("reduced", "Doubly nested interferometer");
  sub_reduced->add_option("--bit", reduced.bit, "Bit process")->check(CLI::IsMember({0, 1}))->capture_default_str();
  sub_reduced->add_option("--theta1", reduced.theta1, "First tagging angle (rad)")->capture_default_str();
  sub_reduced->add_option("--theta2", reduced.theta2, "Second tagging angle (rad)")->capture_default_str();
  sub_reduced->add_flag("--postselect", reduced.postselect, "Also report Fisher information conditioned on D0/D1");
  sub_reduced->add_flag("--paper-table", reduced.paper_table, "Check every published constant of the protocol");
  sub_reduced->add_option("--epsilon", reduced.epsilon, "Target 0-bit error for n_gamma")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  FullArgs full;
  auto* sub_full = app.add_subcommand("full", "Chained N x M protocol");
  sub_full->add_option("-N", full.outer, "Outer beam splitters")->check(CLI::Range(2, 1000000))->capture_default_str();
  sub_full->add_option("-M", full.inner, "Inner beam splitters")->check(CLI::Range(2, 1000000))->capture_default_str();
  sub_full->add_option("--mode", full.mode, "Evaluator")
      ->check(CLI::IsMember({"sum", "asymptotic", "simulate"}))
      ->capture_default_str();
  sub_full->add_option("--sim-mode", full.sim_mode, "Simulation estimator")
      ->check(CLI::IsMember({"auto", "fisher", "flux"}))
      ->capture_default_str();
  sub_full->add_option("--bit", full.bit, "Bit process for --mode simulate")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  sub_full->add_option("--epsilon", full.epsilon, "Target 0-bit error for n_gamma")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  ClassicalArgs classical;
  auto* sub_classical = app.add_subcommand("classical", "Ball-and-pipe protocol");
  sub_classical->add_option("--length", classical.length, "Balanced random message length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub_classical->add_option("--message", classical.message, "Explicit message, e.g. 0110");

  SweepArgs sweep;
  auto* sub_sweep = app.add_subcommand("sweep", "Closed-form versus asymptotic violation over an (N, M) grid");
  sub_sweep->add_option("--n-range", sweep.n_range, "start:stop[:step]")->capture_default_str();
  sub_sweep->add_option("--m-range", sweep.m_range, "start:stop[:step]")->capture_default_str();

  CircuitArgs circuit;
  auto* sub_circuit = app.add_subcommand("circuit", "Export a network description");
  sub_circuit->add_option("--kind", circuit.kind, "Network")
      ->check(CLI::IsMember({"reference", "reduced", "full"}))
      ->capture_default_str();
  sub_circuit->add_option("--bit", circuit.bit, "Bit process")->check(CLI::IsMember({0, 1}))->capture_default_str();
  sub_circuit->add_option("-N", circuit.outer, "Outer beam splitters (full)")->capture_default_str();
  sub_circuit->add_option("-M", circuit.inner, "Inner beam splitters (full)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Success&) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Output output;
    if (*sub_reduced) {
      output = reduced.paper_table ? cmd_published_table(reduced, config) : cmd_reduced(reduced, config);
    } else if (*sub_full) {
      output = cmd_full(full, config);
    } else if (*sub_classical) {
      output = cmd_classical(classical, config);
    } else if (*sub_circuit) {
      output = cmd_circuit(circuit);
    } else {
      output = cmd_sweep(sweep, config);
    }
    if (config.output.empty()) {
      emit(output, config, out);
    } else {
      std::ofstream file(config.output);
      if (!file) {
        err << "error: cannot open " << config.output << '\n';
        return kExitUsage;
      }
      emit(output, config, file);
    }
    if (output.exit_code == kExitNumerical) {
      err << "error: numerical check failed or extrapolation did not converge\n";
    }
    return output.exit_code;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace cfc::cli
