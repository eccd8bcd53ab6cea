// Copyright 2026 The DivBS Authors
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
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "divbs/error.h"
#include "divbs/io.h"
#include "divbs/metrics.h"
#include "divbs/objective.h"
#include "divbs/selectors.h"
#include "divbs/toy_lab.h"
#include "reports.h"

namespace divbs::cli {
namespace {

using nlohmann::json;

// Runs CLI11 over `args`. Returns an exit code when parsing ends the command
// (help or a usage error), nothing when the command should proceed.
std::optional<int> Parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  return std::nullopt;
}

int UsageError(const CLI::App& app, const std::string& message, std::ostream& err) {
  err << "error: " << message << "\n\n" << app.help();
  return kExitUsage;
}

// Flag wins over DIVBS_EPS, which wins over the library default.
double ResolveEps(const CLI::Option* flag, double flag_value) {
  if (flag->count() > 0) {
    if (!(flag_value >= 0.0) || !std::isfinite(flag_value)) {
      throw ContractViolation("--eps must be finite and nonnegative");
    }
    return flag_value;
  }
  if (auto env = io::EpsFromEnvironment()) return *env;
  return kDefaultEps;
}

void Emit(const json& report, const std::string& path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    io::WriteFileAtomic(path, text);
  }
}

// Maps library exceptions onto the data-error exit code.
template <typename Body>
int Guarded(Body&& body, std::ostream& err) {
  try {
    return body();
  } catch (const LoadError& e) {
    err << "data error: " << e.what() << "\n";
  } catch (const ContractViolation& e) {
    err << "data error: " << e.what() << "\n";
  } catch (const RefusalError& e) {
    err << "refused: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "data error: " << e.what() << "\n";
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitData;
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

json Summary(const std::vector<double>& v) {
  if (v.empty()) return json{{"min", nullptr}, {"median", nullptr}, {"max", nullptr}};
  return json{{"min", *std::min_element(v.begin(), v.end())},
              {"median", Median(v)},
              {"max", *std::max_element(v.begin(), v.end())}};
}

std::vector<std::size_t> ParseKs(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const unsigned long long k = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    ks.push_back(static_cast<std::size_t>(k));
  }
  return ks;
}

const std::vector<std::string> kSelectStrategies{"uniform",  "top_score", "grad_norm",
                                                 "greedy",   "divbs",     "kmeanspp"};
const std::vector<std::string> kToyStrategies{"uniform", "top_loss", "greedy", "divbs",
                                              "kmeanspp"};

}  // namespace

FeatureMatrix GaussianFeatures(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> values(n * d);
  for (double& v : values) v = gauss(rng);
  return FeatureMatrix(n, d, std::move(values));
}

int CliSelect(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Select a budgeted subset of feature rows", "divbs select"};
  std::string features_path, strategy_name, scores_path, out_path, pad = "uniform";
  std::size_t budget = 0;
  double budget_ratio = 0.0, eps = kDefaultEps;
  std::uint64_t seed = 0;
  bool normalize = false;
  app.add_option("--features", features_path, "Feature file (.csv or binary)")->required();
  app.add_option("--strategy", strategy_name, "Selector")
      ->required()
      ->check(CLI::IsMember(kSelectStrategies));
  auto* budget_opt = app.add_option("--budget", budget, "Number of rows to select");
  auto* ratio_opt = app.add_option("--budget-ratio", budget_ratio, "Fraction of rows to select");
  budget_opt->excludes(ratio_opt);
  app.add_option("--scores", scores_path, "Per-row scores (required for top_score)");
  app.add_option("--seed", seed, "Seed for stochastic selectors and padding");
  auto* eps_opt = app.add_option("--eps", eps, "Linear dependence tolerance");
  app.add_option("--pad", pad, "Padding policy")->check(CLI::IsMember({"none", "uniform"}));
  app.add_flag("--normalize", normalize, "Normalize feature rows before selection");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  if (auto code = Parse(app, args, out, err)) return *code;

  if (budget_opt->count() + ratio_opt->count() != 1) {
    return UsageError(app, "exactly one of --budget or --budget-ratio is required", err);
  }
  const Strategy strategy = *ParseStrategy(strategy_name);
  if (StrategyNeedsScores(strategy) && scores_path.empty()) {
    return UsageError(app, "--strategy top_score requires --scores", err);
  }

  return Guarded([&] {
    const FeatureMatrix features = io::ReadFeatures(features_path);
    SelectionConfig cfg;
    cfg.budget = budget_opt->count() > 0 ? budget : BudgetFromRatio(budget_ratio, features.n_rows());
    cfg.eps = ResolveEps(eps_opt, eps);
    cfg.seed = seed;
    cfg.pad_policy = pad == "none" ? PadPolicy::kNone : PadPolicy::kUniformRandom;
    cfg.normalize_features = normalize;

    std::optional<std::vector<double>> scores;
    if (!scores_path.empty()) scores = io::ReadScores(scores_path);
    std::optional<std::span<const double>> score_view;
    if (scores) score_view = std::span<const double>(*scores);
    const SelectionResult result = Select(strategy, features, cfg, score_view);

    json report = SelectionToJson(result);
    json echo{{"features", features_path},
              {"strategy", strategy_name},
              {"budget", cfg.budget},
              {"eps", cfg.eps},
              {"seed", cfg.seed},
              {"pad", pad},
              {"normalize_features", normalize},
              {"n_rows", features.n_rows()},
              {"dim", features.dim()}};
    if (ratio_opt->count() > 0) echo["budget_ratio"] = budget_ratio;
    if (!scores_path.empty()) echo["scores"] = scores_path;
    report["config_echo"] = echo;
    Emit(report, out_path, out);
    return kExitOk;
  }, err);
}

int CliOracleCheck(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compare greedy and DivBS against the exhaustive optimum on random instances",
               "divbs oracle-check"};
  std::size_t n = 8, d = 4, budget = 3, trials = 200;
  std::uint64_t seed = 0, cap = kDefaultEnumerationCap;
  double eps = kDefaultEps;
  bool vary = false;
  std::string out_path;
  app.add_option("--n", n, "Rows per instance (upper bound with --vary)")->check(CLI::PositiveNumber);
  app.add_option("--d", d, "Feature dimension (upper bound with --vary)")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "Budget (upper bound with --vary)")->check(CLI::PositiveNumber);
  app.add_option("--trials", trials, "Number of random instances")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed");
  app.add_option("--cap", cap, "Enumeration cap for the exhaustive oracle");
  auto* eps_opt = app.add_option("--eps", eps, "Linear dependence tolerance");
  app.add_flag("--vary", vary,
               "Draw budget in [1,budget], n in [budget,n] and d in [1,d] per instance");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  if (auto code = Parse(app, args, out, err)) return *code;
  if (budget > n) return UsageError(app, "--budget must not exceed --n", err);

  return Guarded([&] {
    const double tol = ResolveEps(eps_opt, eps);
    const std::uint64_t worst = BinomialCoefficient(n, budget);
    if (!vary && worst > cap) {
      throw RefusalError("C(" + std::to_string(n) + ", " + std::to_string(budget) + ") = " +
                         std::to_string(worst) + " exceeds the enumeration cap of " +
                         std::to_string(cap));
    }
    const double bound = 1.0 - std::exp(-1.0);
    std::mt19937_64 rng(seed);
    std::vector<double> greedy_ratios, divbs_ratios, divbs_over_greedy;
    std::size_t violations = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t tb = budget, tn = n, td = d;
      if (vary) {
        tb = std::uniform_int_distribution<std::size_t>(1, budget)(rng);
        tn = std::uniform_int_distribution<std::size_t>(tb, n)(rng);
        td = std::uniform_int_distribution<std::size_t>(1, d)(rng);
      }
      const FeatureMatrix features = GaussianFeatures(tn, td, rng());
      SelectionConfig cfg;
      cfg.budget = tb;
      cfg.eps = tol;
      cfg.pad_policy = PadPolicy::kNone;
      const BruteForceResult opt = BruteForceOptimum(features, tb, tol, cap);
      const double greedy_r = SelectGreedy(features, cfg).objective.r;
      const double divbs_r = SelectDivBS(features, cfg).objective.r;
      const double gr = opt.value.r > 0.0 ? greedy_r / opt.value.r : 1.0;
      const double dr = opt.value.r > 0.0 ? divbs_r / opt.value.r : 1.0;
      greedy_ratios.push_back(gr);
      divbs_ratios.push_back(dr);
      divbs_over_greedy.push_back(greedy_r > 0.0 ? divbs_r / greedy_r : 1.0);
      if (gr < bound - 1e-9) ++violations;
    }
    json report{{"trials", trials},
                {"n", n},
                {"d", d},
                {"budget", budget},
                {"vary", vary},
                {"seed", seed},
                {"eps", tol},
                {"bound", bound},
                {"greedy_ratio", Summary(greedy_ratios)},
                {"divbs_ratio", Summary(divbs_ratios)},
                {"divbs_over_greedy", Summary(divbs_over_greedy)},
                {"greedy_violations", violations},
                {"greedy_ratios", greedy_ratios},
                {"divbs_ratios", divbs_ratios},
                {"pass", violations == 0}};
    Emit(report, out_path, out);
    return violations == 0 ? kExitOk : kExitCheckFailed;
  }, err);
}

int CliMetrics(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diversity diagnostics for a selection", "divbs metrics"};
  std::string features_path, selection_path, ks_text = "1", out_path;
  std::int32_t group_width = 1;
  double eps = kDefaultEps;
  app.add_option("--features", features_path, "Feature file (.csv or binary)")->required();
  app.add_option("--selection", selection_path,
                 "JSON file with an \"indices\" (select) or \"final_selected\" (toy) array")
      ->required();
  app.add_option("--ks", ks_text, "Comma-separated neighbor counts");
  app.add_option("--group-width", group_width, "Labels per group")->check(CLI::PositiveNumber);
  auto* eps_opt = app.add_option("--eps", eps, "Linear dependence tolerance");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  if (auto code = Parse(app, args, out, err)) return *code;
  std::vector<std::size_t> ks;
  try {
    ks = ParseKs(ks_text);
  } catch (const std::exception&) {
    return UsageError(app, "--ks must be a comma-separated list of positive integers", err);
  }

  return Guarded([&] {
    const FeatureMatrix features = io::ReadFeatures(features_path);
    const json sel = json::parse(io::ReadFileBytes(selection_path));
    std::vector<std::size_t> selected;
    if (sel.is_array()) {
      selected = sel.get<std::vector<std::size_t>>();
    } else if (sel.contains("indices")) {
      selected = sel.at("indices").get<std::vector<std::size_t>>();
    } else {
      selected = sel.at("final_selected").get<std::vector<std::size_t>>();
    }
    DiversityReport report;
    report.n_selected = selected.size();
    report.selection_rank = SelectionRank(features, selected, ResolveEps(eps_opt, eps));
    if (!ks.empty()) report.knn_mean_cos_dist = KnnCosineDistance(features, selected, ks);
    if (features.row_labels()) {
      report.group_proportions = GroupProportions(*features.row_labels(), selected, group_width);
    }
    Emit(DiversityToJson(report), out_path, out);
    return kExitOk;
  }, err);
}

int CliToy(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run the four-cluster toy online-batch-selection experiment", "divbs toy"};
  std::string strategy_name = "divbs", out_path, csv_path, svg_path;
  toy::ToyRunConfig cfg;
  double eps = kDefaultEps;
  app.add_option("--strategy", strategy_name, "Selector")->check(CLI::IsMember(kToyStrategies));
  app.add_option("--budget-ratio", cfg.budget_ratio, "Fraction of the batch selected per epoch");
  app.add_option("--epochs", cfg.epochs, "Training epochs")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for data, initialization and selection");
  auto* eps_opt = app.add_option("--eps", eps, "Linear dependence tolerance");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_option("--scatter-csv", csv_path, "Write x,y,label,selected for the final selection");
  app.add_option("--scatter-svg", svg_path, "Write an SVG scatter of the final selection");
  if (auto code = Parse(app, args, out, err)) return *code;

  return Guarded([&] {
    cfg.strategy = *toy::ParseToyStrategy(strategy_name);
    cfg.eps = ResolveEps(eps_opt, eps);
    const toy::ToyRunReport report = toy::RunToyExperiment(cfg);
    if (!csv_path.empty()) {
      io::WriteFileAtomic(csv_path, io::ScatterCsv(report.inputs, report.final_selected));
    }
    if (!svg_path.empty()) {
      io::WriteFileAtomic(svg_path, io::ScatterSvg(report.inputs, report.final_selected,
                                                   strategy_name + " final selection"));
    }
    Emit(ToyReportToJson(report, cfg), out_path, out);
    return kExitOk;
  }, err);
}

int CliBench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time exact greedy against DivBS on synthetic Gaussian batches", "divbs bench"};
  std::size_t n = 320, d = 512, budget = 32, trials = 50;
  std::uint64_t seed = 0;
  std::string out_path;
  app.add_option("--n", n, "Rows per batch")->check(CLI::PositiveNumber);
  app.add_option("--d", d, "Feature dimension")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "Rows to select")->check(CLI::PositiveNumber);
  app.add_option("--trials", trials, "Timed batches")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  if (auto code = Parse(app, args, out, err)) return *code;
  if (budget > n) return UsageError(app, "--budget must not exceed --n", err);

  return Guarded([&] {
    using Clock = std::chrono::steady_clock;
    SelectionConfig cfg;
    cfg.budget = budget;
    cfg.pad_policy = PadPolicy::kNone;
    std::vector<double> greedy_s, divbs_s;
    std::size_t agree = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const FeatureMatrix features = GaussianFeatures(n, d, seed + t);
      auto t0 = Clock::now();
      const SelectionResult g = SelectGreedy(features, cfg);
      auto t1 = Clock::now();
      const SelectionResult v = SelectDivBS(features, cfg);
      auto t2 = Clock::now();
      greedy_s.push_back(std::chrono::duration<double>(t1 - t0).count());
      divbs_s.push_back(std::chrono::duration<double>(t2 - t1).count());
      if (g.indices == v.indices) ++agree;
    }
    auto stats = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
      return json{{"mean_seconds", mean}, {"std_seconds", sd}};
    };
    json g = stats(greedy_s), v = stats(divbs_s);
    const double speedup = g["mean_seconds"].get<double>() / v["mean_seconds"].get<double>();
    Emit(json{{"n", n},
              {"d", d},
              {"budget", budget},
              {"trials", trials},
              {"seed", seed},
              {"greedy", g},
              {"divbs", v},
              {"speedup", speedup},
              {"identical_selections", agree}},
         out_path, out);
    return kExitOk;
  }, err);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static constexpr const char* kUsage =
      "usage: divbs <command> [options]\n"
      "\n"
      "commands:\n"
      "  select        select a budgeted subset from a feature file\n"
      "  oracle-check  compare greedy/DivBS with the exhaustive optimum\n"
      "  metrics       diversity diagnostics for a selection\n"
      "  toy           run the four-cluster toy experiment\n"
      "  bench         time greedy against DivBS\n"
      "\n"
      "Run `divbs <command> --help` for command options.\n";
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  const std::string& cmd = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (cmd == "select") return CliSelect(rest, out, err);
  if (cmd == "oracle-check") return CliOracleCheck(rest, out, err);
  if (cmd == "metrics") return CliMetrics(rest, out, err);
  if (cmd == "toy") return CliToy(rest, out, err);
  if (cmd == "bench") return CliBench(rest, out, err);
  if (cmd == "--help" || cmd == "-h" || cmd == "help") {
    out << kUsage;
    return kExitOk;
  }
  err << "error: unknown command \"" << cmd << "\"\n\n" << kUsage;
  return kExitUsage;
}

}  // namespace divbs::cli
