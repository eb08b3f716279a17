/* Copyright 2026 The TimeGate Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end: generate-data, train, eval, report, tradeoff and
// gradcheck. Exit status 0 on success, 1 on usage errors, 2 on runtime
// failures.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "timegate/checkpoint.h"
#include "timegate/config.h"
#include "timegate/costmodel.h"
#include "timegate/dataset_io.h"
#include "timegate/errors.h"
#include "timegate/evaluation.h"
#include "timegate/gradsuite.h"
#include "timegate/training.h"

namespace {

namespace fs = std::filesystem;
using namespace timegate;
using namespace timegate::harness;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string checkpoint;
  std::string metrics;
};

ExperimentConfig Configure(const Options& opt) {
  ExperimentConfig config;
  try {
    config = LoadConfig(opt.config);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (opt.seed) config.seed = *opt.seed;
  return config;
}

fs::path OutDir(const Options& opt) {
  fs::create_directories(opt.out);
  return fs::path(opt.out);
}

std::string CheckpointPath(const Options& opt) {
  return opt.checkpoint.empty() ? (fs::path(opt.out) / "checkpoint.tgck").string()
                                : opt.checkpoint;
}

int GenerateData(const Options& opt) {
  ExperimentConfig config = Configure(opt);
  const fs::path out = OutDir(opt);
  synth::Splits s = synth::GenerateDataset(config.data.spec, config.data.n_train,
                                           config.data.n_test, config.seed);
  synth::WriteDataset(s.train, (out / "train.tgds").string());
  synth::WriteDataset(s.test, (out / "test.tgds").string());
  std::cout << "wrote " << s.train.size() << " train and " << s.test.size()
            << " test videos to " << out.string() << "\n";
  return kOk;
}

int TrainCommand(const Options& opt) {
  ExperimentConfig config = Configure(opt);
  const fs::path out = OutDir(opt);
  Datasets data = LoadOrGenerate(config);
  Model model = Train(config, data.train, &std::cout);
  SaveCheckpoint(ToCheckpoint(model), CheckpointPath(opt));
  std::ofstream log(out / "train_log.csv");
  log << "phase,epoch,loss,accuracy,selected_ratio\n" << std::setprecision(12);
  for (const EpochLog& e : model.history) {
    log << e.phase << "," << e.epoch << "," << e.loss << "," << e.accuracy << ","
        << e.selected_ratio << "\n";
  }
  std::cout << "checkpoint written to " << CheckpointPath(opt) << "\n";
  return kOk;
}

int EvalCommand(const Options& opt) {
  ExperimentConfig config = Configure(opt);
  const fs::path out = OutDir(opt);
  Model model = FromCheckpoint(LoadCheckpoint(CheckpointPath(opt)));
  Datasets data = LoadOrGenerate(config);
  MetricsTable table = Evaluate(model, data.test, config.eval.budgets, config.eval.selection);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  std::ofstream csv(out / "metrics.csv");
  WriteMetricsCsv(csv, table);
  WriteMetricsCsv(std::cout, table);
  for (const auto& row : table.rows) {
    if (row.heavy_invocations != row.expected_invocations) {
      std::cerr << "heavy encoder ran " << row.heavy_invocations << " times, expected "
                << row.expected_invocations << "\n";
      return kFailure;
    }
  }
  return kOk;
}

int ReportCommand(const Options& opt) {
  ExperimentConfig config = Configure(opt);
  const fs::path out = OutDir(opt);
  Model model = FromCheckpoint(LoadCheckpoint(CheckpointPath(opt)));
  Datasets data = LoadOrGenerate(config);
  GatingReport report = MakeGatingReport(model, data.test);
  WriteGatingReport(report, out.string());
  std::cout << "class,ratio\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    std::cout << report.classes[i] << "," << report.class_ratio[i] << "\n";
  }
  std::cout << "variance " << report.ratio_variance << "\n";
  return kOk;
}

int TradeoffCommand(const Options& opt) {
  ExperimentConfig config = Configure(opt);
  const fs::path out = OutDir(opt);
  const std::string path =
      opt.metrics.empty() ? (out / "metrics.csv").string() : opt.metrics;
  MetricsTable table = ReadMetricsCsv(path);
  const bool scs = table.mode == ToString(TrainMode::kScSampler);
  const bool gated = scs || UsesSelector(TrainModeFromString(table.mode));
  const std::string& heavy = config.cost.heavy_model;
  const bool desk = heavy.rfind("desk_", 0) == 0;
  const std::string light = desk ? (scs ? cost::kDeskScSamplerLight : cost::kDeskLight)
                                 : (scs ? cost::kScSamplerLight : cost::kLightPlusGating);
  std::vector<cost::BudgetResult> results;
  std::set<int> seen;
  for (const auto& row : table.rows) {
    const int n = static_cast<int>(std::lround(row.mean_selected));
    if (seen.insert(n).second) results.push_back({n, row.metric});
  }
  cost::CostRegistry registry = cost::CostRegistry::Published();
  ExperimentConfig spec_config = config;
  registry.AddDeskModels(MakeSelectorConfig(spec_config), MakeClassifierConfig(spec_config),
                         spec_config.data.spec.timesteps);
  auto rows = cost::TradeoffRows(heavy, results, gated ? config.data.spec.timesteps : 0,
                                 registry, light);
  std::ofstream csv(out / "tradeoff.csv");
  cost::WriteTradeoffCsv(csv, rows);
  cost::WriteTradeoffCsv(std::cout, rows);
  return kOk;
}

int GradcheckCommand(const Options& opt) {
  std::uint64_t seed = opt.seed.value_or(0);
  if (!opt.config.empty()) seed = opt.seed.value_or(Configure(opt).seed);
  double worst = 0.0;
  for (const auto& e : RunGradientSuite(seed)) {
    std::cout << std::left << std::setw(44) << e.name << " " << std::scientific
              << std::setprecision(3) << e.max_relative_error << "\n";
    worst = std::max(worst, e.max_relative_error);
  }
  std::cout << "max relative error " << worst << (worst < 1e-4 ? " PASS" : " FAIL") << "\n";
  return worst < 1e-4 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional timestep gating on synthetic long-range activities"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&opt](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opt.config, "Experiment config (JSON)");
    if (config_required) c->required();
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--out", opt.out, "Output directory");
  };
  auto* gen = app.add_subcommand("generate-data", "Generate and write train/test datasets");
  add_common(gen, true);
  auto* train = app.add_subcommand("train", "Train the configured model");
  add_common(train, true);
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  add_common(eval, true);
  eval->add_option("--checkpoint", opt.checkpoint, "Checkpoint (default <out>/checkpoint.tgck)");
  auto* report = app.add_subcommand("report", "Per-class gating ratios and temporal profiles");
  add_common(report, true);
  report->add_option("--checkpoint", opt.checkpoint, "Checkpoint (default <out>/checkpoint.tgck)");
  auto* tradeoff = app.add_subcommand("tradeoff", "Cost/metric rows from a finished evaluation");
  add_common(tradeoff, true);
  tradeoff->add_option("--metrics", opt.metrics, "Metrics CSV (default <out>/metrics.csv)");
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient suite");
  add_common(grad, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*gen) return GenerateData(opt);
    if (*train) return TrainCommand(opt);
    if (*eval) return EvalCommand(opt);
    if (*report) return ReportCommand(opt);
    if (*tradeoff) return TradeoffCommand(opt);
    if (*grad) return GradcheckCommand(opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
