//
// Copyright 2026 The dpmean Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpmean/cli.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "dpmean/bounds.h"
#include "dpmean/dataset.h"
#include "dpmean/geometry.h"
#include "dpmean/harness.h"
#include "dpmean/mechanisms.h"
#include "dpmean/random_stream.h"
#include "dpmean/report_io.h"
#include "dpmean/status_macros.h"
#include "json.hpp"

namespace dpmean {
namespace {

constexpr int64_t kDefaultTrials = 10000;

constexpr char kPrivacyNote[] =
    "note: each run on the same data spends another epsilon; repeated runs "
    "compose linearly and no budget is tracked across runs.\n";

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

uint64_t EntropySeed() {
  std::random_device device;
  return (static_cast<uint64_t>(device()) << 32) | device();
}

absl::Status RequireFlags(
    std::initializer_list<std::pair<const char*, bool>> flags) {
  for (const auto& [name, present] : flags) {
    if (!present) {
      return absl::InvalidArgumentError(
          absl::StrFormat("missing required flag %s", name));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::ofstream> OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out) {
    return absl::InvalidArgumentError(
        absl::StrFormat("cannot open '%s' for writing", path));
  }
  return out;
}

absl::StatusOr<ExperimentConfig> LoadSweepConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::InvalidArgumentError(
        absl::StrFormat("cannot read sweep config '%s'", path));
  }
  nlohmann::json json;
  try {
    in >> json;
    ExperimentConfig config;
    for (const auto& name : json.at("mechanisms")) {
      DPMEAN_ASSIGN_OR_RETURN(Mechanism m,
                              ParseMechanism(name.get<std::string>()));
      config.mechanisms.push_back(m);
    }
    config.epsilons = json.at("epsilons").get<std::vector<double>>();
    for (const auto& d : json.at("datasets")) {
      DatasetSpec spec;
      DPMEAN_ASSIGN_OR_RETURN(
          spec.kind, ParseDatasetKind(d.value("kind", std::string("two_point"))));
      spec.size = d.value("size", kPresetDatasetSize);
      spec.target_mean = d.value("target_mean", 0.5);
      spec.lower = d.value("lower", 0.0);
      spec.upper = d.value("upper", 1.0);
      if (d.contains("family_k")) spec.family_k = d.at("family_k").get<int64_t>();
      config.dataset_specs.push_back(spec);
    }
    config.trials = json.value("trials", kDefaultTrials);
    config.seed = json.value("seed", uint64_t{0});
    return config;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed sweep config '%s': %s", path, e.what()));
  }
}

// Rows regrouped so each (epsilon, dataset) cell lists its shifted report
// followed by its transformed report, with the shifted/transformed MSE ratio
// on both rows.
absl::Status PairShiftedAndTransformed(std::vector<MseReport>& reports,
                                       ExtraColumn& ratio) {
  std::vector<MseReport> shifted, transformed;
  for (const MseReport& r : reports) {
    (r.mechanism == Mechanism::kShifted ? shifted : transformed).push_back(r);
  }
  if (shifted.size() != transformed.size()) {
    return absl::InternalError("unpaired figure rows");
  }
  std::vector<MseReport> paired;
  ratio.name = "mse_ratio";
  for (size_t i = 0; i < shifted.size(); ++i) {
    const double value = shifted[i].mse / transformed[i].mse;
    paired.push_back(shifted[i]);
    paired.push_back(transformed[i]);
    ratio.values.push_back(value);
    ratio.values.push_back(value);
  }
  reports = std::move(paired);
  return absl::OkStatus();
}

std::string BoolName(bool value) { return value ? "true" : "false"; }

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kNotFound:
      return kExitValidation;
    default:
      return kExitInternal;
  }
}

absl::StatusOr<std::vector<double>> ReadBoundedValues(std::istream& in,
                                                      double lower,
                                                      double upper) {
  std::vector<double> values;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text(absl::StripAsciiWhitespace(line));
    if (text.empty()) continue;
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: '%s' is not a finite real number", line_number, text));
    }
    if (!(value >= lower && value <= upper)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: value %s lies outside the declared bounds "
                          "[%g, %g]",
                          line_number, text, lower, upper));
    }
    values.push_back(value);
  }
  return values;
}

int CmdEstimate(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (absl::Status s = RequireFlags({{"--input", config.input_path.has_value()},
                                     {"--lower", config.lower.has_value()},
                                     {"--upper", config.upper.has_value()},
                                     {"--epsilon", config.epsilon.has_value()}});
      !s.ok()) {
    return Fail(s, err);
  }
  absl::StatusOr<Mechanism> mechanism = ParseMechanism(config.mechanism);
  if (!mechanism.ok()) return Fail(mechanism.status(), err);
  absl::StatusOr<PrivacyBudget> epsilon = PrivacyBudget::Create(*config.epsilon);
  if (!epsilon.ok()) return Fail(epsilon.status(), err);
  if (!(*config.lower < *config.upper)) {
    return Fail(absl::InvalidArgumentError("--lower must be below --upper"),
                err);
  }
  std::optional<std::ofstream> record_file;
  if (config.output_path.has_value()) {
    absl::StatusOr<std::ofstream> file = OpenOutput(*config.output_path);
    if (!file.ok()) return Fail(file.status(), err);
    record_file = std::move(*file);
  }

  std::ifstream in(*config.input_path);
  if (!in) {
    return Fail(absl::InvalidArgumentError(absl::StrFormat(
                    "cannot read input file '%s'", *config.input_path)),
                err);
  }
  absl::StatusOr<std::vector<double>> values =
      ReadBoundedValues(in, *config.lower, *config.upper);
  if (!values.ok()) return Fail(values.status(), err);
  absl::StatusOr<BoundedDataset> dataset = BoundedDataset::Create(
      std::move(*values), *config.lower, *config.upper);
  if (!dataset.ok()) return Fail(dataset.status(), err);

  const uint64_t seed = config.seed.value_or(EntropySeed());
  // Exactly one mechanism invocation per run.
  absl::StatusOr<MeanEstimate> estimate =
      RunMechanism(*dataset, *epsilon, *mechanism, DeriveStream(seed, 0));
  if (!estimate.ok()) return Fail(estimate.status(), err);

  nlohmann::ordered_json record;
  record["mechanism"] = std::string(MechanismName(*mechanism));
  record["epsilon"] = epsilon->epsilon();
  record["n_is_private"] = true;
  record["estimate"] = estimate->value;
  record["seed"] = seed;
  out << "private mean: " << FormatReal(estimate->value) << "\n";
  out << record.dump() << "\n";
  if (record_file.has_value()) *record_file << record.dump(2) << "\n";
  err << kPrivacyNote;
  return kExitOk;
}

int CmdBounds(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (absl::Status s = RequireFlags({{"--lower", config.lower.has_value()},
                                     {"--upper", config.upper.has_value()},
                                     {"--epsilon", config.epsilon.has_value()}});
      !s.ok()) {
    return Fail(s, err);
  }
  const double eps = *config.epsilon;
  const double lo = *config.lower;
  const double hi = *config.upper;
  absl::StatusOr<RiskReport> swap = SwapMinmaxLeading(eps, lo, hi);
  if (!swap.ok()) return Fail(swap.status(), err);
  const RiskReport upper = *AddRemoveMinmaxLeading(eps, lo, hi);
  const RiskReport lower = *LowerBoundLeading(eps, lo, hi);
  const RiskReport shifted = *ShiftedMinmaxLeading(eps, lo, hi);

  if (config.n.has_value() != config.mean.has_value()) {
    return Fail(absl::InvalidArgumentError(
                    "--n and --mean must be given together"),
                err);
  }
  std::ostringstream table;
  table << "quantity,value,units\n";
  auto row = [&](std::string_view name, double value, std::string_view units) {
    table << name << ',' << FormatReal(value) << ',' << units << '\n';
  };
  row("swap_minmax_leading", swap->leading_term, "normalized_mse");
  row("add_remove_upper_leading", upper.leading_term, "normalized_mse");
  row("add_remove_lower_leading", lower.leading_term, "normalized_mse");
  row("shifted_upper_leading", shifted.leading_term, "normalized_mse");
  row("shifted_over_transformed", shifted.leading_term / upper.leading_term,
      "ratio");
  if (config.n.has_value()) {
    absl::StatusOr<double> shifted_mse =
        ShiftedMseBoundLeading(*config.n, *config.mean, lo, hi, eps);
    if (!shifted_mse.ok()) return Fail(shifted_mse.status(), err);
    const double transformed_mse =
        *TransformedMseBoundLeading(*config.n, *config.mean, lo, hi, eps);
    const double n2 = static_cast<double>(*config.n) * *config.n;
    row("shifted_dataset_bound", *shifted_mse, "mse");
    row("transformed_dataset_bound", transformed_mse, "mse");
    row("shifted_dataset_bound_normalized", n2 * *shifted_mse,
        "normalized_mse");
    row("transformed_dataset_bound_normalized", n2 * transformed_mse,
        "normalized_mse");
    row("dataset_shifted_over_transformed", *shifted_mse / transformed_mse,
        "ratio");
  }
  out << table.str();
  err << "note: leading terms only; the (1 +- o(1)) factors are asymptotic.\n";
  return kExitOk;
}

int CmdFigures(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.preset.has_value() == config.config_path.has_value()) {
    return Fail(absl::InvalidArgumentError(
                    "give exactly one of --preset or --config"),
                err);
  }
  if (config.trials.has_value() && *config.trials < 1) {
    return Fail(absl::InvalidArgumentError("--trials must be at least 1"), err);
  }
  if (config.workers < 1) {
    return Fail(absl::InvalidArgumentError("--workers must be at least 1"),
                err);
  }
  absl::StatusOr<ExperimentConfig> experiment;
  std::string preset_name;
  if (config.preset.has_value()) {
    preset_name = *config.preset;
    experiment =
        FigurePreset(preset_name, 0, config.trials.value_or(kDefaultTrials));
  } else {
    experiment = LoadSweepConfig(*config.config_path);
  }
  if (!experiment.ok()) return Fail(experiment.status(), err);
  if (config.trials.has_value()) experiment->trials = *config.trials;
  if (config.seed.has_value()) {
    experiment->seed = *config.seed;
  } else if (config.preset.has_value()) {
    experiment->seed = EntropySeed();
  }
  experiment->workers = config.workers;
  if (absl::Status s = ValidateConfig(*experiment); !s.ok()) return Fail(s, err);

  const std::string path = config.output_path.value_or(
      preset_name.empty() ? std::string("sweep.csv") : preset_name + ".csv");
  absl::StatusOr<std::ofstream> csv = OpenOutput(path);
  if (!csv.ok()) return Fail(csv.status(), err);
  absl::StatusOr<std::ofstream> meta = OpenOutput(path + ".meta.json");
  if (!meta.ok()) return Fail(meta.status(), err);

  absl::StatusOr<std::vector<MseReport>> reports = Sweep(*experiment);
  if (!reports.ok()) return Fail(reports.status(), err);

  std::vector<ExtraColumn> extras;
  if (preset_name == "fig2b") {
    ExtraColumn ratio{"ratio_to_bound", {}};
    for (const MseReport& r : *reports) {
      ratio.values.push_back(r.normalized_mse /
                             (2.0 / (r.epsilon * r.epsilon)));
    }
    extras.push_back(std::move(ratio));
  } else if (preset_name == "fig2c") {
    ExtraColumn ratio;
    if (absl::Status s = PairShiftedAndTransformed(*reports, ratio); !s.ok()) {
      return Fail(s, err);
    }
    extras.push_back(std::move(ratio));
  }
  if (absl::Status s = WriteReportCsv(*csv, *reports, extras); !s.ok()) {
    return Fail(s, err);
  }
  *meta << SweepMetadataJson(*experiment, preset_name);
  csv->close();
  meta->close();
  if (!*csv || !*meta) {
    return Fail(absl::DataLossError("failed to finish writing outputs"), err);
  }
  out << "wrote " << reports->size() << " rows to " << path << " (seed "
      << experiment->seed << ")\n";
  return kExitOk;
}

int CmdGeometry(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const std::string path = config.output_path.value_or("polygons.csv");
  absl::StatusOr<std::ofstream> csv = OpenOutput(path);
  if (!csv.ok()) return Fail(csv.status(), err);
  const std::vector<NamedBall> balls = MechanismBalls();
  if (absl::Status s = WritePolygonCsv(*csv, balls); !s.ok()) {
    return Fail(s, err);
  }
  const SensitivitySegment unit = SensitivitySegment::UnitInterval();
  out << "ball,radius,l1_sensitivity,covers_unit_segment,tight_everywhere,"
         "centrally_symmetric,area\n";
  for (const NamedBall& ball : balls) {
    double lowest = TransformedL1Norm(ball.transform, 0.0);
    double highest = lowest;
    for (int i = 1; i <= 10; ++i) {
      const double norm = TransformedL1Norm(ball.transform, i / 10.0);
      lowest = std::min(lowest, norm);
      highest = std::max(highest, norm);
    }
    out << ball.name << ',' << FormatReal(ball.radius) << ','
        << FormatReal(L1SensitivityUnder(ball.transform, unit)) << ','
        << BoolName(CoversSensitivity(ball.polygon, unit)) << ','
        << BoolName(highest - lowest < 1e-12) << ','
        << BoolName(IsCentrallySymmetric(ball.polygon)) << ','
        << FormatReal(PolygonArea(ball.polygon)) << '\n';
  }
  return kExitOk;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private mean estimation (add-remove model)",
               "dpmean"};
  app.require_subcommand(1);

  CliConfig config;
  std::string input, output, preset, config_path, mechanism = "transformed";
  double lower = 0, upper = 0, epsilon = 0, mean = 0;
  uint64_t seed = 0;
  int64_t trials = 0, n = 0;
  int workers = 1;

  auto* estimate = app.add_subcommand("estimate", "Release a private mean");
  auto* bounds = app.add_subcommand("bounds", "Print analytic error bounds");
  auto* figures = app.add_subcommand("figures", "Generate experiment CSVs");
  auto* geometry =
      app.add_subcommand("geometry", "Export sensitivity-ball polygons");

  std::vector<CLI::Option*> opts;
  auto add = [&](CLI::App* sub, const std::string& flag, auto& target,
                 const std::string& help) {
    opts.push_back(sub->add_option(flag, target, help));
  };
  add(estimate, "--input", input, "File with one real per line");
  for (CLI::App* sub : {estimate, bounds}) {
    add(sub, "--lower", lower, "Public lower bound of the data");
    add(sub, "--upper", upper, "Public upper bound of the data");
    add(sub, "--epsilon", epsilon, "Privacy parameter");
  }
  estimate->add_option("--mechanism", mechanism,
                       "independent, shifted or transformed")
      ->check(CLI::IsMember({"independent", "shifted", "transformed"}));
  add(bounds, "--n", n, "Dataset size for per-dataset bounds");
  add(bounds, "--mean", mean, "Dataset mean for per-dataset bounds");
  for (CLI::App* sub : {estimate, figures}) {
    add(sub, "--seed", seed, "Random seed (default: fresh entropy)");
  }
  add(figures, "--trials", trials, "Trials per cell");
  add(figures, "--preset", preset, "fig2a, fig2b or fig2c");
  add(figures, "--config", config_path, "JSON sweep configuration");
  add(figures, "--workers", workers, "Worker threads");
  for (CLI::App* sub : {estimate, figures, geometry}) {
    add(sub, "--output", output, "Output path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  auto given = [&](CLI::App* sub, const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  CLI::App* chosen = app.get_subcommands().front();
  config.subcommand = chosen->get_name();
  if (given(chosen, "--input")) config.input_path = input;
  if (given(chosen, "--lower")) config.lower = lower;
  if (given(chosen, "--upper")) config.upper = upper;
  if (given(chosen, "--epsilon")) config.epsilon = epsilon;
  if (given(chosen, "--seed")) config.seed = seed;
  if (given(chosen, "--trials")) config.trials = trials;
  if (given(chosen, "--output")) config.output_path = output;
  if (given(chosen, "--preset")) config.preset = preset;
  if (given(chosen, "--config")) config.config_path = config_path;
  if (given(chosen, "--n")) config.n = n;
  if (given(chosen, "--mean")) config.mean = mean;
  config.mechanism = mechanism;
  config.workers = workers;

  if (chosen == estimate) return CmdEstimate(config, out, err);
  if (chosen == bounds) return CmdBounds(config, out, err);
  if (chosen == figures) return CmdFigures(config, out, err);
  return CmdGeometry(config, out, err);
}

}  // namespace dpmean
