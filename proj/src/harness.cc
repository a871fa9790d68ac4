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

#include "dpmean/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <utility>

#include "absl/strings/str_format.h"
#include "dpmean/noise.h"
#include "dpmean/random_stream.h"
#include "dpmean/status_macros.h"

namespace dpmean {
namespace {

// Running count, mean and sum of squared deviations (Welford / Chan).
struct Moments {
  int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
};

Moments Merge(const Moments& a, const Moments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * nb / n;
  out.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
  return out;
}

Moments MergeRange(const std::vector<Moments>& blocks, size_t lo, size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const size_t mid = lo + (hi - lo) / 2;
  return Merge(MergeRange(blocks, lo, mid), MergeRange(blocks, mid, hi));
}

// Evaluates `squared_error` once per trial on the trial's own stream.
// `squared_error` must be safe to call concurrently.
Moments RunTrials(int64_t trials, uint64_t seed, int workers,
                  const std::function<double(StreamCursor&)>& squared_error) {
  const int64_t num_blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<Moments> blocks(static_cast<size_t>(num_blocks));
  std::atomic<int64_t> next_block{0};
  auto work = [&]() {
    for (int64_t b = next_block++; b < num_blocks; b = next_block++) {
      const int64_t begin = b * kTrialsPerBlock;
      const int64_t end = std::min(trials, begin + kTrialsPerBlock);
      Moments& block = blocks[static_cast<size_t>(b)];
      for (int64_t t = begin; t < end; ++t) {
        StreamCursor cursor(DeriveStream(seed, static_cast<uint64_t>(t)));
        block.Add(squared_error(cursor));
      }
    }
  };
  const int extra_threads =
      static_cast<int>(std::min<int64_t>(std::max(workers, 1), num_blocks)) - 1;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(std::max(extra_threads, 0)));
  for (int i = 0; i < extra_threads; ++i) threads.emplace_back(work);
  work();
  for (std::thread& thread : threads) thread.join();
  return MergeRange(blocks, 0, blocks.size());
}

double StdError(const Moments& m) {
  if (m.count < 2) return 0.0;
  const double n = static_cast<double>(m.count);
  return std::sqrt(m.m2 / (n - 1.0)) / std::sqrt(n);
}

absl::Status ValidateTrials(int64_t trials) {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("trials must be at least 1, got %d", trials));
  }
  return absl::OkStatus();
}

std::string DescribeCell(Mechanism mechanism, double epsilon,
                         const DatasetSpec& spec) {
  return absl::StrFormat("cell (mechanism=%s, epsilon=%g, dataset=%s, n=%d, "
                         "target_mean=%g)",
                         std::string(MechanismName(mechanism)), epsilon,
                         std::string(DatasetKindName(spec.kind)), spec.size,
                         spec.target_mean);
}

absl::StatusOr<FamilyWorstCase> ScoreFamily(
    const PrivacyBudget& epsilon, int64_t n, int64_t k, int64_t trials,
    const std::function<absl::StatusOr<double>(int64_t member)>& member_mse) {
  DPMEAN_RETURN_IF_ERROR(ValidateTrials(trials));
  if (n < 1 || k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("family needs n >= 1 and k >= 1, got n=%d k=%d", n, k));
  }
  FamilyWorstCase result;
  result.benchmark = 2.0 / (epsilon.epsilon() * epsilon.epsilon());
  for (int64_t i = 1; i <= k; ++i) {
    DPMEAN_ASSIGN_OR_RETURN(const double mse, member_mse(i));
    result.member_mse.push_back(mse);
    if (i == 1 || mse > result.worst_mse) {
      result.worst_mse = mse;
      result.worst_member = i;
    }
  }
  result.ratio = result.worst_mse / result.benchmark;
  return result;
}

}  // namespace

std::string_view DatasetKindName(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kConstant:
      return "constant";
    case DatasetKind::kTwoPoint:
      return "two_point";
    case DatasetKind::kLowerBoundFamily:
      return "lower_bound_family";
    case DatasetKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

absl::StatusOr<DatasetKind> ParseDatasetKind(std::string_view name) {
  for (DatasetKind kind :
       {DatasetKind::kConstant, DatasetKind::kTwoPoint,
        DatasetKind::kLowerBoundFamily, DatasetKind::kExplicit}) {
    if (DatasetKindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown dataset kind '%s'", std::string(name)));
}

absl::StatusOr<BoundedDataset> GenerateDataset(const DatasetSpec& spec) {
  if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper) ||
      !(spec.lower < spec.upper)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dataset bounds must satisfy lower < upper, got [%g, %g]", spec.lower,
        spec.upper));
  }
  if (spec.size < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dataset size must be positive, got %d", spec.size));
  }
  const size_t size = static_cast<size_t>(spec.size);
  if (spec.kind == DatasetKind::kLowerBoundFamily) {
    if (!spec.family_k.has_value() || *spec.family_k < 1) {
      return absl::InvalidArgumentError(
          "lower_bound_family needs a positive family_k");
    }
    std::vector<double> values(static_cast<size_t>(*spec.family_k),
                               spec.upper);
    values.resize(values.size() + size, spec.lower);
    return BoundedDataset::Create(std::move(values), spec.lower, spec.upper);
  }
  if (!(spec.target_mean >= spec.lower && spec.target_mean <= spec.upper)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("target mean %g lies outside [%g, %g]",
                        spec.target_mean, spec.lower, spec.upper));
  }
  switch (spec.kind) {
    case DatasetKind::kConstant:
      return BoundedDataset::Create(std::vector<double>(size, spec.target_mean),
                                    spec.lower, spec.upper);
    case DatasetKind::kTwoPoint: {
      const double fraction =
          (spec.target_mean - spec.lower) / (spec.upper - spec.lower);
      const int64_t k = std::clamp<int64_t>(
          std::llround(static_cast<double>(spec.size) * fraction), 0,
          spec.size);
      std::vector<double> values(static_cast<size_t>(k), spec.upper);
      values.resize(size, spec.lower);
      return BoundedDataset::Create(std::move(values), spec.lower, spec.upper);
    }
    case DatasetKind::kExplicit:
      return absl::InvalidArgumentError(
          "explicit datasets are supplied directly, not generated");
    case DatasetKind::kLowerBoundFamily:
      break;
  }
  return absl::InternalError("unhandled dataset kind");
}

absl::StatusOr<MseReport> EstimateMse(const BoundedDataset& dataset,
                                      Mechanism mechanism,
                                      const PrivacyBudget& epsilon,
                                      int64_t trials, uint64_t seed,
                                      const RunOptions& options) {
  DPMEAN_RETURN_IF_ERROR(ValidateTrials(trials));
  DPMEAN_ASSIGN_OR_RETURN(const double mean, TrueMean(dataset));
  DPMEAN_ASSIGN_OR_RETURN(
      const NoiseScales scales,
      MechanismNoiseScales(mechanism, dataset.lower(), dataset.upper(),
                           epsilon));
  const AggregateVector exact = ComputeAggregates(dataset, mechanism);
  const double lower = dataset.lower();
  const double upper = dataset.upper();
  const NoiseSampler& sampler =
      options.sampler ? options.sampler : NoiseSampler(SampleNoise);

  const Moments moments =
      RunTrials(trials, seed, options.workers, [&](StreamCursor& cursor) {
        const NoisePair noise = sampler(scales, cursor);
        const double error =
            ReleaseMean(exact, lower, upper, mechanism, noise).value - mean;
        return error * error;
      });

  MseReport report;
  report.mechanism = mechanism;
  report.epsilon = epsilon.epsilon();
  report.dataset_spec = {.kind = DatasetKind::kExplicit,
                         .size = dataset.size(),
                         .target_mean = mean,
                         .lower = lower,
                         .upper = upper,
                         .family_k = std::nullopt};
  report.n = dataset.size();
  report.mse = moments.mean;
  const double n = static_cast<double>(report.n);
  report.normalized_mse = n * n * report.mse;
  report.std_error = StdError(moments);
  report.trials = trials;
  report.seed = seed;
  return report;
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  DPMEAN_RETURN_IF_ERROR(ValidateTrials(config.trials));
  if (config.mechanisms.empty() || config.epsilons.empty() ||
      config.dataset_specs.empty()) {
    return absl::InvalidArgumentError(
        "experiment needs at least one mechanism, epsilon and dataset");
  }
  for (double eps : config.epsilons) {
    DPMEAN_RETURN_IF_ERROR(PrivacyBudget::Create(eps).status());
  }
  if (config.workers < 1) {
    return absl::InvalidArgumentError("workers must be at least 1");
  }
  return absl::OkStatus();
}

absl::Status Sweep(const ExperimentConfig& config,
                   const std::function<absl::Status(const MseReport&)>& sink) {
  DPMEAN_RETURN_IF_ERROR(ValidateConfig(config));
  RunOptions options;
  options.workers = config.workers;
  for (Mechanism mechanism : config.mechanisms) {
    for (double eps : config.epsilons) {
      const PrivacyBudget epsilon = *PrivacyBudget::Create(eps);
      for (const DatasetSpec& spec : config.dataset_specs) {
        auto with_context = [&](const absl::Status& status) {
          return absl::Status(status.code(),
                              absl::StrFormat("%s: %s",
                                              DescribeCell(mechanism, eps, spec),
                                              status.message()));
        };
        absl::StatusOr<BoundedDataset> dataset = GenerateDataset(spec);
        if (!dataset.ok()) return with_context(dataset.status());
        absl::StatusOr<MseReport> report = EstimateMse(
            *dataset, mechanism, epsilon, config.trials, config.seed, options);
        if (!report.ok()) return with_context(report.status());
        report->dataset_spec = spec;
        DPMEAN_RETURN_IF_ERROR(sink(*report));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<MseReport>> Sweep(const ExperimentConfig& config) {
  std::vector<MseReport> reports;
  DPMEAN_RETURN_IF_ERROR(Sweep(config, [&](const MseReport& report) {
    reports.push_back(report);
    return absl::OkStatus();
  }));
  return reports;
}

std::vector<double> PresetEpsilons() { return {0.1, 0.2, 0.5, 1.0, 2.0}; }

std::vector<double> PresetMeans() {
  return {0.5, 0.25, 0.1, 0.02, 0.005, 0.002};
}

absl::StatusOr<ExperimentConfig> FigurePreset(std::string_view name,
                                              uint64_t seed, int64_t trials) {
  ExperimentConfig config;
  config.seed = seed;
  config.trials = trials;
  if (name == "fig2a") {
    config.mechanisms = {Mechanism::kTransformed};
    config.epsilons = PresetEpsilons();
  } else if (name == "fig2b") {
    config.mechanisms = {Mechanism::kTransformed};
    config.epsilons = {0.5};
  } else if (name == "fig2c") {
    config.mechanisms = {Mechanism::kShifted, Mechanism::kTransformed};
    config.epsilons = PresetEpsilons();
  } else {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unknown preset '%s'; expected fig2a, fig2b or fig2c", std::string(name)));
  }
  for (double mean : PresetMeans()) {
    config.dataset_specs.push_back({.kind = DatasetKind::kTwoPoint,
                                    .size = kPresetDatasetSize,
                                    .target_mean = mean,
                                    .lower = 0.0,
                                    .upper = 1.0,
                                    .family_k = std::nullopt});
  }
  DPMEAN_RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

int64_t PresetFamilySize(int64_t n, double epsilon) {
  return static_cast<int64_t>(
      std::ceil(std::cbrt(static_cast<double>(n) / epsilon) / 2.0));
}

absl::StatusOr<FamilyWorstCase> WorstCaseOverFamily(
    Mechanism mechanism, const PrivacyBudget& epsilon, int64_t n, int64_t k,
    int64_t trials, uint64_t seed, const RunOptions& options) {
  DPMEAN_ASSIGN_OR_RETURN(
      const NoiseScales scales,
      MechanismNoiseScales(mechanism, 0.0, 1.0, epsilon));
  const NoiseSampler& sampler =
      options.sampler ? options.sampler : NoiseSampler(SampleNoise);
  const double zeros = static_cast<double>(n);
  return ScoreFamily(
      epsilon, n, k, trials, [&](int64_t i) -> absl::StatusOr<double> {
        DPMEAN_ASSIGN_OR_RETURN(
            const BoundedDataset dataset,
            GenerateDataset({.kind = DatasetKind::kLowerBoundFamily,
                             .size = n,
                             .lower = 0.0,
                             .upper = 1.0,
                             .family_k = i}));
        const AggregateVector exact = ComputeAggregates(dataset, mechanism);
        const double count = static_cast<double>(i);
        return RunTrials(trials, seed, options.workers,
                         [&](StreamCursor& cursor) {
                           const double mean =
                               ReleaseMean(exact, 0.0, 1.0, mechanism,
                                           sampler(scales, cursor))
                                   .value;
                           const double error = zeros * mean - count;
                           return error * error;
                         })
            .mean;
      });
}

absl::StatusOr<FamilyWorstCase> GeometricWorstCaseOverFamily(
    const PrivacyBudget& epsilon, int64_t n, int64_t k, int64_t trials,
    uint64_t seed, int workers) {
  DPMEAN_ASSIGN_OR_RETURN(const GeometricParams params,
                          GeometricParams::FromEpsilon(epsilon.epsilon()));
  return ScoreFamily(
      epsilon, n, k, trials, [&](int64_t i) -> absl::StatusOr<double> {
        const double count = static_cast<double>(i);
        return RunTrials(trials, seed, workers,
                         [&](StreamCursor& cursor) {
                           const double released =
                               count + static_cast<double>(
                                           SampleTwoSidedGeometric(cursor,
                                                                   params));
                           const double error = released - count;
                           return error * error;
                         })
            .mean;
      });
}

}  // namespace dpmean
