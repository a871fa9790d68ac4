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

// Monte-Carlo estimation of mechanism error.
//
// Trial t of a run seeded with `seed` draws its noise from
// DeriveStream(seed, t), so results do not depend on how trials are spread
// over workers. Trials are grouped into fixed blocks of kTrialsPerBlock; each
// block accumulates its squared errors sequentially and the block summaries
// are merged by a fixed pairwise tree. Any worker count therefore gives
// bit-identical reports.
//
// Every sweep cell uses the configured seed, so cells that differ only in
// mechanism or dataset see the same uniform draws (common random numbers).

#ifndef DPMEAN_HARNESS_H_
#define DPMEAN_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpmean/dataset.h"
#include "dpmean/mechanisms.h"

namespace dpmean {

inline constexpr int64_t kTrialsPerBlock = 1024;

enum class DatasetKind {
  kConstant,
  kTwoPoint,
  kLowerBoundFamily,
  // A dataset supplied directly rather than generated.
  kExplicit,
};

std::string_view DatasetKindName(DatasetKind kind);
absl::StatusOr<DatasetKind> ParseDatasetKind(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kTwoPoint;
  int64_t size = 1000;
  double target_mean = 0.5;
  double lower = 0.0;
  double upper = 1.0;
  // kLowerBoundFamily only: the number of values at `upper` added to `size`
  // values at `lower`.
  std::optional<int64_t> family_k;
};

// constant:    `size` copies of target_mean.
// two_point:   k = round(size * (target_mean - l) / (u - l)) copies of u
//              followed by size - k copies of l.
// lower_bound_family: family_k copies of u followed by `size` copies of l.
absl::StatusOr<BoundedDataset> GenerateDataset(const DatasetSpec& spec);

struct MseReport {
  Mechanism mechanism = Mechanism::kTransformed;
  double epsilon = 0.0;
  DatasetSpec dataset_spec;
  // Number of values in the dataset actually used.
  int64_t n = 0;
  double mse = 0.0;
  // n^2 * mse.
  double normalized_mse = 0.0;
  // Sample standard deviation of the squared errors over sqrt(trials).
  double std_error = 0.0;
  int64_t trials = 0;
  uint64_t seed = 0;
};

struct RunOptions {
  int workers = 1;
  // Empty means Laplace noise via SampleNoise.
  NoiseSampler sampler;
};

absl::StatusOr<MseReport> EstimateMse(const BoundedDataset& dataset,
                                      Mechanism mechanism,
                                      const PrivacyBudget& epsilon,
                                      int64_t trials, uint64_t seed,
                                      const RunOptions& options = {});

struct ExperimentConfig {
  std::vector<Mechanism> mechanisms;
  std::vector<double> epsilons;
  std::vector<DatasetSpec> dataset_specs;
  int64_t trials = 10000;
  uint64_t seed = 0;
  int workers = 1;
};

absl::Status ValidateConfig(const ExperimentConfig& config);

// Runs every (mechanism, epsilon, dataset_spec) cell in that nesting order
// and hands each report to `sink` as soon as it is complete.
absl::Status Sweep(const ExperimentConfig& config,
                   const std::function<absl::Status(const MseReport&)>& sink);
absl::StatusOr<std::vector<MseReport>> Sweep(const ExperimentConfig& config);

// Preset grids, always on [0, 1] with n = 1000 two-point datasets.
inline constexpr int64_t kPresetDatasetSize = 1000;
std::vector<double> PresetEpsilons();
std::vector<double> PresetMeans();

// "fig2a": transformed, all preset epsilons and means.
// "fig2b": transformed, eps = 0.5, all preset means.
// "fig2c": shifted and transformed, all preset epsilons and means.
absl::StatusOr<ExperimentConfig> FigurePreset(std::string_view name,
                                              uint64_t seed, int64_t trials);

// ceil((n / eps)^(1/3) / 2).
int64_t PresetFamilySize(int64_t n, double epsilon);

struct FamilyWorstCase {
  // max over members i = 1..k of E[(n * mu^(D_i) - i)^2].
  double worst_mse = 0.0;
  int64_t worst_member = 0;
  std::vector<double> member_mse;
  // 2 / eps^2.
  double benchmark = 0.0;
  double ratio = 0.0;
};

// D_i holds i ones and n zeros on [0, 1]. The mean estimate is turned into a
// count estimate n * mu^ and scored against i.
absl::StatusOr<FamilyWorstCase> WorstCaseOverFamily(
    Mechanism mechanism, const PrivacyBudget& epsilon, int64_t n, int64_t k,
    int64_t trials, uint64_t seed, const RunOptions& options = {});

// The same family scored for the direct count release i + Z with
// two-sided geometric Z at alpha = exp(-eps).
absl::StatusOr<FamilyWorstCase> GeometricWorstCaseOverFamily(
    const PrivacyBudget& epsilon, int64_t n, int64_t k, int64_t trials,
    uint64_t seed, int workers = 1);

}  // namespace dpmean

#endif  // DPMEAN_HARNESS_H_
