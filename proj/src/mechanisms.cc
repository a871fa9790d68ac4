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

#include "dpmean/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpmean/status_macros.h"

namespace dpmean {
namespace {

// Clip without the lo <= hi check.
double ClipToInterval(double x, double lo, double hi) {
  if (std::isnan(x)) return 0.5 * (lo + hi);
  return std::max(lo, std::min(x, hi));
}

absl::Status CheckNonEmpty(const BoundedDataset& dataset) {
  if (dataset.empty()) {
    return absl::FailedPreconditionError(
        "cannot estimate the mean of an empty dataset");
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kIndependent:
      return "independent";
    case Mechanism::kShifted:
      return "shifted";
    case Mechanism::kTransformed:
      return "transformed";
  }
  return "unknown";
}

absl::StatusOr<Mechanism> ParseMechanism(std::string_view name) {
  for (Mechanism m : {Mechanism::kIndependent, Mechanism::kShifted,
                      Mechanism::kTransformed}) {
    if (MechanismName(m) == name) return m;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown mechanism '%s'; expected independent, shifted or transformed",
      std::string(name)));
}

absl::StatusOr<double> Clip(double x, double lo, double hi) {
  if (!(lo <= hi)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("clip interval [%g, %g] is empty", lo, hi));
  }
  return ClipToInterval(x, lo, hi);
}

double NoisyRatio(double numerator, double denominator) {
  if (denominator == 0.0) {
    if (numerator > 0.0) return std::numeric_limits<double>::infinity();
    if (numerator < 0.0) return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return numerator / denominator;
}

AggregateKind AggregateKindFor(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kIndependent:
      return AggregateKind::kSumCount;
    case Mechanism::kShifted:
      return AggregateKind::kShiftedSumCount;
    case Mechanism::kTransformed:
      return AggregateKind::kTransformedPair;
  }
  return AggregateKind::kSumCount;
}

AggregateVector ComputeAggregates(const BoundedDataset& dataset,
                                  Mechanism mechanism) {
  const double count = static_cast<double>(dataset.size());
  CompensatedSum sum;
  switch (mechanism) {
    case Mechanism::kIndependent:
      for (double x : dataset.values()) sum.Add(x);
      return {sum.Result(), count, AggregateKind::kSumCount};
    case Mechanism::kShifted: {
      const double m = dataset.midpoint();
      for (double x : dataset.values()) sum.Add(x - m);
      return {sum.Result(), count, AggregateKind::kShiftedSumCount};
    }
    case Mechanism::kTransformed: {
      const double lower = dataset.lower();
      const double w = dataset.width();
      for (double x : dataset.values()) sum.Add((x - lower) / w);
      const double s1 = sum.Result();
      // s2 = sum of (1 - (x - l)/w), formed as count - s1 so that
      // s1 + s2 reproduces the count.
      return {s1, count - s1, AggregateKind::kTransformedPair};
    }
  }
  return {};
}

MeanEstimate ReleaseMean(const AggregateVector& exact, double lower,
                         double upper, Mechanism mechanism,
                         const NoisePair& noise) {
  MeanEstimate estimate;
  estimate.mechanism = mechanism;
  estimate.noisy_aggregates = {exact.first + noise.za, exact.second + noise.zb,
                               exact.kind};
  const double a = estimate.noisy_aggregates.first;
  const double b = estimate.noisy_aggregates.second;
  const double w = upper - lower;
  double value = 0.0;
  switch (mechanism) {
    case Mechanism::kIndependent:
      value = ClipToInterval(NoisyRatio(a, b), lower, upper);
      break;
    case Mechanism::kShifted: {
      const double m = 0.5 * (lower + upper);
      value = ClipToInterval(NoisyRatio(a, b), -0.5 * w, 0.5 * w) + m;
      break;
    }
    case Mechanism::kTransformed:
      value = w * ClipToInterval(NoisyRatio(a, a + b), 0.0, 1.0) + lower;
      break;
  }
  // Rounding in the affine maps above can step one ulp outside the bounds.
  estimate.value = std::clamp(value, lower, upper);
  return estimate;
}

absl::StatusOr<MeanEstimate> EstimateMean(const BoundedDataset& dataset,
                                          const PrivacyBudget& /*epsilon*/,
                                          Mechanism mechanism,
                                          const NoisePair& noise) {
  DPMEAN_RETURN_IF_ERROR(CheckNonEmpty(dataset));
  return ReleaseMean(ComputeAggregates(dataset, mechanism), dataset.lower(),
                     dataset.upper(), mechanism, noise);
}

absl::StatusOr<MeanEstimate> EstimateIndependent(const BoundedDataset& dataset,
                                                 const PrivacyBudget& epsilon,
                                                 const NoisePair& noise) {
  return EstimateMean(dataset, epsilon, Mechanism::kIndependent, noise);
}

absl::StatusOr<MeanEstimate> EstimateShifted(const BoundedDataset& dataset,
                                             const PrivacyBudget& epsilon,
                                             const NoisePair& noise) {
  return EstimateMean(dataset, epsilon, Mechanism::kShifted, noise);
}

absl::StatusOr<MeanEstimate> EstimateTransformed(const BoundedDataset& dataset,
                                                 const PrivacyBudget& epsilon,
                                                 const NoisePair& noise) {
  return EstimateMean(dataset, epsilon, Mechanism::kTransformed, noise);
}

absl::StatusOr<NoiseScales> MechanismNoiseScales(Mechanism mechanism,
                                                 double lower, double upper,
                                                 const PrivacyBudget& epsilon) {
  if (!(lower < upper)) {
    return absl::InvalidArgumentError("lower bound must be below upper bound");
  }
  const double eps = epsilon.epsilon();
  double first_scale = 0.0;
  double second_scale = 0.0;
  switch (mechanism) {
    case Mechanism::kIndependent:
      first_scale = 2.0 * std::max(std::fabs(lower), std::fabs(upper)) / eps;
      second_scale = 2.0 / eps;
      break;
    case Mechanism::kShifted:
      first_scale = (upper - lower) / eps;
      second_scale = 2.0 / eps;
      break;
    case Mechanism::kTransformed:
      first_scale = 1.0 / eps;
      second_scale = 1.0 / eps;
      break;
  }
  DPMEAN_ASSIGN_OR_RETURN(LaplaceParams first,
                          LaplaceParams::Create(first_scale));
  DPMEAN_ASSIGN_OR_RETURN(LaplaceParams second,
                          LaplaceParams::Create(second_scale));
  return NoiseScales{first, second};
}

NoisePair SampleNoise(const NoiseScales& scales, StreamCursor& cursor) {
  NoisePair noise;
  noise.za = SampleLaplace(cursor, scales.first);
  noise.zb = SampleLaplace(cursor, scales.second);
  return noise;
}

absl::StatusOr<MeanEstimate> RunMechanism(const BoundedDataset& dataset,
                                          const PrivacyBudget& epsilon,
                                          Mechanism mechanism,
                                          const RandomStream& stream) {
  DPMEAN_RETURN_IF_ERROR(CheckNonEmpty(dataset));
  DPMEAN_ASSIGN_OR_RETURN(
      NoiseScales scales,
      MechanismNoiseScales(mechanism, dataset.lower(), dataset.upper(),
                           epsilon));
  StreamCursor cursor(stream);
  const NoisePair noise = SampleNoise(scales, cursor);
  return EstimateMean(dataset, epsilon, mechanism, noise);
}

double AggregateLogDensity(const AggregateVector& center,
                           const NoiseScales& scales, double t1, double t2) {
  const double b1 = scales.first.scale();
  const double b2 = scales.second.scale();
  return -std::log(2.0 * b1) - std::fabs(t1 - center.first) / b1 -
         std::log(2.0 * b2) - std::fabs(t2 - center.second) / b2;
}

}  // namespace dpmean
