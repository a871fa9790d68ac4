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

// Private mean estimators under the add-remove neighbouring model.
//
// Each mechanism releases a two-dimensional aggregate of the data with
// independent Laplace noise on each coordinate and post-processes the noisy
// pair into a clipped ratio:
//
//   kIndependent  (sum, count), noise Lap(2 max(|l|,|u|)/eps) and Lap(2/eps),
//                 output Clip(s^/n^, [l, u]).
//   kShifted      (sum of x - m, count) with m = (l+u)/2, noise Lap(w/eps) and
//                 Lap(2/eps), output Clip(s^/n^, [-w/2, w/2]) + m.
//   kTransformed  (s1, s2) = (sum of (x-l)/w, count - s1), noise Lap(1/eps) on
//                 each, output w * Clip(s1^/(s1^ + s2^), [0, 1]) + l.
//
// with w = u - l. The Estimate* functions take the noise as an argument so
// that callers can inject exact values; RunMechanism is the only entry point
// that samples.
//
// Ratios with a zero denominator evaluate to sign(numerator) * infinity, and
// 0/0 (or any other NaN) clips to the midpoint of the clipping interval.
// Negative denominators are not floored; the raw ratio is clipped.

#ifndef DPMEAN_MECHANISMS_H_
#define DPMEAN_MECHANISMS_H_

#include <functional>
#include <string_view>

#include "absl/status/statusor.h"
#include "dpmean/dataset.h"
#include "dpmean/noise.h"
#include "dpmean/random_stream.h"

namespace dpmean {

enum class Mechanism { kIndependent, kShifted, kTransformed };

// "independent", "shifted" or "transformed".
std::string_view MechanismName(Mechanism mechanism);
absl::StatusOr<Mechanism> ParseMechanism(std::string_view name);

enum class AggregateKind { kSumCount, kShiftedSumCount, kTransformedPair };

// The statistic a mechanism privatizes. For kSumCount, `second` is the count;
// for kTransformedPair, first + second equals the count.
struct AggregateVector {
  double first = 0.0;
  double second = 0.0;
  AggregateKind kind = AggregateKind::kSumCount;
};

// Noise added to (first, second) of an AggregateVector.
struct NoisePair {
  double za = 0.0;
  double zb = 0.0;
};

struct MeanEstimate {
  double value = 0.0;
  Mechanism mechanism = Mechanism::kTransformed;
  AggregateVector noisy_aggregates;
};

// Laplace scales used for the two aggregate coordinates.
struct NoiseScales {
  LaplaceParams first;
  LaplaceParams second;
};

// max(lo, min(x, hi)). NaN maps to (lo + hi) / 2. Fails if lo > hi.
absl::StatusOr<double> Clip(double x, double lo, double hi);

// numerator / denominator, except that a zero denominator (of either sign)
// gives sign(numerator) * infinity, and NaN when the numerator is zero too.
double NoisyRatio(double numerator, double denominator);

AggregateKind AggregateKindFor(Mechanism mechanism);

// Exact aggregates of `dataset` for `mechanism`. Empty datasets give (0, 0).
AggregateVector ComputeAggregates(const BoundedDataset& dataset,
                                  Mechanism mechanism);

// Post-processing shared by all mechanisms: adds `noise` to `exact` and maps
// the noisy pair to a mean in [lower, upper].
MeanEstimate ReleaseMean(const AggregateVector& exact, double lower,
                         double upper, Mechanism mechanism,
                         const NoisePair& noise);

absl::StatusOr<MeanEstimate> EstimateIndependent(const BoundedDataset& dataset,
                                                 const PrivacyBudget& epsilon,
                                                 const NoisePair& noise);
absl::StatusOr<MeanEstimate> EstimateShifted(const BoundedDataset& dataset,
                                             const PrivacyBudget& epsilon,
                                             const NoisePair& noise);
absl::StatusOr<MeanEstimate> EstimateTransformed(const BoundedDataset& dataset,
                                                 const PrivacyBudget& epsilon,
                                                 const NoisePair& noise);
absl::StatusOr<MeanEstimate> EstimateMean(const BoundedDataset& dataset,
                                          const PrivacyBudget& epsilon,
                                          Mechanism mechanism,
                                          const NoisePair& noise);

absl::StatusOr<NoiseScales> MechanismNoiseScales(Mechanism mechanism,
                                                 double lower, double upper,
                                                 const PrivacyBudget& epsilon);

// Draws the first coordinate's noise, then the second's, one uniform each.
NoisePair SampleNoise(const NoiseScales& scales, StreamCursor& cursor);

// Source of noise pairs for repeated runs. Tests substitute deterministic
// doubles for the Laplace sampler.
using NoiseSampler =
    std::function<NoisePair(const NoiseScales& scales, StreamCursor& cursor)>;

// Samples mechanism-appropriate noise from `stream` and releases the mean.
absl::StatusOr<MeanEstimate> RunMechanism(const BoundedDataset& dataset,
                                          const PrivacyBudget& epsilon,
                                          Mechanism mechanism,
                                          const RandomStream& stream);

// Log-density at (t1, t2) of the privatized aggregate pair, i.e. of
// center + (Z1, Z2) with Zi ~ Lap(scales).
double AggregateLogDensity(const AggregateVector& center,
                           const NoiseScales& scales, double t1, double t2);

}  // namespace dpmean

#endif  // DPMEAN_MECHANISMS_H_
