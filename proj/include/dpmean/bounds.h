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

// Closed-form error quantities for private mean estimation.
//
// Min-max risks are reported in normalized units (|D|^2 * MSE) as the leading
// term only. The (1 +- o(1)) factors vanish as the minimum dataset size
// n0 -> infinity and eps -> 0 with n0 * eps -> infinity; no finite-n remainder
// is folded into any number here, and every RiskReport carries
// `asymptotic = true` to say so.

#ifndef DPMEAN_BOUNDS_H_
#define DPMEAN_BOUNDS_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "dpmean/dataset.h"
#include "dpmean/mechanisms.h"

namespace dpmean {

enum class NeighborModel { kSwap, kAddRemove };

std::string_view NeighborModelName(NeighborModel model);

struct RiskReport {
  NeighborModel model = NeighborModel::kAddRemove;
  // Normalized MSE, |D|^2 * E[(mu^ - mu)^2].
  double leading_term = 0.0;
  std::string formula_id;
  bool asymptotic = true;
};

// 2 (u - l)^2 / eps^2, attained in the swap model by the Laplace mechanism.
absl::StatusOr<RiskReport> SwapMinmaxLeading(double epsilon, double lower,
                                             double upper);
// 2 (u - l)^2 / eps^2, the add-remove upper bound of the transformed
// mechanism.
absl::StatusOr<RiskReport> AddRemoveMinmaxLeading(double epsilon, double lower,
                                                  double upper);
// 2 (u - l)^2 / eps^2, the matching add-remove lower bound.
absl::StatusOr<RiskReport> LowerBoundLeading(double epsilon, double lower,
                                             double upper);
// 4 (u - l)^2 / eps^2, the worst case of the shifted mechanism's bound.
absl::StatusOr<RiskReport> ShiftedMinmaxLeading(double epsilon, double lower,
                                                double upper);

// Per-dataset leading terms in MSE units (not normalized). With m = (l+u)/2:
//   shifted:      (2 (u - l)^2 + 8 (mu - m)^2) / (n^2 eps^2)
//   transformed:  ((u - l)^2 + 4 (mu - m)^2) / (n^2 eps^2)
absl::StatusOr<double> ShiftedMseBoundLeading(const BoundedDataset& dataset,
                                              const PrivacyBudget& epsilon);
absl::StatusOr<double> TransformedMseBoundLeading(const BoundedDataset& dataset,
                                                  const PrivacyBudget& epsilon);
// Same formulas from summary statistics.
absl::StatusOr<double> ShiftedMseBoundLeading(int64_t n, double mean,
                                              double lower, double upper,
                                              double epsilon);
absl::StatusOr<double> TransformedMseBoundLeading(int64_t n, double mean,
                                                  double lower, double upper,
                                                  double epsilon);

// Moments of the noise pair (Z_a, Z_b) entering a clipped ratio
// Clip((a + Z_a) / (b + Z_b)).
struct NoiseMoments {
  double za_sq = 0.0;        // E[Z_a^2]
  double zb_sq = 0.0;        // E[Z_b^2]
  double za_zb = 0.0;        // E[Z_a Z_b]
  double zb_fourth = 0.0;    // E[Z_b^4]
  double za_sq_zb_sq = 0.0;  // E[Z_a^2 Z_b^2]
  double zb_tail = 0.0;      // Pr(Z_b < -b/2)
};

// Decomposition of the clipped-ratio error for a/b with |a|/b <= M:
//   C = Z_a/b - a Z_b/b^2
//   F = |2 M Z_b^2 / b^2| + |2 Z_a Z_b / b^2|
//   E[(Clip((a+Z_a)/(b+Z_b)) - a/b)^2]
//       <= E[C^2] + E[F^2] + 2 sqrt(E[C^2] E[F^2]) + 4 M^2 Pr(Z_b < -b/2).
// E[F^2] is replaced by its bound (8 M^2 E[Z_b^4] + 8 E[Z_a^2 Z_b^2]) / b^4.
struct RatioErrorTerms {
  double a = 0.0;
  double b = 0.0;
  double M = 0.0;
  // Laplace scales of Z_a and Z_b. When Z_b is a sum of two Laplace
  // variables (SharedNoiseTerms), scale_b is the per-variable scale.
  double scale_a = 0.0;
  double scale_b = 0.0;
  NoiseMoments moments;
  double c_sq = 0.0;        // E[C^2]
  double f_sq_bound = 0.0;  // bound on E[F^2]
  double tail = 0.0;        // 4 M^2 Pr(Z_b < -b/2)
};

struct RatioErrorBound {
  double c_sq = 0.0;
  double f_sq_bound = 0.0;
  double cross = 0.0;  // 2 sqrt(E[C^2] E[F^2])
  double tail = 0.0;
  double total = 0.0;
};

// Fills c_sq, f_sq_bound and tail from a, b, M and `moments`. Fails unless
// b > 0, M > 0 and |a|/b <= M (up to rounding).
absl::StatusOr<RatioErrorTerms> MakeRatioErrorTerms(double a, double b, double M,
                                            double scale_a, double scale_b,
                                            const NoiseMoments& moments);

// Z_a ~ Lap(scale_a) and Z_b ~ Lap(scale_b) independent:
// E[Z^2] = 2 s^2, E[Z^4] = 24 s^4, Pr(Z_b < -b/2) = exp(-b / (2 s_b)) / 2.
absl::StatusOr<RatioErrorTerms> IndependentLaplaceTerms(double a, double b,
                                                    double M, double scale_a,
                                                    double scale_b);

// Z_a = Z1 and Z_b = Z1 + Z2 with Z1, Z2 ~ Lap(scale) independent:
// E[Z_b^2] = 4 s^2, E[Z_a Z_b] = 2 s^2, E[Z_b^4] = 72 s^4,
// E[Z_a^2 Z_b^2] = 28 s^4 and Pr(Z_b < -t) = (2 + t/s) exp(-t/s) / 4.
absl::StatusOr<RatioErrorTerms> SharedNoiseTerms(double a, double b, double M,
                                             double scale);

RatioErrorBound RatioErrorUpperBound(const RatioErrorTerms& terms);

// The decomposition instantiated for one mechanism on one dataset, in the
// dataset's own MSE units (the transformed mechanism's normalized bound is
// multiplied by (u - l)^2).
absl::StatusOr<RatioErrorBound> MechanismRatioErrorBound(const BoundedDataset& dataset,
                                                 const PrivacyBudget& epsilon,
                                                 Mechanism mechanism);

// Same, from the exact aggregates that the mechanism privatizes.
absl::StatusOr<RatioErrorBound> MechanismRatioErrorBound(const AggregateVector& exact,
                                                 double lower, double upper,
                                                 const PrivacyBudget& epsilon,
                                                 Mechanism mechanism);

// 2 alpha / (1 - alpha)^2 with alpha = exp(-eps): the variance of two-sided
// geometric noise, hence the MSE of the unbiased geometric count release.
// Tends to 2/eps^2 as eps -> 0.
absl::StatusOr<double> GeometricCountVariance(double epsilon);

}  // namespace dpmean

#endif  // DPMEAN_BOUNDS_H_
