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

#ifndef DPMEAN_NOISE_H_
#define DPMEAN_NOISE_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "dpmean/random_stream.h"

namespace dpmean {

// Scale b of a zero-centred Laplace distribution, density exp(-|x|/b) / 2b.
class LaplaceParams {
 public:
  // Fails unless `scale` is positive and finite.
  static absl::StatusOr<LaplaceParams> Create(double scale);

  double scale() const { return scale_; }
  double Variance() const { return 2.0 * scale_ * scale_; }

 private:
  explicit LaplaceParams(double scale) : scale_(scale) {}
  double scale_;
};

// Ratio alpha = exp(-epsilon) of the two-sided geometric distribution
// Pr[Z = k] = (1 - alpha) / (1 + alpha) * alpha^|k|.
class GeometricParams {
 public:
  // Fails unless 0 < alpha < 1.
  static absl::StatusOr<GeometricParams> Create(double alpha);
  static absl::StatusOr<GeometricParams> FromEpsilon(double epsilon);

  double alpha() const { return alpha_; }

 private:
  explicit GeometricParams(double alpha) : alpha_(alpha) {}
  double alpha_;
};

// Inverse CDF of the Laplace distribution evaluated at u in (0, 1):
//   x = -b * sign(u - 1/2) * ln(1 - 2|u - 1/2|).
double LaplaceFromUniform(double u, const LaplaceParams& params);

// One uniform draw, mapped through LaplaceFromUniform.
double SampleLaplace(StreamCursor& cursor, const LaplaceParams& params);

// Two-sided geometric draw, computed as G1 - G2 for independent one-sided
// geometric variables with Pr[G >= k] = alpha^k. Each G uses one uniform draw
// through the inverse CDF G = floor(ln(u) / ln(alpha)), G1 first.
int64_t SampleTwoSidedGeometric(StreamCursor& cursor,
                                const GeometricParams& params);

}  // namespace dpmean

#endif  // DPMEAN_NOISE_H_
