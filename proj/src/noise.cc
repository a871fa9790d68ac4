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

#include "dpmean/noise.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpmean {
namespace {

int64_t OneSidedGeometric(double u, double log_alpha) {
  // log(u) < 0 and log_alpha < 0, so the quotient is non-negative.
  const double g = std::floor(std::log(u) / log_alpha);
  constexpr double kMax = 9.0e18;
  return g >= kMax ? static_cast<int64_t>(kMax) : static_cast<int64_t>(g);
}

}  // namespace

absl::StatusOr<LaplaceParams> LaplaceParams::Create(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Laplace scale must be positive and finite, got %g", scale));
  }
  return LaplaceParams(scale);
}

absl::StatusOr<GeometricParams> GeometricParams::Create(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "geometric alpha must lie in (0, 1), got %g", alpha));
  }
  return GeometricParams(alpha);
}

absl::StatusOr<GeometricParams> GeometricParams::FromEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  return Create(std::exp(-epsilon));
}

double LaplaceFromUniform(double u, const LaplaceParams& params) {
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -params.scale() * sign * std::log1p(-2.0 * std::fabs(centered));
}

double SampleLaplace(StreamCursor& cursor, const LaplaceParams& params) {
  return LaplaceFromUniform(cursor.NextUniform(), params);
}

int64_t SampleTwoSidedGeometric(StreamCursor& cursor,
                                const GeometricParams& params) {
  const double log_alpha = std::log(params.alpha());
  const int64_t g1 = OneSidedGeometric(cursor.NextUniform(), log_alpha);
  const int64_t g2 = OneSidedGeometric(cursor.NextUniform(), log_alpha);
  return g1 - g2;
}

}  // namespace dpmean
