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

#include "dpmean/dataset.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpmean {

double SumCompensated(std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum.Add(v);
  return sum.Result();
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  return PrivacyBudget(epsilon);
}

absl::StatusOr<BoundedDataset> BoundedDataset::Create(
    std::vector<double> values, double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    return absl::InvalidArgumentError("dataset bounds must be finite");
  }
  if (!(lower < upper)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "lower bound %g must be strictly less than upper bound %g", lower,
        upper));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= lower && v <= upper)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "value %g at index %d lies outside [%g, %g]", v, i, lower, upper));
    }
  }
  return BoundedDataset(std::move(values), lower, upper);
}

absl::StatusOr<double> TrueMean(const BoundedDataset& dataset) {
  if (dataset.empty()) {
    return absl::FailedPreconditionError("mean of an empty dataset");
  }
  return SumCompensated(dataset.values()) / static_cast<double>(dataset.size());
}

}  // namespace dpmean
