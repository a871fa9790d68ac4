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

#ifndef DPMEAN_DATASET_H_
#define DPMEAN_DATASET_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace dpmean {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double Result() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double SumCompensated(std::span<const double> values);

// The privacy parameter epsilon. Always positive and finite.
class PrivacyBudget {
 public:
  static absl::StatusOr<PrivacyBudget> Create(double epsilon);

  double epsilon() const { return epsilon_; }

 private:
  explicit PrivacyBudget(double epsilon) : epsilon_(epsilon) {}
  double epsilon_;
};

// A multiset of reals together with public bounds [lower, upper] that every
// value satisfies. Bounds are part of the mechanism's public configuration and
// are never inferred from the data.
class BoundedDataset {
 public:
  // Fails if lower >= upper, a bound is not finite, or any value is NaN or
  // lies outside [lower, upper]. The dataset may be empty.
  static absl::StatusOr<BoundedDataset> Create(std::vector<double> values,
                                               double lower, double upper);

  std::span<const double> values() const { return values_; }
  int64_t size() const { return static_cast<int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double width() const { return upper_ - lower_; }
  double midpoint() const { return 0.5 * (lower_ + upper_); }

 private:
  BoundedDataset(std::vector<double> values, double lower, double upper)
      : values_(std::move(values)), lower_(lower), upper_(upper) {}

  std::vector<double> values_;
  double lower_;
  double upper_;
};

// Exact (compensated) sample mean. Fails on an empty dataset.
absl::StatusOr<double> TrueMean(const BoundedDataset& dataset);

}  // namespace dpmean

#endif  // DPMEAN_DATASET_H_
