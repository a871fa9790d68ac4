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

#include "dpmean/bounds.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpmean/status_macros.h"

namespace dpmean {
namespace {

absl::Status ValidateRiskParams(double epsilon, double lower, double upper) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bounds must satisfy lower < upper, got [%g, %g]", lower, upper));
  }
  return absl::OkStatus();
}

absl::StatusOr<RiskReport> LeadingRisk(NeighborModel model, double factor,
                                       std::string formula_id, double epsilon,
                                       double lower, double upper) {
  DPMEAN_RETURN_IF_ERROR(ValidateRiskParams(epsilon, lower, upper));
  const double w = upper - lower;
  RiskReport report;
  report.model = model;
  report.leading_term = factor * w * w / (epsilon * epsilon);
  report.formula_id = std::move(formula_id);
  return report;
}

absl::StatusOr<double> PerDatasetBound(double constant_weight,
                                       double offset_weight, int64_t n,
                                       double mean, double lower, double upper,
                                       double epsilon) {
  DPMEAN_RETURN_IF_ERROR(ValidateRiskParams(epsilon, lower, upper));
  if (n < 1) {
    return absl::FailedPreconditionError("dataset size must be at least 1");
  }
  if (!(mean >= lower && mean <= upper)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "mean %g lies outside [%g, %g]", mean, lower, upper));
  }
  const double w = upper - lower;
  const double offset = mean - 0.5 * (lower + upper);
  const double nd = static_cast<double>(n);
  return (constant_weight * w * w + offset_weight * offset * offset) /
         (nd * nd * epsilon * epsilon);
}

// Pr(Z < -t) for Z ~ Lap(scale), t >= 0.
double LaplaceLowerTail(double t, double scale) {
  return 0.5 * std::exp(-t / scale);
}

}  // namespace

std::string_view NeighborModelName(NeighborModel model) {
  return model == NeighborModel::kSwap ? "swap" : "add_remove";
}

absl::StatusOr<RiskReport> SwapMinmaxLeading(double epsilon, double lower,
                                             double upper) {
  return LeadingRisk(NeighborModel::kSwap, 2.0, "swap_laplace_minmax", epsilon,
                     lower, upper);
}

absl::StatusOr<RiskReport> AddRemoveMinmaxLeading(double epsilon, double lower,
                                                  double upper) {
  return LeadingRisk(NeighborModel::kAddRemove, 2.0,
                     "add_remove_transformed_upper", epsilon, lower, upper);
}

absl::StatusOr<RiskReport> LowerBoundLeading(double epsilon, double lower,
                                             double upper) {
  return LeadingRisk(NeighborModel::kAddRemove, 2.0, "add_remove_lower",
                     epsilon, lower, upper);
}

absl::StatusOr<RiskReport> ShiftedMinmaxLeading(double epsilon, double lower,
                                                double upper) {
  return LeadingRisk(NeighborModel::kAddRemove, 4.0,
                     "add_remove_shifted_upper", epsilon, lower, upper);
}

absl::StatusOr<double> ShiftedMseBoundLeading(int64_t n, double mean,
                                              double lower, double upper,
                                              double epsilon) {
  return PerDatasetBound(2.0, 8.0, n, mean, lower, upper, epsilon);
}

absl::StatusOr<double> TransformedMseBoundLeading(int64_t n, double mean,
                                                  double lower, double upper,
                                                  double epsilon) {
  return PerDatasetBound(1.0, 4.0, n, mean, lower, upper, epsilon);
}

absl::StatusOr<double> ShiftedMseBoundLeading(const BoundedDataset& dataset,
                                              const PrivacyBudget& epsilon) {
  DPMEAN_ASSIGN_OR_RETURN(const double mean, TrueMean(dataset));
  return ShiftedMseBoundLeading(dataset.size(), mean, dataset.lower(),
                                dataset.upper(), epsilon.epsilon());
}

absl::StatusOr<double> TransformedMseBoundLeading(const BoundedDataset& dataset,
                                                  const PrivacyBudget& epsilon) {
  DPMEAN_ASSIGN_OR_RETURN(const double mean, TrueMean(dataset));
  return TransformedMseBoundLeading(dataset.size(), mean, dataset.lower(),
                                    dataset.upper(), epsilon.epsilon());
}

absl::StatusOr<RatioErrorTerms> MakeRatioErrorTerms(double a, double b, double M,
                                            double scale_a, double scale_b,
                                            const NoiseMoments& moments) {
  if (!(b > 0.0) || !(M > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need b > 0 and M > 0, got b=%g M=%g", b, M));
  }
  if (std::fabs(a) / b > M * (1.0 + 1e-12)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "|a|/b = %g exceeds M = %g", std::fabs(a) / b, M));
  }
  RatioErrorTerms terms;
  terms.a = a;
  terms.b = b;
  terms.M = M;
  terms.scale_a = scale_a;
  terms.scale_b = scale_b;
  terms.moments = moments;
  const double b2 = b * b;
  const double b4 = b2 * b2;
  terms.c_sq = moments.za_sq / b2 - 2.0 * a * moments.za_zb / (b2 * b) +
               a * a * moments.zb_sq / b4;
  // Cancellation can leave a tiny negative residue when C is nearly zero.
  terms.c_sq = std::max(terms.c_sq, 0.0);
  terms.f_sq_bound =
      (8.0 * M * M * moments.zb_fourth + 8.0 * moments.za_sq_zb_sq) / b4;
  terms.tail = 4.0 * M * M * moments.zb_tail;
  return terms;
}

absl::StatusOr<RatioErrorTerms> IndependentLaplaceTerms(double a, double b,
                                                    double M, double scale_a,
                                                    double scale_b) {
  if (!(scale_a > 0.0) || !(scale_b > 0.0)) {
    return absl::InvalidArgumentError("Laplace scales must be positive");
  }
  const double sa2 = scale_a * scale_a;
  const double sb2 = scale_b * scale_b;
  NoiseMoments moments;
  moments.za_sq = 2.0 * sa2;
  moments.zb_sq = 2.0 * sb2;
  moments.za_zb = 0.0;
  moments.zb_fourth = 24.0 * sb2 * sb2;
  moments.za_sq_zb_sq = 4.0 * sa2 * sb2;
  moments.zb_tail = LaplaceLowerTail(0.5 * b, scale_b);
  return MakeRatioErrorTerms(a, b, M, scale_a, scale_b, moments);
}

absl::StatusOr<RatioErrorTerms> SharedNoiseTerms(double a, double b, double M,
                                             double scale) {
  if (!(scale > 0.0)) {
    return absl::InvalidArgumentError("Laplace scale must be positive");
  }
  const double s2 = scale * scale;
  const double t = 0.5 * b / scale;
  NoiseMoments moments;
  moments.za_sq = 2.0 * s2;
  moments.zb_sq = 4.0 * s2;
  moments.za_zb = 2.0 * s2;
  moments.zb_fourth = 72.0 * s2 * s2;
  moments.za_sq_zb_sq = 28.0 * s2 * s2;
  moments.zb_tail = 0.25 * (2.0 + t) * std::exp(-t);
  return MakeRatioErrorTerms(a, b, M, scale, scale, moments);
}

RatioErrorBound RatioErrorUpperBound(const RatioErrorTerms& terms) {
  RatioErrorBound bound;
  bound.c_sq = terms.c_sq;
  bound.f_sq_bound = terms.f_sq_bound;
  bound.cross = 2.0 * std::sqrt(terms.c_sq * terms.f_sq_bound);
  bound.tail = terms.tail;
  bound.total = bound.c_sq + bound.f_sq_bound + bound.cross + bound.tail;
  return bound;
}

absl::StatusOr<RatioErrorBound> MechanismRatioErrorBound(const AggregateVector& exact,
                                                 double lower, double upper,
                                                 const PrivacyBudget& epsilon,
                                                 Mechanism mechanism) {
  DPMEAN_RETURN_IF_ERROR(ValidateRiskParams(epsilon.epsilon(), lower, upper));
  const double eps = epsilon.epsilon();
  const double w = upper - lower;
  switch (mechanism) {
    case Mechanism::kIndependent: {
      const double w_abs = std::max(std::fabs(lower), std::fabs(upper));
      DPMEAN_ASSIGN_OR_RETURN(
          const RatioErrorTerms terms,
          IndependentLaplaceTerms(exact.first, exact.second, w_abs,
                                  2.0 * w_abs / eps, 2.0 / eps));
      return RatioErrorUpperBound(terms);
    }
    case Mechanism::kShifted: {
      DPMEAN_ASSIGN_OR_RETURN(
          const RatioErrorTerms terms,
          IndependentLaplaceTerms(exact.first, exact.second, 0.5 * w, w / eps,
                                  2.0 / eps));
      return RatioErrorUpperBound(terms);
    }
    case Mechanism::kTransformed: {
      DPMEAN_ASSIGN_OR_RETURN(
          const RatioErrorTerms terms,
          SharedNoiseTerms(exact.first, exact.first + exact.second, 1.0,
                           1.0 / eps));
      RatioErrorBound bound = RatioErrorUpperBound(terms);
      const double w2 = w * w;
      bound.c_sq *= w2;
      bound.f_sq_bound *= w2;
      bound.cross *= w2;
      bound.tail *= w2;
      bound.total *= w2;
      return bound;
    }
  }
  return absl::InternalError("unhandled mechanism");
}

absl::StatusOr<RatioErrorBound> MechanismRatioErrorBound(const BoundedDataset& dataset,
                                                 const PrivacyBudget& epsilon,
                                                 Mechanism mechanism) {
  if (dataset.empty()) {
    return absl::FailedPreconditionError("dataset must be non-empty");
  }
  return MechanismRatioErrorBound(ComputeAggregates(dataset, mechanism),
                              dataset.lower(), dataset.upper(), epsilon,
                              mechanism);
}

absl::StatusOr<double> GeometricCountVariance(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be positive and finite, got %g", epsilon));
  }
  const double alpha = std::exp(-epsilon);
  const double one_minus_alpha = -std::expm1(-epsilon);
  return 2.0 * alpha / (one_minus_alpha * one_minus_alpha);
}

}  // namespace dpmean
