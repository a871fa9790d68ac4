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

#include "dpmean/geometry.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpmean {
namespace {

double Cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double PolygonScale(const BallPolygon& polygon) {
  double scale = 0.0;
  for (const Point2& v : polygon.vertices) {
    scale = std::max({scale, std::fabs(v.x), std::fabs(v.y)});
  }
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

absl::StatusOr<Transform2x2> Transform2x2::Create(double a11, double a12,
                                                  double a21, double a22) {
  if (!std::isfinite(a11) || !std::isfinite(a12) || !std::isfinite(a21) ||
      !std::isfinite(a22)) {
    return absl::InvalidArgumentError("transform entries must be finite");
  }
  Transform2x2 t(a11, a12, a21, a22);
  const double det = t.Determinant();
  if (det == 0.0 || !std::isfinite(1.0 / det)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "transform [[%g, %g], [%g, %g]] is singular", a11, a12, a21, a22));
  }
  return t;
}

Transform2x2 Transform2x2::Identity() { return {1.0, 0.0, 0.0, 1.0}; }
Transform2x2 Transform2x2::Shifted() { return {1.0, -0.5, 0.0, 0.5}; }
Transform2x2 Transform2x2::Tight() { return {1.0, 0.0, -1.0, 1.0}; }

Transform2x2 Transform2x2::Inverse() const {
  const double det = Determinant();
  return {a22_ / det, -a12_ / det, -a21_ / det, a11_ / det};
}

absl::StatusOr<SensitivitySegment> SensitivitySegment::Create(double x_lo,
                                                              double x_hi) {
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_lo <= x_hi)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid sensitivity segment [%g, %g]", x_lo, x_hi));
  }
  return SensitivitySegment(x_lo, x_hi);
}

double TransformedL1Norm(const Transform2x2& t, double x) {
  const Point2 image = t.Apply({x, 1.0});
  return std::fabs(image.x) + std::fabs(image.y);
}

double L1SensitivityUnder(const Transform2x2& t,
                          const SensitivitySegment& segment) {
  double best = std::max(TransformedL1Norm(t, segment.x_lo()),
                         TransformedL1Norm(t, segment.x_hi()));
  // Row i vanishes at x = -a_i2 / a_i1.
  for (const auto& [slope, offset] :
       {std::pair{t.a11(), t.a12()}, std::pair{t.a21(), t.a22()}}) {
    if (slope == 0.0) continue;
    const double kink = -offset / slope;
    if (kink > segment.x_lo() && kink < segment.x_hi()) {
      best = std::max(best, TransformedL1Norm(t, kink));
    }
  }
  return best;
}

double DeterminantNormalizedSensitivity(const Transform2x2& t,
                                        const SensitivitySegment& segment) {
  return L1SensitivityUnder(t, segment) / std::sqrt(std::fabs(t.Determinant()));
}

absl::StatusOr<BallPolygon> MakeBallPolygon(const Transform2x2& t,
                                            double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("ball radius must be positive, got %g", radius));
  }
  const Transform2x2 inverse = t.Inverse();
  BallPolygon polygon;
  for (const Point2& v : {Point2{radius, 0.0}, Point2{0.0, radius},
                          Point2{-radius, 0.0}, Point2{0.0, -radius}}) {
    polygon.vertices.push_back(inverse.Apply(v));
  }
  // A negative determinant reverses orientation; keep the first vertex.
  if (inverse.Determinant() < 0.0) {
    std::reverse(polygon.vertices.begin() + 1, polygon.vertices.end());
  }
  return polygon;
}

bool PolygonContains(const BallPolygon& polygon, const Point2& p,
                     double tolerance) {
  const size_t k = polygon.vertices.size();
  if (k < 3) return false;
  const double scale = PolygonScale(polygon);
  const double slack =
      tolerance * scale * std::max({scale, std::fabs(p.x), std::fabs(p.y)});
  for (size_t i = 0; i < k; ++i) {
    const Point2& a = polygon.vertices[i];
    const Point2& b = polygon.vertices[(i + 1) % k];
    if (Cross(a, b, p) < -slack) return false;
  }
  return true;
}

bool CoversSensitivity(const BallPolygon& polygon,
                       const SensitivitySegment& segment) {
  for (double x : {segment.x_lo(), segment.x_hi()}) {
    if (!PolygonContains(polygon, {x, 1.0}) ||
        !PolygonContains(polygon, {-x, -1.0})) {
      return false;
    }
  }
  return true;
}

double PolygonArea(const BallPolygon& polygon) {
  const size_t k = polygon.vertices.size();
  double twice_area = 0.0;
  for (size_t i = 0; i < k; ++i) {
    const Point2& a = polygon.vertices[i];
    const Point2& b = polygon.vertices[(i + 1) % k];
    twice_area += a.x * b.y - a.y * b.x;
  }
  return 0.5 * twice_area;
}

bool IsConvexCounterClockwise(const BallPolygon& polygon, double tolerance) {
  const size_t k = polygon.vertices.size();
  if (k < 3) return false;
  const double scale = PolygonScale(polygon);
  for (size_t i = 0; i < k; ++i) {
    const double turn = Cross(polygon.vertices[i], polygon.vertices[(i + 1) % k],
                              polygon.vertices[(i + 2) % k]);
    if (turn < -tolerance * scale * scale) return false;
  }
  return PolygonArea(polygon) > 0.0;
}

bool IsCentrallySymmetric(const BallPolygon& polygon, double tolerance) {
  const double slack = tolerance * PolygonScale(polygon);
  for (const Point2& v : polygon.vertices) {
    const bool mirrored = std::any_of(
        polygon.vertices.begin(), polygon.vertices.end(), [&](const Point2& w) {
          return std::fabs(v.x + w.x) <= slack && std::fabs(v.y + w.y) <= slack;
        });
    if (!mirrored) return false;
  }
  return true;
}

BoundedDataset NormalizeDataset(const BoundedDataset& dataset) {
  const double lower = dataset.lower();
  const double w = dataset.width();
  std::vector<double> normalized;
  normalized.reserve(dataset.values().size());
  for (double x : dataset.values()) normalized.push_back((x - lower) / w);
  // Monotone rounding keeps every value inside [0, 1].
  return *BoundedDataset::Create(std::move(normalized), 0.0, 1.0);
}

absl::StatusOr<ProcedureEstimate> TransformProcedureEstimate(
    const BoundedDataset& dataset, const PrivacyBudget& /*epsilon*/,
    const Transform2x2& t, const NoisePair& noise) {
  if (dataset.empty()) {
    return absl::FailedPreconditionError(
        "cannot estimate the mean of an empty dataset");
  }
  const BoundedDataset normalized = NormalizeDataset(dataset);
  const Point2 exact{SumCompensated(normalized.values()),
                     static_cast<double>(normalized.size())};
  const Point2 transformed = t.Apply(exact);
  const Point2 noisy{transformed.x + noise.za, transformed.y + noise.zb};
  ProcedureEstimate estimate;
  estimate.noisy_sum_count = t.Inverse().Apply(noisy);
  const double ratio = *Clip(NoisyRatio(estimate.noisy_sum_count.x,
                                        estimate.noisy_sum_count.y),
                             0.0, 1.0);
  estimate.value = std::clamp(dataset.width() * ratio + dataset.lower(),
                              dataset.lower(), dataset.upper());
  return estimate;
}

NoisePair ShiftedNoiseFromTransformCoordinates(const NoisePair& coordinates,
                                               double width) {
  return {width * coordinates.za, 2.0 * coordinates.zb};
}

std::vector<NamedBall> MechanismBalls() {
  const SensitivitySegment unit = SensitivitySegment::UnitInterval();
  std::vector<NamedBall> balls;
  for (const auto& [name, t, radius] :
       {std::tuple{"naive", Transform2x2::Identity(), 2.0},
        std::tuple{"shifted", Transform2x2::Shifted(),
                   L1SensitivityUnder(Transform2x2::Shifted(), unit)},
        std::tuple{"transformed", Transform2x2::Tight(),
                   L1SensitivityUnder(Transform2x2::Tight(), unit)}}) {
    balls.push_back({name, t, radius, *MakeBallPolygon(t, radius)});
  }
  return balls;
}

}  // namespace dpmean
