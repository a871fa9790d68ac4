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

// Linear-transform view of the Laplace mechanism on the (sum, count) vector
// of data normalized to [0, 1].
//
// Adding or removing one record x moves (sum, count) by +-(x, 1), so the
// sensitivity space is the pair of segments {+-(x, 1) : x in [0, 1]}. Applying
// an invertible T to (sum, count), adding independent Lap(r/eps) noise per
// coordinate with r the L1 sensitivity of T(sum, count), and mapping back with
// T^-1 is a K-norm mechanism whose unit ball is T^-1 applied to the L1 ball of
// radius r. The tight choice T = [[1, 0], [-1, 1]] makes that ball the convex
// hull of the sensitivity space and reproduces the transformed mechanism.

#ifndef DPMEAN_GEOMETRY_H_
#define DPMEAN_GEOMETRY_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpmean/dataset.h"
#include "dpmean/mechanisms.h"

namespace dpmean {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// An invertible 2x2 matrix acting on column vectors (x, y).
class Transform2x2 {
 public:
  // Fails unless all entries are finite and the determinant is non-zero with
  // a finite inverse.
  static absl::StatusOr<Transform2x2> Create(double a11, double a12, double a21,
                                             double a22);

  static Transform2x2 Identity();
  // [[1, -1/2], [0, 1/2]]: shifted sum and half count.
  static Transform2x2 Shifted();
  // [[1, 0], [-1, 1]]: scaled sum and count minus scaled sum.
  static Transform2x2 Tight();

  double a11() const { return a11_; }
  double a12() const { return a12_; }
  double a21() const { return a21_; }
  double a22() const { return a22_; }

  double Determinant() const { return a11_ * a22_ - a12_ * a21_; }
  Point2 Apply(const Point2& p) const {
    return {a11_ * p.x + a12_ * p.y, a21_ * p.x + a22_ * p.y};
  }
  Transform2x2 Inverse() const;

 private:
  Transform2x2(double a11, double a12, double a21, double a22)
      : a11_(a11), a12_(a12), a21_(a21), a22_(a22) {}

  double a11_, a12_, a21_, a22_;
};

// The family of sensitivity vectors +-(x, 1) for x in [x_lo, x_hi].
class SensitivitySegment {
 public:
  static absl::StatusOr<SensitivitySegment> Create(double x_lo, double x_hi);
  static SensitivitySegment UnitInterval() { return {0.0, 1.0}; }

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

 private:
  SensitivitySegment(double x_lo, double x_hi) : x_lo_(x_lo), x_hi_(x_hi) {}
  double x_lo_, x_hi_;
};

// Closed convex polygon; vertices in counter-clockwise order, last vertex
// implicitly joined to the first.
struct BallPolygon {
  std::vector<Point2> vertices;
};

// ||T (x, 1)||_1.
double TransformedL1Norm(const Transform2x2& t, double x);

// max over x in the segment of ||T (x, 1)||_1, evaluated exactly at the
// segment ends and at the kinks where a transformed coordinate crosses zero.
double L1SensitivityUnder(const Transform2x2& t,
                          const SensitivitySegment& segment);

// L1 sensitivity divided by sqrt(|det T|). Invariant under rescaling T, and
// proportional to the square root of the area of the induced ball. It is at
// least 1 for every T on the unit segment, with equality for Tight().
double DeterminantNormalizedSensitivity(const Transform2x2& t,
                                        const SensitivitySegment& segment);

// T^-1 applied to the L1 ball of the given radius: the images of (r, 0),
// (0, r), (-r, 0), (0, -r), reordered if needed to stay counter-clockwise.
absl::StatusOr<BallPolygon> MakeBallPolygon(const Transform2x2& t,
                                            double radius);

// Inclusive point test with an absolute slack of `tolerance` times the
// polygon's scale.
bool PolygonContains(const BallPolygon& polygon, const Point2& p,
                     double tolerance = 1e-12);

// True iff every +-(x, 1) with x in the segment lies in the polygon. Checking
// the four segment endpoints suffices for a convex polygon.
bool CoversSensitivity(const BallPolygon& polygon,
                       const SensitivitySegment& segment);

double PolygonArea(const BallPolygon& polygon);
bool IsConvexCounterClockwise(const BallPolygon& polygon,
                              double tolerance = 1e-12);
bool IsCentrallySymmetric(const BallPolygon& polygon, double tolerance = 1e-12);

// f(x) = (x - l) / (u - l) applied to every value; bounds become [0, 1].
BoundedDataset NormalizeDataset(const BoundedDataset& dataset);

struct ProcedureEstimate {
  double value = 0.0;
  // (sum^, count^) after mapping the noisy vector back with T^-1, in
  // normalized units.
  Point2 noisy_sum_count;
};

// Transform, add noise, invert: v = T (s, n) on the normalized data, then
// (s^, n^) = T^-1 (v + (za, zb)), released as
// (u - l) * Clip(s^/n^, [0, 1]) + l. The caller is responsible for drawing
// the noise at scale L1SensitivityUnder(t, [0, 1]) / eps per coordinate.
absl::StatusOr<ProcedureEstimate> TransformProcedureEstimate(
    const BoundedDataset& dataset, const PrivacyBudget& epsilon,
    const Transform2x2& t, const NoisePair& noise);

// Noise coupling for the shifted mechanism. With coordinate noise (za, zb)
// in the space of Transform2x2::Shifted(), the procedure perturbs the
// normalized (sum, count) by (za + zb, 2 zb). The shifted mechanism produces
// the same output when its shifted-sum noise is w * za and its count noise is
// 2 * zb, where w = u - l. Lap(1/eps) coordinates map to Lap(w/eps) and
// Lap(2/eps), the shifted mechanism's own scales.
NoisePair ShiftedNoiseFromTransformCoordinates(const NoisePair& coordinates,
                                               double width);

// Side-by-side comparison of the three mechanisms' balls.
struct NamedBall {
  std::string name;
  Transform2x2 transform;
  double radius;
  BallPolygon polygon;
};

// Identity at radius 2, Shifted() and Tight() at their L1 sensitivities on
// the unit segment.
std::vector<NamedBall> MechanismBalls();

}  // namespace dpmean

#endif  // DPMEAN_GEOMETRY_H_
