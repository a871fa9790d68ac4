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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "dpmean/bounds.h"
#include "dpmean/dataset.h"
#include "dpmean/geometry.h"
#include "dpmean/harness.h"
#include "dpmean/mechanisms.h"

namespace dpmean {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool condition, const std::string& failure) {
    if (!condition && pass) detail = failure;
    pass = pass && condition;
  }
};

BoundedDataset Generate(DatasetKind kind, int64_t size, double mean) {
  return *GenerateDataset({.kind = kind,
                           .size = size,
                           .target_mean = mean,
                           .lower = 0.0,
                           .upper = 1.0,
                           .family_k = std::nullopt});
}

PrivacyBudget Eps(double eps) { return *PrivacyBudget::Create(eps); }

constexpr uint64_t kSeed = 20260101;

Outcome FactorTwoRatio() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  double lo = INFINITY, hi = -INFINITY;
  for (double mu : {0.25, 0.5, 0.75}) {
    for (double eps : {0.2, 0.5, 1.0}) {
      const BoundedDataset d = Generate(DatasetKind::kTwoPoint, 1000, mu);
      const double shifted_mse =
          EstimateMse(d, Mechanism::kShifted, Eps(eps), 10000, kSeed)->mse;
      const double transformed_mse =
          EstimateMse(d, Mechanism::kTransformed, Eps(eps), 10000, kSeed)->mse;
      const double ratio = shifted_mse / transformed_mse;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      out.Require(ratio >= 1.7 && ratio <= 2.3,
                  absl::StrFormat("ratio %.4f at mu=%g eps=%g", ratio, mu, eps));
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.Require(seconds < 60.0, absl::StrFormat("took %.1f s", seconds));
  if (out.pass) {
    out.detail = absl::StrFormat("ratios in [%.4f, %.4f], %.2f s", lo, hi, seconds);
  }
  return out;
}

Outcome TransformedConstant() {
  Outcome out;
  const double center =
      EstimateMse(Generate(DatasetKind::kConstant, 1000, 0.5),
                  Mechanism::kTransformed, Eps(0.5), 10000, kSeed)
          ->normalized_mse;
  out.Require(std::fabs(center - 4.0) <= 0.4,
              absl::StrFormat("center normalized MSE %.4f", center));
  double worst_edge = 0;
  for (double mu : {0.0, 1.0}) {
    const double edge =
        EstimateMse(Generate(DatasetKind::kConstant, 1000, mu),
                    Mechanism::kTransformed, Eps(0.5), 10000, kSeed)
            ->normalized_mse;
    worst_edge = std::max(worst_edge, edge);
    out.Require(edge <= 8.8, absl::StrFormat("boundary mu=%g gives %.4f", mu, edge));
  }
  if (out.pass) {
    out.detail = absl::StrFormat("center %.4f (target 4.0), boundary max %.4f (<= 8.8)",
                                 center, worst_edge);
  }
  return out;
}

Outcome ShiftedConstant() {
  Outcome out;
  const double center =
      EstimateMse(Generate(DatasetKind::kConstant, 1000, 0.5),
                  Mechanism::kShifted, Eps(0.5), 10000, kSeed)
          ->normalized_mse;
  out.Require(std::fabs(center - 8.0) <= 0.8,
              absl::StrFormat("center normalized MSE %.4f", center));
  if (out.pass) out.detail = absl::StrFormat("center %.4f (target 8.0)", center);
  return out;
}

Outcome MinmaxAgreement() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> eps_dist(1e-3, 10), lo_dist(-1e3, 1e3),
      width_dist(1e-6, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double eps = eps_dist(rng);
    const double lo = lo_dist(rng);
    const double hi = lo + width_dist(rng);
    const double ar = AddRemoveMinmaxLeading(eps, lo, hi)->leading_term;
    const double sw = SwapMinmaxLeading(eps, lo, hi)->leading_term;
    out.Require(ar == sw, absl::StrFormat("differ at (%g, %g, %g)", eps, lo, hi));
  }
  if (out.pass) out.detail = "1000 random triples identical";
  return out;
}

Outcome GeometryExactness() {
  Outcome out;
  const SensitivitySegment unit = SensitivitySegment::UnitInterval();
  out.Require(L1SensitivityUnder(Transform2x2::Identity(), unit) == 2.0, "identity");
  out.Require(L1SensitivityUnder(Transform2x2::Shifted(), unit) == 1.0, "shifted");
  out.Require(L1SensitivityUnder(Transform2x2::Tight(), unit) == 1.0, "tight");
  for (int i = 0; i <= 10; ++i) {
    const double norm = TransformedL1Norm(Transform2x2::Tight(), i / 10.0);
    out.Require(std::fabs(norm - 1.0) < 1e-12,
                absl::StrFormat("not tight at x=%g", i / 10.0));
  }
  const BallPolygon poly = *MakeBallPolygon(Transform2x2::Tight(), 1.0);
  const std::vector<Point2> expected = {{1, 1}, {0, 1}, {-1, -1}, {0, -1}};
  out.Require(poly.vertices == expected, "parallelogram vertices differ");
  if (out.pass) out.detail = "sensitivities 2, 1, 1; tight at 11 points; vertices exact";
  return out;
}

double RelativeError(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

Outcome CouplingEquivalence() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(0, 1);
  std::uniform_int_distribution<int> size_dist(1, 6);
  double worst_tight = 0, worst_shifted = 0;
  const PrivacyBudget eps = Eps(0.5);
  for (int d = 0; d < 20; ++d) {
    const double lo = -3 + 6 * unit(rng);
    const double hi = lo + 0.1 + 4 * unit(rng);
    std::vector<double> values(size_dist(rng));
    for (double& v : values) v = lo + (hi - lo) * unit(rng);
    const BoundedDataset dataset = *BoundedDataset::Create(values, lo, hi);
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const NoisePair z{-5 + 0.5 * i, -5 + 0.5 * j};
        const double tight =
            TransformProcedureEstimate(dataset, eps, Transform2x2::Tight(), z)->value;
        const double direct = EstimateTransformed(dataset, eps, z)->value;
        worst_tight = std::max(worst_tight, RelativeError(tight, direct));
        const double shifted =
            TransformProcedureEstimate(dataset, eps, Transform2x2::Shifted(), z)->value;
        const double coupled =
            EstimateShifted(dataset, eps,
                            ShiftedNoiseFromTransformCoordinates(z, dataset.width()))
                ->value;
        worst_shifted = std::max(worst_shifted, RelativeError(shifted, coupled));
      }
    }
  }
  out.Require(worst_tight <= 1e-12,
              absl::StrFormat("transformed coupling error %g", worst_tight));
  out.Require(worst_shifted <= 1e-12,
              absl::StrFormat("shifted coupling error %g", worst_shifted));
  if (out.pass) {
    out.detail = absl::StrFormat("max relative error %g (transformed), %g (shifted)",
                                 worst_tight, worst_shifted);
  }
  return out;
}

Outcome LikelihoodRatio() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> offset(-1, 1);
  double worst = 0;
  int pairs = 0;
  for (Mechanism m : {Mechanism::kIndependent, Mechanism::kShifted,
                      Mechanism::kTransformed}) {
    for (double eps : {0.2, 0.5, 1.0}) {
      const double lo = -1.0, hi = 2.0;
      std::vector<double> grid;
      for (int i = 0; i < 5; ++i) grid.push_back(lo + (hi - lo) * i / 4.0);
      const NoiseScales scales = *MechanismNoiseScales(m, lo, hi, Eps(eps));
      std::vector<double> current;
      std::function<void(size_t)> visit = [&](size_t start) {
        const AggregateVector a =
            ComputeAggregates(*BoundedDataset::Create(current, lo, hi), m);
        for (double x : grid) {
          std::vector<double> bigger = current;
          bigger.push_back(x);
          const AggregateVector b =
              ComputeAggregates(*BoundedDataset::Create(bigger, lo, hi), m);
          ++pairs;
          for (int p = 0; p < 100; ++p) {
            const double t1 = a.first + 20 * scales.first.scale() * offset(rng);
            const double t2 = a.second + 20 * scales.second.scale() * offset(rng);
            const double diff = std::fabs(AggregateLogDensity(a, scales, t1, t2) -
                                          AggregateLogDensity(b, scales, t1, t2));
            worst = std::max(worst, diff - eps);
            out.Require(std::exp(diff) <= std::exp(eps) * (1 + 1e-9),
                        absl::StrFormat("%s eps=%g ratio %g",
                                        std::string(MechanismName(m)), eps,
                                        std::exp(diff)));
          }
        }
        if (current.size() == 3) return;
        for (size_t i = start; i < grid.size(); ++i) {
          current.push_back(grid[i]);
          visit(i);
          current.pop_back();
        }
      };
      visit(0);
    }
  }
  if (out.pass) {
    out.detail = absl::StrFormat(
        "%d neighbour pairs x 100 points; max log-ratio minus eps %.3g", pairs,
        worst);
  }
  return out;
}

Outcome RatioBoundValidity() {
  Outcome out;
  const ExperimentConfig config = *FigurePreset("fig2a", kSeed, 10000);
  double tightest = INFINITY;
  for (double eps : config.epsilons) {
    for (const DatasetSpec& spec : config.dataset_specs) {
      const BoundedDataset d = *GenerateDataset(spec);
      const MseReport r =
          *EstimateMse(d, Mechanism::kTransformed, Eps(eps), config.trials, kSeed);
      const double bound =
          MechanismRatioErrorBound(d, Eps(eps), Mechanism::kTransformed)->total;
      tightest = std::min(tightest, bound / r.mse);
      out.Require(r.mse <= bound + 3 * r.std_error,
                  absl::StrFormat("eps=%g mu=%g mse %g > bound %g", eps,
                                  spec.target_mean, r.mse, bound));
    }
  }
  if (out.pass) {
    out.detail = absl::StrFormat("30 cells; smallest bound/mse %.3f", tightest);
  }
  return out;
}

Outcome LowerBoundProximity() {
  Outcome out;
  const int64_t k = PresetFamilySize(1000, 0.5);
  const FamilyWorstCase f =
      *WorstCaseOverFamily(Mechanism::kTransformed, Eps(0.5), 1000, k, 10000, kSeed);
  out.Require(f.worst_mse >= 0.8 * 8.0,
              absl::StrFormat("worst-case %.4f < %.4f", f.worst_mse, 6.4));
  const double geometric = *GeometricCountVariance(0.5) / 8.0;
  out.Require(std::fabs(geometric - 0.9795) <= 1e-3,
              absl::StrFormat("geometric ratio %.6f", geometric));
  if (out.pass) {
    out.detail = absl::StrFormat(
        "k=%d worst-case %.4f (>= 6.4, member %d); geometric ratio %.6f", k,
        f.worst_mse, f.worst_member, geometric);
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome Determinism() {
  Outcome out;
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      absl::StrFormat("dpmean_acceptance_%d", static_cast<int>(getpid()));
  std::filesystem::create_directories(dir);
  auto run = [&](const std::string& name, int workers) {
    const std::string path = (dir / name).string();
    const std::string cmd = absl::StrFormat(
        "%s figures --preset fig2c --seed 7 --workers %d --output %s >/dev/null",
        DPMEAN_CLI_PATH, workers, path);
    const int status = std::system(cmd.c_str());
    out.Require(WIFEXITED(status) && WEXITSTATUS(status) == 0,
                "figures command failed");
    return ReadFile(path);
  };
  const std::string a = run("a.csv", 1);
  const std::string b = run("b.csv", 1);
  const std::string c = run("c.csv", 4);
  out.Require(!a.empty(), "empty CSV");
  out.Require(a == b, "two runs differ");
  out.Require(a == c, "1 worker and 4 workers differ");
  std::filesystem::remove_all(dir);
  if (out.pass) {
    out.detail = absl::StrFormat("%d bytes identical across runs and worker counts",
                                 a.size());
  }
  return out;
}

}  // namespace
}  // namespace dpmean

int main() {
  using dpmean::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"factor-two MSE ratio between shifted and transformed",
       dpmean::FactorTwoRatio},
      {"transformed normalized MSE constant", dpmean::TransformedConstant},
      {"shifted normalized MSE constant", dpmean::ShiftedConstant},
      {"swap and add-remove min-max agreement", dpmean::MinmaxAgreement},
      {"geometry exactness", dpmean::GeometryExactness},
      {"coupling equivalence", dpmean::CouplingEquivalence},
      {"likelihood-ratio privacy property", dpmean::LikelihoodRatio},
      {"clipped-ratio error bound validity on fig2a grid", dpmean::RatioBoundValidity},
      {"lower-bound proximity", dpmean::LowerBoundProximity},
      {"determinism of figure output", dpmean::Determinism},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome outcome = criteria[i].second();
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << i + 1
              << ": " << criteria[i].first << " -- " << outcome.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
