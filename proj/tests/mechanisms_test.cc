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

#include "dpmean/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "dpmean/dataset.h"
#include "dpmean/random_stream.h"
#include "test_util.h"

namespace dpmean {
namespace {

using ::dpmean::testing::StatusCodeIs;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Mechanism kAllMechanisms[] = {
    Mechanism::kIndependent, Mechanism::kShifted, Mechanism::kTransformed};

BoundedDataset Data(std::vector<double> values, double lo = 0.0,
                    double hi = 1.0) {
  return *BoundedDataset::Create(std::move(values), lo, hi);
}

PrivacyBudget Eps(double eps = 0.5) { return *PrivacyBudget::Create(eps); }

double Estimate(Mechanism m, const BoundedDataset& d, NoisePair noise) {
  absl::StatusOr<MeanEstimate> e = EstimateMean(d, Eps(), m, noise);
  EXPECT_TRUE(e.ok()) << e.status();
  return e->value;
}

TEST(ClipTest, Examples) {
  EXPECT_EQ(*Clip(1.5, 0, 1), 1.0);
  EXPECT_EQ(*Clip(-3, 0, 1), 0.0);
  EXPECT_EQ(*Clip(0.4, 0, 1), 0.4);
  EXPECT_EQ(*Clip(kInf, 0, 1), 1.0);
  EXPECT_EQ(*Clip(-kInf, 0, 1), 0.0);
  EXPECT_EQ(*Clip(std::nan(""), 0, 1), 0.5);
  EXPECT_EQ(*Clip(7, 2, 2), 2.0);
  EXPECT_THAT(Clip(0.5, 1, 0), StatusCodeIs(absl::StatusCode::kInvalidArgument));
}

TEST(NoisyRatioTest, ZeroDenominator) {
  EXPECT_EQ(NoisyRatio(0.5, 0.0), kInf);
  EXPECT_EQ(NoisyRatio(-0.5, 0.0), -kInf);
  EXPECT_TRUE(std::isnan(NoisyRatio(0.0, 0.0)));
  EXPECT_EQ(NoisyRatio(3.0, -2.0), -1.5);
}

TEST(MechanismNameTest, RoundTrip) {
  for (Mechanism m : kAllMechanisms) {
    EXPECT_EQ(*ParseMechanism(MechanismName(m)), m);
  }
  EXPECT_THAT(ParseMechanism("laplace"),
              StatusCodeIs(absl::StatusCode::kInvalidArgument));
}

TEST(EstimateIndependentTest, Examples) {
  EXPECT_NEAR(EstimateIndependent(Data({0.2, 0.4, 0.6}), Eps(), {0, 0})->value,
              0.4, 1e-15);
  EXPECT_EQ(EstimateIndependent(Data({1, 1}), Eps(), {1.0, 0})->value, 1.0);
  EXPECT_EQ(EstimateIndependent(Data({0.5}), Eps(), {0, -1})->value, 1.0);
}

TEST(EstimateShiftedTest, Examples) {
  EXPECT_EQ(EstimateShifted(Data({0.25, 0.75}), Eps(), {0, 0})->value, 0.5);
  EXPECT_EQ(EstimateShifted(Data({1, 1}), Eps(), {0.5, 0})->value, 1.0);
  EXPECT_EQ(EstimateShifted(Data({0, 0, 0, 0}), Eps(), {-4, 0})->value, 0.0);
}

TEST(EstimateTransformedTest, Examples) {
  EXPECT_NEAR(EstimateTransformed(Data({0.2, 0.4, 0.6}), Eps(), {0, 0})->value,
              0.4, 1e-15);
  absl::StatusOr<MeanEstimate> e =
      EstimateTransformed(Data({1, 1}), Eps(), {0.5, -0.5});
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->value, 1.0);
  EXPECT_EQ(e->noisy_aggregates.first, 2.5);
  EXPECT_EQ(e->noisy_aggregates.second, -0.5);
  EXPECT_EQ(EstimateTransformed(Data({3, 3}, 2, 4), Eps(), {0, 0})->value, 3.0);
}

TEST(EstimateTest, EmptyDatasetIsDomainError) {
  const BoundedDataset empty = Data({});
  for (Mechanism m : kAllMechanisms) {
    EXPECT_THAT(EstimateMean(empty, Eps(), m, {0, 0}),
                StatusCodeIs(absl::StatusCode::kFailedPrecondition));
    EXPECT_THAT(RunMechanism(empty, Eps(), m, DeriveStream(1, 0)),
                StatusCodeIs(absl::StatusCode::kFailedPrecondition));
  }
}

TEST(AggregatesTest, Invariants) {
  testing::Gen gen(21);
  for (int round = 0; round < 300; ++round) {
    const double lo = gen.Uniform(-10, 10);
    const double hi = lo + gen.Uniform(0.01, 20);
    const BoundedDataset d = Data(gen.Values(gen.Int(1, 50), lo, hi), lo, hi);
    const double n = static_cast<double>(d.size());
    const AggregateVector sc = ComputeAggregates(d, Mechanism::kIndependent);
    EXPECT_EQ(sc.kind, AggregateKind::kSumCount);
    EXPECT_EQ(sc.second, n);
    EXPECT_LE(lo * n, sc.first + 1e-12 * std::fabs(lo * n));
    EXPECT_GE(hi * n, sc.first - 1e-12 * std::fabs(hi * n));
    const AggregateVector tp = ComputeAggregates(d, Mechanism::kTransformed);
    EXPECT_EQ(tp.kind, AggregateKind::kTransformedPair);
    EXPECT_GE(tp.first, 0.0);
    EXPECT_GE(tp.second, -1e-12 * n);
    EXPECT_EQ(tp.first + tp.second, n);
    EXPECT_EQ(ComputeAggregates(d, Mechanism::kShifted).kind,
              AggregateKind::kShiftedSumCount);
  }
}

TEST(EstimateTest, RangeHoldsForAdversarialNoise) {
  const std::vector<double> extremes = {
      -kInf, -1e300, -1e6, -1.0, -1e-300, 0.0, 1e-300, 1.0, 1e6, 1e300, kInf};
  testing::Gen gen(3);
  for (int round = 0; round < 40; ++round) {
    const double lo = gen.Uniform(-5, 5);
    const double hi = lo + gen.Uniform(1e-3, 10);
    const BoundedDataset d = Data(gen.Values(gen.Int(1, 6), lo, hi), lo, hi);
    for (Mechanism m : kAllMechanisms) {
      for (double za : extremes) {
        for (double zb : extremes) {
          const double v = Estimate(m, d, {za, zb});
          EXPECT_FALSE(std::isnan(v));
          EXPECT_GE(v, lo) << MechanismName(m) << " " << za << " " << zb;
          EXPECT_LE(v, hi) << MechanismName(m) << " " << za << " " << zb;
        }
      }
    }
  }
}

TEST(EstimateTest, ZeroNoiseRecoversTrueMean) {
  testing::Gen gen(4);
  for (int round = 0; round < 300; ++round) {
    const double lo = gen.Uniform(-100, 100);
    const double hi = lo + gen.Uniform(1e-2, 100);
    const BoundedDataset d = Data(gen.Values(gen.Int(1, 200), lo, hi), lo, hi);
    const double mean = *TrueMean(d);
    const double tol = 1e-13 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    for (Mechanism m : kAllMechanisms) {
      EXPECT_NEAR(Estimate(m, d, {0, 0}), mean, tol) << MechanismName(m);
    }
  }
}

TEST(EstimateTest, TranslationEquivariance) {
  testing::Gen gen(6);
  for (int round = 0; round < 300; ++round) {
    const double lo = gen.Uniform(-3, 3);
    const double hi = lo + gen.Uniform(0.1, 5);
    const double c = gen.Uniform(-50, 50);
    std::vector<double> values = gen.Values(gen.Int(1, 20), lo, hi);
    std::vector<double> shifted;
    for (double v : values) shifted.push_back(std::clamp(v + c, lo + c, hi + c));
    const BoundedDataset d = Data(values, lo, hi);
    const BoundedDataset e = Data(shifted, lo + c, hi + c);
    const NoisePair noise{gen.Uniform(-5, 5), gen.Uniform(-5, 5)};
    for (Mechanism m : {Mechanism::kShifted, Mechanism::kTransformed}) {
      EXPECT_NEAR(Estimate(m, e, noise), Estimate(m, d, noise) + c, 1e-11)
          << MechanismName(m);
    }
  }
}

TEST(EstimateTest, OrderAndDuplicationOfInputsIrrelevant) {
  testing::Gen gen(8);
  for (int round = 0; round < 200; ++round) {
    // Dyadic values make every partial sum exact.
    std::vector<double> values;
    const int64_t n = gen.Int(1, 40);
    for (int64_t i = 0; i < n; ++i) values.push_back(gen.Int(0, 64) / 64.0);
    std::vector<double> permuted = values;
    std::shuffle(permuted.begin(), permuted.end(), gen.engine());
    const NoisePair noise{gen.Uniform(-3, 3), gen.Uniform(-3, 3)};
    for (Mechanism m : kAllMechanisms) {
      EXPECT_EQ(Estimate(m, Data(values), noise),
                Estimate(m, Data(permuted), noise));
    }
  }
}

TEST(NoiseScalesTest, PerMechanismScales) {
  const PrivacyBudget eps = Eps(0.5);
  NoiseScales s = *MechanismNoiseScales(Mechanism::kIndependent, -3, 2, eps);
  EXPECT_EQ(s.first.scale(), 12.0);
  EXPECT_EQ(s.second.scale(), 4.0);
  s = *MechanismNoiseScales(Mechanism::kShifted, -3, 2, eps);
  EXPECT_EQ(s.first.scale(), 10.0);
  EXPECT_EQ(s.second.scale(), 4.0);
  s = *MechanismNoiseScales(Mechanism::kTransformed, -3, 2, eps);
  EXPECT_EQ(s.first.scale(), 2.0);
  EXPECT_EQ(s.second.scale(), 2.0);
}

TEST(RunMechanismTest, DrawsTwoLaplaceValuesInOrder) {
  const BoundedDataset d = Data({0.1, 0.9, 0.3});
  const RandomStream stream = DeriveStream(10, 20);
  for (Mechanism m : kAllMechanisms) {
    const NoiseScales scales =
        *MechanismNoiseScales(m, d.lower(), d.upper(), Eps());
    StreamCursor cursor(stream);
    const double za = LaplaceFromUniform(cursor.NextUniform(), scales.first);
    const double zb = LaplaceFromUniform(cursor.NextUniform(), scales.second);
    EXPECT_EQ(RunMechanism(d, Eps(), m, stream)->value,
              Estimate(m, d, {za, zb}));
  }
}

TEST(RunMechanismTest, InRangeAndMechanismsDiffer) {
  const BoundedDataset d = Data(std::vector<double>(50, 0.3));
  int differing = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    double values[3];
    for (int i = 0; i < 3; ++i) {
      values[i] = RunMechanism(d, Eps(), kAllMechanisms[i],
                               DeriveStream(seed, 0))->value;
      EXPECT_GE(values[i], 0.0);
      EXPECT_LE(values[i], 1.0);
    }
    differing += values[0] != values[1];
  }
  EXPECT_GT(differing, 150);
}

TEST(RunMechanismTest, GoldenValue) {
  std::ifstream in(std::string(DPMEAN_TESTDATA_DIR) + "/golden.json");
  ASSERT_TRUE(in.good());
  const nlohmann::json g = nlohmann::json::parse(in).at("run_mechanism");
  ASSERT_EQ(g.at("mechanism").get<std::string>(), "transformed");
  const BoundedDataset d =
      Data(std::vector<double>(g.at("n").get<int64_t>(), g.at("value").get<double>()));
  const absl::StatusOr<MeanEstimate> e = RunMechanism(
      d, Eps(g.at("epsilon").get<double>()), Mechanism::kTransformed,
      DeriveStream(g.at("seed").get<uint64_t>(), g.at("stream_id").get<uint64_t>()));
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->value, g.at("estimate").get<double>());
}

TEST(AggregateLogDensityTest, MatchesProductOfLaplaceDensities) {
  const NoiseScales s = *MechanismNoiseScales(Mechanism::kShifted, 0, 1, Eps(1));
  const AggregateVector c{0.3, 4.0, AggregateKind::kShiftedSumCount};
  const double t1 = 1.1, t2 = 2.5;
  const double expected = std::exp(-std::fabs(t1 - 0.3) / 1.0) / 2.0 *
                          std::exp(-std::fabs(t2 - 4.0) / 2.0) / 4.0;
  EXPECT_NEAR(std::exp(AggregateLogDensity(c, s, t1, t2)), expected, 1e-15);
}

}  // namespace
}  // namespace dpmean
