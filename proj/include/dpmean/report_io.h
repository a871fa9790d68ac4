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

// CSV and JSON outputs. Reals are printed with 17 significant digits so that
// parsing a file recovers every value exactly.

#ifndef DPMEAN_REPORT_IO_H_
#define DPMEAN_REPORT_IO_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpmean/geometry.h"
#include "dpmean/harness.h"

namespace dpmean {

inline constexpr char kReportCsvHeader[] =
    "mechanism,epsilon,dataset_kind,n,target_mean,trials,mse,normalized_mse,"
    "stderr,seed";
inline constexpr char kPolygonCsvHeader[] = "polygon_id,vertex_index,x,y";

std::string FormatReal(double value);

// Additional per-row column appended after the fixed report columns.
struct ExtraColumn {
  std::string name;
  std::vector<double> values;
};

absl::Status WriteReportCsv(std::ostream& out,
                            std::span<const MseReport> reports,
                            std::span<const ExtraColumn> extra_columns = {});

struct ReportCsvRow {
  std::string mechanism;
  double epsilon = 0.0;
  std::string dataset_kind;
  int64_t n = 0;
  double target_mean = 0.0;
  int64_t trials = 0;
  double mse = 0.0;
  double normalized_mse = 0.0;
  double std_error = 0.0;
  uint64_t seed = 0;
  std::vector<double> extras;
};

struct ReportCsv {
  std::vector<std::string> extra_column_names;
  std::vector<ReportCsvRow> rows;
};

absl::StatusOr<ReportCsv> ParseReportCsv(std::istream& in);

absl::Status WritePolygonCsv(std::ostream& out,
                             std::span<const NamedBall> balls);

struct PolygonCsvRow {
  std::string polygon_id;
  int vertex_index = 0;
  Point2 vertex;
};

absl::StatusOr<std::vector<PolygonCsvRow>> ParsePolygonCsv(std::istream& in);

// Sidecar metadata for a sweep as a JSON document: configuration, preset
// grids and software version. Contains nothing time- or host-dependent.
std::string SweepMetadataJson(const ExperimentConfig& config,
                              std::string_view preset);

inline constexpr char kSoftwareVersion[] = "0.1.0";

}  // namespace dpmean

#endif  // DPMEAN_REPORT_IO_H_
