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

#include "dpmean/report_io.h"

#include <charconv>
#include <string_view>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpmean/status_macros.h"
#include "json.hpp"

namespace dpmean {
namespace {

template <typename T>
absl::StatusOr<T> ParseNumber(std::string_view field, int line) {
  T value{};
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(
        absl::StrFormat("line %d: cannot parse number '%s'", line, std::string(field)));
  }
  return value;
}

std::vector<std::string_view> SplitLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string FormatReal(double value) { return absl::StrFormat("%.17g", value); }

absl::Status WriteReportCsv(std::ostream& out,
                            std::span<const MseReport> reports,
                            std::span<const ExtraColumn> extra_columns) {
  out << kReportCsvHeader;
  for (const ExtraColumn& column : extra_columns) {
    if (column.values.size() != reports.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "column '%s' has %d values for %d rows", column.name,
          column.values.size(), reports.size()));
    }
    out << ',' << column.name;
  }
  out << '\n';
  for (size_t i = 0; i < reports.size(); ++i) {
    const MseReport& r = reports[i];
    out << MechanismName(r.mechanism) << ',' << FormatReal(r.epsilon) << ','
        << DatasetKindName(r.dataset_spec.kind) << ',' << r.n << ','
        << FormatReal(r.dataset_spec.target_mean) << ',' << r.trials << ','
        << FormatReal(r.mse) << ',' << FormatReal(r.normalized_mse) << ','
        << FormatReal(r.std_error) << ',' << r.seed;
    for (const ExtraColumn& column : extra_columns) {
      out << ',' << FormatReal(column.values[i]);
    }
    out << '\n';
  }
  if (!out) return absl::DataLossError("failed writing report CSV");
  return absl::OkStatus();
}

absl::StatusOr<ReportCsv> ParseReportCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("report CSV is empty");
  }
  const std::vector<std::string_view> header = SplitLine(line);
  const std::vector<std::string_view> expected =
      SplitLine(kReportCsvHeader);
  if (header.size() < expected.size() ||
      !std::equal(expected.begin(), expected.end(), header.begin())) {
    return absl::InvalidArgumentError("unexpected report CSV header");
  }
  ReportCsv csv;
  for (size_t i = expected.size(); i < header.size(); ++i) {
    csv.extra_column_names.emplace_back(header[i]);
  }
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = SplitLine(line);
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: expected %d fields, got %d", line_number, header.size(),
          fields.size()));
    }
    ReportCsvRow row;
    row.mechanism = std::string(fields[0]);
    DPMEAN_ASSIGN_OR_RETURN(row.epsilon,
                            ParseNumber<double>(fields[1], line_number));
    row.dataset_kind = std::string(fields[2]);
    DPMEAN_ASSIGN_OR_RETURN(row.n, ParseNumber<int64_t>(fields[3], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.target_mean,
                            ParseNumber<double>(fields[4], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.trials,
                            ParseNumber<int64_t>(fields[5], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.mse, ParseNumber<double>(fields[6], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.normalized_mse,
                            ParseNumber<double>(fields[7], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.std_error,
                            ParseNumber<double>(fields[8], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.seed,
                            ParseNumber<uint64_t>(fields[9], line_number));
    for (size_t i = expected.size(); i < fields.size(); ++i) {
      DPMEAN_ASSIGN_OR_RETURN(const double extra,
                              ParseNumber<double>(fields[i], line_number));
      row.extras.push_back(extra);
    }
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

absl::Status WritePolygonCsv(std::ostream& out,
                             std::span<const NamedBall> balls) {
  out << kPolygonCsvHeader << '\n';
  for (const NamedBall& ball : balls) {
    for (size_t i = 0; i < ball.polygon.vertices.size(); ++i) {
      const Point2& v = ball.polygon.vertices[i];
      out << ball.name << ',' << i << ',' << FormatReal(v.x) << ','
          << FormatReal(v.y) << '\n';
    }
  }
  if (!out) return absl::DataLossError("failed writing polygon CSV");
  return absl::OkStatus();
}

absl::StatusOr<std::vector<PolygonCsvRow>> ParsePolygonCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      SplitLine(line) != SplitLine(kPolygonCsvHeader)) {
    return absl::InvalidArgumentError("unexpected polygon CSV header");
  }
  std::vector<PolygonCsvRow> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = SplitLine(line);
    if (fields.size() != 4) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: expected 4 fields", line_number));
    }
    PolygonCsvRow row;
    row.polygon_id = std::string(fields[0]);
    DPMEAN_ASSIGN_OR_RETURN(row.vertex_index,
                            ParseNumber<int>(fields[1], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.vertex.x,
                            ParseNumber<double>(fields[2], line_number));
    DPMEAN_ASSIGN_OR_RETURN(row.vertex.y,
                            ParseNumber<double>(fields[3], line_number));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string SweepMetadataJson(const ExperimentConfig& config,
                              std::string_view preset) {
  nlohmann::ordered_json meta;
  meta["software"] = "dpmean";
  meta["version"] = kSoftwareVersion;
  meta["preset"] = preset.empty() ? nlohmann::ordered_json(nullptr)
                                  : nlohmann::ordered_json(std::string(preset));
  meta["seed"] = config.seed;
  meta["trials"] = config.trials;
  meta["workers"] = config.workers;
  auto& mechanisms = meta["mechanisms"] = nlohmann::ordered_json::array();
  for (Mechanism m : config.mechanisms) {
    mechanisms.push_back(std::string(MechanismName(m)));
  }
  meta["epsilons"] = config.epsilons;
  auto& datasets = meta["datasets"] = nlohmann::ordered_json::array();
  for (const DatasetSpec& spec : config.dataset_specs) {
    nlohmann::ordered_json d;
    d["kind"] = std::string(DatasetKindName(spec.kind));
    d["size"] = spec.size;
    d["target_mean"] = spec.target_mean;
    d["lower"] = spec.lower;
    d["upper"] = spec.upper;
    if (spec.family_k.has_value()) d["family_k"] = *spec.family_k;
    datasets.push_back(std::move(d));
  }
  meta["preset_grids"] = {{"epsilons", PresetEpsilons()},
                          {"means", PresetMeans()},
                          {"n", kPresetDatasetSize}};
  meta["cell_order"] = "mechanism, epsilon, dataset";
  meta["trial_streams"] =
      "trial t of every cell draws from stream (seed, t)";
  return meta.dump(2) + "\n";
}

}  // namespace dpmean
