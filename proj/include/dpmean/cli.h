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

// The `dpmean` command line: estimate, bounds, figures and geometry.

#ifndef DPMEAN_CLI_H_
#define DPMEAN_CLI_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpmean {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

struct CliConfig {
  std::string subcommand;
  std::optional<std::string> input_path;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> epsilon;
  std::string mechanism = "transformed";
  // Omitted means a fresh entropy seed, echoed in the output.
  std::optional<uint64_t> seed;
  std::optional<int64_t> trials;
  std::optional<std::string> output_path;
  std::optional<std::string> preset;
  std::optional<std::string> config_path;
  // Optional summary statistics for per-dataset bounds.
  std::optional<int64_t> n;
  std::optional<double> mean;
  int workers = 1;
};

// Validation failures map to kExitValidation, everything else to
// kExitInternal.
int ExitCodeFor(const absl::Status& status);

// One real per line; blank lines are skipped. Fails on the first line that
// does not parse or lies outside [lower, upper], naming the line number.
absl::StatusOr<std::vector<double>> ReadBoundedValues(std::istream& in,
                                                      double lower,
                                                      double upper);

int CmdEstimate(const CliConfig& config, std::ostream& out, std::ostream& err);
int CmdBounds(const CliConfig& config, std::ostream& out, std::ostream& err);
int CmdFigures(const CliConfig& config, std::ostream& out, std::ostream& err);
int CmdGeometry(const CliConfig& config, std::ostream& out, std::ostream& err);

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dpmean

#endif  // DPMEAN_CLI_H_
