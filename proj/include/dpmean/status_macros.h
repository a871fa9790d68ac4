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

#ifndef DPMEAN_STATUS_MACROS_H_
#define DPMEAN_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPMEAN_RETURN_IF_ERROR(expr)              \
  do {                                            \
    const absl::Status dpmean_status_ = (expr);   \
    if (!dpmean_status_.ok()) return dpmean_status_; \
  } while (0)

#define DPMEAN_STATUS_CONCAT_INNER_(a, b) a##b
#define DPMEAN_STATUS_CONCAT_(a, b) DPMEAN_STATUS_CONCAT_INNER_(a, b)

#define DPMEAN_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return statusor.status();             \
  lhs = std::move(statusor).value()

#define DPMEAN_ASSIGN_OR_RETURN(lhs, rexpr)                                  \
  DPMEAN_ASSIGN_OR_RETURN_IMPL_(                                             \
      DPMEAN_STATUS_CONCAT_(dpmean_statusor_, __LINE__), lhs, rexpr)

#endif  // DPMEAN_STATUS_MACROS_H_
