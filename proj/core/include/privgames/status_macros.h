//
// Copyright 2026 The privgames Authors
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

#ifndef PRIVGAMES_STATUS_MACROS_H_
#define PRIVGAMES_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PRIVGAMES_RETURN_IF_ERROR(expr)        \
  do {                                         \
    ::absl::Status _pg_status = (expr);        \
    if (!_pg_status.ok()) return _pg_status;   \
  } while (0)

#define PRIVGAMES_STATUS_CONCAT_INNER(a, b) a##b
#define PRIVGAMES_STATUS_CONCAT(a, b) PRIVGAMES_STATUS_CONCAT_INNER(a, b)

#define PRIVGAMES_ASSIGN_OR_RETURN(lhs, expr) \
  PRIVGAMES_ASSIGN_OR_RETURN_IMPL(            \
      PRIVGAMES_STATUS_CONCAT(_pg_statusor_, __LINE__), lhs, expr)

#define PRIVGAMES_ASSIGN_OR_RETURN_IMPL(statusor, lhs, expr) \
  auto statusor = (expr);                                    \
  if (!statusor.ok()) return statusor.status();              \
  lhs = std::move(statusor).value()

#endif  // PRIVGAMES_STATUS_MACROS_H_
