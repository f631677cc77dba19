//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/record.h"

namespace esiaug {

std::string_view task_name(Task t) {
  return t == Task::kKcat ? "kcat" : "km";
}

std::optional<Task> task_from_name(std::string_view name) {
  if (name == "kcat")
    return Task::kKcat;
  if (name == "km")
    return Task::kKm;
  return std::nullopt;
}

}  // namespace esiaug
