//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_RECORD_H_
#define ESIAUG_RECORD_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esiaug {

enum class Task { kKcat, kKm };

std::string_view task_name(Task t);
std::optional<Task> task_from_name(std::string_view name);

/// One enzyme-substrate measurement as stored on disk. `value` is the log10
/// kinetic parameter. `atom_mask` is present only on graph-masked augmented
/// records and indexes atoms in the parse order of `smiles`.
struct EsiRecord {
  std::string id;
  std::string sequence;
  std::string smiles;
  double value = 0;
  Task task = Task::kKcat;
  std::optional<std::string> organism;
  std::optional<std::string> substrate_name;
  std::optional<double> ph;
  std::optional<double> temperature;
  std::optional<std::vector<bool>> atom_mask;

  friend bool operator==(const EsiRecord &, const EsiRecord &) = default;
};

}  // namespace esiaug

#endif  // ESIAUG_RECORD_H_
