//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_IO_H_
#define ESIAUG_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esiaug/model.h"
#include "esiaug/record.h"
#include "esiaug/seqid.h"
#include "esiaug/synth.h"

namespace esiaug {

// ---------------------------------------------------------------------------
// Datasets

/// kDelimited is tab-separated with a header row. kRecordStream holds one
/// JSON object per line.
enum class DatasetFormat { kDelimited, kRecordStream };

std::string_view format_name(DatasetFormat f);
std::optional<DatasetFormat> format_from_name(std::string_view name);

/// ".jsonl" selects the record stream; anything else is delimited.
DatasetFormat format_for_path(const std::filesystem::path &path);

/// Column order of the delimited format. Optional fields are left empty
/// when absent; atom masks are written as a string of 0 and 1.
inline constexpr std::string_view kDatasetColumns[] = {
  "id",       "task",           "sequence", "smiles",      "value",
  "organism", "substrate_name", "ph",       "temperature", "atom_mask",
};

/// Parses and validates every record. Errors name `source` and the 1-based
/// line: ParseError for malformed rows, invalid sequences or SMILES and
/// non-finite values, DuplicateId for a repeated id.
std::vector<EsiRecord> read_dataset(std::istream &is, DatasetFormat format,
                                    std::string_view source = "<stream>");
std::vector<EsiRecord> read_dataset(const std::filesystem::path &path,
                                    DatasetFormat format);
std::vector<EsiRecord> read_dataset(const std::filesystem::path &path);

/// Fixed field order; reals use 17 significant digits.
void write_dataset(std::ostream &os, std::span<const EsiRecord> records,
                   DatasetFormat format);
void write_dataset(const std::filesystem::path &path,
                   std::span<const EsiRecord> records, DatasetFormat format);
void write_dataset(const std::filesystem::path &path,
                   std::span<const EsiRecord> records);

/// Shortest text that reads back to the same double.
std::string format_real(double v);

// ---------------------------------------------------------------------------
// Run configuration

/// Everything a command needs besides its file arguments. The seed is kept
/// out of the echo and hash and travels next to them instead.
struct RunConfig {
  TrainConfig train;
  std::vector<double> thresholds { 0.40, 0.60, 0.80, 0.99 };
  double test_fraction = 0.2;
  double val_fraction = 0.0;
  // Identity threshold of the internal split used by the ablations.
  double ablation_threshold = 0.6;
  SynthConfig synth;
  std::uint64_t seed = 0;

  /// Copies `seed` into the training, augmentation and synth settings.
  void set_seed(std::uint64_t s);

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Unknown or repeated keys raise one ConfigError listing all of
/// them. The result is validated.
RunConfig parse_config(std::istream &is, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path &path);

/// Every configurable key in a fixed order, as `key=value` lines that
/// parse_config accepts.
std::vector<std::string> config_echo(const RunConfig &cfg);

/// 64-bit FNV-1a over the echo lines joined by newlines, as 16 hex digits.
std::string config_hash(const RunConfig &cfg);
std::string fnv1a_hex(std::string_view text);

// ---------------------------------------------------------------------------
// Split files

enum class SplitRole { kTrain, kVal, kTest };

std::string_view split_role_name(SplitRole r);

/// Assignment of records to roles at one identity threshold.
struct SplitFile {
  double threshold = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> ids;
  std::vector<SplitRole> roles;

  std::vector<std::string> ids_with(SplitRole r) const;
};

/// `# seed=`, `# config_hash=` and `# threshold=` headers, a column header,
/// then `record_id<TAB>split<TAB>threshold` rows.
void write_split(std::ostream &os, const SplitFile &split);
SplitFile read_split(std::istream &is, std::string_view source = "<split>");
SplitFile read_split(const std::filesystem::path &path);

/// Records of `ds` with the given role, in dataset order. Throws ParseError
/// when the split names an id missing from the dataset.
std::vector<EsiRecord> select_records(std::span<const EsiRecord> ds,
                                      const SplitFile &split, SplitRole role);

// ---------------------------------------------------------------------------
// Training log

void write_training_log(std::ostream &os, const TrainResult &result,
                        std::uint64_t seed, const std::string &config_hash);

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path &path);

/// Writes through a temporary sibling and renames it into place. Throws
/// IoError.
void write_text_file(const std::filesystem::path &path, std::string_view text);

}  // namespace esiaug

#endif  // ESIAUG_IO_H_
