//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "esiaug/augment.h"
#include "esiaug/error.h"
#include "esiaug/molgraph.h"

namespace esiaug {

namespace {

std::string location(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && space(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && space(s.back()))
    s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

std::vector<bool> parse_mask(std::string_view s) {
  std::vector<bool> mask;
  for (char c: s) {
    if (c != '0' && c != '1')
      throw ParseError("atom_mask must contain only 0 and 1");
    mask.push_back(c == '1');
  }
  return mask;
}

std::string mask_text(const std::vector<bool> &mask) {
  std::string s;
  for (bool b: mask)
    s.push_back(b ? '1' : '0');
  return s;
}

void validate_record(const EsiRecord &r) {
  if (r.id.empty())
    throw ParseError("empty id");
  EnzymeSeq seq(r.sequence);
  const MolGraph g = parse_smiles(r.smiles);
  if (!std::isfinite(r.value))
    throw ParseError("value must be finite");
  if (r.atom_mask && static_cast<int>(r.atom_mask->size()) != g.size())
    throw ParseError("atom_mask length " + std::to_string(r.atom_mask->size())
                     + " does not match " + std::to_string(g.size())
                     + " atoms");
  for (const auto &text: { r.id, r.organism.value_or(""),
                           r.substrate_name.value_or("") })
    if (text.find_first_of("\t\r\n") != std::string::npos)
      throw ParseError("text fields may not contain tabs or newlines");
}

EsiRecord record_from_fields(std::span<const std::string_view> f) {
  EsiRecord r;
  r.id = f[0];
  const auto task = task_from_name(f[1]);
  if (!task)
    throw ParseError("unknown task '" + std::string(f[1]) + "'");
  r.task = *task;
  r.sequence = f[2];
  r.smiles = f[3];
  const auto value = parse_real(f[4]);
  if (!value)
    throw ParseError("value '" + std::string(f[4]) + "' is not a number");
  r.value = *value;
  if (!f[5].empty())
    r.organism = std::string(f[5]);
  if (!f[6].empty())
    r.substrate_name = std::string(f[6]);
  auto optional_real = [](std::string_view s, const char *name)
      -> std::optional<double> {
    if (s.empty())
      return std::nullopt;
    const auto v = parse_real(s);
    if (!v || !std::isfinite(*v))
      throw ParseError(std::string(name) + " '" + std::string(s)
                       + "' is not a finite number");
    return v;
  };
  r.ph = optional_real(f[7], "ph");
  r.temperature = optional_real(f[8], "temperature");
  if (!f[9].empty())
    r.atom_mask = parse_mask(f[9]);
  return r;
}

EsiRecord record_from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw ParseError("expected a JSON object");
  static const std::set<std::string> known(std::begin(kDatasetColumns),
                                           std::end(kDatasetColumns));
  for (const auto &[key, _]: j.items())
    if (!known.contains(key))
      throw ParseError("unknown field '" + key + "'");
  auto text = [&](const char *key) -> std::string {
    if (!j.contains(key) || !j[key].is_string())
      throw ParseError(std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
  };
  auto real = [&](const char *key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null())
      return std::nullopt;
    if (!j[key].is_number())
      throw ParseError(std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
  };
  EsiRecord r;
  r.id = text("id");
  const std::string task = text("task");
  const auto t = task_from_name(task);
  if (!t)
    throw ParseError("unknown task '" + task + "'");
  r.task = *t;
  r.sequence = text("sequence");
  r.smiles = text("smiles");
  const auto value = real("value");
  if (!value)
    throw ParseError("field 'value' is required");
  r.value = *value;
  if (j.contains("organism"))
    r.organism = text("organism");
  if (j.contains("substrate_name"))
    r.substrate_name = text("substrate_name");
  r.ph = real("ph");
  r.temperature = real("temperature");
  if (j.contains("atom_mask"))
    r.atom_mask = parse_mask(text("atom_mask"));
  return r;
}

std::string json_string(const std::string &s) {
  return nlohmann::json(s).dump();
}

void check_writable(const EsiRecord &r) {
  try {
    validate_record(r);
  } catch (const Error &e) {
    throw IoError("record '" + r.id + "' cannot be written: " + e.what());
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view format_name(DatasetFormat f) {
  return f == DatasetFormat::kDelimited ? "tsv" : "jsonl";
}

std::optional<DatasetFormat> format_from_name(std::string_view name) {
  if (name == "tsv")
    return DatasetFormat::kDelimited;
  if (name == "jsonl")
    return DatasetFormat::kRecordStream;
  return std::nullopt;
}

DatasetFormat format_for_path(const std::filesystem::path &path) {
  return path.extension() == ".jsonl" ? DatasetFormat::kRecordStream
                                      : DatasetFormat::kDelimited;
}

std::vector<EsiRecord> read_dataset(std::istream &is, DatasetFormat format,
                                    std::string_view source) {
  std::vector<EsiRecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header = format == DatasetFormat::kDelimited;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (header) {
      const auto cols = split_fields(line, '\t');
      if (!std::equal(cols.begin(), cols.end(), std::begin(kDatasetColumns),
                      std::end(kDatasetColumns)))
        throw ParseError(location(source, line_no)
                         + "header does not match the dataset columns");
      header = false;
      continue;
    }
    if (trim(line).empty())
      continue;
    EsiRecord r;
    try {
      if (format == DatasetFormat::kDelimited) {
        const auto fields = split_fields(line, '\t');
        if (fields.size() != std::size(kDatasetColumns))
          throw ParseError("expected " + std::to_string(std::size(kDatasetColumns))
                           + " fields, found " + std::to_string(fields.size()));
        r = record_from_fields(fields);
      } else {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception &e) {
          throw ParseError(std::string("malformed JSON: ") + e.what());
        }
        r = record_from_json(j);
      }
      validate_record(r);
    } catch (const Error &e) {
      throw ParseError(location(source, line_no) + e.what());
    }
    const auto [it, fresh] = seen.emplace(r.id, line_no);
    if (!fresh)
      throw DuplicateId(location(source, line_no) + "duplicate id '" + r.id
                        + "' (first on line " + std::to_string(it->second)
                        + ")");
    out.push_back(std::move(r));
  }
  if (header)
    throw ParseError(location(source, 1) + "missing header");
  return out;
}

std::vector<EsiRecord> read_dataset(const std::filesystem::path &path,
                                    DatasetFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  return read_dataset(in, format, path.string());
}

std::vector<EsiRecord> read_dataset(const std::filesystem::path &path) {
  return read_dataset(path, format_for_path(path));
}

void write_dataset(std::ostream &os, std::span<const EsiRecord> records,
                   DatasetFormat format) {
  std::set<std::string> ids;
  for (const EsiRecord &r: records) {
    check_writable(r);
    if (!ids.insert(r.id).second)
      throw IoError("duplicate id '" + r.id + "'");
  }
  auto opt_real = [](const std::optional<double> &v) {
    return v ? format_real(*v) : std::string();
  };
  if (format == DatasetFormat::kDelimited) {
    for (std::size_t i = 0; i < std::size(kDatasetColumns); ++i)
      os << (i ? "\t" : "") << kDatasetColumns[i];
    os << '\n';
    for (const EsiRecord &r: records)
      os << r.id << '\t' << task_name(r.task) << '\t' << r.sequence << '\t'
         << r.smiles << '\t' << format_real(r.value) << '\t'
         << r.organism.value_or("") << '\t' << r.substrate_name.value_or("")
         << '\t' << opt_real(r.ph) << '\t' << opt_real(r.temperature) << '\t'
         << (r.atom_mask ? mask_text(*r.atom_mask) : "") << '\n';
    return;
  }
  for (const EsiRecord &r: records) {
    os << "{\"id\":" << json_string(r.id) << ",\"task\":\""
       << task_name(r.task) << "\",\"sequence\":" << json_string(r.sequence)
       << ",\"smiles\":" << json_string(r.smiles)
       << ",\"value\":" << format_real(r.value);
    if (r.organism)
      os << ",\"organism\":" << json_string(*r.organism);
    if (r.substrate_name)
      os << ",\"substrate_name\":" << json_string(*r.substrate_name);
    if (r.ph)
      os << ",\"ph\":" << format_real(*r.ph);
    if (r.temperature)
      os << ",\"temperature\":" << format_real(*r.temperature);
    if (r.atom_mask)
      os << ",\"atom_mask\":\"" << mask_text(*r.atom_mask) << '"';
    os << "}\n";
  }
}

void write_dataset(const std::filesystem::path &path,
                   std::span<const EsiRecord> records, DatasetFormat format) {
  std::ostringstream os;
  write_dataset(os, records, format);
  write_text_file(path, os.str());
}

void write_dataset(const std::filesystem::path &path,
                   std::span<const EsiRecord> records) {
  write_dataset(path, records, format_for_path(path));
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

struct ConfigKey {
  const char *name;
  std::string (*get)(const RunConfig &);
  void (*set)(RunConfig &, std::string_view);
};

double real_value(std::string_view v) {
  const auto x = parse_real(v);
  if (!x || !std::isfinite(*x))
    throw ConfigError("'" + std::string(v) + "' is not a finite number");
  return *x;
}

int int_value(std::string_view v) {
  const auto x = parse_int<int>(v);
  if (!x)
    throw ConfigError("'" + std::string(v) + "' is not an integer");
  return *x;
}

bool bool_value(std::string_view v) {
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  throw ConfigError("'" + std::string(v) + "' is not a boolean");
}

std::vector<std::string_view> list_value(std::string_view v) {
  std::vector<std::string_view> out;
  for (std::string_view item: split_fields(v, ','))
    if (!trim(item).empty())
      out.push_back(trim(item));
  return out;
}

template <class T>
std::string join(const std::vector<T> &items, std::string (*fmt)(const T &)) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i)
    s += (i ? "," : "") + fmt(items[i]);
  return s;
}

std::string real_text(const double &v) { return format_real(v); }
std::string str_text(const std::string &v) { return v; }

#define ESIAUG_REAL_KEY(key, field)                                            \
  ConfigKey {                                                                  \
    key, [](const RunConfig &c) { return format_real(c.field); },              \
        [](RunConfig &c, std::string_view v) { c.field = real_value(v); }      \
  }
#define ESIAUG_INT_KEY(key, field)                                             \
  ConfigKey {                                                                  \
    key, [](const RunConfig &c) { return std::to_string(c.field); },           \
        [](RunConfig &c, std::string_view v) { c.field = int_value(v); }       \
  }

const std::vector<ConfigKey> &config_keys() {
  static const std::vector<ConfigKey> keys = {
    ESIAUG_REAL_KEY("p_s", train.augment.p_s),
    ESIAUG_REAL_KEY("p_g", train.augment.p_g),
    { "substrate_mode",
      [](const RunConfig &c) {
        return std::string(substrate_mode_name(c.train.augment.substrate_mode));
      },
      [](RunConfig &c, std::string_view v) {
        const auto m = substrate_mode_from_name(v);
        if (!m)
          throw ConfigError("'" + std::string(v)
                            + "' is not enumeration or graph_mask");
        c.train.augment.substrate_mode = *m;
      } },
    ESIAUG_REAL_KEY("lambda", train.lambda),
    { "normalize_embeddings",
      [](const RunConfig &c) {
        return std::string(c.train.normalize_embeddings ? "true" : "false");
      },
      [](RunConfig &c, std::string_view v) {
        c.train.normalize_embeddings = bool_value(v);
      } },
    ESIAUG_REAL_KEY("learning_rate", train.learning_rate),
    ESIAUG_INT_KEY("epochs", train.epochs),
    ESIAUG_INT_KEY("batch_size", train.batch_size),
    ESIAUG_INT_KEY("enzyme_hidden", train.shape.enzyme_hidden),
    ESIAUG_INT_KEY("substrate_hidden", train.shape.substrate_hidden),
    ESIAUG_INT_KEY("embedding_dim", train.shape.embedding_dim),
    { "thresholds",
      [](const RunConfig &c) { return join(c.thresholds, real_text); },
      [](RunConfig &c, std::string_view v) {
        c.thresholds.clear();
        for (std::string_view item: list_value(v))
          c.thresholds.push_back(real_value(item));
      } },
    ESIAUG_REAL_KEY("test_fraction", test_fraction),
    ESIAUG_REAL_KEY("val_fraction", val_fraction),
    ESIAUG_REAL_KEY("ablation_threshold", ablation_threshold),
    ESIAUG_INT_KEY("synth.families", synth.families),
    ESIAUG_INT_KEY("synth.members", synth.members),
    ESIAUG_INT_KEY("synth.prototype_length", synth.prototype_length),
    ESIAUG_REAL_KEY("synth.mutation_rate", synth.mutation_rate),
    ESIAUG_INT_KEY("synth.max_decorations", synth.max_decorations),
    ESIAUG_INT_KEY("synth.kmer_terms", synth.kmer_terms),
    ESIAUG_REAL_KEY("synth.kmer_weight", synth.kmer_weight),
    ESIAUG_REAL_KEY("synth.substrate_weight", synth.substrate_weight),
    ESIAUG_REAL_KEY("synth.noise", synth.noise),
    ESIAUG_REAL_KEY("synth.rho", synth.rho),
    { "synth.task",
      [](const RunConfig &c) { return std::string(task_name(c.synth.task)); },
      [](RunConfig &c, std::string_view v) {
        const auto t = task_from_name(v);
        if (!t)
          throw ConfigError("'" + std::string(v) + "' is not kcat or km");
        c.synth.task = *t;
      } },
    { "synth.scaffolds",
      [](const RunConfig &c) { return join(c.synth.scaffolds, str_text); },
      [](RunConfig &c, std::string_view v) {
        c.synth.scaffolds.clear();
        for (std::string_view item: list_value(v))
          c.synth.scaffolds.emplace_back(item);
      } },
  };
  return keys;
}

#undef ESIAUG_REAL_KEY
#undef ESIAUG_INT_KEY

}  // namespace

void RunConfig::set_seed(std::uint64_t s) {
  seed = s;
  train.seed = s;
  train.augment.seed = s;
  synth.seed = s;
}

void RunConfig::validate() const {
  train.validate();
  if (thresholds.empty())
    throw ConfigError("thresholds must not be empty");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] <= 1.0))
      throw ConfigError("thresholds must lie in (0, 1]");
    if (i && !(thresholds[i] > thresholds[i - 1]))
      throw ConfigError("thresholds must be strictly increasing");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test_fraction must lie in (0, 1)");
  if (!(val_fraction >= 0.0 && test_fraction + val_fraction < 1.0))
    throw ConfigError("val_fraction must be non-negative with "
                      "test_fraction + val_fraction < 1");
  if (!(ablation_threshold > 0.0 && ablation_threshold <= 1.0))
    throw ConfigError("ablation_threshold must lie in (0, 1]");
  synth.validate();
}

RunConfig parse_config(std::istream &is, std::string_view source) {
  RunConfig cfg;
  std::unordered_map<std::string_view, const ConfigKey *> by_name;
  for (const ConfigKey &k: config_keys())
    by_name.emplace(k.name, &k);

  std::vector<std::string> unknown, repeated;
  std::set<std::string> assigned;
  std::optional<std::uint64_t> seed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#')
      continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(location(source, line_no) + "expected key = value");
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    if (!assigned.insert(key).second) {
      repeated.push_back(key);
      continue;
    }
    if (key == "seed") {
      const auto s = parse_int<std::uint64_t>(value);
      if (!s)
        throw ConfigError(location(source, line_no) + "seed '"
                          + std::string(value) + "' is not an integer");
      seed = *s;
      continue;
    }
    const auto it = by_name.find(key);
    if (it == by_name.end()) {
      unknown.push_back(key);
      continue;
    }
    try {
      it->second->set(cfg, value);
    } catch (const ConfigError &e) {
      throw ConfigError(location(source, line_no) + key + ": " + e.what());
    }
  }
  if (!unknown.empty() || !repeated.empty()) {
    std::string msg = std::string(source) + ":";
    auto list = [&](const char *what, const std::vector<std::string> &keys) {
      if (keys.empty())
        return;
      msg += std::string(" ") + what + " key(s)";
      for (const std::string &k: keys)
        msg += " " + k;
      msg += ";";
    };
    list("unknown", unknown);
    list("repeated", repeated);
    msg.pop_back();
    throw ConfigError(msg);
  }
  cfg.set_seed(seed.value_or(0));
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.string());
}

std::vector<std::string> config_echo(const RunConfig &cfg) {
  std::vector<std::string> out;
  for (const ConfigKey &k: config_keys())
    out.push_back(std::string(k.name) + "=" + k.get(cfg));
  return out;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c: text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig &cfg) {
  std::string text;
  for (const std::string &line: config_echo(cfg))
    text += line + "\n";
  return fnv1a_hex(text);
}

// ---------------------------------------------------------------------------
// Split files

std::string_view split_role_name(SplitRole r) {
  switch (r) {
  case SplitRole::kTrain: return "train";
  case SplitRole::kVal: return "val";
  case SplitRole::kTest: return "test";
  }
  return "";
}

std::vector<std::string> SplitFile::ids_with(SplitRole r) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (roles[i] == r)
      out.push_back(ids[i]);
  return out;
}

void write_split(std::ostream &os, const SplitFile &split) {
  const std::string t = format_real(split.threshold);
  os << "# seed=" << split.seed << '\n'
     << "# config_hash=" << split.config_hash << '\n'
     << "# threshold=" << t << '\n'
     << "record_id\tsplit\tthreshold\n";
  for (std::size_t i = 0; i < split.ids.size(); ++i)
    os << split.ids[i] << '\t' << split_role_name(split.roles[i]) << '\t' << t
       << '\n';
}

SplitFile read_split(std::istream &is, std::string_view source) {
  SplitFile s;
  bool have_seed = false, have_hash = false, have_threshold = false;
  bool have_columns = false;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &msg) {
    throw ParseError(location(source, line_no) + msg);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (line.front() == '#') {
      const std::string_view text = trim(std::string_view(line).substr(1));
      const std::size_t eq = text.find('=');
      if (eq == std::string_view::npos)
        continue;
      const std::string_view key = text.substr(0, eq), value = text.substr(eq + 1);
      if (key == "seed") {
        const auto v = parse_int<std::uint64_t>(value);
        if (!v)
          fail("bad seed");
        s.seed = *v;
        have_seed = true;
      } else if (key == "config_hash") {
        s.config_hash = value;
        have_hash = true;
      } else if (key == "threshold") {
        const auto v = parse_real(value);
        if (!v)
          fail("bad threshold");
        s.threshold = *v;
        have_threshold = true;
      }
      continue;
    }
    if (!have_columns) {
      if (line != "record_id\tsplit\tthreshold")
        fail("expected the record_id/split/threshold header");
      have_columns = true;
      continue;
    }
    const auto f = split_fields(line, '\t');
    if (f.size() != 3)
      fail("expected 3 fields");
    SplitRole role;
    if (f[1] == "train")
      role = SplitRole::kTrain;
    else if (f[1] == "val")
      role = SplitRole::kVal;
    else if (f[1] == "test")
      role = SplitRole::kTest;
    else
      fail("unknown split '" + std::string(f[1]) + "'");
    const auto t = parse_real(f[2]);
    if (!t || (have_threshold && *t != s.threshold))
      fail("threshold column disagrees with the header");
    if (!ids.insert(std::string(f[0])).second)
      throw DuplicateId(location(source, line_no) + "duplicate id '"
                        + std::string(f[0]) + "'");
    s.ids.emplace_back(f[0]);
    s.roles.push_back(role);
  }
  if (!have_seed || !have_hash || !have_threshold || !have_columns)
    throw ParseError(std::string(source)
                     + ": missing seed, config_hash, threshold or header");
  return s;
}

SplitFile read_split(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  return read_split(in, path.string());
}

std::vector<EsiRecord> select_records(std::span<const EsiRecord> ds,
                                      const SplitFile &split, SplitRole role) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < ds.size(); ++i)
    index.emplace(ds[i].id, i);
  std::vector<bool> take(ds.size(), false);
  for (std::size_t i = 0; i < split.ids.size(); ++i) {
    const auto it = index.find(split.ids[i]);
    if (it == index.end())
      throw ParseError("split id '" + split.ids[i] + "' is not in the dataset");
    if (split.roles[i] == role)
      take[it->second] = true;
  }
  std::vector<EsiRecord> out;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (take[i])
      out.push_back(ds[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Training log

void write_training_log(std::ostream &os, const TrainResult &result,
                        std::uint64_t seed, const std::string &config_hash) {
  os << "# seed=" << seed << '\n'
     << "# config_hash=" << config_hash << '\n'
     << "# best_epoch=" << result.best_epoch << '\n'
     << "# aborted=" << (result.aborted ? "true" : "false") << '\n';
  if (result.aborted)
    os << "# diagnostic=" << result.diagnostic << '\n';
  os << "epoch\ttrain_loss\ttrain_base\ttrain_cons\tval_r2\tval_mae\n";
  for (const EpochLog &e: result.log)
    os << e.epoch << '\t' << format_real(e.train_loss) << '\t'
       << format_real(e.train_base) << '\t' << format_real(e.train_cons)
       << '\t' << format_real(e.val_r2) << '\t' << format_real(e.val_mae)
       << '\n';
}

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
      throw IoError("write to '" + path.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string()
                  + "': " + ec.message());
}

}  // namespace esiaug
