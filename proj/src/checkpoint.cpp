//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "esiaug/error.h"
#include "esiaug/model.h"

namespace esiaug {
namespace {
constexpr std::string_view kMagic = "esiaug-checkpoint";
constexpr int kVersion = 1;

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class LineReader {
public:
  explicit LineReader(std::istream &is): is_(is) { }

  std::string next() {
    std::string line;
    if (!std::getline(is_, line))
      fail("unexpected end of checkpoint");
    ++line_no_;
    return line;
  }

  // Reads "<key> <rest>" and returns rest.
  std::string field(std::string_view key) {
    std::string line = next();
    if (line.compare(0, key.size(), key) != 0
        || (line.size() > key.size() && line[key.size()] != ' '))
      fail("expected '" + std::string(key) + "'");
    return line.size() > key.size() ? line.substr(key.size() + 1) : "";
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError("checkpoint line " + std::to_string(line_no_) + ": "
                     + msg);
  }

private:
  std::istream &is_;
  int line_no_ = 0;
};

template <class T>
T parse_number(LineReader &r, std::string_view text) {
  T v {};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    r.fail("bad number '" + std::string(text) + "'");
  return v;
}
}  // namespace

void write_checkpoint(std::ostream &os, const Checkpoint &ckpt) {
  const ModelShape &s = ckpt.params.shape();
  os << kMagic << ' ' << kVersion << '\n';
  os << "seed " << ckpt.seed << '\n';
  os << "best_epoch " << ckpt.best_epoch << '\n';
  os << "config_hash " << ckpt.config_hash << '\n';
  os << "config " << ckpt.config_echo.size() << '\n';
  for (const std::string &line: ckpt.config_echo)
    os << line << '\n';
  os << "shape " << s.enzyme_in << ' ' << s.substrate_in << ' '
     << s.enzyme_hidden << ' ' << s.substrate_hidden << ' ' << s.embedding_dim
     << '\n';
  for (const TensorInfo &t: ckpt.params.tensors()) {
    os << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
    auto v = ckpt.params.view(t);
    for (int r = 0; r < t.rows; ++r) {
      for (int c = 0; c < t.cols; ++c) {
        if (c)
          os << ' ';
        os << format_real(v[static_cast<std::size_t>(r) * t.cols + c]);
      }
      os << '\n';
    }
  }
  os << "end\n";
  if (!os)
    throw IoError("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream &is) {
  LineReader r(is);
  Checkpoint ckpt;
  const std::string version = r.field(kMagic);
  if (parse_number<int>(r, version) != kVersion)
    r.fail("unsupported checkpoint version " + version);
  ckpt.seed = parse_number<std::uint64_t>(r, r.field("seed"));
  ckpt.best_epoch = parse_number<int>(r, r.field("best_epoch"));
  ckpt.config_hash = r.field("config_hash");
  const auto lines = parse_number<std::size_t>(r, r.field("config"));
  for (std::size_t i = 0; i < lines; ++i)
    ckpt.config_echo.push_back(r.next());

  ModelShape shape;
  std::istringstream dims(r.field("shape"));
  if (!(dims >> shape.enzyme_in >> shape.substrate_in >> shape.enzyme_hidden
        >> shape.substrate_hidden >> shape.embedding_dim))
    r.fail("malformed shape");
  try {
    ckpt.params = ModelParams(shape);
  } catch (const ConfigError &e) {
    r.fail(e.what());
  }

  for (const TensorInfo &t: ckpt.params.tensors()) {
    std::istringstream head(r.field("tensor"));
    std::string name;
    int rows = 0, cols = 0;
    if (!(head >> name >> rows >> cols) || name != t.name || rows != t.rows
        || cols != t.cols)
      r.fail("expected tensor " + std::string(t.name) + " "
             + std::to_string(t.rows) + "x" + std::to_string(t.cols));
    auto v = ckpt.params.view(t);
    for (int row = 0; row < rows; ++row) {
      const std::string line = r.next();
      std::string_view rest = line;
      for (int c = 0; c < cols; ++c) {
        const std::size_t end = std::min(rest.find(' '), rest.size());
        v[static_cast<std::size_t>(row) * cols + c] =
            parse_number<double>(r, rest.substr(0, end));
        rest.remove_prefix(std::min(end + 1, rest.size()));
      }
      if (!rest.empty())
        r.fail("trailing values in tensor " + name);
    }
  }
  if (r.next() != "end")
    r.fail("missing end marker");
  if (!ckpt.params.all_finite())
    throw NonFiniteError("checkpoint holds non-finite parameters");
  return ckpt;
}

}  // namespace esiaug
