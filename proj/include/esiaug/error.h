//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_ERROR_H_
#define ESIAUG_ERROR_H_

#include <stdexcept>
#include <string>

namespace esiaug {

// Coarse failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kConfig = 2,
  kData = 3,
  kNumeric = 4,
};

class Error: public std::runtime_error {
public:
  Error(ErrorKind kind, std::string code, const std::string &what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) { }

  ErrorKind kind() const noexcept { return kind_; }
  const std::string &code() const noexcept { return code_; }

private:
  ErrorKind kind_;
  std::string code_;
};

#define ESIAUG_DEFINE_ERROR(Name, Kind, Code)                                  \
  class Name: public Error {                                                   \
  public:                                                                      \
    explicit Name(const std::string &what)                                     \
        : Error(ErrorKind::Kind, Code, what) { }                               \
  }

ESIAUG_DEFINE_ERROR(SyntaxError, kData, "SMILES_SYNTAX");
ESIAUG_DEFINE_ERROR(ValenceError, kData, "SMILES_VALENCE");
ESIAUG_DEFINE_ERROR(SizeError, kData, "GRAPH_TOO_LARGE");
ESIAUG_DEFINE_ERROR(SequenceError, kData, "BAD_SEQUENCE");
ESIAUG_DEFINE_ERROR(InfeasibleSplit, kData, "INFEASIBLE_SPLIT");
ESIAUG_DEFINE_ERROR(ParseError, kData, "PARSE_ERROR");
ESIAUG_DEFINE_ERROR(DuplicateId, kData, "DUPLICATE_ID");
ESIAUG_DEFINE_ERROR(IoError, kData, "IO_ERROR");
ESIAUG_DEFINE_ERROR(LengthMismatch, kData, "LENGTH_MISMATCH");
ESIAUG_DEFINE_ERROR(DimMismatch, kData, "DIM_MISMATCH");
ESIAUG_DEFINE_ERROR(EmptyDataset, kData, "EMPTY_DATASET");
ESIAUG_DEFINE_ERROR(DegenerateTargets, kNumeric, "DEGENERATE_TARGETS");
ESIAUG_DEFINE_ERROR(NonFiniteError, kNumeric, "NON_FINITE");
ESIAUG_DEFINE_ERROR(ConfigError, kConfig, "CONFIG_ERROR");

#undef ESIAUG_DEFINE_ERROR

}  // namespace esiaug

#endif  // ESIAUG_ERROR_H_
