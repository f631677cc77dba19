//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_AUGMENT_H_
#define ESIAUG_AUGMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esiaug/molgraph.h"
#include "esiaug/record.h"
#include "esiaug/rng.h"

namespace esiaug {

/// Residue string over the 20 canonical amino acids plus the MASK symbol.
class EnzymeSeq {
public:
  static constexpr char kMask = 'X';
  static constexpr std::string_view kAlphabet = "ACDEFGHIKLMNPQRSTVWYX";

  EnzymeSeq() = default;

  /// Throws SequenceError on an empty string or a symbol outside kAlphabet.
  explicit EnzymeSeq(std::string residues);

  const std::string &str() const { return residues_; }
  std::size_t size() const { return residues_.size(); }
  char operator[](std::size_t i) const { return residues_[i]; }
  std::size_t mask_count() const;

  /// Index of a symbol in kAlphabet, or -1.
  static int symbol_index(char c);

  friend bool operator==(const EnzymeSeq &, const EnzymeSeq &) = default;

private:
  friend EnzymeSeq mask_sequence(const EnzymeSeq &, double, Rng &);

  std::string residues_;
};

enum class SubstrateMode { kEnumeration, kGraphMask };

std::string_view substrate_mode_name(SubstrateMode m);
std::optional<SubstrateMode> substrate_mode_from_name(std::string_view name);

inline constexpr double kMaxMaskRatio = 0.3;
inline constexpr double kDefaultMaskRatio = 0.10;

struct AugmentConfig {
  double p_s = kDefaultMaskRatio;
  double p_g = kDefaultMaskRatio;
  SubstrateMode substrate_mode = SubstrateMode::kGraphMask;
  std::uint64_t seed = 0;

  /// Throws ConfigError when a ratio leaves [0, kMaxMaskRatio].
  void validate() const;
};

/// An enzyme-substrate pair in memory. The raw pair and its augmented
/// counterpart share this type.
struct EsiPair {
  EnzymeSeq enzyme;
  MolGraph substrate;
  // Rendering of `substrate` that the pair was built from.
  std::string smiles;
  std::optional<std::vector<bool>> substrate_mask;
  double target = 0;
  std::map<std::string, std::string> metadata;
};

/// floor(p * n), guarded against binary representation error in p.
std::size_t mask_target(double p, std::size_t n);

EnzymeSeq mask_sequence(const EnzymeSeq &e, double p_s, Rng &rng);

std::vector<bool> mask_graph(const MolGraph &g, double p_g, Rng &rng);

EsiPair augment_pair(const EsiPair &p, const AugmentConfig &cfg, Rng &rng);

EsiPair pair_from_record(const EsiRecord &r);

struct AugmentedRecord {
  EsiRecord raw;
  EsiRecord augmented;
};

/// One augmented counterpart per record, each drawn from a stream derived
/// from (cfg.seed, record index). Records are processed in parallel; output
/// order follows input order.
std::vector<AugmentedRecord> augment_dataset(std::span<const EsiRecord> ds,
                                             const AugmentConfig &cfg);

}  // namespace esiaug

#endif  // ESIAUG_AUGMENT_H_
