//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/augment.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "esiaug/error.h"
#include "esiaug/parallel.h"

namespace esiaug {

EnzymeSeq::EnzymeSeq(std::string residues): residues_(std::move(residues)) {
  if (residues_.empty())
    throw SequenceError("empty enzyme sequence");
  for (std::size_t i = 0; i < residues_.size(); ++i)
    if (symbol_index(residues_[i]) < 0)
      throw SequenceError("invalid residue '" + std::string(1, residues_[i])
                          + "' at position " + std::to_string(i));
}

std::size_t EnzymeSeq::mask_count() const {
  return std::count(residues_.begin(), residues_.end(), kMask);
}

int EnzymeSeq::symbol_index(char c) {
  std::size_t pos = kAlphabet.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

std::string_view substrate_mode_name(SubstrateMode m) {
  return m == SubstrateMode::kEnumeration ? "enumeration" : "graph_mask";
}

std::optional<SubstrateMode> substrate_mode_from_name(std::string_view name) {
  if (name == "enumeration")
    return SubstrateMode::kEnumeration;
  if (name == "graph_mask")
    return SubstrateMode::kGraphMask;
  return std::nullopt;
}

void AugmentConfig::validate() const {
  auto check = [](double p, const char *key) {
    if (!(p >= 0.0 && p <= kMaxMaskRatio))
      throw ConfigError(std::string(key) + "=" + std::to_string(p)
                        + " outside [0, 0.3]");
  };
  check(p_s, "p_s");
  check(p_g, "p_g");
}

std::size_t mask_target(double p, std::size_t n) {
  return static_cast<std::size_t>(
      std::floor(p * static_cast<double>(n) + 1e-9));
}

EnzymeSeq mask_sequence(const EnzymeSeq &e, double p_s, Rng &rng) {
  EnzymeSeq out = e;
  for (std::size_t pos: rng.sample(e.size(), mask_target(p_s, e.size())))
    out.residues_[pos] = EnzymeSeq::kMask;
  return out;
}

std::vector<bool> mask_graph(const MolGraph &g, double p_g, Rng &rng) {
  std::vector<int> pool;
  for (int i = 0; i < g.size(); ++i)
    if (!g.protected_atoms()[i])
      pool.push_back(i);

  std::vector<bool> mask(g.size(), false);
  const std::size_t target = mask_target(p_g, g.size());
  for (std::size_t k: rng.sample(pool.size(), target))
    mask[pool[k]] = true;
  return mask;
}

EsiPair augment_pair(const EsiPair &p, const AugmentConfig &cfg, Rng &rng) {
  EsiPair out;
  out.enzyme = mask_sequence(p.enzyme, cfg.p_s, rng);
  out.target = p.target;
  out.metadata = p.metadata;

  if (cfg.substrate_mode == SubstrateMode::kEnumeration) {
    int start = static_cast<int>(rng.below(p.substrate.size()));
    out.smiles = write_smiles(p.substrate, start, rng);
    out.substrate = parse_smiles(out.smiles);
  } else {
    out.substrate = p.substrate;
    out.smiles = p.smiles;
    out.substrate_mask = mask_graph(p.substrate, cfg.p_g, rng);
  }
  return out;
}

EsiPair pair_from_record(const EsiRecord &r) {
  EsiPair p;
  p.enzyme = EnzymeSeq(r.sequence);
  p.substrate = parse_smiles(r.smiles);
  p.smiles = r.smiles;
  p.substrate_mask = r.atom_mask;
  p.target = r.value;
  return p;
}

std::vector<AugmentedRecord> augment_dataset(std::span<const EsiRecord> ds,
                                             const AugmentConfig &cfg) {
  cfg.validate();
  std::vector<AugmentedRecord> out(ds.size());
  parallel_for(static_cast<std::ptrdiff_t>(ds.size()), [&](std::ptrdiff_t i) {
    const EsiRecord &rec = ds[i];
    Rng rng(derive_seed(cfg.seed, { static_cast<std::uint64_t>(i) }));
    EsiPair aug = augment_pair(pair_from_record(rec), cfg, rng);

    EsiRecord a = rec;
    a.sequence = aug.enzyme.str();
    a.smiles = aug.smiles;
    a.atom_mask = aug.substrate_mask;
    out[i] = { rec, std::move(a) };
  });
  return out;
}

}  // namespace esiaug
