//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/synth.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include <json.hpp>

#include "esiaug/error.h"
#include "esiaug/parallel.h"
#include "esiaug/rng.h"

namespace esiaug {
namespace {
namespace sf = substrate_feature;

constexpr std::string_view kCanonical = "ACDEFGHIKLMNPQRSTVWY";

// Stream tags for derive_seed.
enum : std::uint64_t {
  kPrototypeStream = 1,
  kIndicatorStream,
  kWeightStream,
  kRecordStream,
};

struct DescriptorTerm {
  std::string_view name;
  int index;
};

constexpr DescriptorTerm kDescriptorTerms[] = {
  { "O", sf::kElement + static_cast<int>(Element::O) },
  { "N", sf::kElement + static_cast<int>(Element::N) },
  { "S", sf::kElement + static_cast<int>(Element::S) },
  { "P", sf::kElement + static_cast<int>(Element::P) },
  { "F", sf::kElement + static_cast<int>(Element::F) },
  { "Cl", sf::kElement + static_cast<int>(Element::Cl) },
  { "Br", sf::kElement + static_cast<int>(Element::Br) },
  { "ring_atoms", sf::kRingAtoms },
  { "aromatic_bonds", sf::kBondAromatic },
};

char random_residue(Rng &rng) { return kCanonical[rng.below(kCanonical.size())]; }

std::string mutate(const std::string &proto, double rate, Rng &rng) {
  std::string s = proto;
  for (char &c: s) {
    if (rng.uniform() >= rate)
      continue;
    char r;
    do {
      r = random_residue(rng);
    } while (r == c);
    c = r;
  }
  return s;
}

// Appends a methyl or halide to a random unprotected atom that still
// carries a hydrogen. Returns the input when no such atom exists.
MolGraph decorate(const MolGraph &g, Rng &rng) {
  std::vector<int> sites;
  for (int i = 0; i < g.size(); ++i)
    if (!g.protected_atoms()[i] && g.atom(i).explicit_h > 0
        && g.atom(i).element == Element::C)
      sites.push_back(i);
  if (sites.empty())
    return g;

  std::vector<Atom> atoms = g.atoms();
  std::vector<Bond> bonds = g.bonds();
  const int parent = sites[rng.below(sites.size())];
  --atoms[parent].explicit_h;
  const double u = rng.uniform();
  Atom added;
  if (u < 0.6) {
    added = { Element::C, 0, false, 3 };
  } else {
    added = { u < 0.8 ? Element::Cl : Element::Br, 0, false, 0 };
  }
  atoms.push_back(added);
  bonds.push_back({ parent, static_cast<int>(atoms.size()) - 1,
                    BondOrder::kSingle });
  return MolGraph(std::move(atoms), std::move(bonds));
}
}  // namespace

std::vector<std::string> default_scaffolds() {
  return {
    "c1ccccc1O",   "OC(=O)CCC",     "NCCCO",     "c1ccncc1",
    "OCC(O)CO",    "CCCCCC",        "CC(=O)CCC", "c1ccc2ccccc2c1",
    "CCOP(=O)(O)O", "NC(CC)C(=O)O", "CCCSC",     "CCc1ccoc1",
    "ClCCCC",      "CCC1CCCCC1",    "CCCCN",     "CCCc1ccccc1",
  };
}

void SynthConfig::validate() const {
  if (families < 1 || members < 1)
    throw ConfigError("synth families and members must be positive");
  if (prototype_length < 2)
    throw ConfigError("synth prototype_length must be at least 2");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 0.5))
    throw ConfigError("synth mutation_rate must lie in [0, 0.5]");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw ConfigError("synth rho must lie in [0, 1]");
  if (!(noise >= 0.0) || !std::isfinite(noise))
    throw ConfigError("synth noise must be non-negative");
  if (max_decorations < 0)
    throw ConfigError("synth max_decorations must be non-negative");
  if (kmer_terms < 0 || kmer_terms > 400)
    throw ConfigError("synth kmer_terms must lie in [0, 400]");
  if (!std::isfinite(kmer_weight) || !std::isfinite(substrate_weight))
    throw ConfigError("synth weights must be finite");
  if (scaffolds.empty())
    throw ConfigError("synth needs at least one scaffold");
  for (const std::string &s: scaffolds) {
    try {
      parse_smiles(s);
    } catch (const Error &e) {
      throw ConfigError("scaffold '" + s + "' does not parse: " + e.what());
    }
  }
}

double invariant_target(const SynthTruth &truth, const FeatureVector &enzyme,
                        const FeatureVector &substrate) {
  double y = truth.intercept;
  for (const TruthTerm &t: truth.enzyme_terms)
    y += t.weight * enzyme.values[t.index];
  for (const TruthTerm &t: truth.substrate_terms)
    y += t.weight * substrate.values[t.index];
  return y;
}

SynthDataset generate(const SynthConfig &cfg) {
  cfg.validate();
  std::vector<MolGraph> scaffolds;
  for (const std::string &s: cfg.scaffolds)
    scaffolds.push_back(parse_smiles(s));

  SynthDataset out;
  SynthTruth &truth = out.truth;
  truth.rho = cfg.rho;
  truth.noise = cfg.noise;

  Rng weights(derive_seed(cfg.seed, { kWeightStream }));
  std::vector<std::size_t> pairs = weights.sample(400, cfg.kmer_terms);
  for (std::size_t p: pairs) {
    const char a = kCanonical[p / 20], b = kCanonical[p % 20];
    const double sign = weights.uniform() < 0.5 ? -1.0 : 1.0;
    truth.enzyme_terms.push_back({ std::string { a, b },
                                   enzyme_pair_index(a, b),
                                   sign * cfg.kmer_weight
                                       * weights.uniform(0.5, 1.5) });
  }
  for (const DescriptorTerm &d: kDescriptorTerms) {
    const double sign = weights.uniform() < 0.5 ? -1.0 : 1.0;
    truth.substrate_terms.push_back(
        { std::string(d.name), d.index,
          sign * cfg.substrate_weight * weights.uniform(0.5, 1.5) });
  }

  // Indicators are evenly spaced with unit variance and assigned to
  // families in shuffled order, so every family has a distinct value.
  std::vector<int> rank(cfg.families);
  std::iota(rank.begin(), rank.end(), 0);
  Rng ind(derive_seed(cfg.seed, { kIndicatorStream }));
  ind.shuffle(rank);
  for (int f = 0; f < cfg.families; ++f) {
    Rng proto(derive_seed(cfg.seed, { kPrototypeStream,
                                      static_cast<std::uint64_t>(f) }));
    std::string s;
    for (int i = 0; i < cfg.prototype_length; ++i)
      s.push_back(kCanonical[i % kCanonical.size()]);
    std::vector<char> order(s.begin(), s.end());
    proto.shuffle(order);
    s.assign(order.begin(), order.end());
    const double grid = 2.0 * (rank[f] + 0.5) / cfg.families - 1.0;
    const double indicator =
        cfg.families == 1
            ? 0.0
            : grid * std::sqrt(3.0 / (1.0 - 1.0 / (double(cfg.families)
                                                    * cfg.families)));
    char id[16];
    std::snprintf(id, sizeof id, "f%02d", f);
    truth.families.push_back({ id, indicator, std::move(s) });
  }

  const std::size_t total =
      static_cast<std::size_t>(cfg.families) * cfg.members;
  out.records.resize(total);
  truth.record_family.resize(total);
  std::vector<FeatureVector> enzyme(total), substrate(total);
  std::vector<double> noise(total);
  parallel_for(static_cast<std::ptrdiff_t>(total), [&](std::ptrdiff_t r) {
    const int f = static_cast<int>(r / cfg.members);
    const int m = static_cast<int>(r % cfg.members);
    Rng rng(derive_seed(cfg.seed, { kRecordStream, static_cast<std::uint64_t>(f),
                                    static_cast<std::uint64_t>(m) }));
    EsiRecord &rec = out.records[r];
    char id[32];
    std::snprintf(id, sizeof id, "f%02d_m%03d", f, m);
    rec.id = id;
    rec.task = cfg.task;
    rec.sequence = mutate(truth.families[f].prototype, cfg.mutation_rate, rng);

    MolGraph g = scaffolds[rng.below(scaffolds.size())];
    const auto decorations = rng.below(
        static_cast<std::uint64_t>(cfg.max_decorations) + 1);
    for (std::uint64_t d = 0; d < decorations; ++d)
      g = decorate(g, rng);
    rec.smiles = canonical_smiles(g);

    enzyme[r] = featurize_enzyme(EnzymeSeq(rec.sequence));
    substrate[r] = featurize_substrate(parse_smiles(rec.smiles));
    noise[r] = cfg.noise > 0 ? cfg.noise * rng.normal() : 0.0;
    truth.record_family[r] = f;
  });

  // Rescale the weights so the invariant part has unit variance over the
  // dataset, then center it with the intercept.
  std::vector<double> raw(total);
  double mean = 0;
  for (std::size_t r = 0; r < total; ++r) {
    raw[r] = invariant_target(truth, enzyme[r], substrate[r]);
    mean += raw[r];
  }
  mean /= static_cast<double>(total);
  double var = 0;
  for (double v: raw)
    var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(total));
  if (sd > 1e-12) {
    for (TruthTerm &t: truth.enzyme_terms)
      t.weight /= sd;
    for (TruthTerm &t: truth.substrate_terms)
      t.weight /= sd;
    mean /= sd;
  }
  truth.intercept = -mean;

  for (std::size_t r = 0; r < total; ++r) {
    const SynthFamily &fam = truth.families[truth.record_family[r]];
    out.records[r].value = invariant_target(truth, enzyme[r], substrate[r])
                           + cfg.rho * fam.indicator + noise[r];
  }
  return out;
}

void write_truth(std::ostream &os, const SynthTruth &truth, std::uint64_t seed,
                 const std::string &config_hash) {
  using nlohmann::ordered_json;
  auto terms = [](const std::vector<TruthTerm> &ts) {
    ordered_json arr = ordered_json::array();
    for (const TruthTerm &t: ts)
      arr.push_back({ { "name", t.name },
                      { "index", t.index },
                      { "weight", t.weight } });
    return arr;
  };
  ordered_json j;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  j["intercept"] = truth.intercept;
  j["rho"] = truth.rho;
  j["noise"] = truth.noise;
  j["enzyme_terms"] = terms(truth.enzyme_terms);
  j["substrate_terms"] = terms(truth.substrate_terms);
  ordered_json fams = ordered_json::array();
  for (const SynthFamily &f: truth.families)
    fams.push_back({ { "id", f.id },
                     { "indicator", f.indicator },
                     { "prototype", f.prototype } });
  j["families"] = fams;
  j["record_family"] = truth.record_family;
  os << j.dump(2) << '\n';
  if (!os)
    throw IoError("failed to write ground-truth sidecar");
}

SynthTruth read_truth(std::istream &is) {
  SynthTruth t;
  try {
    const nlohmann::json j = nlohmann::json::parse(is);
    auto real = [](const nlohmann::json &v) { return v.get<double>(); };
    auto terms = [&](const nlohmann::json &arr) {
      std::vector<TruthTerm> out;
      for (const auto &e: arr)
        out.push_back({ e.at("name").get<std::string>(), e.at("index").get<int>(),
                        real(e.at("weight")) });
      return out;
    };
    t.intercept = real(j.at("intercept"));
    t.rho = real(j.at("rho"));
    t.noise = real(j.at("noise"));
    t.enzyme_terms = terms(j.at("enzyme_terms"));
    t.substrate_terms = terms(j.at("substrate_terms"));
    for (const auto &f: j.at("families"))
      t.families.push_back({ f.at("id").get<std::string>(),
                             real(f.at("indicator")),
                             f.at("prototype").get<std::string>() });
    t.record_family = j.at("record_family").get<std::vector<int>>();
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("ground-truth sidecar: ") + e.what());
  }
  for (const TruthTerm &term: t.enzyme_terms)
    if (term.index < 0 || term.index >= kEnzymeFeatures)
      throw ParseError("ground-truth sidecar: enzyme term index out of range");
  for (const TruthTerm &term: t.substrate_terms)
    if (term.index < 0 || term.index >= kSubstrateFeatures)
      throw ParseError("ground-truth sidecar: substrate term index out of range");
  return t;
}

}  // namespace esiaug
