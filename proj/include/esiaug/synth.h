//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_SYNTH_H_
#define ESIAUG_SYNTH_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "esiaug/model.h"
#include "esiaug/record.h"

namespace esiaug {

std::vector<std::string> default_scaffolds();

/// Knobs of the synthetic shifted benchmark. kmer_weight and
/// substrate_weight set the relative size of the two invariant parts; the
/// generated weights are rescaled so the invariant part has unit variance.
/// Family indicators have unit variance, so rho is the standard deviation of
/// the family shortcut relative to the invariant signal.
struct SynthConfig {
  int families = 18;
  int members = 24;
  int prototype_length = 80;
  double mutation_rate = 0.1;
  std::vector<std::string> scaffolds = default_scaffolds();
  int max_decorations = 3;
  int kmer_terms = 6;
  double kmer_weight = 3.0;
  double substrate_weight = 2.0;
  double noise = 0.1;
  double rho = 0.5;
  Task task = Task::kKcat;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values or unparseable scaffolds.
  void validate() const;
};

/// One term of the linear ground truth.
struct TruthTerm {
  std::string name;  // 2-mer text or descriptor name
  int index = 0;     // position in the matching feature vector
  double weight = 0;
};

struct SynthFamily {
  std::string id;
  double indicator = 0;
  std::string prototype;
};

/// Ground truth recorded next to a generated dataset.
struct SynthTruth {
  double intercept = 0;
  std::vector<TruthTerm> enzyme_terms;
  std::vector<TruthTerm> substrate_terms;
  double rho = 0;
  double noise = 0;
  std::vector<SynthFamily> families;
  std::vector<int> record_family;  // family index per record
};

struct SynthDataset {
  std::vector<EsiRecord> records;
  SynthTruth truth;
};

/// Invariant part of the target: intercept plus the weighted feature terms.
double invariant_target(const SynthTruth &truth, const FeatureVector &enzyme,
                        const FeatureVector &substrate);

/// Record ids have the form f<family>_m<member>. Each record draws from a
/// stream derived from (seed, family, member), so generation is parallel
/// and byte-reproducible.
SynthDataset generate(const SynthConfig &cfg);

void write_truth(std::ostream &os, const SynthTruth &truth, std::uint64_t seed,
                 const std::string &config_hash);
SynthTruth read_truth(std::istream &is);

}  // namespace esiaug

#endif  // ESIAUG_SYNTH_H_
