//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_SEQID_H_
#define ESIAUG_SEQID_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esiaug/augment.h"
#include "esiaug/record.h"

namespace esiaug {

struct GlobalAlignment {
  int score = 0;
  int identical = 0;  // columns with the same residue on both sides
  int length = 0;     // columns, gaps included
};

/// Needleman-Wunsch with match +1, mismatch 0, linear gap -1. Traceback
/// prefers the diagonal, then up (gap in b), then left (gap in a).
GlobalAlignment align_global(std::string_view a, std::string_view b);

/// Identical columns over gap-inclusive alignment length.
double global_identity(std::string_view a, std::string_view b);
double global_identity(const EnzymeSeq &a, const EnzymeSeq &b);

/// Dense symmetric all-pairs identity matrix with a unit diagonal.
class IdentityMatrix {
public:
  IdentityMatrix() = default;
  explicit IdentityMatrix(std::size_t n): n_(n), values_(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      values_[i * n + i] = 1.0;
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

  friend bool operator==(const IdentityMatrix &,
                         const IdentityMatrix &) = default;

private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// All-pairs identity, parallel over the upper triangle.
IdentityMatrix identity_matrix(std::span<const std::string> seqs);

/// Single-threaded reference for identity_matrix.
IdentityMatrix identity_matrix_serial(std::span<const std::string> seqs);

struct Cluster {
  std::size_t representative;
  std::vector<std::size_t> members;  // representative first
};

/// Greedy representative clustering: sequences are visited by descending
/// length (input order among equal lengths); each joins the first cluster
/// whose representative has identity > threshold, otherwise founds one.
std::vector<Cluster> greedy_cluster(std::span<const std::string> seqs,
                                    double threshold);

/// Same procedure against a precomputed identity matrix.
std::vector<Cluster> greedy_cluster(std::span<const std::string> seqs,
                                    const IdentityMatrix &identity,
                                    double threshold);

struct OodSplit {
  double threshold = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  // Largest test-train identity found by the exhaustive check.
  double max_cross_identity = 0;
};

/// One train/test split per threshold. Whole clusters are moved to the test
/// side, smallest first (ties shuffled by `seed`), until at least
/// test_fraction of the records are held out. Test sets are drawn
/// independently per threshold. Throws InfeasibleSplit when a single
/// cluster holds more than 1 - test_fraction of the records.
std::vector<OodSplit> build_ood_splits(std::span<const EsiRecord> ds,
                                       std::span<const double> thresholds,
                                       double test_fraction,
                                       std::uint64_t seed);

/// Exhaustive test-by-train identity maximum for a split.
double max_cross_identity(std::span<const EsiRecord> ds,
                          const OodSplit &split);

double max_identity_to_train(std::string_view query,
                             std::span<const std::string> train);

/// max_identity_to_train for every query, parallel over queries.
std::vector<double> max_identity_to_train(std::span<const std::string> queries,
                                          std::span<const std::string> train);

}  // namespace esiaug

#endif  // ESIAUG_SEQID_H_
