//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/seqid.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "esiaug/error.h"
#include "esiaug/rng.h"

namespace esiaug {
namespace {
constexpr std::string_view kAmino = "ACDEFGHIKLMNPQRSTVWY";

std::string random_protein(std::size_t n, Rng &rng) {
  std::string s(n, 'A');
  for (char &c: s)
    c = kAmino[rng.below(kAmino.size())];
  return s;
}

std::string point_mutate(const std::string &proto, double rate, Rng &rng) {
  std::string s = proto;
  for (std::size_t pos: rng.sample(s.size(), static_cast<std::size_t>(
                                                 rate * s.size())))
    s[pos] = kAmino[(kAmino.find(s[pos]) + 1 + rng.below(19)) % 20];
  return s;
}

// 3 families x 10 members, 10% point mutations from random prototypes.
std::vector<std::string> three_families(Rng &rng, std::size_t len = 80) {
  std::vector<std::string> out;
  for (int f = 0; f < 3; ++f) {
    std::string proto = random_protein(len, rng);
    for (int m = 0; m < 10; ++m)
      out.push_back(point_mutate(proto, 0.10, rng));
  }
  return out;
}

// Every monotone alignment of two short strings; returns the identities of
// all score-optimal alignments.
std::set<double> brute_force_optimal_identities(std::string_view a,
                                                std::string_view b) {
  int best = -1000000;
  std::set<double> ids;
  std::function<void(std::size_t, std::size_t, int, int, int)> walk =
      [&](std::size_t i, std::size_t j, int score, int same, int len) {
        if (i == a.size() && j == b.size()) {
          double id = static_cast<double>(same) / len;
          if (score > best) {
            best = score;
            ids = { id };
          } else if (score == best) {
            ids.insert(id);
          }
          return;
        }
        if (i < a.size() && j < b.size()) {
          bool eq = a[i] == b[j];
          walk(i + 1, j + 1, score + (eq ? 1 : 0), same + (eq ? 1 : 0),
               len + 1);
        }
        if (i < a.size())
          walk(i + 1, j, score - 1, same, len + 1);
        if (j < b.size())
          walk(i, j + 1, score - 1, same, len + 1);
      };
  walk(0, 0, 0, 0, 0);
  return ids;
}

// Connected components of the graph with edges where identity > threshold.
std::vector<int> threshold_components(const std::vector<std::string> &seqs,
                                      double threshold) {
  const std::size_t n = seqs.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0)
      continue;
    std::vector<std::size_t> stack { s };
    comp[s] = next;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < n; ++u) {
        if (comp[u] < 0 && global_identity(seqs[v], seqs[u]) > threshold) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return comp;
}

TEST(GlobalIdentityTest, Examples) {
  EXPECT_DOUBLE_EQ(global_identity("MKTAYIAK", "MKTAYIAK"), 1.0);
  EXPECT_DOUBLE_EQ(global_identity("AAAA", "CCCC"), 0.0);
  EXPECT_DOUBLE_EQ(global_identity("ACDEFG", "ACDFG"), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(global_identity(EnzymeSeq("ACDEFG"), EnzymeSeq("ACDFG")),
                   5.0 / 6.0);
}

TEST(GlobalIdentityTest, AcdefgOracle) {
  std::set<double> ids = brute_force_optimal_identities("ACDEFG", "ACDFG");
  EXPECT_EQ(ids, std::set<double> { 5.0 / 6.0 });
  GlobalAlignment aln = align_global("ACDEFG", "ACDFG");
  EXPECT_EQ(aln.score, 4);
  EXPECT_EQ(aln.identical, 5);
  EXPECT_EQ(aln.length, 6);
}

TEST(GlobalIdentityTest, MatchesBruteForceOnShortRandomPairs) {
  Rng rng(21);
  const std::string_view small = "ACDG";
  for (int t = 0; t < 200; ++t) {
    std::string a(1 + rng.below(6), 'A'), b(1 + rng.below(6), 'A');
    for (char &c: a)
      c = small[rng.below(small.size())];
    for (char &c: b)
      c = small[rng.below(small.size())];

    std::set<double> ids = brute_force_optimal_identities(a, b);
    double got = global_identity(a, b);
    EXPECT_TRUE(ids.count(got) == 1) << a << " " << b << " " << got;
  }
}

TEST(GlobalIdentityTest, SymmetricAndBounded) {
  Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    std::string a = random_protein(5 + rng.below(40), rng);
    std::string b = random_protein(5 + rng.below(40), rng);
    double ab = global_identity(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_DOUBLE_EQ(global_identity(a, a), 1.0);
    // Identity counts are alignment-dependent under ties; the score is not.
    EXPECT_EQ(align_global(a, b).score, align_global(b, a).score);
  }
}

TEST(IdentityMatrixTest, ParallelMatchesSerialReference) {
  Rng rng(23);
  std::vector<std::string> seqs = three_families(rng, 40);
  IdentityMatrix par = identity_matrix(seqs);
  IdentityMatrix ser = identity_matrix_serial(seqs);
  EXPECT_EQ(par, ser);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    EXPECT_EQ(par(i, i), 1.0);
    for (std::size_t j = 0; j < seqs.size(); ++j)
      EXPECT_EQ(par(i, j), par(j, i));
  }
  EXPECT_EQ(identity_matrix(std::vector<std::string> {}).size(), 0);
  EXPECT_EQ(identity_matrix(std::vector<std::string> { "A" })(0, 0), 1.0);
}

TEST(GreedyClusterTest, Examples) {
  std::vector<std::string> same(5, "MKTAYIAKQR");
  EXPECT_EQ(greedy_cluster(same, 0.99).size(), 1);
  std::vector<std::string> disjoint { "AAAA", "CCCC" };
  EXPECT_EQ(greedy_cluster(disjoint, 0.4).size(), 2);
  EXPECT_THROW(greedy_cluster(disjoint, 0.0), ConfigError);
}

TEST(GreedyClusterTest, RecoversMutatedFamilies) {
  Rng rng(24);
  std::vector<std::string> seqs = three_families(rng);
  std::vector<int> oracle = threshold_components(seqs, 0.6);
  std::vector<Cluster> clusters = greedy_cluster(seqs, 0.6);
  ASSERT_EQ(clusters.size(), 3);

  for (const Cluster &c: clusters) {
    EXPECT_EQ(c.members.size(), 10);
    EXPECT_EQ(c.members.front(), c.representative);
    for (std::size_t m: c.members) {
      EXPECT_EQ(oracle[m], oracle[c.representative]);
      EXPECT_EQ(m / 10, c.representative / 10);
    }
  }
}

TEST(GreedyClusterTest, RepresentativeIsLongestAndEveryoneAssignedOnce) {
  std::vector<std::string> seqs { "ACDE", "ACDEFGH", "ACDEF", "WWWW" };
  std::vector<Cluster> clusters = greedy_cluster(seqs, 0.5);
  EXPECT_EQ(clusters.front().representative, 1);
  std::vector<int> seen(seqs.size(), 0);
  for (const Cluster &c: clusters)
    for (std::size_t m: c.members)
      ++seen[m];
  EXPECT_EQ(seen, std::vector<int>(seqs.size(), 1));
}

TEST(GreedyClusterTest, MatrixAndDirectAgree) {
  Rng rng(25);
  std::vector<std::string> seqs = three_families(rng, 50);
  IdentityMatrix m = identity_matrix(seqs);
  for (double t: { 0.3, 0.6, 0.9, 0.99 }) {
    auto a = greedy_cluster(seqs, t), b = greedy_cluster(seqs, m, t);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      EXPECT_EQ(a[i].members, b[i].members);
  }
}

std::vector<EsiRecord> records_from(const std::vector<std::string> &seqs) {
  std::vector<EsiRecord> ds;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    EsiRecord r;
    r.id = "s" + std::to_string(i);
    r.sequence = seqs[i];
    r.smiles = "CCO";
    ds.push_back(r);
  }
  return ds;
}

TEST(OodSplitTest, ThresholdLadder) {
  Rng rng(26);
  std::vector<std::string> seqs;
  for (int f = 0; f < 6; ++f) {
    std::string proto = random_protein(60, rng);
    for (int m = 0; m < 8; ++m)
      seqs.push_back(point_mutate(proto, 0.05 + 0.05 * (m % 4), rng));
  }
  std::vector<EsiRecord> ds = records_from(seqs);
  const std::vector<double> thresholds { 0.4, 0.6, 0.8, 0.99 };
  std::vector<OodSplit> splits = build_ood_splits(ds, thresholds, 0.2, 9);
  ASSERT_EQ(splits.size(), 4);

  double prev_mean = -1;
  for (std::size_t k = 0; k < splits.size(); ++k) {
    const OodSplit &s = splits[k];
    EXPECT_EQ(s.threshold, thresholds[k]);
    EXPECT_EQ(s.train_ids.size() + s.test_ids.size(), ds.size());
    EXPECT_GE(s.test_ids.size(), 0.2 * ds.size());
    EXPECT_LE(s.max_cross_identity, s.threshold);
    EXPECT_EQ(max_cross_identity(ds, s), s.max_cross_identity);

    std::set<std::string> train(s.train_ids.begin(), s.train_ids.end());
    for (const std::string &id: s.test_ids)
      EXPECT_EQ(train.count(id), 0);

    // Mean nearest-train identity of the test set rises with the threshold.
    std::vector<std::string> test_seqs, train_seqs;
    for (const EsiRecord &r: ds)
      (train.count(r.id) ? train_seqs : test_seqs).push_back(r.sequence);
    std::vector<double> nearest = max_identity_to_train(test_seqs, train_seqs);
    double mean = std::accumulate(nearest.begin(), nearest.end(), 0.0)
                  / nearest.size();
    EXPECT_GE(mean, prev_mean);
    prev_mean = mean;
  }
}

TEST(OodSplitTest, WholeFamiliesGoToTest) {
  Rng rng(27);
  std::vector<std::string> seqs = three_families(rng);
  std::vector<EsiRecord> ds = records_from(seqs);
  const double t = 0.6;
  std::vector<OodSplit> splits = build_ood_splits(ds, { &t, 1 }, 0.3, 1);
  ASSERT_EQ(splits.size(), 1);
  const OodSplit &s = splits[0];
  ASSERT_EQ(s.test_ids.size(), 10);

  std::vector<Cluster> clusters = greedy_cluster(seqs, t);
  std::set<std::string> test(s.test_ids.begin(), s.test_ids.end());
  for (const Cluster &c: clusters) {
    std::size_t in_test = 0;
    for (std::size_t m: c.members)
      in_test += test.count(ds[m].id);
    EXPECT_TRUE(in_test == 0 || in_test == c.members.size());
  }
}

TEST(OodSplitTest, InfeasibleAndInvalidInputs) {
  std::vector<EsiRecord> ds = records_from(std::vector<std::string>(
      6, "MKTAYIAKQRQISFVKSHFS"));
  const double t = 0.8;
  EXPECT_THROW(build_ood_splits(ds, { &t, 1 }, 0.2, 0), InfeasibleSplit);
  EXPECT_THROW(build_ood_splits(ds, { &t, 1 }, 0.6, 0), ConfigError);
  const double bad = 1.5;
  EXPECT_THROW(build_ood_splits(ds, { &bad, 1 }, 0.2, 0), ConfigError);
}

TEST(OodSplitTest, DeterministicForSeed) {
  Rng rng(28);
  std::vector<EsiRecord> ds = records_from(three_families(rng, 40));
  const std::vector<double> thresholds { 0.4, 0.99 };
  auto a = build_ood_splits(ds, thresholds, 0.25, 5);
  auto b = build_ood_splits(ds, thresholds, 0.25, 5);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].test_ids, b[k].test_ids);
    EXPECT_EQ(a[k].train_ids, b[k].train_ids);
  }
}

TEST(MaxIdentityToTrainTest, Examples) {
  std::vector<std::string> train { "MKTAYIAK", "GGGGGGGG", "MKTAYLAK" };
  EXPECT_DOUBLE_EQ(max_identity_to_train("MKTAYIAK", train), 1.0);
  std::vector<std::string> disjoint { "WWWW" };
  EXPECT_DOUBLE_EQ(max_identity_to_train("AAAA", disjoint), 0.0);

  const std::string q = "MKTGYIAKG";
  double expect = std::max({ global_identity(q, train[0]),
                             global_identity(q, train[1]),
                             global_identity(q, train[2]) });
  EXPECT_DOUBLE_EQ(max_identity_to_train(q, train), expect);

  std::vector<std::string> queries { q, "AAAA" };
  std::vector<double> batch = max_identity_to_train(queries, train);
  EXPECT_DOUBLE_EQ(batch[0], expect);
  EXPECT_DOUBLE_EQ(batch[1], max_identity_to_train("AAAA", train));
}
}  // namespace
}  // namespace esiaug
