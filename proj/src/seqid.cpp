//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/seqid.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "esiaug/error.h"
#include "esiaug/parallel.h"
#include "esiaug/rng.h"

namespace esiaug {
namespace {
constexpr int kMatch = 1;
constexpr int kMismatch = 0;
constexpr int kGap = -1;

// Union-find over cluster indices.
class DisjointSets {
public:
  explicit DisjointSets(std::size_t n): parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k,
                                                    std::size_t n) {
  // Row-major walk over the strict upper triangle.
  std::size_t i = 0, row = n - 1;
  while (k >= row) {
    k -= row;
    ++i;
    --row;
  }
  return { i, i + 1 + k };
}

template <class Identity>
std::vector<Cluster> greedy_cluster_impl(std::span<const std::string> seqs,
                                         Identity &&identity,
                                         double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ConfigError("clustering threshold must lie in (0, 1]");

  std::vector<std::size_t> order(seqs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return seqs[a].size() > seqs[b].size();
                   });

  std::vector<Cluster> clusters;
  for (std::size_t idx: order) {
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const Cluster &c) {
                             return identity(c.representative, idx)
                                    > threshold;
                           });
    if (it == clusters.end())
      clusters.push_back({ idx, { idx } });
    else
      it->members.push_back(idx);
  }
  return clusters;
}
}  // namespace

GlobalAlignment align_global(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  const std::size_t w = m + 1;
  std::vector<int> dp((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j)
    dp[j] = static_cast<int>(j) * kGap;
  for (std::size_t i = 1; i <= n; ++i) {
    int *row = dp.data() + i * w;
    const int *up = row - w;
    row[0] = static_cast<int>(i) * kGap;
    const char ai = a[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      int diag = up[j - 1] + (ai == b[j - 1] ? kMatch : kMismatch);
      row[j] = std::max({ diag, up[j] + kGap, row[j - 1] + kGap });
    }
  }

  GlobalAlignment aln;
  aln.score = dp[n * w + m];
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int cur = dp[i * w + j];
    ++aln.length;
    if (i > 0 && j > 0) {
      const bool same = a[i - 1] == b[j - 1];
      if (cur == dp[(i - 1) * w + j - 1] + (same ? kMatch : kMismatch)) {
        aln.identical += same ? 1 : 0;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cur == dp[(i - 1) * w + j] + kGap)
      --i;
    else
      --j;
  }
  return aln;
}

double global_identity(std::string_view a, std::string_view b) {
  GlobalAlignment aln = align_global(a, b);
  return aln.length == 0 ? 1.0
                         : static_cast<double>(aln.identical) / aln.length;
}

double global_identity(const EnzymeSeq &a, const EnzymeSeq &b) {
  return global_identity(a.str(), b.str());
}

IdentityMatrix identity_matrix(std::span<const std::string> seqs) {
  const std::size_t n = seqs.size();
  IdentityMatrix out(n);
  if (n < 2)
    return out;

  const std::size_t pairs = n * (n - 1) / 2;
  std::vector<double> values(pairs);
  // Rows shrink along the triangle; dynamic scheduling balances them.
  parallel_for(static_cast<std::ptrdiff_t>(pairs), [&](std::ptrdiff_t k) {
    auto [i, j] = pair_from_index(k, n);
    values[k] = global_identity(seqs[i], seqs[j]);
  });
  for (std::size_t k = 0; k < pairs; ++k) {
    auto [i, j] = pair_from_index(k, n);
    out.set(i, j, values[k]);
  }
  return out;
}

IdentityMatrix identity_matrix_serial(std::span<const std::string> seqs) {
  const std::size_t n = seqs.size();
  IdentityMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.set(i, j, global_identity(seqs[i], seqs[j]));
  return out;
}

std::vector<Cluster> greedy_cluster(std::span<const std::string> seqs,
                                    double threshold) {
  return greedy_cluster_impl(
      seqs,
      [&](std::size_t i, std::size_t j) {
        return global_identity(seqs[i], seqs[j]);
      },
      threshold);
}

std::vector<Cluster> greedy_cluster(std::span<const std::string> seqs,
                                    const IdentityMatrix &identity,
                                    double threshold) {
  return greedy_cluster_impl(
      seqs, [&](std::size_t i, std::size_t j) { return identity(i, j); },
      threshold);
}

std::vector<OodSplit> build_ood_splits(std::span<const EsiRecord> ds,
                                       std::span<const double> thresholds,
                                       double test_fraction,
                                       std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction <= 0.5))
    throw ConfigError("test_fraction must lie in (0, 0.5]");
  for (double t: thresholds)
    if (!(t > 0.0 && t <= 1.0))
      throw ConfigError("identity thresholds must lie in (0, 1]");
  if (ds.empty())
    throw InfeasibleSplit("empty dataset");

  // Cluster distinct sequences; records follow their sequence.
  std::vector<std::string> uniq;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> record_seq(ds.size());
  std::vector<std::size_t> seq_records;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    auto [it, inserted] = index.try_emplace(ds[r].sequence, uniq.size());
    if (inserted) {
      uniq.push_back(ds[r].sequence);
      seq_records.push_back(0);
    }
    record_seq[r] = it->second;
    ++seq_records[it->second];
  }

  const IdentityMatrix identity = identity_matrix(uniq);
  const std::size_t total = ds.size();

  std::vector<OodSplit> splits;
  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    const double threshold = thresholds[ti];
    std::vector<Cluster> clusters = greedy_cluster(uniq, identity, threshold);

    // Representative clustering alone does not bound identities between
    // members of different clusters. Link any clusters that share a pair
    // above the threshold so whole groups move together.
    std::vector<std::size_t> cluster_of(uniq.size());
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (std::size_t m: clusters[c].members)
        cluster_of[m] = c;
    DisjointSets sets(clusters.size());
    for (std::size_t i = 0; i < uniq.size(); ++i)
      for (std::size_t j = i + 1; j < uniq.size(); ++j)
        if (cluster_of[i] != cluster_of[j] && identity(i, j) > threshold)
          sets.unite(cluster_of[i], cluster_of[j]);

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t s = 0; s < uniq.size(); ++s)
      groups[sets.find(cluster_of[s])].push_back(s);

    struct Group {
      std::vector<std::size_t> seqs;
      std::size_t records = 0;
    };
    std::vector<Group> ordered;
    for (auto &[root, members]: groups) {
      Group g { std::move(members), 0 };
      for (std::size_t s: g.seqs)
        g.records += seq_records[s];
      if (static_cast<double>(g.records)
          > (1.0 - test_fraction) * static_cast<double>(total))
        throw InfeasibleSplit(
            "a sequence cluster at threshold " + std::to_string(threshold)
            + " holds " + std::to_string(g.records) + " of "
            + std::to_string(total) + " records");
      ordered.push_back(std::move(g));
    }

    Rng rng(derive_seed(seed, { ti }));
    rng.shuffle(ordered);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Group &a, const Group &b) {
                       return a.records < b.records;
                     });

    std::vector<bool> seq_in_test(uniq.size(), false);
    std::size_t test_records = 0;
    for (const Group &g: ordered) {
      if (static_cast<double>(test_records)
          >= test_fraction * static_cast<double>(total))
        break;
      for (std::size_t s: g.seqs)
        seq_in_test[s] = true;
      test_records += g.records;
    }

    OodSplit split;
    split.threshold = threshold;
    for (std::size_t r = 0; r < ds.size(); ++r)
      (seq_in_test[record_seq[r]] ? split.test_ids : split.train_ids)
          .push_back(ds[r].id);

    for (std::size_t i = 0; i < uniq.size(); ++i)
      for (std::size_t j = 0; j < uniq.size(); ++j)
        if (seq_in_test[i] && !seq_in_test[j])
          split.max_cross_identity =
              std::max(split.max_cross_identity, identity(i, j));
    splits.push_back(std::move(split));
  }
  return splits;
}

double max_cross_identity(std::span<const EsiRecord> ds,
                          const OodSplit &split) {
  std::unordered_map<std::string_view, std::string_view> seq_of;
  for (const EsiRecord &r: ds)
    seq_of.emplace(r.id, r.sequence);

  auto collect = [&](const std::vector<std::string> &ids) {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const std::string &id: ids) {
      auto it = seq_of.find(id);
      if (it == seq_of.end())
        throw ParseError("split references unknown record id '" + id + "'");
      if (seen.insert(it->second).second)
        out.emplace_back(it->second);
    }
    return out;
  };
  std::vector<std::string> test = collect(split.test_ids);
  std::vector<std::string> train = collect(split.train_ids);
  if (test.empty() || train.empty())
    return 0.0;

  std::vector<double> best = max_identity_to_train(test, train);
  return *std::max_element(best.begin(), best.end());
}

double max_identity_to_train(std::string_view query,
                             std::span<const std::string> train) {
  double best = 0.0;
  for (const std::string &t: train)
    best = std::max(best, global_identity(query, t));
  return best;
}

std::vector<double> max_identity_to_train(std::span<const std::string> queries,
                                          std::span<const std::string> train) {
  std::vector<double> out(queries.size());
  parallel_for(static_cast<std::ptrdiff_t>(queries.size()),
               [&](std::ptrdiff_t i) {
                 out[i] = max_identity_to_train(queries[i], train);
               });
  return out;
}

}  // namespace esiaug
