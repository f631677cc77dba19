//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "esiaug/error.h"
#include "esiaug/molgraph.h"

namespace esiaug {
namespace {
// Color refinement on the disjoint union of both graphs so that colors are
// comparable between them. Atoms that can correspond share a color.
std::vector<int> joint_colors(const MolGraph &a, const MolGraph &b) {
  const int na = a.size(), n = na + b.size();
  auto graph_of = [&](int i) -> const MolGraph & { return i < na ? a : b; };
  auto local = [&](int i) { return i < na ? i : i - na; };
  auto global = [&](int owner, int i) { return owner < na ? i : i + na; };

  using Init = std::tuple<int, int, bool, int, int>;
  std::vector<Init> init(n);
  for (int i = 0; i < n; ++i) {
    const Atom &at = graph_of(i).atom(local(i));
    init[i] = { static_cast<int>(at.element), at.formal_charge, at.aromatic,
                graph_of(i).degree(local(i)), at.explicit_h };
  }

  auto densify = [](const auto &keys) {
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
      out[i] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), keys[i])
          - sorted.begin());
    return out;
  };

  std::vector<int> colors = densify(init);
  for (int round = 0; round < n; ++round) {
    using Key = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Key> keys(n);
    for (int i = 0; i < n; ++i) {
      const MolGraph &g = graph_of(i);
      keys[i].first = colors[i];
      for (const Neighbor &nb: g.neighbors(local(i)))
        keys[i].second.emplace_back(colors[global(i, nb.atom)],
                                    static_cast<int>(g.bond(nb.bond).order));
      std::sort(keys[i].second.begin(), keys[i].second.end());
    }
    std::vector<int> next = densify(keys);
    bool stable = next == colors;
    colors = std::move(next);
    if (stable)
      break;
  }
  return colors;
}

class Matcher {
public:
  Matcher(const MolGraph &a, const MolGraph &b, std::vector<int> colors)
      : a_(a), b_(b), colors_(std::move(colors)), map_(a.size(), -1),
        used_(b.size(), false) {
    // Visit a's atoms in BFS order so every atom after the first has an
    // already-mapped neighbor to constrain its candidates.
    std::vector<bool> seen(a.size(), false);
    for (int root = 0; root < a.size(); ++root) {
      if (seen[root])
        continue;
      std::queue<int> q;
      q.push(root);
      seen[root] = true;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        order_.push_back(v);
        for (const Neighbor &nb: a.neighbors(v)) {
          if (!seen[nb.atom]) {
            seen[nb.atom] = true;
            q.push(nb.atom);
          }
        }
      }
    }
  }

  bool run() { return extend(0); }

private:
  bool consistent(int va, int vb) const {
    if (colors_[va] != colors_[a_.size() + vb])
      return false;
    for (const Neighbor &nb: a_.neighbors(va)) {
      int mapped = map_[nb.atom];
      if (mapped < 0)
        continue;
      std::optional<BondOrder> o = b_.bond_order(vb, mapped);
      if (!o || *o != a_.bond(nb.bond).order)
        return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size())
      return true;
    int va = order_[depth];
    for (int vb = 0; vb < b_.size(); ++vb) {
      if (used_[vb] || !consistent(va, vb))
        continue;
      map_[va] = vb;
      used_[vb] = true;
      if (extend(depth + 1))
        return true;
      map_[va] = -1;
      used_[vb] = false;
    }
    return false;
  }

  const MolGraph &a_;
  const MolGraph &b_;
  std::vector<int> colors_;
  std::vector<int> order_;
  std::vector<int> map_;
  std::vector<bool> used_;
};
}  // namespace

bool is_isomorphic(const MolGraph &a, const MolGraph &b) {
  if (a.size() > kMaxIsomorphismAtoms || b.size() > kMaxIsomorphismAtoms)
    throw SizeError("isomorphism check limited to "
                    + std::to_string(kMaxIsomorphismAtoms) + " atoms");
  if (a.size() != b.size() || a.bonds().size() != b.bonds().size())
    return false;

  std::vector<int> colors = joint_colors(a, b);
  std::vector<int> ca(colors.begin(), colors.begin() + a.size());
  std::vector<int> cb(colors.begin() + a.size(), colors.end());
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  if (ca != cb)
    return false;

  // Mapping is edge-preserving and injective; equal bond counts make it a
  // bijection on bonds as well.
  return Matcher(a, b, std::move(colors)).run();
}

}  // namespace esiaug
