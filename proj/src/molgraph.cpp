//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/molgraph.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>
#include <utility>

#include "esiaug/error.h"

namespace esiaug {
namespace {
constexpr std::array<std::string_view, kElementCount> kSymbols {
  "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
};

bool is_halogen(Element e) {
  return e == Element::F || e == Element::Cl || e == Element::Br
         || e == Element::I;
}

// Lowest normal valences first; the first one that fits the explicit bonds
// determines the implicit hydrogen count.
std::span<const int> normal_valences(Element e) {
  static constexpr int b[] = { 3 }, c[] = { 4 }, n[] = { 3 }, o[] = { 2 },
                       p[] = { 3, 5 }, s[] = { 2, 4, 6 }, x[] = { 1 };
  switch (e) {
  case Element::B:
    return b;
  case Element::C:
    return c;
  case Element::N:
    return n;
  case Element::O:
    return o;
  case Element::P:
    return p;
  case Element::S:
    return s;
  default:
    return x;
  }
}

std::string atom_label(const MolGraph &g, int i) {
  return std::string(element_symbol(g.atom(i).element)) + " atom "
         + std::to_string(i);
}
}  // namespace

std::string_view element_symbol(Element e) {
  return kSymbols[static_cast<int>(e)];
}

bool element_can_be_aromatic(Element e) {
  switch (e) {
  case Element::B:
  case Element::C:
  case Element::N:
  case Element::O:
  case Element::P:
  case Element::S:
    return true;
  default:
    return false;
  }
}

int max_valence(Element e, int q) {
  switch (e) {
  case Element::B:
    return 3 - q;
  case Element::C:
    return 4 - std::abs(q);
  case Element::N:
    return 3 + q;
  case Element::O:
    return 2 + q;
  case Element::P:
    return 5 + std::max(q, 0);
  case Element::S:
    return 6;
  default:
    return std::max(1 + q, 0);
  }
}

int default_hydrogens(Element e, bool aromatic, int bond_sum) {
  std::span<const int> valences = normal_valences(e);
  if (aromatic)
    return std::max(valences.front() - bond_sum - 1, 0);

  for (int v: valences)
    if (v >= bond_sum)
      return v - bond_sum;
  return 0;
}

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = size();

  for (int i = 0; i < n; ++i) {
    const Atom &a = atoms_[i];
    if (a.aromatic && !element_can_be_aromatic(a.element))
      throw SyntaxError(atom_label(*this, i) + " cannot be aromatic");
    if (a.formal_charge < -2 || a.formal_charge > 2)
      throw SyntaxError(atom_label(*this, i) + " has charge outside [-2,2]");
    if (a.explicit_h < 0)
      throw SyntaxError(atom_label(*this, i) + " has negative H count");
  }

  std::vector<std::pair<int, int>> seen;
  seen.reserve(bonds_.size());
  for (Bond &b: bonds_) {
    if (b.src < 0 || b.dst < 0 || b.src >= n || b.dst >= n)
      throw SyntaxError("bond endpoint out of range");
    if (b.src == b.dst)
      throw SyntaxError("bond from atom " + std::to_string(b.src)
                        + " to itself");
    if (b.order == BondOrder::kAromatic
        && !(atoms_[b.src].aromatic && atoms_[b.dst].aromatic))
      throw SyntaxError("aromatic bond between atoms "
                        + std::to_string(b.src) + " and "
                        + std::to_string(b.dst)
                        + " which are not both aromatic");
    seen.emplace_back(std::min(b.src, b.dst), std::max(b.src, b.dst));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw SyntaxError("duplicate bond");

  adj_offset_.assign(n + 1, 0);
  for (const Bond &b: bonds_) {
    ++adj_offset_[b.src + 1];
    ++adj_offset_[b.dst + 1];
  }
  for (int i = 0; i < n; ++i)
    adj_offset_[i + 1] += adj_offset_[i];
  adj_.resize(adj_offset_[n]);
  std::vector<int> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (int bi = 0; bi < static_cast<int>(bonds_.size()); ++bi) {
    const Bond &b = bonds_[bi];
    adj_[fill[b.src]++] = { b.dst, bi };
    adj_[fill[b.dst]++] = { b.src, bi };
  }

  for (int i = 0; i < n; ++i) {
    const Atom &a = atoms_[i];
    if (bond_sum(i) + a.explicit_h > max_valence(a.element, a.formal_charge))
      throw ValenceError(atom_label(*this, i) + " exceeds maximum valence "
                         + std::to_string(
                             max_valence(a.element, a.formal_charge)));
  }

  // Ring membership: mark the tree path closed by every DFS back edge.
  ring_.assign(n, false);
  std::vector<int> parent(n, -1), parent_bond(n, -1), depth(n, -1);
  std::vector<std::pair<int, int>> stack;
  for (int root = 0; root < n; ++root) {
    if (depth[root] >= 0)
      continue;
    depth[root] = 0;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto &[v, next] = stack.back();
      std::span<const Neighbor> nbrs = neighbors(v);
      if (next == static_cast<int>(nbrs.size())) {
        stack.pop_back();
        continue;
      }
      Neighbor nb = nbrs[next++];
      if (nb.bond == parent_bond[v])
        continue;
      if (depth[nb.atom] < 0) {
        parent[nb.atom] = v;
        parent_bond[nb.atom] = nb.bond;
        depth[nb.atom] = depth[v] + 1;
        stack.emplace_back(nb.atom, 0);
      } else if (depth[nb.atom] < depth[v]) {
        for (int u = v; u != nb.atom; u = parent[u])
          ring_[u] = true;
        ring_[nb.atom] = true;
      }
    }
  }

  std::vector<bool> prot = detect_protected(*this);
  protected_ = std::move(prot);
}

std::optional<BondOrder> MolGraph::bond_order(int a, int b) const {
  for (const Neighbor &nb: neighbors(a))
    if (nb.atom == b)
      return bonds_[nb.bond].order;
  return std::nullopt;
}

int MolGraph::bond_sum(int atom) const {
  int sum = 0;
  for (const Neighbor &nb: neighbors(atom)) {
    BondOrder o = bonds_[nb.bond].order;
    sum += o == BondOrder::kAromatic ? 1 : static_cast<int>(o);
  }
  return sum;
}

MolGraph MolGraph::permuted(std::span<const int> perm) const {
  std::vector<Atom> atoms(atoms_.size());
  for (int i = 0; i < size(); ++i)
    atoms[perm[i]] = atoms_[i];

  std::vector<Bond> bonds;
  bonds.reserve(bonds_.size());
  for (const Bond &b: bonds_)
    bonds.push_back({ perm[b.src], perm[b.dst], b.order });
  std::sort(bonds.begin(), bonds.end(), [](const Bond &x, const Bond &y) {
    return std::minmax(x.src, x.dst) < std::minmax(y.src, y.dst);
  });
  return MolGraph(std::move(atoms), std::move(bonds));
}

std::vector<bool> detect_protected(const MolGraph &g,
                                   const ProtectionRules &rules) {
  const int n = g.size();
  std::vector<bool> mask(n, false);

  if (rules.ring_atoms)
    for (int i = 0; i < n; ++i)
      mask[i] = mask[i] || g.ring_membership()[i];

  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);

    if (rules.charged && a.formal_charge != 0)
      mask[i] = true;

    switch (a.element) {
    case Element::O:
      if (rules.hydroxyl && g.degree(i) == 1)
        mask[i] = true;
      break;

    case Element::S:
      if (rules.thiol && g.degree(i) == 1)
        mask[i] = true;
      break;

    case Element::N:
      if (rules.amine
          && std::all_of(g.neighbors(i).begin(), g.neighbors(i).end(),
                         [&](const Neighbor &nb) {
                           return g.bond(nb.bond).order == BondOrder::kSingle;
                         }))
        mask[i] = true;
      break;

    case Element::P:
      if (!rules.phosphate)
        break;
      for (const Neighbor &nb: g.neighbors(i)) {
        if (g.atom(nb.atom).element == Element::O) {
          mask[i] = true;
          mask[nb.atom] = true;
        }
      }
      break;

    case Element::C: {
      int carbonyl_o = -1;
      for (const Neighbor &nb: g.neighbors(i)) {
        if (g.atom(nb.atom).element == Element::O
            && g.bond(nb.bond).order == BondOrder::kDouble) {
          carbonyl_o = nb.atom;
          break;
        }
      }
      if (carbonyl_o < 0)
        break;

      if (rules.carbonyl) {
        mask[i] = true;
        mask[carbonyl_o] = true;
      }
      if (rules.carboxyl) {
        for (const Neighbor &nb: g.neighbors(i)) {
          if (nb.atom != carbonyl_o && g.atom(nb.atom).element == Element::O
              && g.bond(nb.bond).order == BondOrder::kSingle) {
            mask[i] = true;
            mask[carbonyl_o] = true;
            mask[nb.atom] = true;
          }
        }
      }
      break;
    }

    default:
      if (rules.halogen && is_halogen(a.element))
        for (const Neighbor &nb: g.neighbors(i))
          if (g.atom(nb.atom).element == Element::C)
            mask[i] = true;
      break;
    }
  }

  return mask;
}

}  // namespace esiaug
