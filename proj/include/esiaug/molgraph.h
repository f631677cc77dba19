//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ESIAUG_MOLGRAPH_H_
#define ESIAUG_MOLGRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esiaug/rng.h"

namespace esiaug {

enum class Element : std::uint8_t { B, C, N, O, P, S, F, Cl, Br, I };

inline constexpr int kElementCount = 10;

std::string_view element_symbol(Element e);
bool element_can_be_aromatic(Element e);

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  Element element = Element::C;
  int formal_charge = 0;
  bool aromatic = false;
  // Total attached hydrogen count. For organic-subset SMILES atoms this is
  // filled in from the valence table during parsing.
  int explicit_h = 0;

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Bond {
  int src = 0;
  int dst = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == src ? dst : src; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Largest bond-order sum (hydrogens included) allowed for an element at a
/// given formal charge.
int max_valence(Element e, int formal_charge);

/// Hydrogen count implied by the valence table for an uncharged
/// organic-subset atom. Aromatic bonds count as 1 in `bond_sum`; aromatic
/// atoms reserve one extra unit for the delocalized system.
int default_hydrogens(Element e, bool aromatic, int bond_sum);

/// Functional-group motifs treated as protected (never masked). Every motif
/// is enabled by default.
struct ProtectionRules {
  bool ring_atoms = true;
  bool hydroxyl = true;   // O with exactly one heavy neighbor
  bool carbonyl = true;   // C=O, both atoms
  bool carboxyl = true;   // C(=O)O, the carbon and both oxygens
  bool amine = true;      // N with only single bonds (amines, amides)
  bool thiol = true;      // S with exactly one heavy neighbor
  bool phosphate = true;  // P plus its O neighbors
  bool halogen = true;    // F/Cl/Br/I bonded to C
  bool charged = true;    // any atom with non-zero formal charge
};

/// Two-dimensional molecular graph of a substrate. Immutable after
/// construction; all invariants are validated by the constructor.
class MolGraph {
public:
  MolGraph() = default;

  /// Throws ValenceError on valence violations and SyntaxError on structural
  /// defects (bad endpoints, duplicate bonds, misplaced aromatic bonds).
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  int size() const { return static_cast<int>(atoms_.size()); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Bond &bond(int i) const { return bonds_[i]; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { adj_.data() + adj_offset_[atom],
             adj_.data() + adj_offset_[atom + 1] };
  }
  int degree(int atom) const {
    return adj_offset_[atom + 1] - adj_offset_[atom];
  }

  std::optional<BondOrder> bond_order(int a, int b) const;

  const std::vector<bool> &ring_membership() const { return ring_; }
  const std::vector<bool> &protected_atoms() const { return protected_; }

  // Bond-order sum with aromatic bonds counted as 1.
  int bond_sum(int atom) const;

  /// Relabel atoms: atom i of this graph becomes atom perm[i] of the result.
  MolGraph permuted(std::span<const int> perm) const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> adj_offset_;
  std::vector<Neighbor> adj_;
  std::vector<bool> ring_;
  std::vector<bool> protected_;
};

/// Parses the supported SMILES subset: organic and aromatic atoms, bracket
/// atoms with hydrogen count and charge, branches, ring closures (digits and
/// %nn), and the bond symbols - = # :. Throws SyntaxError or ValenceError.
MolGraph parse_smiles(std::string_view text);

/// Depth-first rendering from `start_atom` with the neighbor order at every
/// atom shuffled by `order_rng`.
std::string write_smiles(const MolGraph &g, int start_atom, Rng &order_rng);

/// Depth-first rendering with neighbors visited in bond-list order.
std::string write_smiles(const MolGraph &g, int start_atom);

/// Canonical atom ranking (0 = top) by iterative neighborhood refinement with
/// lowest-index tie-breaking.
std::vector<int> canonical_ranks(const MolGraph &g);

std::string canonical_smiles(const MolGraph &g);

std::vector<std::string> enumerate_smiles(const MolGraph &g, int n, Rng &rng);

inline constexpr int kMaxIsomorphismAtoms = 64;

/// Exact backtracking isomorphism test preserving element, charge,
/// aromaticity, hydrogen count, and bond order. Throws SizeError above
/// kMaxIsomorphismAtoms atoms.
bool is_isomorphic(const MolGraph &a, const MolGraph &b);

std::vector<bool> detect_protected(const MolGraph &g,
                                   const ProtectionRules &rules = {});

}  // namespace esiaug

#endif  // ESIAUG_MOLGRAPH_H_
