//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "esiaug/error.h"
#include "esiaug/molgraph.h"

namespace esiaug {
namespace {
struct ParsedAtom {
  Atom atom;
  bool bracket = false;
};

struct RingOpen {
  int atom;
  std::optional<BondOrder> order;
};

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): text_(text) { }

  MolGraph parse() {
    if (text_.empty())
      throw SyntaxError("empty SMILES");

    for (char ch: text_)
      if (static_cast<unsigned char>(ch) > 127 || std::isspace(ch) != 0)
        fail("unexpected character");

    std::vector<int> branch_stack;
    int prev = -1;
    std::optional<BondOrder> pending;

    while (pos_ < text_.size()) {
      char ch = text_[pos_];

      if (ch == '(') {
        if (prev < 0 || pending)
          fail("branch without a preceding atom");
        branch_stack.push_back(prev);
        ++pos_;
        continue;
      }

      if (ch == ')') {
        if (branch_stack.empty())
          fail("unbalanced ')'");
        if (pending)
          fail("bond symbol before ')'");
        if (pos_ > 0 && text_[pos_ - 1] == '(')
          fail("empty branch");
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++pos_;
        continue;
      }

      if (ch == '-' || ch == '=' || ch == '#' || ch == ':') {
        if (prev < 0 || pending)
          fail("misplaced bond symbol");
        pending = ch == '-'   ? BondOrder::kSingle
                  : ch == '=' ? BondOrder::kDouble
                  : ch == '#' ? BondOrder::kTriple
                              : BondOrder::kAromatic;
        ++pos_;
        continue;
      }

      if (std::isdigit(static_cast<unsigned char>(ch)) != 0 || ch == '%') {
        if (prev < 0)
          fail("ring closure without a preceding atom");
        ring_closure(prev, read_ring_number(), pending);
        pending.reset();
        continue;
      }

      if (ch == '/' || ch == '\\' || ch == '@')
        fail("stereochemistry is not supported");
      if (ch == '.')
        fail("disconnected structures are not supported");

      if (prev < 0 && (!atoms_.empty() || pending))
        fail("atom without a bond to the preceding structure");
      int cur = read_atom();
      if (prev >= 0)
        add_bond(prev, cur, pending);
      pending.reset();
      prev = cur;
    }

    if (!branch_stack.empty())
      fail("unbalanced '('");
    if (pending)
      fail("dangling bond symbol");
    if (!rings_.empty())
      throw SyntaxError("unclosed ring bond "
                        + std::to_string(rings_.begin()->first));

    std::vector<Atom> atoms;
    atoms.reserve(atoms_.size());
    std::vector<int> sums(atoms_.size(), 0);
    for (const Bond &b: bonds_) {
      int w = b.order == BondOrder::kAromatic ? 1 : static_cast<int>(b.order);
      sums[b.src] += w;
      sums[b.dst] += w;
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      Atom a = atoms_[i].atom;
      if (!atoms_[i].bracket)
        a.explicit_h = default_hydrogens(a.element, a.aromatic, sums[i]);
      atoms.push_back(a);
    }
    return MolGraph(std::move(atoms), std::move(bonds_));
  }

private:
  [[noreturn]] void fail(const std::string &why) const {
    throw SyntaxError(why + " at position " + std::to_string(pos_) + " in '"
                      + std::string(text_) + "'");
  }

  int read_ring_number() {
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size()
          || std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) == 0
          || std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])) == 0)
        fail("'%' must be followed by two digits");
      int n = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
      return n;
    }
    return text_[pos_++] - '0';
  }

  std::optional<Element> match_element(bool allow_lower, bool &aromatic) {
    static constexpr std::array<std::pair<std::string_view, Element>, 10>
        upper {
          { { "Cl", Element::Cl },
           { "Br", Element::Br },
           { "B", Element::B },
           { "C", Element::C },
           { "N", Element::N },
           { "O", Element::O },
           { "P", Element::P },
           { "S", Element::S },
           { "F", Element::F },
           { "I", Element::I } }
    };
    static constexpr std::array<std::pair<char, Element>, 6> lower {
      { { 'b', Element::B },
       { 'c', Element::C },
       { 'n', Element::N },
       { 'o', Element::O },
       { 'p', Element::P },
       { 's', Element::S } }
    };

    std::string_view rest = text_.substr(pos_);
    for (auto [sym, e]: upper) {
      if (rest.starts_with(sym)) {
        pos_ += sym.size();
        aromatic = false;
        return e;
      }
    }
    if (allow_lower && !rest.empty()) {
      for (auto [sym, e]: lower) {
        if (rest.front() == sym) {
          ++pos_;
          aromatic = true;
          return e;
        }
      }
    }
    return std::nullopt;
  }

  int read_atom() {
    ParsedAtom pa;
    if (text_[pos_] == '[') {
      ++pos_;
      pa.bracket = true;
      if (pos_ < text_.size()
          && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0)
        fail("isotopes are not supported");
      std::optional<Element> e = match_element(true, pa.atom.aromatic);
      if (!e)
        fail("unknown element");
      pa.atom.element = *e;

      if (pos_ < text_.size() && text_[pos_] == '@')
        fail("stereochemistry is not supported");
      if (pos_ < text_.size() && text_[pos_] == 'H') {
        ++pos_;
        pa.atom.explicit_h = 1;
        if (pos_ < text_.size()
            && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0)
          pa.atom.explicit_h = text_[pos_++] - '0';
      }
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        char sign = text_[pos_++];
        int mag = 1;
        if (pos_ < text_.size() && text_[pos_] == sign) {
          ++pos_;
          mag = 2;
        } else if (pos_ < text_.size()
                   && std::isdigit(static_cast<unsigned char>(text_[pos_]))
                          != 0) {
          mag = text_[pos_++] - '0';
        }
        if (mag > 2)
          fail("formal charge outside [-2,2]");
        pa.atom.formal_charge = sign == '+' ? mag : -mag;
      }
      if (pos_ >= text_.size() || text_[pos_] != ']')
        fail("unterminated bracket atom");
      ++pos_;
    } else {
      std::optional<Element> e = match_element(true, pa.atom.aromatic);
      if (!e)
        fail("unknown element");
      pa.atom.element = *e;
    }

    if (pa.atom.aromatic && !element_can_be_aromatic(pa.atom.element))
      fail("element cannot be aromatic");

    atoms_.push_back(pa);
    return static_cast<int>(atoms_.size()) - 1;
  }

  BondOrder resolve(int a, int b, std::optional<BondOrder> order) const {
    if (order)
      return *order;
    return atoms_[a].atom.aromatic && atoms_[b].atom.aromatic
               ? BondOrder::kAromatic
               : BondOrder::kSingle;
  }

  void add_bond(int a, int b, std::optional<BondOrder> order) {
    BondOrder o = resolve(a, b, order);
    if (o == BondOrder::kAromatic
        && !(atoms_[a].atom.aromatic && atoms_[b].atom.aromatic))
      fail("aromatic bond between non-aromatic atoms");
    for (const Bond &bd: bonds_)
      if (std::minmax(bd.src, bd.dst) == std::minmax(a, b))
        fail("duplicate bond");
    bonds_.push_back({ a, b, o });
  }

  void ring_closure(int atom, int number, std::optional<BondOrder> order) {
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_.emplace(number, RingOpen { atom, order });
      return;
    }

    RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == atom)
      fail("ring closure to the same atom");
    if (open.order && order && *open.order != *order)
      fail("conflicting ring-closure bond symbols");
    add_bond(open.atom, atom, order ? order : open.order);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<ParsedAtom> atoms_;
  std::vector<Bond> bonds_;
  std::map<int, RingOpen> rings_;
};

// ---------------------------------------------------------------------------
// Writer

using NeighborOrder = std::function<void(int atom, std::vector<Neighbor> &)>;

std::string atom_token(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  std::string sym(element_symbol(a.element));
  if (a.aromatic)
    sym[0] = static_cast<char>(std::tolower(sym[0]));

  if (a.formal_charge == 0
      && a.explicit_h == default_hydrogens(a.element, a.aromatic, g.bond_sum(i)))
    return sym;

  std::string tok = "[" + sym;
  if (a.explicit_h > 0) {
    tok += 'H';
    if (a.explicit_h > 1)
      tok += std::to_string(a.explicit_h);
  }
  if (a.formal_charge != 0) {
    tok += a.formal_charge > 0 ? '+' : '-';
    if (std::abs(a.formal_charge) > 1)
      tok += std::to_string(std::abs(a.formal_charge));
  }
  tok += ']';
  return tok;
}

std::string_view bond_token(const MolGraph &g, const Bond &b) {
  switch (b.order) {
  case BondOrder::kSingle:
    return g.atom(b.src).aromatic && g.atom(b.dst).aromatic ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return "";
  }
  return "";
}

class SmilesWriter {
public:
  SmilesWriter(const MolGraph &g, NeighborOrder order)
      : g_(g), order_(std::move(order)), visited_(g.size(), false),
        bond_used_(g.bonds().size(), false), children_(g.size()),
        ring_bonds_(g.size()), ring_digit_(g.bonds().size(), 0) { }

  std::string write(int start) {
    traverse(start, -1);
    std::string out;
    emit(start, out);
    return out;
  }

private:
  struct RingBond {
    int bond;
    bool opens;
  };

  void traverse(int v, int parent_bond) {
    visited_[v] = true;
    std::vector<Neighbor> nbrs(g_.neighbors(v).begin(),
                               g_.neighbors(v).end());
    order_(v, nbrs);

    for (const Neighbor &nb: nbrs) {
      if (nb.bond == parent_bond || bond_used_[nb.bond])
        continue;
      bond_used_[nb.bond] = true;
      if (visited_[nb.atom]) {
        // Back edge to an ancestor: the ring opens there, closes here.
        ring_bonds_[nb.atom].push_back({ nb.bond, true });
        ring_bonds_[v].push_back({ nb.bond, false });
      } else {
        children_[v].push_back(nb);
        traverse(nb.atom, nb.bond);
      }
    }
  }

  int allocate_digit() {
    int d = 1;
    while (std::find(open_digits_.begin(), open_digits_.end(), d)
           != open_digits_.end())
      ++d;
    open_digits_.push_back(d);
    return d;
  }

  static void append_digit(std::string &out, int d) {
    if (d < 10) {
      out += static_cast<char>('0' + d);
    } else {
      out += '%';
      out += std::to_string(d);
    }
  }

  void emit(int v, std::string &out) {
    out += atom_token(g_, v);

    // Closures first so their digits can be reused by openings at v.
    for (const RingBond &rb: ring_bonds_[v]) {
      if (rb.opens)
        continue;
      int d = ring_digit_[rb.bond];
      append_digit(out, d);
      std::erase(open_digits_, d);
    }
    for (const RingBond &rb: ring_bonds_[v]) {
      if (!rb.opens)
        continue;
      int d = allocate_digit();
      ring_digit_[rb.bond] = d;
      out += bond_token(g_, g_.bond(rb.bond));
      append_digit(out, d);
    }

    const std::vector<Neighbor> &kids = children_[v];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = i + 1 == kids.size();
      if (!last)
        out += '(';
      out += bond_token(g_, g_.bond(kids[i].bond));
      emit(kids[i].atom, out);
      if (!last)
        out += ')';
    }
  }

  const MolGraph &g_;
  NeighborOrder order_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<RingBond>> ring_bonds_;
  std::vector<int> ring_digit_;
  std::vector<int> open_digits_;
};

void check_start(const MolGraph &g, int start) {
  if (start < 0 || start >= g.size())
    throw std::out_of_range("start atom " + std::to_string(start)
                            + " out of range");
}

// Sorted list of distinct keys -> dense rank per element.
template <class Key>
std::vector<int> dense_ranks(const std::vector<Key> &keys) {
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> ranks(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    ranks[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[i])
        - sorted.begin());
  return ranks;
}

int count_classes(const std::vector<int> &ranks) {
  std::vector<int> r = ranks;
  std::sort(r.begin(), r.end());
  return static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
}

// Refine until stable or the round budget is exhausted.
std::vector<int> refine(const MolGraph &g, std::vector<int> ranks,
                        int max_rounds) {
  const int n = g.size();
  int classes = count_classes(ranks);
  for (int round = 0; round < max_rounds && classes < n; ++round) {
    using Key = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Key> keys(n);
    for (int i = 0; i < n; ++i) {
      keys[i].first = ranks[i];
      for (const Neighbor &nb: g.neighbors(i))
        keys[i].second.emplace_back(ranks[nb.atom],
                                    static_cast<int>(g.bond(nb.bond).order));
      std::sort(keys[i].second.begin(), keys[i].second.end());
    }
    std::vector<int> next = dense_ranks(keys);
    int next_classes = count_classes(next);
    ranks = std::move(next);
    if (next_classes == classes)
      break;
    classes = next_classes;
  }
  return ranks;
}
}  // namespace

MolGraph parse_smiles(std::string_view text) {
  return SmilesParser(text).parse();
}

std::string write_smiles(const MolGraph &g, int start_atom, Rng &order_rng) {
  check_start(g, start_atom);
  SmilesWriter w(g, [&order_rng](int, std::vector<Neighbor> &nbrs) {
    order_rng.shuffle(nbrs);
  });
  return w.write(start_atom);
}

std::string write_smiles(const MolGraph &g, int start_atom) {
  check_start(g, start_atom);
  SmilesWriter w(g, [](int, std::vector<Neighbor> &) { });
  return w.write(start_atom);
}

std::vector<int> canonical_ranks(const MolGraph &g) {
  const int n = g.size();
  const int max_rounds = 2 * n;

  using Key = std::tuple<int, int, bool, int, int>;
  std::vector<Key> init(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    init[i] = { static_cast<int>(a.element), a.formal_charge, a.aromatic,
                g.degree(i), a.explicit_h };
  }
  std::vector<int> ranks = refine(g, dense_ranks(init), max_rounds);

  // Individualize the lowest-index atom of the first tied class, re-refine.
  while (count_classes(ranks) < n) {
    std::vector<int> counts(n, 0);
    for (int r: ranks)
      ++counts[r];
    int tied = static_cast<int>(
        std::find_if(counts.begin(), counts.end(), [](int c) { return c > 1; })
        - counts.begin());
    int pick = static_cast<int>(std::find(ranks.begin(), ranks.end(), tied)
                                - ranks.begin());
    for (int &r: ranks)
      r *= 2;
    ranks[pick] -= 1;
    ranks = refine(g, dense_ranks(ranks), max_rounds);
  }
  return ranks;
}

std::string canonical_smiles(const MolGraph &g) {
  if (g.empty())
    return "";

  std::vector<int> ranks = canonical_ranks(g);
  int start = static_cast<int>(std::find(ranks.begin(), ranks.end(), 0)
                               - ranks.begin());
  SmilesWriter w(g, [&ranks](int, std::vector<Neighbor> &nbrs) {
    std::sort(nbrs.begin(), nbrs.end(),
              [&ranks](const Neighbor &x, const Neighbor &y) {
                return ranks[x.atom] < ranks[y.atom];
              });
  });
  return w.write(start);
}

std::vector<std::string> enumerate_smiles(const MolGraph &g, int n,
                                          Rng &rng) {
  std::vector<std::string> out;
  out.reserve(std::max(n, 0));
  for (int i = 0; i < n; ++i) {
    int start = static_cast<int>(rng.below(g.size()));
    out.push_back(write_smiles(g, start, rng));
  }
  return out;
}

}  // namespace esiaug
