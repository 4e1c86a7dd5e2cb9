#pragma once

// Normalization, derivation trees and their checker, and saturation-based
// derivability for k-anonymity atoms.
//
// Rules are applied to atoms read as pairs of attribute *sets*: a sequence
// and any reordering or contraction of repeated names denote the same atom.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "anonymity/atoms.hpp"
#include "anonymity/errors.hpp"

namespace anonymity {

namespace sets {

inline AttributeList of(AttributeList xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// a ⊆ b for sorted, duplicate-free lists.
inline bool subset(const AttributeList& a, const AttributeList& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline AttributeList minus(const AttributeList& a, const AttributeList& b) {
  AttributeList out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline AttributeList unite(const AttributeList& a, const AttributeList& b) {
  AttributeList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace sets

/// Atom with order and repetition removed and the published attributes
/// cancelled from the protected side.
struct NormalAtom {
  AttributeList lhs;
  AttributeList rhs;
  std::uint32_t k = 2;

  Atom to_atom() const { return Atom(lhs, rhs, k); }

  friend auto operator<=>(const NormalAtom&, const NormalAtom&) = default;
  friend bool operator==(const NormalAtom&, const NormalAtom&) = default;
};

inline NormalAtom normalize(const Atom& a) {
  NormalAtom n;
  n.lhs = sets::of(a.lhs);
  n.rhs = sets::minus(sets::of(a.rhs), n.lhs);
  n.k = a.k;
  return n;
}

/// A hypothesis set. Repeated atoms are dropped, first occurrence wins.
struct AtomSet {
  std::vector<Atom> atoms;

  AtomSet() = default;
  explicit AtomSet(std::vector<Atom> list) {
    for (auto& a : list)
      if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(std::move(a));
  }

  bool contains(const Atom& a) const {
    return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
  }
};

/// Sorted set of every attribute mentioned by sigma or the goal.
inline AttributeList universe(const AtomSet& sigma, const Atom& goal) {
  AttributeList all;
  auto add = [&](const Atom& a) {
    all.insert(all.end(), a.lhs.begin(), a.lhs.end());
    all.insert(all.end(), a.rhs.begin(), a.rhs.end());
  };
  for (const auto& a : sigma.atoms) add(a);
  add(goal);
  return sets::of(std::move(all));
}

/// Index of the first hypothesis of the form  x Y_k (nothing)  with k >= 2.
/// Only the empty team satisfies such a set.
inline std::optional<std::size_t> find_inconsistent(const AtomSet& sigma) {
  for (std::size_t i = 0; i < sigma.atoms.size(); ++i) {
    const auto n = normalize(sigma.atoms[i]);
    if (n.rhs.empty() && n.k >= 2) return i;
  }
  return std::nullopt;
}

inline bool is_inconsistent(const AtomSet& sigma) { return find_inconsistent(sigma).has_value(); }

/// First hypothesis  u Y_l v  that yields the goal  x Y_k y  by monotonicity
/// after normalization: x ⊆ u, v ⊆ y, v non-empty and l >= k.
inline std::optional<std::size_t> find_subsuming(const AtomSet& sigma, const Atom& goal) {
  const auto g = normalize(goal);
  if (g.rhs.empty()) return std::nullopt;
  for (std::size_t i = 0; i < sigma.atoms.size(); ++i) {
    const auto h = normalize(sigma.atoms[i]);
    if (!h.rhs.empty() && h.k >= g.k && sets::subset(g.lhs, h.lhs) && sets::subset(h.rhs, g.rhs))
      return i;
  }
  return std::nullopt;
}

enum class Rule { hypothesis, a1, a2, a3, a4, a5, ex_falso, k1_trivial };

inline std::string_view rule_tag(Rule r) {
  switch (r) {
    case Rule::hypothesis: return "HYP";
    case Rule::a1: return "A1";
    case Rule::a2: return "A2";
    case Rule::a3: return "A3";
    case Rule::a4: return "A4";
    case Rule::a5: return "A5";
    case Rule::ex_falso: return "EX-FALSO";
    case Rule::k1_trivial: return "K1-TRIVIAL";
  }
  return "?";
}

inline std::optional<Rule> rule_from_tag(std::string_view tag) {
  for (Rule r : {Rule::hypothesis, Rule::a1, Rule::a2, Rule::a3, Rule::a4, Rule::a5,
                 Rule::ex_falso, Rule::k1_trivial})
    if (rule_tag(r) == tag) return r;
  return std::nullopt;
}

/// A proof tree. An empty conclusion stands for falsum and is only produced
/// by A4.
struct Derivation {
  Rule rule = Rule::hypothesis;
  std::optional<Atom> conclusion;
  std::vector<Derivation> premises;

  static Derivation leaf(Rule r, Atom a) { return Derivation{r, std::move(a), {}}; }
  static Derivation step(Rule r, std::optional<Atom> a, std::vector<Derivation> from) {
    return Derivation{r, std::move(a), std::move(from)};
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
  }

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct VerificationResult {
  bool ok = true;
  std::string location;  // path of child indices from the root, e.g. "/0/1"
  std::string reason;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline bool same_sets(const AttributeList& a, const AttributeList& b) {
  return sets::of(a) == sets::of(b);
}

inline std::string check_step(const Derivation& d, const AtomSet& sigma) {
  const auto& ps = d.premises;
  auto premise_atom = [&](std::size_t i) -> const Atom* {
    return ps[i].conclusion ? &*ps[i].conclusion : nullptr;
  };
  if (d.rule != Rule::a4 && !d.conclusion) return "only A4 may conclude falsum";
  if (d.rule != Rule::ex_falso)
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (!premise_atom(i)) return "falsum used as a premise outside EX-FALSO";

  switch (d.rule) {
    case Rule::hypothesis:
      if (!ps.empty()) return "hypothesis with premises";
      if (!sigma.contains(*d.conclusion)) return "hypothesis not in the atom set";
      return {};
    case Rule::k1_trivial:
      if (!ps.empty()) return "K1-TRIVIAL with premises";
      if (d.conclusion->k != 1) return "K1-TRIVIAL concludes multiplicity other than 1";
      return {};
    case Rule::a1: {
      if (ps.size() != 1) return "A1 needs one premise";
      const Atom& p = *premise_atom(0);
      const Atom& c = *d.conclusion;
      if (p.k != c.k) return "A1 changes multiplicity";
      if (!same_sets(p.lhs, c.lhs) || !same_sets(p.rhs, c.rhs)) return "A1 is not a permutation";
      return {};
    }
    case Rule::a2: {
      if (ps.size() != 1) return "A2 needs one premise";
      const Atom& p = *premise_atom(0);
      const Atom& c = *d.conclusion;
      if (c.k > p.k) return "A2 raises multiplicity";
      if (!sets::subset(sets::of(c.lhs), sets::of(p.lhs))) return "A2 adds published attributes";
      if (!sets::subset(sets::of(p.rhs), sets::of(c.rhs))) return "A2 drops protected attributes";
      return {};
    }
    case Rule::a3: {
      if (ps.size() != 1) return "A3 needs one premise";
      const Atom& p = *premise_atom(0);
      const Atom& c = *d.conclusion;
      if (p.k != c.k) return "A3 changes multiplicity";
      const auto lhs = sets::of(c.lhs);
      if (sets::of(p.lhs) != lhs) return "A3 changes published attributes";
      const auto pr = sets::of(p.rhs), cr = sets::of(c.rhs);
      if (!sets::subset(cr, pr)) return "A3 adds protected attributes";
      if (!sets::subset(sets::minus(pr, cr), lhs)) return "A3 cancels an unpublished attribute";
      return {};
    }
    case Rule::a4: {
      if (ps.size() != 1) return "A4 needs one premise";
      if (d.conclusion) return "A4 must conclude falsum";
      const Atom& p = *premise_atom(0);
      if (!p.rhs.empty()) return "A4 premise protects attributes";
      if (p.k < 2) return "A4 premise has multiplicity 1";
      return {};
    }
    case Rule::a5: {
      if (ps.size() < 2) return "A5 needs at least two premises";
      const Atom& c = *d.conclusion;
      AttributeList published = sets::of(c.lhs);
      AttributeList protected_;
      std::uint64_t product = 1;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const Atom& p = *premise_atom(i);
        if (sets::of(p.lhs) != published) return "A5 premise " + std::to_string(i) + " has wrong published side";
        const auto r = sets::of(p.rhs);
        protected_ = sets::unite(protected_, r);
        published = sets::unite(published, r);
        product *= p.k;
        if (product > std::numeric_limits<std::uint32_t>::max()) return "A5 multiplicity overflow";
      }
      if (sets::of(c.rhs) != protected_) return "A5 conclusion protects the wrong attributes";
      if (c.k != product) return "A5 multiplicity is not the product";
      return {};
    }
    case Rule::ex_falso:
      if (ps.size() != 1 || ps[0].conclusion) return "EX-FALSO needs a falsum premise";
      return {};
  }
  return "unknown rule";
}

inline VerificationResult verify_at(const Derivation& d, const AtomSet& sigma, const std::string& where) {
  if (auto err = check_step(d, sigma); !err.empty())
    return {false, where.empty() ? "/" : where, std::string(rule_tag(d.rule)) + ": " + err};
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    auto r = verify_at(d.premises[i], sigma, where + "/" + std::to_string(i));
    if (!r) return r;
  }
  return {};
}

inline Atom canonical(const Atom& a) { return Atom(sets::of(a.lhs), sets::of(a.rhs), a.k); }

/// HYP leaf, then A1 to sorted form and A3 to cancel published attributes.
inline Derivation normalized_hypothesis(const Atom& h) {
  Derivation d = Derivation::leaf(Rule::hypothesis, h);
  const Atom c = canonical(h);
  if (!(c == h)) d = Derivation::step(Rule::a1, c, {std::move(d)});
  const Atom n = normalize(h).to_atom();
  if (!(n == c)) d = Derivation::step(Rule::a3, n, {std::move(d)});
  return d;
}

/// Finishes a derivation at `goal` with one A1 or A2 step, folding into an
/// A2 already at the top.
inline Derivation weaken_to(Derivation d, const Atom& goal) {
  const Atom& c = *d.conclusion;
  if (c == goal) return d;
  if (c.k == goal.k && same_sets(c.lhs, goal.lhs) && same_sets(c.rhs, goal.rhs))
    return Derivation::step(Rule::a1, goal, {std::move(d)});
  if (d.rule == Rule::a2) {
    d.conclusion = goal;
    return d;
  }
  return Derivation::step(Rule::a2, goal, {std::move(d)});
}

inline Derivation ex_falso(const Atom& inconsistent, const Atom& goal) {
  Derivation d = normalized_hypothesis(inconsistent);
  d = Derivation::step(Rule::a4, std::nullopt, {std::move(d)});
  return Derivation::step(Rule::ex_falso, goal, {std::move(d)});
}

}  // namespace detail

/// Checks every node against its rule; on failure reports the first bad node
/// in pre-order.
inline VerificationResult verify_derivation(const Derivation& d, const AtomSet& sigma) {
  return detail::verify_at(d, sigma, "");
}

/// Derivation of `goal` from the subsuming hypothesis, or from an
/// inconsistent hypothesis, if either exists.
inline std::optional<Derivation> derive_by_subsumption(const AtomSet& sigma, const Atom& goal) {
  if (auto bad = find_inconsistent(sigma)) return detail::ex_falso(sigma.atoms[*bad], goal);
  if (auto i = find_subsuming(sigma, goal))
    return detail::weaken_to(detail::normalized_hypothesis(sigma.atoms[*i]), goal);
  return std::nullopt;
}

struct SaturationOptions {
  std::size_t max_nodes = 1'000'000;
  bool use_a5 = true;
};

struct SaturationResult {
  std::optional<Derivation> derivation;
  /// Normal atoms reached, each with the largest (capped) multiplicity found.
  std::vector<Atom> closure;

  bool derivable() const { return derivation.has_value(); }
};

namespace detail {

class Saturator {
 public:
  using Mask = std::uint64_t;

  Saturator(AttributeList universe, std::uint32_t cap, SaturationOptions opts)
      : universe_(std::move(universe)), cap_(cap), opts_(opts) {
    if (universe_.size() > 63) throw ResourceError("saturation supports at most 63 attributes");
  }

  void add_hypothesis(const Atom& h) {
    const auto n = normalize(h);
    if (n.rhs.empty() || n.k < 2) return;
    nodes_.push_back(Node{Rule::hypothesis, mask_of(n.lhs), mask_of(n.rhs), n.k, {},
                          normalized_hypothesis(h)});
    install(nodes_.size() - 1);
  }

  /// Runs to fixpoint or until (lhs, rhs) reaches multiplicity `k`.
  bool run(Mask lhs, Mask rhs, std::uint32_t k) {
    while (!work_.empty()) {
      if (reached(lhs, rhs, k)) return true;
      const auto [l, r] = work_.front();
      work_.pop_front();
      const Entry e = table_.at({l, r});
      expand(l, r, e);
    }
    return reached(lhs, rhs, k);
  }

  void run_to_fixpoint() {
    while (!work_.empty()) {
      const auto [l, r] = work_.front();
      work_.pop_front();
      expand(l, r, table_.at({l, r}));
    }
  }

  Derivation tree_for(Mask lhs, Mask rhs) const { return tree(table_.at({lhs, rhs}).node); }

  std::vector<Atom> closure() const {
    std::vector<Atom> out;
    out.reserve(table_.size());
    for (const auto& [key, e] : table_) out.emplace_back(names_of(key.first), names_of(key.second), e.k);
    return out;
  }

  Mask mask_of(const AttributeList& xs) const {
    Mask m = 0;
    for (const auto& x : xs) {
      auto it = std::lower_bound(universe_.begin(), universe_.end(), x);
      m |= Mask{1} << static_cast<unsigned>(it - universe_.begin());
    }
    return m;
  }

 private:
  struct Node {
    Rule rule;
    Mask lhs, rhs;
    std::uint32_t k;
    std::vector<std::size_t> premises;
    std::optional<Derivation> embedded;
  };
  struct Entry {
    std::uint32_t k;
    std::size_t node;
  };

  AttributeList names_of(Mask m) const {
    AttributeList out;
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if (m & (Mask{1} << i)) out.push_back(universe_[i]);
    return out;
  }

  bool reached(Mask l, Mask r, std::uint32_t k) const {
    auto it = table_.find({l, r});
    return it != table_.end() && it->second.k >= k;
  }

  std::size_t add_node(Node n) {
    if (nodes_.size() >= opts_.max_nodes)
      throw ResourceError("saturation exceeded " + std::to_string(opts_.max_nodes) +
                          " nodes; partial closure has " + std::to_string(table_.size()) + " atoms");
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  // Records node `id` in the table if it improves the entry, lowering an
  // over-cap multiplicity with an A2 step first.
  void install(std::size_t id) {
    Node& n = nodes_[id];
    const Mask l = n.lhs, r = n.rhs;
    if (n.k > cap_) id = add_node(Node{Rule::a2, l, r, cap_, {id}, std::nullopt});
    const std::uint32_t k = nodes_[id].k;
    auto [it, fresh] = table_.try_emplace({l, r}, Entry{k, id});
    if (!fresh) {
      if (it->second.k >= k) return;
      it->second = Entry{k, id};
    } else {
      by_lhs_[l].push_back(r);
    }
    work_.emplace_back(l, r);
  }

  void offer(Mask l, Mask r, std::uint64_t k, Rule rule, std::vector<std::size_t> premises) {
    const auto capped = static_cast<std::uint32_t>(std::min<std::uint64_t>(k, cap_));
    if (reached(l, r, capped)) return;
    install(add_node(Node{rule, l, r, static_cast<std::uint32_t>(k), std::move(premises), std::nullopt}));
  }

  void expand(Mask l, Mask r, const Entry& e) {
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      const Mask bit = Mask{1} << i;
      if (l & bit) {
        offer(l & ~bit, r, e.k, Rule::a2, {e.node});
        offer(l & ~bit, r | bit, e.k, Rule::a2, {e.node});
      } else if (!(r & bit)) {
        offer(l, r | bit, e.k, Rule::a2, {e.node});
      }
    }
    if (!opts_.use_a5) return;
    // (l, r) as first premise: l Y r, (l r) Y r2  =>  l Y r r2
    if (auto it = by_lhs_.find(l | r); it != by_lhs_.end()) {
      const auto seconds = it->second;
      for (Mask r2 : seconds) {
        const Entry e2 = table_.at({l | r, r2});
        offer(l, r | r2, std::uint64_t{e.k} * e2.k, Rule::a5, {e.node, e2.node});
      }
    }
    // (l, r) as second premise: x Y y1, (x y1) = l Y r  =>  x Y y1 r
    for (Mask y1 = l; y1 != 0; y1 = (y1 - 1) & l) {
      const Mask x = l & ~y1;
      auto it = table_.find({x, y1});
      if (it == table_.end()) continue;
      const Entry e1 = it->second;
      offer(x, y1 | r, std::uint64_t{e1.k} * e.k, Rule::a5, {e1.node, e.node});
    }
  }

  Derivation tree(std::size_t id) const {
    const Node& n = nodes_[id];
    if (n.embedded) return *n.embedded;
    Atom concl(names_of(n.lhs), names_of(n.rhs), n.k);
    std::vector<Derivation> premises;
    for (auto p : n.premises) premises.push_back(tree(p));
    if (n.rule == Rule::a2 && premises.front().rule == Rule::a2) {
      Derivation merged = std::move(premises.front());
      merged.conclusion = std::move(concl);
      return merged;
    }
    return Derivation::step(n.rule, std::move(concl), std::move(premises));
  }

  AttributeList universe_;
  std::uint32_t cap_;
  SaturationOptions opts_;
  std::vector<Node> nodes_;
  std::map<std::pair<Mask, Mask>, Entry> table_;
  std::unordered_map<Mask, std::vector<Mask>> by_lhs_;
  std::deque<std::pair<Mask, Mask>> work_;
};

}  // namespace detail

/// Closes sigma under A1-A5 over the attributes it mentions, with
/// multiplicities capped at goal.k. Sound but not known to be complete:
/// a goal outside the closure is reported as unknown, never as refuted.
inline SaturationResult entails_k_saturate(const AtomSet& sigma, const Atom& goal,
                                           SaturationOptions opts = {}) {
  SaturationResult out;
  if (goal.k == 1) {
    out.derivation = Derivation::leaf(Rule::k1_trivial, goal);
    return out;
  }
  if (auto bad = find_inconsistent(sigma)) {
    out.derivation = detail::ex_falso(sigma.atoms[*bad], goal);
    return out;
  }
  if (goal.k > 0xFFFF) throw ResourceError("saturation multiplicity cap too large");

  detail::Saturator sat(universe(sigma, goal), goal.k, opts);
  for (const auto& h : sigma.atoms) sat.add_hypothesis(h);
  const auto g = normalize(goal);
  const auto gl = sat.mask_of(g.lhs), gr = sat.mask_of(g.rhs);
  if (g.rhs.empty())
    sat.run_to_fixpoint();
  else if (sat.run(gl, gr, goal.k))
    out.derivation = detail::weaken_to(sat.tree_for(gl, gr), goal);
  out.closure = sat.closure();
  return out;
}

}  // namespace anonymity
