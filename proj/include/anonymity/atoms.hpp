#pragma once

// Anonymity and k-anonymity atoms, the auxiliary dependency atoms they are
// compared against, and the anonymity-degree audit.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anonymity/team.hpp"

namespace anonymity {

/// `lhs Y_k rhs`: publishing lhs keeps rhs k-anonymous. k = 2 is the plain
/// anonymity atom.
struct Atom {
  AttributeList lhs;
  AttributeList rhs;
  std::uint32_t k = 2;

  Atom() = default;
  Atom(AttributeList published, AttributeList protected_, std::uint32_t multiplicity = 2)
      : lhs(std::move(published)), rhs(std::move(protected_)), k(multiplicity) {
    if (k < 1) throw std::invalid_argument("atom multiplicity must be >= 1");
  }

  bool is_simple() const { return rhs.size() == 1; }

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class AuxKind { dependence, inclusion, independence };

struct AuxAtom {
  AuxKind kind = AuxKind::dependence;
  AttributeList lhs;
  AttributeList rhs;

  AuxAtom() = default;
  AuxAtom(AuxKind kind_, AttributeList l, AttributeList r)
      : kind(kind_), lhs(std::move(l)), rhs(std::move(r)) {
    if (kind == AuxKind::inclusion && lhs.size() != rhs.size())
      throw std::invalid_argument("inclusion atom arguments differ in length");
  }

  friend bool operator==(const AuxAtom&, const AuxAtom&) = default;
};

/// Number of distinct rhs tuples inside each lhs group.
inline std::map<Tuple, std::size_t> distinct_counts(const Team& team, const AttributeList& lhs,
                                                    const AttributeList& rhs) {
  const auto li = team.schema().indices_of(lhs);
  const auto ri = team.schema().indices_of(rhs);
  std::map<Tuple, std::set<Tuple>> seen;
  for (const auto& r : team.rows()) seen[tuple_of(r, li)].insert(tuple_of(r, ri));
  std::map<Tuple, std::size_t> out;
  for (auto& [key, values] : seen) out.emplace(key, values.size());
  return out;
}

inline bool check_k_upsilon(const Team& team, const AttributeList& lhs, const AttributeList& rhs,
                            std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("multiplicity must be >= 1");
  for (const auto& [key, n] : distinct_counts(team, lhs, rhs))
    if (n < k) return false;
  return true;
}

inline bool check_upsilon(const Team& team, const AttributeList& lhs, const AttributeList& rhs) {
  return check_k_upsilon(team, lhs, rhs, 2);
}

inline bool check(const Team& team, const Atom& a) {
  return check_k_upsilon(team, a.lhs, a.rhs, a.k);
}

/// Row-wise search for k witnesses that agree on lhs and have pairwise
/// distinct rhs tuples.
inline bool check_k_upsilon_existential(const Team& team, const AttributeList& lhs,
                                        const AttributeList& rhs, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("multiplicity must be >= 1");
  const auto li = team.schema().indices_of(lhs);
  const auto ri = team.schema().indices_of(rhs);
  for (const auto& s : team.rows()) {
    const Tuple sx = tuple_of(s, li);
    std::vector<Tuple> witnesses;
    for (const auto& t : team.rows()) {
      if (witnesses.size() >= k) break;
      if (tuple_of(t, li) != sx) continue;
      Tuple ty = tuple_of(t, ri);
      if (std::find(witnesses.begin(), witnesses.end(), ty) == witnesses.end())
        witnesses.push_back(std::move(ty));
    }
    if (witnesses.size() < k) return false;
  }
  return true;
}

/// Counts rows, not values: every s needs k rows s' agreeing on lhs with
/// s'(rhs) != s(rhs). Not equivalent to check_k_upsilon.
inline bool check_k_counting_variant(const Team& team, const AttributeList& lhs,
                                     const AttributeList& rhs, std::uint32_t k) {
  const auto li = team.schema().indices_of(lhs);
  const auto ri = team.schema().indices_of(rhs);
  for (const auto& s : team.rows()) {
    const Tuple sx = tuple_of(s, li);
    const Tuple sy = tuple_of(s, ri);
    std::size_t differing = 0;
    for (const auto& t : team.rows())
      if (tuple_of(t, li) == sx && tuple_of(t, ri) != sy) ++differing;
    if (differing < k) return false;
  }
  return true;
}

inline bool check_dependence(const Team& team, const AttributeList& lhs, const AttributeList& rhs) {
  for (const auto& [key, n] : distinct_counts(team, lhs, rhs))
    if (n > 1) return false;
  return true;
}

inline bool check_inclusion(const Team& team, const AttributeList& from, const AttributeList& to) {
  if (from.size() != to.size())
    throw std::invalid_argument("inclusion atom arguments differ in length");
  const auto fi = team.schema().indices_of(from);
  const auto ti = team.schema().indices_of(to);
  std::set<Tuple> targets;
  for (const auto& r : team.rows()) targets.insert(tuple_of(r, ti));
  for (const auto& r : team.rows())
    if (!targets.contains(tuple_of(r, fi))) return false;
  return true;
}

inline bool check_independence(const Team& team, const AttributeList& lhs, const AttributeList& rhs) {
  const auto li = team.schema().indices_of(lhs);
  const auto ri = team.schema().indices_of(rhs);
  std::set<Tuple> xs, ys;
  std::set<std::pair<Tuple, Tuple>> joint;
  for (const auto& r : team.rows()) {
    Tuple x = tuple_of(r, li), y = tuple_of(r, ri);
    xs.insert(x);
    ys.insert(y);
    joint.emplace(std::move(x), std::move(y));
  }
  for (const auto& x : xs)
    for (const auto& y : ys)
      if (!joint.contains({x, y})) return false;
  return true;
}

inline bool check(const Team& team, const AuxAtom& a) {
  switch (a.kind) {
    case AuxKind::dependence: return check_dependence(team, a.lhs, a.rhs);
    case AuxKind::inclusion: return check_inclusion(team, a.lhs, a.rhs);
    case AuxKind::independence: return check_independence(team, a.lhs, a.rhs);
  }
  return false;
}

/// Evaluates  exists u (u != rhs  &  lhs u <= lhs rhs)  directly: each row
/// needs some witness tuple u, different from its own rhs tuple, such that
/// (s(lhs), u) occurs as an (lhs, rhs) tuple of the team.
inline bool check_upsilon_via_inclusion(const Team& team, const AttributeList& lhs,
                                        const AttributeList& rhs) {
  const auto li = team.schema().indices_of(lhs);
  const auto ri = team.schema().indices_of(rhs);
  std::set<std::pair<Tuple, Tuple>> included;
  std::set<Tuple> candidates;
  for (const auto& r : team.rows()) {
    included.emplace(tuple_of(r, li), tuple_of(r, ri));
    candidates.insert(tuple_of(r, ri));
  }
  for (const auto& s : team.rows()) {
    const Tuple sx = tuple_of(s, li);
    const Tuple sy = tuple_of(s, ri);
    bool found = false;
    for (const auto& u : candidates) {
      if (u != sy && included.contains({sx, u})) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Largest k with lhs Y_k rhs; unbounded on the empty team.
class AnonymityDegree {
 public:
  static AnonymityDegree unbounded() { return AnonymityDegree(std::nullopt); }
  static AnonymityDegree finite(std::size_t k) { return AnonymityDegree(k); }

  bool is_unbounded() const { return !value_.has_value(); }
  std::size_t value() const {
    if (!value_) throw std::logic_error("anonymity degree is unbounded");
    return *value_;
  }
  /// True iff lhs Y_k rhs holds.
  bool admits(std::uint64_t k) const { return !value_ || k <= *value_; }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "UNBOUNDED"; }

  friend bool operator==(const AnonymityDegree&, const AnonymityDegree&) = default;
  friend bool operator<=(const AnonymityDegree& a, const AnonymityDegree& b) {
    if (b.is_unbounded()) return true;
    if (a.is_unbounded()) return false;
    return *a.value_ <= *b.value_;
  }

 private:
  explicit AnonymityDegree(std::optional<std::size_t> v) : value_(v) {}
  std::optional<std::size_t> value_;
};

inline AnonymityDegree anonymity_degree(const Team& team, const AttributeList& lhs,
                                        const AttributeList& rhs) {
  const auto counts = distinct_counts(team, lhs, rhs);
  if (counts.empty()) return AnonymityDegree::unbounded();
  std::size_t lowest = std::numeric_limits<std::size_t>::max();
  for (const auto& [key, n] : counts) lowest = std::min(lowest, n);
  return AnonymityDegree::finite(lowest);
}

}  // namespace anonymity
