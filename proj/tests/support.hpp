#pragma once

// Test-only helpers: fixtures, small-team enumerators, seeded generators and
// reference implementations written straight from the definitions.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anonymity/anonymity.hpp"

namespace testing_support {

using namespace anonymity;

inline Team table1() {
  return Team::from_strings(names({"surname", "hometown", "salary"}),
                            {{"Balbuk", "Watarru", "70,000"},
                             {"Barambah", "Amata", "90,000"},
                             {"Jones", "Finke", "100,000"},
                             {"Smith", "Watarru", "70,000"},
                             {"Williams", "Amata", "90,000"},
                             {"Yunipingu", "Finke", "100,000"}});
}

inline Team table2() {
  return Team::from_strings(names({"x", "y", "z"}),
                            {{"0", "0", "0"}, {"0", "1", "0"}, {"1", "0", "1"}, {"1", "1", "1"}});
}

inline Atom atom(std::string_view text) { return parse_atom(text); }

inline AtomSet sigma_of(std::initializer_list<std::string_view> lines) {
  std::vector<Atom> out;
  for (auto l : lines) out.push_back(parse_atom(l));
  return AtomSet(std::move(out));
}

/// Quadratic scan straight from the row-wise definition: every s has k
/// rows agreeing on lhs with pairwise distinct rhs tuples.
inline bool reference_k_upsilon(const Team& team, const AttributeList& lhs, const AttributeList& rhs,
                                std::uint32_t k) {
  const auto li = team.schema().indices_of(lhs);
  const auto ri = team.schema().indices_of(rhs);
  for (const auto& s : team.rows()) {
    std::vector<Tuple> distinct;
    for (const auto& t : team.rows()) {
      bool agree = true;
      for (auto i : li) agree = agree && s[i] == t[i];
      if (!agree) continue;
      Tuple ty;
      for (auto i : ri) ty.push_back(t[i]);
      bool fresh = true;
      for (const auto& d : distinct) fresh = fresh && d != ty;
      if (fresh) distinct.push_back(ty);
    }
    if (distinct.size() < k) return false;
  }
  return true;
}

/// Every row over {0..d-1}^width, in lexicographic order.
inline std::vector<Row> all_rows(std::size_t width, std::size_t d) {
  std::vector<Row> out;
  std::vector<std::size_t> digits(width, 0);
  while (true) {
    Row r;
    for (auto x : digits) r.emplace_back(std::to_string(x));
    out.push_back(std::move(r));
    std::size_t i = width;
    while (i > 0 && digits[i - 1] + 1 == d) digits[--i] = 0;
    if (i == 0) break;
    ++digits[i - 1];
  }
  return out;
}

/// Every team with at most `max_rows` distinct rows over {0..d-1}^|schema|.
inline std::vector<Team> small_teams(const AttributeList& schema, std::size_t d, std::size_t max_rows) {
  const auto rows = all_rows(schema.size(), d);
  std::vector<Team> out;
  std::vector<Row> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    out.emplace_back(Schema(schema), pick);
    if (pick.size() == max_rows) return;
    for (std::size_t i = from; i < rows.size(); ++i) {
      pick.push_back(rows[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Every team over {0..d-1}^|schema| (all subsets of the row space).
inline std::vector<Team> all_teams(const AttributeList& schema, std::size_t d) {
  const auto rows = all_rows(schema.size(), d);
  std::vector<Team> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) {
    std::vector<Row> pick;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) pick.push_back(rows[i]);
    out.emplace_back(Schema(schema), std::move(pick));
  }
  return out;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 1; }
  std::uint64_t seed() { return rng_(); }

  /// Random subsequence of `pool`, each element kept with probability 1/2,
  /// then shuffled.
  AttributeList subset(const AttributeList& pool) {
    AttributeList out;
    for (const auto& a : pool)
      if (coin()) out.push_back(a);
    std::shuffle(out.begin(), out.end(), rng_);
    return out;
  }

  AttributeList nonempty_subset(const AttributeList& pool) {
    AttributeList out;
    while (out.empty()) out = subset(pool);
    return out;
  }

  Team team(const AttributeList& schema, std::size_t domain, std::size_t max_rows) {
    return random_team(Schema(schema), numeric_domain(domain), below(max_rows + 1), seed());
  }

  Atom random_atom(const AttributeList& pool, std::uint32_t max_k) {
    return Atom(subset(pool), subset(pool), static_cast<std::uint32_t>(1 + below(max_k)));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline const AttributeList kNamePool = names({"x", "y", "z", "hometown", "s_1", "Yes", "0a", "dep", "exists"});

inline Formula random_formula(Gen& g, int depth) {
  auto literal = [&] {
    Literal l{kNamePool[g.below(kNamePool.size())], g.coin(), Value("")};
    if (g.coin()) {
      static const std::vector<std::string> values = {"private", "", "a \"quoted\" value", "back\\slash", "7", "x y"};
      l.rhs = Value(values[g.below(values.size())]);
    } else {
      l.rhs = kNamePool[g.below(kNamePool.size())];
    }
    return l;
  };
  const std::size_t pick = depth <= 0 ? g.below(3) : g.below(6);
  switch (pick) {
    case 0:
      return fm::atom(Atom(g.subset(kNamePool), g.subset(kNamePool), 1 + g.below(9)));
    case 1: {
      const auto kind = static_cast<AuxKind>(g.below(3));
      auto l = g.subset(kNamePool);
      auto r = kind == AuxKind::inclusion ? l : g.subset(kNamePool);
      if (kind == AuxKind::inclusion) std::shuffle(r.begin(), r.end(), g.engine());
      return fm::aux(AuxAtom(kind, l, r));
    }
    case 2:
      return fm::literal(literal());
    case 3: {
      std::vector<Formula> parts;
      for (std::size_t i = 0, n = 2 + g.below(2); i < n; ++i) parts.push_back(random_formula(g, depth - 1));
      return fm::conj(std::move(parts));
    }
    case 4: {
      std::vector<Literal> guard;
      for (std::size_t i = 0, n = 1 + g.below(2); i < n; ++i) guard.push_back(literal());
      return fm::implies(std::move(guard), random_formula(g, depth - 1));
    }
    default:
      return fm::exists(kNamePool[g.below(kNamePool.size())], random_formula(g, depth - 1));
  }
}

// Existential truth by trying every assignment of a non-empty value subset to
// each row, with no pruning.
inline bool brute_exists(const Team& team, const std::vector<Value>& domain, const AttributeName& v, const Formula& body) {
  std::vector<Value> dom = domain;
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  const std::size_t subsets = (std::size_t{1} << dom.size()) - 1;
  std::vector<std::size_t> idx(team.size(), 1);
  while (true) {
    std::vector<std::vector<Value>> choice;
    for (auto m : idx) {
      std::vector<Value> c;
      for (std::size_t b = 0; b < dom.size(); ++b)
        if (m & (std::size_t{1} << b)) c.push_back(dom[b]);
      choice.push_back(c);
    }
    if (eval(extend(team, v, choice), domain, body)) return true;
    std::size_t i = 0;
    while (i < idx.size() && idx[i] == subsets) idx[i++] = 1;
    if (i == idx.size()) return false;
    ++idx[i];
  }
}

inline Formula random_body(Gen& g, const AttributeList& attrs, const AttributeName& v) {
  AttributeList with = attrs;
  with.push_back(v);
  std::vector<Formula> parts;
  const std::size_t n = 1 + g.below(3);
  for (std::size_t i = 0; i < n; ++i) {
    switch (g.below(5)) {
      case 0:
        parts.push_back(fm::literal(Literal{v, g.coin(), Value(std::to_string(g.below(2)))}));
        break;
      case 1:
        parts.push_back(fm::literal(Literal{v, g.coin(), with[g.below(attrs.size())]}));
        break;
      case 2:
        parts.push_back(fm::aux(AuxAtom(AuxKind::dependence, g.subset(with), AttributeList{v})));
        break;
      default: {
        auto l = g.subset(with);
        if (g.coin()) l.push_back(v);
        parts.push_back(fm::atom(Atom(sets::of(l), g.nonempty_subset(with), 1 + g.below(3))));
      }
    }
  }
  if (parts.size() == 1) return parts.front();
  return fm::conj(std::move(parts));
}

}  // namespace testing_support
