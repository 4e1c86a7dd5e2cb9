#pragma once

// Refuting teams for non-derivable goals, built over small integer domains
// and checked with the atom checkers before they are handed out.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anonymity/atoms.hpp"
#include "anonymity/errors.hpp"
#include "anonymity/inference.hpp"

namespace anonymity {

enum class Construction { thm1, thm2_truncated, table_witness, full_team };

inline std::string_view construction_tag(Construction c) {
  switch (c) {
    case Construction::thm1: return "THM1";
    case Construction::thm2_truncated: return "THM2-TRUNCATED";
    case Construction::table_witness: return "TABLE-WITNESS";
    case Construction::full_team: return "FULL-TEAM";
  }
  return "?";
}

struct CountermodelReport {
  Team team;
  std::vector<std::pair<Atom, bool>> satisfied_hypotheses;
  Atom failed_goal;
  std::size_t domain_size = 0;
  Construction construction = Construction::thm1;
};

struct CountermodelLimits {
  std::size_t max_universe = 12;
  std::size_t max_domain = 64;
  std::size_t max_rows = std::size_t{1} << 20;
};

namespace detail {

inline Value domain_value(std::uint32_t i) { return Value(std::to_string(i)); }

/// All assignments universe -> {0..domain-1} accepted by `keep`, in
/// lexicographic order.
template <typename Keep>
Team enumerate_team(const AttributeList& universe, std::size_t domain, Keep&& keep) {
  std::vector<std::uint32_t> digits(universe.size(), 0);
  std::vector<Row> rows;
  while (true) {
    if (keep(std::as_const(digits))) {
      Row r;
      r.reserve(digits.size());
      for (auto d : digits) r.push_back(domain_value(d));
      rows.push_back(std::move(r));
    }
    std::size_t i = digits.size();
    while (i > 0 && digits[i - 1] + 1 == domain) digits[--i] = 0;
    if (i == 0) break;
    ++digits[i - 1];
  }
  return Team(Schema(universe), std::move(rows));
}

inline std::vector<std::size_t> positions(const AttributeList& universe, const AttributeList& xs) {
  std::vector<std::size_t> out;
  for (const auto& x : xs) {
    auto it = std::find(universe.begin(), universe.end(), x);
    if (it == universe.end()) throw SchemaError("attribute '" + x.str() + "' outside the universe");
    out.push_back(static_cast<std::size_t>(it - universe.begin()));
  }
  return out;
}

inline bool power_exceeds(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t acc = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && acc > limit / base) return true;
    acc *= base;
  }
  return acc > limit;
}

inline CountermodelReport make_report(Team team, const AtomSet& sigma, const Atom& goal,
                                      std::size_t domain, Construction how) {
  CountermodelReport rep;
  rep.team = std::move(team);
  for (const auto& a : sigma.atoms) {
    bool holds = false;
    try {
      holds = check(rep.team, a);
    } catch (const SchemaError&) {
    }
    rep.satisfied_hypotheses.emplace_back(a, holds);
  }
  rep.failed_goal = goal;
  rep.domain_size = domain;
  rep.construction = how;
  return rep;
}

}  // namespace detail

/// Team over {0,1,2}^universe: rows where some published goal attribute is
/// non-zero, or every protected goal attribute is zero.
inline Team thm1_team(const AttributeList& universe, const Atom& goal) {
  const auto xs = detail::positions(universe, goal.lhs);
  const auto ys = detail::positions(universe, goal.rhs);
  return detail::enumerate_team(universe, 3, [&](const std::vector<std::uint32_t>& s) {
    return std::any_of(xs.begin(), xs.end(), [&](auto i) { return s[i] != 0; }) ||
           std::all_of(ys.begin(), ys.end(), [&](auto i) { return s[i] == 0; });
  });
}

/// Truncation of the simple-atom construction to {0..domain-1}^universe: rows
/// where some published goal attribute is non-zero, or the protected
/// attribute takes one of the k-1 values 0..k-2.
inline Team thm2_team(const AttributeList& universe, const Atom& goal, std::size_t domain) {
  if (goal.rhs.size() != 1) throw WrongFragmentError("goal is not a simple atom");
  const auto xs = detail::positions(universe, goal.lhs);
  const auto y = detail::positions(universe, goal.rhs).front();
  return detail::enumerate_team(universe, domain, [&](const std::vector<std::uint32_t>& s) {
    return std::any_of(xs.begin(), xs.end(), [&](auto i) { return s[i] != 0; }) ||
           s[y] + 2 <= goal.k;
  });
}

inline Team full_team(const AttributeList& universe, std::size_t domain) {
  return detail::enumerate_team(universe, domain, [](const auto&) { return true; });
}

inline bool verify_countermodel(const CountermodelReport& report, const AtomSet& sigma,
                                const Atom& goal) {
  try {
    for (const auto& a : sigma.atoms)
      if (!check(report.team, a)) return false;
    return !check(report.team, goal);
  } catch (const SchemaError&) {
    return false;
  }
}

namespace detail {

inline CountermodelReport verified(CountermodelReport rep, const AtomSet& sigma, const Atom& goal) {
  if (!verify_countermodel(rep, sigma, goal))
    throw InternalError(std::string(construction_tag(rep.construction)) +
                        " construction did not refute the goal");
  return rep;
}

inline void require_not_entailed(const AtomSet& sigma, const Atom& goal) {
  if (is_inconsistent(sigma))
    throw PreconditionError("hypotheses are inconsistent; every goal follows");
  if (find_subsuming(sigma, goal)) throw PreconditionError("goal follows from a hypothesis");
}

}  // namespace detail

inline CountermodelReport build_thm1_team(const AtomSet& sigma, const Atom& goal,
                                          const CountermodelLimits& limits = {}) {
  if (goal.k != 2) throw WrongFragmentError("goal is not a plain anonymity atom");
  for (const auto& a : sigma.atoms)
    if (a.k != 2) throw WrongFragmentError("hypothesis is not a plain anonymity atom");
  if (goal.rhs.empty()) throw PreconditionError("goal protects no attribute");
  detail::require_not_entailed(sigma, goal);
  const auto w = universe(sigma, goal);
  if (w.size() > limits.max_universe || detail::power_exceeds(3, w.size(), limits.max_rows))
    throw ResourceError("universe of " + std::to_string(w.size()) +
                        " attributes is too large for a {0,1,2} team; try a smaller instance");
  return detail::verified(detail::make_report(thm1_team(w, goal), sigma, goal, 3, Construction::thm1),
                          sigma, goal);
}

/// Grows the domain from max(3, k + largest hypothesis multiplicity), or
/// from `start_domain`, until the truncated team refutes the goal.
inline CountermodelReport build_thm2_team(const AtomSet& sigma, const Atom& goal,
                                          const CountermodelLimits& limits = {},
                                          std::optional<std::size_t> start_domain = std::nullopt) {
  if (!goal.is_simple()) throw WrongFragmentError("goal is not a simple atom");
  std::uint32_t largest = 0;
  for (const auto& a : sigma.atoms) {
    if (!a.is_simple()) throw WrongFragmentError("hypothesis is not a simple atom");
    largest = std::max(largest, a.k);
  }
  if (goal.k < 2) throw PreconditionError("multiplicity 1 holds on every team");
  detail::require_not_entailed(sigma, goal);
  const auto w = universe(sigma, goal);
  std::size_t domain = start_domain.value_or(std::max<std::size_t>(3, std::size_t{goal.k} + largest));
  for (; domain <= limits.max_domain; ++domain) {
    if (detail::power_exceeds(domain, w.size(), limits.max_rows))
      throw ResourceError("truncated team over domain " + std::to_string(domain) + " exceeds " +
                          std::to_string(limits.max_rows) + " rows");
    auto rep = detail::make_report(thm2_team(w, goal, domain), sigma, goal, domain,
                                   Construction::thm2_truncated);
    if (verify_countermodel(rep, sigma, goal)) return rep;
  }
  throw ResourceError("no refuting truncation up to domain size " + std::to_string(limits.max_domain));
}

/// For a goal protecting nothing: any non-empty team refutes it, and the full
/// team satisfies every consistent hypothesis.
inline CountermodelReport build_full_team(const AtomSet& sigma, const Atom& goal,
                                          std::size_t domain = 3,
                                          const CountermodelLimits& limits = {}) {
  if (is_inconsistent(sigma)) throw PreconditionError("hypotheses are inconsistent; every goal follows");
  std::uint32_t largest = 2;
  for (const auto& a : sigma.atoms) largest = std::max(largest, a.k);
  domain = std::max<std::size_t>(domain, largest);
  const auto w = universe(sigma, goal);
  if (detail::power_exceeds(domain, w.size(), limits.max_rows))
    throw ResourceError("full team too large");
  return detail::verified(detail::make_report(full_team(w, domain), sigma, goal, domain,
                                              Construction::full_team),
                          sigma, goal);
}

/// Wraps a given team as a countermodel if it satisfies sigma and refutes goal.
inline std::optional<CountermodelReport> witness_report(const Team& team, const AtomSet& sigma,
                                                        const Atom& goal) {
  std::vector<Value> seen;
  for (const auto& r : team.rows()) seen.insert(seen.end(), r.begin(), r.end());
  std::sort(seen.begin(), seen.end());
  const auto distinct = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
  auto rep = detail::make_report(team, sigma, goal, distinct, Construction::table_witness);
  if (!verify_countermodel(rep, sigma, goal)) return std::nullopt;
  return rep;
}

}  // namespace anonymity
