#pragma once

// Brute-force semantic entailment over small finite domains, and seeded
// random teams. Used to validate the axiomatic engine.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "anonymity/atoms.hpp"
#include "anonymity/countermodel.hpp"
#include "anonymity/errors.hpp"
#include "anonymity/inference.hpp"

namespace anonymity {

enum class OracleMode { exhaustive, random };

struct OracleConfig {
  std::size_t attribute_count = 3;
  std::size_t domain_size = 2;
  OracleMode mode = OracleMode::exhaustive;
  std::size_t sample_count = 1000;
  std::uint64_t seed = 0;
};

inline void validate(const OracleConfig& cfg) {
  if (cfg.attribute_count > 4) throw ConfigError("oracle supports at most 4 attributes");
  if (cfg.domain_size != 2 && cfg.domain_size != 3) throw ConfigError("oracle domain size must be 2 or 3");
  if (cfg.mode == OracleMode::exhaustive &&
      detail::power_exceeds(cfg.domain_size, cfg.attribute_count, 16))
    throw ConfigError("exhaustive mode needs domain_size^attribute_count <= 16");
}

enum class OracleVerdict { entailed, refuted, unknown };

inline std::string_view verdict_tag(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::entailed: return "ENTAILED";
    case OracleVerdict::refuted: return "REFUTED";
    case OracleVerdict::unknown: return "UNKNOWN";
  }
  return "?";
}

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::unknown;
  std::optional<Team> refuter;
  std::string source;  // "construction", "enumeration" or "sampling"
};

/// Reproducible team of at most `row_budget` rows with cells drawn uniformly
/// from `domain`.
inline Team random_team(const Schema& schema, const std::vector<Value>& domain,
                        std::size_t row_budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Row> rows;
  if (!domain.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, domain.size() - 1);
    rows.reserve(row_budget);
    for (std::size_t i = 0; i < row_budget; ++i) {
      Row r;
      r.reserve(schema.size());
      for (std::size_t j = 0; j < schema.size(); ++j) r.push_back(domain[pick(rng)]);
      rows.push_back(std::move(r));
    }
  }
  return Team(schema, std::move(rows));
}

inline std::vector<Value> numeric_domain(std::size_t n) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::to_string(i));
  return out;
}

/// Enumerates every team over {0..d-1}^universe (at most 16 possible rows,
/// so teams are 16-bit masks) and caches each atom's truth table.
class ExhaustiveOracle {
 public:
  ExhaustiveOracle(AttributeList universe, std::size_t domain_size)
      : universe_(std::move(universe)), domain_(domain_size) {
    if (detail::power_exceeds(domain_, universe_.size(), 16))
      throw ConfigError("exhaustive enumeration limited to 16 possible rows");
    row_count_ = 1;
    for (std::size_t i = 0; i < universe_.size(); ++i) row_count_ *= domain_;
  }

  const AttributeList& universe() const { return universe_; }
  std::uint32_t team_count() const { return std::uint32_t{1} << row_count_; }

  Team team(std::uint32_t mask) const {
    std::vector<Row> rows;
    for (std::size_t r = 0; r < row_count_; ++r) {
      if (!(mask & (std::uint32_t{1} << r))) continue;
      Row row;
      for (std::size_t a = 0; a < universe_.size(); ++a)
        row.push_back(detail::domain_value(static_cast<std::uint32_t>(digit(r, a))));
      rows.push_back(std::move(row));
    }
    return Team(Schema(universe_), std::move(rows));
  }

  /// truth(a)[mask] says whether the team `mask` satisfies a.
  const std::vector<bool>& truth(const Atom& a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    const auto ls = detail::positions(universe_, sets::of(a.lhs));
    const auto rs = detail::positions(universe_, sets::of(a.rhs));
    std::vector<std::uint32_t> lkey(row_count_), rkey(row_count_);
    for (std::size_t r = 0; r < row_count_; ++r) {
      lkey[r] = key(r, ls);
      rkey[r] = key(r, rs);
    }
    std::vector<bool> table(team_count());
    for (std::uint32_t mask = 0; mask < team_count(); ++mask) {
      bool ok = true;
      for (std::size_t s = 0; s < row_count_ && ok; ++s) {
        if (!(mask & (std::uint32_t{1} << s))) continue;
        // distinct rhs tuples among rows agreeing with s on lhs
        std::uint32_t seen = 0;
        for (std::size_t t = 0; t < row_count_; ++t)
          if ((mask & (std::uint32_t{1} << t)) && lkey[t] == lkey[s]) seen |= std::uint32_t{1} << rkey[t];
        ok = static_cast<std::uint32_t>(std::popcount(seen)) >= a.k;
      }
      table[mask] = ok;
    }
    return cache_.emplace(a, std::move(table)).first->second;
  }

  /// Smallest mask satisfying sigma and refuting goal.
  std::optional<std::uint32_t> first_refuter(const AtomSet& sigma, const Atom& goal) {
    std::vector<const std::vector<bool>*> hyps;
    for (const auto& a : sigma.atoms) hyps.push_back(&truth(a));
    const auto& g = truth(goal);
    for (std::uint32_t mask = 0; mask < team_count(); ++mask) {
      if (g[mask]) continue;
      if (std::all_of(hyps.begin(), hyps.end(), [&](const auto* h) { return (*h)[mask]; })) return mask;
    }
    return std::nullopt;
  }

 private:
  std::size_t digit(std::size_t row, std::size_t attr) const {
    for (std::size_t i = attr + 1; i < universe_.size(); ++i) row /= domain_;
    return row % domain_;
  }
  std::uint32_t key(std::size_t row, const std::vector<std::size_t>& attrs) const {
    // attrs are distinct positions, so codes stay below domain^|universe| <= 16
    std::uint32_t k = 0;
    for (auto a : attrs) k = k * static_cast<std::uint32_t>(domain_) + static_cast<std::uint32_t>(digit(row, a));
    return k;
  }

  AttributeList universe_;
  std::size_t domain_;
  std::size_t row_count_ = 1;
  std::map<Atom, std::vector<bool>> cache_;
};

namespace detail {

inline bool refutes(const Team& team, const AtomSet& sigma, const Atom& goal) {
  for (const auto& a : sigma.atoms)
    if (!check(team, a)) return false;
  return !check(team, goal);
}

inline std::optional<Team> constructed_refuter(const AttributeList& w, const AtomSet& sigma,
                                               const Atom& goal) {
  std::vector<Team> candidates;
  if (w.size() <= 8) {
    candidates.push_back(full_team(w, 3));
    if (!goal.rhs.empty()) candidates.push_back(thm1_team(w, goal));
  }
  if (goal.is_simple() && goal.k >= 2) {
    std::uint32_t largest = 0;
    for (const auto& a : sigma.atoms) largest = std::max(largest, a.k);
    const std::size_t top = std::size_t{goal.k} + largest;
    for (std::size_t d = 3; d <= top; ++d) {
      if (power_exceeds(d, w.size(), 1u << 16)) break;
      candidates.push_back(thm2_team(w, goal, d));
    }
  }
  for (auto& t : candidates)
    if (refutes(t, sigma, goal)) return std::move(t);
  return std::nullopt;
}

}  // namespace detail

/// Semantic consequence checked by brute force. Constructed candidate
/// refuters are tried first; then either every team over the configured
/// domain is enumerated (exhaustive) or random teams are sampled (random,
/// which never answers ENTAILED).
inline OracleResult semantic_entails(const AtomSet& sigma, const Atom& goal, const OracleConfig& cfg,
                                     ExhaustiveOracle* shared = nullptr) {
  validate(cfg);
  const auto w = universe(sigma, goal);
  if (w.size() > cfg.attribute_count)
    throw ConfigError("instance mentions " + std::to_string(w.size()) + " attributes, config allows " +
                      std::to_string(cfg.attribute_count));

  if (auto t = detail::constructed_refuter(w, sigma, goal))
    return {OracleVerdict::refuted, std::move(*t), "construction"};

  if (cfg.mode == OracleMode::random) {
    std::mt19937_64 rng(cfg.seed);
    const auto domain = numeric_domain(cfg.domain_size);
    std::size_t max_rows = 1;
    for (std::size_t i = 0; i < w.size() && max_rows < 64; ++i) max_rows *= cfg.domain_size;
    std::uniform_int_distribution<std::size_t> budget(1, max_rows);
    for (std::size_t i = 0; i < cfg.sample_count; ++i) {
      Team t = random_team(Schema(w), domain, budget(rng), rng());
      if (detail::refutes(t, sigma, goal)) return {OracleVerdict::refuted, std::move(t), "sampling"};
    }
    return {OracleVerdict::unknown, std::nullopt, "sampling"};
  }

  std::optional<ExhaustiveOracle> local;
  ExhaustiveOracle* oracle = shared;
  if (!oracle || oracle->universe() != w) {
    local.emplace(w, cfg.domain_size);
    oracle = &*local;
  }
  if (auto mask = oracle->first_refuter(sigma, goal))
    return {OracleVerdict::refuted, oracle->team(*mask), "enumeration"};

  // A domain no larger than the biggest multiplicity k >= 3 cannot host the
  // k distinct values a refuter might need.
  std::uint32_t largest = goal.k;
  for (const auto& a : sigma.atoms) largest = std::max(largest, a.k);
  if (largest >= 3 && cfg.domain_size <= largest) return {OracleVerdict::unknown, std::nullopt, "enumeration"};
  return {OracleVerdict::entailed, std::nullopt, "enumeration"};
}

}  // namespace anonymity
