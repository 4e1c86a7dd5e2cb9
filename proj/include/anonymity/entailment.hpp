#pragma once

// Decision procedures for the two complete fragments: plain anonymity atoms
// and simple k-anonymity atoms. Every answer carries its evidence.

#include <algorithm>
#include <utility>
#include <variant>

#include "anonymity/countermodel.hpp"
#include "anonymity/errors.hpp"
#include "anonymity/inference.hpp"

namespace anonymity {

class EntailmentResult {
 public:
  static EntailmentResult derivable(Derivation d) { return EntailmentResult(std::move(d)); }
  static EntailmentResult not_derivable(CountermodelReport r) { return EntailmentResult(std::move(r)); }

  bool is_derivable() const { return std::holds_alternative<Derivation>(outcome_); }
  const Derivation& derivation() const { return std::get<Derivation>(outcome_); }
  const CountermodelReport& countermodel() const { return std::get<CountermodelReport>(outcome_); }

 private:
  template <typename T>
  explicit EntailmentResult(T v) : outcome_(std::move(v)) {}
  std::variant<Derivation, CountermodelReport> outcome_;
};

inline EntailmentResult entails_upsilon(const AtomSet& sigma, const Atom& goal,
                                        const CountermodelLimits& limits = {}) {
  auto two = [](const Atom& a) { return a.k == 2; };
  if (!two(goal) || !std::all_of(sigma.atoms.begin(), sigma.atoms.end(), two))
    throw WrongFragmentError("multiplicities other than 2; use entails_k_simple or entails_k_saturate");
  if (auto d = derive_by_subsumption(sigma, goal)) return EntailmentResult::derivable(std::move(*d));
  if (goal.rhs.empty()) return EntailmentResult::not_derivable(build_full_team(sigma, goal, 3, limits));
  return EntailmentResult::not_derivable(build_thm1_team(sigma, goal, limits));
}

inline EntailmentResult entails_k_simple(const AtomSet& sigma, const Atom& goal,
                                         const CountermodelLimits& limits = {}) {
  auto simple = [](const Atom& a) { return a.is_simple(); };
  if (!simple(goal) || !std::all_of(sigma.atoms.begin(), sigma.atoms.end(), simple))
    throw WrongFragmentError("atom protects more or fewer than one attribute; use entails_k_saturate");
  if (goal.k == 1) return EntailmentResult::derivable(Derivation::leaf(Rule::k1_trivial, goal));
  if (auto d = derive_by_subsumption(sigma, goal)) return EntailmentResult::derivable(std::move(*d));
  return EntailmentResult::not_derivable(build_thm2_team(sigma, goal, limits));
}

}  // namespace anonymity
