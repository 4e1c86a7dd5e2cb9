#pragma once

// JSON rendering of verdicts, derivations, countermodels and audits.

#include <string>
#include <utility>

#include "anonymity/atoms.hpp"
#include "anonymity/countermodel.hpp"
#include "anonymity/inference.hpp"
#include "anonymity/syntax.hpp"
#include "json.hpp"

namespace anonymity {

inline constexpr const char* kToolName = "anonymity";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline Json report_header(std::string command) {
  return Json{{"tool", kToolName}, {"version", kToolVersion}, {"command", std::move(command)}};
}

inline Json to_json(const Tuple& t) {
  Json out = Json::array();
  for (const auto& v : t) out.push_back(v.str());
  return out;
}

inline Json to_json(const Team& team) {
  Json attrs = Json::array(), rows = Json::array();
  for (const auto& a : team.schema().attributes()) attrs.push_back(a.str());
  for (const auto& r : team.rows()) rows.push_back(to_json(r));
  return Json{{"attributes", std::move(attrs)}, {"rows", std::move(rows)}};
}

/// Derivation record: {"rule", "conclusion" (atom text, null for falsum),
/// "premises"}.
inline Json to_json(const Derivation& d) {
  Json premises = Json::array();
  for (const auto& p : d.premises) premises.push_back(to_json(p));
  return Json{{"rule", std::string(rule_tag(d.rule))},
              {"conclusion", d.conclusion ? Json(print_atom(*d.conclusion)) : Json(nullptr)},
              {"premises", std::move(premises)}};
}

inline Derivation derivation_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("derivation record is not an object");
  const auto rule = rule_from_tag(j.at("rule").get<std::string>());
  if (!rule) throw std::invalid_argument("unknown rule tag " + j.at("rule").dump());
  Derivation d;
  d.rule = *rule;
  if (!j.at("conclusion").is_null()) d.conclusion = parse_atom(j.at("conclusion").get<std::string>());
  for (const auto& p : j.at("premises")) d.premises.push_back(derivation_from_json(p));
  return d;
}

/// Countermodel summary; the team itself is embedded up to `embed_rows` rows.
inline Json to_json(const CountermodelReport& r, std::size_t embed_rows = 64) {
  Json hyps = Json::array();
  for (const auto& [atom, holds] : r.satisfied_hypotheses)
    hyps.push_back(Json{{"atom", print_atom(atom)}, {"holds", holds}});
  Json out{{"construction", std::string(construction_tag(r.construction))},
           {"domain_size", r.domain_size},
           {"row_count", r.team.size()},
           {"hypotheses", std::move(hyps)},
           {"failed_goal", print_atom(r.failed_goal)}};
  if (r.team.size() <= embed_rows) out["team"] = to_json(r.team);
  return out;
}

inline std::string render_derivation(const Derivation& d, std::size_t depth = 0) {
  std::string out(depth * 2, ' ');
  out += d.conclusion ? print_atom(*d.conclusion) : std::string("FALSUM");
  out += "    [" + std::string(rule_tag(d.rule)) + "]\n";
  for (const auto& p : d.premises) out += render_derivation(p, depth + 1);
  return out;
}

}  // namespace anonymity
