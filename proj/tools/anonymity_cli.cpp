// Command-line front end: check, audit, entail, oracle.
//
// Exit status: 0 holds / derivable / entailed, 1 fails / not derivable /
// refuted, 2 usage or parse error, 3 unknown, 4 unreadable or unwritable
// file, 5 schema error, 6 fragment mismatch, 7 resource limit, 8 internal
// error. Errors are reported as one JSON line on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anonymity/anonymity.hpp"

namespace {

using namespace anonymity;

enum Exit : int {
  kHolds = 0,
  kFails = 1,
  kUsage = 2,
  kUnknown = 3,
  kIo = 4,
  kSchema = 5,
  kFragment = 6,
  kResource = 7,
  kInternal = 8,
};

int report_error(const char* kind, const std::string& message, int code) {
  Json rec{{"error", kind}, {"message", message}, {"exit", code}};
  std::cerr << rec.dump() << '\n';
  return code;
}

void emit(const Json& doc, const std::string& text, bool pretty) {
  if (pretty)
    std::cout << text;
  else
    std::cout << doc.dump() << '\n';
}

AtomSet load_sigma(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return parse_sigma(in);
}

AttributeList split_names(const std::vector<std::string>& raw) {
  AttributeList out;
  for (const auto& s : raw)
    if (!s.empty()) out.emplace_back(s);
  return out;
}

std::string tuple_text(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i].str();
  return out + ")";
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string team;
  std::string atom;
  std::string formula;
  std::vector<std::string> domain;
  bool pretty = false;
};

int run_check(const CheckArgs& a) {
  const auto loaded = load_team_csv(std::filesystem::path(a.team));
  const Team& team = loaded.team;
  Json doc = report_header("check");
  doc["team"] = a.team;
  doc["rows"] = team.size();
  doc["duplicates_collapsed"] = loaded.duplicates;
  std::ostringstream text;
  bool holds = false;

  if (!a.atom.empty()) {
    const Atom atom = parse_atom(a.atom);
    holds = check(team, atom);
    doc["kind"] = "atom";
    doc["input"] = print_atom(atom);
    doc["holds"] = holds;
    text << print_atom(atom) << ": " << (holds ? "holds" : "fails") << '\n';
    if (!holds) {
      const auto counts = distinct_counts(team, atom.lhs, atom.rhs);
      for (const auto& [key, n] : counts) {
        if (n >= atom.k) continue;
        Json rows = Json::array();
        const auto li = team.schema().indices_of(atom.lhs);
        for (const auto& r : team.rows())
          if (tuple_of(r, li) == key) rows.push_back(to_json(r));
        doc["evidence"] = Json{{"published", to_json(key)},
                               {"distinct_protected", n},
                               {"required", atom.k},
                               {"rows", std::move(rows)}};
        text << "  first failing group " << tuple_text(key) << ": " << n << " distinct protected value(s), need "
             << atom.k << '\n';
        break;
      }
    }
  } else {
    const Formula f = parse_formula(a.formula);
    std::vector<Value> domain;
    for (const auto& v : a.domain) domain.emplace_back(v);
    if (domain.empty()) domain = active_domain(team);
    holds = eval(team, domain, f);
    doc["kind"] = "formula";
    doc["input"] = print_formula(f);
    doc["holds"] = holds;
    text << print_formula(f) << ": " << (holds ? "holds" : "fails") << '\n';
  }
  emit(doc, text.str(), a.pretty);
  return holds ? kHolds : kFails;
}

// --- audit -----------------------------------------------------------------

struct AuditArgs {
  std::string team;
  std::vector<std::string> publish;
  std::vector<std::string> protect;
  std::optional<std::size_t> min_k;
  bool pretty = false;
};

int run_audit(const AuditArgs& a) {
  const auto loaded = load_team_csv(std::filesystem::path(a.team));
  const Team& team = loaded.team;
  const AttributeList pub = split_names(a.publish), prot = split_names(a.protect);
  if (prot.empty()) throw ConfigError("--protect needs at least one attribute");
  const auto degree = anonymity_degree(team, pub, prot);
  const auto counts = distinct_counts(team, pub, prot);
  const auto groups_by_key = group_by(team, pub);

  Json doc = report_header("audit");
  doc["team"] = a.team;
  doc["rows"] = team.size();
  doc["duplicates_collapsed"] = loaded.duplicates;
  Json p = Json::array(), q = Json::array();
  for (const auto& x : pub) p.push_back(x.str());
  for (const auto& x : prot) q.push_back(x.str());
  doc["publish"] = p;
  doc["protect"] = q;
  doc["degree"] = degree.is_unbounded() ? Json("UNBOUNDED") : Json(degree.value());
  Json groups = Json::array();
  std::ostringstream text;
  text << "anonymity degree: " << degree.to_string() << '\n';
  for (const auto& [key, n] : counts) {
    groups.push_back(Json{{"published", to_json(key)},
                          {"rows", groups_by_key.at(key).size()},
                          {"distinct_protected", n}});
    text << "  " << tuple_text(key) << ": " << groups_by_key.at(key).size() << " row(s), " << n
         << " distinct protected\n";
  }
  doc["groups"] = std::move(groups);
  bool ok = true;
  if (a.min_k) {
    ok = degree.admits(*a.min_k);
    doc["min_k"] = *a.min_k;
    doc["meets_min_k"] = ok;
    text << "minimum k " << *a.min_k << ": " << (ok ? "met" : "NOT met") << '\n';
  }
  emit(doc, text.str(), a.pretty);
  return ok ? kHolds : kFails;
}

// --- entail ----------------------------------------------------------------

struct EntailArgs {
  std::string sigma;
  std::string goal;
  std::string countermodel_out;
  std::string mode = "auto";
  std::size_t max_nodes = 1'000'000;
  bool pretty = false;
};

std::string pick_mode(const AtomSet& sigma, const Atom& goal) {
  auto all = [&](auto pred) {
    return pred(goal) && std::all_of(sigma.atoms.begin(), sigma.atoms.end(), pred);
  };
  if (all([](const Atom& x) { return x.k == 2; })) return "upsilon";
  if (all([](const Atom& x) { return x.is_simple(); })) return "k-simple";
  return "k-saturate";
}

int run_entail(const EntailArgs& a) {
  const AtomSet sigma = load_sigma(a.sigma);
  const Atom goal = parse_atom(a.goal);
  const std::string mode = a.mode == "auto" ? pick_mode(sigma, goal) : a.mode;

  Json doc = report_header("entail");
  doc["mode"] = mode;
  doc["goal"] = print_atom(goal);
  Json hyps = Json::array();
  for (const auto& h : sigma.atoms) hyps.push_back(print_atom(h));
  doc["sigma"] = std::move(hyps);
  std::ostringstream text;

  auto derivable = [&](const Derivation& d) {
    if (auto v = verify_derivation(d, sigma); !v)
      throw InternalError("derivation failed verification at " + v.location + ": " + v.reason);
    doc["verdict"] = "DERIVABLE";
    doc["derivation"] = to_json(d);
    text << "DERIVABLE " << print_atom(goal) << '\n' << render_derivation(d);
    emit(doc, text.str(), a.pretty);
    return kHolds;
  };

  if (mode == "k-saturate") {
    SaturationOptions opts;
    opts.max_nodes = a.max_nodes;
    const auto res = entails_k_saturate(sigma, goal, opts);
    if (res.derivable()) return derivable(*res.derivation);
    doc["verdict"] = "UNKNOWN";
    Json closure = Json::array();
    for (const auto& c : res.closure) closure.push_back(print_atom(c));
    doc["closure"] = std::move(closure);
    text << "UNKNOWN " << print_atom(goal) << " (not reached; closure has " << res.closure.size() << " atoms)\n";
    emit(doc, text.str(), a.pretty);
    return kUnknown;
  }

  const auto res = mode == "upsilon" ? entails_upsilon(sigma, goal) : entails_k_simple(sigma, goal);
  if (res.is_derivable()) return derivable(res.derivation());

  const auto& cm = res.countermodel();
  if (!verify_countermodel(cm, sigma, goal)) throw InternalError("countermodel failed verification");
  doc["verdict"] = "NOT_DERIVABLE";
  doc["countermodel"] = to_json(cm);
  if (!a.countermodel_out.empty()) {
    write_team_csv(std::filesystem::path(a.countermodel_out), cm.team);
    doc["countermodel"]["csv"] = a.countermodel_out;
  }
  text << "NOT DERIVABLE " << print_atom(goal) << '\n'
       << "  countermodel: " << construction_tag(cm.construction) << ", " << cm.team.size()
       << " rows over domain size " << cm.domain_size << '\n';
  if (!a.countermodel_out.empty()) text << "  written to " << a.countermodel_out << '\n';
  emit(doc, text.str(), a.pretty);
  return kFails;
}

// --- oracle ----------------------------------------------------------------

struct OracleArgs {
  std::string sigma;
  std::string goal;
  std::size_t attrs = 3;
  std::size_t domain_size = 2;
  std::string mode = "exhaustive";
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::string team_out;
  bool pretty = false;
};

int run_oracle(const OracleArgs& a) {
  const AtomSet sigma = load_sigma(a.sigma);
  const Atom goal = parse_atom(a.goal);
  OracleConfig cfg;
  cfg.attribute_count = a.attrs;
  cfg.domain_size = a.domain_size;
  cfg.mode = a.mode == "random" ? OracleMode::random : OracleMode::exhaustive;
  cfg.sample_count = a.samples;
  cfg.seed = a.seed;
  const auto res = semantic_entails(sigma, goal, cfg);

  Json doc = report_header("oracle");
  doc["goal"] = print_atom(goal);
  doc["verdict"] = std::string(verdict_tag(res.verdict));
  doc["source"] = res.source;
  std::ostringstream text;
  text << verdict_tag(res.verdict) << " " << print_atom(goal) << " (" << res.source << ")\n";
  if (res.refuter) {
    doc["refuter"] = to_json(*res.refuter);
    if (!a.team_out.empty()) {
      write_team_csv(std::filesystem::path(a.team_out), *res.refuter);
      doc["refuter_csv"] = a.team_out;
      text << "  refuting team written to " << a.team_out << '\n';
    }
  }
  emit(doc, text.str(), a.pretty);
  switch (res.verdict) {
    case OracleVerdict::entailed: return kHolds;
    case OracleVerdict::refuted: return kFails;
    case OracleVerdict::unknown: return kUnknown;
  }
  return kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anonymity atoms: model checking, implication, and k-anonymity audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Evaluate an atom or formula on a CSV team");
  check_cmd->add_option("--team", check_args.team, "CSV file with a header row")->required();
  auto* atom_opt = check_cmd->add_option("--atom", check_args.atom, "Atom such as 'x y Y3 z'");
  auto* formula_opt = check_cmd->add_option("--formula", check_args.formula, "Formula text");
  atom_opt->excludes(formula_opt);
  check_cmd->add_option("--domain", check_args.domain, "Quantifier domain (default: values in the team)")
      ->delimiter(',');
  check_cmd->add_flag("--pretty", check_args.pretty, "Human-readable output");

  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "Largest k for which the published attributes keep the protected ones k-anonymous");
  audit_cmd->add_option("--team", audit_args.team, "CSV file with a header row")->required();
  audit_cmd->add_option("--publish", audit_args.publish, "Published attributes")->delimiter(',');
  audit_cmd->add_option("--protect", audit_args.protect, "Protected attributes")->delimiter(',')->required();
  audit_cmd->add_option("--min-k", audit_args.min_k, "Exit with status 1 if the degree is below K");
  audit_cmd->add_flag("--pretty", audit_args.pretty, "Human-readable output");

  EntailArgs entail_args;
  auto* entail_cmd = app.add_subcommand("entail", "Decide whether a goal atom follows from a set of atoms");
  entail_cmd->add_option("--sigma", entail_args.sigma, "File with one atom per line")->required();
  entail_cmd->add_option("--goal", entail_args.goal, "Goal atom")->required();
  entail_cmd->add_option("--countermodel-out", entail_args.countermodel_out, "Write a refuting team as CSV");
  entail_cmd->add_option("--mode", entail_args.mode, "upsilon, k-simple, k-saturate or auto")
      ->check(CLI::IsMember({"auto", "upsilon", "k-simple", "k-saturate"}));
  entail_cmd->add_option("--max-nodes", entail_args.max_nodes, "Saturation node budget");
  entail_cmd->add_flag("--pretty", entail_args.pretty, "Human-readable output");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force semantic entailment over a small domain");
  oracle_cmd->add_option("--sigma", oracle_args.sigma, "File with one atom per line")->required();
  oracle_cmd->add_option("--goal", oracle_args.goal, "Goal atom")->required();
  oracle_cmd->add_option("--attrs", oracle_args.attrs, "Attribute count bound (<= 4)");
  oracle_cmd->add_option("--domain-size", oracle_args.domain_size, "2 or 3");
  oracle_cmd->add_option("--mode", oracle_args.mode, "exhaustive or random")
      ->check(CLI::IsMember({"exhaustive", "random"}));
  oracle_cmd->add_option("--samples", oracle_args.samples, "Random teams to try");
  oracle_cmd->add_option("--seed", oracle_args.seed, "Random seed");
  oracle_cmd->add_option("--team-out", oracle_args.team_out, "Write a refuting team as CSV");
  oracle_cmd->add_flag("--pretty", oracle_args.pretty, "Human-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kUsage);
  }

  try {
    if (*check_cmd) {
      if (check_args.atom.empty() == check_args.formula.empty())
        return report_error("usage", "check needs exactly one of --atom or --formula", kUsage);
      return run_check(check_args);
    }
    if (*audit_cmd) return run_audit(audit_args);
    if (*entail_cmd) return run_entail(entail_args);
    if (*oracle_cmd) return run_oracle(oracle_args);
  } catch (const ParseError& e) {
    return report_error("parse", e.what(), kUsage);
  } catch (const ConfigError& e) {
    return report_error("usage", e.what(), kUsage);
  } catch (const DomainError& e) {
    return report_error("usage", e.what(), kUsage);
  } catch (const IoError& e) {
    return report_error("io", e.what(), kIo);
  } catch (const SchemaError& e) {
    return report_error("schema", e.what(), kSchema);
  } catch (const WrongFragmentError& e) {
    return report_error("fragment", e.what(), kFragment);
  } catch (const PreconditionError& e) {
    return report_error("fragment", e.what(), kFragment);
  } catch (const ResourceError& e) {
    return report_error("resource", e.what(), kResource);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kInternal);
  }
  return kUsage;
}
