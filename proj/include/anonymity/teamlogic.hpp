#pragma once

// A small team-semantics fragment: atoms, equality literals, conjunction,
// literal-guarded implication and lax existential quantification.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "anonymity/atoms.hpp"
#include "anonymity/errors.hpp"
#include "anonymity/team.hpp"

namespace anonymity {

/// Owning pointer with value semantics, for recursive AST nodes.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

/// `attr = "value"`, `attr != "value"`, `attr = other`, `attr != other`.
struct Literal {
  AttributeName attr;
  bool negated = false;
  std::variant<Value, AttributeName> rhs;

  bool holds(const Schema& schema, const Row& row) const {
    const Value& left = row[schema.index_of(attr)];
    const bool eq = std::visit(
        [&](const auto& r) {
          if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Value>)
            return left == r;
          else
            return left == row[schema.index_of(r)];
        },
        rhs);
    return eq != negated;
  }

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Formula;

struct AtomNode {
  std::variant<Atom, AuxAtom> atom;
  friend bool operator==(const AtomNode&, const AtomNode&) = default;
};

struct LiteralNode {
  Literal literal;
  friend bool operator==(const LiteralNode&, const LiteralNode&) = default;
};

struct AndNode {
  std::vector<Formula> parts;
  friend bool operator==(const AndNode&, const AndNode&);
};

struct ImplNode {
  std::vector<Literal> guard;
  Box<Formula> body;
  friend bool operator==(const ImplNode&, const ImplNode&) = default;
};

struct ExistsNode {
  AttributeName variable;
  Box<Formula> body;
  friend bool operator==(const ExistsNode&, const ExistsNode&) = default;
};

struct Formula {
  std::variant<AtomNode, LiteralNode, AndNode, ImplNode, ExistsNode> node;
  friend bool operator==(const Formula&, const Formula&) = default;
};

inline bool operator==(const AndNode& a, const AndNode& b) { return a.parts == b.parts; }

namespace fm {

inline Formula atom(Atom a) { return Formula{AtomNode{std::move(a)}}; }
inline Formula aux(AuxAtom a) { return Formula{AtomNode{std::move(a)}}; }
inline Formula literal(Literal l) { return Formula{LiteralNode{std::move(l)}}; }
inline Formula conj(std::vector<Formula> parts) { return Formula{AndNode{std::move(parts)}}; }
inline Formula implies(std::vector<Literal> guard, Formula body) {
  if (guard.empty()) throw std::invalid_argument("implication guard has no literals");
  return Formula{ImplNode{std::move(guard), Box<Formula>(std::move(body))}};
}
inline Formula exists(AttributeName v, Formula body) {
  return Formula{ExistsNode{std::move(v), Box<Formula>(std::move(body))}};
}

inline Literal eq(std::string_view attr, std::string_view value) {
  return Literal{AttributeName(std::string(attr)), false, Value(std::string(value))};
}
inline Literal ne(std::string_view attr, std::string_view value) {
  return Literal{AttributeName(std::string(attr)), true, Value(std::string(value))};
}

}  // namespace fm

/// Rows satisfying every guard literal; schema unchanged.
inline Team subteam(const Team& team, const std::vector<Literal>& guard) {
  for (const auto& l : guard) {
    team.schema().index_of(l.attr);
    if (auto other = std::get_if<AttributeName>(&l.rhs)) team.schema().index_of(*other);
  }
  return team.filter([&](const Row& r) {
    return std::all_of(guard.begin(), guard.end(),
                       [&](const Literal& l) { return l.holds(team.schema(), r); });
  });
}

/// Lax extension: row i becomes one row per value in choice[i].
inline Team extend(const Team& team, const AttributeName& fresh,
                   const std::vector<std::vector<Value>>& choice) {
  Schema schema = team.schema().with(fresh);
  if (choice.size() != team.size())
    throw PreconditionError("extension choice does not cover every row");
  std::vector<Row> rows;
  for (std::size_t i = 0; i < team.size(); ++i) {
    if (choice[i].empty()) throw PreconditionError("extension chooses no value for a row");
    for (const auto& v : choice[i]) {
      Row r = team.rows()[i];
      r.push_back(v);
      rows.push_back(std::move(r));
    }
  }
  return Team(std::move(schema), std::move(rows));
}

struct EvalOptions {
  /// Cap on candidate extensions tried per existential.
  std::uint64_t max_candidates = 1'000'000;
};

namespace detail {

// Values the quantified variable may take given the body's top-level
// literals that compare it with constants.
inline std::vector<Value> admissible_values(const AttributeName& v, const Formula& body,
                                            std::vector<Value> domain) {
  auto restrict_by = [&](const Literal& l) {
    if (l.attr != v) return;
    const auto* c = std::get_if<Value>(&l.rhs);
    if (!c) return;
    std::erase_if(domain, [&](const Value& d) { return (d == *c) == l.negated; });
  };
  if (const auto* lit = std::get_if<LiteralNode>(&body.node)) restrict_by(lit->literal);
  if (const auto* conj = std::get_if<AndNode>(&body.node))
    for (const auto& p : conj->parts)
      if (const auto* lit = std::get_if<LiteralNode>(&p.node)) restrict_by(lit->literal);
  return domain;
}

}  // namespace detail

inline bool eval(const Team& team, const std::vector<Value>& domain, const Formula& f,
                 const EvalOptions& opts = {});

namespace detail {

inline bool eval_exists(const Team& team, const std::vector<Value>& domain, const ExistsNode& e,
                        const EvalOptions& opts) {
  if (domain.empty()) throw DomainError("existential quantifier over an empty domain");
  if (team.schema().contains(e.variable))
    throw SchemaError("quantified attribute '" + e.variable.str() + "' already in schema");
  std::vector<Value> values = domain;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  values = admissible_values(e.variable, *e.body, std::move(values));

  if (team.empty()) return eval(extend(team, e.variable, {}), domain, *e.body, opts);
  if (values.empty()) return false;
  if (values.size() > 20) throw ResourceError("quantifier domain too large for exhaustive search");

  const std::uint32_t last = (std::uint32_t{1} << values.size()) - 1;
  std::vector<std::uint32_t> pick(team.size(), 1);  // non-empty subsets as bitmasks
  std::uint64_t tried = 0;
  while (true) {
    if (++tried > opts.max_candidates)
      throw ResourceError("existential search exceeded " + std::to_string(opts.max_candidates) +
                          " candidate extensions");
    std::vector<std::vector<Value>> choice(team.size());
    for (std::size_t i = 0; i < team.size(); ++i)
      for (std::size_t b = 0; b < values.size(); ++b)
        if (pick[i] & (std::uint32_t{1} << b)) choice[i].push_back(values[b]);
    if (eval(extend(team, e.variable, choice), domain, *e.body, opts)) return true;

    std::size_t i = 0;
    while (i < pick.size() && pick[i] == last) pick[i++] = 1;
    if (i == pick.size()) return false;
    ++pick[i];
  }
}

}  // namespace detail

/// Team-semantic truth of `f`. Literals are flat (every row), implication
/// evaluates its body on the guarded subteam, and the existential may give
/// each row several values drawn from `domain`.
inline bool eval(const Team& team, const std::vector<Value>& domain, const Formula& f,
                 const EvalOptions& opts) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomNode>) {
          return std::visit([&](const auto& a) { return check(team, a); }, n.atom);
        } else if constexpr (std::is_same_v<T, LiteralNode>) {
          return subteam(team, {n.literal}).size() == team.size();
        } else if constexpr (std::is_same_v<T, AndNode>) {
          return std::all_of(n.parts.begin(), n.parts.end(),
                             [&](const Formula& p) { return eval(team, domain, p, opts); });
        } else if constexpr (std::is_same_v<T, ImplNode>) {
          return eval(subteam(team, n.guard), domain, *n.body, opts);
        } else {
          return detail::eval_exists(team, domain, n, opts);
        }
      },
      f.node);
}

/// Every value occurring in the team, the default quantifier domain.
inline std::vector<Value> active_domain(const Team& team) {
  std::set<Value> seen;
  for (const auto& r : team.rows()) seen.insert(r.begin(), r.end());
  return {seen.begin(), seen.end()};
}

}  // namespace anonymity
