#pragma once

// Data model: attribute names, values, schemas, teams, plus the projection
// and grouping helpers every checker is written against.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anonymity/errors.hpp"

namespace anonymity {

namespace detail {

inline bool is_reserved_token(std::string_view s) {
  if (s.empty() || s.front() != 'Y') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

inline bool is_name_char(char c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r': case '\v': case '\f':
    case '(': case ')': case ';': case '&': case '=': case '!':
    case '"': case ',': case '#':
      return false;
    default:
      return true;
  }
}

}  // namespace detail

/// An attribute (column) name. Names are case-sensitive and must not collide
/// with the punctuation of the atom and formula grammars.
class AttributeName {
 public:
  AttributeName() = default;
  explicit AttributeName(std::string name) : name_(std::move(name)) {
    if (!is_valid(name_))
      throw SchemaError("invalid attribute name '" + name_ + "'");
  }

  static bool is_valid(std::string_view s) {
    if (s.empty() || detail::is_reserved_token(s)) return false;
    if (s.find("->") != std::string_view::npos) return false;
    return std::all_of(s.begin(), s.end(), detail::is_name_char);
  }

  const std::string& str() const { return name_; }

  friend auto operator<=>(const AttributeName&, const AttributeName&) = default;
  friend bool operator==(const AttributeName&, const AttributeName&) = default;
  friend std::ostream& operator<<(std::ostream& os, const AttributeName& a) {
    return os << a.name_;
  }

 private:
  std::string name_;
};

using AttributeList = std::vector<AttributeName>;

inline AttributeList names(std::initializer_list<std::string_view> list) {
  AttributeList out;
  out.reserve(list.size());
  for (auto n : list) out.emplace_back(std::string(n));
  return out;
}

/// Opaque cell value; only equality is meaningful.
class Value {
 public:
  Value() = default;
  explicit Value(std::string token) : token_(std::move(token)) {}

  const std::string& str() const { return token_; }

  friend auto operator<=>(const Value&, const Value&) = default;
  friend bool operator==(const Value&, const Value&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Value& v) {
    return os << v.token_;
  }

 private:
  std::string token_;
};

using Tuple = std::vector<Value>;
/// A row stores one value per schema attribute, in schema order.
using Row = std::vector<Value>;

class Schema {
 public:
  Schema() = default;
  explicit Schema(AttributeList attributes) : attributes_(std::move(attributes)) {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (attributes_[i] == attributes_[j])
          throw SchemaError("duplicate attribute '" + attributes_[i].str() + "'");
  }

  const AttributeList& attributes() const { return attributes_; }
  std::size_t size() const { return attributes_.size(); }

  bool contains(const AttributeName& a) const {
    return std::find(attributes_.begin(), attributes_.end(), a) != attributes_.end();
  }

  std::size_t index_of(const AttributeName& a) const {
    auto it = std::find(attributes_.begin(), attributes_.end(), a);
    if (it == attributes_.end())
      throw SchemaError("unknown attribute '" + a.str() + "'");
    return static_cast<std::size_t>(it - attributes_.begin());
  }

  std::vector<std::size_t> indices_of(std::span<const AttributeName> as) const {
    std::vector<std::size_t> out;
    out.reserve(as.size());
    for (const auto& a : as) out.push_back(index_of(a));
    return out;
  }

  Schema with(const AttributeName& extra) const {
    if (contains(extra))
      throw SchemaError("attribute '" + extra.str() + "' already in schema");
    AttributeList next = attributes_;
    next.push_back(extra);
    return Schema(std::move(next));
  }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  AttributeList attributes_;
};

/// A finite set of assignments over one schema. Rows are kept sorted and
/// duplicate-free, so two teams with the same rows compare equal.
class Team {
 public:
  Team() = default;
  explicit Team(Schema schema) : schema_(std::move(schema)) {}

  Team(Schema schema, std::vector<Row> rows) : schema_(std::move(schema)), rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.size() != schema_.size())
        throw SchemaError("row has " + std::to_string(r.size()) + " values, schema has " +
                          std::to_string(schema_.size()) + " attributes");
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
  }

  /// Convenience for tests and fixtures: rows given as raw string tokens.
  static Team from_strings(const AttributeList& attributes,
                           const std::vector<std::vector<std::string>>& records) {
    std::vector<Row> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) {
      Row r;
      r.reserve(rec.size());
      for (const auto& cell : rec) r.emplace_back(cell);
      rows.push_back(std::move(r));
    }
    return Team(Schema(attributes), std::move(rows));
  }

  const Schema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  const Value& at(std::size_t row, const AttributeName& a) const {
    return rows_.at(row)[schema_.index_of(a)];
  }

  /// Rows of this team that satisfy `pred`, as a team over the same schema.
  template <typename Pred>
  Team filter(Pred&& pred) const {
    std::vector<Row> kept;
    for (const auto& r : rows_)
      if (std::invoke(pred, r)) kept.push_back(r);
    return Team(schema_, std::move(kept));
  }

  Team united_with(const Team& other) const {
    if (!(schema_ == other.schema_)) throw SchemaError("union of teams over different schemas");
    std::vector<Row> all = rows_;
    all.insert(all.end(), other.rows_.begin(), other.rows_.end());
    return Team(schema_, std::move(all));
  }

  friend bool operator==(const Team&, const Team&) = default;

 private:
  Schema schema_;
  std::vector<Row> rows_;
};

inline Tuple tuple_of(const Row& row, std::span<const std::size_t> idx) {
  Tuple t;
  t.reserve(idx.size());
  for (auto i : idx) t.push_back(row[i]);
  return t;
}

/// The value tuple s(attrs) for every row s, in row order.
inline std::vector<Tuple> project(const Team& team, std::span<const AttributeName> attrs) {
  const auto idx = team.schema().indices_of(attrs);
  std::vector<Tuple> out;
  out.reserve(team.size());
  for (const auto& r : team.rows()) out.push_back(tuple_of(r, idx));
  return out;
}

/// Partition of row indices keyed by s(attrs).
using Grouping = std::map<Tuple, std::vector<std::size_t>>;

inline Grouping group_by(const Team& team, std::span<const AttributeName> attrs) {
  const auto idx = team.schema().indices_of(attrs);
  Grouping groups;
  for (std::size_t i = 0; i < team.size(); ++i)
    groups[tuple_of(team.rows()[i], idx)].push_back(i);
  return groups;
}

}  // namespace anonymity
