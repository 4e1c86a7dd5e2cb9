#pragma once

// RFC-4180-style CSV: comma separated, optional double-quote escaping, a
// header row of attribute names. Cells stay strings.

#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include "anonymity/errors.hpp"
#include "anonymity/syntax.hpp"
#include "anonymity/team.hpp"

namespace anonymity {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // line on which the record starts
};

inline std::vector<CsvRecord> read_csv(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  std::vector<CsvRecord> out;
  CsvRecord rec;
  std::string field;
  std::size_t line = 1;
  bool quoted = false, field_started = false, record_started = false;
  rec.line = 1;

  auto end_field = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (record_started) {
      end_field();
      out.push_back(std::move(rec));
    }
    rec = CsvRecord{};
    record_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!record_started) {
      rec.line = line;
    }
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) throw ParseError("quote inside unquoted field", line, 0);
        quoted = true;
        field_started = record_started = true;
        break;
      case ',':
        record_started = true;
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = record_started = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line, 0);
  end_record();
  return out;
}

struct LoadedTeam {
  Team team;
  std::size_t duplicates = 0;  // data rows collapsed into an identical earlier row
};

inline LoadedTeam load_team_csv(std::istream& in) {
  const auto records = read_csv(in);
  if (records.empty()) throw SchemaError("CSV input has no header row");
  AttributeList header;
  for (const auto& name : records.front().fields) {
    if (!AttributeName::is_valid(name)) throw SchemaError("invalid attribute name '" + name + "' in header");
    header.emplace_back(name);
  }
  Schema schema(std::move(header));
  std::vector<Row> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != schema.size())
      throw ParseError("row has " + std::to_string(rec.fields.size()) + " fields, header has " +
                           std::to_string(schema.size()),
                       rec.line, 1);
    Row r;
    r.reserve(rec.fields.size());
    for (const auto& f : rec.fields) r.emplace_back(f);
    rows.push_back(std::move(r));
  }
  const std::size_t given = rows.size();
  Team team(std::move(schema), std::move(rows));
  return {team, given - team.size()};
}

inline LoadedTeam load_team_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return load_team_csv(in);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  // empty cells are quoted so a one-column row never becomes a blank line
  const bool plain = !s.empty() && s.find_first_of(",\"\r\n") == std::string::npos;
  if (plain) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

inline void write_team_csv(std::ostream& out, const Team& team) {
  const auto& attrs = team.schema().attributes();
  for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? "," : "") << detail::csv_field(attrs[i].str());
  out << '\n';
  for (const auto& r : team.rows()) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << detail::csv_field(r[i].str());
    out << '\n';
  }
}

inline void write_team_csv(const std::filesystem::path& path, const Team& team) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_team_csv(out, team);
}

}  // namespace anonymity
