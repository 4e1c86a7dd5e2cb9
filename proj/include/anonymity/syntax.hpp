#pragma once

// Text forms of atoms, hypothesis files and formulas.
//
//   atom     ::= name* UPS name*            UPS ::= "Y" | "Y" INT   (INT >= 1)
//   formula  ::= conj [ "->" formula ]      (left side: literals only)
//   conj     ::= unary { "&" unary }
//   unary    ::= "(" formula ")" | "exists" name "(" formula ")"
//              | ("dep" | "inc" | "ind") "(" name* ";" name* ")"
//              | "anon" "(" INT ";" name* ";" name* ")"
//              | name ("=" | "!=") (string | name)

#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anonymity/atoms.hpp"
#include "anonymity/inference.hpp"
#include "anonymity/teamlogic.hpp"

namespace anonymity {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        message_(what), line_(line), column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

inline std::uint32_t parse_multiplicity(std::string_view digits, std::size_t line, std::size_t col) {
  std::uint32_t k = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw ParseError("bad multiplicity '" + std::string(digits) + "'", line, col);
  if (k < 1) throw ParseError("multiplicity must be at least 1", line, col);
  return k;
}

inline std::string join(const AttributeList& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ' ';
    out += x.str();
  }
  return out;
}

}  // namespace detail

/// Parses one atom; `line` only labels error positions.
inline Atom parse_atom(std::string_view text, std::size_t line = 1) {
  if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
  AttributeList lhs, rhs;
  std::optional<std::uint32_t> k;
  std::size_t i = 0;
  while (i < text.size()) {
    if (detail::is_space(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !detail::is_space(text[i])) ++i;
    const std::string_view word = text.substr(start, i - start);
    const std::size_t col = start + 1;
    if (detail::is_reserved_token(word)) {
      if (k) throw ParseError("second Y separator", line, col);
      k = word.size() == 1 ? 2u : detail::parse_multiplicity(word.substr(1), line, col + 1);
      continue;
    }
    if (!AttributeName::is_valid(word))
      throw ParseError("unexpected token '" + std::string(word) + "'", line, col);
    (k ? rhs : lhs).emplace_back(std::string(word));
  }
  if (!k) throw ParseError("missing Y separator", line, text.size() + 1);
  return Atom(std::move(lhs), std::move(rhs), *k);
}

inline std::string print_atom(const Atom& a) {
  std::string out = detail::join(a.lhs);
  if (!out.empty()) out += ' ';
  out += a.k == 2 ? "Y" : "Y" + std::to_string(a.k);
  if (!a.rhs.empty()) out += ' ' + detail::join(a.rhs);
  return out;
}

/// One atom per line; blank lines and `#` comments are skipped.
inline AtomSet parse_sigma(std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    if (std::all_of(body.begin(), body.end(), detail::is_space)) continue;
    atoms.push_back(parse_atom(body, n));
  }
  return AtomSet(std::move(atoms));
}

inline AtomSet parse_sigma(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sigma(in);
}

namespace detail {

enum class Tok { name, string, number, lparen, rparen, semi, amp, arrow, eq, ne, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

class FormulaLexer {
 public:
  explicit FormulaLexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "", l, c});
        return out;
      }
      const char ch = src_[pos_];
      auto single = [&](Tok t) {
        advance();
        out.push_back({t, std::string(1, ch), l, c});
      };
      switch (ch) {
        case '(': single(Tok::lparen); continue;
        case ')': single(Tok::rparen); continue;
        case ';': single(Tok::semi); continue;
        case '&': single(Tok::amp); continue;
        case '=': single(Tok::eq); continue;
        case '!':
          advance();
          if (pos_ >= src_.size() || src_[pos_] != '=') throw ParseError("expected '=' after '!'", l, c);
          advance();
          out.push_back({Tok::ne, "!=", l, c});
          continue;
        case '"':
          out.push_back({Tok::string, read_string(l, c), l, c});
          continue;
        default:
          break;
      }
      if (src_.substr(pos_, 2) == "->") {
        advance();
        advance();
        out.push_back({Tok::arrow, "->", l, c});
        continue;
      }
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_name_char(src_[pos_]) && src_.substr(pos_, 2) != "->") advance();
      if (pos_ == start) throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
      std::string word(src_.substr(start, pos_ - start));
      const bool numeric = std::all_of(word.begin(), word.end(), [](char d) { return d >= '0' && d <= '9'; });
      out.push_back({numeric ? Tok::number : Tok::name, std::move(word), l, c});
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size() && is_space(src_[pos_])) advance();
  }
  std::string read_string(std::size_t l, std::size_t c) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError("unterminated string", l, c);
      char ch = src_[pos_];
      advance();
      if (ch == '"') return out;
      if (ch == '\\') {
        if (pos_ >= src_.size()) throw ParseError("unterminated string", l, c);
        ch = src_[pos_];
        advance();
      }
      out += ch;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = formula();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().col);
  }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  AttributeName name() {
    const Token& t = peek();
    if (t.kind != Tok::name && t.kind != Tok::number) fail("expected attribute name");
    if (!AttributeName::is_valid(t.text)) fail("invalid attribute name '" + t.text + "'");
    ++pos_;
    return AttributeName(t.text);
  }

  AttributeList names_until(Tok stop) {
    AttributeList out;
    while (peek().kind != stop) out.push_back(name());
    return out;
  }

  static void collect_guard(const Formula& f, std::vector<Literal>& out, bool& ok) {
    if (const auto* l = std::get_if<LiteralNode>(&f.node)) {
      out.push_back(l->literal);
    } else if (const auto* a = std::get_if<AndNode>(&f.node)) {
      for (const auto& p : a->parts) collect_guard(p, out, ok);
    } else {
      ok = false;
    }
  }

  Formula formula() {
    const Token start = peek();
    Formula left = conj();
    if (!accept(Tok::arrow)) return left;
    std::vector<Literal> guard;
    bool ok = true;
    collect_guard(left, guard, ok);
    if (!ok) throw ParseError("implication guard must be a conjunction of literals", start.line, start.col);
    return fm::implies(std::move(guard), formula());
  }

  Formula conj() {
    std::vector<Formula> parts;
    parts.push_back(unary());
    while (accept(Tok::amp)) parts.push_back(unary());
    if (parts.size() == 1) return std::move(parts.front());
    return fm::conj(std::move(parts));
  }

  Formula unary() {
    if (accept(Tok::lparen)) {
      Formula f = formula();
      expect(Tok::rparen, "')'");
      return f;
    }
    const Token& t = peek();
    if (t.kind == Tok::name && peek(1).kind == Tok::lparen) {
      if (t.text == "dep" || t.text == "inc" || t.text == "ind") {
        const AuxKind kind = t.text == "dep" ? AuxKind::dependence
                             : t.text == "inc" ? AuxKind::inclusion
                                               : AuxKind::independence;
        const Token head = t;
        pos_ += 2;
        AttributeList l = names_until(Tok::semi);
        expect(Tok::semi, "';'");
        AttributeList r = names_until(Tok::rparen);
        expect(Tok::rparen, "')'");
        if (kind == AuxKind::inclusion && l.size() != r.size())
          throw ParseError("inclusion atom arguments differ in length", head.line, head.col);
        return fm::aux(AuxAtom(kind, std::move(l), std::move(r)));
      }
      if (t.text == "anon") {
        pos_ += 2;
        const Token& num = expect(Tok::number, "multiplicity");
        const auto k = parse_multiplicity(num.text, num.line, num.col);
        expect(Tok::semi, "';'");
        AttributeList l = names_until(Tok::semi);
        expect(Tok::semi, "';'");
        AttributeList r = names_until(Tok::rparen);
        expect(Tok::rparen, "')'");
        return fm::atom(Atom(std::move(l), std::move(r), k));
      }
    }
    if (t.kind == Tok::name && t.text == "exists" &&
        (peek(1).kind == Tok::name || peek(1).kind == Tok::number) && peek(2).kind == Tok::lparen) {
      ++pos_;
      AttributeName v = name();
      expect(Tok::lparen, "'('");
      Formula body = formula();
      expect(Tok::rparen, "')'");
      return fm::exists(std::move(v), std::move(body));
    }
    return literal();
  }

  Formula literal() {
    AttributeName attr = name();
    bool negated = false;
    if (accept(Tok::ne))
      negated = true;
    else
      expect(Tok::eq, "'=' or '!='");
    if (peek().kind == Tok::string) {
      Value v(toks_[pos_++].text);
      return fm::literal(Literal{std::move(attr), negated, std::move(v)});
    }
    return fm::literal(Literal{std::move(attr), negated, name()});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

inline std::string print_literal(const Literal& l) {
  std::string out = l.attr.str() + (l.negated ? " != " : " = ");
  if (const auto* v = std::get_if<Value>(&l.rhs)) return out + quote(v->str());
  return out + std::get<AttributeName>(l.rhs).str();
}

inline std::string print_args(const AttributeList& l, const AttributeList& r) {
  std::string a = join(l), b = join(r);
  return (a.empty() ? "" : a + " ") + ";" + (b.empty() ? "" : " " + b);
}

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::FormulaParser(detail::FormulaLexer(text).run()).parse();
}

inline std::string print_formula(const Formula& f) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomNode>) {
          if (const auto* a = std::get_if<Atom>(&n.atom))
            return "anon(" + std::to_string(a->k) + " ; " + detail::print_args(a->lhs, a->rhs) + ")";
          const auto& x = std::get<AuxAtom>(n.atom);
          const char* head = x.kind == AuxKind::dependence ? "dep"
                             : x.kind == AuxKind::inclusion ? "inc"
                                                            : "ind";
          return std::string(head) + "(" + detail::print_args(x.lhs, x.rhs) + ")";
        } else if constexpr (std::is_same_v<T, LiteralNode>) {
          return detail::print_literal(n.literal);
        } else if constexpr (std::is_same_v<T, AndNode>) {
          std::string out;
          for (const auto& p : n.parts) {
            if (!out.empty()) out += " & ";
            const bool wrap = std::holds_alternative<AndNode>(p.node) || std::holds_alternative<ImplNode>(p.node);
            out += wrap ? "(" + print_formula(p) + ")" : print_formula(p);
          }
          return out;
        } else if constexpr (std::is_same_v<T, ImplNode>) {
          std::string out;
          for (const auto& l : n.guard) {
            if (!out.empty()) out += " & ";
            out += detail::print_literal(l);
          }
          return out + " -> " + print_formula(*n.body);
        } else {
          return "exists " + n.variable.str() + " (" + print_formula(*n.body) + ")";
        }
      },
      f.node);
}

}  // namespace anonymity
