#include <gtest/gtest.h>

#include "support.hpp"

using namespace anonymity;
using namespace testing_support;

TEST(ParseAtom, Examples) {
  EXPECT_EQ(parse_atom("hometown salary Y surname"), Atom(names({"hometown", "salary"}), names({"surname"}), 2));
  EXPECT_EQ(parse_atom("x Y3 y").k, 3u);
  EXPECT_EQ(parse_atom("  x   Y2 y z  # comment"), Atom(names({"x"}), names({"y", "z"}), 2));
  EXPECT_EQ(parse_atom("Y y"), Atom({}, names({"y"}), 2));
  EXPECT_EQ(parse_atom("x Y"), Atom(names({"x"}), {}, 2));
}

TEST(ParseAtom, Errors) {
  auto col_of = [](std::string_view text) {
    try {
      parse_atom(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return std::size_t{0};
  };
  EXPECT_THROW(parse_atom("x Y0 y"), ParseError);
  EXPECT_THROW(parse_atom("x y"), ParseError);
  EXPECT_THROW(parse_atom("x Y y Y z"), ParseError);
  EXPECT_THROW(parse_atom("x Y a,b"), ParseError);
  EXPECT_THROW(parse_atom("x Y99999999999 y"), ParseError);
  EXPECT_EQ(col_of("x Y0 y"), 4u);
  EXPECT_EQ(col_of("x Y y Y z"), 7u);
}

TEST(ParseSigma, CommentsBlankLinesAndLineNumbers) {
  const auto s = parse_sigma("# hypotheses\nx Y y\n\n  \ny Y3 z # trailing\nx Y y\n");
  ASSERT_EQ(s.atoms.size(), 2u);
  EXPECT_EQ(s.atoms[1], parse_atom("y Y3 z"));
  try {
    parse_sigma("x Y y\n\nbad line\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(PrintAtom, RoundTripsRandomAtoms) {
  Gen g(500);
  for (int i = 0; i < 500; ++i) {
    const Atom a(g.subset(kNamePool), g.subset(kNamePool), 1 + g.below(20));
    const auto text = print_atom(a);
    ASSERT_EQ(parse_atom(text), a) << text;
    ASSERT_EQ(print_atom(parse_atom(text)), text);
  }
}

TEST(ParseFormula, Examples) {
  const auto f = parse_formula("pub = \"private\" -> anon(2 ; d ; a)");
  const auto* impl = std::get_if<ImplNode>(&f.node);
  ASSERT_NE(impl, nullptr);
  ASSERT_EQ(impl->guard.size(), 1u);
  EXPECT_EQ(impl->guard[0], fm::eq("pub", "private"));

  const auto g = parse_formula("a = \"1\" & b != c -> c = \"2\" -> dep(a ; b)");
  const auto* outer = std::get_if<ImplNode>(&g.node);
  ASSERT_NE(outer, nullptr);
  EXPECT_EQ(outer->guard.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<ImplNode>(outer->body->node));

  const auto h = parse_formula("exists v ((v = \"0\") & anon(2 ; d v ; a))");
  EXPECT_TRUE(std::holds_alternative<ExistsNode>(h.node));
  EXPECT_EQ(print_formula(h), "exists v (v = \"0\" & anon(2 ; d v ; a))");

  EXPECT_EQ(parse_formula("inc( ; )"), fm::aux(AuxAtom(AuxKind::inclusion, {}, {})));
}

TEST(ParseFormula, Errors) {
  EXPECT_THROW(parse_formula("anon(2 ; a ; b) -> anon(2 ; a ; b)"), ParseError);
  EXPECT_THROW(parse_formula("a = \"1\" &"), ParseError);
  EXPECT_THROW(parse_formula("anon(0 ; a ; b)"), ParseError);
  EXPECT_THROW(parse_formula("inc(a b ; c)"), ParseError);
  EXPECT_THROW(parse_formula("a = \"open"), ParseError);
  EXPECT_THROW(parse_formula("a ! b"), ParseError);
  EXPECT_THROW(parse_formula("(a = b"), ParseError);
  EXPECT_THROW(parse_formula("a = b )"), ParseError);
  try {
    parse_formula("a = b &\n  c");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(PrintFormula, RoundTripsRandomFormulas) {
  Gen g(501);
  for (int i = 0; i < 500; ++i) {
    const Formula f = random_formula(g, 3);
    const auto text = print_formula(f);
    Formula back;
    ASSERT_NO_THROW(back = parse_formula(text)) << text;
    ASSERT_EQ(back, f) << text;
    ASSERT_EQ(print_formula(back), text);
  }
}
