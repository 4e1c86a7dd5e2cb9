#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace anonymity;
using namespace testing_support;

namespace {

LoadedTeam load(const std::string& text) {
  std::istringstream in(text);
  return load_team_csv(in);
}

const char* kTable1Csv =
    "surname,hometown,salary\n"
    "Balbuk,Watarru,\"70,000\"\n"
    "Barambah,Amata,\"90,000\"\n"
    "Jones,Finke,\"100,000\"\n"
    "Smith,Watarru,\"70,000\"\n"
    "Williams,Amata,\"90,000\"\n"
    "Yunipingu,Finke,\"100,000\"\n";

}  // namespace

TEST(Csv, Table1) {
  const auto l = load(kTable1Csv);
  EXPECT_EQ(l.team, table1());
  EXPECT_EQ(l.team.size(), 6u);
  EXPECT_EQ(l.team.schema().size(), 3u);
  EXPECT_EQ(l.duplicates, 0u);
}

TEST(Csv, SampleFileMatchesFixture) {
  const auto l = load_team_csv(std::filesystem::path(ANONYMITY_SAMPLES) / "table1.csv");
  EXPECT_EQ(l.team, table1());
}

TEST(Csv, HeaderOnlyAndDuplicates) {
  EXPECT_TRUE(load("a,b\n").team.empty());
  const auto l = load("a,b\n1,2\n1,2\n3,4\n");
  EXPECT_EQ(l.team.size(), 2u);
  EXPECT_EQ(l.duplicates, 1u);
}

TEST(Csv, QuotingBomAndLineEndings) {
  const auto l = load("\xEF\xBB\xBF" "a,b\r\n\"x,\"\"y\"\"\",\"multi\nline\"\r\n\r\n,\n");
  ASSERT_EQ(l.team.size(), 2u);
  EXPECT_EQ(l.team.schema().attributes()[0].str(), "a");
  const auto& rows = l.team.rows();
  EXPECT_EQ(rows[0][0].str(), "");
  EXPECT_EQ(rows[1][0].str(), "x,\"y\"");
  EXPECT_EQ(rows[1][1].str(), "multi\nline");
}

TEST(Csv, Errors) {
  EXPECT_THROW(load(""), SchemaError);
  EXPECT_THROW(load("a,a\n"), SchemaError);
  EXPECT_THROW(load("a,Y\n"), SchemaError);
  try {
    load("a,b\n1,2\n3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load("a\n\"open\n"), ParseError);
  EXPECT_THROW(load_team_csv(std::filesystem::path("/nonexistent/team.csv")), IoError);
}

TEST(Csv, WriteReadRoundTrip) {
  Gen g(9);
  const std::vector<std::string> cells = {"0", "", "a,b", "q\"uote", "line\nbreak", " sp "};
  for (int i = 0; i < 200; ++i) {
    const std::size_t width = 1 + g.below(3);
    AttributeList schema;
    for (std::size_t j = 0; j < width; ++j) schema.emplace_back("c" + std::to_string(j));
    std::vector<Row> rows;
    for (std::size_t r = 0, n = g.below(5); r < n; ++r) {
      Row row;
      for (std::size_t j = 0; j < width; ++j) row.emplace_back(cells[g.below(cells.size())]);
      rows.push_back(row);
    }
    const Team t(Schema(schema), rows);
    std::ostringstream out;
    write_team_csv(out, t);
    ASSERT_EQ(load(out.str()).team, t) << out.str();
  }
}

TEST(Report, DerivationJsonRoundTripReverifies) {
  const std::vector<std::pair<std::vector<std::string_view>, std::string_view>> cases = {
      {{"x y Y z y"}, "x Y z u"}, {{"x Y2 y", "x y Y3 z"}, "x Y6 y z"}, {{"a Y a"}, "p Y q"}, {{}, "x Y1 y"}};
  for (const auto& [hyps, goal] : cases) {
    std::vector<Atom> atoms;
    for (auto h : hyps) atoms.push_back(parse_atom(h));
    const AtomSet sigma(atoms);
    const auto r = entails_k_saturate(sigma, parse_atom(goal));
    ASSERT_TRUE(r.derivable()) << goal;
    const Json j = Json::parse(to_json(*r.derivation).dump());
    const Derivation back = derivation_from_json(j);
    EXPECT_EQ(back, *r.derivation);
    EXPECT_TRUE(verify_derivation(back, sigma));
  }
  EXPECT_THROW(derivation_from_json(Json{{"rule", "A9"}, {"conclusion", nullptr}, {"premises", Json::array()}}),
               std::invalid_argument);
}

TEST(Report, CountermodelJson) {
  const auto sigma = sigma_of({"x Y y", "y Y z"});
  const auto rep = build_thm1_team(sigma, atom("x Y z"));
  const Json j = to_json(rep);
  EXPECT_EQ(j["construction"], "THM1");
  EXPECT_EQ(j["row_count"], rep.team.size());
  EXPECT_EQ(j["hypotheses"].size(), 2u);
  EXPECT_EQ(j["failed_goal"], "x Y z");
  EXPECT_EQ(j["team"]["rows"].size(), rep.team.size());
  EXPECT_FALSE(to_json(rep, 3).contains("team"));
  const auto text = render_derivation(*entails_k_saturate(sigma_of({"x y Y z"}), atom("x Y z")).derivation);
  EXPECT_NE(text.find("[A2]"), std::string::npos);
  EXPECT_NE(text.find("[HYP]"), std::string::npos);
}
