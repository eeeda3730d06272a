#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

namespace hini {
namespace {

TEST(Bundle, FixtureFilesMatchInMemoryFounders) {
  const auto loaded = parse_bundle(test::fixture_bundle("g1"));
  const auto ref = test::g1();
  const auto& a = loaded.hin.graph;
  const auto& b = ref.graph;
  ASSERT_EQ(a.entity_count(), b.entity_count());
  ASSERT_EQ(a.relation_count(), b.relation_count());
  for (std::uint32_t s = 0; s < 2 * a.relation_count(); ++s) {
    for (std::uint32_t e = 0; e < a.entity_count(); ++e) {
      const auto x = a.neighbors(EntityId{e}, DirectedRelation::from_slot(s));
      const auto y = b.neighbors(EntityId{e}, DirectedRelation::from_slot(s));
      EXPECT_TRUE(std::equal(x.begin(), x.end(), y.begin(), y.end()));
    }
    EXPECT_EQ(a.entity_name(EntityId{0}), b.entity_name(EntityId{0}));
  }
  for (std::uint32_t e = 0; e < a.entity_count(); ++e) {
    const auto x = a.types(EntityId{e});
    const auto y = b.types(EntityId{e});
    EXPECT_TRUE(std::equal(x.begin(), x.end(), y.begin(), y.end()));
  }
  ASSERT_EQ(loaded.examples.size(), 1u);
  EXPECT_EQ(loaded.examples[0].source, "p1");
  EXPECT_EQ(loaded.examples[0].weight, 1.0);
  EXPECT_FALSE(loaded.examples[0].label);
}

TEST(Bundle, RoundTripIsIdentity) {
  const auto raw = read_bundle(test::fixture_bundle("g2", "labelled.tsv"));
  std::stringstream e, t, h, x;
  write_edges(e, raw.edges);
  write_types(t, raw.types);
  write_hierarchy(h, raw.hierarchy);
  write_examples(x, raw.examples);
  const auto e2 = read_edges(e, "e");
  const auto t2 = read_types(t, "t");
  const auto h2 = read_hierarchy(h, "h");
  const auto x2 = read_examples(x, "x");
  ASSERT_EQ(e2.size(), raw.edges.size());
  for (std::size_t i = 0; i < e2.size(); ++i) {
    EXPECT_EQ(e2[i].source, raw.edges[i].source);
    EXPECT_EQ(e2[i].relation, raw.edges[i].relation);
    EXPECT_EQ(e2[i].target, raw.edges[i].target);
  }
  ASSERT_EQ(t2.size(), raw.types.size());
  EXPECT_EQ(h2, raw.hierarchy);
  ASSERT_EQ(x2.size(), 2u);
  EXPECT_EQ(x2[1].label, 0);
  EXPECT_EQ(x2[0].weight, raw.examples[0].weight);
}

TEST(Parse, ArityErrorNamesLine) {
  std::istringstream in("# header comment\np1\tfound\tg\n\np1\tfound\n");
  try {
    read_edges(in, "edges.tsv");
    FAIL() << "accepted a 2-field edge";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("edges.tsv:4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("p1\tfound"), std::string::npos) << msg;
  }
}

TEST(Parse, BadExampleColumns) {
  std::istringstream label("a\tb\t1\t2\n");
  EXPECT_THROW(read_examples(label, "x"), ParseError);
  std::istringstream weight("a\tb\tabc\n");
  EXPECT_THROW(read_examples(weight, "x"), ParseError);
  std::istringstream negative("a\tb\t-1\n");
  EXPECT_THROW(read_examples(negative, "x"), ParseError);
  std::istringstream crlf("a\tb\t2.5\t1\r\n");
  const auto rows = read_examples(crlf, "x");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].weight, 2.5);
  EXPECT_EQ(rows[0].label, 1);
}

TEST(Parse, DanglingTypeReference) {
  std::istringstream t("p1\tRobot\n");
  RawBundle raw = test::g1_raw();
  raw.types = read_types(t, "types.tsv");
  EXPECT_THROW(build_graph(raw), PreconditionError);
  EXPECT_THROW(read_examples_file(test::data_dir() / "missing.tsv"), ParseError);
}

TEST(Examples, EmptySetRejected) {
  const auto b = test::g1();
  std::istringstream in("# nothing\n");
  try {
    make_example_set(b.graph, read_examples(in, "x"));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("example set must be non-empty"), std::string::npos);
  }
  const std::vector<ExampleRow> negatives_only{{"p1", "p2", 1.0, 0}};
  EXPECT_THROW(make_example_set(b.graph, negatives_only, true), PreconditionError);
  const std::vector<ExampleRow> unknown{{"p1", "zz", 1.0, std::nullopt}};
  EXPECT_THROW(make_example_set(b.graph, unknown), UnknownEntityError);
}

TEST(Report, HeaderThenRecords) {
  std::ostringstream out;
  ReportWriter w(out, "simsearch");
  w.record({{"rank", 1}, {"entity", "v2"}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  EXPECT_EQ(header["format"], "hini-report");
  EXPECT_EQ(header["version"], 1);
  EXPECT_EQ(header["kind"], "simsearch");
  std::getline(in, line);
  EXPECT_EQ(nlohmann::json::parse(line)["entity"], "v2");
}

TEST(Real, StrictParsing) {
  EXPECT_EQ(parse_real("0.25"), 0.25);
  EXPECT_EQ(parse_real(format_real(0.1)), 0.1);
  EXPECT_THROW(parse_real("0.25x"), ParseError);
  EXPECT_THROW(parse_real(""), ParseError);
}

}  // namespace
}  // namespace hini
