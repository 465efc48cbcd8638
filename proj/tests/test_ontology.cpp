#include <doctest.h>

#include <random>
#include <sstream>

#include "gosim/error.hpp"
#include "support.hpp"

using namespace gosim;
using testing::toy;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_obo_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::Io;
}

std::set<std::tuple<std::string, std::string, int>> edge_set(const OntologyDag& dag) {
  std::set<std::tuple<std::string, std::string, int>> edges;
  for (const auto& t : dag.terms()) {
    for (const auto& e : t.parents) edges.emplace(t.id.value, e.parent.value, static_cast<int>(e.relation));
  }
  return edges;
}

const char* kCycle = R"(
[Term]
id: X:1
name: root
namespace: test
[Term]
id: X:2
name: c
namespace: test
is_a: X:1
is_a: X:3
[Term]
id: X:3
name: d
namespace: test
is_a: X:2
)";

}  // namespace

TEST_SUITE("ontology") {
  TEST_CASE("toy fixture forms one six-term DAG rooted at R") {
    auto onto = testing::toy_ontology();
    REQUIRE(onto.dags.size() == 1);
    const auto& dag = onto.dags[0];
    CHECK(dag.size() == 6);
    CHECK(dag.edge_count() == 5);
    CHECK(dag.id(dag.root()) == toy('R'));
    CHECK(dag.ns().short_name() == "BP");
    CHECK(onto.summary.is_a_edges == 4);
    CHECK(onto.summary.part_of_edges == 1);
    const auto e = dag.index_of(toy('E'));
    REQUIRE(dag.term(e).parents.size() == 1);
    CHECK(dag.term(e).parents[0].relation == Relation::part_of);
  }

  TEST_CASE("empty input yields no DAGs") {
    CHECK(parse_obo_text("").dags.empty());
    CHECK(parse_obo_text("format-version: 1.2\n! nothing here\n").dags.empty());
  }

  TEST_CASE("cycles are rejected") {
    CHECK(parse_error(kCycle) == ErrorCode::CycleDetected);
    try {
      parse_obo_text(kCycle);
    } catch (const Error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("X:2") != std::string::npos);
      CHECK(msg.find("X:3") != std::string::npos);
    }
    CHECK(parse_error("[Term]\nid: X:1\nnamespace: t\nis_a: X:1\n") == ErrorCode::CycleDetected);
  }

  TEST_CASE("toy fixture with a C/D cycle added is rejected") {
    auto text = testing::slurp(testing::data_dir() / "toy.obo");
    auto add_parent = [&](const std::string& child, const std::string& parent) {
      auto pos = text.find("id: " + child);
      pos = text.find("\n\n", pos);
      if (pos == std::string::npos) pos = text.size() - 1;
      text.insert(pos, "\nis_a: " + parent);
    };
    add_parent("GO:0000004", "GO:0000005");
    add_parent("GO:0000005", "GO:0000004");
    CHECK(parse_error(text) == ErrorCode::CycleDetected);
  }

  TEST_CASE("structural errors") {
    CHECK(parse_error("[Term]\nid: X:1\nnamespace: t\n[Term]\nid: X:2\nnamespace: t\n") == ErrorCode::MissingRoot);
    CHECK(parse_error("[Term]\nid: X:1\nnamespace: t\n[Term]\nid: X:2\nnamespace: t\nis_a: X:9\n") ==
          ErrorCode::DanglingParent);
    CHECK(parse_error("[Term]\nid: X:1\nnamespace: t\n[Term]\nid: X:1\nnamespace: t\n") ==
          ErrorCode::MalformedStanza);
    CHECK(parse_error("[Term\nid: X:1\n") == ErrorCode::MalformedStanza);
    CHECK(parse_error("[Term]\nid: X:1\nno colon here\n") == ErrorCode::MalformedStanza);
    CHECK(parse_error("[Term]\nid: X:1\n") == ErrorCode::MalformedStanza);  // no namespace
  }

  TEST_CASE("relationship filtering, aliases and obsolete terms") {
    const char* text = R"(format-version: 1.2
default-namespace: test

[Term]
id: X:1
name: root

[Term]
id: X:2
name: a
alt_id: X:20
is_a: X:1 ! root
relationship: regulates X:1
relationship: has_part X:1
synonym: "alpha" EXACT []

[Term]
id: X:3
name: b
is_a: X:20 {source="x"}
relationship: positively_regulates X:2

[Term]
id: X:4
name: gone
is_obsolete: true

[Typedef]
id: part_of
name: part of
)";
    auto onto = parse_obo_text(text);
    REQUIRE(onto.dags.size() == 1);
    const auto& dag = onto.dags[0];
    CHECK(dag.size() == 3);
    CHECK(dag.edge_count() == 2);
    CHECK(onto.summary.regulates_dropped == 2);
    CHECK(onto.summary.other_relationships_dropped == 1);
    CHECK(onto.summary.obsolete_terms == 1);
    CHECK(onto.summary.other_stanzas == 1);
    CHECK(onto.summary.unknown_tags >= 1);
    CHECK(onto.canonical(TermId("X:20")) == TermId("X:2"));
    CHECK(onto.is_obsolete(TermId("X:4")));
    CHECK_FALSE(dag.contains(TermId("X:4")));
    CHECK(dag.term(dag.index_of(TermId("X:3"))).parents[0].parent == TermId("X:2"));
  }

  TEST_CASE("terms split by namespace and cross-namespace edges are dropped") {
    const char* text = R"(
[Term]
id: X:1
namespace: biological_process
[Term]
id: X:2
namespace: biological_process
is_a: X:1
[Term]
id: X:3
namespace: cellular_component
[Term]
id: X:4
namespace: cellular_component
is_a: X:3
relationship: part_of X:2
)";
    auto onto = parse_obo_text(text);
    REQUIRE(onto.dags.size() == 2);
    CHECK(onto.summary.cross_namespace_dropped == 1);
    CHECK(onto.find_namespace("CC") != nullptr);
    CHECK(onto.dag_of(TermId("X:4"))->ns().short_name() == "CC");
  }

  TEST_CASE("CRLF input parses like LF input") {
    auto text = testing::slurp(testing::data_dir() / "toy.obo");
    std::string crlf;
    for (char c : text) {
      if (c == '\n') crlf += '\r';
      crlf += c;
    }
    auto onto = parse_obo_text(crlf);
    REQUIRE(onto.dags.size() == 1);
    CHECK(onto.dags[0].size() == 6);
    CHECK(onto.dags[0].edge_count() == 5);
  }

  TEST_CASE("canonical serialisation round-trips terms and edges") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
      auto f = oracle::random_fixture(rng);
      auto onto = parse_obo_text(f.obo);
      std::ostringstream out;
      write_obo(out, onto);
      auto again = parse_obo_text(out.str());
      REQUIRE(again.dags.size() == onto.dags.size());
      for (std::size_t i = 0; i < onto.dags.size(); ++i) {
        std::vector<std::string> ids_a, ids_b;
        for (const auto& t : onto.dags[i].terms()) ids_a.push_back(t.id.value);
        for (const auto& t : again.dags[i].terms()) ids_b.push_back(t.id.value);
        CHECK(ids_a == ids_b);
        CHECK(edge_set(onto.dags[i]) == edge_set(again.dags[i]));
      }
      std::ostringstream twice;
      write_obo(twice, again);
      CHECK(twice.str() == out.str());
    }
  }

  TEST_CASE("topological order and edge counts on random fixtures") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
      auto f = oracle::random_fixture(rng);
      auto onto = parse_obo_text(f.obo);
      REQUIRE(onto.dags.size() == 1);
      const auto& dag = onto.dags[0];
      std::size_t expected_edges = 0;
      for (const auto& ps : f.parents) expected_edges += ps.size();
      CHECK(dag.edge_count() == expected_edges);
      std::vector<std::size_t> position(dag.size());
      auto order = dag.topological_order();
      REQUIRE(order.size() == dag.size());
      for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
      for (TermIndex t = 0; t < dag.size(); ++t) {
        for (TermIndex p : dag.parents(t)) CHECK(position[p] < position[t]);
      }
      CHECK(dag.id(dag.root()).value == f.ids[0]);
    }
  }

  TEST_CASE("unknown term lookups throw UnknownTerm") {
    auto onto = testing::toy_ontology();
    CHECK_THROWS_AS(onto.dags[0].index_of(TermId("GO:9999999")), Error);
    try {
      onto.dags[0].index_of(TermId("GO:9999999"));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownTerm);
    }
  }
}
