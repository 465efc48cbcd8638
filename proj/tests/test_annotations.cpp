#include <doctest.h>

#include <random>
#include <sstream>

#include "gosim/error.hpp"
#include "gosim/infocontent.hpp"
#include "support.hpp"

using namespace gosim;
using oracle::gaf_line;
using testing::toy;

namespace {

GafParseResult parse(const std::string& text, const Ontology& onto) {
  std::istringstream in(text);
  return parse_gaf(in, onto);
}

}  // namespace

TEST_SUITE("annotations") {
  TEST_CASE("comment lines are skipped") {
    auto onto = testing::toy_ontology();
    std::string text = "!gaf-version: 2.0\n" + gaf_line("g1", "GO:0000004", "IDA") + "!note\n" +
                       gaf_line("g2", "GO:0000005", "IDA") + gaf_line("g3", "GO:0000006", "IMP");
    auto r = parse(text, onto);
    CHECK(r.records.size() == 3);
    CHECK(r.comment_lines == 2);
    CHECK(r.warnings.empty());
  }

  TEST_CASE("NOT-qualified lines are dropped") {
    auto onto = testing::toy_ontology();
    auto r = parse(gaf_line("g1", "GO:0000004", "IDA", "NOT") + gaf_line("g2", "GO:0000004", "IDA", "contributes_to|NOT") +
                       gaf_line("g3", "GO:0000004", "IDA", "colocalizes_with"),
                   onto);
    CHECK(r.records.size() == 1);
    CHECK(r.negated_dropped == 2);
    CHECK(r.records[0].qualifier == "colocalizes_with");
  }

  TEST_CASE("unknown term ids are kept with one warning and skipped at corpus build") {
    auto onto = testing::toy_ontology();
    auto r = parse(gaf_line("g1", "GO:0000004", "IDA") + gaf_line("g2", "GO:7777777", "IDA"), onto);
    CHECK(r.records.size() == 2);
    CHECK(r.warnings.size() == 1);
    CHECK(r.unknown_terms == 1);
    auto corpus = build_corpus(r.records, onto.dags[0]);
    CHECK(corpus.genes().size() == 1);
    CHECK(corpus.stats().other_namespace == 1);
  }

  TEST_CASE("short lines are malformed") {
    auto onto = testing::toy_ontology();
    CHECK_THROWS_AS(parse("TST\tg1\tg1\t\tGO:0000004\tREF\tIDA\n", onto), Error);
    try {
      parse("!c\nTST\tg1\tg1\n", onto);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedLine);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("gene key is the first synonym, else the symbol") {
    auto onto = testing::toy_ontology();
    std::string line = "SGD\tS0001\tACT1\t\tGO:0000004\tREF\tIDA\t\tP\t\tYFL039C|ABY1\tgene\ttaxon:4932\t20080401\tSGD\n";
    std::string no_syn = "SGD\tS0002\tCDC28\t\tGO:0000004\tREF\tIDA\t\tP\t\t\tgene\ttaxon:4932\t20080401\tSGD\n";
    auto r = parse(line + no_syn, onto);
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].gene == "YFL039C");
    CHECK(r.records[1].gene == "CDC28");
  }

  TEST_CASE("alternate ids resolve to the canonical term") {
    auto onto = parse_obo_text("[Term]\nid: X:1\nnamespace: t\n[Term]\nid: X:2\nnamespace: t\nalt_id: X:9\nis_a: X:1\n");
    auto r = parse(gaf_line("g1", "X:9", "IDA"), onto);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].term == TermId("X:2"));
    CHECK(r.warnings.empty());
  }

  TEST_CASE("obsolete term references warn") {
    auto onto = parse_obo_text(
        "[Term]\nid: X:1\nnamespace: t\n[Term]\nid: X:2\nnamespace: t\nis_a: X:1\n[Term]\nid: X:3\nnamespace: t\nis_obsolete: true\n");
    auto r = parse(gaf_line("g1", "X:3", "IDA") + gaf_line("g1", "X:2", "IDA"), onto);
    CHECK(r.obsolete_terms == 1);
    CHECK(r.warnings.size() == 1);
    auto corpus = build_corpus(r.records, onto.dags[0]);
    CHECK(corpus.annotation_count() == 1);
  }

  TEST_CASE("toy corpus counts") {
    auto model = testing::toy_model();
    const auto& ns = model.require("BP");
    const auto& c = ns.corpus();
    const auto& dag = ns.dag();
    auto cum = [&](char t) { return c.cumulative_count(dag.index_of(toy(t))); };
    CHECK(cum('E') == 1);
    CHECK(cum('D') == 1);
    CHECK(cum('C') == 3);
    CHECK(cum('A') == 4);
    CHECK(cum('B') == 4);
    CHECK(cum('R') == 8);
    CHECK(c.total() == 8);
    CHECK(c.genes().size() == 8);
    CHECK(c.annotation_count() == 8);
    CHECK(c.direct_count(dag.index_of(toy('B'))) == 4);
    CHECK(c.stats().evidence_dropped == 1);  // g9 is IEA only
    CHECK_FALSE(c.find_gene("g9").has_value());
  }

  TEST_CASE("genes annotated only to the root are dropped") {
    auto onto = testing::toy_ontology();
    auto r = parse(gaf_line("g1", "GO:0000001", "IDA") + gaf_line("g2", "GO:0000004", "IDA") +
                       gaf_line("g2", "GO:0000001", "IDA"),
                   onto);
    auto corpus = build_corpus(r.records, onto.dags[0]);
    CHECK_FALSE(corpus.find_gene("g1").has_value());
    REQUIRE(corpus.find_gene("g2").has_value());
    CHECK(corpus.direct(*corpus.find_gene("g2")).size() == 1);
    CHECK(corpus.stats().root_only_genes_dropped == 1);

    CorpusOptions keep;
    keep.drop_root_only = false;
    auto kept = build_corpus(r.records, onto.dags[0], keep);
    CHECK(kept.find_gene("g1").has_value());
    CHECK(kept.total() == 2);
  }

  TEST_CASE("all-IEA input gives EmptyCorpus") {
    auto onto = testing::toy_ontology();
    auto r = parse(gaf_line("g1", "GO:0000004", "IEA") + gaf_line("g2", "GO:0000005", "IEA"), onto);
    try {
      build_corpus(r.records, onto.dags[0]);
      FAIL("expected EmptyCorpus");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyCorpus);
    }
    CorpusOptions keep;
    keep.drop_evidence.clear();
    CHECK(build_corpus(r.records, onto.dags[0], keep).genes().size() == 2);
  }

  TEST_CASE("duplicate records collapse") {
    auto onto = testing::toy_ontology();
    auto r = parse(gaf_line("g1", "GO:0000004", "IDA") + gaf_line("g1", "GO:0000004", "IMP") +
                       gaf_line("g1", "GO:0000005", "IDA"),
                   onto);
    auto corpus = build_corpus(r.records, onto.dags[0]);
    CHECK(corpus.annotation_count() == 2);
    CHECK(corpus.stats().duplicates == 1);
    CHECK(corpus.cumulative_count(onto.dags[0].index_of(toy('A'))) == 1);
  }

  TEST_CASE("cumulative counts match brute force on random fixtures") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 30; ++round) {
      auto f = oracle::random_fixture(rng);
      oracle::Reference ref(f);
      auto model = testing::fixture_model(f);
      const auto& ns = model.namespaces()[0];
      const auto& dag = ns.dag();
      const auto& c = ns.corpus();
      CHECK(c.genes().size() == f.direct.size());
      std::size_t direct_total = 0;
      for (const auto& [g, ts] : f.direct) direct_total += ts.size();
      CHECK(c.annotation_count() == direct_total);
      for (int t = 0; t < ref.size(); ++t) {
        const auto idx = dag.index_of(TermId(ref.id(t)));
        CHECK(c.cumulative_count(idx) == static_cast<std::uint64_t>(ref.count(t)));
        for (TermIndex p : dag.parents(idx)) CHECK(c.cumulative_count(p) >= c.cumulative_count(idx));
      }
      CHECK(c.total() == static_cast<std::uint64_t>(ref.total()));
    }
  }

  TEST_CASE("corpus TSV round trip preserves counts and fingerprint") {
    std::mt19937_64 rng(5);
    auto f = oracle::random_fixture(rng);
    auto model = testing::fixture_model(f);
    const auto& ns = model.namespaces()[0];
    std::stringstream buf;
    ns.corpus().write_tsv(buf);
    auto back = AnnotationCorpus::read_tsv(buf, ns.dag());
    CHECK(back.fingerprint() == ns.corpus().fingerprint());
    CHECK(back.genes() == ns.corpus().genes());
    for (TermIndex t = 0; t < ns.dag().size(); ++t) CHECK(back.cumulative_count(t) == ns.corpus().cumulative_count(t));
  }
}

TEST_SUITE("infocontent") {
  TEST_CASE("toy probabilities and information content") {
    auto model = testing::toy_model();
    const auto& ic = model.require("BP").ic();
    CHECK(ic.probability(toy('R')) == 1.0);
    CHECK(ic.information_content(toy('R')) == 0.0);
    CHECK(ic.probability(toy('A')) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ic.probability(toy('E')) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(ic.information_content(toy('A')) == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(ic.information_content(toy('E')) == doctest::Approx(2.0794).epsilon(1e-4));
    CHECK(ic.information_content(toy('A')) == std::log(2.0));
  }

  TEST_CASE("unannotated terms have no probability") {
    auto onto = testing::toy_ontology();
    std::istringstream in(gaf_line("g1", "GO:0000004", "IDA"));
    auto r = parse_gaf(in, onto);
    auto corpus = build_corpus(r.records, onto.dags[0]);
    auto ic = IcTable::from_corpus(corpus);
    CHECK_FALSE(ic.annotated(onto.dags[0].index_of(toy('B'))));
    try {
      ic.information_content(toy('B'));
      FAIL("expected UndefinedProbability");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UndefinedProbability);
    }
    CHECK_THROWS_AS(ic.probability(TermId("GO:1234567")), Error);
  }

  TEST_CASE("IC is monotone along edges and inverts exactly") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 20; ++round) {
      auto f = oracle::random_fixture(rng);
      auto model = testing::fixture_model(f);
      const auto& ns = model.namespaces()[0];
      const auto& ic = ns.ic();
      for (TermIndex t = 0; t < ns.dag().size(); ++t) {
        if (!ic.annotated(t)) continue;
        CHECK(std::exp(-ic.information_content(t)) == doctest::Approx(ic.probability(t)).epsilon(1e-12));
        CHECK(ic.information_content(t) >= 0);
        for (TermIndex p : ns.dag().parents(t)) CHECK(ic.information_content(t) >= ic.information_content(p));
      }
    }
  }

  TEST_CASE("IC table export") {
    auto model = testing::toy_model();
    std::ostringstream out;
    model.require("BP").ic().write_tsv(out);
    const auto s = out.str();
    CHECK(s.rfind("# namespace=biological_process total=8\n", 0) == 0);
    CHECK(s.find("term_id\tcumulative_count\tprob\tic\n") != std::string::npos);
    CHECK(s.find("GO:0000001\t8\t1\t0\n") != std::string::npos);
  }
}
