#include <doctest.h>

#include <random>

#include "gosim/error.hpp"
#include "gosim/termsim.hpp"
#include "support.hpp"

using namespace gosim;
using testing::toy;

namespace {

double toy_score(const SemanticModel& model, Measure m, char a, char b) {
  return model.term_similarity(m, toy(a), toy(b)).value;
}

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("termsim") {
  TEST_CASE("toy worked values") {
    auto model = testing::toy_model();
    auto near = [](double v) { return doctest::Approx(v).epsilon(0).scale(1).epsilon(5e-5); };
    CHECK(toy_score(model, Measure::resnik, 'C', 'D') == near(0.6931));
    CHECK(toy_score(model, Measure::resnik, 'E', 'E') == near(2.0794));
    CHECK(toy_score(model, Measure::resnik, 'R', 'E') == 0.0);
    CHECK(toy_score(model, Measure::lin, 'C', 'D') == near(0.4530));
    CHECK(toy_score(model, Measure::lin, 'R', 'R') == 0.0);
    CHECK(toy_score(model, Measure::lin, 'E', 'E') == 1.0);
    CHECK(toy_score(model, Measure::jiang, 'C', 'D') == near(0.3740));
    CHECK(toy_score(model, Measure::jiang, 'A', 'B') == near(0.4191));
    CHECK(toy_score(model, Measure::jiang, 'D', 'D') == 1.0);
    CHECK(toy_score(model, Measure::gic, 'C', 'D') == near(0.1847));
    CHECK(toy_score(model, Measure::gic, 'A', 'B') == 0.0);
    CHECK(toy_score(model, Measure::gic, 'C', 'C') == 1.0);
    CHECK(toy_score(model, Measure::rss, 'C', 'D') == near(0.3));
    CHECK(toy_score(model, Measure::rss, 'A', 'B') == 0.0);
    CHECK(toy_score(model, Measure::rss, 'E', 'E') == 1.0);
    CHECK(toy_score(model, Measure::relevance_lin, 'C', 'D') == near(0.2265));
    CHECK(toy_score(model, Measure::relevance_lin, 'E', 'E') == near(0.875));
    CHECK(toy_score(model, Measure::relevance_lin, 'R', 'R') == 0.0);
    CHECK(toy_score(model, Measure::simic_lin, 'C', 'D') == near(0.1854));
    CHECK(toy_score(model, Measure::simic_lin, 'E', 'E') == near(0.6753));
    CHECK(toy_score(model, Measure::simic_lin, 'R', 'C') == 0.0);
    CHECK(toy_score(model, Measure::adjusted_resnik, 'C', 'D') == near(0.3140));
    CHECK(toy_score(model, Measure::adjusted_resnik, 'R', 'C') == 0.0);
    CHECK(toy_score(model, Measure::adjusted_resnik, 'E', 'E') == near(2.0794));
  }

  TEST_CASE("measure names round trip") {
    for (Measure m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
    CHECK_FALSE(parse_measure("wang").has_value());
    CHECK_FALSE(is_bounded(Measure::resnik));
    CHECK(is_bounded(Measure::simic_jiang));
  }

  TEST_CASE("error cases") {
    auto model = testing::toy_model();
    CHECK(error_of([&] { model.term_similarity(Measure::lin, toy('C'), TermId("GO:5555555")); }) ==
          ErrorCode::UnknownTerm);
    // GIC of the root with itself has an empty information union.
    CHECK(error_of([&] { model.term_similarity(Measure::gic, toy('R'), toy('R')); }) == ErrorCode::ZeroUnion);

    const char* two = R"(
[Term]
id: X:1
namespace: biological_process
[Term]
id: X:2
namespace: biological_process
is_a: X:1
[Term]
id: X:3
namespace: biological_process
is_a: X:1
[Term]
id: Y:1
namespace: cellular_component
[Term]
id: Y:2
namespace: cellular_component
is_a: Y:1
)";
    std::string gaf = oracle::gaf_line("g1", "X:2", "IDA") + oracle::gaf_line("g1", "Y:2", "IDA");
    auto m2 = testing::model_from_text(two, gaf);
    CHECK(error_of([&] { m2.term_similarity(Measure::lin, TermId("X:2"), TermId("Y:2")); }) ==
          ErrorCode::DifferentNamespace);
    CHECK(error_of([&] { m2.term_similarity(Measure::rss, TermId("X:2"), TermId("Y:2")); }) ==
          ErrorCode::DifferentNamespace);
    CHECK(error_of([&] { m2.term_similarity(Measure::lin, TermId("X:2"), TermId("X:3")); }) ==
          ErrorCode::UnannotatedTerm);
    // RSS is structural and needs no annotation.
    CHECK(m2.term_similarity(Measure::rss, TermId("X:2"), TermId("X:3")).value == 0.0);
  }

  TEST_CASE("all measures match the brute-force reference") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 10; ++round) {
      auto f = oracle::random_fixture(rng);
      oracle::Reference ref(f);
      auto model = testing::fixture_model(f);
      const auto& ns = model.namespaces()[0];
      const auto sim = ns.similarity();
      std::vector<TermIndex> lib(ref.size());
      for (int t = 0; t < ref.size(); ++t) lib[t] = ns.dag().index_of(TermId(ref.id(t)));
      for (Measure m : kAllMeasures) {
        for (int a = 0; a < ref.size(); ++a) {
          for (int b = 0; b < ref.size(); ++b) {
            auto expected = ref.measure(std::string(to_string(m)), a, b);
            if (!expected) {
              CHECK_THROWS_AS(sim(m, lib[a], lib[b]), Error);
              continue;
            }
            const double got = sim(m, lib[a], lib[b]);
            CHECK(std::abs(got - *expected) <= 1e-10);
          }
        }
      }
    }
  }

  TEST_CASE("symmetry, range and dominance on random fixtures") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 10; ++round) {
      auto f = oracle::random_fixture(rng);
      auto model = testing::fixture_model(f);
      const auto& ns = model.namespaces()[0];
      const auto sim = ns.similarity();
      const auto n = static_cast<TermIndex>(ns.dag().size());
      for (TermIndex a = 0; a < n; ++a) {
        for (TermIndex b = 0; b < n; ++b) {
          if (!ns.ic().annotated(a) || !ns.ic().annotated(b)) continue;
          for (Measure m : kAllMeasures) {
            double v = 0;
            try {
              v = sim(m, a, b);
            } catch (const Error& e) {
              CHECK(e.code() == ErrorCode::ZeroUnion);
              continue;
            }
            CHECK(v == sim(m, b, a));
            CHECK(v >= 0);
            if (is_bounded(m)) CHECK(v <= 1);
          }
          CHECK(sim.simic(a, b, BaseFlavor::lin) <= sim.lin(a, b));
          CHECK(sim.relevance(a, b, BaseFlavor::lin) <= sim.lin(a, b));
        }
      }
    }
  }

  TEST_CASE("shallow self-pairs are separated only by the coefficient measures") {
    auto model = testing::toy_model();
    // prob(E) = 0.125 < prob(A) = 0.5 < 1.
    for (Measure m : {Measure::lin, Measure::jiang, Measure::gic}) {
      CHECK(toy_score(model, m, 'E', 'E') == 1.0);
      CHECK(toy_score(model, m, 'A', 'A') == 1.0);
    }
    for (Measure m : {Measure::simic_lin, Measure::simic_jiang, Measure::relevance_lin, Measure::relevance_jiang}) {
      CHECK(toy_score(model, m, 'E', 'E') > toy_score(model, m, 'A', 'A'));
    }
  }
}
