#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "gosim/graph_index.hpp"
#include "gosim/infocontent.hpp"

namespace gosim {

enum class Measure {
  resnik,
  adjusted_resnik,
  lin,
  jiang,
  gic,
  rss,
  relevance_lin,
  relevance_jiang,
  simic_lin,
  simic_jiang,
};

inline constexpr std::array<Measure, 10> kAllMeasures = {
    Measure::resnik,        Measure::adjusted_resnik, Measure::lin,         Measure::jiang,
    Measure::gic,           Measure::rss,             Measure::relevance_lin, Measure::relevance_jiang,
    Measure::simic_lin,     Measure::simic_jiang,
};

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view name);
// Everything except the two Resnik variants lies in [0, 1].
bool is_bounded(Measure m);

enum class BaseFlavor { lin, jiang };

struct SimilarityScore {
  double value = 0;
  Measure measure = Measure::lin;
};

// Term-pair similarity for one namespace. Stateless apart from the two
// referenced tables; safe to call from many threads.
//
// All measures except RSS require both terms to carry annotations and throw
// UnannotatedTerm otherwise. GIC throws ZeroUnion for a root/root pair.
class TermSimilarity {
public:
  TermSimilarity(const DagIndex& index, const IcTable& ic);

  const DagIndex& index() const { return *index_; }
  const IcTable& ic() const { return *ic_; }

  double operator()(Measure m, TermIndex t1, TermIndex t2) const;
  SimilarityScore score(Measure m, const TermId& t1, const TermId& t2) const;

  double resnik(TermIndex t1, TermIndex t2) const;
  double adjusted_resnik(TermIndex t1, TermIndex t2) const;
  double lin(TermIndex t1, TermIndex t2) const;
  double jiang(TermIndex t1, TermIndex t2) const;
  double gic(TermIndex t1, TermIndex t2) const;
  double rss(TermIndex t1, TermIndex t2) const;
  double relevance(TermIndex t1, TermIndex t2, BaseFlavor flavor) const;
  double simic(TermIndex t1, TermIndex t2, BaseFlavor flavor) const;

private:
  void require_annotated(TermIndex t1, TermIndex t2) const;
  double lin_given(double ic_ancestor, TermIndex t1, TermIndex t2) const;

  const DagIndex* index_;
  const IcTable* ic_;
};

}  // namespace gosim
