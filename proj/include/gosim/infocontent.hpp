#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gosim/annotations.hpp"
#include "gosim/ontology.hpp"

namespace gosim {

// Term probability and information content for one namespace.
//
//   prob(t) = cumulative_count(t) / cumulative_count(root)
//   ic(t)   = -ln prob(t)
//
// Terms with no annotation anywhere below them have no probability; every
// accessor except annotated() and count() rejects them.
class IcTable {
public:
  static IcTable from_corpus(const AnnotationCorpus& corpus);

  const OntologyDag& dag() const { return *dag_; }
  std::uint64_t total() const { return total_; }

  bool annotated(TermIndex t) const { return count_[t] > 0; }
  std::uint64_t count(TermIndex t) const { return count_[t]; }

  // Throws UndefinedProbability.
  double probability(TermIndex t) const;
  double information_content(TermIndex t) const;
  // Throws UnknownTerm or UndefinedProbability.
  double probability(const TermId& id) const { return probability(dag_->index_of(id)); }
  double information_content(const TermId& id) const { return information_content(dag_->index_of(id)); }

  // Unchecked accessors for hot loops; caller guarantees annotated(t).
  double prob_unchecked(TermIndex t) const { return prob_[t]; }
  double ic_unchecked(TermIndex t) const { return ic_[t]; }

  // term_id, cumulative_count, prob, ic for annotated terms, in id order.
  void write_tsv(std::ostream& out) const;

private:
  const OntologyDag* dag_ = nullptr;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> count_;
  std::vector<double> prob_;
  std::vector<double> ic_;
};

}  // namespace gosim
