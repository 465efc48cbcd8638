#include "gosim/infocontent.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "gosim/error.hpp"
#include "text.hpp"

namespace gosim {

IcTable IcTable::from_corpus(const AnnotationCorpus& corpus) {
  IcTable table;
  table.dag_ = &corpus.dag();
  table.total_ = corpus.total();
  if (table.total_ == 0) throw Error(ErrorCode::ZeroTotal, "no annotations at root of " + table.dag_->ns().name);

  const std::size_t n = table.dag_->size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  table.count_.resize(n);
  table.prob_.assign(n, nan);
  table.ic_.assign(n, nan);
  const auto total = static_cast<double>(table.total_);
  for (TermIndex t = 0; t < n; ++t) {
    table.count_[t] = corpus.cumulative_count(t);
    if (table.count_[t] == 0) continue;
    table.prob_[t] = static_cast<double>(table.count_[t]) / total;
    table.ic_[t] = table.count_[t] == table.total_ ? 0.0 : -std::log(table.prob_[t]);
  }
  return table;
}

double IcTable::probability(TermIndex t) const {
  if (!annotated(t)) throw Error(ErrorCode::UndefinedProbability, dag_->id(t).value + " has no annotations");
  return prob_[t];
}

double IcTable::information_content(TermIndex t) const {
  if (!annotated(t)) throw Error(ErrorCode::UndefinedProbability, dag_->id(t).value + " has no annotations");
  return ic_[t];
}

void IcTable::write_tsv(std::ostream& out) const {
  out << "# namespace=" << dag_->ns().name << " total=" << total_ << '\n';
  out << "term_id\tcumulative_count\tprob\tic\n";
  for (TermIndex t = 0; t < dag_->size(); ++t) {
    if (!annotated(t)) continue;
    out << dag_->id(t).value << '\t' << count_[t] << '\t' << text::exact(prob_[t]) << '\t'
        << text::exact(ic_[t]) << '\n';
  }
}

}  // namespace gosim
