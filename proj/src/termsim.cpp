#include "gosim/termsim.hpp"

#include <algorithm>

#include "gosim/error.hpp"

namespace gosim {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::resnik: return "resnik";
    case Measure::adjusted_resnik: return "adjusted_resnik";
    case Measure::lin: return "lin";
    case Measure::jiang: return "jiang";
    case Measure::gic: return "gic";
    case Measure::rss: return "rss";
    case Measure::relevance_lin: return "relevance_lin";
    case Measure::relevance_jiang: return "relevance_jiang";
    case Measure::simic_lin: return "simic_lin";
    case Measure::simic_jiang: return "simic_jiang";
  }
  return "unknown";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

bool is_bounded(Measure m) { return m != Measure::resnik && m != Measure::adjusted_resnik; }

TermSimilarity::TermSimilarity(const DagIndex& index, const IcTable& ic) : index_(&index), ic_(&ic) {}

void TermSimilarity::require_annotated(TermIndex t1, TermIndex t2) const {
  for (TermIndex t : {t1, t2}) {
    if (!ic_->annotated(t)) {
      throw Error(ErrorCode::UnannotatedTerm, index_->dag().id(t).value + " has no annotations");
    }
  }
}

// 2 ln p(a) / (ln p(t1) + ln p(t2)), written with IC = -ln p.
double TermSimilarity::lin_given(double ic_ancestor, TermIndex t1, TermIndex t2) const {
  const double denom = ic_->ic_unchecked(t1) + ic_->ic_unchecked(t2);
  if (denom == 0.0) return 0.0;
  return 2.0 * ic_ancestor / denom;
}

double TermSimilarity::resnik(TermIndex t1, TermIndex t2) const {
  require_annotated(t1, t2);
  return ic_->ic_unchecked(index_->mica(t1, t2, *ic_));
}

double TermSimilarity::lin(TermIndex t1, TermIndex t2) const {
  require_annotated(t1, t2);
  return lin_given(ic_->ic_unchecked(index_->mica(t1, t2, *ic_)), t1, t2);
}

double TermSimilarity::adjusted_resnik(TermIndex t1, TermIndex t2) const {
  require_annotated(t1, t2);
  const double ic_mica = ic_->ic_unchecked(index_->mica(t1, t2, *ic_));
  return ic_mica * lin_given(ic_mica, t1, t2);
}

double TermSimilarity::jiang(TermIndex t1, TermIndex t2) const {
  require_annotated(t1, t2);
  const double ic_mica = ic_->ic_unchecked(index_->mica(t1, t2, *ic_));
  const double distance = (ic_->ic_unchecked(t1) + ic_->ic_unchecked(t2)) - 2.0 * ic_mica;
  return 1.0 / (1.0 + std::max(0.0, distance));
}

double TermSimilarity::gic(TermIndex t1, TermIndex t2) const {
  require_annotated(t1, t2);
  auto a = index_->closure(t1), b = index_->closure(t2);
  auto ic_of = [&](TermIndex t) { return ic_->annotated(t) ? ic_->ic_unchecked(t) : 0.0; };
  double shared = 0, all = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      all += ic_of(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      all += ic_of(b[j++]);
    } else {
      const double v = ic_of(a[i]);
      shared += v;
      all += v;
      ++i;
      ++j;
    }
  }
  if (all == 0.0) {
    throw Error(ErrorCode::ZeroUnion, "induced ancestor sets of " + index_->dag().id(t1).value + " and " +
                                          index_->dag().id(t2).value + " carry no information");
  }
  return shared / all;
}

double TermSimilarity::rss(TermIndex t1, TermIndex t2) const {
  const auto c = index_->rss_components(t1, t2, ic_);
  if (c.alpha + c.beta == 0) return 0.0;
  const double spread = c.max_depth + c.gamma == 0
                            ? 1.0
                            : static_cast<double>(c.max_depth) / static_cast<double>(c.max_depth + c.gamma);
  return spread * (static_cast<double>(c.alpha) / static_cast<double>(c.alpha + c.beta));
}

double TermSimilarity::relevance(TermIndex t1, TermIndex t2, BaseFlavor flavor) const {
  require_annotated(t1, t2);
  if (flavor == BaseFlavor::jiang) {
    const TermIndex m = index_->mica(t1, t2, *ic_);
    return jiang(t1, t2) * (1.0 - ic_->prob_unchecked(m));
  }
  // Maximised over every common ancestor, not only the MICA.
  double best = 0.0;
  index_->for_each_common(t1, t2, [&](TermIndex a, int, int) {
    if (!ic_->annotated(a)) return;
    best = std::max(best, lin_given(ic_->ic_unchecked(a), t1, t2) * (1.0 - ic_->prob_unchecked(a)));
  });
  return best;
}

double TermSimilarity::simic(TermIndex t1, TermIndex t2, BaseFlavor flavor) const {
  require_annotated(t1, t2);
  const double ic_mica = ic_->ic_unchecked(index_->mica(t1, t2, *ic_));
  const double base = flavor == BaseFlavor::lin ? lin_given(ic_mica, t1, t2) : jiang(t1, t2);
  return base * (1.0 - 1.0 / (1.0 + ic_mica));
}

double TermSimilarity::operator()(Measure m, TermIndex t1, TermIndex t2) const {
  switch (m) {
    case Measure::resnik: return resnik(t1, t2);
    case Measure::adjusted_resnik: return adjusted_resnik(t1, t2);
    case Measure::lin: return lin(t1, t2);
    case Measure::jiang: return jiang(t1, t2);
    case Measure::gic: return gic(t1, t2);
    case Measure::rss: return rss(t1, t2);
    case Measure::relevance_lin: return relevance(t1, t2, BaseFlavor::lin);
    case Measure::relevance_jiang: return relevance(t1, t2, BaseFlavor::jiang);
    case Measure::simic_lin: return simic(t1, t2, BaseFlavor::lin);
    case Measure::simic_jiang: return simic(t1, t2, BaseFlavor::jiang);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown measure");
}

SimilarityScore TermSimilarity::score(Measure m, const TermId& t1, const TermId& t2) const {
  const auto& dag = index_->dag();
  return {(*this)(m, dag.index_of(t1), dag.index_of(t2)), m};
}

}  // namespace gosim
