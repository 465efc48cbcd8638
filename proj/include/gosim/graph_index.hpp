#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gosim/infocontent.hpp"
#include "gosim/ontology.hpp"

namespace gosim {

enum class DepthMode { longest_path, shortest_path };

struct RssComponents {
  int alpha = 0;      // depth of the MRCA
  int beta = 0;       // max leaf span of the two terms
  int gamma = 0;      // up-distance t1->MRCA plus t2->MRCA
  int max_depth = 0;  // namespace-wide
};

// Structural queries over one OntologyDag, all precomputed at construction.
//
// The closure of t is t plus its proper ancestors, sorted by TermIndex, with
// the shortest edge count from t to each entry alongside (0 for t itself).
class DagIndex {
public:
  explicit DagIndex(const OntologyDag& dag, DepthMode mode = DepthMode::longest_path);

  const OntologyDag& dag() const { return *dag_; }
  DepthMode depth_mode() const { return mode_; }

  std::span<const TermIndex> closure(TermIndex t) const;
  std::span<const int> closure_distances(TermIndex t) const;

  // Proper ancestors, sorted.
  std::vector<TermIndex> ancestors(TermIndex t) const;
  // Throws UnknownTerm.
  std::vector<TermId> ancestors(const TermId& t) const;

  int depth(TermIndex t) const { return depth_[t]; }
  int leaf_span(TermIndex t) const { return leaf_span_[t]; }
  int max_depth() const { return max_depth_; }
  // Shortest edge count from t up to `ancestor`; nullopt when not an ancestor.
  std::optional<int> up_distance(TermIndex t, TermIndex ancestor) const;

  // Common ancestor with the lowest probability; ties go to the deeper term,
  // then to the smaller id. Throws UnannotatedTerm if no common ancestor has
  // a probability.
  TermIndex mica(TermIndex t1, TermIndex t2, const IcTable& ic) const;
  // Deepest common ancestor; ties go to the lower probability (terms without
  // one rank last), then to the smaller id. `ic` may be null.
  TermIndex mrca(TermIndex t1, TermIndex t2, const IcTable* ic) const;
  RssComponents rss_components(TermIndex t1, TermIndex t2, const IcTable* ic) const;

  TermId mica(const TermId& t1, const TermId& t2, const IcTable& ic) const;
  TermId mrca(const TermId& t1, const TermId& t2, const IcTable* ic) const;
  RssComponents rss_components(const TermId& t1, const TermId& t2, const IcTable* ic) const;

  // Calls f(term, dist_from_t1, dist_from_t2) for every common closure entry,
  // in TermIndex order.
  template <class F>
  void for_each_common(TermIndex t1, TermIndex t2, F&& f) const {
    auto a = closure(t1), b = closure(t2);
    auto da = closure_distances(t1), db = closure_distances(t2);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        f(a[i], da[i], db[j]);
        ++i;
        ++j;
      }
    }
  }

private:
  const OntologyDag* dag_;
  DepthMode mode_;
  std::vector<std::size_t> offsets_;  // closure of t is [offsets_[t], offsets_[t+1])
  std::vector<TermIndex> closure_;
  std::vector<int> distance_;
  std::vector<int> depth_;
  std::vector<int> leaf_span_;
  int max_depth_ = 0;
};

}  // namespace gosim
