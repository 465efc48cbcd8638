#include "gosim/graph_index.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "gosim/error.hpp"

namespace gosim {

DagIndex::DagIndex(const OntologyDag& dag, DepthMode mode) : dag_(&dag), mode_(mode) {
  const std::size_t n = dag.size();
  auto topo = dag.topological_order();

  depth_.assign(n, 0);
  for (TermIndex t : topo) {
    auto parents = dag.parents(t);
    if (parents.empty()) continue;
    int d = mode == DepthMode::longest_path ? 0 : std::numeric_limits<int>::max();
    for (TermIndex p : parents) {
      d = mode == DepthMode::longest_path ? std::max(d, depth_[p] + 1) : std::min(d, depth_[p] + 1);
    }
    depth_[t] = d;
  }
  max_depth_ = n == 0 ? 0 : *std::max_element(depth_.begin(), depth_.end());

  leaf_span_.assign(n, 0);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (TermIndex c : dag.children(*it)) leaf_span_[*it] = std::max(leaf_span_[*it], leaf_span_[c] + 1);
  }

  // Closures in topological order so every parent's list is ready.
  std::vector<std::vector<std::pair<TermIndex, int>>> lists(n);
  for (TermIndex t : topo) {
    auto& list = lists[t];
    list.emplace_back(t, 0);
    for (TermIndex p : dag.parents(t)) {
      for (auto [a, d] : lists[p]) list.emplace_back(a, d + 1);
    }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.first == y.first; }),
               list.end());
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t t = 0; t < n; ++t) offsets_[t + 1] = offsets_[t] + lists[t].size();
  closure_.reserve(offsets_[n]);
  distance_.reserve(offsets_[n]);
  for (const auto& list : lists) {
    for (auto [a, d] : list) {
      closure_.push_back(a);
      distance_.push_back(d);
    }
  }
}

std::span<const TermIndex> DagIndex::closure(TermIndex t) const {
  return {closure_.data() + offsets_[t], offsets_[t + 1] - offsets_[t]};
}

std::span<const int> DagIndex::closure_distances(TermIndex t) const {
  return {distance_.data() + offsets_[t], offsets_[t + 1] - offsets_[t]};
}

std::vector<TermIndex> DagIndex::ancestors(TermIndex t) const {
  std::vector<TermIndex> out;
  for (TermIndex a : closure(t)) {
    if (a != t) out.push_back(a);
  }
  return out;
}

std::vector<TermId> DagIndex::ancestors(const TermId& t) const {
  std::vector<TermId> out;
  for (TermIndex a : ancestors(dag_->index_of(t))) out.push_back(dag_->id(a));
  return out;
}

std::optional<int> DagIndex::up_distance(TermIndex t, TermIndex ancestor) const {
  auto c = closure(t);
  auto it = std::lower_bound(c.begin(), c.end(), ancestor);
  if (it == c.end() || *it != ancestor) return std::nullopt;
  return closure_distances(t)[static_cast<std::size_t>(it - c.begin())];
}

TermIndex DagIndex::mica(TermIndex t1, TermIndex t2, const IcTable& ic) const {
  std::optional<TermIndex> best;
  for_each_common(t1, t2, [&](TermIndex a, int, int) {
    if (!ic.annotated(a)) return;
    if (!best || ic.count(a) < ic.count(*best) ||
        (ic.count(a) == ic.count(*best) && depth_[a] > depth_[*best])) {
      best = a;
    }
  });
  if (!best) {
    throw Error(ErrorCode::UnannotatedTerm,
                "no annotated common ancestor of " + dag_->id(t1).value + " and " + dag_->id(t2).value);
  }
  return *best;
}

TermIndex DagIndex::mrca(TermIndex t1, TermIndex t2, const IcTable* ic) const {
  // Unannotated terms get a count above any real one.
  auto rank_count = [&](TermIndex a) -> std::uint64_t {
    if (ic == nullptr) return 0;
    return ic->annotated(a) ? ic->count(a) : std::numeric_limits<std::uint64_t>::max();
  };
  std::optional<TermIndex> best;
  for_each_common(t1, t2, [&](TermIndex a, int, int) {
    if (!best || depth_[a] > depth_[*best] || (depth_[a] == depth_[*best] && rank_count(a) < rank_count(*best))) {
      best = a;
    }
  });
  // Every term reaches the root, so the common set is never empty.
  return *best;
}

RssComponents DagIndex::rss_components(TermIndex t1, TermIndex t2, const IcTable* ic) const {
  const TermIndex m = mrca(t1, t2, ic);
  RssComponents c;
  c.alpha = depth_[m];
  c.beta = std::max(leaf_span_[t1], leaf_span_[t2]);
  c.gamma = *up_distance(t1, m) + *up_distance(t2, m);
  c.max_depth = max_depth_;
  return c;
}

TermId DagIndex::mica(const TermId& t1, const TermId& t2, const IcTable& ic) const {
  return dag_->id(mica(dag_->index_of(t1), dag_->index_of(t2), ic));
}

TermId DagIndex::mrca(const TermId& t1, const TermId& t2, const IcTable* ic) const {
  return dag_->id(mrca(dag_->index_of(t1), dag_->index_of(t2), ic));
}

RssComponents DagIndex::rss_components(const TermId& t1, const TermId& t2, const IcTable* ic) const {
  return rss_components(dag_->index_of(t1), dag_->index_of(t2), ic);
}

}  // namespace gosim
