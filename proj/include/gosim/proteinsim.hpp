#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gosim/error.hpp"
#include "gosim/model.hpp"
#include "gosim/termsim.hpp"

namespace gosim {

enum class Strategy { maximum, average, best_match_average };

std::string_view to_string(Strategy s);
// Accepts the full names plus max / avg / bma.
std::optional<Strategy> parse_strategy(std::string_view name);

// Best match of one term against a set of terms.
template <class Scorer>
double term_to_set_sim(TermIndex t, std::span<const TermIndex> set, Scorer&& score) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "term set is empty");
  double best = -std::numeric_limits<double>::infinity();
  for (TermIndex u : set) best = std::max(best, static_cast<double>(score(t, u)));
  return best;
}

// Aggregates the |go1| x |go2| term similarities. Each term pair is scored
// exactly once; the sums run in index order so results are reproducible.
template <class Scorer>
double protein_sim(std::span<const TermIndex> go1, std::span<const TermIndex> go2, Strategy strategy,
                   Scorer&& score) {
  if (go1.empty() || go2.empty()) throw Error(ErrorCode::EmptySet, "protein has no terms in this namespace");
  // Every strategy is symmetric; a fixed argument order makes the rounding symmetric too.
  if (std::lexicographical_compare(go2.begin(), go2.end(), go1.begin(), go1.end())) std::swap(go1, go2);
  const std::size_t m = go1.size(), n = go2.size();
  std::vector<double> cell(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cell[i * n + j] = score(go1[i], go2[j]);
  }
  switch (strategy) {
    case Strategy::maximum:
      return *std::max_element(cell.begin(), cell.end());
    case Strategy::average: {
      double sum = 0;
      for (double v : cell) sum += v;
      return sum / static_cast<double>(m * n);
    }
    case Strategy::best_match_average: {
      double sum = 0;
      for (std::size_t i = 0; i < m; ++i) {
        double best = cell[i * n];
        for (std::size_t j = 1; j < n; ++j) best = std::max(best, cell[i * n + j]);
        sum += best;
      }
      for (std::size_t j = 0; j < n; ++j) {
        double best = cell[j];
        for (std::size_t i = 1; i < m; ++i) best = std::max(best, cell[i * n + j]);
        sum += best;
      }
      return sum / static_cast<double>(m + n);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

// Memo for symmetric term-pair scores, sharded for concurrent use. Two
// threads racing on the same miss both compute it and store the same value.
class TermPairCache {
public:
  TermPairCache();

  // Returns the value and whether it came from the cache.
  template <class F>
  std::pair<double, bool> get_or_compute(TermIndex a, TermIndex b, F&& compute) {
    const std::uint64_t key = a < b ? (std::uint64_t{a} << 32) | b : (std::uint64_t{b} << 32) | a;
    Shard& shard = *shards_[(key * 0x9E3779B97F4A7C15ull) >> (64 - kShardBits)];
    {
      std::shared_lock lock(shard.mutex);
      if (auto it = shard.values.find(key); it != shard.values.end()) return {it->second, true};
    }
    const double v = compute();
    std::unique_lock lock(shard.mutex);
    shard.values.insert_or_assign(key, v);
    return {v, false};
  }

  std::size_t size() const;

private:
  static constexpr unsigned kShardBits = 6;

  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<std::uint64_t, double> values;
  };
  std::vector<std::unique_ptr<Shard>> shards_;
};

struct MatrixMetadata {
  std::string measure;
  std::string strategy;
  std::string ns;
  std::string fingerprint;
};

// Symmetric gene x gene matrix stored as the upper triangle including the
// diagonal. Cells that could not be scored hold NaN and count as absent.
class ScoreMatrix {
public:
  ScoreMatrix() = default;
  explicit ScoreMatrix(std::vector<std::string> genes, MatrixMetadata metadata = {});

  std::size_t size() const { return genes_.size(); }
  const std::vector<std::string>& genes() const { return genes_; }
  const MatrixMetadata& metadata() const { return metadata_; }
  std::optional<std::size_t> find(std::string_view gene) const;

  double at(std::size_t i, std::size_t j) const { return values_[slot(i, j)]; }
  bool has(std::size_t i, std::size_t j) const { return !std::isnan(at(i, j)); }
  void set(std::size_t i, std::size_t j, double v) { values_[slot(i, j)] = v; }
  std::optional<double> value(std::string_view g1, std::string_view g2) const;

  std::size_t defined_pairs() const;  // off-diagonal only
  std::span<const double> raw() const { return values_; }

  // "# key=value" metadata lines, then gene1 <TAB> gene2 <TAB> value with
  // gene1 <= gene2; absent cells are not written.
  void write_tsv(std::ostream& out) const;
  static ScoreMatrix read_tsv(std::istream& in);
  // Magic line, one-line JSON header, then little-endian float64 cells.
  void write_binary(std::ostream& out) const;
  static ScoreMatrix read_binary(std::istream& in);

private:
  std::size_t slot(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * genes_.size() - i * (i - 1) / 2 + (j - i);
  }
  void reindex();

  std::vector<std::string> genes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
  MatrixMetadata metadata_;
};

struct ProteinPairScore {
  std::string gene1;
  std::string gene2;
  std::string ns;
  Measure measure = Measure::simic_lin;
  Strategy strategy = Strategy::best_match_average;
  double value = 0;
};

// Throws EmptySet when either gene has no annotation in the namespace.
ProteinPairScore score_gene_pair(const NamespaceModel& model, const std::string& gene1, const std::string& gene2,
                                 Measure measure, Strategy strategy);

struct AllPairsOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct AllPairsResult {
  ScoreMatrix matrix;
  std::size_t excluded_cells = 0;  // off-diagonal cells left absent
  std::size_t missing_genes = 0;   // genes with no terms in the namespace
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;

  double hit_rate() const {
    const auto n = cache_hits + cache_misses;
    return n == 0 ? 0.0 : static_cast<double>(cache_hits) / static_cast<double>(n);
  }
};

// Every gene pair (and each gene with itself) in the given order. Output is
// identical for any worker count.
AllPairsResult all_pairs(std::span<const std::string> genes, const NamespaceModel& model, Measure measure,
                         Strategy strategy, const AllPairsOptions& options = {});

unsigned resolve_workers(unsigned requested);

}  // namespace gosim
