#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include "gosim/analysis.hpp"
#include "text.hpp"

namespace gosim {

namespace {

// Runs body(i) for i in [0, count) on round-robin worker threads.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> failures(workers);
  auto run = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < count; i += workers) body(i);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

struct MeanSd {
  double mean = 0;
  double sd = 0;
};

// Sample standard deviation, summed in index order.
template <class Get>
MeanSd mean_sd(std::size_t n, Get&& get) {
  MeanSd r;
  if (n == 0) return r;
  for (std::size_t i = 0; i < n; ++i) r.mean += get(i);
  r.mean /= static_cast<double>(n);
  if (n < 2) return r;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) ss += (get(i) - r.mean) * (get(i) - r.mean);
  r.sd = std::sqrt(ss / static_cast<double>(n - 1));
  return r;
}

// Distinct universe indices of the scorable positives.
std::vector<std::uint32_t> locate_positives(std::span<const GenePair> positives, const PairUniverse& universe,
                                            std::size_t& unscorable) {
  std::vector<std::uint32_t> found;
  unscorable = 0;
  for (const auto& p : positives) {
    if (auto i = universe.find(p)) {
      found.push_back(static_cast<std::uint32_t>(*i));
    } else {
      ++unscorable;
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

constexpr std::uint64_t kZScoreStream = 1;
constexpr std::uint64_t kRocStream = 2;

}  // namespace

// ---------------------------------------------------------------------------

PpiPrediction predict_ppi(const ScoreMatrix& bp, const ScoreMatrix& cc, const PpiOptions& options) {
  std::vector<std::string> genes;
  for (const auto& g : bp.genes()) {
    if (cc.find(g)) genes.push_back(g);
  }
  if (genes.empty()) throw Error(ErrorCode::EmptyIntersection, "BP and CC matrices share no gene");
  std::sort(genes.begin(), genes.end());

  PpiPrediction p;
  p.bp_min = options.bp_min;
  p.cc_min = options.cc_min;
  p.bp = bp.metadata();
  p.cc = cc.metadata();

  std::vector<std::size_t> bi(genes.size()), ci(genes.size());
  for (std::size_t i = 0; i < genes.size(); ++i) {
    bi[i] = *bp.find(genes[i]);
    ci[i] = *cc.find(genes[i]);
  }
  std::vector<std::size_t> parent(genes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(genes.size(), false);
  for (std::size_t i = 0; i < genes.size(); ++i) {
    for (std::size_t j = i + 1; j < genes.size(); ++j) {
      if (!bp.has(bi[i], bi[j]) || !cc.has(ci[i], ci[j])) continue;
      if (bp.at(bi[i], bi[j]) > options.bp_min && cc.at(ci[i], ci[j]) > options.cc_min) {
        p.edges.emplace_back(genes[i], genes[j]);
        used[i] = used[j] = true;
        parent[root(i)] = root(j);
      }
    }
  }
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    if (used[i]) ++sizes[root(i)];
  }
  p.proteins = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  p.components = sizes.size();
  for (const auto& [r, n] : sizes) p.largest_component = std::max(p.largest_component, n);
  return p;
}

ComplexTable read_complexes_tsv(std::istream& in) {
  ComplexTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (text::trim(view).empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorCode::MalformedLine, "complex line " + std::to_string(line_no) + ": expected complex and gene");
    }
    table[std::string(text::trim(fields[0]))].insert(std::string(text::trim(fields[1])));
  }
  return table;
}

ComplexCoverage complex_coverage(const ComplexTable& complexes, const PpiPrediction& prediction) {
  std::set<std::string> predicted;
  for (const auto& e : prediction.edges) {
    predicted.insert(e.first);
    predicted.insert(e.second);
  }
  ComplexCoverage out;
  for (const auto& [name, members] : complexes) {
    if (members.size() < 2) {
      ++out.skipped;
      continue;
    }
    ComplexCoverageRow row{name, members.size(), 0, false};
    for (const auto& g : members) row.members_found += predicted.count(g);
    row.fully_covered = row.members_found == row.members;
    if (row.fully_covered) {
      ++out.fully_covered;
    } else if (row.members_found > 0) {
      ++out.partially_covered;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint8_t grid_cell(double bp, double cc) { return static_cast<std::uint8_t>(unit_bin(bp) * 10 + unit_bin(cc)); }

PairUniverse::PairUniverse(const ScoreMatrix& bp, const ScoreMatrix& cc, const std::set<std::string>* genes) {
  for (const auto& g : bp.genes()) {
    if (cc.find(g) && (genes == nullptr || genes->count(g) > 0)) genes_.push_back(g);
  }
  std::sort(genes_.begin(), genes_.end());
  std::vector<std::size_t> bi(genes_.size()), ci(genes_.size());
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    bi[i] = *bp.find(genes_[i]);
    ci[i] = *cc.find(genes_[i]);
  }
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    row_start_.push_back(static_cast<std::uint32_t>(first_.size()));
    for (std::size_t j = i + 1; j < genes_.size(); ++j) {
      if (!bp.has(bi[i], bi[j]) || !cc.has(ci[i], ci[j])) continue;
      first_.push_back(static_cast<std::uint32_t>(i));
      second_.push_back(static_cast<std::uint32_t>(j));
      bp_.push_back(bp.at(bi[i], bi[j]));
      cc_.push_back(cc.at(ci[i], ci[j]));
      cell_.push_back(grid_cell(bp_.back(), cc_.back()));
    }
  }
  row_start_.push_back(static_cast<std::uint32_t>(first_.size()));
}

GenePair PairUniverse::pair(std::size_t i) const { return GenePair(genes_[first_[i]], genes_[second_[i]]); }

std::optional<std::size_t> PairUniverse::find(const GenePair& p) const {
  auto locate = [&](const std::string& g) -> std::optional<std::size_t> {
    auto it = std::lower_bound(genes_.begin(), genes_.end(), g);
    if (it == genes_.end() || *it != g) return std::nullopt;
    return static_cast<std::size_t>(it - genes_.begin());
  };
  auto a = locate(p.first), b = locate(p.second);
  if (!a || !b || *a == *b) return std::nullopt;
  auto begin = second_.begin() + row_start_[*a], end = second_.begin() + row_start_[*a + 1];
  auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(*b));
  if (it == end || *it != *b) return std::nullopt;
  return static_cast<std::size_t>(it - second_.begin());
}

std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k, std::uint64_t seed,
                                                      std::uint64_t stream, std::uint64_t repeat) {
  if (k > n) throw Error(ErrorCode::InvalidArgument, "cannot draw more items than the population holds");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(repeat),
                    static_cast<std::uint32_t>(repeat >> 32)};
  std::mt19937_64 rng(seq);
  // Floyd's algorithm.
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint32_t j = n - k; j < n; ++j) {
    const auto t = std::uniform_int_distribution<std::uint32_t>(0, j)(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> z_score(double observed, double mean, double sd) {
  if (!(sd > 0)) return std::nullopt;
  return (observed - mean) / sd;
}

ZScoreGrid zscore_significance(std::span<const GenePair> positives, const PairUniverse& universe,
                               const ZScoreOptions& options) {
  ZScoreGrid grid;
  grid.seed = options.seed;
  grid.n_samples = options.n_samples;
  grid.universe = universe.size();
  const auto found = locate_positives(positives, universe, grid.unscorable);
  grid.positives = found.size();
  if (found.empty()) throw Error(ErrorCode::EmptyInput, "no positive pair is scorable in both namespaces");
  if (universe.size() < found.size()) {
    throw Error(ErrorCode::InsufficientUniverse, std::to_string(universe.size()) + " scorable pairs, " +
                                                     std::to_string(found.size()) + " needed per sample");
  }
  for (auto i : found) ++grid.cells[universe.cell(i)].observed;

  std::vector<std::array<std::uint32_t, 100>> counts(options.n_samples);
  parallel_for(options.n_samples, options.workers, [&](std::size_t r) {
    auto sample = sample_without_replacement(static_cast<std::uint32_t>(universe.size()),
                                             static_cast<std::uint32_t>(found.size()), options.seed, kZScoreStream, r);
    auto& c = counts[r];
    c.fill(0);
    for (auto i : sample) ++c[universe.cell(i)];
  });
  for (std::size_t cell = 0; cell < 100; ++cell) {
    auto s = mean_sd(counts.size(), [&](std::size_t r) { return static_cast<double>(counts[r][cell]); });
    auto& out = grid.cells[cell];
    out.random_mean = s.mean;
    out.random_sd = s.sd;
    out.z = z_score(static_cast<double>(out.observed), s.mean, s.sd);
  }
  return grid;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Combine c) {
  switch (c) {
    case Combine::mean: return "mean";
    case Combine::min: return "min";
    case Combine::product: return "product";
  }
  return "unknown";
}

std::optional<Combine> parse_combine(std::string_view name) {
  if (name == "mean") return Combine::mean;
  if (name == "min") return Combine::min;
  if (name == "product") return Combine::product;
  return std::nullopt;
}

double combine_scores(Combine c, double bp, double cc) {
  switch (c) {
    case Combine::mean: return (bp + cc) / 2.0;
    case Combine::min: return std::min(bp, cc);
    case Combine::product: return bp * cc;
  }
  return 0;
}

double auc_rank(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty()) throw Error(ErrorCode::EmptyInput, "AUC needs both classes");
  std::vector<std::pair<double, bool>> all;
  all.reserve(positive.size() + negative.size());
  for (double v : positive) all.emplace_back(v, true);
  for (double v : negative) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < all.size() && all[j].first == all[i].first) pos_in_group += all[j++].second ? 1 : 0;
    // Ranks i+1 .. j share their average.
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += avg_rank * static_cast<double>(pos_in_group);
    i = j;
  }
  const double np = static_cast<double>(positive.size()), nn = static_cast<double>(negative.size());
  return (rank_sum - np * (np + 1) / 2.0) / (np * nn);
}

RocReport roc_auc(std::span<const GenePair> positives, const PairUniverse& universe, const RocOptions& options) {
  RocReport report;
  report.combine = options.combine;
  report.seed = options.seed;
  const auto found = locate_positives(positives, universe, report.unscorable);
  if (found.empty()) throw Error(ErrorCode::EmptyInput, "no positive pair is scorable in both namespaces");
  report.positives = report.negatives = found.size();

  std::vector<std::uint32_t> pool;
  pool.reserve(universe.size() - found.size());
  for (std::uint32_t i = 0, p = 0; i < universe.size(); ++i) {
    if (p < found.size() && found[p] == i) {
      ++p;
    } else {
      pool.push_back(i);
    }
  }
  if (pool.size() < found.size()) {
    throw Error(ErrorCode::InsufficientNegatives, std::to_string(pool.size()) + " candidate negatives for " +
                                                      std::to_string(found.size()) + " positives");
  }
  auto score = [&](std::uint32_t i) { return combine_scores(options.combine, universe.bp(i), universe.cc(i)); };
  std::vector<double> pos_scores;
  for (auto i : found) pos_scores.push_back(score(i));

  report.auc.assign(options.repeats, 0);
  parallel_for(options.repeats, options.workers, [&](std::size_t r) {
    auto picks = sample_without_replacement(static_cast<std::uint32_t>(pool.size()),
                                            static_cast<std::uint32_t>(found.size()), options.seed, kRocStream, r);
    std::vector<double> neg_scores;
    neg_scores.reserve(picks.size());
    for (auto k : picks) neg_scores.push_back(score(pool[k]));
    report.auc[r] = auc_rank(pos_scores, neg_scores);
  });
  auto s = mean_sd(report.auc.size(), [&](std::size_t r) { return report.auc[r]; });
  report.auc_mean = s.mean;
  report.auc_sd = s.sd;
  return report;
}

std::vector<LabeledPair> read_pairs_tsv(std::istream& in) {
  std::vector<LabeledPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (text::trim(view).empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorCode::MalformedLine, "pair line " + std::to_string(line_no) + ": expected two genes");
    }
    LabeledPair p{GenePair(std::string(text::trim(fields[0])), std::string(text::trim(fields[1]))), {}};
    if (fields.size() > 2) p.label = std::string(text::trim(fields[2]));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace gosim
