#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>

#include "gosim/analysis.hpp"
#include "text.hpp"

namespace gosim {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string line_context(std::string_view what, std::size_t line_no) {
  return std::string(what) + " line " + std::to_string(line_no);
}
}  // namespace

GenePair::GenePair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  first = std::move(a);
  second = std::move(b);
}

PairDataset join(const ScoreMatrix& semantic, const PairValues& external, std::string label) {
  PairDataset out{std::move(label), {}};
  for (const auto& [pair, value] : external) {
    if (pair.first == pair.second) continue;
    if (auto s = semantic.value(pair.first, pair.second)) out.rows.push_back({pair, *s, value});
  }
  return out;
}

PairDataset join(const ScoreMatrix& semantic, const ScoreMatrix& external, std::string label) {
  PairDataset out{std::move(label), {}};
  const auto& genes = semantic.genes();
  for (std::size_t i = 0; i < genes.size(); ++i) {
    auto ei = external.find(genes[i]);
    if (!ei) continue;
    for (std::size_t j = i + 1; j < genes.size(); ++j) {
      auto ej = external.find(genes[j]);
      if (!ej || !semantic.has(i, j) || !external.has(*ei, *ej)) continue;
      out.rows.push_back({GenePair(genes[i], genes[j]), semantic.at(i, j), external.at(*ei, *ej)});
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const PairRow& a, const PairRow& b) { return a.pair < b.pair; });
  return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------

std::vector<BlastHit> read_blast_tsv(std::istream& in, const BlastColumns& columns) {
  const std::size_t needed = std::max({columns.query, columns.subject, columns.bit_score}) + 1;
  std::vector<BlastHit> hits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (text::trim(view).empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() < needed) {
      throw Error(ErrorCode::MalformedLine, line_context("BLAST", line_no) + ": expected at least " +
                                                std::to_string(needed) + " columns");
    }
    auto score = text::parse_double(fields[columns.bit_score]);
    if (!score) throw Error(ErrorCode::MalformedLine, line_context("BLAST", line_no) + ": bad bit score");
    hits.push_back({std::string(text::trim(fields[columns.query])), std::string(text::trim(fields[columns.subject])),
                    *score});
  }
  return hits;
}

SequenceSimilarity sequence_similarity(std::span<const BlastHit> hits) {
  SequenceSimilarity out;
  std::map<std::pair<std::string, std::string>, double> best;
  for (const auto& h : hits) {
    if (!(h.bit_score > 0)) {
      throw Error(ErrorCode::NonPositiveScore, h.query + " -> " + h.subject + " has bit score " + text::exact(h.bit_score));
    }
    if (h.query == h.subject) {
      ++out.self_hits;
      continue;
    }
    auto [it, inserted] = best.try_emplace({h.query, h.subject}, h.bit_score);
    if (!inserted) {
      ++out.repeated_hits;
      it->second = std::max(it->second, h.bit_score);
    }
  }
  for (const auto& [key, forward] : best) {
    const auto& [q, s] = key;
    auto reverse = best.find({s, q});
    if (reverse == best.end()) {
      ++out.one_directional;
      out.values.emplace(GenePair(q, s), std::log10(forward));
    } else if (q < s) {
      out.values.emplace(GenePair(q, s), std::log10((forward + reverse->second) / 2.0));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

BinnedCorrelationReport binned_correlation(const PairDataset& data, std::size_t n_intervals) {
  if (data.rows.empty()) throw Error(ErrorCode::EmptyInput, "no pairs to correlate");
  if (n_intervals == 0) throw Error(ErrorCode::InvalidArgument, "interval count must be positive");
  BinnedCorrelationReport r;
  r.label = data.label;
  r.rows = data.rows.size();
  auto [lo_it, hi_it] = std::minmax_element(data.rows.begin(), data.rows.end(),
                                            [](const PairRow& a, const PairRow& b) { return a.semantic < b.semantic; });
  r.min_semantic = lo_it->semantic;
  r.max_semantic = hi_it->semantic;
  if (!(r.max_semantic > r.min_semantic)) {
    throw Error(ErrorCode::DegenerateRange,
                "all " + std::to_string(r.rows) + " semantic values equal " + text::exact(r.min_semantic));
  }
  const double width = (r.max_semantic - r.min_semantic) / static_cast<double>(n_intervals);
  std::vector<double> sum_s(n_intervals, 0), sum_e(n_intervals, 0);
  r.intervals.resize(n_intervals);
  for (std::size_t k = 0; k < n_intervals; ++k) {
    r.intervals[k].lower = r.min_semantic + width * static_cast<double>(k);
    r.intervals[k].upper = k + 1 == n_intervals ? r.max_semantic : r.min_semantic + width * static_cast<double>(k + 1);
  }
  for (const auto& row : data.rows) {
    auto k = static_cast<std::size_t>((row.semantic - r.min_semantic) / width);
    k = std::min(k, n_intervals - 1);
    ++r.intervals[k].count;
    sum_s[k] += row.semantic;
    sum_e[k] += row.external;
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < n_intervals; ++k) {
    auto& iv = r.intervals[k];
    if (iv.count == 0) {
      iv.mean_semantic = iv.mean_external = kNaN;
      continue;
    }
    iv.mean_semantic = sum_s[k] / static_cast<double>(iv.count);
    iv.mean_external = sum_e[k] / static_cast<double>(iv.count);
    xs.push_back(iv.mean_semantic);
    ys.push_back(iv.mean_external);
  }
  r.non_empty = xs.size();
  if (r.non_empty < 3) {
    throw Error(ErrorCode::TooFewIntervalsNonEmpty, "only " + std::to_string(r.non_empty) + " of " +
                                                        std::to_string(n_intervals) + " intervals hold pairs");
  }
  auto rho = pearson(xs, ys);
  if (!rho) throw Error(ErrorCode::DegenerateRange, "interval means of the external values are all equal");
  r.pearson_r = *rho;
  return r;
}

// ---------------------------------------------------------------------------

ExpressionMatrix read_expression_tsv(std::istream& in) {
  ExpressionMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (text::trim(view).empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (!header) {
      for (std::size_t i = 1; i < fields.size(); ++i) m.conditions.emplace_back(text::trim(fields[i]));
      header = true;
      continue;
    }
    if (fields.size() != m.conditions.size() + 1) {
      throw Error(ErrorCode::MalformedLine, line_context("expression", line_no) + ": expected " +
                                                std::to_string(m.conditions.size() + 1) + " columns");
    }
    m.genes.emplace_back(text::trim(fields[0]));
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto cell = text::trim(fields[i]);
      if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") {
        m.values.push_back(kNaN);
        continue;
      }
      auto v = text::parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::MalformedLine, line_context("expression", line_no) + ": bad value '" +
                                                  std::string(cell) + "'");
      }
      m.values.push_back(*v);
    }
  }
  return m;
}

std::size_t impute_knn(ExpressionMatrix& matrix, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  const std::size_t n = matrix.genes.size(), c = matrix.conditions.size();
  const ExpressionMatrix original = matrix;
  std::size_t imputed = 0;
  std::vector<std::pair<double, std::size_t>> neighbours;
  for (std::size_t g = 0; g < n; ++g) {
    std::vector<std::size_t> missing;
    for (std::size_t j = 0; j < c; ++j) {
      if (std::isnan(original.at(g, j))) missing.push_back(j);
    }
    if (missing.empty()) continue;

    // Distance to every other gene over the conditions both observe.
    std::vector<double> distance(n, kNaN);
    for (std::size_t h = 0; h < n; ++h) {
      if (h == g) continue;
      double sum = 0;
      std::size_t shared = 0;
      for (std::size_t j = 0; j < c; ++j) {
        const double a = original.at(g, j), b = original.at(h, j);
        if (std::isnan(a) || std::isnan(b)) continue;
        sum += (a - b) * (a - b);
        ++shared;
      }
      if (shared > 0) distance[h] = std::sqrt(sum * static_cast<double>(c) / static_cast<double>(shared));
    }

    for (std::size_t j : missing) {
      neighbours.clear();
      for (std::size_t h = 0; h < n; ++h) {
        if (!std::isnan(distance[h]) && !std::isnan(original.at(h, j))) neighbours.emplace_back(distance[h], h);
      }
      if (neighbours.empty()) {
        throw Error(ErrorCode::NoNeighbors, "no gene shares conditions with " + matrix.genes[g] +
                                                " and observes " + matrix.conditions[j]);
      }
      const std::size_t take = std::min(k, neighbours.size());
      std::partial_sort(neighbours.begin(), neighbours.begin() + static_cast<std::ptrdiff_t>(take), neighbours.end());
      double sum = 0;
      for (std::size_t i = 0; i < take; ++i) sum += original.at(neighbours[i].second, j);
      matrix.at(g, j) = sum / static_cast<double>(take);
      ++imputed;
    }
  }
  return imputed;
}

ExpressionCorrelation expression_correlation(ExpressionMatrix matrix, const ExpressionOptions& options) {
  const std::size_t c = matrix.conditions.size();
  if (c < options.min_conditions) {
    throw Error(ErrorCode::TooFewConditions, std::to_string(c) + " conditions, at least " +
                                                 std::to_string(options.min_conditions) + " required");
  }
  ExpressionCorrelation out;
  const double limit = options.max_missing_frac * static_cast<double>(c);
  ExpressionMatrix kept;
  kept.conditions = matrix.conditions;
  for (std::size_t g = 0; g < matrix.genes.size(); ++g) {
    std::size_t missing = 0;
    for (std::size_t j = 0; j < c; ++j) missing += std::isnan(matrix.at(g, j)) ? 1 : 0;
    if (static_cast<double>(missing) < limit || missing == 0) {
      kept.genes.push_back(matrix.genes[g]);
      kept.values.insert(kept.values.end(), matrix.values.begin() + static_cast<std::ptrdiff_t>(g * c),
                         matrix.values.begin() + static_cast<std::ptrdiff_t>((g + 1) * c));
    } else {
      out.dropped_genes.push_back(matrix.genes[g]);
    }
  }
  out.imputed_cells = impute_knn(kept, options.knn_k);

  // Centre and normalise each row so a correlation is one dot product.
  const std::size_t n = kept.genes.size();
  std::vector<double> z(n * c);
  std::vector<bool> constant(n, false);
  for (std::size_t g = 0; g < n; ++g) {
    double mean = 0;
    for (std::size_t j = 0; j < c; ++j) mean += kept.at(g, j);
    mean /= static_cast<double>(c);
    double ss = 0;
    for (std::size_t j = 0; j < c; ++j) {
      z[g * c + j] = kept.at(g, j) - mean;
      ss += z[g * c + j] * z[g * c + j];
    }
    if (ss == 0) {
      constant[g] = true;
      continue;
    }
    const double norm = std::sqrt(ss);
    for (std::size_t j = 0; j < c; ++j) z[g * c + j] /= norm;
  }
  out.correlations = ScoreMatrix(kept.genes, MatrixMetadata{"pearson", "expression", "", ""});
  for (std::size_t a = 0; a < n; ++a) {
    if (constant[a]) continue;
    for (std::size_t b = a; b < n; ++b) {
      if (constant[b]) continue;
      double dot = 0;
      for (std::size_t j = 0; j < c; ++j) dot += z[a * c + j] * z[b * c + j];
      out.correlations.set(a, b, std::clamp(dot, -1.0, 1.0));
    }
  }
  return out;
}

}  // namespace gosim
