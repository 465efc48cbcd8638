#include "gosim/proteinsim.hpp"

#include <bit>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "text.hpp"

namespace gosim {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::maximum: return "maximum";
    case Strategy::average: return "average";
    case Strategy::best_match_average: return "best_match_average";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "maximum" || name == "max") return Strategy::maximum;
  if (name == "average" || name == "avg") return Strategy::average;
  if (name == "best_match_average" || name == "bma") return Strategy::best_match_average;
  return std::nullopt;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

TermPairCache::TermPairCache() {
  shards_.reserve(std::size_t{1} << kShardBits);
  for (std::size_t i = 0; i < (std::size_t{1} << kShardBits); ++i) shards_.push_back(std::make_unique<Shard>());
}

std::size_t TermPairCache::size() const {
  std::size_t n = 0;
  for (const auto& s : shards_) {
    std::shared_lock lock(s->mutex);
    n += s->values.size();
  }
  return n;
}

// ---------------------------------------------------------------------------
// ScoreMatrix

ScoreMatrix::ScoreMatrix(std::vector<std::string> genes, MatrixMetadata metadata)
    : genes_(std::move(genes)), metadata_(std::move(metadata)) {
  const std::size_t n = genes_.size();
  values_.assign(n * (n + 1) / 2, std::numeric_limits<double>::quiet_NaN());
  reindex();
}

void ScoreMatrix::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (!index_.emplace(genes_[i], i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate gene " + genes_[i] + " in matrix");
    }
  }
}

std::optional<std::size_t> ScoreMatrix::find(std::string_view gene) const {
  auto it = index_.find(std::string(gene));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> ScoreMatrix::value(std::string_view g1, std::string_view g2) const {
  auto i = find(g1), j = find(g2);
  if (!i || !j || !has(*i, *j)) return std::nullopt;
  return at(*i, *j);
}

std::size_t ScoreMatrix::defined_pairs() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) n += has(i, j) ? 1 : 0;
  }
  return n;
}

void ScoreMatrix::write_tsv(std::ostream& out) const {
  out << "# gosim score matrix\n";
  out << "# measure=" << metadata_.measure << '\n';
  out << "# strategy=" << metadata_.strategy << '\n';
  out << "# namespace=" << metadata_.ns << '\n';
  out << "# fingerprint=" << metadata_.fingerprint << '\n';
  out << "# genes=" << genes_.size() << '\n';
  out << "gene1\tgene2\tvalue\n";
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i; j < size(); ++j) {
      if (!has(i, j)) continue;
      const auto& a = genes_[i];
      const auto& b = genes_[j];
      out << (a <= b ? a : b) << '\t' << (a <= b ? b : a) << '\t' << text::exact(at(i, j)) << '\n';
    }
  }
}

ScoreMatrix ScoreMatrix::read_tsv(std::istream& in) {
  MatrixMetadata meta;
  struct Cell {
    std::string a, b;
    double v;
  };
  std::vector<Cell> cells;
  std::set<std::string> genes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      auto body = text::trim(view.substr(1));
      auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      auto key = body.substr(0, eq);
      std::string value(body.substr(eq + 1));
      if (key == "measure") meta.measure = value;
      else if (key == "strategy") meta.strategy = value;
      else if (key == "namespace") meta.ns = value;
      else if (key == "fingerprint") meta.fingerprint = value;
      continue;
    }
    auto fields = text::split(view, '\t');
    if (fields.size() < 3) {
      throw Error(ErrorCode::MalformedLine, "matrix line " + std::to_string(line_no) + ": expected 3 columns");
    }
    if (fields[0] == "gene1" && fields[2] == "value") continue;
    auto v = text::parse_double(fields[2]);
    if (!v) throw Error(ErrorCode::MalformedLine, "matrix line " + std::to_string(line_no) + ": bad value");
    cells.push_back({std::string(fields[0]), std::string(fields[1]), *v});
    genes.insert(cells.back().a);
    genes.insert(cells.back().b);
  }
  ScoreMatrix m(std::vector<std::string>(genes.begin(), genes.end()), meta);
  for (const auto& c : cells) m.set(*m.find(c.a), *m.find(c.b), c.v);
  return m;
}

namespace {
constexpr std::string_view kBinaryMagic = "GOSIMMAT1\n";
}

void ScoreMatrix::write_binary(std::ostream& out) const {
  static_assert(std::endian::native == std::endian::little, "binary matrices are little-endian");
  nlohmann::json header = {
      {"format", "float64-le upper triangle with diagonal, row-major"},
      {"measure", metadata_.measure},
      {"strategy", metadata_.strategy},
      {"namespace", metadata_.ns},
      {"fingerprint", metadata_.fingerprint},
      {"genes", genes_},
      {"cells", values_.size()},
  };
  out << kBinaryMagic << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

ScoreMatrix ScoreMatrix::read_binary(std::istream& in) {
  std::string magic(kBinaryMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (magic != kBinaryMagic) throw Error(ErrorCode::MalformedLine, "not a binary score matrix");
  std::string header_line;
  std::getline(in, header_line);
  ScoreMatrix m;
  std::size_t cells = 0;
  try {
    auto header = nlohmann::json::parse(header_line);
    MatrixMetadata meta{header.at("measure"), header.at("strategy"), header.at("namespace"),
                        header.at("fingerprint")};
    m = ScoreMatrix(header.at("genes").get<std::vector<std::string>>(), meta);
    cells = header.at("cells").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedLine, std::string("binary matrix header: ") + e.what());
  }
  if (cells != m.values_.size()) {
    throw Error(ErrorCode::MalformedLine, "binary matrix cell count does not match gene count");
  }
  in.read(reinterpret_cast<char*>(m.values_.data()), static_cast<std::streamsize>(m.values_.size() * sizeof(double)));
  if (!in) throw Error(ErrorCode::MalformedLine, "binary matrix truncated");
  return m;
}

// ---------------------------------------------------------------------------

ProteinPairScore score_gene_pair(const NamespaceModel& model, const std::string& gene1, const std::string& gene2,
                                 Measure measure, Strategy strategy) {
  const auto& corpus = model.corpus();
  auto terms_of = [&](const std::string& gene) {
    auto g = corpus.find_gene(gene);
    if (!g) throw Error(ErrorCode::EmptySet, gene + " has no annotations in " + model.dag().ns().name);
    return corpus.direct(*g);
  };
  const auto sim = model.similarity();
  ProteinPairScore result;
  result.gene1 = std::min(gene1, gene2);
  result.gene2 = std::max(gene1, gene2);
  result.ns = model.dag().ns().name;
  result.measure = measure;
  result.strategy = strategy;
  result.value = protein_sim(terms_of(gene1), terms_of(gene2), strategy,
                             [&](TermIndex a, TermIndex b) { return sim(measure, a, b); });
  return result;
}

AllPairsResult all_pairs(std::span<const std::string> genes, const NamespaceModel& model, Measure measure,
                         Strategy strategy, const AllPairsOptions& options) {
  const auto& corpus = model.corpus();
  const auto sim = model.similarity();
  const std::size_t n = genes.size();

  MatrixMetadata meta{std::string(to_string(measure)), std::string(to_string(strategy)), model.dag().ns().short_name(),
                      corpus.fingerprint()};
  AllPairsResult result{ScoreMatrix(std::vector<std::string>(genes.begin(), genes.end()), std::move(meta))};

  std::vector<std::span<const TermIndex>> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto g = corpus.find_gene(genes[i])) {
      terms[i] = corpus.direct(*g);
    } else {
      ++result.missing_genes;
    }
  }

  TermPairCache cache;
  const unsigned workers = std::min<unsigned>(resolve_workers(options.workers), std::max<std::size_t>(n, 1));
  struct Tally {
    std::size_t excluded = 0;
    std::uint64_t hits = 0, misses = 0;
    std::exception_ptr failure;
  };
  std::vector<Tally> tallies(workers);

  // Rows are dealt round-robin; each cell is written by exactly one worker.
  auto run = [&](unsigned w) {
    Tally& tally = tallies[w];
    auto score = [&](TermIndex a, TermIndex b) {
      auto [v, hit] = cache.get_or_compute(a, b, [&] {
        try {
          return sim(measure, a, b);
        } catch (const Error&) {
          return std::numeric_limits<double>::quiet_NaN();
        }
      });
      ++(hit ? tally.hits : tally.misses);
      if (std::isnan(v)) throw Error(ErrorCode::InvalidArgument, "term pair has no defined similarity");
      return v;
    };
    try {
      for (std::size_t i = w; i < n; i += workers) {
        for (std::size_t j = i; j < n; ++j) {
          if (terms[i].empty() || terms[j].empty()) {
            if (j != i) ++tally.excluded;
            continue;
          }
          try {
            result.matrix.set(i, j, protein_sim(terms[i], terms[j], strategy, score));
          } catch (const Error&) {
            if (j != i) ++tally.excluded;
          }
        }
      }
    } catch (...) {
      tally.failure = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& t : tallies) {
    if (t.failure) std::rethrow_exception(t.failure);
    result.excluded_cells += t.excluded;
    result.cache_hits += t.hits;
    result.cache_misses += t.misses;
  }
  return result;
}

}  // namespace gosim
