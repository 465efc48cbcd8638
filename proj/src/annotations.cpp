#include "gosim/annotations.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "gosim/digest.hpp"
#include "gosim/error.hpp"
#include "text.hpp"

namespace gosim {

namespace {

constexpr std::size_t kGafColumns = 15;

bool is_negated(std::string_view qualifier) {
  for (auto q : text::split(qualifier, '|')) {
    if (text::trim(q) == "NOT") return true;
  }
  return false;
}

}  // namespace

GafParseResult parse_gaf(std::istream& in, const Ontology& ontology) {
  GafParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (text::trim(view).empty()) continue;
    if (view.front() == '!') {
      ++result.comment_lines;
      continue;
    }
    auto fields = text::split(view, '\t');
    if (fields.size() < kGafColumns) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": expected " +
                                                std::to_string(kGafColumns) + " columns, found " +
                                                std::to_string(fields.size()));
    }
    if (is_negated(fields[3])) {
      ++result.negated_dropped;
      continue;
    }

    AnnotationRecord rec;
    rec.line = line_no;
    rec.qualifier = std::string(text::trim(fields[3]));
    rec.evidence = std::string(text::trim(fields[6]));
    auto synonyms = text::split(fields[10], '|');
    rec.gene = std::string(text::trim(synonyms.front()));
    if (rec.gene.empty()) rec.gene = std::string(text::trim(fields[2]));
    if (rec.gene.empty()) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": no gene name");
    }
    TermId raw(std::string(text::trim(fields[4])));
    if (raw.value.empty()) {
      throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": empty term id");
    }

    if (auto canonical = ontology.canonical(raw)) {
      rec.term = *canonical;
      if (ontology.is_obsolete(rec.term)) {
        ++result.obsolete_terms;
        result.warnings.push_back({line_no, "obsolete term " + rec.term.value});
      }
    } else {
      rec.term = raw;
      ++result.unknown_terms;
      result.warnings.push_back({line_no, "unknown term " + raw.value});
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::optional<std::size_t> AnnotationCorpus::find_gene(const std::string& gene) const {
  auto it = std::lower_bound(genes_.begin(), genes_.end(), gene);
  if (it == genes_.end() || *it != gene) return std::nullopt;
  return static_cast<std::size_t>(it - genes_.begin());
}

std::size_t AnnotationCorpus::annotation_count() const {
  std::size_t n = 0;
  for (const auto& d : direct_) n += d.size();
  return n;
}

AnnotationCorpus AnnotationCorpus::from_direct(const OntologyDag& dag,
                                               const std::map<std::string, std::set<TermIndex>>& direct) {
  AnnotationCorpus corpus;
  corpus.dag_ = &dag;
  for (const auto& [gene, terms] : direct) {
    if (terms.empty()) continue;
    corpus.genes_.push_back(gene);
    corpus.direct_.emplace_back(terms.begin(), terms.end());
  }
  if (corpus.genes_.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no annotated genes in namespace " + dag.ns().name);
  }

  const std::size_t n_terms = dag.size();
  const std::size_t n_genes = corpus.genes_.size();
  const std::size_t words = (n_genes + 63) / 64;
  corpus.direct_count_.assign(n_terms, 0);

  // Distinct-gene sets, pushed from each term to its parents in reverse
  // topological order, so a gene reached through two paths counts once.
  std::vector<std::uint64_t> bits(n_terms * words, 0);
  for (std::size_t g = 0; g < n_genes; ++g) {
    for (TermIndex t : corpus.direct_[g]) {
      ++corpus.direct_count_[t];
      bits[t * words + g / 64] |= std::uint64_t{1} << (g % 64);
    }
  }
  auto topo = dag.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const TermIndex t = *it;
    for (TermIndex p : dag.parents(t)) {
      for (std::size_t w = 0; w < words; ++w) bits[p * words + w] |= bits[t * words + w];
    }
  }
  corpus.cumulative_.assign(n_terms, 0);
  for (std::size_t t = 0; t < n_terms; ++t) {
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += static_cast<std::uint64_t>(__builtin_popcountll(bits[t * words + w]));
    corpus.cumulative_[t] = c;
  }
  return corpus;
}

AnnotationCorpus build_corpus(std::span<const AnnotationRecord> records, const OntologyDag& dag,
                              const CorpusOptions& options) {
  CorpusBuildStats stats;
  stats.records_in = records.size();
  std::map<std::string, std::set<TermIndex>> direct;
  for (const auto& rec : records) {
    auto t = dag.find(rec.term);
    if (!t) {
      ++stats.other_namespace;
      continue;
    }
    if (options.drop_evidence.count(rec.evidence)) {
      ++stats.evidence_dropped;
      continue;
    }
    if (!direct[rec.gene].insert(*t).second) ++stats.duplicates;
  }
  if (options.drop_root_only) {
    for (auto it = direct.begin(); it != direct.end();) {
      if (it->second.erase(dag.root())) {
        ++stats.root_annotations_dropped;
        if (it->second.empty()) ++stats.root_only_genes_dropped;
      }
      it = it->second.empty() ? direct.erase(it) : std::next(it);
    }
  }
  auto corpus = AnnotationCorpus::from_direct(dag, direct);
  corpus.stats_ = stats;
  return corpus;
}

void AnnotationCorpus::write_tsv(std::ostream& out) const {
  out << "# namespace=" << dag_->ns().name << '\n';
  out << "# genes=" << genes_.size() << " annotations=" << annotation_count() << " total=" << total() << '\n';
  for (std::size_t g = 0; g < genes_.size(); ++g) {
    for (TermIndex t : direct_[g]) out << genes_[g] << '\t' << dag_->id(t).value << '\n';
  }
}

AnnotationCorpus AnnotationCorpus::read_tsv(std::istream& in, const OntologyDag& dag) {
  std::map<std::string, std::set<TermIndex>> direct;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::strip_cr(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorCode::MalformedLine, "corpus line " + std::to_string(line_no) + ": expected gene<TAB>term");
    }
    direct[std::string(fields[0])].insert(dag.index_of(TermId(std::string(fields[1]))));
  }
  return from_direct(dag, direct);
}

std::string AnnotationCorpus::fingerprint() const {
  std::ostringstream out;
  write_tsv(out);
  return sha256_hex(out.str());
}

}  // namespace gosim
