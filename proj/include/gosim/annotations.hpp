#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gosim/ontology.hpp"

namespace gosim {

struct AnnotationRecord {
  std::string gene;  // systematic name, see parse_gaf
  TermId term;       // canonical id after alt_id resolution
  std::string evidence;
  std::string qualifier;
  std::size_t line = 0;
};

struct GafWarning {
  std::size_t line = 0;
  std::string message;
};

struct GafParseResult {
  std::vector<AnnotationRecord> records;
  std::vector<GafWarning> warnings;
  std::size_t comment_lines = 0;
  std::size_t negated_dropped = 0;
  std::size_t unknown_terms = 0;
  std::size_t obsolete_terms = 0;
};

// GAF 2.x. Genes are keyed by the first synonym in column 11, falling back
// to the symbol in column 3. NOT-qualified lines are dropped; ids are mapped
// through alt_id aliases; unknown or obsolete ids are kept with a warning.
// Throws MalformedLine.
GafParseResult parse_gaf(std::istream& in, const Ontology& ontology);

struct CorpusOptions {
  std::set<std::string> drop_evidence{"IEA"};
  // Strips root annotations and drops genes left with nothing.
  bool drop_root_only = true;
};

struct CorpusBuildStats {
  std::size_t records_in = 0;
  std::size_t other_namespace = 0;  // term not in this DAG (other branch, unknown, obsolete)
  std::size_t evidence_dropped = 0;
  std::size_t duplicates = 0;
  std::size_t root_annotations_dropped = 0;
  std::size_t root_only_genes_dropped = 0;
};

// Per-namespace gene -> direct terms, with distinct-gene cumulative counts.
// Keeps a pointer to its DAG, which must outlive the corpus.
class AnnotationCorpus {
public:
  // Throws EmptyCorpus when no gene carries an annotation.
  static AnnotationCorpus from_direct(const OntologyDag& dag,
                                      const std::map<std::string, std::set<TermIndex>>& direct);

  const OntologyDag& dag() const { return *dag_; }

  // Sorted by name.
  const std::vector<std::string>& genes() const { return genes_; }
  std::optional<std::size_t> find_gene(const std::string& gene) const;
  // Sorted term indices.
  std::span<const TermIndex> direct(std::size_t gene) const { return direct_[gene]; }

  std::uint64_t direct_count(TermIndex t) const { return direct_count_[t]; }
  std::uint64_t cumulative_count(TermIndex t) const { return cumulative_[t]; }
  std::uint64_t total() const { return cumulative_[dag_->root()]; }
  std::size_t annotation_count() const;

  const CorpusBuildStats& stats() const { return stats_; }
  // SHA-256 over the canonical gene/term listing.
  std::string fingerprint() const;

  void write_tsv(std::ostream& out) const;
  static AnnotationCorpus read_tsv(std::istream& in, const OntologyDag& dag);

private:
  friend AnnotationCorpus build_corpus(std::span<const AnnotationRecord>, const OntologyDag&,
                                       const CorpusOptions&);

  const OntologyDag* dag_ = nullptr;
  std::vector<std::string> genes_;
  std::vector<std::vector<TermIndex>> direct_;
  std::vector<std::uint64_t> direct_count_;
  std::vector<std::uint64_t> cumulative_;
  CorpusBuildStats stats_;
};

// Throws EmptyCorpus.
AnnotationCorpus build_corpus(std::span<const AnnotationRecord> records, const OntologyDag& dag,
                              const CorpusOptions& options = {});

}  // namespace gosim
