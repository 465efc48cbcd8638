#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gosim/annotations.hpp"
#include "gosim/graph_index.hpp"
#include "gosim/infocontent.hpp"
#include "gosim/ontology.hpp"
#include "gosim/termsim.hpp"

namespace gosim {

// DAG, structural index, corpus and IC table for one namespace.
class NamespaceModel {
public:
  NamespaceModel(const OntologyDag& dag, AnnotationCorpus corpus, DepthMode mode = DepthMode::longest_path);

  const OntologyDag& dag() const { return *dag_; }
  const DagIndex& index() const { return index_; }
  const AnnotationCorpus& corpus() const { return corpus_; }
  const IcTable& ic() const { return ic_; }
  TermSimilarity similarity() const { return TermSimilarity(index_, ic_); }

private:
  const OntologyDag* dag_;
  DagIndex index_;
  AnnotationCorpus corpus_;
  IcTable ic_;
};

// All namespaces of one ontology with their corpora. Owns the ontology so
// the per-namespace references stay valid when the model is moved.
class SemanticModel {
public:
  using CorpusFactory = std::function<std::optional<AnnotationCorpus>(const OntologyDag&)>;

  // Namespaces for which the factory yields nothing are left out.
  static SemanticModel assemble(Ontology ontology, const CorpusFactory& make_corpus,
                                DepthMode mode = DepthMode::longest_path);
  // Builds every namespace's corpus from the same records; namespaces whose
  // corpus comes out empty are skipped.
  static SemanticModel build(Ontology ontology, std::span<const AnnotationRecord> records,
                             const CorpusOptions& options = {}, DepthMode mode = DepthMode::longest_path);

  const Ontology& ontology() const { return *ontology_; }
  std::span<const NamespaceModel> namespaces() const { return namespaces_; }
  const NamespaceModel* find(std::string_view ns) const;
  // Throws InvalidArgument when the namespace has no model.
  const NamespaceModel& require(std::string_view ns) const;

  // Resolves alt ids; throws UnknownTerm or DifferentNamespace.
  SimilarityScore term_similarity(Measure m, const TermId& t1, const TermId& t2) const;

private:
  std::unique_ptr<Ontology> ontology_;
  std::vector<NamespaceModel> namespaces_;
};

}  // namespace gosim
