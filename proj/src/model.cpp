#include "gosim/model.hpp"

#include "gosim/error.hpp"

namespace gosim {

NamespaceModel::NamespaceModel(const OntologyDag& dag, AnnotationCorpus corpus, DepthMode mode)
    : dag_(&dag), index_(dag, mode), corpus_(std::move(corpus)), ic_(IcTable::from_corpus(corpus_)) {}

SemanticModel SemanticModel::assemble(Ontology ontology, const CorpusFactory& make_corpus, DepthMode mode) {
  SemanticModel model;
  model.ontology_ = std::make_unique<Ontology>(std::move(ontology));
  for (const auto& dag : model.ontology_->dags) {
    if (auto corpus = make_corpus(dag)) model.namespaces_.emplace_back(dag, std::move(*corpus), mode);
  }
  return model;
}

SemanticModel SemanticModel::build(Ontology ontology, std::span<const AnnotationRecord> records,
                                   const CorpusOptions& options, DepthMode mode) {
  return assemble(
      std::move(ontology),
      [&](const OntologyDag& dag) -> std::optional<AnnotationCorpus> {
        try {
          return build_corpus(records, dag, options);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::EmptyCorpus) return std::nullopt;
          throw;
        }
      },
      mode);
}

const NamespaceModel* SemanticModel::find(std::string_view ns) const {
  for (const auto& m : namespaces_) {
    if (m.dag().ns().matches(ns)) return &m;
  }
  return nullptr;
}

const NamespaceModel& SemanticModel::require(std::string_view ns) const {
  if (const auto* m = find(ns)) return *m;
  throw Error(ErrorCode::InvalidArgument, "no annotated namespace named " + std::string(ns));
}

SimilarityScore SemanticModel::term_similarity(Measure m, const TermId& t1, const TermId& t2) const {
  auto locate = [&](const TermId& raw) -> std::pair<TermId, const OntologyDag*> {
    auto id = ontology_->canonical(raw);
    const OntologyDag* dag = id ? ontology_->dag_of(*id) : nullptr;
    if (dag == nullptr) throw Error(ErrorCode::UnknownTerm, raw.value + " is not a live term");
    return {*id, dag};
  };
  auto [id1, dag1] = locate(t1);
  auto [id2, dag2] = locate(t2);
  if (dag1 != dag2) {
    throw Error(ErrorCode::DifferentNamespace,
                id1.value + " (" + dag1->ns().name + ") vs " + id2.value + " (" + dag2->ns().name + ")");
  }
  const NamespaceModel* ns = find(dag1->ns().name);
  if (ns == nullptr) {
    throw Error(ErrorCode::UnannotatedTerm, "namespace " + dag1->ns().name + " has no annotations");
  }
  return ns->similarity().score(m, id1, id2);
}

}  // namespace gosim
