#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gosim {

struct TermId {
  std::string value;

  TermId() = default;
  explicit TermId(std::string v) : value(std::move(v)) {}

  auto operator<=>(const TermId&) const = default;
  bool operator==(const TermId&) const = default;
};

// Dense per-namespace term index. Indices follow lexicographic TermId order,
// so comparing indices is the same as comparing ids.
using TermIndex = std::uint32_t;

enum class Relation { is_a, part_of };

enum class NamespaceKind { biological_process, molecular_function, cellular_component, other };

struct Namespace {
  NamespaceKind kind = NamespaceKind::other;
  std::string name;  // as written in the OBO file

  static Namespace from_name(std::string_view name);
  // BP / MF / CC for the GO branches, the raw name otherwise.
  std::string short_name() const;
  // Accepts a short name (BP) or the full OBO name.
  bool matches(std::string_view query) const;

  bool operator==(const Namespace& other) const { return name == other.name; }
};

struct ParentEdge {
  TermId parent;
  Relation relation = Relation::is_a;
};

struct Term {
  TermId id;
  std::string name;
  std::string ns;
  std::vector<TermId> alt_ids;
  std::vector<ParentEdge> parents;
  bool obsolete = false;
};

// Immutable single-namespace term graph. Edges point from child to parent.
class OntologyDag {
public:
  const Namespace& ns() const { return ns_; }
  std::size_t size() const { return terms_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const Term& term(TermIndex t) const { return terms_[t]; }
  const TermId& id(TermIndex t) const { return terms_[t].id; }
  std::span<const Term> terms() const { return terms_; }

  std::optional<TermIndex> find(const TermId& id) const;
  bool contains(const TermId& id) const { return find(id).has_value(); }
  // Throws UnknownTerm.
  TermIndex index_of(const TermId& id) const;

  TermIndex root() const { return root_; }
  std::span<const TermIndex> parents(TermIndex t) const { return parents_[t]; }
  std::span<const TermIndex> children(TermIndex t) const { return children_[t]; }
  // Root first; every parent precedes its children.
  std::span<const TermIndex> topological_order() const { return topo_; }

private:
  friend class DagBuilder;

  Namespace ns_;
  std::vector<Term> terms_;
  std::unordered_map<std::string, TermIndex> index_;
  std::vector<std::vector<TermIndex>> parents_;
  std::vector<std::vector<TermIndex>> children_;
  std::vector<TermIndex> topo_;
  TermIndex root_ = 0;
  std::size_t edge_count_ = 0;
};

struct OboLoadSummary {
  std::size_t term_stanzas = 0;
  std::size_t other_stanzas = 0;
  std::size_t obsolete_terms = 0;
  std::size_t is_a_edges = 0;
  std::size_t part_of_edges = 0;
  std::size_t regulates_dropped = 0;
  std::size_t other_relationships_dropped = 0;
  std::size_t cross_namespace_dropped = 0;
  std::size_t unknown_tags = 0;
};

// Everything recovered from one OBO document.
struct Ontology {
  std::vector<OntologyDag> dags;  // one per namespace, sorted by namespace name
  std::vector<Term> obsolete;     // retained for diagnostics, never part of a DAG
  std::unordered_map<std::string, TermId> aliases;  // alt_id -> canonical id
  OboLoadSummary summary;

  // Resolves alt ids; returns nullopt for ids that are not known at all.
  std::optional<TermId> canonical(const TermId& id) const;
  bool is_obsolete(const TermId& id) const;
  const OntologyDag* dag_of(const TermId& id) const;
  const OntologyDag* find_namespace(std::string_view name) const;
};

// Throws Error with CycleDetected, MissingRoot, DanglingParent or MalformedStanza.
Ontology parse_obo(std::istream& in);
Ontology parse_obo_text(std::string_view text);

// Canonical OBO: stanzas sorted by id, tags in a fixed order.
void write_obo(std::ostream& out, const Ontology& ontology);

}  // namespace gosim

template <>
struct std::hash<gosim::TermId> {
  std::size_t operator()(const gosim::TermId& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
