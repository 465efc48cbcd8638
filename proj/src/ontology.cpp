#include "gosim/ontology.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "gosim/error.hpp"
#include "text.hpp"

namespace gosim {

Namespace Namespace::from_name(std::string_view name) {
  Namespace ns;
  ns.name = std::string(name);
  if (name == "biological_process") {
    ns.kind = NamespaceKind::biological_process;
  } else if (name == "molecular_function") {
    ns.kind = NamespaceKind::molecular_function;
  } else if (name == "cellular_component") {
    ns.kind = NamespaceKind::cellular_component;
  }
  return ns;
}

std::string Namespace::short_name() const {
  switch (kind) {
    case NamespaceKind::biological_process: return "BP";
    case NamespaceKind::molecular_function: return "MF";
    case NamespaceKind::cellular_component: return "CC";
    case NamespaceKind::other: break;
  }
  return name;
}

bool Namespace::matches(std::string_view query) const {
  return query == name || query == short_name();
}

std::optional<TermIndex> OntologyDag::find(const TermId& id) const {
  auto it = index_.find(id.value);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TermIndex OntologyDag::index_of(const TermId& id) const {
  if (auto t = find(id)) return *t;
  throw Error(ErrorCode::UnknownTerm, id.value + " is not in namespace " + ns_.name);
}

std::optional<TermId> Ontology::canonical(const TermId& id) const {
  if (dag_of(id) != nullptr || is_obsolete(id)) return id;
  if (auto it = aliases.find(id.value); it != aliases.end()) return it->second;
  return std::nullopt;
}

bool Ontology::is_obsolete(const TermId& id) const {
  auto it = std::lower_bound(obsolete.begin(), obsolete.end(), id,
                             [](const Term& t, const TermId& v) { return t.id < v; });
  return it != obsolete.end() && it->id == id;
}

const OntologyDag* Ontology::dag_of(const TermId& id) const {
  for (const auto& dag : dags) {
    if (dag.contains(id)) return &dag;
  }
  return nullptr;
}

const OntologyDag* Ontology::find_namespace(std::string_view name) const {
  for (const auto& dag : dags) {
    if (dag.ns().matches(name)) return &dag;
  }
  return nullptr;
}

namespace {

bool is_regulates(std::string_view rel) {
  return rel == "regulates" || rel == "positively_regulates" || rel == "negatively_regulates";
}

// Drops a trailing "! comment" and "{qualifiers}" from a tag value.
std::string_view strip_value(std::string_view value) {
  if (auto bang = value.find(" !"); bang != std::string_view::npos) value = value.substr(0, bang);
  if (!value.empty() && value.front() == '!') value = {};
  if (auto brace = value.find(" {"); brace != std::string_view::npos) value = value.substr(0, brace);
  return text::trim(value);
}

struct RawTerm {
  Term term;
  std::size_t line = 0;
};

std::string join_ids(const std::vector<TermId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id.value;
  }
  return out;
}

}  // namespace

class DagBuilder {
public:
  static OntologyDag build(const std::string& ns_name, std::vector<Term> terms) {
    OntologyDag dag;
    dag.ns_ = Namespace::from_name(ns_name);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.id < b.id; });
    dag.terms_ = std::move(terms);
    const std::size_t n = dag.terms_.size();
    for (TermIndex i = 0; i < n; ++i) dag.index_.emplace(dag.terms_[i].id.value, i);

    dag.parents_.assign(n, {});
    dag.children_.assign(n, {});
    for (TermIndex i = 0; i < n; ++i) {
      auto& term = dag.terms_[i];
      std::sort(term.parents.begin(), term.parents.end(), [](const ParentEdge& a, const ParentEdge& b) {
        return std::tie(a.parent, a.relation) < std::tie(b.parent, b.relation);
      });
      dag.edge_count_ += term.parents.size();
      for (const auto& edge : term.parents) {
        const TermIndex p = dag.index_.at(edge.parent.value);
        if (p == i) throw Error(ErrorCode::CycleDetected, "self edge on " + term.id.value);
        if (std::find(dag.parents_[i].begin(), dag.parents_[i].end(), p) == dag.parents_[i].end()) {
          dag.parents_[i].push_back(p);
          dag.children_[p].push_back(i);
        }
      }
    }
    for (auto& c : dag.children_) std::sort(c.begin(), c.end());

    // Kahn's algorithm, parents before children.
    std::vector<std::size_t> pending(n);
    std::deque<TermIndex> ready;
    std::vector<TermId> roots;
    for (TermIndex i = 0; i < n; ++i) {
      pending[i] = dag.parents_[i].size();
      if (pending[i] == 0) {
        ready.push_back(i);
        roots.push_back(dag.terms_[i].id);
      }
    }
    while (!ready.empty()) {
      TermIndex t = ready.front();
      ready.pop_front();
      dag.topo_.push_back(t);
      for (TermIndex c : dag.children_[t]) {
        if (--pending[c] == 0) ready.push_back(c);
      }
    }
    if (dag.topo_.size() != n) {
      throw Error(ErrorCode::CycleDetected, "cycle through " + join_ids(find_cycle(dag, pending)));
    }
    if (roots.size() != 1) {
      throw Error(ErrorCode::MissingRoot, "namespace " + ns_name + " has " + std::to_string(roots.size()) +
                                              " root candidates: " + join_ids(roots));
    }
    dag.root_ = dag.topo_.front();
    return dag;
  }

private:
  // Walks parent edges among terms Kahn could not order until a term repeats.
  static std::vector<TermId> find_cycle(const OntologyDag& dag, const std::vector<std::size_t>& pending) {
    const std::size_t n = dag.terms_.size();
    std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
    std::vector<TermIndex> stack;
    std::vector<TermId> cycle;
    auto dfs = [&](auto&& self, TermIndex t) -> bool {
      state[t] = 1;
      stack.push_back(t);
      for (TermIndex p : dag.parents_[t]) {
        if (pending[p] == 0) continue;
        if (state[p] == 1) {
          auto it = std::find(stack.begin(), stack.end(), p);
          for (; it != stack.end(); ++it) cycle.push_back(dag.terms_[*it].id);
          return true;
        }
        if (state[p] == 0 && self(self, p)) return true;
      }
      stack.pop_back();
      state[t] = 2;
      return false;
    };
    for (TermIndex i = 0; i < n; ++i) {
      if (pending[i] != 0 && state[i] == 0 && dfs(dfs, i)) break;
    }
    std::sort(cycle.begin(), cycle.end());
    return cycle;
  }
};

Ontology parse_obo(std::istream& in) {
  Ontology result;
  auto& summary = result.summary;

  std::vector<RawTerm> raw;
  std::string default_namespace;
  enum class Section { header, term, other } section = Section::header;
  std::size_t line_no = 0;
  std::string line;

  auto finish_term = [&]() {
    if (section != Section::term) return;
    auto& current = raw.back();
    if (current.term.id.value.empty()) {
      throw Error(ErrorCode::MalformedStanza, "line " + std::to_string(current.line) + ": [Term] without id");
    }
    if (current.term.ns.empty()) current.term.ns = default_namespace;
    if (current.term.ns.empty()) {
      throw Error(ErrorCode::MalformedStanza,
                  "line " + std::to_string(current.line) + ": " + current.term.id.value + " has no namespace");
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = text::trim(line);
    if (view.empty() || view.front() == '!') continue;

    if (view.front() == '[') {
      if (view.back() != ']') {
        throw Error(ErrorCode::MalformedStanza, "line " + std::to_string(line_no) + ": bad stanza header");
      }
      finish_term();
      if (view == "[Term]") {
        section = Section::term;
        ++summary.term_stanzas;
        raw.push_back(RawTerm{{}, line_no});
      } else {
        section = Section::other;
        ++summary.other_stanzas;
      }
      continue;
    }

    auto colon = view.find(':');
    if (colon == std::string_view::npos) {
      if (section == Section::term) {
        throw Error(ErrorCode::MalformedStanza, "line " + std::to_string(line_no) + ": expected 'tag: value'");
      }
      continue;
    }
    std::string_view tag = text::trim(view.substr(0, colon));
    std::string_view value = text::trim(view.substr(colon + 1));

    if (section == Section::header) {
      if (tag == "default-namespace") default_namespace = std::string(strip_value(value));
      continue;
    }
    if (section == Section::other) continue;

    Term& term = raw.back().term;
    auto malformed = [&](const std::string& why) {
      return Error(ErrorCode::MalformedStanza, "line " + std::to_string(line_no) + ": " + why);
    };
    if (tag == "id") {
      auto id = strip_value(value);
      if (id.empty()) throw malformed("empty id");
      term.id = TermId(std::string(id));
    } else if (tag == "name") {
      term.name = std::string(value);
    } else if (tag == "namespace") {
      term.ns = std::string(strip_value(value));
    } else if (tag == "alt_id") {
      auto id = strip_value(value);
      if (id.empty()) throw malformed("empty alt_id");
      term.alt_ids.emplace_back(std::string(id));
    } else if (tag == "is_a") {
      auto id = strip_value(value);
      if (id.empty()) throw malformed("empty is_a");
      term.parents.push_back({TermId(std::string(id)), Relation::is_a});
    } else if (tag == "relationship") {
      auto fields = text::split_ws(strip_value(value));
      if (fields.size() < 2) throw malformed("relationship needs a type and a target");
      if (fields[0] == "part_of") {
        term.parents.push_back({TermId(std::string(fields[1])), Relation::part_of});
      } else if (is_regulates(fields[0])) {
        ++summary.regulates_dropped;
      } else {
        ++summary.other_relationships_dropped;
      }
    } else if (tag == "is_obsolete") {
      term.obsolete = strip_value(value) == "true";
    } else {
      ++summary.unknown_tags;
    }
  }
  finish_term();

  // Index every stanza by id, canonical and alternate. Terms are moved out
  // of `raw` below, so the index keeps its own copy of what edges need.
  struct StanzaInfo {
    TermId id;
    std::string ns;
    bool obsolete = false;
  };
  std::map<std::string, StanzaInfo> by_id;
  for (const auto& r : raw) {
    if (!by_id.emplace(r.term.id.value, StanzaInfo{r.term.id, r.term.ns, r.term.obsolete}).second) {
      throw Error(ErrorCode::MalformedStanza,
                  "line " + std::to_string(r.line) + ": duplicate id " + r.term.id.value);
    }
  }
  for (const auto& r : raw) {
    for (const auto& alt : r.term.alt_ids) {
      if (!by_id.count(alt.value)) result.aliases.emplace(alt.value, r.term.id);
    }
  }
  auto resolve = [&](const TermId& id) -> const StanzaInfo* {
    if (auto it = by_id.find(id.value); it != by_id.end()) return &it->second;
    if (auto it = result.aliases.find(id.value); it != result.aliases.end()) return &by_id.at(it->second.value);
    return nullptr;
  };

  std::map<std::string, std::vector<Term>> per_namespace;
  for (auto& r : raw) {
    Term term = std::move(r.term);
    if (term.obsolete) {
      ++summary.obsolete_terms;
      term.parents.clear();
      result.obsolete.push_back(std::move(term));
      continue;
    }
    std::vector<ParentEdge> kept;
    for (const auto& edge : term.parents) {
      const StanzaInfo* parent = resolve(edge.parent);
      if (parent == nullptr) {
        throw Error(ErrorCode::DanglingParent, term.id.value + " -> missing parent " + edge.parent.value);
      }
      if (parent->obsolete) {
        throw Error(ErrorCode::DanglingParent, term.id.value + " -> obsolete parent " + edge.parent.value);
      }
      if (parent->ns != term.ns) {
        ++summary.cross_namespace_dropped;
        continue;
      }
      ParentEdge resolved{parent->id, edge.relation};
      if (std::find_if(kept.begin(), kept.end(), [&](const ParentEdge& e) {
            return e.parent == resolved.parent && e.relation == resolved.relation;
          }) != kept.end()) {
        continue;
      }
      (edge.relation == Relation::is_a ? summary.is_a_edges : summary.part_of_edges) += 1;
      kept.push_back(std::move(resolved));
    }
    term.parents = std::move(kept);
    std::string ns = term.ns;
    per_namespace[ns].push_back(std::move(term));
  }
  std::sort(result.obsolete.begin(), result.obsolete.end(),
            [](const Term& a, const Term& b) { return a.id < b.id; });

  for (auto& [ns, terms] : per_namespace) {
    result.dags.push_back(DagBuilder::build(ns, std::move(terms)));
  }
  return result;
}

Ontology parse_obo_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_obo(in);
}

void write_obo(std::ostream& out, const Ontology& ontology) {
  std::vector<const Term*> terms;
  for (const auto& dag : ontology.dags) {
    for (const auto& t : dag.terms()) terms.push_back(&t);
  }
  for (const auto& t : ontology.obsolete) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(), [](const Term* a, const Term* b) { return a->id < b->id; });

  out << "format-version: 1.2\n";
  for (const Term* t : terms) {
    out << "\n[Term]\n";
    out << "id: " << t->id.value << '\n';
    out << "name: " << t->name << '\n';
    out << "namespace: " << t->ns << '\n';
    auto alt = t->alt_ids;
    std::sort(alt.begin(), alt.end());
    for (const auto& a : alt) out << "alt_id: " << a.value << '\n';
    for (const auto& e : t->parents) {
      if (e.relation == Relation::is_a) out << "is_a: " << e.parent.value << '\n';
    }
    for (const auto& e : t->parents) {
      if (e.relation == Relation::part_of) out << "relationship: part_of " << e.parent.value << '\n';
    }
    if (t->obsolete) out << "is_obsolete: true\n";
  }
}

}  // namespace gosim
