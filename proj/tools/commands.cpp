#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gosim/analysis.hpp"
#include "gosim/annotations.hpp"
#include "gosim/digest.hpp"
#include "gosim/model.hpp"
#include "gosim/ontology.hpp"
#include "gosim/proteinsim.hpp"
#include "text.hpp"

namespace gosim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingArtifact:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
      return kValidation;
    default:
      return kDataError;
  }
}

namespace {

constexpr std::string_view kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// File helpers

std::ifstream open_input(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::ifstream open_artifact(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::MissingArtifact, path.string() + " not found; run `gosim build` or `gosim matrix` first");
  }
  return open_input(path, std::ios::in | std::ios::binary);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

// Prefixes data errors raised while reading a file with its path.
template <class F>
auto with_file_context(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MissingArtifact || e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

ScoreMatrix load_matrix(const fs::path& path) {
  auto in = open_artifact(path);
  return with_file_context(path, [&] {
    if (in.peek() == 'G') return ScoreMatrix::read_binary(in);
    return ScoreMatrix::read_tsv(in);
  });
}

std::vector<GenePair> load_pairs(const fs::path& path) {
  auto in = open_input(path);
  auto labeled = with_file_context(path, [&] { return read_pairs_tsv(in); });
  std::vector<GenePair> pairs;
  for (auto& p : labeled) pairs.push_back(std::move(p.pair));
  return pairs;
}

std::set<std::string> load_gene_list(const fs::path& path) {
  auto in = open_input(path);
  std::set<std::string> genes;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    genes.insert(line.substr(0, line.find('\t')));
  }
  return genes;
}

// ---------------------------------------------------------------------------
// Artifacts written by `build`

struct Artifacts {
  SemanticModel model;
  std::string fingerprint;
};

DepthMode parse_depth(const std::string& s) {
  if (s == "longest") return DepthMode::longest_path;
  if (s == "shortest") return DepthMode::shortest_path;
  throw Error(ErrorCode::InvalidArgument, "depth mode must be longest or shortest");
}

Artifacts load_artifacts(const fs::path& dir) {
  auto manifest_in = open_artifact(dir / "build.json");
  const json build = json::parse(manifest_in);
  auto obo_in = open_artifact(dir / "ontology.obo");
  Ontology ontology = with_file_context(dir / "ontology.obo", [&] { return parse_obo(obo_in); });
  std::set<std::string> built;
  for (const auto& ns : build.at("namespaces")) built.insert(ns.at("namespace").get<std::string>());
  auto model = SemanticModel::assemble(
      std::move(ontology),
      [&](const OntologyDag& dag) -> std::optional<AnnotationCorpus> {
        if (built.count(dag.ns().name) == 0) return std::nullopt;
        const auto path = dir / ("corpus_" + dag.ns().short_name() + ".tsv");
        auto in = open_artifact(path);
        return with_file_context(path, [&] { return AnnotationCorpus::read_tsv(in, dag); });
      },
      parse_depth(build.at("depth").get<std::string>()));
  return {std::move(model), build.at("fingerprint").get<std::string>()};
}

// ---------------------------------------------------------------------------
// Run manifest

class Manifest {
public:
  Manifest(std::string command, int argc, const char* const* argv)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
  }

  void record_options(const CLI::App& sub) {
    for (const CLI::Option* opt : sub.get_options()) {
      std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
      if (name.empty() || name == "help" || name == "version") continue;
      std::replace(name.begin(), name.end(), '-', '_');
      std::string value;
      if (opt->count() > 0) {
        const auto& results = opt->results();
        for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
      } else {
        value = opt->get_default_str();
      }
      params_[name] = value;
    }
  }
  void input(const std::string& label, const fs::path& path) {
    if (!path.empty()) inputs_[label] = {{"path", path.string()}, {"sha256", file_sha256(path)}};
  }
  void output(const fs::path& path) { outputs_.push_back(path); }
  void set(const std::string& key, json value) { extra_[key] = std::move(value); }

  void write(const fs::path& path) const {
    json m;
    m["tool"] = "gosim";
    m["version"] = kVersion;
    m["command"] = command_;
    m["argv"] = argv_;
    m["params"] = params_;
    m["inputs"] = inputs_;
    json outs = json::array();
    for (const auto& o : outputs_) {
      outs.push_back({{"path", o.string()}, {"sha256", fs::exists(o) ? file_sha256(o) : ""}});
    }
    m["outputs"] = outs;
    for (const auto& [k, v] : extra_.items()) m[k] = v;
    m["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_file(path, m.dump(2) + "\n");
  }

private:
  std::string command_;
  std::vector<std::string> argv_;
  std::map<std::string, std::string> params_;
  json inputs_ = json::object();
  std::vector<fs::path> outputs_;
  json extra_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

ReportParams base_params(const std::string& command, std::uint64_t seed) {
  return {{"tool", "gosim " + std::string(kVersion)}, {"command", command}, {"seed", std::to_string(seed)}};
}

Measure require_measure(const std::string& s) {
  if (auto m = parse_measure(s)) return *m;
  throw Error(ErrorCode::InvalidArgument, "unknown measure '" + s + "'");
}

Strategy require_strategy(const std::string& s) {
  if (auto m = parse_strategy(s)) return *m;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + s + "'");
}

// ---------------------------------------------------------------------------
// Option bundles

struct Common {
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
};

struct BuildArgs {
  std::string obo, gaf, out;
  std::string depth = "longest";
  std::vector<std::string> drop_evidence{"IEA"};
  bool keep_root_only = false;
};

struct TermsimArgs {
  std::string artifacts, measure = "simic_lin", t1, t2, pairs;
};

struct ProtsimArgs {
  std::string artifacts, ns = "BP", measure = "simic_lin", strategy = "bma", g1, g2;
};

struct MatrixArgs {
  std::string artifacts, ns = "BP", measure = "simic_lin", strategy = "bma", genes, out;
  bool binary = false;
};

struct CorrelateArgs {
  std::string matrix, blast, expression, out, label;
  std::vector<std::size_t> blast_columns{0, 1, 11};
  std::size_t intervals = 50;
  double max_missing = 0.1;
  std::size_t knn_k = 10;
  std::size_t min_conditions = 50;
};

struct PredictArgs {
  std::string bp, cc, out, complexes, coverage_out;
  double bp_min = 0.7, cc_min = 0.8;
};

struct ZscoreArgs {
  std::string bp, cc, positives, genes, out;
  std::size_t samples = 1000;
};

struct RocArgs {
  std::string bp, cc, positives, genes, out, combine = "mean";
  std::size_t repeats = 10;
};

struct HistArgs {
  std::string matrix, pairs, out, scheme = "bins10_unit";
  std::vector<std::string> compare;
};

// ---------------------------------------------------------------------------
// Commands

int cmd_build(const BuildArgs& a, Manifest& manifest, std::ostream& out) {
  manifest.input("obo", a.obo);
  manifest.input("gaf", a.gaf);
  auto obo_in = open_input(a.obo);
  Ontology ontology = with_file_context(a.obo, [&] { return parse_obo(obo_in); });
  auto gaf_in = open_input(a.gaf);
  GafParseResult gaf = with_file_context(a.gaf, [&] { return parse_gaf(gaf_in, ontology); });

  CorpusOptions options;
  options.drop_evidence = std::set<std::string>(a.drop_evidence.begin(), a.drop_evidence.end());
  options.drop_evidence.erase("");
  options.drop_root_only = !a.keep_root_only;
  auto model = SemanticModel::build(std::move(ontology), gaf.records, options, parse_depth(a.depth));
  if (model.namespaces().empty()) throw Error(ErrorCode::EmptyCorpus, a.gaf + ": no namespace has usable annotations");

  const fs::path dir = a.out;
  fs::create_directories(dir);
  std::ostringstream obo;
  write_obo(obo, model.ontology());
  write_file(dir / "ontology.obo", obo.str());

  std::string combined = sha256_hex(obo.str());
  json namespaces = json::array();
  for (const auto& ns : model.namespaces()) {
    const auto short_name = ns.dag().ns().short_name();
    std::ostringstream corpus, ic;
    ns.corpus().write_tsv(corpus);
    ns.ic().write_tsv(ic);
    write_file(dir / ("corpus_" + short_name + ".tsv"), corpus.str());
    write_file(dir / ("ic_" + short_name + ".tsv"), ic.str());
    combined += ns.corpus().fingerprint();
    const auto& s = ns.corpus().stats();
    namespaces.push_back({{"namespace", ns.dag().ns().name},
                          {"short_name", short_name},
                          {"terms", ns.dag().size()},
                          {"edges", ns.dag().edge_count()},
                          {"genes", ns.corpus().genes().size()},
                          {"annotations", ns.corpus().annotation_count()},
                          {"total", ns.corpus().total()},
                          {"corpus_fingerprint", ns.corpus().fingerprint()},
                          {"evidence_dropped", s.evidence_dropped},
                          {"root_annotations_dropped", s.root_annotations_dropped},
                          {"root_only_genes_dropped", s.root_only_genes_dropped}});
    out << short_name << " (" << ns.dag().ns().name << "): " << ns.dag().size() << " terms, "
        << ns.corpus().genes().size() << " genes, " << ns.corpus().annotation_count() << " annotations, total "
        << ns.corpus().total() << '\n';
  }
  const auto fingerprint = sha256_hex(combined);
  json build = {{"fingerprint", fingerprint},
                {"depth", a.depth},
                {"drop_evidence", options.drop_evidence},
                {"drop_root_only", options.drop_root_only},
                {"namespaces", namespaces},
                {"gaf",
                 {{"records", gaf.records.size()},
                  {"negated_dropped", gaf.negated_dropped},
                  {"unknown_terms", gaf.unknown_terms},
                  {"obsolete_terms", gaf.obsolete_terms}}}};
  write_file(dir / "build.json", build.dump(2) + "\n");
  out << "fingerprint " << fingerprint << '\n';
  manifest.output(dir / "build.json");
  manifest.set("fingerprint", fingerprint);
  manifest.write(dir / "manifest.json");
  return kOk;
}

int cmd_termsim(const TermsimArgs& a, std::ostream& out) {
  auto art = load_artifacts(a.artifacts);
  const auto measure = require_measure(a.measure);
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!a.t1.empty()) pairs.emplace_back(a.t1, a.t2);
  if (!a.pairs.empty()) {
    auto in = open_input(a.pairs);
    for (auto& p : with_file_context(a.pairs, [&] { return read_pairs_tsv(in); })) {
      pairs.emplace_back(p.pair.first, p.pair.second);
    }
  }
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "give two terms or --pairs");
  for (const auto& [t1, t2] : pairs) {
    const auto s = art.model.term_similarity(measure, TermId(t1), TermId(t2));
    out << t1 << '\t' << t2 << '\t' << to_string(measure) << '\t' << text::fixed(s.value, 6) << '\n';
  }
  return kOk;
}

int cmd_protsim(const ProtsimArgs& a, std::ostream& out) {
  auto art = load_artifacts(a.artifacts);
  const auto& ns = art.model.require(a.ns);
  const auto r = score_gene_pair(ns, a.g1, a.g2, require_measure(a.measure), require_strategy(a.strategy));
  out << r.gene1 << '\t' << r.gene2 << '\t' << ns.dag().ns().short_name() << '\t' << to_string(r.measure) << '\t'
      << to_string(r.strategy) << '\t' << text::fixed(r.value, 6) << '\n';
  return kOk;
}

int cmd_matrix(const MatrixArgs& a, const Common& c, Manifest& manifest, std::ostream& out) {
  auto art = load_artifacts(a.artifacts);
  manifest.input("build", fs::path(a.artifacts) / "build.json");
  const auto& ns = art.model.require(a.ns);
  const auto measure = require_measure(a.measure);
  const auto strategy = require_strategy(a.strategy);
  std::vector<std::string> genes;
  if (a.genes.empty()) {
    genes = ns.corpus().genes();
  } else {
    manifest.input("genes", a.genes);
    auto wanted = load_gene_list(a.genes);
    genes.assign(wanted.begin(), wanted.end());
  }
  const auto result = all_pairs(genes, ns, measure, strategy, {c.workers});
  std::ostringstream body;
  if (a.binary) {
    result.matrix.write_binary(body);
  } else {
    result.matrix.write_tsv(body);
  }
  write_file(a.out, body.str());
  out << genes.size() << " genes, " << result.matrix.defined_pairs() << " scored pairs, " << result.excluded_cells
      << " excluded, memo hit rate " << result.hit_rate() << '\n';
  manifest.set("build_fingerprint", art.fingerprint);
  manifest.set("cache", {{"hits", result.cache_hits}, {"misses", result.cache_misses}, {"hit_rate", result.hit_rate()}});
  manifest.set("missing_genes", result.missing_genes);
  manifest.output(a.out);
  manifest.write(manifest_path(a.out));
  return kOk;
}

int cmd_correlate(const CorrelateArgs& a, const Common& c, Manifest& manifest, std::ostream& out, std::ostream& err) {
  if (a.blast.empty() == a.expression.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --blast or --expression");
  }
  manifest.input("matrix", a.matrix);
  const auto semantic = load_matrix(a.matrix);
  auto params = base_params("correlate", c.seed);
  params.emplace_back("matrix", semantic.metadata().measure + "/" + semantic.metadata().strategy + "/" +
                                    semantic.metadata().ns);
  params.emplace_back("intervals", std::to_string(a.intervals));
  PairDataset data;
  if (!a.blast.empty()) {
    if (a.blast_columns.size() != 3) throw Error(ErrorCode::InvalidArgument, "--blast-columns takes three indices");
    manifest.input("blast", a.blast);
    auto in = open_input(a.blast);
    const auto hits = with_file_context(
        a.blast, [&] { return read_blast_tsv(in, {a.blast_columns[0], a.blast_columns[1], a.blast_columns[2]}); });
    const auto seq = sequence_similarity(hits);
    if (seq.one_directional > 0) {
      err << "warning: " << seq.one_directional << " pairs scored from a single BLAST direction\n";
    }
    params.emplace_back("external", "sequence");
    params.emplace_back("one_directional_pairs", std::to_string(seq.one_directional));
    data = join(semantic, seq.values, a.label.empty() ? "sequence" : a.label);
  } else {
    manifest.input("expression", a.expression);
    auto in = open_input(a.expression);
    auto matrix = with_file_context(a.expression, [&] { return read_expression_tsv(in); });
    const auto corr = expression_correlation(std::move(matrix), {a.max_missing, a.knn_k, a.min_conditions});
    params.emplace_back("external", "expression");
    params.emplace_back("dropped_genes", std::to_string(corr.dropped_genes.size()));
    params.emplace_back("imputed_cells", std::to_string(corr.imputed_cells));
    data = join(semantic, corr.correlations, a.label.empty() ? "expression" : a.label);
  }
  const auto report = binned_correlation(data, a.intervals);
  std::ostringstream body;
  write_binned_correlation(body, report, params);
  write_file(a.out, body.str());
  out << data.rows.size() << " pairs, r = " << report.pearson_r << '\n';
  manifest.set("pearson_r", report.pearson_r);
  manifest.output(a.out);
  manifest.write(manifest_path(a.out));
  return kOk;
}

int cmd_predict(const PredictArgs& a, const Common& c, Manifest& manifest, std::ostream& out) {
  manifest.input("bp", a.bp);
  manifest.input("cc", a.cc);
  const auto bp = load_matrix(a.bp);
  const auto cc = load_matrix(a.cc);
  const auto prediction = predict_ppi(bp, cc, {a.bp_min, a.cc_min});
  std::ostringstream body;
  write_ppi_edges(body, prediction, base_params("predict", c.seed));
  write_file(a.out, body.str());
  manifest.output(a.out);
  out << prediction.edges.size() << " interactions between " << prediction.proteins << " proteins, "
      << prediction.components << " components\n";
  if (!a.complexes.empty()) {
    manifest.input("complexes", a.complexes);
    auto in = open_input(a.complexes);
    const auto table = with_file_context(a.complexes, [&] { return read_complexes_tsv(in); });
    const auto coverage = complex_coverage(table, prediction);
    const fs::path cov_out = a.coverage_out.empty() ? fs::path(a.out + ".coverage.tsv") : fs::path(a.coverage_out);
    std::ostringstream cov;
    write_complex_coverage(cov, coverage, base_params("predict", c.seed));
    write_file(cov_out, cov.str());
    manifest.output(cov_out);
    out << coverage.fully_covered << " complexes fully covered, " << coverage.partially_covered << " partially\n";
  }
  manifest.set("thresholds", {{"bp_min", a.bp_min}, {"cc_min", a.cc_min}});
  manifest.write(manifest_path(a.out));
  return kOk;
}

PairUniverse make_universe(const ScoreMatrix& bp, const ScoreMatrix& cc, const std::string& genes_path,
                           Manifest& manifest) {
  if (genes_path.empty()) return PairUniverse(bp, cc);
  manifest.input("genes", genes_path);
  const auto genes = load_gene_list(genes_path);
  return PairUniverse(bp, cc, &genes);
}

int cmd_zscore(const ZscoreArgs& a, const Common& c, Manifest& manifest, std::ostream& out) {
  manifest.input("bp", a.bp);
  manifest.input("cc", a.cc);
  manifest.input("positives", a.positives);
  const auto bp = load_matrix(a.bp);
  const auto cc = load_matrix(a.cc);
  const auto universe = make_universe(bp, cc, a.genes, manifest);
  const auto positives = load_pairs(a.positives);
  const auto grid = zscore_significance(positives, universe, {a.samples, c.seed, c.workers});
  std::ostringstream body;
  write_zscore_grid(body, grid, base_params("zscore", c.seed));
  write_file(a.out, body.str());
  out << grid.positives << " positives over " << grid.universe << " scorable pairs, " << grid.n_samples
      << " samples\n";
  manifest.set("seed", c.seed);
  manifest.set("workers", resolve_workers(c.workers));
  manifest.output(a.out);
  manifest.write(manifest_path(a.out));
  return kOk;
}

int cmd_roc(const RocArgs& a, const Common& c, Manifest& manifest, std::ostream& out) {
  manifest.input("bp", a.bp);
  manifest.input("cc", a.cc);
  manifest.input("positives", a.positives);
  auto combine = parse_combine(a.combine);
  if (!combine) throw Error(ErrorCode::InvalidArgument, "combine must be mean, min or product");
  const auto bp = load_matrix(a.bp);
  const auto cc = load_matrix(a.cc);
  const auto universe = make_universe(bp, cc, a.genes, manifest);
  const auto positives = load_pairs(a.positives);
  const auto report = roc_auc(positives, universe, {*combine, a.repeats, c.seed, c.workers});
  std::ostringstream body;
  write_roc_report(body, report, base_params("roc", c.seed));
  write_file(a.out, body.str());
  out << "AUC " << report.auc_mean << " +/- " << report.auc_sd << " over " << report.auc.size() << " repeats\n";
  manifest.set("seed", c.seed);
  manifest.set("workers", resolve_workers(c.workers));
  manifest.output(a.out);
  manifest.write(manifest_path(a.out));
  return kOk;
}

int cmd_hist(const HistArgs& a, const Common& c, Manifest& manifest, std::ostream& out) {
  auto scheme = parse_histogram_scheme(a.scheme);
  if (!scheme) throw Error(ErrorCode::InvalidArgument, "unknown histogram scheme '" + a.scheme + "'");
  manifest.input("matrix", a.matrix);
  const auto matrix = load_matrix(a.matrix);

  std::map<std::string, std::vector<double>> groups;
  if (a.pairs.empty()) {
    auto& all = groups["all"];
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      for (std::size_t j = i + 1; j < matrix.size(); ++j) {
        if (matrix.has(i, j)) all.push_back(matrix.at(i, j));
      }
    }
  } else {
    manifest.input("pairs", a.pairs);
    auto in = open_input(a.pairs);
    for (const auto& p : with_file_context(a.pairs, [&] { return read_pairs_tsv(in); })) {
      if (auto v = matrix.value(p.pair.first, p.pair.second)) groups[p.label.empty() ? "all" : p.label].push_back(*v);
    }
  }

  // Groups share one range so their bins line up for comparison.
  std::optional<ValueRange> range;
  for (const auto& [label, values] : groups) {
    for (double v : values) {
      if (*scheme == HistogramScheme::bins21_zero_first && v == 0) continue;
      if (!range) range = ValueRange{v, v};
      range->min = std::min(range->min, v);
      range->max = std::max(range->max, v);
    }
  }
  std::vector<std::pair<std::string, Histogram>> hists;
  for (const auto& [label, values] : groups) hists.emplace_back(label, histogram(values, *scheme, range));

  auto params = base_params("hist", c.seed);
  params.emplace_back("scheme", std::string(to_string(*scheme)));
  if (!a.compare.empty()) {
    if (a.compare.size() != 2) throw Error(ErrorCode::InvalidArgument, "--compare takes two group labels");
    auto find = [&](const std::string& label) -> const Histogram& {
      for (const auto& [l, h] : hists) {
        if (l == label) return h;
      }
      throw Error(ErrorCode::InvalidArgument, "no pairs labelled '" + label + "'");
    };
    const auto& h1 = find(a.compare[0]);
    const auto& h2 = find(a.compare[1]);
    std::vector<std::size_t> c1 = h1.counts, c2 = h2.counts;
    c1.push_back(h1.zeros);
    c2.push_back(h2.zeros);
    params.emplace_back("compare", a.compare[0] + " vs " + a.compare[1]);
    // Either test can be inapplicable on its own (e.g. disjoint mass defeats
    // goodness of fit); report that and fail only when neither runs.
    std::optional<Error> last_error;
    auto report = [&](const std::string& name, auto&& test) {
      std::string text;
      try {
        const ChiSquareResult r = test();
        text = "statistic=" + text::exact(r.statistic) + " df=" + std::to_string(r.df) +
               " p=" + text::exact(r.p_value);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::IncompatibleHistograms) throw;
        last_error = e;
        text = "NA (" + e.message() + ")";
      }
      params.emplace_back(name, text);
      out << a.compare[0] << " vs " << a.compare[1] << ", " << name << ": " << text << '\n';
    };
    report("chi_square_fit", [&] { return chi_square(h1, h2); });
    const bool fit_failed = last_error.has_value();
    last_error.reset();
    report("chi_square_homogeneity", [&] { return chi_square_homogeneity(c1, c2); });
    if (fit_failed && last_error) throw *last_error;
  }
  std::ostringstream body;
  write_histograms(body, hists, params);
  write_file(a.out, body.str());
  out << hists.size() << " groups binned\n";
  manifest.output(a.out);
  manifest.write(manifest_path(a.out));
  return kOk;
}

std::string guidance(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateRange:
      return "hint: every semantic value is identical, so no intervals can be formed. Check that the matrix was "
             "built for the intended namespace and gene list, or try a measure with more spread.";
    case ErrorCode::TooFewIntervalsNonEmpty:
      return "hint: use fewer intervals or supply more pairs.";
    case ErrorCode::MissingArtifact:
      return "hint: run `gosim build --obo ... --gaf ... --out DIR` first and pass the same directory.";
    case ErrorCode::InsufficientNegatives:
    case ErrorCode::InsufficientUniverse:
      return "hint: the scorable pair universe is too small for the positive set; widen the gene list.";
    default:
      return {};
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gene Ontology semantic similarity toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML or INI file with option defaults; flags override it");
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--workers", common.workers, "Worker threads (0 = all cores)")->capture_default_str();
  };

  BuildArgs build;
  auto* s_build = app.add_subcommand("build", "Parse ontology and annotations and write model artifacts");
  s_build->add_option("--obo", build.obo, "Ontology in OBO format")->required()->check(CLI::ExistingFile);
  s_build->add_option("--gaf", build.gaf, "Gene association file (GAF 2.x)")->required()->check(CLI::ExistingFile);
  s_build->add_option("--out", build.out, "Artifact directory")->required();
  s_build->add_option("--depth", build.depth, "Depth mode: longest or shortest")
      ->capture_default_str()
      ->check(CLI::IsMember({"longest", "shortest"}));
  s_build->add_option("--drop-evidence", build.drop_evidence, "Evidence codes to drop, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  s_build->add_flag("--keep-root-only", build.keep_root_only, "Keep genes annotated only to the root");

  TermsimArgs termsim;
  auto* s_termsim = app.add_subcommand("termsim", "Similarity of two terms");
  s_termsim->add_option("--artifacts", termsim.artifacts, "Artifact directory")->required();
  s_termsim->add_option("--measure", termsim.measure, "Measure")->capture_default_str();
  s_termsim->add_option("--pairs", termsim.pairs, "TSV of term pairs to score")->check(CLI::ExistingFile);
  auto* term1 = s_termsim->add_option("term1", termsim.t1);
  s_termsim->add_option("term2", termsim.t2)->needs(term1);
  term1->needs(s_termsim->get_option("term2"));

  ProtsimArgs protsim;
  auto* s_protsim = app.add_subcommand("protsim", "Similarity of two genes");
  s_protsim->add_option("--artifacts", protsim.artifacts, "Artifact directory")->required();
  s_protsim->add_option("--ns,--namespace", protsim.ns, "Namespace (BP, MF, CC)")->capture_default_str();
  s_protsim->add_option("--measure", protsim.measure, "Term measure")->capture_default_str();
  s_protsim->add_option("--strategy", protsim.strategy, "max, avg or bma")->capture_default_str();
  s_protsim->add_option("gene1", protsim.g1)->required();
  s_protsim->add_option("gene2", protsim.g2)->required();

  MatrixArgs matrix;
  auto* s_matrix = app.add_subcommand("matrix", "All-pairs gene similarity matrix");
  s_matrix->add_option("--artifacts", matrix.artifacts, "Artifact directory")->required();
  s_matrix->add_option("--ns,--namespace", matrix.ns, "Namespace (BP, MF, CC)")->capture_default_str();
  s_matrix->add_option("--measure", matrix.measure, "Term measure")->capture_default_str();
  s_matrix->add_option("--strategy", matrix.strategy, "max, avg or bma")->capture_default_str();
  s_matrix->add_option("--genes", matrix.genes, "Gene list (default: every annotated gene)")
      ->check(CLI::ExistingFile);
  s_matrix->add_option("--out", matrix.out, "Output matrix")->required();
  s_matrix->add_flag("--binary", matrix.binary, "Write the binary matrix format");
  add_common(s_matrix);

  CorrelateArgs correlate;
  auto* s_correlate = app.add_subcommand("correlate", "Binned correlation against sequence or expression data");
  s_correlate->add_option("--matrix", correlate.matrix, "Semantic similarity matrix")->required();
  s_correlate->add_option("--blast", correlate.blast, "BLAST tabular hits")->check(CLI::ExistingFile);
  s_correlate->add_option("--blast-columns", correlate.blast_columns, "Query, subject and bit score column indices")
      ->expected(3)
      ->capture_default_str();
  s_correlate->add_option("--expression", correlate.expression, "Expression matrix TSV")->check(CLI::ExistingFile);
  s_correlate->add_option("--intervals", correlate.intervals, "Number of intervals")->capture_default_str();
  s_correlate->add_option("--max-missing", correlate.max_missing, "Drop genes with this fraction missing or more")
      ->capture_default_str();
  s_correlate->add_option("--knn-k", correlate.knn_k, "Neighbours for imputation")->capture_default_str();
  s_correlate->add_option("--min-conditions", correlate.min_conditions, "Minimum expression conditions")
      ->capture_default_str();
  s_correlate->add_option("--label", correlate.label, "Dataset label");
  s_correlate->add_option("--out", correlate.out, "Report TSV")->required();
  add_common(s_correlate);

  PredictArgs predict;
  auto* s_predict = app.add_subcommand("predict", "Predict interactions from BP and CC similarity");
  s_predict->add_option("--bp", predict.bp, "BP matrix")->required();
  s_predict->add_option("--cc", predict.cc, "CC matrix")->required();
  s_predict->add_option("--bp-min", predict.bp_min, "BP threshold (exclusive)")->capture_default_str();
  s_predict->add_option("--cc-min", predict.cc_min, "CC threshold (exclusive)")->capture_default_str();
  s_predict->add_option("--complexes", predict.complexes, "Complex membership TSV")->check(CLI::ExistingFile);
  s_predict->add_option("--coverage-out", predict.coverage_out, "Complex coverage report");
  s_predict->add_option("--out", predict.out, "Edge list TSV")->required();
  add_common(s_predict);

  ZscoreArgs zscore;
  auto* s_zscore = app.add_subcommand("zscore", "Z-score grid of known pairs against random samples");
  s_zscore->add_option("--bp", zscore.bp, "BP matrix")->required();
  s_zscore->add_option("--cc", zscore.cc, "CC matrix")->required();
  s_zscore->add_option("--positives", zscore.positives, "Known pairs TSV")->required()->check(CLI::ExistingFile);
  s_zscore->add_option("--genes", zscore.genes, "Restrict the universe to these genes")->check(CLI::ExistingFile);
  s_zscore->add_option("--samples", zscore.samples, "Random samples")->capture_default_str();
  s_zscore->add_option("--out", zscore.out, "Report TSV")->required();
  add_common(s_zscore);

  RocArgs roc;
  auto* s_roc = app.add_subcommand("roc", "ROC AUC of known pairs against sampled negatives");
  s_roc->add_option("--bp", roc.bp, "BP matrix")->required();
  s_roc->add_option("--cc", roc.cc, "CC matrix")->required();
  s_roc->add_option("--positives", roc.positives, "Known pairs TSV")->required()->check(CLI::ExistingFile);
  s_roc->add_option("--genes", roc.genes, "Restrict the universe to these genes")->check(CLI::ExistingFile);
  s_roc->add_option("--combine", roc.combine, "mean, min or product")
      ->capture_default_str()
      ->check(CLI::IsMember({"mean", "min", "product"}));
  s_roc->add_option("--repeats", roc.repeats, "Repeats")->capture_default_str();
  s_roc->add_option("--out", roc.out, "Report TSV")->required();
  add_common(s_roc);

  HistArgs hist;
  auto* s_hist = app.add_subcommand("hist", "Histogram of similarity values, optionally by pair label");
  s_hist->add_option("--matrix", hist.matrix, "Similarity matrix")->required();
  s_hist->add_option("--pairs", hist.pairs, "Labelled pairs TSV (gene1, gene2, label)")->check(CLI::ExistingFile);
  s_hist->add_option("--scheme", hist.scheme, "bins21_zero_first, bins5_range or bins10_unit")->capture_default_str();
  s_hist->add_option("--compare", hist.compare, "Two labels to compare with a chi-square test")->expected(2);
  s_hist->add_option("--out", hist.out, "Report TSV")->required();
  add_common(s_hist);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  Manifest manifest(sub->get_name(), argc, argv);
  manifest.record_options(*sub);
  try {
    if (sub == s_build) return cmd_build(build, manifest, out);
    if (sub == s_termsim) return cmd_termsim(termsim, out);
    if (sub == s_protsim) return cmd_protsim(protsim, out);
    if (sub == s_matrix) return cmd_matrix(matrix, common, manifest, out);
    if (sub == s_correlate) return cmd_correlate(correlate, common, manifest, out, err);
    if (sub == s_predict) return cmd_predict(predict, common, manifest, out);
    if (sub == s_zscore) return cmd_zscore(zscore, common, manifest, out);
    if (sub == s_roc) return cmd_roc(roc, common, manifest, out);
    if (sub == s_hist) return cmd_hist(hist, common, manifest, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (auto hint = guidance(e.code()); !hint.empty()) err << hint << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: malformed artifact metadata: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace gosim::cli
