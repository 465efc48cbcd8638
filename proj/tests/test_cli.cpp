#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "gosim/analysis.hpp"
#include "support.hpp"

using namespace gosim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gosim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string obo() { return (testing::data_dir() / "toy.obo").string(); }
std::string gaf() { return (testing::data_dir() / "toy.gaf").string(); }

fs::path built_toy(const std::string& name) {
  auto dir = testing::temp_dir(name) / "model";
  auto o = run_cli({"build", "--obo", obo(), "--gaf", gaf(), "--out", dir.string()});
  REQUIRE(o.code == 0);
  return dir;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p) << s;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

// A matrix whose cells equal `value` everywhere.
fs::path flat_matrix(const fs::path& dir, const std::vector<std::string>& genes, double value) {
  ScoreMatrix m(genes, {"lin", "best_match_average", "BP", "none"});
  for (std::size_t i = 0; i < genes.size(); ++i) {
    for (std::size_t j = i; j < genes.size(); ++j) m.set(i, j, i == j ? 1.0 : value);
  }
  auto p = dir / ("flat_" + std::to_string(value) + ".tsv");
  std::ofstream out(p);
  m.write_tsv(out);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("build reports the toy namespace and a stable fingerprint") {
    auto dir = testing::temp_dir("cli_build");
    auto a = run_cli({"build", "--obo", obo(), "--gaf", gaf(), "--out", (dir / "a").string()});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("BP (biological_process): 6 terms, 8 genes, 8 annotations, total 8") != std::string::npos);
    auto b = run_cli({"build", "--obo", obo(), "--gaf", gaf(), "--out", (dir / "b").string()});
    REQUIRE(b.code == 0);
    auto ja = read_json(dir / "a" / "build.json");
    auto jb = read_json(dir / "b" / "build.json");
    CHECK(ja.at("fingerprint") == jb.at("fingerprint"));
    CHECK(fs::exists(dir / "a" / "manifest.json"));
    CHECK(fs::exists(dir / "a" / "corpus_BP.tsv"));
    CHECK(fs::exists(dir / "a" / "ic_BP.tsv"));
  }

  TEST_CASE("a missing input file is a validation error") {
    auto dir = testing::temp_dir("cli_missing");
    auto o = run_cli({"build", "--obo", obo(), "--gaf", (dir / "absent.gaf").string(), "--out", dir.string()});
    CHECK(o.code == 1);
    CHECK_FALSE(o.err.empty());
    auto none = run_cli({"termsim", "--artifacts", (dir / "nothing").string(), "GO:0000004", "GO:0000005"});
    CHECK(none.code == 1);
    CHECK(none.err.find("MissingArtifact") != std::string::npos);
    CHECK(none.err.find("hint:") != std::string::npos);
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
  }

  TEST_CASE("termsim and protsim print toy values") {
    auto dir = built_toy("cli_sim");
    auto t = run_cli({"termsim", "--artifacts", dir.string(), "--measure", "lin", "GO:0000004", "GO:0000005"});
    REQUIRE(t.code == 0);
    CHECK(t.out == "GO:0000004\tGO:0000005\tlin\t0.452997\n");
    auto p = run_cli({"protsim", "--artifacts", dir.string(), "--measure", "lin", "--strategy", "max", "g1", "g3"});
    REQUIRE(p.code == 0);
    CHECK(p.out.find("0.452997") != std::string::npos);
    auto bad = run_cli({"termsim", "--artifacts", dir.string(), "--measure", "wang", "GO:0000004", "GO:0000005"});
    CHECK(bad.code == 1);
    auto unknown = run_cli({"termsim", "--artifacts", dir.string(), "GO:0000004", "GO:9999999"});
    CHECK(unknown.code == 2);
  }

  TEST_CASE("matrix writes a manifest with cache statistics") {
    auto dir = built_toy("cli_matrix");
    auto out = dir.parent_path() / "m.tsv";
    auto o = run_cli({"matrix", "--artifacts", dir.string(), "--measure", "lin", "--out", out.string()});
    REQUIRE(o.code == 0);
    std::ifstream in(out);
    auto m = ScoreMatrix::read_tsv(in);
    CHECK(m.size() == 8);
    CHECK(m.defined_pairs() == 28);
    auto manifest = read_json(out.string() + ".manifest.json");
    CHECK(manifest.contains("outputs"));
    CHECK(manifest.at("cache").at("hit_rate").get<double>() > 0);
    CHECK(manifest.at("params").at("measure") == "lin");
  }

  TEST_CASE("predict echoes its thresholds in the manifest") {
    auto dir = testing::temp_dir("cli_predict");
    std::vector<std::string> genes{"a", "b", "c"};
    auto high = flat_matrix(dir, genes, 0.9);
    auto out = dir / "edges.tsv";
    auto o = run_cli({"predict", "--bp", high.string(), "--cc", high.string(), "--bp-min", "0.55", "--cc-min", "0.65",
                      "--out", out.string()});
    REQUIRE(o.code == 0);
    auto manifest = read_json(out.string() + ".manifest.json");
    CHECK(manifest.at("params").at("bp_min") == "0.55");
    CHECK(manifest.at("params").at("cc_min") == "0.65");
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.find("# bp_min=0.55") != std::string::npos);
  }

  TEST_CASE("roc output is byte-identical across runs") {
    auto dir = testing::temp_dir("cli_roc");
    std::vector<std::string> genes;
    for (int i = 0; i < 12; ++i) genes.push_back("g" + std::to_string(10 + i));
    ScoreMatrix bp(genes), cc(genes);
    for (std::size_t i = 0; i < genes.size(); ++i) {
      for (std::size_t j = i; j < genes.size(); ++j) {
        bp.set(i, j, static_cast<double>((i * 7 + j * 3) % 11) / 10.0);
        cc.set(i, j, static_cast<double>((i * 5 + j) % 9) / 8.0);
      }
    }
    std::ofstream(dir / "bp.tsv") << [&] { std::ostringstream s; bp.write_tsv(s); return s.str(); }();
    std::ofstream(dir / "cc.tsv") << [&] { std::ostringstream s; cc.write_tsv(s); return s.str(); }();
    write_text(dir / "pos.tsv", "g10\tg11\ng12\tg15\ng13\tg20\ng14\tg21\n");
    auto run_once = [&](const std::string& name, const std::string& workers) {
      auto out = dir / name;
      auto o = run_cli({"roc", "--bp", (dir / "bp.tsv").string(), "--cc", (dir / "cc.tsv").string(), "--positives",
                        (dir / "pos.tsv").string(), "--repeats", "5", "--workers", workers, "--out", out.string()});
      REQUIRE(o.code == 0);
      return testing::slurp(out);
    };
    auto first = run_once("r1.tsv", "1");
    CHECK(first == run_once("r2.tsv", "1"));
    CHECK(first == run_once("r3.tsv", "4"));
    CHECK(first.find("# seed=20080415") != std::string::npos);
  }

  TEST_CASE("correlate on constant semantic values explains the degenerate range") {
    auto dir = testing::temp_dir("cli_correlate");
    auto flat = flat_matrix(dir, {"a", "b", "c", "d"}, 0.5);
    write_text(dir / "blast.tsv", "a\tb\t100\nb\ta\t100\nc\td\t50\nd\tc\t70\na\tc\t10\n");
    auto o = run_cli({"correlate", "--matrix", flat.string(), "--blast", (dir / "blast.tsv").string(),
                      "--blast-columns", "0", "1", "2", "--out", (dir / "r.tsv").string()});
    CHECK(o.code == 2);
    CHECK(o.err.find("DegenerateRange") != std::string::npos);
    CHECK(o.err.find("hint:") != std::string::npos);
    auto both = run_cli({"correlate", "--matrix", flat.string(), "--out", (dir / "r.tsv").string()});
    CHECK(both.code == 1);
  }

  TEST_CASE("hist compares labelled groups") {
    auto dir = built_toy("cli_hist");
    auto matrix = dir.parent_path() / "m.bin";
    REQUIRE(run_cli({"matrix", "--artifacts", dir.string(), "--measure", "simic_lin", "--binary", "--out",
                     matrix.string()})
                .code == 0);
    write_text(dir.parent_path() / "pairs.tsv", "g1\tg2\tsame\ng1\tg3\tsame\ng5\tg6\tsame\ng1\tg5\tother\n"
                                                "g2\tg6\tother\ng4\tg8\tother\n");
    auto out = dir.parent_path() / "h.tsv";
    auto o = run_cli({"hist", "--matrix", matrix.string(), "--pairs", (dir.parent_path() / "pairs.tsv").string(),
                      "--scheme", "bins5_range", "--compare", "same", "other", "--out", out.string()});
    REQUIRE(o.code == 0);
    auto text = testing::slurp(out);
    CHECK(text.find("same") != std::string::npos);
    CHECK(text.find("other") != std::string::npos);
    CHECK(text.find("homogeneity") != std::string::npos);
  }

  TEST_CASE("version flag") {
    auto o = run_cli({"--version"});
    CHECK(o.code == 0);
    CHECK_FALSE(o.out.empty());
  }
}
