#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gosim/annotations.hpp"
#include "gosim/model.hpp"
#include "gosim/ontology.hpp"
#include "oracle.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return GOSIM_TEST_DATA; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline gosim::Ontology toy_ontology() { return gosim::parse_obo_text(slurp(data_dir() / "toy.obo")); }

inline gosim::SemanticModel model_from_text(const std::string& obo, const std::string& gaf,
                                            const gosim::CorpusOptions& options = {},
                                            gosim::DepthMode mode = gosim::DepthMode::longest_path) {
  auto ontology = gosim::parse_obo_text(obo);
  std::istringstream in(gaf);
  auto parsed = gosim::parse_gaf(in, ontology);
  return gosim::SemanticModel::build(std::move(ontology), parsed.records, options, mode);
}

inline gosim::SemanticModel toy_model() {
  return model_from_text(slurp(data_dir() / "toy.obo"), slurp(data_dir() / "toy.gaf"));
}

inline gosim::SemanticModel fixture_model(const oracle::Fixture& f) { return model_from_text(f.obo, f.gaf); }

// Toy term ids by their single-letter names.
inline gosim::TermId toy(char name) {
  return gosim::TermId(std::string("GO:000000") + static_cast<char>('1' + std::string("RABCDE").find(name)));
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gosim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
