#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gosim/proteinsim.hpp"

namespace gosim {

// Unordered gene pair kept in canonical order (first <= second).
struct GenePair {
  std::string first;
  std::string second;

  GenePair() = default;
  GenePair(std::string a, std::string b);

  auto operator<=>(const GenePair&) const = default;
};

using PairValues = std::map<GenePair, double>;

struct PairRow {
  GenePair pair;
  double semantic = 0;
  double external = 0;
};

struct PairDataset {
  std::string label;
  std::vector<PairRow> rows;  // sorted by pair
};

// Off-diagonal pairs present in both sources.
PairDataset join(const ScoreMatrix& semantic, const PairValues& external, std::string label = {});
PairDataset join(const ScoreMatrix& semantic, const ScoreMatrix& external, std::string label = {});

// Pearson correlation; nullopt when fewer than two points or either side is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Sequence similarity

struct BlastHit {
  std::string query;
  std::string subject;
  double bit_score = 0;
};

struct BlastColumns {
  std::size_t query = 0;
  std::size_t subject = 1;
  std::size_t bit_score = 11;  // tabular output format 6
};

std::vector<BlastHit> read_blast_tsv(std::istream& in, const BlastColumns& columns = {});

struct SequenceSimilarity {
  PairValues values;                  // log10 of the mean bit score of both directions
  std::size_t one_directional = 0;    // pairs scored from a single direction
  std::size_t self_hits = 0;
  std::size_t repeated_hits = 0;      // extra HSPs for a (query, subject) already seen
};

// Repeated hits for the same (query, subject) keep the best bit score.
// Throws NonPositiveScore on a bit score <= 0.
SequenceSimilarity sequence_similarity(std::span<const BlastHit> hits);

// ---------------------------------------------------------------------------
// Binned correlation

struct CorrelationInterval {
  double lower = 0;
  double upper = 0;
  std::size_t count = 0;
  double mean_semantic = 0;  // NaN when empty
  double mean_external = 0;
};

struct BinnedCorrelationReport {
  std::string label;
  double min_semantic = 0;
  double max_semantic = 0;
  std::vector<CorrelationInterval> intervals;
  std::size_t non_empty = 0;
  std::size_t rows = 0;
  double pearson_r = 0;
};

// Equal-width intervals over the observed semantic range, the last one
// closed. Throws EmptyInput, DegenerateRange or TooFewIntervalsNonEmpty.
BinnedCorrelationReport binned_correlation(const PairDataset& data, std::size_t n_intervals = 50);

// ---------------------------------------------------------------------------
// Expression

struct ExpressionMatrix {
  std::vector<std::string> genes;
  std::vector<std::string> conditions;
  std::vector<double> values;  // gene-major, NaN = missing

  double at(std::size_t g, std::size_t c) const { return values[g * conditions.size() + c]; }
  double& at(std::size_t g, std::size_t c) { return values[g * conditions.size() + c]; }
};

// Header row names the conditions; empty, NA and NaN cells are missing.
ExpressionMatrix read_expression_tsv(std::istream& in);

struct ExpressionOptions {
  double max_missing_frac = 0.1;  // genes must have strictly fewer missing cells
  std::size_t knn_k = 10;
  std::size_t min_conditions = 50;
};

// Fills each missing cell with the mean of the k nearest genes observed at
// that condition. Distance is Euclidean over mutually observed conditions,
// scaled up to the full condition count. Throws NoNeighbors.
std::size_t impute_knn(ExpressionMatrix& matrix, std::size_t k);

struct ExpressionCorrelation {
  ScoreMatrix correlations;
  std::vector<std::string> dropped_genes;
  std::size_t imputed_cells = 0;
};

// Throws TooFewConditions.
ExpressionCorrelation expression_correlation(ExpressionMatrix matrix, const ExpressionOptions& options = {});

// ---------------------------------------------------------------------------
// Histograms and chi-square

enum class HistogramScheme { bins21_zero_first, bins5_range, bins10_unit };

std::string_view to_string(HistogramScheme s);
std::optional<HistogramScheme> parse_histogram_scheme(std::string_view name);

struct Histogram {
  HistogramScheme scheme = HistogramScheme::bins10_unit;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> counts;
  std::size_t zeros = 0;  // bins10_unit only; bins21 keeps zeros in bin 0

  std::size_t total() const;
};

struct ValueRange {
  double min = 0;
  double max = 0;
};

// Bin of a value under the fixed (i/10, (i+1)/10] layout: 0 maps to bin 0 and
// values above 1 to bin 9. Values within 1e-9 of an edge count as on it.
std::size_t unit_bin(double v);

// bins21 and bins5 span the given range, or the observed one. Throws EmptyInput.
Histogram histogram(std::span<const double> values, HistogramScheme scheme,
                    std::optional<ValueRange> range = std::nullopt);

struct ChiSquareResult {
  double statistic = 0;
  std::size_t df = 0;
  double p_value = 1;
  std::size_t bins_used = 0;
};

double chi_square_survival(double statistic, std::size_t df);

// Goodness of fit of observed against expected counts scaled to the observed
// total. Zero-expectation bins merge into the next bin (the last into the
// previous). Throws IncompatibleHistograms.
ChiSquareResult chi_square(std::span<const std::size_t> observed, std::span<const std::size_t> expected);
ChiSquareResult chi_square(const Histogram& observed, const Histogram& expected);

// Two-sample test of homogeneity; bins empty in both samples are ignored.
ChiSquareResult chi_square_homogeneity(std::span<const std::size_t> a, std::span<const std::size_t> b);

// ---------------------------------------------------------------------------
// Interaction prediction

struct PpiOptions {
  double bp_min = 0.7;
  double cc_min = 0.8;
};

struct PpiPrediction {
  std::vector<GenePair> edges;  // sorted
  double bp_min = 0;
  double cc_min = 0;
  MatrixMetadata bp;
  MatrixMetadata cc;
  std::size_t proteins = 0;
  std::size_t components = 0;
  std::size_t largest_component = 0;
};

// Pairs whose BP value exceeds bp_min and CC value exceeds cc_min.
// Throws EmptyIntersection when the matrices share no gene.
PpiPrediction predict_ppi(const ScoreMatrix& bp, const ScoreMatrix& cc, const PpiOptions& options = {});

using ComplexTable = std::map<std::string, std::set<std::string>>;

// complex_id <TAB> gene per line.
ComplexTable read_complexes_tsv(std::istream& in);

struct ComplexCoverageRow {
  std::string complex;
  std::size_t members = 0;
  std::size_t members_found = 0;
  bool fully_covered = false;
};

struct ComplexCoverage {
  std::vector<ComplexCoverageRow> rows;
  std::size_t fully_covered = 0;
  std::size_t partially_covered = 0;
  std::size_t skipped = 0;  // fewer than two members
};

ComplexCoverage complex_coverage(const ComplexTable& complexes, const PpiPrediction& prediction);

// ---------------------------------------------------------------------------
// Random pair sampling, Z-scores and ROC

// Pairs scorable in both matrices, optionally restricted to a gene set.
class PairUniverse {
public:
  PairUniverse(const ScoreMatrix& bp, const ScoreMatrix& cc, const std::set<std::string>* genes = nullptr);

  std::size_t size() const { return bp_.size(); }
  double bp(std::size_t i) const { return bp_[i]; }
  double cc(std::size_t i) const { return cc_[i]; }
  std::uint8_t cell(std::size_t i) const { return cell_[i]; }
  GenePair pair(std::size_t i) const;
  std::optional<std::size_t> find(const GenePair& p) const;

private:
  std::vector<std::string> genes_;
  std::vector<std::uint32_t> row_start_;  // first pair index of each row
  std::vector<std::uint32_t> first_, second_;
  std::vector<double> bp_, cc_;
  std::vector<std::uint8_t> cell_;
};

// Grid cell of a (BP, CC) value pair: unit_bin(bp) * 10 + unit_bin(cc).
std::uint8_t grid_cell(double bp, double cc);

// k distinct indices below n, uniform, reproducible from (seed, stream, repeat).
std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k, std::uint64_t seed,
                                                      std::uint64_t stream, std::uint64_t repeat);

constexpr std::uint64_t kDefaultSeed = 20080415;

struct ZScoreOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
};

struct ZScoreCell {
  std::size_t observed = 0;
  double random_mean = 0;
  double random_sd = 0;
  std::optional<double> z;  // undefined when the sample sd is 0
};

struct ZScoreGrid {
  std::array<ZScoreCell, 100> cells;  // index bp_bin * 10 + cc_bin
  std::size_t positives = 0;          // scorable positives
  std::size_t unscorable = 0;
  std::size_t universe = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  const ZScoreCell& at(std::size_t bp_bin, std::size_t cc_bin) const { return cells[bp_bin * 10 + cc_bin]; }
};

std::optional<double> z_score(double observed, double mean, double sd);

// Throws EmptyInput when no positive is scorable, InsufficientUniverse when
// the universe is smaller than the positive set.
ZScoreGrid zscore_significance(std::span<const GenePair> positives, const PairUniverse& universe,
                               const ZScoreOptions& options = {});

enum class Combine { mean, min, product };

std::string_view to_string(Combine c);
std::optional<Combine> parse_combine(std::string_view name);
double combine_scores(Combine c, double bp, double cc);

// Mann-Whitney AUC with ties given half credit.
double auc_rank(std::span<const double> positive, std::span<const double> negative);

struct RocOptions {
  Combine combine = Combine::mean;
  std::size_t repeats = 10;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
};

struct RocReport {
  Combine combine = Combine::mean;
  std::vector<double> auc;
  double auc_mean = 0;
  double auc_sd = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;  // per repeat
  std::size_t unscorable = 0;
  std::uint64_t seed = 0;
};

// Negatives are drawn afresh each repeat from the universe minus the
// positives. Throws EmptyInput or InsufficientNegatives.
RocReport roc_auc(std::span<const GenePair> positives, const PairUniverse& universe, const RocOptions& options = {});

// gene1 <TAB> gene2 [<TAB> label] per line; '#' lines skipped.
struct LabeledPair {
  GenePair pair;
  std::string label;
};
std::vector<LabeledPair> read_pairs_tsv(std::istream& in);

// ---------------------------------------------------------------------------
// Report writers. Each starts with "# key=value" lines.

using ReportParams = std::vector<std::pair<std::string, std::string>>;

void write_report_header(std::ostream& out, std::string_view title, const ReportParams& params);
void write_binned_correlation(std::ostream& out, const BinnedCorrelationReport& r, const ReportParams& params);
void write_histograms(std::ostream& out, const std::vector<std::pair<std::string, Histogram>>& hists,
                      const ReportParams& params);
void write_ppi_edges(std::ostream& out, const PpiPrediction& p, const ReportParams& params);
void write_complex_coverage(std::ostream& out, const ComplexCoverage& c, const ReportParams& params);
void write_zscore_grid(std::ostream& out, const ZScoreGrid& g, const ReportParams& params);
void write_roc_report(std::ostream& out, const RocReport& r, const ReportParams& params);

}  // namespace gosim
