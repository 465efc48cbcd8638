#include <cmath>
#include <ostream>

#include "gosim/analysis.hpp"
#include "text.hpp"

namespace gosim {

namespace {
std::string num(double v) { return std::isnan(v) ? "NA" : text::exact(v); }
}  // namespace

void write_report_header(std::ostream& out, std::string_view title, const ReportParams& params) {
  out << "# " << title << '\n';
  for (const auto& [k, v] : params) out << "# " << k << '=' << v << '\n';
}

void write_binned_correlation(std::ostream& out, const BinnedCorrelationReport& r, const ReportParams& params) {
  write_report_header(out, "binned correlation", params);
  out << "# label=" << r.label << '\n';
  out << "# rows=" << r.rows << '\n';
  out << "# intervals=" << r.intervals.size() << " non_empty=" << r.non_empty << '\n';
  out << "# semantic_range=" << num(r.min_semantic) << ',' << num(r.max_semantic) << '\n';
  out << "# pearson_r=" << num(r.pearson_r) << '\n';
  out << "interval\tlower\tupper\tcount\tmean_semantic\tmean_external\n";
  for (std::size_t k = 0; k < r.intervals.size(); ++k) {
    const auto& iv = r.intervals[k];
    out << k << '\t' << num(iv.lower) << '\t' << num(iv.upper) << '\t' << iv.count << '\t' << num(iv.mean_semantic)
        << '\t' << num(iv.mean_external) << '\n';
  }
}

void write_histograms(std::ostream& out, const std::vector<std::pair<std::string, Histogram>>& hists,
                      const ReportParams& params) {
  write_report_header(out, "histogram", params);
  out << "group\tbin\tlower\tupper\tcount\n";
  for (const auto& [group, h] : hists) {
    if (h.scheme == HistogramScheme::bins10_unit) out << group << "\tzero\t0\t0\t" << h.zeros << '\n';
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      out << group << '\t' << k << '\t' << num(h.lower[k]) << '\t' << num(h.upper[k]) << '\t' << h.counts[k] << '\n';
    }
  }
}

void write_ppi_edges(std::ostream& out, const PpiPrediction& p, const ReportParams& params) {
  write_report_header(out, "predicted interactions", params);
  out << "# bp_min=" << num(p.bp_min) << '\n';
  out << "# cc_min=" << num(p.cc_min) << '\n';
  out << "# bp_matrix=" << p.bp.measure << '/' << p.bp.strategy << " fingerprint=" << p.bp.fingerprint << '\n';
  out << "# cc_matrix=" << p.cc.measure << '/' << p.cc.strategy << " fingerprint=" << p.cc.fingerprint << '\n';
  out << "# edges=" << p.edges.size() << " proteins=" << p.proteins << " components=" << p.components
      << " largest_component=" << p.largest_component << '\n';
  out << "gene1\tgene2\n";
  for (const auto& e : p.edges) out << e.first << '\t' << e.second << '\n';
}

void write_complex_coverage(std::ostream& out, const ComplexCoverage& c, const ReportParams& params) {
  write_report_header(out, "complex coverage", params);
  out << "# complexes=" << c.rows.size() << " fully_covered=" << c.fully_covered
      << " partially_covered=" << c.partially_covered << " skipped=" << c.skipped << '\n';
  out << "complex\tmembers\tmembers_found\tfully_covered\n";
  for (const auto& r : c.rows) {
    out << r.complex << '\t' << r.members << '\t' << r.members_found << '\t' << (r.fully_covered ? "yes" : "no")
        << '\n';
  }
}

void write_zscore_grid(std::ostream& out, const ZScoreGrid& g, const ReportParams& params) {
  write_report_header(out, "z-score grid", params);
  out << "# positives=" << g.positives << " unscorable=" << g.unscorable << " universe=" << g.universe << '\n';
  out << "# samples=" << g.n_samples << " seed=" << g.seed << '\n';
  out << "bp_bin\tcc_bin\tobserved\trandom_mean\trandom_sd\tz\n";
  for (std::size_t b = 0; b < 10; ++b) {
    for (std::size_t c = 0; c < 10; ++c) {
      const auto& cell = g.at(b, c);
      out << b << '\t' << c << '\t' << cell.observed << '\t' << num(cell.random_mean) << '\t' << num(cell.random_sd)
          << '\t' << (cell.z ? num(*cell.z) : "NA") << '\n';
    }
  }
}

void write_roc_report(std::ostream& out, const RocReport& r, const ReportParams& params) {
  write_report_header(out, "ROC", params);
  out << "# combine=" << to_string(r.combine) << " seed=" << r.seed << '\n';
  out << "# positives=" << r.positives << " negatives=" << r.negatives << " unscorable=" << r.unscorable << '\n';
  out << "# auc_mean=" << num(r.auc_mean) << " auc_sd=" << num(r.auc_sd) << '\n';
  out << "repeat\tauc\n";
  for (std::size_t i = 0; i < r.auc.size(); ++i) out << i << '\t' << num(r.auc[i]) << '\n';
}

}  // namespace gosim
