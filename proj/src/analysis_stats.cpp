#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "gosim/analysis.hpp"
#include "text.hpp"

namespace gosim {

namespace {
constexpr double kEdgeTolerance = 1e-9;

// Equal-width bins over [lo, hi] with the last one closed.
std::size_t range_bin(double v, double lo, double hi, std::size_t bins) {
  if (!(hi > lo)) return 0;
  const double pos = (v - lo) / (hi - lo) * static_cast<double>(bins);
  if (pos <= 0) return 0;
  return std::min(static_cast<std::size_t>(pos), bins - 1);
}

void fill_edges(Histogram& h, double lo, double hi, std::size_t bins) {
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    h.lower.push_back(lo + width * static_cast<double>(k));
    h.upper.push_back(k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1));
  }
}
}  // namespace

std::string_view to_string(HistogramScheme s) {
  switch (s) {
    case HistogramScheme::bins21_zero_first: return "bins21_zero_first";
    case HistogramScheme::bins5_range: return "bins5_range";
    case HistogramScheme::bins10_unit: return "bins10_unit";
  }
  return "unknown";
}

std::optional<HistogramScheme> parse_histogram_scheme(std::string_view name) {
  if (name == "bins21_zero_first" || name == "bins21") return HistogramScheme::bins21_zero_first;
  if (name == "bins5_range" || name == "bins5") return HistogramScheme::bins5_range;
  if (name == "bins10_unit" || name == "bins10") return HistogramScheme::bins10_unit;
  return std::nullopt;
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), zeros);
}

std::size_t unit_bin(double v) {
  if (v <= 0) return 0;
  const double pos = std::ceil(v * 10.0 - kEdgeTolerance) - 1.0;
  if (pos <= 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(pos), 9);
}

Histogram histogram(std::span<const double> values, HistogramScheme scheme, std::optional<ValueRange> range) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values to bin");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "histogram values must be finite");
  }
  Histogram h;
  h.scheme = scheme;
  switch (scheme) {
    case HistogramScheme::bins10_unit: {
      for (std::size_t k = 0; k < 10; ++k) {
        h.lower.push_back(static_cast<double>(k) / 10.0);
        h.upper.push_back(static_cast<double>(k + 1) / 10.0);
      }
      h.counts.assign(10, 0);
      for (double v : values) {
        if (v < 0) throw Error(ErrorCode::InvalidArgument, "unit histogram needs non-negative values");
        if (v == 0) {
          ++h.zeros;
        } else {
          ++h.counts[unit_bin(v)];
        }
      }
      break;
    }
    case HistogramScheme::bins5_range: {
      ValueRange r = range.value_or(ValueRange{*std::min_element(values.begin(), values.end()),
                                               *std::max_element(values.begin(), values.end())});
      fill_edges(h, r.min, r.max, 5);
      h.counts.assign(5, 0);
      for (double v : values) ++h.counts[range_bin(v, r.min, r.max, 5)];
      break;
    }
    case HistogramScheme::bins21_zero_first: {
      h.lower.push_back(0);
      h.upper.push_back(0);
      h.counts.assign(21, 0);
      std::optional<ValueRange> r = range;
      if (!r) {
        for (double v : values) {
          if (v == 0) continue;
          if (!r) r = ValueRange{v, v};
          r->min = std::min(r->min, v);
          r->max = std::max(r->max, v);
        }
      }
      if (!r) r = ValueRange{0, 0};
      fill_edges(h, r->min, r->max, 20);
      for (double v : values) {
        if (v == 0) {
          ++h.counts[0];
        } else {
          ++h.counts[1 + range_bin(v, r->min, r->max, 20)];
        }
      }
      break;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

double chi_square_survival(double statistic, std::size_t df) {
  if (df == 0) return 1.0;
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square(std::span<const std::size_t> observed, std::span<const std::size_t> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw Error(ErrorCode::IncompatibleHistograms, "histograms have " + std::to_string(observed.size()) + " and " +
                                                       std::to_string(expected.size()) + " bins");
  }
  const double total_o = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
  const double total_e = static_cast<double>(std::accumulate(expected.begin(), expected.end(), std::size_t{0}));
  if (total_o == 0 || total_e == 0) throw Error(ErrorCode::IncompatibleHistograms, "a histogram is empty");

  // Merge zero-expectation bins into the following bin.
  std::vector<double> obs, exp;
  double carry_o = 0, carry_e = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    carry_o += static_cast<double>(observed[i]);
    carry_e += static_cast<double>(expected[i]);
    if (carry_e > 0) {
      obs.push_back(carry_o);
      exp.push_back(carry_e);
      carry_o = carry_e = 0;
    }
  }
  if (carry_o > 0) obs.back() += carry_o;  // trailing zero-expectation bins go left

  ChiSquareResult r;
  r.bins_used = obs.size();
  if (r.bins_used < 2) {
    throw Error(ErrorCode::IncompatibleHistograms, "fewer than two bins carry expected counts");
  }
  const double scale = total_o / total_e;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double e = exp[i] * scale;
    r.statistic += (obs[i] - e) * (obs[i] - e) / e;
  }
  r.df = r.bins_used - 1;
  r.p_value = chi_square_survival(r.statistic, r.df);
  return r;
}

ChiSquareResult chi_square(const Histogram& observed, const Histogram& expected) {
  if (observed.scheme != expected.scheme) {
    throw Error(ErrorCode::IncompatibleHistograms, "histograms use different binning schemes");
  }
  auto with_zeros = [](const Histogram& h) {
    std::vector<std::size_t> v;
    if (h.scheme == HistogramScheme::bins10_unit) v.push_back(h.zeros);
    v.insert(v.end(), h.counts.begin(), h.counts.end());
    return v;
  };
  return chi_square(with_zeros(observed), with_zeros(expected));
}

ChiSquareResult chi_square_homogeneity(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::IncompatibleHistograms, "histograms have different bin counts");
  }
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::size_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::size_t{0}));
  if (na == 0 || nb == 0) throw Error(ErrorCode::IncompatibleHistograms, "a histogram is empty");
  const double n = na + nb;
  ChiSquareResult r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0) continue;
    ++r.bins_used;
    const double ea = na * col / n, eb = nb * col / n;
    const double da = static_cast<double>(a[i]) - ea, db = static_cast<double>(b[i]) - eb;
    r.statistic += da * da / ea + db * db / eb;
  }
  if (r.bins_used < 2) throw Error(ErrorCode::IncompatibleHistograms, "fewer than two occupied bins");
  r.df = r.bins_used - 1;
  r.p_value = chi_square_survival(r.statistic, r.df);
  return r;
}

}  // namespace gosim
