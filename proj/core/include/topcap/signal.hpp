#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "topcap/outcome.hpp"
#include "topcap/time_series.hpp"

namespace topcap {

struct CleanOptions {
  double amp_threshold = 0.03;
  std::size_t min_length = 500;
};

/// Trims samples before the first and after the last index with
/// |x| > amp_threshold. Rejects when no sample qualifies (no_signal) or the
/// trimmed length is below min_length (too_short).
Screened<TimeSeries> clean(const TimeSeries& series, const CleanOptions& opts = {});

/// Mean-centred, biased, normalised autocorrelation r(0..n-1); r(0) == 1.
/// Throws DegenerateSeries for constant input and InvalidArgument for n < 2.
std::vector<double> autocorrelation(const TimeSeries& series);

/// Smallest lag k >= 1 that tops a local maximum: acf[k-1] < acf[k] > acf[k+1].
/// A flat top acf[a-1] < acf[a] == ... == acf[b] > acf[b+1] counts as a peak at b.
std::optional<std::size_t> first_acf_peak(std::span<const double> acf);

enum class VariationKind { frequency, amplitude, average_line };

std::string_view to_string(VariationKind k) noexcept;
VariationKind parse_variation_kind(std::string_view s);

struct VariationSpec {
  VariationKind kind = VariationKind::frequency;
  int c = 4;
  double t_max = 7.0 * 3.14159265358979323846;
  double dt = 0.01;
};

/// cos carrier modulated by the ramp R(t) = c/4 + (1 - c/4) t / t_max, sampled
/// at t_n = n dt for n = 0..floor(t_max/dt):
///   frequency     cos(R(t) t)
///   amplitude     R(t) cos(t)
///   average_line  cos(t) + R(t)
/// The result has sample_rate 0.
TimeSeries gen_variation(const VariationSpec& spec);

}  // namespace topcap
