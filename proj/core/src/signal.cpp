#include "topcap/signal.hpp"

#include <cmath>
#include <string>

#include "topcap/error.hpp"
#include "topcap/rng.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

std::string_view to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::no_signal: return "no-signal";
    case RejectReason::too_short: return "too-short";
    case RejectReason::too_few_points: return "too-few-points";
    case RejectReason::empty_diagram: return "empty-diagram";
  }
  return "unknown";
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Screened<TimeSeries> clean(const TimeSeries& series, const CleanOptions& opts) {
  const auto x = series.samples();
  std::size_t first = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > opts.amp_threshold) {
      first = i;
      break;
    }
  }
  if (first == x.size())
    return Rejection{RejectReason::no_signal, "no sample exceeds the amplitude threshold"};
  std::size_t last = first;
  for (std::size_t i = x.size(); i-- > first;) {
    if (std::abs(x[i]) > opts.amp_threshold) {
      last = i;
      break;
    }
  }
  const std::size_t length = last - first + 1;
  if (length < opts.min_length)
    return Rejection{RejectReason::too_short, "trimmed length " + std::to_string(length) + " < " +
                                                  std::to_string(opts.min_length)};
  return series.slice(first, last + 1, series.id());
}

std::vector<double> autocorrelation(const TimeSeries& series) {
  const auto x = series.samples();
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("autocorrelation needs at least 2 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = x[i] - mean;

  double denom = 0.0;
  for (double v : centred) denom += v * v;
  if (!(denom > 0.0)) throw DegenerateSeries("series '" + series.id() + "' has zero variance");

  std::vector<double> r(n);
  r[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) acc += centred[t] * centred[t + k];
    r[k] = acc / denom;
  }
  return r;
}

std::optional<std::size_t> first_acf_peak(std::span<const double> acf) {
  std::size_t k = 1;
  while (k + 1 < acf.size()) {
    if (!(acf[k] > acf[k - 1])) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 1 < acf.size() && acf[end + 1] == acf[k]) ++end;
    if (end + 1 >= acf.size()) return std::nullopt;
    if (acf[end + 1] < acf[end]) return end;
    k = end + 1;
  }
  return std::nullopt;
}

std::string_view to_string(VariationKind k) noexcept {
  switch (k) {
    case VariationKind::frequency: return "frequency";
    case VariationKind::amplitude: return "amplitude";
    case VariationKind::average_line: return "average_line";
  }
  return "unknown";
}

VariationKind parse_variation_kind(std::string_view s) {
  s = trim(s);
  if (s == "frequency") return VariationKind::frequency;
  if (s == "amplitude") return VariationKind::amplitude;
  if (s == "average_line" || s == "average-line") return VariationKind::average_line;
  throw InvalidArgument("unknown variation kind '" + std::string(s) + "'");
}

TimeSeries gen_variation(const VariationSpec& spec) {
  if (spec.c < 1 || spec.c > 4) throw InvalidArgument("variation c must be in {1,2,3,4}");
  if (!(spec.dt > 0.0) || !(spec.t_max > 0.0))
    throw InvalidArgument("variation dt and t_max must be positive");

  const auto count = static_cast<std::size_t>(std::floor(spec.t_max / spec.dt + 1e-9)) + 1;
  const double c4 = spec.c / 4.0;
  std::vector<double> samples(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double t = spec.dt * static_cast<double>(n);
    const double ramp = c4 + (1.0 - c4) * t / spec.t_max;
    switch (spec.kind) {
      case VariationKind::frequency: samples[n] = std::cos(ramp * t); break;
      case VariationKind::amplitude: samples[n] = ramp * std::cos(t); break;
      case VariationKind::average_line: samples[n] = std::cos(t) + ramp; break;
    }
  }
  return TimeSeries(std::string(to_string(spec.kind)) + "_c" + std::to_string(spec.c),
                    std::move(samples), 0.0);
}

}  // namespace topcap
