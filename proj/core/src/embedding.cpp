#include "topcap/embedding.hpp"

#include <cmath>

#include "topcap/error.hpp"
#include "topcap/signal.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

void EmbeddingParams::validate() const {
  if (dimension < 2) throw InvalidArgument("embedding dimension must be at least 2");
  if (delay < 1) throw InvalidArgument("embedding delay must be at least 1");
  if (skip < 1) throw InvalidArgument("embedding skip must be at least 1");
  if (n_windows < 1) throw InvalidArgument("window multiplier must be at least 1");
}

PointCloud::PointCloud(std::size_t dimension, std::vector<double> coords, std::string source_id)
    : dim_(dimension), coords_(std::move(coords)), source_id_(std::move(source_id)) {
  if (dim_ == 0) throw InvalidArgument("point cloud dimension must be positive");
  if (coords_.empty()) throw InvalidArgument("point cloud is empty");
  if (coords_.size() % dim_ != 0)
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
  for (double x : coords_)
    if (!std::isfinite(x)) throw InvalidArgument("point cloud has a non-finite coordinate");
}

std::size_t embedded_point_count(std::size_t series_length, std::size_t dimension,
                                 std::size_t delay, std::size_t skip) noexcept {
  if (dimension == 0 || skip == 0) return 0;
  const std::size_t span = (dimension - 1) * delay;
  if (span + 1 > series_length) return 0;
  return (series_length - span - 1) / skip + 1;
}

PointCloud embed(const TimeSeries& series, const EmbeddingParams& params) {
  params.validate();
  const std::size_t n = series.size();
  const std::size_t d = params.dimension;
  const std::size_t tau = params.delay;
  const std::size_t count = embedded_point_count(n, d, tau, params.skip);
  if (count == 0)
    throw WindowExceedsSeries("window (d-1)*tau+1 = " + std::to_string((d - 1) * tau + 1) +
                              " exceeds series length " + std::to_string(n));
  const auto x = series.samples();
  std::vector<double> coords;
  coords.reserve(count * d);
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t k = p * params.skip;
    for (std::size_t j = 0; j < d; ++j) coords.push_back(x[k + j * tau]);
  }
  return PointCloud(d, std::move(coords), series.id());
}

std::string_view to_string(DelayRule r) noexcept {
  switch (r) {
    case DelayRule::period: return "period";
    case DelayRule::clamped_to_one: return "clamped-to-one";
    case DelayRule::series_fit: return "series-fit";
  }
  return "unknown";
}

DelaySelection delay_from_period(std::size_t period, std::size_t series_length,
                                 std::size_t dimension, std::size_t n_windows) {
  if (dimension < 2) throw InvalidArgument("embedding dimension must be at least 2");
  // std::round is half-away-from-zero.
  const double raw = static_cast<double>(n_windows) * static_cast<double>(period) /
                     static_cast<double>(dimension);
  auto tau = static_cast<std::size_t>(std::round(raw));
  DelayRule rule = DelayRule::period;
  if (tau == 0) {
    tau = 1;
    rule = DelayRule::clamped_to_one;
  }
  if ((dimension - 1) * tau + 1 > series_length) {
    tau = series_length / dimension;
    rule = DelayRule::series_fit;
    if (tau == 0)
      throw SeriesTooShort("series of length " + std::to_string(series_length) +
                           " is shorter than the embedding dimension " + std::to_string(dimension));
  }
  return {tau, period, rule};
}

DelaySelection select_delay(const TimeSeries& series, std::size_t dimension, std::size_t n_windows) {
  const auto acf = autocorrelation(series);
  const auto period = first_acf_peak(acf);
  if (!period) throw NoPeriod("no autocorrelation peak in series '" + series.id() + "'");
  return delay_from_period(*period, series.size(), dimension, n_windows);
}

Screened<PointCloud> check_cloud_size(PointCloud cloud, std::size_t min_points) {
  if (cloud.size() < min_points)
    return Rejection{RejectReason::too_few_points, std::to_string(cloud.size()) + " points < " +
                                                       std::to_string(min_points)};
  return cloud;
}

std::string format_cloud_csv(const PointCloud& cloud, bool header) {
  std::string out;
  const std::size_t d = cloud.dimension();
  if (header) {
    for (std::size_t j = 0; j < d; ++j) {
      if (j) out += ',';
      out += 'x';
      out += std::to_string(j);
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < d; ++j) {
      if (j) out += ',';
      out += format_double(p[j]);
    }
    out += '\n';
  }
  return out;
}

namespace {

bool looks_numeric(std::string_view field) {
  try {
    parse_double(field);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

}  // namespace

PointCloud parse_cloud_csv(const std::string& text, std::string source_id) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (line_no == 1 && !fields.empty() && !looks_numeric(fields[0])) {  // header row
      dim = fields.size();
      continue;
    }
    if (dim == 0) dim = fields.size();
    if (fields.size() != dim)
      throw InvalidArgument("cloud CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(dim) + " columns");
    for (auto f : fields) coords.push_back(parse_double(f));
  }
  if (dim == 0) throw InvalidArgument("cloud CSV has no rows");
  return PointCloud(dim, std::move(coords), std::move(source_id));
}

}  // namespace topcap
