#include "topcap/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

TimeSeries::TimeSeries(std::string id, std::vector<double> samples, double sample_rate)
    : id_(std::move(id)), samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw InvalidArgument("time series '" + id_ + "' is empty");
  if (!(sample_rate_ >= 0.0) || !std::isfinite(sample_rate_))
    throw InvalidArgument("sample rate must be finite and nonnegative");
  for (double x : samples_)
    if (!std::isfinite(x)) throw InvalidArgument("time series '" + id_ + "' has a non-finite sample");
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t last, std::string id) const {
  if (first >= last || last > samples_.size())
    throw InvalidArgument("slice [" + std::to_string(first) + ", " + std::to_string(last) +
                          ") out of range for length " + std::to_string(samples_.size()));
  return TimeSeries(std::move(id),
                    std::vector<double>(samples_.begin() + static_cast<std::ptrdiff_t>(first),
                                        samples_.begin() + static_cast<std::ptrdiff_t>(last)),
                    sample_rate_);
}

TimeSeries TimeSeries::with_id(std::string id) const {
  TimeSeries copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

bool operator==(const TimeSeries& a, const TimeSeries& b) {
  return a.id() == b.id() && a.sample_rate() == b.sample_rate() &&
         std::equal(a.samples().begin(), a.samples().end(), b.samples().begin(), b.samples().end());
}

std::string format_series_csv(const TimeSeries& series, bool header) {
  std::string out;
  out.reserve(series.size() * 24 + 8);
  if (header) out += "value\n";
  for (double x : series.samples()) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

TimeSeries parse_series_csv(const std::string& text, std::string id, double sample_rate) {
  std::vector<double> values;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    try {
      values.push_back(parse_double(line));
    } catch (const InvalidArgument& e) {
      if (line_no == 1) continue;  // header row
      throw InvalidArgument("series CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return TimeSeries(std::move(id), std::move(values), sample_rate);
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  write_file_atomic(path, format_series_csv(series));
}

TimeSeries read_series_csv(const std::filesystem::path& path, double sample_rate) {
  return parse_series_csv(read_file(path), path.stem().string(), sample_rate);
}

}  // namespace topcap
