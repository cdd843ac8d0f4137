#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace topcap {

/// Uniformly sampled real-valued signal.
///
/// A sample rate of 0 marks an abstract (synthetic) time axis; operations that
/// need seconds reject such series. Construction enforces a nonempty, finite
/// sample vector.
class TimeSeries {
 public:
  TimeSeries(std::string id, std::vector<double> samples, double sample_rate = 0.0);

  const std::string& id() const noexcept { return id_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double sample_rate() const noexcept { return sample_rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }

  bool has_time_axis() const noexcept { return sample_rate_ > 0.0; }

  /// Copy of samples [first, last) under a new id.
  TimeSeries slice(std::size_t first, std::size_t last, std::string id) const;

  TimeSeries with_id(std::string id) const;

 private:
  std::string id_;
  std::vector<double> samples_;
  double sample_rate_;
};

bool operator==(const TimeSeries& a, const TimeSeries& b);

// One amplitude per line, optional `value` header. Values are written with
// 17 significant digits so a write/read cycle is exact.
std::string format_series_csv(const TimeSeries& series, bool header = true);
TimeSeries parse_series_csv(const std::string& text, std::string id, double sample_rate = 0.0);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::filesystem::path& path, double sample_rate = 0.0);

}  // namespace topcap
