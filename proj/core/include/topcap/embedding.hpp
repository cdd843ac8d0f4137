#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topcap/outcome.hpp"
#include "topcap/time_series.hpp"

namespace topcap {

struct EmbeddingParams {
  std::size_t dimension = 100;
  std::size_t delay = 1;
  std::size_t skip = 5;
  std::size_t n_windows = 6;  // multiplier n in tau = n T / d

  void validate() const;
};

/// Ordered points in R^d, stored row-major.
class PointCloud {
 public:
  PointCloud(std::size_t dimension, std::vector<double> coords, std::string source_id = {});

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::string& source_id() const noexcept { return source_id_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::string source_id_;
};

/// Number of points the delay embedding emits:
/// floor((n - (d-1) tau - 1) / skip) + 1, or 0 when the window does not fit.
std::size_t embedded_point_count(std::size_t series_length, std::size_t dimension,
                                 std::size_t delay, std::size_t skip) noexcept;

/// Sliding-window embedding: p_k[j] = x[k + j tau] for k = 0, skip, 2 skip, ...
/// while k + (d-1) tau <= n - 1. Throws WindowExceedsSeries if (d-1) tau + 1 > n.
PointCloud embed(const TimeSeries& series, const EmbeddingParams& params);

enum class DelayRule { period, clamped_to_one, series_fit };

std::string_view to_string(DelayRule r) noexcept;

struct DelaySelection {
  std::size_t delay;
  std::size_t period;  // first ACF peak, in samples
  DelayRule rule;
};

/// tau = round(n T / d) with T the first ACF peak; 0 becomes 1; when the
/// window (d-1) tau + 1 exceeds the series, tau = floor(n / d).
/// Throws NoPeriod when the ACF has no peak and SeriesTooShort when
/// floor(|S| / d) == 0.
DelaySelection select_delay(const TimeSeries& series, std::size_t dimension, std::size_t n_windows);

/// Same rule from a known period; used by select_delay and the sweep harness.
DelaySelection delay_from_period(std::size_t period, std::size_t series_length,
                                 std::size_t dimension, std::size_t n_windows);

Screened<PointCloud> check_cloud_size(PointCloud cloud, std::size_t min_points = 40);

// One point per row, optional x0,...,x{d-1} header.
std::string format_cloud_csv(const PointCloud& cloud, bool header = true);
PointCloud parse_cloud_csv(const std::string& text, std::string source_id = {});

}  // namespace topcap
