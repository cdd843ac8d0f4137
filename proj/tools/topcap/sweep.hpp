#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topcap/embedding.hpp"
#include "topcap/persistence.hpp"
#include "topcap/time_series.hpp"

namespace topcap::cli {

struct SweepSpec {
  std::vector<std::size_t> dims;
  std::optional<std::vector<std::size_t>> delays;  // nullopt: desired delay per dimension
  std::vector<std::size_t> skips;
  std::size_t n_windows = 6;
  std::size_t repeat = 1;  // timing is the minimum over this many runs

  void validate() const;
};

struct SweepRow {
  std::size_t dim = 0;
  std::size_t delay = 0;
  DelaySelection desired{};
  std::size_t skip = 0;
  std::size_t points = 0;           // 0 when the window does not fit
  std::optional<MaxPersistence> max;  // empty: infeasible window or no loop
  double seconds = 0.0;             // distance matrix + persistence
};

/// One row per (dim, delay, skip), in that nesting order.
std::vector<SweepRow> run_sweep(const TimeSeries& record, const SweepSpec& spec);

// dim,delay,desired_delay,period,rule,skip,points,birth,max_persistence
// with "empty" in the last two columns when there is nothing to report.
std::string format_sweep_csv(std::span<const SweepRow> rows);
// dim,delay,skip,points,seconds
std::string format_sweep_timing_csv(std::span<const SweepRow> rows);

/// Parses "1,2,5" or "1-10" (or a mix such as "1-3,8").
std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace topcap::cli
