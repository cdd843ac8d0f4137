#include "sweep.hpp"

#include <algorithm>
#include <chrono>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap::cli {

void SweepSpec::validate() const {
  auto check = [](const std::vector<std::size_t>& v, const char* what) {
    if (v.empty()) throw InvalidArgument(std::string("sweep: empty ") + what + " list");
    if (std::find(v.begin(), v.end(), std::size_t{0}) != v.end())
      throw InvalidArgument(std::string("sweep: ") + what + " must be >= 1");
  };
  check(dims, "dimension");
  check(skips, "skip");
  if (delays) check(*delays, "delay");
  if (n_windows == 0) throw InvalidArgument("sweep: n_windows must be >= 1");
  if (repeat == 0) throw InvalidArgument("sweep: repeat must be >= 1");
}

std::vector<SweepRow> run_sweep(const TimeSeries& record, const SweepSpec& spec) {
  spec.validate();
  using Clock = std::chrono::steady_clock;
  std::vector<SweepRow> rows;
  for (std::size_t dim : spec.dims) {
    const DelaySelection desired = select_delay(record, dim, spec.n_windows);
    const std::vector<std::size_t> delays = spec.delays ? *spec.delays : std::vector{desired.delay};
    for (std::size_t delay : delays) {
      for (std::size_t skip : spec.skips) {
        SweepRow row{dim, delay, desired, skip, 0, std::nullopt, 0.0};
        row.points = embedded_point_count(record.size(), dim, delay, skip);
        if (row.points > 0) {
          const PointCloud cloud = embed(record, {dim, delay, skip, spec.n_windows});
          double best = 0.0;
          for (std::size_t r = 0; r < spec.repeat; ++r) {
            const auto t0 = Clock::now();
            const auto diagrams = rips_persistence(distance_matrix(cloud));
            const double s = std::chrono::duration<double>(Clock::now() - t0).count();
            if (r == 0 || s < best) best = s;
            if (r == 0) row.max = max_persistence(diagrams.at(1));
          }
          row.seconds = best;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "dim,delay,desired_delay,period,rule,skip,points,birth,max_persistence\n";
  for (const auto& r : rows) {
    out += std::to_string(r.dim) + ',' + std::to_string(r.delay) + ',' +
           std::to_string(r.desired.delay) + ',' + std::to_string(r.desired.period) + ',';
    out += to_string(r.desired.rule);
    out += ',' + std::to_string(r.skip) + ',' + std::to_string(r.points) + ',';
    if (r.max) out += format_double(r.max->birth) + ',' + format_double(r.max->lifetime);
    else out += "empty,empty";
    out += '\n';
  }
  return out;
}

std::string format_sweep_timing_csv(std::span<const SweepRow> rows) {
  std::string out = "dim,delay,skip,points,seconds\n";
  for (const auto& r : rows)
    out += std::to_string(r.dim) + ',' + std::to_string(r.delay) + ',' + std::to_string(r.skip) + ',' +
           std::to_string(r.points) + ',' + format_double(r.seconds) + '\n';
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto part : split(text, ',')) {
    part = trim(part);
    if (part.empty()) throw InvalidArgument("empty entry in list '" + std::string(text) + "'");
    const auto dash = part.find('-', 1);
    if (dash == std::string_view::npos) {
      const long long v = parse_int(part);
      if (v < 1) throw InvalidArgument("list values must be >= 1");
      out.push_back(static_cast<std::size_t>(v));
      continue;
    }
    const long long lo = parse_int(trim(part.substr(0, dash)));
    const long long hi = parse_int(trim(part.substr(dash + 1)));
    if (lo < 1 || hi < lo) throw InvalidArgument("bad range '" + std::string(part) + "'");
    if (hi - lo > 100000) throw InvalidArgument("range too long '" + std::string(part) + "'");
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace topcap::cli
