#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap::cli {

std::string_view to_string(RecordStatus s) noexcept {
  switch (s) {
    case RecordStatus::ok: return "ok";
    case RecordStatus::rejected: return "rejected";
    case RecordStatus::failed: return "failed";
  }
  return "?";
}

namespace {

void reject(RecordOutcome& out, const Rejection& r) {
  out.status = RecordStatus::rejected;
  out.reason = r.reason;
  out.detail = r.detail;
}

}  // namespace

RecordOutcome process_record(const RecordInput& input, const PipelineParams& params) {
  RecordOutcome out;
  out.record_id = input.series.id();
  out.label = input.label;
  try {
    auto cleaned = clean(input.series, params.clean);
    if (auto* r = std::get_if<Rejection>(&cleaned)) {
      reject(out, *r);
      return out;
    }
    const auto& series = std::get<TimeSeries>(cleaned);
    out.delay = select_delay(series, params.dimension, params.n_windows);
    EmbeddingParams ep{params.dimension, out.delay->delay, params.skip, params.n_windows};
    auto cloud = check_cloud_size(embed(series, ep), params.min_points);
    if (auto* r = std::get_if<Rejection>(&cloud)) {
      reject(out, *r);
      return out;
    }
    out.points = std::get<PointCloud>(cloud).size();
    out.diagrams = rips_persistence(distance_matrix(std::get<PointCloud>(cloud)));
    auto feature = extract_feature(out.record_id, out.label, out.diagrams.at(1));
    if (auto* r = std::get_if<Rejection>(&feature)) {
      reject(out, *r);
      return out;
    }
    out.feature = std::get<FeatureRecord>(std::move(feature));
  } catch (const Error& e) {
    out.status = RecordStatus::failed;
    out.detail = e.what();
  }
  return out;
}

std::vector<RecordOutcome> run_pipeline(std::span<const RecordInput> inputs,
                                        const PipelineParams& params, unsigned jobs,
                                        const std::function<void(const RecordOutcome&)>& on_done) {
  std::vector<RecordOutcome> outcomes(inputs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> stop{false};
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= inputs.size()) return;
      try {
        outcomes[i] = process_record(inputs[i], params);
        if (on_done) on_done(outcomes[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
      }
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(inputs.size(), 1)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const RecordOutcome& a, const RecordOutcome& b) { return a.record_id < b.record_id; });
  return outcomes;
}

namespace {

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

std::string format_pipeline_index_csv(std::span<const RecordOutcome> outcomes) {
  std::string out = "record_id,label,status,reason,detail,period,delay,rule,points,birth,lifetime\n";
  for (const auto& o : outcomes) {
    out += o.record_id;
    out += ',';
    out += to_string(o.label);
    out += ',';
    out += to_string(o.status);
    out += ',';
    if (o.reason) out += to_string(*o.reason);
    out += ',' + csv_safe(o.detail) + ',';
    if (o.delay) {
      out += std::to_string(o.delay->period) + ',' + std::to_string(o.delay->delay) + ',';
      out += to_string(o.delay->rule);
    } else {
      out += ",,";
    }
    out += ',' + std::to_string(o.points) + ',';
    if (o.feature) out += format_double(o.feature->birth) + ',' + format_double(o.feature->lifetime);
    else out += ',';
    out += '\n';
  }
  return out;
}

}  // namespace topcap::cli
