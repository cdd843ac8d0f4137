#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topcap/embedding.hpp"
#include "topcap/features.hpp"
#include "topcap/outcome.hpp"
#include "topcap/persistence.hpp"
#include "topcap/phones.hpp"
#include "topcap/signal.hpp"

namespace topcap::cli {

struct PipelineParams {
  CleanOptions clean;
  std::size_t dimension = 100;
  std::size_t n_windows = 6;
  std::size_t skip = 5;
  std::size_t min_points = 40;
};

struct RecordInput {
  TimeSeries series;
  Voicing label;
};

enum class RecordStatus { ok, rejected, failed };

std::string_view to_string(RecordStatus s) noexcept;

struct RecordOutcome {
  std::string record_id;
  Voicing label = Voicing::voiced;
  RecordStatus status = RecordStatus::ok;
  std::optional<RejectReason> reason;
  std::string detail;  // rejection detail or error message
  std::optional<DelaySelection> delay;
  std::size_t points = 0;
  std::vector<PersistenceDiagram> diagrams;
  std::optional<FeatureRecord> feature;
};

/// clean, select_delay, embed, check_cloud_size, rips_persistence,
/// extract_feature. Screening rejections and per-record library errors are
/// reported in the outcome; nothing is thrown for input-dependent failures.
RecordOutcome process_record(const RecordInput& input, const PipelineParams& params);

/// Runs process_record over `inputs` on up to `jobs` threads. Outcomes come
/// back sorted by record id. `on_done` (optional) runs on the worker thread
/// right after each record finishes.
std::vector<RecordOutcome> run_pipeline(std::span<const RecordInput> inputs,
                                        const PipelineParams& params, unsigned jobs,
                                        const std::function<void(const RecordOutcome&)>& on_done = {});

// record_id,label,status,reason,detail,period,delay,rule,points,birth,lifetime
std::string format_pipeline_index_csv(std::span<const RecordOutcome> outcomes);

}  // namespace topcap::cli
