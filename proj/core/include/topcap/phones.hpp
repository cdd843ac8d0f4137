#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topcap/textgrid.hpp"
#include "topcap/time_series.hpp"

namespace topcap {

enum class Voicing { voiced, voiceless };

std::string_view to_string(Voicing v) noexcept;
Voicing parse_voicing(std::string_view s);

/// Phone labels grouped by voicing. The two sets are disjoint.
class PhoneClassTable {
 public:
  PhoneClassTable(std::set<std::string> voiced, std::set<std::string> voiceless);

  /// ŋ m n j l v ʒ / f k θ t s tʃ
  static PhoneClassTable defaults();

  std::optional<Voicing> classify(std::string_view label) const;
  const std::set<std::string>& voiced() const noexcept { return voiced_; }
  const std::set<std::string>& voiceless() const noexcept { return voiceless_; }

 private:
  std::set<std::string> voiced_;
  std::set<std::string> voiceless_;
};

/// JSON object {"voiced": [...], "voiceless": [...]}.
PhoneClassTable parse_phone_table_json(std::string_view json);
std::string format_phone_table_json(const PhoneClassTable& table);
PhoneClassTable load_phone_table(const std::filesystem::path& path);

struct LabeledSegment {
  TimeSeries series;
  Voicing voicing;
  PhoneInterval interval;
};

enum class SegmentStatus { ok, unlisted_label, out_of_range };

struct SegmentDecision {
  PhoneInterval interval;
  SegmentStatus status;
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;  // exclusive
};

struct Segmentation {
  std::vector<LabeledSegment> segments;
  std::vector<SegmentDecision> decisions;  // one per input interval, input order
  std::size_t skipped_unlisted = 0;
  std::size_t skipped_out_of_range = 0;
};

/// Slices one sub-series per interval whose label is in `table`, at
/// [round(start*rate), round(end*rate)). Intervals reaching past the end of
/// the series are skipped and counted. Segment ids are
/// "<series id>_<index>_<label>" with a zero-padded interval index.
Segmentation segment(const TimeSeries& series, std::span<const PhoneInterval> intervals,
                     const PhoneClassTable& table);

}  // namespace topcap
