#include "topcap/phones.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

std::string_view to_string(Voicing v) noexcept {
  return v == Voicing::voiced ? "voiced" : "voiceless";
}

Voicing parse_voicing(std::string_view s) {
  s = trim(s);
  if (s == "voiced") return Voicing::voiced;
  if (s == "voiceless") return Voicing::voiceless;
  throw InvalidArgument("unknown class label '" + std::string(s) + "'");
}

PhoneClassTable::PhoneClassTable(std::set<std::string> voiced, std::set<std::string> voiceless)
    : voiced_(std::move(voiced)), voiceless_(std::move(voiceless)) {
  for (const auto& label : voiced_) {
    if (label.empty()) throw InvalidArgument("empty phone label in table");
    if (voiceless_.count(label))
      throw InvalidArgument("phone '" + label + "' listed as both voiced and voiceless");
  }
  for (const auto& label : voiceless_)
    if (label.empty()) throw InvalidArgument("empty phone label in table");
}

PhoneClassTable PhoneClassTable::defaults() {
  return PhoneClassTable({"ŋ", "m", "n", "j", "l", "v", "ʒ"}, {"f", "k", "θ", "t", "s", "tʃ"});
}

std::optional<Voicing> PhoneClassTable::classify(std::string_view label) const {
  const std::string key(trim(label));
  if (voiced_.count(key)) return Voicing::voiced;
  if (voiceless_.count(key)) return Voicing::voiceless;
  return std::nullopt;
}

PhoneClassTable parse_phone_table_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("phone table: ") + e.what());
  }
  auto read_set = [&](const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_array())
      throw InvalidArgument(std::string("phone table: missing array '") + key + "'");
    std::set<std::string> out;
    for (const auto& v : j[key]) {
      if (!v.is_string()) throw InvalidArgument("phone table: labels must be strings");
      out.insert(v.get<std::string>());
    }
    return out;
  };
  return PhoneClassTable(read_set("voiced"), read_set("voiceless"));
}

std::string format_phone_table_json(const PhoneClassTable& table) {
  nlohmann::json j;
  j["voiced"] = table.voiced();
  j["voiceless"] = table.voiceless();
  return j.dump(2) + "\n";
}

PhoneClassTable load_phone_table(const std::filesystem::path& path) {
  return parse_phone_table_json(read_file(path));
}

Segmentation segment(const TimeSeries& series, std::span<const PhoneInterval> intervals,
                     const PhoneClassTable& table) {
  if (!series.has_time_axis())
    throw InvalidArgument("segment: series '" + series.id() + "' has no sample rate");
  const double rate = series.sample_rate();
  const int width = static_cast<int>(std::to_string(intervals.size()).size());

  Segmentation out;
  out.decisions.reserve(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    SegmentDecision decision{iv, SegmentStatus::ok};
    const auto voicing = table.classify(iv.label);
    if (!voicing) {
      decision.status = SegmentStatus::unlisted_label;
      ++out.skipped_unlisted;
      out.decisions.push_back(std::move(decision));
      continue;
    }
    const double first = std::round(iv.start_s * rate);
    const double last = std::round(iv.end_s * rate);
    if (first < 0.0 || last > static_cast<double>(series.size()) || last <= first) {
      decision.status = SegmentStatus::out_of_range;
      ++out.skipped_out_of_range;
      out.decisions.push_back(std::move(decision));
      continue;
    }
    decision.first_sample = static_cast<std::size_t>(first);
    decision.last_sample = static_cast<std::size_t>(last);
    const std::string id = fmt::format("{}_{:0{}}_{}", series.id(), i, width, iv.label);
    out.segments.push_back(LabeledSegment{
        series.slice(decision.first_sample, decision.last_sample, id), *voicing, iv});
    out.decisions.push_back(std::move(decision));
  }
  return out;
}

}  // namespace topcap
