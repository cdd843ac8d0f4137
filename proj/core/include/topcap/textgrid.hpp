#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topcap {

struct PhoneInterval {
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string tier;

  friend bool operator==(const PhoneInterval&, const PhoneInterval&) = default;
};

/// Parses Praat long-form TextGrid text. UTF-8 (with or without BOM) and
/// UTF-16 with BOM are accepted. Returns the labelled intervals of every
/// IntervalTier in file order; intervals whose text is empty or whitespace
/// are dropped. Throws TextGridSyntaxError (with line number) or MissingTiers.
std::vector<PhoneInterval> parse_textgrid(std::string_view text);

std::vector<PhoneInterval> load_textgrid(const std::filesystem::path& path);

/// Writes intervals as a long-form TextGrid, one IntervalTier per distinct
/// tier name (first-appearance order). Gaps are filled with empty intervals.
std::string format_textgrid(std::span<const PhoneInterval> intervals);

/// Converts UTF-16 (BOM required) to UTF-8; strips a UTF-8 BOM; otherwise
/// returns the input unchanged.
std::string normalize_text_encoding(std::string_view raw);

}  // namespace topcap
