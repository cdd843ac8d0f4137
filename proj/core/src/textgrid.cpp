#include "topcap/textgrid.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap {
namespace {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// A logical line: a physical line plus any continuation lines needed to close
// an open string literal.
struct Line {
  std::size_t number;
  std::string text;
};

class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t number = 0;
    std::optional<Line> pending;
    for (auto raw : split(text, '\n')) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      if (pending) {
        pending->text += '\n';
        pending->text += raw;
      } else {
        if (trim(raw).empty()) continue;
        pending = Line{number, std::string(raw)};
      }
      if (std::count(pending->text.begin(), pending->text.end(), '"') % 2 == 0) {
        lines_.push_back(std::move(*pending));
        pending.reset();
      }
    }
    last_line_ = number;
    if (pending) unterminated_ = pending->number;
  }

  const Line& next(std::string_view expecting) {
    if (pos_ >= lines_.size()) {
      if (unterminated_)
        throw TextGridSyntaxError(*unterminated_, "unterminated string literal");
      throw TextGridSyntaxError(last_line_ + 1,
                                "unexpected end of file, expected '" + std::string(expecting) + "'");
    }
    return lines_[pos_++];
  }


 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 0;
  std::optional<std::size_t> unterminated_;
};

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

void expect_header(LineReader& in, std::string_view header) {
  const Line& line = in.next(header);
  if (collapse_spaces(line.text) != header)
    throw TextGridSyntaxError(line.number, "expected '" + std::string(header) + "', found '" +
                                               std::string(trim(line.text)) + "'");
}

std::string unquote(const std::string& value, std::size_t line) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"')
    throw TextGridSyntaxError(line, "expected a quoted string, found '" + value + "'");
  std::string out;
  for (std::size_t i = 1; i + 1 < value.size(); ++i) {
    if (value[i] == '"') {
      if (i + 2 < value.size() && value[i + 1] == '"') {
        out += '"';
        ++i;
        continue;
      }
      throw TextGridSyntaxError(line, "stray quote in string literal");
    }
    out += value[i];
  }
  return out;
}

struct Field {
  std::string value;
  std::size_t line;
};

// Reads "key = value"; `key` is matched after whitespace normalization.
Field field(LineReader& in, std::string_view key) {
  const Line& line = in.next(key);
  const auto eq = line.text.find('=');
  if (eq == std::string::npos || collapse_spaces(std::string_view(line.text).substr(0, eq)) != key)
    throw TextGridSyntaxError(line.number, "expected '" + std::string(key) + " = ...', found '" +
                                               std::string(trim(line.text)) + "'");
  return {std::string(trim(std::string_view(line.text).substr(eq + 1))), line.number};
}

double number_field(LineReader& in, std::string_view key) {
  auto f = field(in, key);
  try {
    return parse_double(f.value);
  } catch (const InvalidArgument&) {
    throw TextGridSyntaxError(f.line, "expected a number for '" + std::string(key) + "', found '" +
                                          f.value + "'");
  }
}

std::size_t count_field(LineReader& in, std::string_view key) {
  auto f = field(in, key);
  long long n = 0;
  try {
    n = parse_int(f.value);
  } catch (const InvalidArgument&) {
    throw TextGridSyntaxError(f.line, "expected a count for '" + std::string(key) + "'");
  }
  if (n < 0) throw TextGridSyntaxError(f.line, "negative count");
  return static_cast<std::size_t>(n);
}

std::string string_field(LineReader& in, std::string_view key) {
  auto f = field(in, key);
  return unquote(f.value, f.line);
}

}  // namespace

std::string normalize_text_encoding(std::string_view raw) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(raw[i]); };
  if (raw.size() >= 3 && byte(0) == 0xEF && byte(1) == 0xBB && byte(2) == 0xBF)
    return std::string(raw.substr(3));
  if (raw.size() < 2) return std::string(raw);
  const bool le = byte(0) == 0xFF && byte(1) == 0xFE;
  const bool be = byte(0) == 0xFE && byte(1) == 0xFF;
  if (!le && !be) return std::string(raw);

  std::string out;
  out.reserve(raw.size() / 2);
  auto unit = [&](std::size_t i) -> char32_t {
    return le ? static_cast<char32_t>(byte(i) | (byte(i + 1) << 8))
              : static_cast<char32_t>((byte(i) << 8) | byte(i + 1));
  };
  for (std::size_t i = 2; i + 1 < raw.size(); i += 2) {
    char32_t cp = unit(i);
    if (cp >= 0xD800 && cp <= 0xDBFF && i + 3 < raw.size()) {
      const char32_t lo = unit(i + 2);
      if (lo >= 0xDC00 && lo <= 0xDFFF) {
        cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
        i += 2;
      }
    }
    append_utf8(out, cp);
  }
  return out;
}

std::vector<PhoneInterval> parse_textgrid(std::string_view text) {
  const std::string utf8 = normalize_text_encoding(text);
  LineReader in(utf8);

  {
    auto f = field(in, "File type");
    const auto kind = unquote(f.value, f.line);
    if (kind == "ooTextFile short")
      throw TextGridSyntaxError(f.line, "short-form TextGrid is not supported");
    if (kind != "ooTextFile") throw TextGridSyntaxError(f.line, "not an ooTextFile: '" + kind + "'");
  }
  {
    auto f = field(in, "Object class");
    if (unquote(f.value, f.line) != "TextGrid")
      throw TextGridSyntaxError(f.line, "object class is not TextGrid");
  }
  number_field(in, "xmin");
  number_field(in, "xmax");
  {
    // Praat writes this one without '=': "tiers? <exists>".
    const Line& line = in.next("tiers?");
    const std::string flag = collapse_spaces(line.text);
    if (flag == "tiers? <absent>") throw MissingTiers("TextGrid has no tiers");
    if (flag != "tiers? <exists>")
      throw TextGridSyntaxError(line.number, "expected 'tiers? <exists>', found '" +
                                                 std::string(trim(line.text)) + "'");
  }
  const std::size_t n_tiers = count_field(in, "size");
  if (n_tiers == 0) throw MissingTiers("TextGrid has no tiers");
  expect_header(in, "item []:");

  std::vector<PhoneInterval> out;
  bool saw_interval_tier = false;
  for (std::size_t t = 1; t <= n_tiers; ++t) {
    expect_header(in, "item [" + std::to_string(t) + "]:");
    const auto cls_field = field(in, "class");
    const std::string cls = unquote(cls_field.value, cls_field.line);
    const std::string name = string_field(in, "name");
    number_field(in, "xmin");
    number_field(in, "xmax");
    if (cls == "IntervalTier") {
      saw_interval_tier = true;
      const std::size_t n = count_field(in, "intervals: size");
      for (std::size_t j = 1; j <= n; ++j) {
        expect_header(in, "intervals [" + std::to_string(j) + "]:");
        const double xmin = number_field(in, "xmin");
        auto xmax_field = field(in, "xmax");
        double xmax = 0.0;
        try {
          xmax = parse_double(xmax_field.value);
        } catch (const InvalidArgument&) {
          throw TextGridSyntaxError(xmax_field.line, "expected a number for 'xmax'");
        }
        const std::string label = string_field(in, "text");
        if (trim(label).empty()) continue;
        if (!(xmin >= 0.0) || !(xmax > xmin))
          throw TextGridSyntaxError(xmax_field.line, "interval bounds must satisfy 0 <= xmin < xmax");
        out.push_back(PhoneInterval{label, xmin, xmax, name});
      }
    } else if (cls == "TextTier") {
      const std::size_t n = count_field(in, "points: size");
      for (std::size_t j = 1; j <= n; ++j) {
        expect_header(in, "points [" + std::to_string(j) + "]:");
        field(in, "number");
        string_field(in, "mark");
      }
    } else {
      throw TextGridSyntaxError(cls_field.line, "unknown tier class '" + cls + "'");
    }
  }
  if (!saw_interval_tier) throw MissingTiers("TextGrid has no IntervalTier");
  return out;
}

std::vector<PhoneInterval> load_textgrid(const std::filesystem::path& path) {
  return parse_textgrid(read_file(path));
}

std::string format_textgrid(std::span<const PhoneInterval> intervals) {
  std::vector<std::string> tiers;
  double xmax = 0.0;
  for (const auto& iv : intervals) {
    if (std::find(tiers.begin(), tiers.end(), iv.tier) == tiers.end()) tiers.push_back(iv.tier);
    xmax = std::max(xmax, iv.end_s);
  }

  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };

  std::string out;
  out += "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  out += "xmin = 0\nxmax = " + format_double(xmax) + "\ntiers? <exists>\n";
  out += "size = " + std::to_string(tiers.size()) + "\nitem []:\n";
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    // Contiguous interval list: labelled intervals sorted by start, gaps empty.
    std::vector<PhoneInterval> cells;
    std::vector<PhoneInterval> mine;
    for (const auto& iv : intervals)
      if (iv.tier == tiers[t]) mine.push_back(iv);
    std::stable_sort(mine.begin(), mine.end(),
                     [](const auto& a, const auto& b) { return a.start_s < b.start_s; });
    double cursor = 0.0;
    for (const auto& iv : mine) {
      if (iv.start_s > cursor) cells.push_back({"", cursor, iv.start_s, iv.tier});
      cells.push_back(iv);
      cursor = std::max(cursor, iv.end_s);
    }
    if (cursor < xmax) cells.push_back({"", cursor, xmax, tiers[t]});

    out += "    item [" + std::to_string(t + 1) + "]:\n";
    out += "        class = \"IntervalTier\"\n";
    out += "        name = " + quote(tiers[t]) + "\n";
    out += "        xmin = 0\n        xmax = " + format_double(xmax) + "\n";
    out += "        intervals: size = " + std::to_string(cells.size()) + "\n";
    for (std::size_t j = 0; j < cells.size(); ++j) {
      out += "        intervals [" + std::to_string(j + 1) + "]:\n";
      out += "            xmin = " + format_double(cells[j].start_s) + "\n";
      out += "            xmax = " + format_double(cells[j].end_s) + "\n";
      out += "            text = " + quote(cells[j].label) + "\n";
    }
  }
  return out;
}

}  // namespace topcap
