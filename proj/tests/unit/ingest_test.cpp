#include <cstring>

#include "doctest.h"
#include "oracles.hpp"
#include "topcap/error.hpp"
#include "topcap/phones.hpp"
#include "topcap/text_util.hpp"
#include "topcap/textgrid.hpp"
#include "topcap/wav.hpp"

using namespace topcap;

namespace {

std::vector<std::uint8_t> wav_bytes(std::span<const std::int16_t> samples, std::uint32_t rate) {
  return encode_wav_pcm16(samples, rate);
}

void put16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = v & 0xff;
  b[at + 1] = v >> 8;
}

TimeSeries decode(const std::vector<std::uint8_t>& b) { return decode_wav(b, "w"); }

const char* kMinimalGrid = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1.2
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 1.2
        intervals: size = 3
        intervals [1]:
            xmin = 0
            xmax = 0.5
            text = ""
        intervals [2]:
            xmin = 0.5
            xmax = 0.61
            text = "m"
        intervals [3]:
            xmin = 0.61
            xmax = 1.2
            text = "   "
)";

}  // namespace

TEST_SUITE("signal") {
  TEST_CASE("wav decoding normalises int16") {
    const std::int16_t raw[] = {0, 16384, -32768};
    const auto s = decode(wav_bytes(raw, 22050));
    REQUIRE(s.size() == 3);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == 0.5);
    CHECK(s[2] == -1.0);
    CHECK(s.sample_rate() == 22050.0);
  }

  TEST_CASE("wav sample rates and length") {
    for (std::uint32_t rate : {22050u, 16000u, 8000u}) {
      std::vector<std::int16_t> raw(1234);
      for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::int16_t>(i * 37);
      const auto s = decode(wav_bytes(raw, rate));
      CHECK(s.size() == raw.size());
      CHECK(s.sample_rate() == rate);
      CHECK(s[1000] == static_cast<std::int16_t>(37000) / 32768.0);
    }
  }

  TEST_CASE("wav file id is the stem") {
    TempDir dir("wav");
    const std::int16_t raw[] = {1, 2, 3};
    save_wav_pcm16(dir.path / "speaker01.wav", raw, 16000);
    const auto s = load_wav(dir.path / "speaker01.wav");
    CHECK(s.id() == "speaker01");
    CHECK(s.size() == 3);
    CHECK_THROWS_AS(load_wav(dir.path / "missing.wav"), IoError);
  }

  TEST_CASE("wav encoding errors are distinct from structural errors") {
    const std::int16_t raw[] = {1, 2, 3, 4};
    auto stereo = wav_bytes(raw, 16000);
    put16(stereo, 22, 2);  // channels
    CHECK_THROWS_AS(decode(stereo), UnsupportedEncoding);

    auto eight_bit = wav_bytes(raw, 16000);
    put16(eight_bit, 34, 8);
    CHECK_THROWS_AS(decode(eight_bit), UnsupportedEncoding);

    auto float_fmt = wav_bytes(raw, 16000);
    put16(float_fmt, 20, 3);
    CHECK_THROWS_AS(decode(float_fmt), UnsupportedEncoding);

    auto bad_magic = wav_bytes(raw, 16000);
    std::memcpy(bad_magic.data(), "RIFX", 4);
    CHECK_THROWS_AS(decode(bad_magic), MalformedWav);

    auto truncated = wav_bytes(raw, 16000);
    truncated.resize(30);
    CHECK_THROWS_AS(decode(truncated), MalformedWav);

    CHECK_THROWS_AS(decode({}), MalformedWav);
  }

  TEST_CASE("wav skips unknown chunks") {
    const std::int16_t raw[] = {100, -100};
    auto b = wav_bytes(raw, 16000);
    // Insert a LIST chunk between fmt and data.
    std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 4, 0, 0, 0, 'a', 'b', 'c', 'd'};
    b.insert(b.begin() + 36, list.begin(), list.end());
    const std::uint32_t riff_size = static_cast<std::uint32_t>(b.size() - 8);
    std::memcpy(b.data() + 4, &riff_size, 4);
    const auto s = decode(b);
    CHECK(s.size() == 2);
    CHECK(s[0] == 100 / 32768.0);
  }

  TEST_CASE("textgrid minimal tier") {
    const auto iv = parse_textgrid(kMinimalGrid);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0] == PhoneInterval{"m", 0.5, 0.61, "phones"});
  }

  TEST_CASE("textgrid truncated file names a line") {
    const std::string full = kMinimalGrid;
    const std::string cut = full.substr(0, full.find("intervals [2]"));
    try {
      parse_textgrid(cut);
      FAIL("expected a syntax error");
    } catch (const TextGridSyntaxError& e) {
      CHECK(e.line() > 0);
      CHECK(std::string(e.what()).find("line ") == 0);
    }
  }

  TEST_CASE("textgrid syntax and tier errors") {
    CHECK_THROWS_AS(parse_textgrid("File type = \"ooTextFile short\"\n"), TextGridSyntaxError);
    std::string garbled = kMinimalGrid;
    garbled.replace(garbled.find("xmax = 0.61"), 11, "xmax = abc");
    CHECK_THROWS_AS(parse_textgrid(garbled), TextGridSyntaxError);

    const char* no_tiers = "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\nxmin = 0\nxmax = 1\ntiers? <absent>\n";
    CHECK_THROWS_AS(parse_textgrid(no_tiers), MissingTiers);

    const char* text_only = R"(File type = "ooTextFile"
Object class = "TextGrid"
xmin = 0
xmax = 1
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "TextTier"
        name = "events"
        xmin = 0
        xmax = 1
        points: size = 1
        points [1]:
            number = 0.5
            mark = "click"
)";
    CHECK_THROWS_AS(parse_textgrid(text_only), MissingTiers);
  }

  TEST_CASE("textgrid multiple tiers, quotes and UTF-16") {
    std::vector<PhoneInterval> in = {
        {"ðə", 0.0, 0.3, "words"},
        {"say \"hi\"", 0.3, 0.9, "words"},
        {"ŋ", 0.1, 0.2, "phones"},
        {"tʃ", 0.25, 0.4, "phones"},
    };
    const std::string text = format_textgrid(in);
    CHECK(parse_textgrid(text) == in);

    // UTF-16 LE with BOM.
    std::string utf16 = "\xFF\xFE";
    // naive widening is enough for this ASCII-only document
    const std::string ascii = kMinimalGrid;
    for (char c : ascii) {
      utf16 += c;
      utf16 += '\0';
    }
    CHECK(parse_textgrid(utf16) == parse_textgrid(kMinimalGrid));
    CHECK(parse_textgrid("\xEF\xBB\xBF" + ascii) == parse_textgrid(kMinimalGrid));
  }

  TEST_CASE("textgrid round trip keeps label, start and end") {
    std::vector<PhoneInterval> in;
    double t = 0.0;
    for (int i = 0; i < 40; ++i) {
      const double len = 0.013 * (1 + i % 7);
      in.push_back({i % 3 ? "s" : "m", t + 0.001 * (i % 2), t + len, "phones"});
      t += len + 0.002;
    }
    CHECK(parse_textgrid(format_textgrid(in)) == in);
  }

  TEST_CASE("phone table") {
    const auto table = PhoneClassTable::defaults();
    CHECK(table.classify("m") == Voicing::voiced);
    CHECK(table.classify("ʒ") == Voicing::voiced);
    CHECK(table.classify("tʃ") == Voicing::voiceless);
    CHECK(table.classify("θ") == Voicing::voiceless);
    CHECK_FALSE(table.classify("d").has_value());
    CHECK_FALSE(table.classify("h").has_value());
    CHECK(table.voiced().size() == 7);
    CHECK(table.voiceless().size() == 6);

    CHECK_THROWS_AS(PhoneClassTable({"m", "s"}, {"s"}), InvalidArgument);
    const auto parsed = parse_phone_table_json(format_phone_table_json(table));
    CHECK(parsed.voiced() == table.voiced());
    CHECK(parsed.voiceless() == table.voiceless());
    CHECK_THROWS_AS(parse_phone_table_json("{\"voiced\": [\"m\"]}"), InvalidArgument);
    CHECK_THROWS_AS(parse_phone_table_json("[1,2"), InvalidArgument);
  }

  TEST_CASE("shipped phone table matches the defaults") {
    const auto shipped = load_phone_table(std::filesystem::path(TOPCAP_SOURCE_DIR) / "config/phone_table.json");
    CHECK(shipped.voiced() == PhoneClassTable::defaults().voiced());
    CHECK(shipped.voiceless() == PhoneClassTable::defaults().voiceless());
  }

  TEST_CASE("segment slices by rounded sample index") {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
    const TimeSeries s("utt", x, 1000.0);
    const std::vector<PhoneInterval> iv = {
        {"m", 0.1, 0.2, "phones"},
        {"d", 0.2, 0.3, "phones"},
        {"s", 0.9, 1.5, "phones"},
        {"s", 0.3004, 0.4006, "phones"},
    };
    const auto seg = segment(s, iv, PhoneClassTable::defaults());
    REQUIRE(seg.segments.size() == 2);
    CHECK(seg.segments[0].series.size() == 100);
    CHECK(seg.segments[0].series[0] == 100.0);
    CHECK(seg.segments[0].voicing == Voicing::voiced);
    CHECK(seg.segments[1].voicing == Voicing::voiceless);
    CHECK(seg.segments[1].series.size() == 401 - 300);
    CHECK(seg.segments[1].series[0] == 300.0);
    CHECK(seg.skipped_unlisted == 1);
    CHECK(seg.skipped_out_of_range == 1);
    REQUIRE(seg.decisions.size() == 4);
    CHECK(seg.decisions[1].status == SegmentStatus::unlisted_label);
    CHECK(seg.decisions[2].status == SegmentStatus::out_of_range);
    CHECK(seg.segments[0].series.sample_rate() == 1000.0);
    CHECK(seg.segments[0].series.id() != seg.segments[1].series.id());
  }

  TEST_CASE("segment lengths equal the rounded index difference") {
    std::vector<double> x(22050, 0.1);
    const TimeSeries s("u", x, 22050.0);
    std::vector<PhoneInterval> iv;
    for (int i = 0; i < 60; ++i) iv.push_back({"n", 0.0123 * i, 0.0123 * i + 0.00731 * (1 + i % 5), "phones"});
    const auto seg = segment(s, iv, PhoneClassTable::defaults());
    REQUIRE(seg.segments.size() == iv.size());
    for (std::size_t i = 0; i < iv.size(); ++i) {
      const auto expect = std::llround(iv[i].end_s * 22050.0) - std::llround(iv[i].start_s * 22050.0);
      CHECK(static_cast<long long>(seg.segments[i].series.size()) == expect);
    }
  }

  TEST_CASE("segment needs a time axis") {
    const TimeSeries abstract("a", std::vector<double>(100, 0.5));
    const std::vector<PhoneInterval> iv = {{"m", 0.0, 0.1, "phones"}};
    CHECK_THROWS_AS(segment(abstract, iv, PhoneClassTable::defaults()), InvalidArgument);
  }

  TEST_CASE("text utilities") {
    CHECK(parse_double(" 1.5") == 1.5);
    CHECK(parse_double("inf") == INFINITY);
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidArgument);
    CHECK(parse_int("42") == 42);
    CHECK_THROWS_AS(parse_int("4.2"), InvalidArgument);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(255) == "00000000000000ff");
  }
}
