#include "topcap/wav.hpp"

#include <cstring>
#include <optional>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool tag_is(const std::uint8_t* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
  std::uint16_t tag;
  std::uint16_t channels;
  std::uint32_t sample_rate;
  std::uint16_t block_align;
  std::uint16_t bits;
};

}  // namespace

TimeSeries decode_wav(std::span<const std::uint8_t> bytes, std::string id) {
  if (bytes.size() < 12) throw MalformedWav("file too small for a RIFF header");
  if (!tag_is(bytes.data(), "RIFF")) throw MalformedWav("missing RIFF tag");
  if (!tag_is(bytes.data() + 8, "WAVE")) throw MalformedWav("missing WAVE tag");

  std::optional<Format> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    const std::uint32_t size = le32(hdr + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      // Some writers leave a bogus size on a trailing data chunk; clamp it.
      if (tag_is(hdr, "data") && fmt) {
        data = bytes.subspan(body);
        have_data = true;
        break;
      }
      throw MalformedWav("chunk extends past end of file");
    }
    if (tag_is(hdr, "fmt ")) {
      if (size < 16) throw MalformedWav("fmt chunk shorter than 16 bytes");
      const std::uint8_t* f = bytes.data() + body;
      Format parsed{le16(f), le16(f + 2), le32(f + 4), le16(f + 12), le16(f + 14)};
      if (parsed.tag == kFormatExtensible) {
        if (size < 40) throw MalformedWav("extensible fmt chunk shorter than 40 bytes");
        parsed.tag = le16(f + 24);  // first two bytes of the sub-format GUID
      }
      fmt = parsed;
    } else if (tag_is(hdr, "data")) {
      if (!fmt) throw MalformedWav("data chunk before fmt chunk");
      data = bytes.subspan(body, size);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1u);
  }

  if (!fmt) throw MalformedWav("no fmt chunk");
  if (!have_data) throw MalformedWav("no data chunk");
  if (fmt->tag != kFormatPcm)
    throw UnsupportedEncoding("format tag " + std::to_string(fmt->tag) + " is not PCM");
  if (fmt->channels != 1)
    throw UnsupportedEncoding(std::to_string(fmt->channels) + " channels; only mono is supported");
  if (fmt->bits != 16)
    throw UnsupportedEncoding(std::to_string(fmt->bits) + "-bit samples; only 16-bit is supported");
  if (fmt->sample_rate == 0) throw MalformedWav("sample rate is zero");
  if (fmt->block_align != 2) throw MalformedWav("block align inconsistent with 16-bit mono");

  const std::size_t n = data.size() / 2;
  if (n == 0) throw MalformedWav("data chunk holds no samples");
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto raw = static_cast<std::int16_t>(le16(data.data() + 2 * i));
    samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return TimeSeries(std::move(id), std::move(samples), static_cast<double>(fmt->sample_rate));
}

TimeSeries load_wav(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  return decode_wav(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()),
                    path.stem().string());
}

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const std::int16_t> samples,
                                           std::uint32_t sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, sample_rate);
  put32(out, sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (std::int16_t s : samples) put16(out, static_cast<std::uint16_t>(s));
  return out;
}

void save_wav_pcm16(const std::filesystem::path& path, std::span<const std::int16_t> samples,
                    std::uint32_t sample_rate) {
  const auto bytes = encode_wav_pcm16(samples, sample_rate);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace topcap
