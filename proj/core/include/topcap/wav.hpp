#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "topcap/time_series.hpp"

namespace topcap {

/// Decodes a RIFF/WAVE PCM16 mono buffer. Samples are int16 / 32768.
/// Throws MalformedWav for structural problems and UnsupportedEncoding for
/// anything that is not 16-bit mono PCM.
TimeSeries decode_wav(std::span<const std::uint8_t> bytes, std::string id);

/// Reads a WAV file; the series id is the file stem.
TimeSeries load_wav(const std::filesystem::path& path);

/// Encodes raw int16 samples as a canonical 44-byte-header PCM16 mono file.
std::vector<std::uint8_t> encode_wav_pcm16(std::span<const std::int16_t> samples,
                                           std::uint32_t sample_rate);

void save_wav_pcm16(const std::filesystem::path& path, std::span<const std::int16_t> samples,
                    std::uint32_t sample_rate);

}  // namespace topcap
