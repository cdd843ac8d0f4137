#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "topcap/phones.hpp"
#include "topcap/rng.hpp"
#include "topcap/time_series.hpp"

namespace topcap {

// Stand-in consonant corpus for desk-scale experiments when no recorded
// speech is at hand.
struct SyntheticCorpusSpec {
  std::size_t voiced = 200;
  std::size_t voiceless = 200;
  std::size_t length = 1200;        // samples per record
  double sample_rate = 16000.0;
  double noise_sigma = 0.05;        // additive noise on voiced carriers
  double min_f0 = 110.0;            // Hz
  double max_f0 = 220.0;
  std::uint64_t seed = 1;
};

struct CorpusRecord {
  TimeSeries series;
  Voicing label;
};

/// Voiced-like: a three-harmonic periodic carrier with linearly ramped
/// amplitude and fundamental frequency plus Gaussian noise.
TimeSeries make_voiced_like(std::string id, const SyntheticCorpusSpec& spec, Rng& rng);

/// Voiceless-like: Gaussian noise through a first-order high-pass filter.
TimeSeries make_voiceless_like(std::string id, const SyntheticCorpusSpec& spec, Rng& rng);

/// Voiced records first, then voiceless; ids "voiced_0000", "voiceless_0000", ...
std::vector<CorpusRecord> make_synthetic_corpus(const SyntheticCorpusSpec& spec);

}  // namespace topcap
