#include "topcap/corpus.hpp"

#include <cmath>

#include <fmt/format.h>

#include "topcap/error.hpp"

namespace topcap {
namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

TimeSeries make_voiced_like(std::string id, const SyntheticCorpusSpec& spec, Rng& rng) {
  const double f0 = spec.min_f0 + (spec.max_f0 - spec.min_f0) * rng.uniform();
  const double f1 = f0 * (0.95 + 0.1 * rng.uniform());
  const double a0 = 0.3 + 0.3 * rng.uniform();
  const double a1 = 0.3 + 0.3 * rng.uniform();
  const double phase2 = kTwoPi * rng.uniform();
  const double phase3 = kTwoPi * rng.uniform();
  const double n = static_cast<double>(spec.length);

  std::vector<double> x(spec.length);
  double phase = kTwoPi * rng.uniform();
  for (std::size_t i = 0; i < spec.length; ++i) {
    const double u = static_cast<double>(i) / n;
    const double amp = a0 + (a1 - a0) * u;
    const double freq = f0 + (f1 - f0) * u;
    x[i] = amp * (std::sin(phase) + 0.5 * std::sin(2.0 * phase + phase2) +
                  0.25 * std::sin(3.0 * phase + phase3)) +
           spec.noise_sigma * rng.normal();
    phase += kTwoPi * freq / spec.sample_rate;
  }
  return TimeSeries(std::move(id), std::move(x), spec.sample_rate);
}

TimeSeries make_voiceless_like(std::string id, const SyntheticCorpusSpec& spec, Rng& rng) {
  const double level = 0.15 + 0.15 * rng.uniform();
  std::vector<double> x(spec.length);
  double prev = rng.normal();
  for (std::size_t i = 0; i < spec.length; ++i) {
    const double w = rng.normal();
    x[i] = level * (w - 0.7 * prev);
    prev = w;
  }
  return TimeSeries(std::move(id), std::move(x), spec.sample_rate);
}

std::vector<CorpusRecord> make_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  if (spec.length < 2) throw InvalidArgument("corpus records need at least 2 samples");
  if (!(spec.sample_rate > 0.0)) throw InvalidArgument("corpus sample rate must be positive");
  if (!(spec.min_f0 > 0.0) || spec.max_f0 < spec.min_f0) throw InvalidArgument("bad f0 range");
  Rng rng(spec.seed);
  std::vector<CorpusRecord> out;
  out.reserve(spec.voiced + spec.voiceless);
  for (std::size_t i = 0; i < spec.voiced; ++i)
    out.push_back({make_voiced_like(fmt::format("voiced_{:04}", i), spec, rng), Voicing::voiced});
  for (std::size_t i = 0; i < spec.voiceless; ++i)
    out.push_back({make_voiceless_like(fmt::format("voiceless_{:04}", i), spec, rng), Voicing::voiceless});
  return out;
}

}  // namespace topcap
