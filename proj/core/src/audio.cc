// Copyright 2026 The graphpit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "graphpit/audio.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <string>

#include "graphpit/errors.h"

namespace graphpit {

Waveform::Waveform(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw ContractError("Waveform: sample rate must be positive, got " +
                        std::to_string(sample_rate_));
  }
  // An all-ones exponent (inf or nan) carries into bit 63 when 2^52 is
  // added; other exponents do not. Locate the culprit only if one exists.
  constexpr std::uint64_t kExponent = 0x7FF0000000000000ULL;
  constexpr std::uint64_t kCarry = 1ULL << 52;
  std::uint64_t screen = 0;
  const double* data = samples_.data();
  const std::size_t size = samples_.size();
  for (std::size_t i = 0; i < size; ++i) {
    screen |= (std::bit_cast<std::uint64_t>(data[i]) & kExponent) + kCarry;
  }
  if (screen >> 63) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (!std::isfinite(samples_[i])) {
        throw ContractError("Waveform: non-finite sample at index " +
                            std::to_string(i));
      }
    }
  }
}

Waveform Waveform::Zeros(std::size_t num_samples, double sample_rate) {
  return Waveform(std::vector<double>(num_samples, 0.0), sample_rate);
}

Waveform Waveform::Slice(std::ptrdiff_t begin, std::ptrdiff_t end) const {
  if (end < begin) {
    throw ContractError("Waveform::Slice: end before begin");
  }
  std::vector<double> out(static_cast<std::size_t>(end - begin), 0.0);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(samples_.size());
  const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(begin, 0, n);
  const std::ptrdiff_t hi = std::clamp<std::ptrdiff_t>(end, 0, n);
  if (lo < hi) {
    std::copy(samples_.begin() + lo, samples_.begin() + hi,
              out.begin() + (lo - begin));
  }
  Waveform w;
  w.samples_ = std::move(out);
  w.sample_rate_ = sample_rate_;
  return w;
}

double Energy(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double ErrorEnergy(std::span<const double> reference,
                   std::span<const double> estimate) {
  if (reference.size() != estimate.size()) {
    throw ContractError("length mismatch: reference has " +
                        std::to_string(reference.size()) +
                        " samples, estimate has " +
                        std::to_string(estimate.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - estimate[i];
    acc += d * d;
  }
  return acc;
}

bool IsSilent(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

namespace {

void CheckPair(const Waveform& reference, const Waveform& estimate) {
  if (reference.size() != estimate.size()) {
    throw ContractError("length mismatch: reference has " +
                        std::to_string(reference.size()) +
                        " samples, estimate has " +
                        std::to_string(estimate.size()));
  }
  if (reference.sample_rate() != estimate.sample_rate()) {
    throw ContractError("sample rate mismatch");
  }
}

}  // namespace

TsdrParams::TsdrParams(double sdr_max_db, double epsilon)
    : sdr_max_(sdr_max_db),
      epsilon_(epsilon),
      tau_(std::pow(10.0, -sdr_max_db / 10.0)) {
  if (!std::isfinite(sdr_max_)) {
    throw ContractError("TsdrParams: sdr_max must be finite");
  }
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw ContractError("TsdrParams: epsilon must be positive");
  }
}

// Written as 10 log10(err / (|s|^2 + eps) + tau), which is the same ratio
// inverted; a perfect estimate then evaluates log10(tau) directly.
double EpsTsdrFromEnergies(double reference_energy, double error_energy,
                           const TsdrParams& params) {
  const double normalized =
      error_energy / (reference_energy + params.epsilon());
  return 10.0 * std::log10(normalized + params.tau());
}

double EpsTsdrLoss(const Waveform& reference, const Waveform& estimate,
                   const TsdrParams& params) {
  CheckPair(reference, estimate);
  return EpsTsdrFromEnergies(Energy(reference.samples()),
                             ErrorEnergy(reference.samples(),
                                         estimate.samples()),
                             params);
}

double SdrFromEnergies(double reference_energy, double error_energy) {
  if (reference_energy == 0.0) {
    throw UndefinedMetricError("SDR is undefined for an all-zero reference");
  }
  if (error_energy == 0.0) return kSdrCapDb;
  return std::min(kSdrCapDb,
                  10.0 * std::log10(reference_energy / error_energy));
}

double Sdr(const Waveform& reference, const Waveform& estimate) {
  CheckPair(reference, estimate);
  return SdrFromEnergies(Energy(reference.samples()),
                         ErrorEnergy(reference.samples(), estimate.samples()));
}

double SdrImprovement(const Waveform& reference, const Waveform& unprocessed,
                      const Waveform& estimate) {
  CheckPair(reference, unprocessed);
  return Sdr(reference, estimate) - Sdr(reference, unprocessed);
}

namespace {

// 128-layer ziggurat for the standard normal (Marsaglia and Tsang, in the
// layout of Doornik's ZIGNOR).
struct Ziggurat {
  static constexpr int kLayers = 128;
  static constexpr double kR = 3.442619855899;
  static constexpr double kV = 9.91256303526217e-3;
  double x[kLayers + 1];
  double ratio[kLayers];

  Ziggurat() {
    double f = std::exp(-0.5 * kR * kR);
    x[0] = kV / f;
    x[1] = kR;
    x[kLayers] = 0.0;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const Ziggurat& ZigguratTables() {
  static const Ziggurat tables;
  return tables;
}

// Uniform in (0, 1].
double OpenUniform(std::mt19937_64& engine) {
  return 1.0 - UnitUniform(engine);
}

// One attempt per 32-bit word: 7 bits pick the layer, 25 bits give u.
double ZigguratNormal(const Ziggurat& z, std::mt19937_64& engine,
                      std::uint64_t& bits, int& words) {
  while (true) {
    if (words == 0) {
      bits = engine();
      words = 2;
    }
    const auto word = static_cast<std::uint32_t>(bits >> (32 * --words));
    const double u =
        2.0 * (static_cast<double>(word >> 7) * 0x1.0p-25) - 1.0;
    const int i = static_cast<int>(word & (Ziggurat::kLayers - 1));
    if (std::abs(u) < z.ratio[i]) return u * z.x[i];
    if (i == 0) {
      double tx, ty;
      do {
        tx = std::log(OpenUniform(engine)) / Ziggurat::kR;
        ty = std::log(OpenUniform(engine));
      } while (-2.0 * ty < tx * tx);
      return u < 0.0 ? tx - Ziggurat::kR : Ziggurat::kR - tx;
    }
    const double xx = u * z.x[i];
    const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - xx * xx));
    const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - xx * xx));
    if (f1 + UnitUniform(engine) * (f0 - f1) < 1.0) return xx;
  }
}

}  // namespace

void FillStandardNormal(std::mt19937_64& engine, std::span<double> out) {
  const Ziggurat& z = ZigguratTables();
  std::uint64_t bits = 0;
  int words = 0;
  for (double& v : out) v = ZigguratNormal(z, engine, bits, words);
}

Waveform WhiteNoiseAtSnr(const Waveform& signal, double snr_db,
                         std::mt19937_64& rng) {
  const double signal_energy = Energy(signal.samples());
  if (signal_energy == 0.0) {
    throw ContractError("cannot set an SNR relative to an all-zero signal");
  }
  std::vector<double> noise(signal.size());
  FillStandardNormal(rng, noise);
  const double noise_energy = Energy(noise);
  const double scale =
      std::sqrt(signal_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));
  for (double& v : noise) v *= scale;
  return Waveform(std::move(noise), signal.sample_rate());
}

Waveform AddWhiteNoise(const Waveform& signal, double snr_db,
                       std::mt19937_64& rng) {
  Waveform noise = WhiteNoiseAtSnr(signal, snr_db, rng);
  auto out = noise.mutable_samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += signal[i];
  return noise;
}

}  // namespace graphpit
