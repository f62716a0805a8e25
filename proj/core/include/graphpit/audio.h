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

#ifndef GRAPHPIT_AUDIO_H_
#define GRAPHPIT_AUDIO_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace graphpit {

// A mono signal with finite samples and a positive sample rate. All signal
// arithmetic in the library runs in double precision.
class Waveform {
 public:
  Waveform() = default;
  // Throws ContractError on a non-positive rate or a non-finite sample.
  Waveform(std::vector<double> samples, double sample_rate);

  static Waveform Zeros(std::size_t num_samples, double sample_rate);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double sample_rate() const { return sample_rate_; }

  std::span<const double> samples() const { return samples_; }
  // Mutable view for in-place construction. Callers keep samples finite.
  std::span<double> mutable_samples() { return samples_; }

  double operator[](std::size_t i) const { return samples_[i]; }

  // Copy of samples [begin, end), zero-padded where the range leaves
  // [0, size()). `begin` may be negative.
  Waveform Slice(std::ptrdiff_t begin, std::ptrdiff_t end) const;

  bool operator==(const Waveform&) const = default;

 private:
  std::vector<double> samples_;
  double sample_rate_ = 1.0;
};

double Energy(std::span<const double> x);
// Squared Euclidean distance between two equal-length signals.
double ErrorEnergy(std::span<const double> reference,
                   std::span<const double> estimate);
bool IsSilent(std::span<const double> x);

// Parameters of the epsilon-thresholded SDR loss. `tau` is derived from
// `sdr_max` on construction and never set directly.
class TsdrParams {
 public:
  explicit TsdrParams(double sdr_max_db = 20.0, double epsilon = 1e-6);

  double sdr_max() const { return sdr_max_; }
  double epsilon() const { return epsilon_; }
  double tau() const { return tau_; }

 private:
  double sdr_max_;
  double epsilon_;
  double tau_;
};

// Thresholded SDR loss in negated dB, bounded below by -sdr_max and defined
// for an all-zero reference:
//   -10 log10((|s|^2 + eps) / (|s - est|^2 + tau (|s|^2 + eps)))
double EpsTsdrLoss(const Waveform& reference, const Waveform& estimate,
                   const TsdrParams& params);
// Same loss from precomputed energies |s|^2 and |s - est|^2.
double EpsTsdrFromEnergies(double reference_energy, double error_energy,
                           const TsdrParams& params);

// SDR values are capped here so that reports never contain infinity.
inline constexpr double kSdrCapDb = 300.0;

// Plain energy-ratio SDR, 10 log10(|s|^2 / |s - est|^2), capped at kSdrCapDb.
// Throws UndefinedMetricError for an all-zero reference.
double Sdr(const Waveform& reference, const Waveform& estimate);
double SdrFromEnergies(double reference_energy, double error_energy);

// sdr(reference, estimate) - sdr(reference, unprocessed).
double SdrImprovement(const Waveform& reference, const Waveform& unprocessed,
                      const Waveform& estimate);

// White Gaussian noise scaled to the exact realized ratio, so that
// 10 log10(|signal|^2 / |noise|^2) == snr_db up to rounding.
// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double UnitUniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Fills `out` with standard normal variates (32-bit ziggurat, about half an
// engine draw per sample).
void FillStandardNormal(std::mt19937_64& engine, std::span<double> out);

Waveform WhiteNoiseAtSnr(const Waveform& signal, double snr_db,
                         std::mt19937_64& rng);
Waveform AddWhiteNoise(const Waveform& signal, double snr_db,
                       std::mt19937_64& rng);

}  // namespace graphpit

#endif  // GRAPHPIT_AUDIO_H_
