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

#include "graphpit/meeting.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "graphpit/errors.h"

namespace graphpit {

namespace {

constexpr int kMaxPlacementAttempts = 100;
// Accepted deviation of the realized overlap ratio from its target.
constexpr double kOverlapTolerance = 0.05;
// Per-speaker speech time relative to the mean speaker.
constexpr double kBalanceTolerance = 0.30;
constexpr double kLengthTolerance = 0.10;
// Probability that an utterance is allowed to overlap its predecessor when
// the overlap controller asks for more overlap.
constexpr double kOverlapAcceptance = 0.7;

template <typename T>
void CheckRange(const Interval<T>& r, const char* name) {
  if (!(r.lo <= r.hi)) {
    throw ContractError(std::string("meeting config: range ") + name +
                        " is empty");
  }
}

std::int64_t Samples(double seconds, double sample_rate) {
  return static_cast<std::int64_t>(std::llround(seconds * sample_rate));
}

double Uniform(std::mt19937_64& rng, Interval<double> r) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

}  // namespace

void MeetingConfig::Validate() const {
  CheckRange(num_speakers, "num_speakers");
  CheckRange(overlap_ratio, "overlap_ratio");
  CheckRange(speaker_gain_db, "speaker_gain_db");
  CheckRange(noise_snr_db, "noise_snr_db");
  CheckRange(utterance_length_s, "utterance_length_s");
  CheckRange(silence_length_s, "silence_length_s");
  if (num_speakers.lo < 2) {
    throw ContractError("meeting config: need at least two speakers");
  }
  if (overlap_ratio.lo < 0.0 || overlap_ratio.hi >= 1.0) {
    throw ContractError("meeting config: overlap ratio must be in [0, 1)");
  }
  if (silence_probability < 0.0 || silence_probability > 1.0) {
    throw ContractError("meeting config: silence probability not in [0, 1]");
  }
  if (!(sample_rate > 0.0)) {
    throw ContractError("meeting config: sample rate must be positive");
  }
  if (!(target_length_s > 0.0)) {
    throw ContractError("meeting config: target length must be positive");
  }
  if (utterance_length_s.lo < 0.1) {
    throw ContractError("meeting config: utterances must last >= 0.1 s");
  }
  if (silence_length_s.lo < 0.0) {
    throw ContractError("meeting config: negative silence length");
  }
}

std::vector<UtteranceInterval> Meeting::Intervals() const {
  std::vector<UtteranceInterval> out;
  out.reserve(utterances.size());
  for (const auto& u : utterances) out.push_back(u.interval);
  return out;
}

Waveform Meeting::CleanMixture() const {
  Waveform clean = Waveform::Zeros(static_cast<std::size_t>(num_samples),
                                   sample_rate);
  auto out = clean.mutable_samples();
  for (const auto& u : utterances) {
    const auto s = u.signal.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
      out[static_cast<std::size_t>(u.interval.start) + i] += s[i];
    }
  }
  return clean;
}

Waveform Meeting::Padded(std::size_t u) const {
  const auto& utt = utterances.at(u);
  return utt.signal.Slice(-utt.interval.start, num_samples - utt.interval.start);
}

SegmentTargets Meeting::Targets(std::int64_t start, std::int64_t end) const {
  std::vector<TargetUtterance> cropped;
  for (const auto& u : utterances) {
    const std::int64_t lo = std::max(start, u.interval.start);
    const std::int64_t hi = std::min(end, u.interval.end);
    if (lo >= hi) continue;
    UtteranceInterval iv = u.interval;
    iv.start = lo - start;
    iv.end = hi - start;
    cropped.push_back({iv, u.signal.Slice(lo - u.interval.start,
                                          hi - u.interval.start)});
  }
  return SegmentTargets(std::move(cropped), end - start, sample_rate);
}

Waveform SynthUtterance(std::mt19937_64& rng, std::int64_t num_samples,
                        double sample_rate) {
  if (num_samples < Samples(0.1, sample_rate)) {
    throw ContractError("synthetic utterance must last at least 0.1 s, got " +
                        std::to_string(num_samples) + " samples");
  }
  const auto n = static_cast<std::size_t>(num_samples);

  // Three formant-like two-pole resonators driven by unit-variance uniform
  // white noise, plus a little of the raw excitation as a broadband floor.
  const double nyquist = 0.5 * sample_rate;
  const double centers[3][2] = {{300, 900}, {900, 2200}, {2200, 3400}};
  double a1[3], a2[3], gain[3];
  for (int k = 0; k < 3; ++k) {
    const double lo = std::min(centers[k][0], 0.9 * nyquist);
    const double hi = std::min(centers[k][1], 0.9 * nyquist);
    const double freq = lo + (hi - lo) * UnitUniform(rng);
    const double bandwidth = 80.0 + 170.0 * UnitUniform(rng);
    const double weight = 0.3 + 0.7 * UnitUniform(rng);
    const double radius = std::exp(-std::numbers::pi * bandwidth / sample_rate);
    a1[k] = -2.0 * radius * std::cos(2.0 * std::numbers::pi * freq / sample_rate);
    a2[k] = radius * radius;
    gain[k] = weight * (1.0 - radius);
  }
  const double floor_weight = 0.05;
  // Excitation x = k * step - half_width for a 16-bit k, uniform with unit
  // variance.
  const double half_width = std::sqrt(3.0);
  const double x_step = 2.0 * half_width * 0x1.0p-16;
  double y1[3] = {0, 0, 0}, y2[3] = {0, 0, 0};
  auto carrier = [&](double x) {
    double sum = floor_weight * x;
    for (int k = 0; k < 3; ++k) {
      const double y = x - a1[k] * y1[k] - a2[k] * y2[k];
      y2[k] = y1[k];
      y1[k] = y;
      sum += gain[k] * y;
    }
    return sum;
  };

  // Syllable-rate envelope: raised-sine bumps of random length and height,
  // with occasional pauses. sin^2 = (1 - cos) / 2, cos by rotation.
  std::vector<double> out(n);
  std::uint64_t bits = 0;
  int unused = 0;
  std::size_t t = 0;
  while (t < n) {
    const auto syllable = static_cast<std::size_t>(
        std::max(1.0, (0.12 + 0.23 * UnitUniform(rng)) * sample_rate));
    const double height =
        UnitUniform(rng) < 0.1 ? 0.05 : 0.4 + 0.6 * UnitUniform(rng);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(syllable);
    const double cs = std::cos(step), sn = std::sin(step);
    double c = std::cos(0.5 * step), s = std::sin(0.5 * step);
    const double base = 0.02 + 0.5 * height;
    const double depth = 0.5 * height;
    const std::size_t stop = std::min(n, t + syllable);
    for (; t < stop; ++t) {
      if (unused == 0) {
        bits = rng();
        unused = 4;
      }
      const double k = static_cast<double>(bits & 0xFFFFu);
      bits >>= 16;
      --unused;
      out[t] = carrier(k * x_step - half_width) * (base - depth * c);
      const double next_c = c * cs - s * sn;
      s = s * cs + c * sn;
      c = next_c;
    }
  }

  const double rms = std::sqrt(Energy(out) / static_cast<double>(n));
  for (double& v : out) v /= rms;
  return Waveform(std::move(out), sample_rate);
}

double OverlapRatio(std::span<const UtteranceInterval> utterances) {
  std::vector<std::pair<std::int64_t, int>> events;
  for (const auto& u : utterances) {
    events.emplace_back(u.start, +1);
    events.emplace_back(u.end, -1);
  }
  std::sort(events.begin(), events.end());
  std::int64_t speech = 0;
  std::int64_t overlap = 0;
  int active = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0) {
      const std::int64_t span = events[i].first - events[i - 1].first;
      if (active >= 1) speech += span;
      if (active >= 2) overlap += span;
    }
    active += events[i].second;
  }
  if (speech == 0) return 0.0;
  return static_cast<double>(overlap) / static_cast<double>(speech);
}

namespace {

struct Placement {
  std::vector<UtteranceInterval> utterances;
  std::int64_t num_samples = 0;
};

// Sequential placement. Each new utterance either starts inside the tail of
// the previous one (only where that utterance is the single active one, so
// at most two utterances ever overlap) or after it, possibly with a pause.
// The amount of overlap is steered toward the target ratio.
Placement PlaceUtterances(const MeetingConfig& config, int num_speakers,
                          double target_ratio, std::mt19937_64& rng) {
  const double sr = config.sample_rate;
  const std::int64_t target_length = Samples(config.target_length_s, sr);
  const std::int64_t max_length = Samples(
      config.target_length_s * (1.0 + 0.5 * kLengthTolerance), sr);
  const std::int64_t min_utterance = Samples(config.utterance_length_s.lo, sr);
  const std::int64_t min_tail = Samples(0.5, sr);
  // Expected speech per speaker: the union covers ~target_length and each
  // overlapped sample is spoken twice.
  const double quota = static_cast<double>(target_length) *
                       (1.0 + target_ratio) / num_speakers;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> load(num_speakers, 0.0);
  Placement p;
  std::int64_t speech = 0;   // samples with >= 1 active
  std::int64_t overlap = 0;  // samples with >= 2 active
  std::int64_t last_end = 0;
  std::int64_t single_start = 0;  // start of the tail's single-active part
  int tail_speaker = -1;

  while (last_end < target_length) {
    std::int64_t duration = Samples(Uniform(rng, config.utterance_length_s), sr);

    std::int64_t overlap_len = 0;
    if (tail_speaker >= 0) {
      const double needed =
          (target_ratio * static_cast<double>(speech + duration) -
           static_cast<double>(overlap)) /
          (1.0 + target_ratio);
      const std::int64_t room =
          std::min(last_end - single_start, duration - min_tail);
      if (needed > 0.0 && room > 0 && unit(rng) < kOverlapAcceptance) {
        overlap_len = std::min<std::int64_t>(
            room, std::llround(needed * (0.8 + 0.4 * unit(rng))));
      }
    }

    // Least-loaded eligible speaker, random among near ties.
    std::vector<int> order(num_speakers);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return load[a] < load[b]; });
    int speaker = -1;
    for (int k : order) {
      if (overlap_len > 0 && k == tail_speaker) continue;
      speaker = k;
      break;
    }

    // Keep speakers from running far past their share.
    const double remaining = quota * (1.0 + 0.5 * kBalanceTolerance) -
                             load[speaker];
    if (remaining >= static_cast<double>(min_utterance) &&
        static_cast<double>(duration) > remaining) {
      duration = static_cast<std::int64_t>(remaining);
      overlap_len = std::min(overlap_len, duration - min_tail);
    }

    std::int64_t onset;
    if (overlap_len > 0) {
      onset = last_end - overlap_len;
    } else {
      onset = last_end;
      if (tail_speaker >= 0 && unit(rng) < config.silence_probability) {
        onset += Samples(Uniform(rng, config.silence_length_s), sr);
      }
    }
    if (onset + duration > max_length &&
        max_length - onset >= std::max(min_utterance, overlap_len + min_tail)) {
      duration = max_length - onset;
    }
    const std::int64_t end = onset + duration;

    p.utterances.push_back({static_cast<int>(p.utterances.size()), speaker,
                            onset, end});
    load[speaker] += static_cast<double>(duration);
    overlap += std::max<std::int64_t>(0, last_end - onset);
    speech += end - std::max(onset, last_end);
    single_start = std::max(onset, last_end);
    last_end = end;
    tail_speaker = speaker;
  }
  p.num_samples = last_end;
  return p;
}

// Empty string if the placement meets every acceptance rule.
std::string CheckPlacement(const Placement& p, const MeetingConfig& config,
                           int num_speakers, double target_ratio) {
  std::ostringstream why;
  const double ratio = OverlapRatio(p.utterances);
  if (std::abs(ratio - target_ratio) > kOverlapTolerance) {
    why << "overlap ratio " << ratio << " vs target " << target_ratio;
    return why.str();
  }
  const double length_s = static_cast<double>(p.num_samples) / config.sample_rate;
  if (std::abs(length_s - config.target_length_s) >
      kLengthTolerance * config.target_length_s) {
    why << "length " << length_s << " s vs target " << config.target_length_s;
    return why.str();
  }
  std::vector<double> load(num_speakers, 0.0);
  for (const auto& u : p.utterances) {
    load[u.speaker] += static_cast<double>(u.length());
  }
  const double mean = std::accumulate(load.begin(), load.end(), 0.0) /
                      num_speakers;
  for (int k = 0; k < num_speakers; ++k) {
    if (std::abs(load[k] - mean) > kBalanceTolerance * mean) {
      why << "speaker " << k + 1 << " speaks " << load[k] / config.sample_rate
          << " s vs mean " << mean / config.sample_rate << " s";
      return why.str();
    }
  }
  return {};
}

}  // namespace

MeetingLayout SimulateMeetingLayout(const MeetingConfig& config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  MeetingLayout layout;
  const int k = std::uniform_int_distribution<int>(config.num_speakers.lo,
                                                   config.num_speakers.hi)(rng);
  layout.target_overlap_ratio = Uniform(rng, config.overlap_ratio);
  for (int i = 0; i < k; ++i) {
    layout.speaker_gain_db.push_back(Uniform(rng, config.speaker_gain_db));
  }
  layout.noise_snr_db = Uniform(rng, config.noise_snr_db);
  layout.noise_seed = rng();

  std::string failure;
  for (int attempt = 1; attempt <= kMaxPlacementAttempts; ++attempt) {
    Placement p = PlaceUtterances(config, k, layout.target_overlap_ratio, rng);
    failure = CheckPlacement(p, config, k, layout.target_overlap_ratio);
    if (failure.empty()) {
      layout.num_samples = p.num_samples;
      layout.utterances = std::move(p.utterances);
      layout.attempts = attempt;
      for (std::size_t i = 0; i < layout.utterances.size(); ++i) {
        layout.synth_seeds.push_back(rng());
      }
      return layout;
    }
  }
  throw Error("meeting simulation (seed " + std::to_string(config.seed) +
              ") failed after " + std::to_string(kMaxPlacementAttempts) +
              " attempts; last rejection: " + failure);
}

Meeting RenderMeeting(const MeetingConfig& config, const MeetingLayout& layout) {
  Meeting m;
  m.sample_rate = config.sample_rate;
  m.num_samples = layout.num_samples;
  m.noise_snr_db = layout.noise_snr_db;
  m.noise_seed = layout.noise_seed;
  m.target_overlap_ratio = layout.target_overlap_ratio;
  m.config = config;
  for (std::size_t k = 0; k < layout.speaker_gain_db.size(); ++k) {
    m.speakers.push_back({static_cast<int>(k), layout.speaker_gain_db[k]});
  }
  for (std::size_t i = 0; i < layout.utterances.size(); ++i) {
    const auto& iv = layout.utterances[i];
    std::mt19937_64 rng(layout.synth_seeds[i]);
    Waveform w = SynthUtterance(rng, iv.length(), config.sample_rate);
    const double gain_db = layout.speaker_gain_db[iv.speaker];
    const double scale = std::pow(10.0, gain_db / 20.0);
    for (double& v : w.mutable_samples()) v *= scale;
    m.utterances.push_back({iv, std::move(w), gain_db, layout.synth_seeds[i]});
  }
  Waveform mixture = m.CleanMixture();
  std::mt19937_64 noise_rng(layout.noise_seed);
  m.noise = WhiteNoiseAtSnr(mixture, layout.noise_snr_db, noise_rng);
  // The clean buffer becomes the mixture.
  const auto noise = m.noise.samples();
  auto samples = mixture.mutable_samples();
  for (std::size_t t = 0; t < samples.size(); ++t) samples[t] += noise[t];
  m.mixture = std::move(mixture);
  return m;
}

Meeting SimulateMeeting(const MeetingConfig& config) {
  return RenderMeeting(config, SimulateMeetingLayout(config));
}

double SegmentSpeakerStats::FractionAtMost(int speakers) const {
  if (num_segments == 0) return 1.0;
  std::size_t within = 0;
  for (std::size_t k = 0; k < counts.size() && k <= static_cast<std::size_t>(
                                                   std::max(speakers, 0));
       ++k) {
    within += counts[k];
  }
  return static_cast<double>(within) / static_cast<double>(num_segments);
}

SegmentSpeakerStats& SegmentSpeakerStats::operator+=(
    const SegmentSpeakerStats& other) {
  if (counts.size() < other.counts.size()) counts.resize(other.counts.size());
  for (std::size_t k = 0; k < other.counts.size(); ++k) {
    counts[k] += other.counts[k];
  }
  num_segments += other.num_segments;
  return *this;
}

SegmentSpeakerStats SegmentSpeakerHistogram(
    std::span<const UtteranceInterval> utterances, std::int64_t total_samples,
    std::int64_t segment_length, std::int64_t shift) {
  if (shift <= 0 || segment_length < shift) {
    throw ContractError("segment statistics need segment_length >= shift > 0");
  }
  SegmentSpeakerStats stats;
  for (std::int64_t start = 0;; start += shift) {
    const std::int64_t end = std::min(start + segment_length, total_samples);
    std::set<int> speakers;
    for (const auto& u : utterances) {
      if (std::max(start, u.start) < std::min(end, u.end)) {
        speakers.insert(u.speaker);
      }
    }
    if (stats.counts.size() <= speakers.size()) {
      stats.counts.resize(speakers.size() + 1, 0);
    }
    ++stats.counts[speakers.size()];
    ++stats.num_segments;
    if (start + segment_length >= total_samples) break;
  }
  return stats;
}

SegmentSpeakerStats SegmentSpeakerHistogram(const Meeting& meeting,
                                            double segment_length_s,
                                            double shift_s) {
  const auto intervals = meeting.Intervals();
  return SegmentSpeakerHistogram(
      intervals, meeting.num_samples, Samples(segment_length_s, meeting.sample_rate),
      Samples(shift_s, meeting.sample_rate));
}

}  // namespace graphpit
