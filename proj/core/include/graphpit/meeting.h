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

#ifndef GRAPHPIT_MEETING_H_
#define GRAPHPIT_MEETING_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "graphpit/audio.h"
#include "graphpit/overlap_graph.h"
#include "graphpit/pit.h"

namespace graphpit {

template <typename T>
struct Interval {
  T lo;
  T hi;
  bool operator==(const Interval&) const = default;
};

// Meeting simulation recipe. Defaults follow the evaluation setup of the
// Graph-PIT experiments: 5-8 speakers, overlap ratio 0.2-0.4, ~120 s,
// 10% silence probability, 0-5 dB speaker gains, 20-30 dB white noise, 8 kHz.
struct MeetingConfig {
  Interval<int> num_speakers{5, 8};
  Interval<double> overlap_ratio{0.2, 0.4};
  double target_length_s = 120.0;
  double silence_probability = 0.1;
  Interval<double> speaker_gain_db{0.0, 5.0};
  Interval<double> noise_snr_db{20.0, 30.0};
  double sample_rate = 8000.0;
  Interval<double> utterance_length_s{2.0, 10.0};
  Interval<double> silence_length_s{0.1, 2.0};
  std::uint64_t seed = 0;

  // Throws ContractError on empty/unordered ranges or bad probabilities.
  void Validate() const;
  bool operator==(const MeetingConfig&) const = default;
};

// Every random decision of one meeting, before any audio is rendered.
struct MeetingLayout {
  std::int64_t num_samples = 0;
  std::vector<UtteranceInterval> utterances;
  std::vector<std::uint64_t> synth_seeds;  // one per utterance
  std::vector<double> speaker_gain_db;     // indexed by speaker id
  double target_overlap_ratio = 0.0;
  double noise_snr_db = 0.0;
  std::uint64_t noise_seed = 0;
  int attempts = 0;
};

struct MeetingUtterance {
  UtteranceInterval interval;
  // Gain-scaled samples of [start, end).
  Waveform signal;
  double gain_db = 0.0;
  std::uint64_t synth_seed = 0;
};

struct SpeakerInfo {
  int id = 0;
  double gain_db = 0.0;
  bool operator==(const SpeakerInfo&) const = default;
};

// mixture = sum of utterances + noise, sample by sample.
struct Meeting {
  double sample_rate = 8000.0;
  std::int64_t num_samples = 0;
  Waveform mixture;
  Waveform noise;
  std::vector<MeetingUtterance> utterances;
  std::vector<SpeakerInfo> speakers;
  double noise_snr_db = 0.0;
  std::uint64_t noise_seed = 0;
  double target_overlap_ratio = 0.0;
  MeetingConfig config;

  int num_speakers() const { return static_cast<int>(speakers.size()); }
  std::vector<UtteranceInterval> Intervals() const;
  Waveform CleanMixture() const;
  Waveform Padded(std::size_t u) const;
  // Targets of the window [start, end): intersecting utterances cropped to
  // it, intervals shifted to be window-relative.
  SegmentTargets Targets(std::int64_t start, std::int64_t end) const;
  SegmentTargets Targets() const { return Targets(0, num_samples); }
};

// Amplitude-modulated, formant-filtered noise with unit RMS.
// Throws ContractError below 0.1 s.
Waveform SynthUtterance(std::mt19937_64& rng, std::int64_t num_samples,
                        double sample_rate);

MeetingLayout SimulateMeetingLayout(const MeetingConfig& config);
Meeting RenderMeeting(const MeetingConfig& config, const MeetingLayout& layout);
// SimulateMeetingLayout + RenderMeeting. Pure function of `config`.
Meeting SimulateMeeting(const MeetingConfig& config);

// Samples with >= 2 active utterances over samples with >= 1.
double OverlapRatio(std::span<const UtteranceInterval> utterances);

struct SegmentSpeakerStats {
  // counts[k] = number of segments with exactly k distinct speakers.
  std::vector<std::size_t> counts;
  std::size_t num_segments = 0;

  double FractionAtMost(int speakers) const;
  double FractionAbove(int speakers) const { return 1.0 - FractionAtMost(speakers); }
  SegmentSpeakerStats& operator+=(const SegmentSpeakerStats& other);
};

// Windows [j*shift, j*shift + length) from j = 0 up to and including the
// first window that reaches the end, clipped to the signal. Counts distinct
// speakers with any activity inside each window.
SegmentSpeakerStats SegmentSpeakerHistogram(
    std::span<const UtteranceInterval> utterances, std::int64_t total_samples,
    std::int64_t segment_length, std::int64_t shift);
SegmentSpeakerStats SegmentSpeakerHistogram(const Meeting& meeting,
                                            double segment_length_s,
                                            double shift_s);

}  // namespace graphpit

#endif  // GRAPHPIT_MEETING_H_
