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

#ifndef GRAPHPIT_PIT_H_
#define GRAPHPIT_PIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "graphpit/audio.h"
#include "graphpit/coloring.h"
#include "graphpit/overlap_graph.h"

namespace graphpit {

// One target utterance inside a segment. The interval is segment-relative and
// `signal` holds only the samples of [start, end); the segment-length
// zero-padded signal is produced on demand by SegmentTargets::Padded.
struct TargetUtterance {
  UtteranceInterval interval;
  Waveform signal;
};

class SegmentTargets {
 public:
  // Throws ContractError if an interval leaves [0, length), a signal length
  // disagrees with its interval, ids repeat, or sample rates differ.
  SegmentTargets(std::vector<TargetUtterance> utterances, std::int64_t length,
                 double sample_rate);

  const std::vector<TargetUtterance>& utterances() const {
    return utterances_;
  }
  std::size_t num_utterances() const { return utterances_.size(); }
  std::int64_t length() const { return length_; }
  double sample_rate() const { return sample_rate_; }
  // Distinct speaker ids, ascending.
  const std::vector<int>& speakers() const { return speakers_; }
  int num_speakers() const { return static_cast<int>(speakers_.size()); }

  std::vector<UtteranceInterval> Intervals() const;
  Waveform Padded(std::size_t u) const;
  // Adds utterance u into `out` (segment length) at its interval.
  void AccumulateInto(std::size_t u, std::span<double> out) const;

 private:
  std::vector<TargetUtterance> utterances_;
  std::int64_t length_;
  double sample_rate_;
  std::vector<int> speakers_;
};

// N output channels of a separator, all of one length and sample rate.
class EstimateStreams {
 public:
  EstimateStreams() = default;
  explicit EstimateStreams(std::vector<Waveform> channels);

  int num_channels() const { return static_cast<int>(channels_.size()); }
  std::size_t length() const { return channels_.front().size(); }
  double sample_rate() const { return channels_.front().sample_rate(); }
  const Waveform& operator[](std::size_t n) const { return channels_[n]; }
  const std::vector<Waveform>& channels() const { return channels_; }

  bool operator==(const EstimateStreams&) const = default;

 private:
  std::vector<Waveform> channels_;
};

// A pure signal-level loss (reference, estimate) -> real. Losses that only
// depend on |s|^2 and |s - est|^2 also provide `from_energies`, which lets
// Graph-PIT score colorings without materializing intermediate targets.
struct BaseLoss {
  std::string name;
  std::function<double(const Waveform&, const Waveform&)> evaluate;
  std::function<double(double reference_energy, double error_energy)>
      from_energies;

  double operator()(const Waveform& reference, const Waveform& estimate) const {
    return evaluate(reference, estimate);
  }
};

BaseLoss TsdrBaseLoss(const TsdrParams& params);
// -sdr, capped like Sdr(). Throws on silent references, so it is unsuitable
// whenever a channel may receive no utterance.
BaseLoss NegativeSdrBaseLoss();
// "tsdr:<sdr_max>:<epsilon>", "tsdr" (20 dB, 1e-6) or "sdr".
BaseLoss ParseBaseLoss(std::string_view spec);

struct SpeakerTarget {
  int speaker;
  Waveform signal;
};

// Per-speaker sum of that speaker's padded utterances, ordered by speaker id.
std::vector<SpeakerTarget> SpeakerTargets(const SegmentTargets& targets);

// uPIT assignment. `permutation[k]` is the channel of target row k, where
// rows [0, K) are the speakers in ascending id order and rows [K, N) are the
// silent padding targets.
struct SpeakerAssignment {
  std::vector<int> speakers;
  std::vector<int> permutation;

  int ChannelOf(int speaker) const;
  bool operator==(const SpeakerAssignment&) const = default;
};

struct PitResult {
  double loss = 0.0;
  std::variant<SpeakerAssignment, Coloring> assignment;
  // Permutations (uPIT) or colorings (Graph-PIT) scored.
  std::size_t candidates_evaluated = 0;

  const Coloring& coloring() const { return std::get<Coloring>(assignment); }
  const SpeakerAssignment& speaker_assignment() const {
    return std::get<SpeakerAssignment>(assignment);
  }
};

// Minimum over permutations of sum_k loss(speaker_k, estimate_perm(k)).
// Pads with all-zero targets when K < N. Throws InfeasibleError if K > N.
PitResult UpitLoss(const SegmentTargets& targets,
                   const EstimateStreams& estimates, const BaseLoss& loss);
double UpitObjective(const SegmentTargets& targets,
                     const EstimateStreams& estimates, const BaseLoss& loss,
                     const SpeakerAssignment& assignment);

// Channel n holds the sum of utterances colored n; unused channels are zero.
// Throws ContractError for a coloring that is not proper on the targets'
// overlap graph.
std::vector<Waveform> BuildIntermediateTargets(const SegmentTargets& targets,
                                               const Coloring& coloring,
                                               int num_channels);

// Minimum over all proper colorings of sum_n loss(intermediate_n,
// estimate_n). Ties go to the lexicographically smallest coloring.
// Throws InfeasibleError when more utterances are concurrently active than
// there are channels.
PitResult GraphPitLoss(const SegmentTargets& targets,
                       const EstimateStreams& estimates, const BaseLoss& loss);
// The objective at one coloring, always through materialized targets.
double GraphPitObjective(const SegmentTargets& targets,
                         const EstimateStreams& estimates,
                         const BaseLoss& loss, const Coloring& coloring);

}  // namespace graphpit

#endif  // GRAPHPIT_PIT_H_
