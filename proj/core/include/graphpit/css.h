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

#ifndef GRAPHPIT_CSS_H_
#define GRAPHPIT_CSS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "graphpit/audio.h"
#include "graphpit/pit.h"

namespace graphpit {

// Segment geometry for continuous separation: every segment is
// history + current + future long and segments advance by `current`.
// Durations are in seconds and must map to whole sample counts.
class SegmentPlan {
 public:
  SegmentPlan(double history_s, double current_s, double future_s,
              double sample_rate);
  // Parses "Th,Tc,Tf" (seconds).
  static SegmentPlan Parse(const std::string& text, double sample_rate);

  double history_seconds() const { return history_s_; }
  double current_seconds() const { return current_s_; }
  double future_seconds() const { return future_s_; }
  double sample_rate() const { return sample_rate_; }

  std::int64_t history() const { return history_; }
  std::int64_t current() const { return current_; }
  std::int64_t future() const { return future_; }
  std::int64_t segment_length() const { return history_ + current_ + future_; }
  std::int64_t shift() const { return current_; }
  // Extra separated samples per input sample: (Th + Tf) / Tc.
  double NominalOverhead() const;

 private:
  double history_s_, current_s_, future_s_, sample_rate_;
  std::int64_t history_, current_, future_;
};

// Absolute sample ranges of one segment. `start`/`end` are the unclipped
// geometry and may leave [0, total); `current_*` is clipped to the signal.
struct SegmentRange {
  std::int64_t start;
  std::int64_t end;
  std::int64_t current_start;
  std::int64_t current_end;
};

std::vector<SegmentRange> PlanSegments(std::int64_t total_samples,
                                       const SegmentPlan& plan);
// (separated samples - total) / total, counting full zero-padded segments.
double SegmentOverhead(std::int64_t total_samples, const SegmentPlan& plan);

// A source separator operating on one segment at a time.
class Separator {
 public:
  virtual ~Separator() = default;
  virtual int num_channels() const = 0;
  // `offset` is the absolute position of segment sample 0 (may be negative).
  // Must return num_channels() streams of segment.size() samples.
  virtual EstimateStreams Separate(const Waveform& segment,
                                   std::int64_t offset) const = 0;
  // False if Separate() must not be called from several threads at once.
  virtual bool thread_safe() const { return true; }
};

// Copies the input segment onto every channel.
class IdentitySeparator : public Separator {
 public:
  explicit IdentitySeparator(int num_channels) : num_channels_(num_channels) {}
  int num_channels() const override { return num_channels_; }
  EstimateStreams Separate(const Waveform& segment,
                           std::int64_t offset) const override;

 private:
  int num_channels_;
};

struct SegmentOutput {
  std::size_t index = 0;
  SegmentRange range{};
  // Zero-padded samples before 0 and after the end of the mixture.
  std::int64_t padding_front = 0;
  std::int64_t padding_back = 0;
  EstimateStreams streams;
};

// Separates every planned segment independently. With max_threads > 1 and a
// thread-safe separator, segments are processed concurrently; the result
// order is the plan order either way.
std::vector<SegmentOutput> SeparateSegments(const Waveform& mixture,
                                            const SegmentPlan& plan,
                                            const Separator& separator,
                                            unsigned max_threads = 1);

struct StitchResult {
  EstimateStreams streams;
  // permutations[i][g] is the channel of segment i that feeds global channel
  // g. Segment 0 is the identity.
  std::vector<std::vector<int>> permutations;
  // Cost gap between the best and second-best permutation at each boundary
  // (entry i refers to segments i and i+1); 0 when N == 1.
  std::vector<double> alignment_gaps;
};

// Aligns each segment to its predecessor by the channel permutation with the
// least squared difference over their shared samples, then concatenates the
// current-context parts.
StitchResult StitchDetailed(const std::vector<SegmentOutput>& outputs,
                            const SegmentPlan& plan,
                            std::int64_t total_samples);
EstimateStreams Stitch(const std::vector<SegmentOutput>& outputs,
                       const SegmentPlan& plan, std::int64_t total_samples);

}  // namespace graphpit

#endif  // GRAPHPIT_CSS_H_
