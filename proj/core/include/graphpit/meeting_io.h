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

#ifndef GRAPHPIT_MEETING_IO_H_
#define GRAPHPIT_MEETING_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphpit/css.h"
#include "graphpit/meeting.h"
#include "graphpit/pit.h"

namespace graphpit {

inline constexpr int kSchemaVersion = 1;

// Meeting metadata as stored in "meeting.json". Ids and speakers are 0-based
// here and 1-based in the document.
struct MeetingAnnotation {
  struct Utterance {
    UtteranceInterval interval;
    double gain_db = 0.0;
    std::string file;
    std::uint64_t synth_seed = 0;
    bool operator==(const Utterance&) const = default;
  };

  double sample_rate = 8000.0;
  std::int64_t num_samples = 0;
  std::string mixture_file = "mixture.wav";
  std::string noise_file = "noise.wav";
  double noise_snr_db = 0.0;
  std::uint64_t noise_seed = 0;
  double target_overlap_ratio = 0.0;
  std::vector<SpeakerInfo> speakers;
  std::vector<Utterance> utterances;
  MeetingConfig config;

  std::vector<UtteranceInterval> Intervals() const;
  bool operator==(const MeetingAnnotation&) const = default;
};

MeetingAnnotation AnnotationOf(const Meeting& meeting);
// Annotation of a meeting that has not been rendered; no audio files exist.
MeetingAnnotation AnnotationOf(const MeetingConfig& config,
                               const MeetingLayout& layout);
std::string AnnotationToJson(const MeetingAnnotation& annotation);
// Throws ParseError on malformed JSON, a missing field, or an invalid
// interval (the message names the utterance).
MeetingAnnotation AnnotationFromJson(std::string_view text,
                                     std::string_view source = "<memory>");
MeetingAnnotation ReadAnnotation(const std::filesystem::path& path);

// Config documents hold the recipe only; the seed comes from the caller.
std::string MeetingConfigToJson(const MeetingConfig& config);
MeetingConfig MeetingConfigFromJson(std::string_view text,
                                    std::string_view source = "<memory>");

// Layout: meeting.json, mixture.wav, noise.wav, utterances/NNNN.wav.
void WriteMeeting(const Meeting& meeting, const std::filesystem::path& dir);
Meeting ReadMeeting(const std::filesystem::path& dir);
// True if `dir` contains a meeting.json.
bool IsMeetingDirectory(const std::filesystem::path& dir);

// Channel streams as channel_1.wav ... channel_N.wav.
void WriteStreams(const EstimateStreams& streams,
                  const std::filesystem::path& dir);
EstimateStreams ReadStreams(const std::filesystem::path& dir);

// segments.json plus segment_NNNN_ch<g>.wav per segment and channel.
void WriteSegmentOutputs(const std::vector<SegmentOutput>& outputs,
                         const SegmentPlan& plan, const std::string& separator,
                         const std::filesystem::path& dir);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace graphpit

#endif  // GRAPHPIT_MEETING_IO_H_
