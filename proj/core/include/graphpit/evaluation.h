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

#ifndef GRAPHPIT_EVALUATION_H_
#define GRAPHPIT_EVALUATION_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "graphpit/meeting.h"
#include "graphpit/pit.h"

namespace graphpit {

struct UtteranceScore {
  int utterance = 0;  // 0-based id
  int speaker = 0;
  // 1 + number of other speakers active anywhere inside the utterance.
  int num_overlapping_speakers = 1;
  int chosen_channel = 0;
  double sdr_plain = 0.0;
  double sdri = 0.0;
  // All-zero reference; excluded from the aggregates.
  bool degenerate = false;
  bool operator==(const UtteranceScore&) const = default;
};

struct GroupAggregate {
  std::string label;  // "1", "2", "3", "4+"
  std::size_t count = 0;
  double mean_sdr_plain = 0.0;
  double mean_sdri = 0.0;
  bool operator==(const GroupAggregate&) const = default;
};

struct EvaluationReport {
  std::vector<UtteranceScore> utterances;
  std::vector<GroupAggregate> groups;
  std::size_t num_scored = 0;
  double mean_sdr_plain = 0.0;
  double mean_sdri = 0.0;
  // Free-form echo of how the streams were produced (plan, separator, ...).
  std::map<std::string, std::string> configuration;
  bool operator==(const EvaluationReport&) const = default;
};

std::string OverlapGroupLabel(int num_overlapping_speakers);

// Scores every utterance of `meeting` on its oracle boundaries: the channel
// with the highest plain SDR against the clean utterance wins (lowest index on
// ties), and SDRi is measured against the mixture cropped to the same
// boundaries.
EvaluationReport EvaluateMeeting(const Meeting& meeting,
                                 const EstimateStreams& streams);

// Fills groups and overall means from the per-utterance records.
void Aggregate(EvaluationReport& report);

// Report JSON carries "schema_version", the SDR cap, and a null "wer" field.
std::string ReportToJson(const EvaluationReport& report);
EvaluationReport ReportFromJson(std::string_view text,
                                std::string_view source = "<memory>");

}  // namespace graphpit

#endif  // GRAPHPIT_EVALUATION_H_
