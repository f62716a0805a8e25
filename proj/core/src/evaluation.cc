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

#include "graphpit/evaluation.h"

#include <algorithm>
#include <limits>
#include <set>

#include "graphpit/errors.h"
#include "graphpit/meeting_io.h"
#include "json.hpp"

namespace graphpit {

using nlohmann::json;

namespace {

const char* const kGroupLabels[] = {"1", "2", "3", "4+"};

}  // namespace

std::string OverlapGroupLabel(int num_overlapping_speakers) {
  return kGroupLabels[std::clamp(num_overlapping_speakers, 1, 4) - 1];
}

EvaluationReport EvaluateMeeting(const Meeting& meeting,
                                 const EstimateStreams& streams) {
  if (static_cast<std::int64_t>(streams.length()) != meeting.num_samples) {
    throw ContractError("streams have " + std::to_string(streams.length()) +
                        " samples, meeting has " +
                        std::to_string(meeting.num_samples));
  }
  EvaluationReport report;
  for (const auto& utt : meeting.utterances) {
    const auto& iv = utt.interval;
    UtteranceScore score;
    score.utterance = iv.id;
    score.speaker = iv.speaker;
    std::set<int> others;
    for (const auto& other : meeting.utterances) {
      if (other.interval.speaker != iv.speaker && Overlaps(other.interval, iv)) {
        others.insert(other.interval.speaker);
      }
    }
    score.num_overlapping_speakers = 1 + static_cast<int>(others.size());

    const Waveform& reference = utt.signal;
    if (IsSilent(reference.samples())) {
      score.degenerate = true;
      report.utterances.push_back(score);
      continue;
    }
    const Waveform unprocessed = meeting.mixture.Slice(iv.start, iv.end);
    score.sdr_plain = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < streams.num_channels(); ++c) {
      const double value = Sdr(reference, streams[c].Slice(iv.start, iv.end));
      if (value > score.sdr_plain) {
        score.sdr_plain = value;
        score.chosen_channel = c;
      }
    }
    score.sdri = score.sdr_plain - Sdr(reference, unprocessed);
    report.utterances.push_back(score);
  }
  Aggregate(report);
  return report;
}

void Aggregate(EvaluationReport& report) {
  report.groups.clear();
  for (const char* label : kGroupLabels) report.groups.push_back({label});
  report.num_scored = 0;
  double sum_sdr = 0.0;
  double sum_sdri = 0.0;
  for (const auto& s : report.utterances) {
    if (s.degenerate) continue;
    auto& g = report.groups[std::clamp(s.num_overlapping_speakers, 1, 4) - 1];
    ++g.count;
    g.mean_sdr_plain += s.sdr_plain;
    g.mean_sdri += s.sdri;
    ++report.num_scored;
    sum_sdr += s.sdr_plain;
    sum_sdri += s.sdri;
  }
  for (auto& g : report.groups) {
    if (g.count > 0) {
      g.mean_sdr_plain /= static_cast<double>(g.count);
      g.mean_sdri /= static_cast<double>(g.count);
    }
  }
  if (report.num_scored > 0) {
    report.mean_sdr_plain = sum_sdr / static_cast<double>(report.num_scored);
    report.mean_sdri = sum_sdri / static_cast<double>(report.num_scored);
  } else {
    report.mean_sdr_plain = 0.0;
    report.mean_sdri = 0.0;
  }
}

std::string ReportToJson(const EvaluationReport& report) {
  json utterances = json::array();
  for (const auto& s : report.utterances) {
    utterances.push_back({{"utterance_id", s.utterance + 1},
                          {"speaker", s.speaker + 1},
                          {"num_overlapping_speakers", s.num_overlapping_speakers},
                          {"chosen_channel", s.chosen_channel + 1},
                          {"sdr_plain", s.sdr_plain},
                          {"sdri", s.sdri},
                          {"degenerate", s.degenerate}});
  }
  json groups = json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"num_overlapping_speakers", g.label},
                      {"count", g.count},
                      {"mean_sdr_plain", g.mean_sdr_plain},
                      {"mean_sdri", g.mean_sdri}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"metric", {{"name", "sdr_plain"},
                          {"sdr_cap_db", kSdrCapDb},
                          {"unprocessed", "mixture cropped to utterance"}}},
              {"configuration", report.configuration},
              {"utterances", utterances},
              {"groups", groups},
              {"overall", {{"count", report.num_scored},
                           {"mean_sdr_plain", report.mean_sdr_plain},
                           {"mean_sdri", report.mean_sdri}}},
              {"wer", nullptr}};
  return doc.dump(2) + "\n";
}

EvaluationReport ReportFromJson(std::string_view text,
                                std::string_view source) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw ParseError(std::string(source) + ": unsupported schema_version");
    }
    EvaluationReport report;
    report.configuration =
        doc.at("configuration").get<std::map<std::string, std::string>>();
    for (const auto& u : doc.at("utterances")) {
      UtteranceScore s;
      s.utterance = u.at("utterance_id").get<int>() - 1;
      s.speaker = u.at("speaker").get<int>() - 1;
      s.num_overlapping_speakers = u.at("num_overlapping_speakers").get<int>();
      s.chosen_channel = u.at("chosen_channel").get<int>() - 1;
      s.sdr_plain = u.at("sdr_plain").get<double>();
      s.sdri = u.at("sdri").get<double>();
      s.degenerate = u.at("degenerate").get<bool>();
      report.utterances.push_back(s);
    }
    for (const auto& g : doc.at("groups")) {
      report.groups.push_back({g.at("num_overlapping_speakers").get<std::string>(),
                               g.at("count").get<std::size_t>(),
                               g.at("mean_sdr_plain").get<double>(),
                               g.at("mean_sdri").get<double>()});
    }
    const auto& overall = doc.at("overall");
    report.num_scored = overall.at("count").get<std::size_t>();
    report.mean_sdr_plain = overall.at("mean_sdr_plain").get<double>();
    report.mean_sdri = overall.at("mean_sdri").get<double>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

}  // namespace graphpit
