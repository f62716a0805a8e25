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

#include "graphpit/meeting_io.h"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "graphpit/errors.h"
#include "graphpit/wav.h"
#include "json.hpp"

namespace graphpit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
json RangeJson(const Interval<T>& r) {
  return json::array({r.lo, r.hi});
}

template <typename T>
Interval<T> RangeFrom(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw json::type_error::create(302, "range must be [lo, hi]", &j);
  }
  return {j.at(0).get<T>(), j.at(1).get<T>()};
}

json ConfigJson(const MeetingConfig& c) {
  return json{{"num_speakers", RangeJson(c.num_speakers)},
              {"overlap_ratio", RangeJson(c.overlap_ratio)},
              {"target_length_s", c.target_length_s},
              {"silence_probability", c.silence_probability},
              {"speaker_gain_db", RangeJson(c.speaker_gain_db)},
              {"noise_snr_db", RangeJson(c.noise_snr_db)},
              {"sample_rate", c.sample_rate},
              {"utterance_length_s", RangeJson(c.utterance_length_s)},
              {"silence_length_s", RangeJson(c.silence_length_s)}};
}

// Missing keys keep their defaults.
MeetingConfig ConfigFrom(const json& j) {
  MeetingConfig c;
  if (!j.is_object()) {
    throw json::type_error::create(302, "config must be an object", &j);
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "num_speakers") c.num_speakers = RangeFrom<int>(value);
    else if (key == "overlap_ratio") c.overlap_ratio = RangeFrom<double>(value);
    else if (key == "target_length_s") c.target_length_s = value.get<double>();
    else if (key == "silence_probability") c.silence_probability = value.get<double>();
    else if (key == "speaker_gain_db") c.speaker_gain_db = RangeFrom<double>(value);
    else if (key == "noise_snr_db") c.noise_snr_db = RangeFrom<double>(value);
    else if (key == "sample_rate") c.sample_rate = value.get<double>();
    else if (key == "utterance_length_s") c.utterance_length_s = RangeFrom<double>(value);
    else if (key == "silence_length_s") c.silence_length_s = RangeFrom<double>(value);
    else throw json::other_error::create(501, "unknown config key '" + key + "'", &j);
  }
  return c;
}

template <typename F>
auto Guarded(std::string_view source, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

std::string UtteranceFile(int id) {
  char name[32];
  std::snprintf(name, sizeof(name), "utterances/%04d.wav", id + 1);
  return name;
}

}  // namespace

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<UtteranceInterval> MeetingAnnotation::Intervals() const {
  std::vector<UtteranceInterval> out;
  for (const auto& u : utterances) out.push_back(u.interval);
  return out;
}

MeetingAnnotation AnnotationOf(const Meeting& meeting) {
  MeetingAnnotation a;
  a.sample_rate = meeting.sample_rate;
  a.num_samples = meeting.num_samples;
  a.noise_snr_db = meeting.noise_snr_db;
  a.noise_seed = meeting.noise_seed;
  a.target_overlap_ratio = meeting.target_overlap_ratio;
  a.speakers = meeting.speakers;
  a.config = meeting.config;
  for (const auto& u : meeting.utterances) {
    a.utterances.push_back(
        {u.interval, u.gain_db, UtteranceFile(u.interval.id), u.synth_seed});
  }
  return a;
}

MeetingAnnotation AnnotationOf(const MeetingConfig& config,
                               const MeetingLayout& layout) {
  MeetingAnnotation a;
  a.sample_rate = config.sample_rate;
  a.num_samples = layout.num_samples;
  a.noise_snr_db = layout.noise_snr_db;
  a.noise_seed = layout.noise_seed;
  a.target_overlap_ratio = layout.target_overlap_ratio;
  a.config = config;
  for (std::size_t k = 0; k < layout.speaker_gain_db.size(); ++k) {
    a.speakers.push_back({static_cast<int>(k), layout.speaker_gain_db[k]});
  }
  for (std::size_t i = 0; i < layout.utterances.size(); ++i) {
    const auto& iv = layout.utterances[i];
    a.utterances.push_back({iv, layout.speaker_gain_db[iv.speaker],
                            UtteranceFile(iv.id), layout.synth_seeds[i]});
  }
  return a;
}

std::string AnnotationToJson(const MeetingAnnotation& a) {
  json speakers = json::array();
  for (const auto& s : a.speakers) {
    speakers.push_back({{"id", s.id + 1}, {"gain_db", s.gain_db}});
  }
  json utterances = json::array();
  for (const auto& u : a.utterances) {
    utterances.push_back({{"id", u.interval.id + 1},
                          {"speaker", u.interval.speaker + 1},
                          {"start_sample", u.interval.start},
                          {"end_sample", u.interval.end},
                          {"gain_db", u.gain_db},
                          {"file", u.file},
                          {"synth_seed", u.synth_seed}});
  }
  json generator = {{"seed", a.config.seed}, {"config", ConfigJson(a.config)}};
  json doc = {{"schema_version", kSchemaVersion},
              {"sample_rate", a.sample_rate},
              {"num_samples", a.num_samples},
              {"mixture", a.mixture_file},
              {"noise", {{"file", a.noise_file},
                         {"snr_db", a.noise_snr_db},
                         {"seed", a.noise_seed}}},
              {"target_overlap_ratio", a.target_overlap_ratio},
              {"speakers", speakers},
              {"utterances", utterances},
              {"generator", generator}};
  return doc.dump(2) + "\n";
}

MeetingAnnotation AnnotationFromJson(std::string_view text,
                                     std::string_view source) {
  MeetingAnnotation a = Guarded(source, [&] {
    const json doc = json::parse(text);
    const int version = doc.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw ParseError(std::string(source) + ": unsupported schema_version " +
                       std::to_string(version));
    }
    MeetingAnnotation a;
    a.sample_rate = doc.at("sample_rate").get<double>();
    a.num_samples = doc.at("num_samples").get<std::int64_t>();
    a.mixture_file = doc.at("mixture").get<std::string>();
    const auto& noise = doc.at("noise");
    a.noise_file = noise.at("file").get<std::string>();
    a.noise_snr_db = noise.at("snr_db").get<double>();
    a.noise_seed = noise.at("seed").get<std::uint64_t>();
    a.target_overlap_ratio = doc.at("target_overlap_ratio").get<double>();
    for (const auto& s : doc.at("speakers")) {
      a.speakers.push_back({s.at("id").get<int>() - 1, s.at("gain_db").get<double>()});
    }
    for (const auto& u : doc.at("utterances")) {
      MeetingAnnotation::Utterance utt;
      utt.interval.id = u.at("id").get<int>() - 1;
      utt.interval.speaker = u.at("speaker").get<int>() - 1;
      utt.interval.start = u.at("start_sample").get<std::int64_t>();
      utt.interval.end = u.at("end_sample").get<std::int64_t>();
      utt.gain_db = u.at("gain_db").get<double>();
      utt.file = u.at("file").get<std::string>();
      utt.synth_seed = u.at("synth_seed").get<std::uint64_t>();
      a.utterances.push_back(std::move(utt));
    }
    const auto& generator = doc.at("generator");
    a.config = ConfigFrom(generator.at("config"));
    a.config.seed = generator.at("seed").get<std::uint64_t>();
    return a;
  });
  if (!(a.sample_rate > 0.0)) {
    throw ParseError(std::string(source) + ": sample_rate must be positive");
  }
  for (const auto& u : a.utterances) {
    const std::string id = std::to_string(u.interval.id + 1);
    if (u.interval.start >= u.interval.end) {
      throw ParseError(std::string(source) + ": utterance " + id +
                       ": start_sample must be before end_sample");
    }
    if (u.interval.start < 0 || u.interval.end > a.num_samples) {
      throw ParseError(std::string(source) + ": utterance " + id +
                       " lies outside the meeting");
    }
  }
  try {
    ValidateIntervals(a.Intervals());
  } catch (const ContractError& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
  return a;
}

MeetingAnnotation ReadAnnotation(const fs::path& path) {
  return AnnotationFromJson(ReadTextFile(path), path.string());
}

std::string MeetingConfigToJson(const MeetingConfig& config) {
  return ConfigJson(config).dump(2) + "\n";
}

MeetingConfig MeetingConfigFromJson(std::string_view text,
                                    std::string_view source) {
  MeetingConfig c =
      Guarded(source, [&] { return ConfigFrom(json::parse(text)); });
  try {
    c.Validate();
  } catch (const ContractError& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
  return c;
}

bool IsMeetingDirectory(const fs::path& dir) {
  return fs::is_regular_file(dir / "meeting.json");
}

void WriteMeeting(const Meeting& meeting, const fs::path& dir) {
  fs::create_directories(dir / "utterances");
  const MeetingAnnotation a = AnnotationOf(meeting);
  WriteWav(dir / a.mixture_file, meeting.mixture);
  WriteWav(dir / a.noise_file, meeting.noise);
  for (std::size_t i = 0; i < meeting.utterances.size(); ++i) {
    WriteWav(dir / a.utterances[i].file, meeting.utterances[i].signal);
  }
  WriteTextFile(dir / "meeting.json", AnnotationToJson(a));
}

Meeting ReadMeeting(const fs::path& dir) {
  const fs::path annotation_path = dir / "meeting.json";
  if (!fs::exists(annotation_path)) {
    throw ParseError(annotation_path.string() + ": no such file");
  }
  const MeetingAnnotation a = ReadAnnotation(annotation_path);
  auto read_audio = [&](const std::string& file, const std::string& what) {
    const fs::path path = dir / file;
    if (!fs::exists(path)) {
      throw ParseError(annotation_path.string() + ": " + what +
                       " references missing file " + path.string());
    }
    Waveform w = ReadWav(path);
    if (w.sample_rate() != a.sample_rate) {
      throw ParseError(path.string() + ": sample rate " +
                       std::to_string(w.sample_rate()) +
                       " differs from the annotation");
    }
    return w;
  };

  Meeting m;
  m.sample_rate = a.sample_rate;
  m.num_samples = a.num_samples;
  m.noise_snr_db = a.noise_snr_db;
  m.noise_seed = a.noise_seed;
  m.target_overlap_ratio = a.target_overlap_ratio;
  m.speakers = a.speakers;
  m.config = a.config;
  m.mixture = read_audio(a.mixture_file, "mixture");
  m.noise = read_audio(a.noise_file, "noise");
  for (const auto* w : {&m.mixture, &m.noise}) {
    if (static_cast<std::int64_t>(w->size()) != a.num_samples) {
      throw ParseError(dir.string() + ": audio length " +
                       std::to_string(w->size()) + " differs from num_samples " +
                       std::to_string(a.num_samples));
    }
  }
  for (const auto& u : a.utterances) {
    const std::string id = std::to_string(u.interval.id + 1);
    Waveform w = read_audio(u.file, "utterance " + id);
    if (static_cast<std::int64_t>(w.size()) != u.interval.length()) {
      throw ParseError(u.file + ": utterance " + id + " has " +
                       std::to_string(w.size()) + " samples, interval needs " +
                       std::to_string(u.interval.length()));
    }
    m.utterances.push_back({u.interval, std::move(w), u.gain_db, u.synth_seed});
  }
  return m;
}

void WriteStreams(const EstimateStreams& streams, const fs::path& dir) {
  fs::create_directories(dir);
  for (int c = 0; c < streams.num_channels(); ++c) {
    WriteWav(dir / ("channel_" + std::to_string(c + 1) + ".wav"), streams[c]);
  }
}

EstimateStreams ReadStreams(const fs::path& dir) {
  std::vector<Waveform> channels;
  for (int c = 1;; ++c) {
    const fs::path path = dir / ("channel_" + std::to_string(c) + ".wav");
    if (!fs::exists(path)) break;
    channels.push_back(ReadWav(path));
  }
  if (channels.empty()) {
    throw ParseError(dir.string() + ": no channel_1.wav found");
  }
  try {
    return EstimateStreams(std::move(channels));
  } catch (const ContractError& e) {
    throw ParseError(dir.string() + ": " + e.what());
  }
}

void WriteSegmentOutputs(const std::vector<SegmentOutput>& outputs,
                         const SegmentPlan& plan, const std::string& separator,
                         const fs::path& dir) {
  fs::create_directories(dir);
  json segments = json::array();
  for (const auto& out : outputs) {
    json files = json::array();
    for (int c = 0; c < out.streams.num_channels(); ++c) {
      char name[64];
      std::snprintf(name, sizeof(name), "segment_%04zu_ch%d.wav", out.index,
                    c + 1);
      WriteWav(dir / name, out.streams[c]);
      files.push_back(name);
    }
    segments.push_back({{"index", out.index},
                        {"start_sample", out.range.start},
                        {"end_sample", out.range.end},
                        {"current_start_sample", out.range.current_start},
                        {"current_end_sample", out.range.current_end},
                        {"padding_front", out.padding_front},
                        {"padding_back", out.padding_back},
                        {"files", files}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"plan", {{"history_s", plan.history_seconds()},
                        {"current_s", plan.current_seconds()},
                        {"future_s", plan.future_seconds()},
                        {"sample_rate", plan.sample_rate()}}},
              {"separator", separator},
              {"num_channels",
               outputs.empty() ? 0 : outputs.front().streams.num_channels()},
              {"segments", segments}};
  WriteTextFile(dir / "segments.json", doc.dump(2) + "\n");
}

}  // namespace graphpit
