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

// graphpit command-line tool: meeting simulation, segment statistics,
// segment-wise separation, stitching + evaluation, coloring enumeration and
// PIT losses. Results go to stdout as JSON; errors go to stderr as JSON.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "graphpit/coloring.h"
#include "graphpit/css.h"
#include "graphpit/errors.h"
#include "graphpit/evaluation.h"
#include "graphpit/meeting.h"
#include "graphpit/meeting_io.h"
#include "graphpit/oracle_separator.h"
#include "graphpit/pit.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
namespace gp = graphpit;
using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitContract = 3;

int ReportError(const std::string& kind, const std::string& message,
                int exit_code) {
  const json doc = {{"error", {{"kind", kind}, {"message", message}}},
                    {"exit_code", exit_code}};
  std::cerr << doc.dump() << "\n";
  return exit_code;
}

void Print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::int64_t ToSamples(double seconds, double sample_rate, const char* what) {
  const double exact = seconds * sample_rate;
  const double rounded = std::round(exact);
  if (!(seconds > 0.0) || std::abs(exact - rounded) > 1e-6) {
    throw gp::ContractError(std::string(what) + " of " + std::to_string(seconds) +
                            " s is not a positive whole number of samples");
  }
  return static_cast<std::int64_t>(rounded);
}

// Runs fn(0..count-1) on up to `threads` workers; rethrows the first error.
void ParallelFor(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<fs::path> MeetingDirectories(const fs::path& root) {
  if (gp::IsMeetingDirectory(root)) return {root};
  std::vector<fs::path> dirs;
  if (fs::is_directory(root)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (gp::IsMeetingDirectory(entry.path())) dirs.push_back(entry.path());
    }
  }
  if (dirs.empty()) {
    throw gp::ParseError(root.string() + ": no meeting.json here or one level down");
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

fs::path AnnotationPath(const fs::path& path) {
  return fs::is_directory(path) ? path / "meeting.json" : path;
}

json ColoringJson(const gp::Coloring& coloring) {
  json out = json::array();
  for (int c : coloring.channels) out.push_back(c + 1);
  return out;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out;
  int count = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool layout_only = false;
};

int RunSimulate(const SimulateArgs& a) {
  gp::MeetingConfig base;
  if (!a.config.empty()) {
    base = gp::MeetingConfigFromJson(gp::ReadTextFile(a.config), a.config);
  }
  base.Validate();
  std::vector<json> entries(static_cast<std::size_t>(a.count));
  ParallelFor(entries.size(), a.threads, [&](std::size_t i) {
    gp::MeetingConfig config = base;
    config.seed = a.seed + i;
    const gp::MeetingLayout layout = gp::SimulateMeetingLayout(config);
    char name[32];
    std::snprintf(name, sizeof(name), "meeting_%04zu", i + 1);
    const fs::path dir = fs::path(a.out) / name;
    if (a.layout_only) {
      fs::create_directories(dir);
      gp::WriteTextFile(dir / "meeting.json",
                        gp::AnnotationToJson(gp::AnnotationOf(config, layout)));
    } else {
      gp::WriteMeeting(gp::RenderMeeting(config, layout), dir);
    }
    entries[i] = {
        {"directory", dir.string()},
        {"seed", config.seed},
        {"num_speakers", layout.speaker_gain_db.size()},
        {"num_utterances", layout.utterances.size()},
        {"length_s", static_cast<double>(layout.num_samples) / config.sample_rate},
        {"target_overlap_ratio", layout.target_overlap_ratio},
        {"overlap_ratio", gp::OverlapRatio(layout.utterances)},
        {"noise_snr_db", layout.noise_snr_db}};
  });
  Print({{"schema_version", gp::kSchemaVersion}, {"meetings", entries}});
  return 0;
}

// --- segment-stats ----------------------------------------------------------

struct SegmentStatsArgs {
  std::string meeting;
  std::vector<double> lengths{2, 4, 8, 16};
  int channels = 2;
  std::optional<double> shift;
};

int RunSegmentStats(const SegmentStatsArgs& a) {
  if (a.channels < 1) throw gp::ContractError("--channels must be at least 1");
  std::vector<gp::MeetingAnnotation> annotations;
  for (const auto& dir : MeetingDirectories(a.meeting)) {
    annotations.push_back(gp::ReadAnnotation(dir / "meeting.json"));
  }
  json rows = json::array();
  for (double length_s : a.lengths) {
    const double shift_s = a.shift.value_or(length_s);
    gp::SegmentSpeakerStats total;
    for (const auto& ann : annotations) {
      const auto intervals = ann.Intervals();
      total += gp::SegmentSpeakerHistogram(
          intervals, ann.num_samples,
          ToSamples(length_s, ann.sample_rate, "segment length"),
          ToSamples(shift_s, ann.sample_rate, "shift"));
    }
    rows.push_back({{"segment_length_s", length_s},
                    {"shift_s", shift_s},
                    {"num_segments", total.num_segments},
                    {"speaker_histogram", total.counts},
                    {"fraction_fulfilled", total.FractionAtMost(a.channels)},
                    {"fraction_violating", total.FractionAbove(a.channels)}});
  }
  Print({{"schema_version", gp::kSchemaVersion},
         {"num_meetings", annotations.size()},
         {"channels", a.channels},
         {"segment_lengths", rows}});
  return 0;
}

// --- separate / stitch-eval -------------------------------------------------

struct PipelineArgs {
  std::string meeting;
  std::string plan = "1,14,1";
  std::string separator = "oracle";
  int channels = 2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;          // separate
  std::string report;       // stitch-eval
  std::string streams_out;  // stitch-eval
  bool no_stitch = false;   // stitch-eval
};

int RunSeparate(const PipelineArgs& a) {
  const gp::Meeting m = gp::ReadMeeting(a.meeting);
  const gp::OracleOptions options =
      gp::ParseOracleSpec(a.separator, a.channels, a.seed);
  const gp::OracleSeparator separator(m, options);
  const gp::SegmentPlan plan = gp::SegmentPlan::Parse(a.plan, m.sample_rate);
  const auto outputs = gp::SeparateSegments(m.mixture, plan, separator, a.threads);
  gp::WriteSegmentOutputs(outputs, plan, gp::FormatOracleSpec(options), a.out);
  Print({{"out", a.out},
         {"segments", outputs.size()},
         {"overhead", gp::SegmentOverhead(m.num_samples, plan)}});
  return 0;
}

int RunStitchEval(const PipelineArgs& a) {
  const gp::Meeting m = gp::ReadMeeting(a.meeting);
  const gp::OracleOptions options =
      gp::ParseOracleSpec(a.separator, a.channels, a.seed);
  const gp::OracleSeparator separator(m, options);

  std::map<std::string, std::string> configuration{
      {"separator", gp::FormatOracleSpec(options)},
      {"channels", std::to_string(a.channels)},
      {"seed", std::to_string(a.seed)}};
  gp::EstimateStreams streams;
  if (a.no_stitch) {
    streams = separator.Separate(m.mixture, 0);
    configuration["mode"] = "no-stitch";
    configuration["segments"] = "1";
  } else {
    const gp::SegmentPlan plan = gp::SegmentPlan::Parse(a.plan, m.sample_rate);
    const auto outputs =
        gp::SeparateSegments(m.mixture, plan, separator, a.threads);
    streams = gp::Stitch(outputs, plan, m.num_samples);
    configuration["mode"] = "stitch";
    configuration["plan"] = a.plan;
    configuration["segments"] = std::to_string(outputs.size());
  }
  if (!a.streams_out.empty()) gp::WriteStreams(streams, a.streams_out);

  gp::EvaluationReport report = gp::EvaluateMeeting(m, streams);
  report.configuration = configuration;
  const std::string text = gp::ReportToJson(report);
  if (a.report.empty()) {
    std::cout << text;
  } else {
    gp::WriteTextFile(a.report, text);
    Print({{"report", a.report},
           {"num_scored", report.num_scored},
           {"mean_sdr_plain", report.mean_sdr_plain},
           {"mean_sdri", report.mean_sdri}});
  }
  return 0;
}

// --- colorings --------------------------------------------------------------

struct ColoringsArgs {
  std::string annotation;
  int channels = 2;
  bool count_only = false;
  std::size_t limit = 10000;
};

int RunColorings(const ColoringsArgs& a) {
  const gp::MeetingAnnotation ann = gp::ReadAnnotation(AnnotationPath(a.annotation));
  const auto intervals = ann.Intervals();
  const auto count = gp::CountIntervalColorings(intervals, a.channels);
  json doc = {{"num_utterances", intervals.size()},
              {"channels", a.channels},
              {"max_concurrency", gp::MaxConcurrency(intervals)},
              {"count", count ? json(*count) : json(nullptr)},
              {"log10_count", gp::Log10IntervalColorings(intervals, a.channels)}};
  if (!count) doc["count_exceeds_uint64"] = true;
  if (!a.count_only) {
    const gp::OverlapGraph graph = gp::BuildOverlapGraph(intervals);
    gp::ColoringEnumerator enumerator(graph, a.channels);
    json list = json::array();
    gp::Coloring c;
    while (list.size() < a.limit && enumerator.Next(c)) {
      list.push_back(ColoringJson(c));
    }
    doc["colorings"] = list;
    doc["truncated"] = !count || list.size() < *count;
  }
  if (!std::isfinite(doc["log10_count"].get<double>())) doc["log10_count"] = nullptr;
  Print(doc);
  return 0;
}

// --- loss -------------------------------------------------------------------

struct LossArgs {
  std::string meeting;
  std::string estimates;
  std::string objective = "graph-pit";
  std::string base_loss = "tsdr:20:1e-6";
  double max_candidates = 1e7;
};

int RunLoss(const LossArgs& a) {
  const gp::Meeting m = gp::ReadMeeting(a.meeting);
  const gp::EstimateStreams estimates = gp::ReadStreams(a.estimates);
  const gp::BaseLoss loss = gp::ParseBaseLoss(a.base_loss);
  const gp::SegmentTargets targets = m.Targets();
  json doc = {{"objective", a.objective}, {"base_loss", loss.name}};
  gp::PitResult result;
  if (a.objective == "upit") {
    result = gp::UpitLoss(targets, estimates, loss);
    json assignment = json::array();
    const auto& sa = result.speaker_assignment();
    for (std::size_t k = 0; k < sa.speakers.size(); ++k) {
      assignment.push_back({{"speaker", sa.speakers[k] + 1},
                            {"channel", sa.permutation[k] + 1}});
    }
    doc["assignment"] = assignment;
  } else {
    const auto intervals = targets.Intervals();
    const double log10_count =
        gp::Log10IntervalColorings(intervals, estimates.num_channels());
    if (log10_count > std::log10(a.max_candidates)) {
      throw gp::ContractError(
          "Graph-PIT would score 10^" + std::to_string(log10_count) +
          " colorings, above --max-candidates");
    }
    result = gp::GraphPitLoss(targets, estimates, loss);
    doc["assignment"] = ColoringJson(result.coloring());
  }
  doc["loss"] = result.loss;
  doc["candidates_evaluated"] = result.candidates_evaluated;
  Print(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-PIT toolkit: simulation, separation, stitching, evaluation"};
  app.require_subcommand(1);

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Simulate meetings into a directory");
  sim->add_option("--config", simulate.config, "Meeting config JSON")
      ->check(CLI::ExistingFile);
  sim->add_option("--out", simulate.out, "Output directory")->required();
  sim->add_option("--count", simulate.count, "Number of meetings")
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", simulate.seed, "Seed of the first meeting");
  sim->add_option("--threads", simulate.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sim->add_flag("--layout-only", simulate.layout_only,
                "Write meeting.json only, no audio");

  SegmentStatsArgs stats;
  auto* seg = app.add_subcommand("segment-stats", "Speakers per segment");
  seg->add_option("--meeting", stats.meeting, "Meeting directory or parent")
      ->required();
  seg->add_option("--segment-lengths", stats.lengths, "Seconds, comma separated")
      ->delimiter(',');
  seg->add_option("--channels", stats.channels, "Output channels");
  seg->add_option("--shift", stats.shift, "Window shift in seconds "
                                          "(default: segment length)");

  PipelineArgs separate;
  auto* sep = app.add_subcommand("separate", "Separate a meeting segment-wise");
  PipelineArgs stitch;
  auto* ste = app.add_subcommand("stitch-eval", "Separate, stitch and evaluate");
  for (auto [cmd, args] : {std::pair{sep, &separate}, std::pair{ste, &stitch}}) {
    cmd->add_option("--meeting", args->meeting, "Meeting directory")->required();
    cmd->add_option("--plan", args->plan, "Th,Tc,Tf in seconds");
    cmd->add_option("--separator", args->separator,
                    "oracle[:shuffle-seed][:snr-db]");
    cmd->add_option("--channels", args->channels, "Output channels");
    cmd->add_option("--seed", args->seed, "Noise seed");
    cmd->add_option("--threads", args->threads, "Worker threads")
        ->check(CLI::PositiveNumber);
  }
  sep->add_option("--out", separate.out, "Output directory")->required();
  ste->add_option("--report", stitch.report, "Report file (default: stdout)");
  ste->add_option("--streams-out", stitch.streams_out,
                  "Write the stitched streams here");
  ste->add_flag("--no-stitch", stitch.no_stitch,
                "Separate the whole meeting as one segment");

  ColoringsArgs colorings;
  auto* col = app.add_subcommand("colorings", "Enumerate proper colorings");
  col->add_option("--annotation", colorings.annotation,
                  "meeting.json or a meeting directory")
      ->required();
  col->add_option("--channels", colorings.channels, "Output channels")->required();
  col->add_flag("--count-only", colorings.count_only, "Print only the count");
  col->add_option("--limit", colorings.limit, "Print at most this many");

  LossArgs loss;
  auto* los = app.add_subcommand("loss", "PIT loss of estimates for a meeting");
  los->add_option("--meeting", loss.meeting, "Meeting directory")->required();
  los->add_option("--estimates", loss.estimates, "Directory of channel_N.wav")
      ->required();
  los->add_option("--objective", loss.objective, "upit or graph-pit")
      ->check(CLI::IsMember({"upit", "graph-pit"}));
  los->add_option("--base-loss", loss.base_loss, "sdr | tsdr[:max[:eps]]");
  los->add_option("--max-candidates", loss.max_candidates,
                  "Refuse Graph-PIT above this many colorings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage", e.what(), kExitUsage);
  }

  try {
    if (*sim) return RunSimulate(simulate);
    if (*seg) return RunSegmentStats(stats);
    if (*sep) return RunSeparate(separate);
    if (*ste) return RunStitchEval(stitch);
    if (*col) return RunColorings(colorings);
    if (*los) return RunLoss(loss);
  } catch (const gp::InfeasibleError& e) {
    return ReportError("infeasible", e.what(), kExitContract);
  } catch (const gp::ParseError& e) {
    return ReportError("parse", e.what(), kExitUsage);
  } catch (const gp::ContractError& e) {
    return ReportError("contract", e.what(), kExitContract);
  } catch (const gp::UndefinedMetricError& e) {
    return ReportError("undefined_metric", e.what(), kExitContract);
  } catch (const std::exception& e) {
    return ReportError("internal", e.what(), kExitFailure);
  }
  return kExitUsage;
}
