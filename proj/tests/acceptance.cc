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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "graphpit/audio.h"
#include "graphpit/coloring.h"
#include "graphpit/css.h"
#include "graphpit/errors.h"
#include "graphpit/evaluation.h"
#include "graphpit/meeting.h"
#include "graphpit/meeting_io.h"
#include "graphpit/oracle_separator.h"
#include "graphpit/overlap_graph.h"
#include "graphpit/pit.h"
#include "test_util.h"

namespace graphpit {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::int64_t Factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

OverlapGraph Clique(int c) {
  OverlapGraph g(c);
  for (int u = 0; u < c; ++u) {
    for (int v = u + 1; v < c; ++v) g.AddEdge(u, v);
  }
  return g;
}

// 1. Enumeration equals brute force on random interval sets.
Outcome ColoringEquivalence() {
  std::mt19937_64 rng(101);
  const auto t0 = Clock::now();
  int mismatches = 0;
  std::size_t total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int u = 1 + static_cast<int>(rng() % 8);
    const int n = 2 + trial % 2;
    const auto ivs = testing::RandomIntervals(rng, u, 24);
    const OverlapGraph g = BuildOverlapGraph(ivs);
    const auto fast = EnumerateColorings(g, n);
    if (fast != BruteForceColorings(g, n)) ++mismatches;
    total += fast.size();
  }
  const double s = Seconds(t0);
  return {mismatches == 0 && s < 5.0,
          Format("%d/200 mismatches, %zu colorings, %.3f s (limit 5 s)",
                 mismatches, total, s)};
}

// 2. Closed-form counts.
Outcome CountLaws() {
  int failures = 0, cases = 0;
  for (int u = 0; u <= 8; ++u) {
    for (int n = 1; n <= 4; ++n) {
      const OverlapGraph g(u);
      const auto expect = static_cast<std::size_t>(std::llround(std::pow(n, u)));
      failures += CountColorings(g, n) != expect;
      failures += EnumerateColorings(g, n).size() != expect;
      ++cases;
    }
  }
  for (int n = 1; n <= 5; ++n) {
    for (int c = 1; c <= n; ++c) {
      const auto expect =
          static_cast<std::size_t>(Factorial(n) / Factorial(n - c));
      failures += CountColorings(Clique(c), n) != expect;
      ++cases;
    }
  }
  const std::size_t triangle = CountColorings(Clique(3), 2);
  failures += triangle != 0;
  ++cases;
  return {failures == 0, Format("%d cases, %d failures, triangle with N=2 -> %zu",
                                cases, failures, triangle)};
}

// 3. Loss lower bound and fixed points.
Outcome TsdrBound() {
  const TsdrParams params(20.0, 1e-6);
  std::mt19937_64 rng(303);
  double lowest = 1e300;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + rng() % 64;
    Waveform s = testing::RandomWaveform(rng, n);
    Waveform e = testing::RandomWaveform(rng, n);
    const double scale = std::pow(10.0, static_cast<double>(rng() % 13) - 6.0);
    for (double& v : s.mutable_samples()) v *= scale;
    switch (rng() % 4) {
      case 0: e = s; break;                                        // exact
      case 1: for (double& v : e.mutable_samples()) v = 0; break;  // silent
      case 2:  // near miss
        for (std::size_t t = 0; t < n; ++t) {
          e.mutable_samples()[t] = s[t] * (1.0 + 1e-7 * e[t]);
        }
        break;
      default: break;
    }
    lowest = std::min(lowest, EpsTsdrLoss(s, e, params));
  }
  std::mt19937_64 rng2(304);
  const Waveform s = testing::RandomWaveform(rng2, 1000);
  const Waveform z = Waveform::Zeros(1000, 8000.0);
  const double perfect = EpsTsdrLoss(s, s, params);
  const double silent = EpsTsdrLoss(z, z, params);
  // Rounding in log10 may land within an ulp of the bound.
  const bool pass = lowest >= -20.0 - 1e-12 &&
                    std::abs(perfect + 20.0) <= 1e-9 &&
                    std::abs(silent + 20.0) <= 1e-9;
  return {pass, Format("min over 1e4 pairs %.15f, perfect %.15f, zero/zero %.15f",
                       lowest, perfect, silent)};
}

// 4. Two fully overlapping speakers: both objectives coincide.
Outcome CliqueEquivalence() {
  std::mt19937_64 rng(404);
  const BaseLoss loss = TsdrBaseLoss(TsdrParams());
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t len = 200 + static_cast<std::int64_t>(rng() % 800);
    const std::vector<UtteranceInterval> ivs{{0, 0, 0, len}, {1, 1, 0, len}};
    const SegmentTargets targets = testing::RandomTargets(rng, ivs, len);
    EstimateStreams est = testing::RandomStreams(rng, 2, len);
    if (trial % 2 == 0) {  // half of the cases close to a swapped solution
      std::vector<Waveform> c;
      for (int k : {1, 0}) {
        std::vector<double> v(targets.utterances()[k].signal.samples().begin(),
                              targets.utterances()[k].signal.samples().end());
        for (std::size_t t = 0; t < v.size(); ++t) v[t] += 0.1 * est[k][t];
        c.emplace_back(std::move(v), 8000.0);
      }
      est = EstimateStreams(std::move(c));
    }
    const double u = UpitLoss(targets, est, loss).loss;
    const double g = GraphPitLoss(targets, est, loss).loss;
    worst = std::max(worst, std::abs(u - g));
  }
  return {worst <= 1e-9, Format("max |uPIT - Graph-PIT| = %.3e over 100 segments", worst)};
}

// Per-speaker utterances that never overlap themselves.
std::vector<UtteranceInterval> SpeakerTurns(std::mt19937_64& rng, int speakers,
                                            std::int64_t len) {
  std::vector<UtteranceInterval> ivs;
  for (int k = 0; k < speakers; ++k) {
    std::int64_t t = static_cast<std::int64_t>(rng() % (len / 3));
    while (t < len - 20) {
      const std::int64_t end =
          std::min(len, t + 20 + static_cast<std::int64_t>(rng() % (len / 2)));
      ivs.push_back({static_cast<int>(ivs.size()), k, t, end});
      t = end + 1 + static_cast<std::int64_t>(rng() % (len / 4));
    }
  }
  return ivs;
}

// 5. Graph-PIT never exceeds uPIT when uPIT is defined.
Outcome Dominance() {
  std::mt19937_64 rng(505);
  const BaseLoss loss = TsdrBaseLoss(TsdrParams());
  double worst = -1e300;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2;
    const int k = 1 + static_cast<int>(rng() % n);
    const std::int64_t len = 400;
    const auto ivs = SpeakerTurns(rng, k, len);
    const SegmentTargets targets = testing::RandomTargets(rng, ivs, len);
    const EstimateStreams est = testing::RandomStreams(rng, n, len);
    const double d =
        GraphPitLoss(targets, est, loss).loss - UpitLoss(targets, est, loss).loss;
    worst = std::max(worst, d);
    violations += d > 1e-9;
  }
  return {violations == 0,
          Format("%d violations, max (Graph-PIT - uPIT) = %.3e", violations, worst)};
}

// 6. Three speakers in a chain fit two channels but not three speaker slots.
Outcome InfeasibilityFrontier() {
  std::mt19937_64 rng(606);
  const BaseLoss loss = TsdrBaseLoss(TsdrParams());
  int ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t len = 600;
    const std::int64_t a_end = 150 + static_cast<std::int64_t>(rng() % 100);
    const std::int64_t b_start = 50 + static_cast<std::int64_t>(rng() % 90);
    const std::int64_t c_start = a_end + 1 + static_cast<std::int64_t>(rng() % 100);
    const std::int64_t b_end = c_start + 1 + static_cast<std::int64_t>(rng() % 100);
    const std::vector<UtteranceInterval> ivs{
        {0, 0, 0, a_end}, {1, 1, b_start, b_end}, {2, 2, c_start, len}};
    const SegmentTargets targets = testing::RandomTargets(rng, ivs, len);
    const EstimateStreams est = testing::RandomStreams(rng, 2, len);
    if (MaxConcurrency(ivs) != 2 || targets.num_speakers() != 3) continue;
    bool graph_ok = false, upit_refused = false;
    try {
      graph_ok = std::isfinite(GraphPitLoss(targets, est, loss).loss);
    } catch (const Error&) {
    }
    try {
      UpitLoss(targets, est, loss);
    } catch (const InfeasibleError&) {
      upit_refused = true;
    }
    ok += graph_ok && upit_refused;
  }
  return {ok == 50, Format("%d/50 segments: Graph-PIT solved, uPIT infeasible", ok)};
}

// 7. Stitching undoes per-segment shuffles of an oracle separator.
Outcome StitchRecovery() {
  int exact = 0, gated = 0, runs = 0;
  double sum_diff = 0.0, max_diff = 0.0;
  for (int i = 0; i < 50; ++i) {
    MeetingConfig config;
    config.seed = 7000 + static_cast<std::uint64_t>(i);
    const Meeting m = SimulateMeeting(config);
    OracleOptions opts;
    opts.num_channels = 2;
    opts.shuffle_seed = 900 + static_cast<std::uint64_t>(i);
    const OracleSeparator sep(m, opts);
    const double plain = EvaluateMeeting(m, sep.Separate(m.mixture, 0)).mean_sdri;
    for (double current : {1.0, 14.0}) {
      const SegmentPlan plan(1.0, current, 1.0, m.sample_rate);
      const auto outputs = SeparateSegments(m.mixture, plan, sep);
      const StitchResult r = StitchDetailed(outputs, plan, m.num_samples);
      ++runs;
      const double diff =
          std::abs(EvaluateMeeting(m, r.streams).mean_sdri - plain);
      sum_diff += diff;
      max_diff = std::max(max_diff, diff);
      if (!std::all_of(r.alignment_gaps.begin(), r.alignment_gaps.end(),
                       [](double g) { return g > 0.0; })) {
        continue;
      }
      ++gated;
      const auto first = sep.ShuffleAt(outputs[0].range.start);
      bool same = true;
      for (int g = 0; g < 2; ++g) {
        same = same && r.streams[g] == sep.clean_streams()[first[g]];
      }
      exact += same;
    }
  }
  const double mean_diff = sum_diff / runs;
  return {exact == gated && mean_diff < 1e-6,
          Format("%d/%d runs with positive gaps exact (%d runs total), mean |dSDRi| "
                 "%.3e dB, max %.3e dB",
                 exact, gated, runs, mean_diff, max_diff)};
}

// 8. Segmentation overhead.
Outcome Overhead() {
  const double sr = 8000.0;
  const std::int64_t total = static_cast<std::int64_t>(3600 * sr);
  bool pass = true;
  std::string detail;
  for (double current : {1.0, 14.0}) {
    const SegmentPlan plan(1.0, current, 1.0, sr);
    const double nominal = 2.0 / current;
    const double measured = SegmentOverhead(total, plan);
    const double tolerance = static_cast<double>(plan.segment_length()) /
                             static_cast<double>(total);
    pass = pass && std::abs(measured - nominal) <= tolerance &&
           std::abs(plan.NominalOverhead() - nominal) <= 1e-12;
    detail += Format("%gs segments: %.4f%% (nominal %.4f%%, tol %.4f%%); ",
                     current + 2.0, 100 * measured, 100 * nominal, 100 * tolerance);
  }
  pass = pass && std::abs(SegmentPlan(1, 14, 1, sr).NominalOverhead() - 0.143) < 5e-4;
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// Upper tail of chi-square with three degrees of freedom.
double ChiSquare3Tail(double x) {
  return std::erfc(std::sqrt(x / 2.0)) +
         std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-x / 2.0);
}

// 9. Simulator conformance.
Outcome Simulator() {
  std::vector<int> counts(4, 0);
  double generation_s = 0.0, worst_overlap = 0.0, worst_decomp = 0.0,
         worst_gain = 0.0;
  int gain_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    MeetingConfig config;
    config.seed = static_cast<std::uint64_t>(i);
    const auto t0 = Clock::now();
    const Meeting m = SimulateMeeting(config);
    generation_s += Seconds(t0);

    ++counts.at(m.num_speakers() - 5);
    worst_overlap = std::max(
        worst_overlap, std::abs(OverlapRatio(m.Intervals()) - m.target_overlap_ratio));
    for (const auto& u : m.utterances) {
      const double gain_db = m.speakers[u.interval.speaker].gain_db;
      gain_mismatch += u.gain_db != gain_db;
      const double rms = std::sqrt(Energy(u.signal.samples()) /
                                   static_cast<double>(u.signal.size()));
      worst_gain = std::max(worst_gain,
                            std::abs(rms / std::pow(10.0, gain_db / 20.0) - 1.0));
    }
    std::vector<double> sum(static_cast<std::size_t>(m.num_samples), 0.0);
    for (const auto& u : m.utterances) {
      for (std::int64_t t = 0; t < u.interval.length(); ++t) {
        sum[u.interval.start + t] += u.signal[t];
      }
    }
    for (std::size_t t = 0; t < sum.size(); ++t) {
      worst_decomp =
          std::max(worst_decomp, std::abs(m.mixture[t] - sum[t] - m.noise[t]));
    }
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 250.0) * (c - 250.0) / 250.0;
  const double p = ChiSquare3Tail(chi2);
  const bool pass = p > 0.01 && worst_overlap <= 0.05 && gain_mismatch == 0 &&
                    worst_gain <= 1e-9 && worst_decomp < 1e-9 &&
                    generation_s < 60.0;
  return {pass, Format("K counts %d/%d/%d/%d chi2 %.3f p %.4f; max |overlap - "
                       "target| %.4f; gain mismatches %d (rms rel err %.1e); "
                       "max decomposition error %.1e; generation %.1f s",
                       counts[0], counts[1], counts[2], counts[3], chi2, p,
                       worst_overlap, gain_mismatch, worst_gain, worst_decomp,
                       generation_s)};
}

// 10. Longer segments hold more speakers.
Outcome SegmentTrend() {
  const std::vector<double> lengths{2, 4, 8, 16, 32};
  std::vector<SegmentSpeakerStats> stats(lengths.size());
  for (int i = 0; i < 100; ++i) {
    MeetingConfig config;
    config.seed = 5000 + static_cast<std::uint64_t>(i);
    const MeetingLayout layout = SimulateMeetingLayout(config);
    for (std::size_t j = 0; j < lengths.size(); ++j) {
      const auto len = static_cast<std::int64_t>(lengths[j] * config.sample_rate);
      stats[j] += SegmentSpeakerHistogram(layout.utterances, layout.num_samples,
                                          len, len);
    }
  }
  bool pass = true;
  std::string detail;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    const double f = stats[j].FractionAbove(2);
    if (j > 0 && f < stats[j - 1].FractionAbove(2)) pass = false;
    detail += Format("%gs %.3f, ", lengths[j], f);
  }
  detail.resize(detail.size() - 2);
  return {pass, "fraction with >2 speakers: " + detail};
}

bool Float32Exact(const Waveform& read, const Waveform& original) {
  if (read.size() != original.size() ||
      read.sample_rate() != original.sample_rate()) {
    return false;
  }
  for (std::size_t t = 0; t < read.size(); ++t) {
    if (read[t] != static_cast<double>(static_cast<float>(original[t]))) {
      return false;
    }
  }
  return true;
}

// 11. Meeting directories round-trip.
Outcome RoundTrip() {
  const fs::path root = fs::temp_directory_path() / "graphpit_acceptance_io";
  fs::remove_all(root);
  int ok = 0;
  for (int i = 0; i < 20; ++i) {
    MeetingConfig config;
    config.seed = 3000 + static_cast<std::uint64_t>(i);
    const Meeting m = SimulateMeeting(config);
    const fs::path dir = root / Format("meeting_%02d", i);
    WriteMeeting(m, dir);
    const Meeting r = ReadMeeting(dir);
    bool same = AnnotationOf(r) == AnnotationOf(m) && r.config == m.config &&
                r.speakers == m.speakers && r.num_samples == m.num_samples &&
                r.sample_rate == m.sample_rate &&
                r.noise_snr_db == m.noise_snr_db &&
                r.noise_seed == m.noise_seed &&
                r.target_overlap_ratio == m.target_overlap_ratio &&
                r.utterances.size() == m.utterances.size() &&
                Float32Exact(r.mixture, m.mixture) &&
                Float32Exact(r.noise, m.noise);
    for (std::size_t u = 0; same && u < m.utterances.size(); ++u) {
      const auto& a = r.utterances[u];
      const auto& b = m.utterances[u];
      same = a.interval == b.interval && a.gain_db == b.gain_db &&
             a.synth_seed == b.synth_seed && Float32Exact(a.signal, b.signal);
    }
    ok += same;
    fs::remove_all(dir);
  }
  fs::remove_all(root);
  return {ok == 20, Format("%d/20 meetings metadata-exact and float32-exact", ok)};
}

}  // namespace
}  // namespace graphpit

int main() {
  using graphpit::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"coloring enumeration equals brute force", graphpit::ColoringEquivalence},
      {"coloring count laws", graphpit::CountLaws},
      {"eps-tSDR bound and fixed points", graphpit::TsdrBound},
      {"uPIT equals Graph-PIT on two-speaker cliques", graphpit::CliqueEquivalence},
      {"Graph-PIT dominates uPIT", graphpit::Dominance},
      {"infeasibility frontier", graphpit::InfeasibilityFrontier},
      {"stitch recovery", graphpit::StitchRecovery},
      {"segmentation overhead", graphpit::Overhead},
      {"simulator conformance", graphpit::Simulator},
      {"segment speaker-count trend", graphpit::SegmentTrend},
      {"meeting round trip", graphpit::RoundTrip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
