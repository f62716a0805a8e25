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

#include "graphpit/pit.h"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "graphpit/errors.h"

namespace graphpit {

SegmentTargets::SegmentTargets(std::vector<TargetUtterance> utterances,
                               std::int64_t length, double sample_rate)
    : utterances_(std::move(utterances)),
      length_(length),
      sample_rate_(sample_rate) {
  if (length_ <= 0) throw ContractError("segment length must be positive");
  std::vector<UtteranceInterval> intervals = Intervals();
  ValidateIntervals(intervals);
  std::set<int> speakers;
  for (const auto& u : utterances_) {
    const auto id = std::to_string(u.interval.id + 1);
    if (u.interval.start < 0 || u.interval.end > length_) {
      throw ContractError("utterance " + id + " leaves the segment");
    }
    if (static_cast<std::int64_t>(u.signal.size()) != u.interval.length()) {
      throw ContractError("utterance " + id +
                          ": signal length does not match its interval");
    }
    if (u.signal.sample_rate() != sample_rate_) {
      throw ContractError("utterance " + id + ": sample rate mismatch");
    }
    speakers.insert(u.interval.speaker);
  }
  speakers_.assign(speakers.begin(), speakers.end());
}

std::vector<UtteranceInterval> SegmentTargets::Intervals() const {
  std::vector<UtteranceInterval> out;
  out.reserve(utterances_.size());
  for (const auto& u : utterances_) out.push_back(u.interval);
  return out;
}

void SegmentTargets::AccumulateInto(std::size_t u,
                                    std::span<double> out) const {
  const auto& utt = utterances_[u];
  const auto samples = utt.signal.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[static_cast<std::size_t>(utt.interval.start) + i] += samples[i];
  }
}

Waveform SegmentTargets::Padded(std::size_t u) const {
  Waveform w = Waveform::Zeros(static_cast<std::size_t>(length_), sample_rate_);
  AccumulateInto(u, w.mutable_samples());
  return w;
}

EstimateStreams::EstimateStreams(std::vector<Waveform> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) {
    throw ContractError("EstimateStreams needs at least one channel");
  }
  for (const auto& c : channels_) {
    if (c.size() != channels_.front().size() ||
        c.sample_rate() != channels_.front().sample_rate()) {
      throw ContractError("estimate channels differ in length or sample rate");
    }
  }
}

BaseLoss TsdrBaseLoss(const TsdrParams& params) {
  BaseLoss loss;
  loss.name = "tsdr:" + std::to_string(params.sdr_max()) + ":" +
              std::to_string(params.epsilon());
  loss.evaluate = [params](const Waveform& s, const Waveform& e) {
    return EpsTsdrLoss(s, e, params);
  };
  loss.from_energies = [params](double ref, double err) {
    return EpsTsdrFromEnergies(ref, err, params);
  };
  return loss;
}

BaseLoss NegativeSdrBaseLoss() {
  BaseLoss loss;
  loss.name = "sdr";
  loss.evaluate = [](const Waveform& s, const Waveform& e) {
    return -Sdr(s, e);
  };
  loss.from_energies = [](double ref, double err) {
    return -SdrFromEnergies(ref, err);
  };
  return loss;
}

namespace {

double ParseNumber(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ContractError("bad number '" + std::string(text) +
                        "' in base loss '" + std::string(spec) + "'");
  }
  return value;
}

void CheckShapes(const SegmentTargets& targets,
                 const EstimateStreams& estimates) {
  if (static_cast<std::int64_t>(estimates.length()) != targets.length()) {
    throw ContractError("estimate length " +
                        std::to_string(estimates.length()) +
                        " differs from segment length " +
                        std::to_string(targets.length()));
  }
  if (estimates.sample_rate() != targets.sample_rate()) {
    throw ContractError("estimate sample rate differs from targets");
  }
}

}  // namespace

BaseLoss ParseBaseLoss(std::string_view spec) {
  if (spec == "sdr") return NegativeSdrBaseLoss();
  if (spec == "tsdr") return TsdrBaseLoss(TsdrParams());
  constexpr std::string_view kPrefix = "tsdr:";
  if (spec.substr(0, kPrefix.size()) == kPrefix) {
    const auto rest = spec.substr(kPrefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      return TsdrBaseLoss(TsdrParams(ParseNumber(rest, spec)));
    }
    return TsdrBaseLoss(TsdrParams(ParseNumber(rest.substr(0, colon), spec),
                                   ParseNumber(rest.substr(colon + 1), spec)));
  }
  throw ContractError("unknown base loss '" + std::string(spec) + "'");
}

std::vector<SpeakerTarget> SpeakerTargets(const SegmentTargets& targets) {
  std::vector<SpeakerTarget> out;
  for (int speaker : targets.speakers()) {
    Waveform w = Waveform::Zeros(static_cast<std::size_t>(targets.length()),
                                 targets.sample_rate());
    for (std::size_t u = 0; u < targets.num_utterances(); ++u) {
      if (targets.utterances()[u].interval.speaker == speaker) {
        targets.AccumulateInto(u, w.mutable_samples());
      }
    }
    out.push_back({speaker, std::move(w)});
  }
  return out;
}

int SpeakerAssignment::ChannelOf(int speaker) const {
  for (std::size_t k = 0; k < speakers.size(); ++k) {
    if (speakers[k] == speaker) return permutation[k];
  }
  throw ContractError("speaker " + std::to_string(speaker + 1) +
                      " not in assignment");
}

namespace {

// Rows [0, K) are speakers, rows [K, N) silent padding.
std::vector<Waveform> PaddedSpeakerRows(const SegmentTargets& targets, int n) {
  std::vector<Waveform> rows;
  for (auto& st : SpeakerTargets(targets)) rows.push_back(std::move(st.signal));
  while (static_cast<int>(rows.size()) < n) {
    rows.push_back(Waveform::Zeros(static_cast<std::size_t>(targets.length()),
                                   targets.sample_rate()));
  }
  return rows;
}

}  // namespace

PitResult UpitLoss(const SegmentTargets& targets,
                   const EstimateStreams& estimates, const BaseLoss& loss) {
  CheckShapes(targets, estimates);
  const int n = estimates.num_channels();
  const int k = targets.num_speakers();
  if (k > n) {
    throw InfeasibleError("uPIT needs at most " + std::to_string(n) +
                          " speakers, segment has " + std::to_string(k));
  }
  const auto rows = PaddedSpeakerRows(targets, n);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) cost[r][c] = loss(rows[r], estimates[c]);
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PitResult result;
  result.loss = std::numeric_limits<double>::infinity();
  std::vector<int> best;
  do {
    double total = 0.0;
    for (int r = 0; r < n; ++r) total += cost[r][perm[r]];
    ++result.candidates_evaluated;
    if (total < result.loss || best.empty()) {
      result.loss = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  result.assignment = SpeakerAssignment{targets.speakers(), best};
  return result;
}

double UpitObjective(const SegmentTargets& targets,
                     const EstimateStreams& estimates, const BaseLoss& loss,
                     const SpeakerAssignment& assignment) {
  CheckShapes(targets, estimates);
  const int n = estimates.num_channels();
  if (static_cast<int>(assignment.permutation.size()) != n) {
    throw ContractError("assignment size differs from channel count");
  }
  const auto rows = PaddedSpeakerRows(targets, n);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    total += loss(rows[r], estimates[assignment.permutation[r]]);
  }
  return total;
}

std::vector<Waveform> BuildIntermediateTargets(const SegmentTargets& targets,
                                               const Coloring& coloring,
                                               int num_channels) {
  if (coloring.size() != targets.num_utterances()) {
    throw ContractError("coloring has " + std::to_string(coloring.size()) +
                        " entries for " +
                        std::to_string(targets.num_utterances()) +
                        " utterances");
  }
  const auto intervals = targets.Intervals();
  if (!IsProperColoring(BuildOverlapGraph(intervals), coloring,
                        num_channels)) {
    throw ContractError("coloring is not a proper " +
                        std::to_string(num_channels) +
                        "-coloring of the overlap graph");
  }
  std::vector<Waveform> channels(
      num_channels, Waveform::Zeros(static_cast<std::size_t>(targets.length()),
                                    targets.sample_rate()));
  for (std::size_t u = 0; u < targets.num_utterances(); ++u) {
    targets.AccumulateInto(u, channels[coloring[u]].mutable_samples());
  }
  return channels;
}

double GraphPitObjective(const SegmentTargets& targets,
                         const EstimateStreams& estimates,
                         const BaseLoss& loss, const Coloring& coloring) {
  CheckShapes(targets, estimates);
  const int n = estimates.num_channels();
  const auto channels = BuildIntermediateTargets(targets, coloring, n);
  double total = 0.0;
  for (int c = 0; c < n; ++c) total += loss(channels[c], estimates[c]);
  return total;
}

namespace {

// Scores colorings from per-utterance statistics. Utterances sharing a
// channel never overlap, so for channel n
//   |target|^2       = sum_u |s_u|^2
//   |target - est|^2 = sum_u |s_u - est|^2 over supp(u) + |est|^2 elsewhere,
// and the energy outside the supports comes from a prefix sum of |est|^2.
class EnergyScorer {
 public:
  EnergyScorer(const SegmentTargets& targets, const EstimateStreams& estimates)
      : targets_(targets), num_channels_(estimates.num_channels()) {
    const std::size_t u_count = targets.num_utterances();
    const auto length = static_cast<std::size_t>(targets.length());
    reference_energy_.resize(u_count);
    inside_error_.assign(u_count, std::vector<double>(num_channels_));
    prefix_.assign(num_channels_, std::vector<double>(length + 1, 0.0));
    for (int c = 0; c < num_channels_; ++c) {
      const auto est = estimates[c].samples();
      for (std::size_t t = 0; t < length; ++t) {
        prefix_[c][t + 1] = prefix_[c][t] + est[t] * est[t];
      }
    }
    for (std::size_t u = 0; u < u_count; ++u) {
      const auto& utt = targets.utterances()[u];
      reference_energy_[u] = Energy(utt.signal.samples());
      const auto start = static_cast<std::size_t>(utt.interval.start);
      for (int c = 0; c < num_channels_; ++c) {
        inside_error_[u][c] = ErrorEnergy(
            utt.signal.samples(),
            estimates[c].samples().subspan(start, utt.signal.size()));
      }
    }
    by_start_.resize(u_count);
    std::iota(by_start_.begin(), by_start_.end(), 0);
    std::sort(by_start_.begin(), by_start_.end(),
              [&](std::size_t a, std::size_t b) {
                return targets.utterances()[a].interval.start <
                       targets.utterances()[b].interval.start;
              });
  }

  double Score(const Coloring& coloring, const BaseLoss& loss) const {
    double total = 0.0;
    for (int c = 0; c < num_channels_; ++c) {
      double ref = 0.0;
      double err = 0.0;
      std::size_t cursor = 0;
      for (std::size_t u : by_start_) {
        if (coloring[u] != c) continue;
        const auto& iv = targets_.utterances()[u].interval;
        const auto start = static_cast<std::size_t>(iv.start);
        err += prefix_[c][start] - prefix_[c][cursor];
        err += inside_error_[u][c];
        ref += reference_energy_[u];
        cursor = static_cast<std::size_t>(iv.end);
      }
      err += prefix_[c].back() - prefix_[c][cursor];
      total += loss.from_energies(ref, err);
    }
    return total;
  }

 private:
  const SegmentTargets& targets_;
  int num_channels_;
  std::vector<double> reference_energy_;
  std::vector<std::vector<double>> inside_error_;
  std::vector<std::vector<double>> prefix_;
  std::vector<std::size_t> by_start_;
};

// Fallback for opaque losses: materializes each (channel, utterance set)
// target once and caches its loss.
class MaterializingScorer {
 public:
  MaterializingScorer(const SegmentTargets& targets,
                      const EstimateStreams& estimates)
      : targets_(targets), estimates_(estimates) {}

  double Score(const Coloring& coloring, const BaseLoss& loss) {
    double total = 0.0;
    for (int c = 0; c < estimates_.num_channels(); ++c) {
      std::vector<std::size_t> members;
      for (std::size_t u = 0; u < coloring.size(); ++u) {
        if (coloring[u] == c) members.push_back(u);
      }
      auto key = std::make_pair(c, members);
      auto it = cache_.find(key);
      if (it == cache_.end()) {
        Waveform target = Waveform::Zeros(
            static_cast<std::size_t>(targets_.length()),
            targets_.sample_rate());
        for (std::size_t u : members) {
          targets_.AccumulateInto(u, target.mutable_samples());
        }
        it = cache_.emplace(std::move(key), loss(target, estimates_[c])).first;
      }
      total += it->second;
    }
    return total;
  }

 private:
  const SegmentTargets& targets_;
  const EstimateStreams& estimates_;
  std::map<std::pair<int, std::vector<std::size_t>>, double> cache_;
};

}  // namespace

PitResult GraphPitLoss(const SegmentTargets& targets,
                       const EstimateStreams& estimates, const BaseLoss& loss) {
  CheckShapes(targets, estimates);
  const int n = estimates.num_channels();
  const auto intervals = targets.Intervals();
  const int concurrency = MaxConcurrency(intervals);
  if (concurrency > n) {
    throw InfeasibleError(
        "Graph-PIT infeasible: " + std::to_string(concurrency) +
        " utterances are active at once but only " + std::to_string(n) +
        " channels are available");
  }
  const OverlapGraph graph = BuildOverlapGraph(intervals);
  ColoringEnumerator enumerator(graph, n);

  std::optional<EnergyScorer> energy;
  std::optional<MaterializingScorer> materializing;
  if (loss.from_energies) {
    energy.emplace(targets, estimates);
  } else {
    materializing.emplace(targets, estimates);
  }

  PitResult result;
  result.loss = std::numeric_limits<double>::infinity();
  Coloring best;
  bool found = false;
  Coloring candidate;
  while (enumerator.Next(candidate)) {
    const double value = energy ? energy->Score(candidate, loss)
                                : materializing->Score(candidate, loss);
    // Enumeration is lexicographic, so strict < keeps the smallest on ties.
    if (!found || value < result.loss) {
      result.loss = value;
      best = candidate;
      found = true;
    }
  }
  result.candidates_evaluated = enumerator.count();
  if (!found) {
    throw InfeasibleError("Graph-PIT infeasible: no proper " +
                          std::to_string(n) + "-coloring exists (max " +
                          "concurrency " + std::to_string(concurrency) + ")");
  }
  result.assignment = std::move(best);
  return result;
}

}  // namespace graphpit
