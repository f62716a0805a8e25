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

#include "graphpit/oracle_separator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "graphpit/errors.h"

namespace graphpit {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::int64_t offset,
                         std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(
                                          offset))) +
                    stream);
}

std::vector<std::string_view> SplitColon(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  return parts;
}

}  // namespace

OracleOptions ParseOracleSpec(std::string_view spec, int num_channels,
                              std::uint64_t noise_seed) {
  const auto parts = SplitColon(spec);
  if (parts.front() != "oracle" || parts.size() > 3) {
    throw ContractError("separator must be 'oracle[:shuffle-seed][:snr]', got '" +
                        std::string(spec) + "'");
  }
  OracleOptions options;
  options.num_channels = num_channels;
  options.noise_seed = noise_seed;
  try {
    if (parts.size() > 1 && !parts[1].empty()) {
      std::size_t used = 0;
      const std::string text(parts[1]);
      options.shuffle_seed = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    }
    if (parts.size() > 2 && !parts[2].empty()) {
      std::size_t used = 0;
      const std::string text(parts[2]);
      options.snr_db = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw ContractError("bad number in separator spec '" + std::string(spec) +
                        "'");
  }
  return options;
}

std::string FormatOracleSpec(const OracleOptions& options) {
  std::string out = "oracle";
  if (options.shuffle_seed || options.snr_db) {
    out += ":";
    if (options.shuffle_seed) out += std::to_string(*options.shuffle_seed);
  }
  if (options.snr_db) {
    std::ostringstream ss;
    ss << *options.snr_db;
    out += ":" + ss.str();
  }
  return out;
}

OracleSeparator::OracleSeparator(const Meeting& meeting, OracleOptions options)
    : options_(std::move(options)) {
  if (options_.num_channels < 1) {
    throw ContractError("oracle separator needs at least one channel");
  }
  const SegmentTargets targets = meeting.Targets();
  if (options_.coloring) {
    coloring_ = *options_.coloring;
  } else {
    const auto intervals = targets.Intervals();
    const int concurrency = MaxConcurrency(intervals);
    if (concurrency > options_.num_channels) {
      throw InfeasibleError(
          "oracle separator: " + std::to_string(concurrency) +
          " utterances overlap at once but only " +
          std::to_string(options_.num_channels) + " channels are available");
    }
    const OverlapGraph graph = BuildOverlapGraph(intervals);
    ColoringEnumerator enumerator(graph, options_.num_channels);
    if (!enumerator.Next(coloring_)) {
      throw InfeasibleError("oracle separator: no proper coloring");
    }
  }
  clean_ = EstimateStreams(
      BuildIntermediateTargets(targets, coloring_, options_.num_channels));
}

std::vector<int> OracleSeparator::ShuffleAt(std::int64_t offset) const {
  std::vector<int> perm(options_.num_channels);
  std::iota(perm.begin(), perm.end(), 0);
  if (options_.shuffle_seed) {
    std::mt19937_64 rng(DeriveSeed(*options_.shuffle_seed, offset, 0));
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  return perm;
}

EstimateStreams OracleSeparator::Separate(const Waveform& segment,
                                          std::int64_t offset) const {
  const auto length = static_cast<std::int64_t>(segment.size());
  const auto perm = ShuffleAt(offset);
  std::vector<Waveform> channels;
  channels.reserve(perm.size());
  for (std::size_t g = 0; g < perm.size(); ++g) {
    Waveform slice = clean_[perm[g]].Slice(offset, offset + length);
    const double energy = Energy(slice.samples());
    if (options_.snr_db && energy > 0.0) {
      // Noise only where the channel carries signal, so the per-utterance
      // error level tracks the requested SNR.
      std::mt19937_64 rng(DeriveSeed(options_.noise_seed, offset, g + 1));
      std::vector<double> noise(slice.size(), 0.0);
      FillStandardNormal(rng, noise);
      for (std::size_t t = 0; t < noise.size(); ++t) {
        if (slice[t] == 0.0) noise[t] = 0.0;
      }
      const double scale = std::sqrt(
          energy / (Energy(noise) * std::pow(10.0, *options_.snr_db / 10.0)));
      auto out = slice.mutable_samples();
      for (std::size_t t = 0; t < noise.size(); ++t) out[t] += scale * noise[t];
    }
    channels.push_back(std::move(slice));
  }
  return EstimateStreams(std::move(channels));
}

}  // namespace graphpit
