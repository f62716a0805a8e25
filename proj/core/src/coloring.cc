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

#include "graphpit/coloring.h"

#include <cmath>
#include <limits>
#include <string>

#include "graphpit/errors.h"

namespace graphpit {

bool IsProperColoring(const OverlapGraph& graph, const Coloring& coloring,
                      int num_channels) {
  if (coloring.size() != graph.num_vertices()) return false;
  for (int c : coloring.channels) {
    if (c < 0 || c >= num_channels) return false;
  }
  for (const auto& [u, v] : graph.Edges()) {
    if (coloring[u] == coloring[v]) return false;
  }
  return true;
}

ColoringEnumerator::ColoringEnumerator(const OverlapGraph& graph,
                                       int num_channels)
    : graph_(graph),
      num_channels_(num_channels),
      assignment_(graph.num_vertices(), -1) {
  if (num_channels < 1) {
    throw ContractError("number of channels must be at least 1");
  }
}

bool ColoringEnumerator::Conflicts(std::size_t vertex, int channel) const {
  // Neighbors are sorted, so stop at the first not-yet-colored one.
  for (std::size_t v : graph_.Neighbors(vertex)) {
    if (v >= vertex) break;
    if (assignment_[v] == channel) return true;
  }
  return false;
}

bool ColoringEnumerator::Next(Coloring& out) {
  if (done_) return false;
  const std::size_t n = assignment_.size();
  if (n == 0) {
    // The empty graph has exactly one (empty) coloring.
    done_ = true;
    out.channels.clear();
    ++emitted_;
    return true;
  }
  std::ptrdiff_t pos;
  if (!started_) {
    started_ = true;
    pos = 0;
  } else {
    pos = static_cast<std::ptrdiff_t>(n) - 1;
  }
  while (pos >= 0) {
    const auto vertex = static_cast<std::size_t>(pos);
    int channel = assignment_[vertex] + 1;
    while (channel < num_channels_ && Conflicts(vertex, channel)) ++channel;
    if (channel == num_channels_) {
      assignment_[vertex] = -1;
      --pos;
      continue;
    }
    assignment_[vertex] = channel;
    if (vertex + 1 == n) {
      out.channels = assignment_;
      ++emitted_;
      return true;
    }
    ++pos;
  }
  done_ = true;
  return false;
}

std::optional<Coloring> ColoringEnumerator::Next() {
  Coloring c;
  if (!Next(c)) return std::nullopt;
  return c;
}

std::vector<Coloring> EnumerateColorings(const OverlapGraph& graph,
                                         int num_channels) {
  std::vector<Coloring> out;
  ColoringEnumerator enumerator(graph, num_channels);
  Coloring c;
  while (enumerator.Next(c)) out.push_back(c);
  return out;
}

std::size_t CountColorings(const OverlapGraph& graph, int num_channels) {
  ColoringEnumerator enumerator(graph, num_channels);
  Coloring c;
  while (enumerator.Next(c)) {
  }
  return enumerator.count();
}

std::vector<Coloring> BruteForceColorings(const OverlapGraph& graph,
                                          int num_channels) {
  if (num_channels < 1) {
    throw ContractError("number of channels must be at least 1");
  }
  const std::size_t n = graph.num_vertices();
  const double candidates =
      std::pow(static_cast<double>(num_channels), static_cast<double>(n));
  if (candidates > kBruteForceLimit) {
    throw ContractError("brute force over " + std::to_string(candidates) +
                        " assignments exceeds the limit");
  }
  std::vector<Coloring> out;
  Coloring candidate{std::vector<int>(n, 0)};
  while (true) {
    if (IsProperColoring(graph, candidate, num_channels)) out.push_back(candidate);
    // Odometer increment, last vertex fastest: lexicographic order.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++candidate.channels[i] < num_channels) break;
      candidate.channels[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

std::optional<std::uint64_t> CountIntervalColorings(
    std::span<const UtteranceInterval> utterances, int num_channels) {
  if (num_channels < 1) throw ContractError("need at least one channel");
  std::uint64_t count = 1;
  for (int d : EarlierNeighborCounts(utterances)) {
    if (d >= num_channels) return 0;
    const auto choices = static_cast<std::uint64_t>(num_channels - d);
    if (count > std::numeric_limits<std::uint64_t>::max() / choices) {
      return std::nullopt;
    }
    count *= choices;
  }
  return count;
}

double Log10IntervalColorings(std::span<const UtteranceInterval> utterances,
                              int num_channels) {
  if (num_channels < 1) throw ContractError("need at least one channel");
  double total = 0.0;
  for (int d : EarlierNeighborCounts(utterances)) {
    if (d >= num_channels) return -std::numeric_limits<double>::infinity();
    total += std::log10(static_cast<double>(num_channels - d));
  }
  return total;
}

}  // namespace graphpit
