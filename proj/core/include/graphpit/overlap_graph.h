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

#ifndef GRAPHPIT_OVERLAP_GRAPH_H_
#define GRAPHPIT_OVERLAP_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphpit {

// Half-open sample interval [start, end) of one utterance. Ids and speakers
// are 0-based inside the library; files and reports add one.
struct UtteranceInterval {
  int id = 0;
  int speaker = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - start; }
  bool operator==(const UtteranceInterval&) const = default;
};

// Strict intersection of half-open intervals; touching is not overlapping.
inline bool Overlaps(const UtteranceInterval& a, const UtteranceInterval& b) {
  return (a.start > b.start ? a.start : b.start) <
         (a.end < b.end ? a.end : b.end);
}

// Throws ContractError if start >= end or an id repeats.
void ValidateIntervals(std::span<const UtteranceInterval> utterances);

// Undirected graph with one vertex per utterance (vertex i is the i-th entry
// of the input list) and an edge per overlapping pair.
class OverlapGraph {
 public:
  explicit OverlapGraph(std::size_t num_vertices);

  void AddEdge(std::size_t u, std::size_t v);

  std::size_t num_vertices() const { return neighbors_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  bool HasEdge(std::size_t u, std::size_t v) const;
  // Sorted ascending.
  std::span<const std::size_t> Neighbors(std::size_t u) const {
    return neighbors_[u];
  }
  // Every edge once as (u, v) with u < v, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> Edges() const;

 private:
  std::vector<std::vector<std::size_t>> neighbors_;
  std::size_t num_edges_ = 0;
};

OverlapGraph BuildOverlapGraph(std::span<const UtteranceInterval> utterances);

// Maximal connected vertex sets, each ascending, ordered by smallest member.
std::vector<std::vector<std::size_t>> ConnectedComponents(
    const OverlapGraph& graph);

// Largest number of simultaneously active utterances at any sample.
// This is the clique number of the interval graph, hence also its chromatic
// number. Zero for an empty list.
int MaxConcurrency(std::span<const UtteranceInterval> utterances);

// For each utterance (input order), the number of utterances that start
// earlier (ties broken by input position) and overlap it.
std::vector<int> EarlierNeighborCounts(
    std::span<const UtteranceInterval> utterances);

}  // namespace graphpit

#endif  // GRAPHPIT_OVERLAP_GRAPH_H_
