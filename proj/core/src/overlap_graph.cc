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

#include "graphpit/overlap_graph.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <unordered_set>

#include "graphpit/errors.h"

namespace graphpit {

void ValidateIntervals(std::span<const UtteranceInterval> utterances) {
  std::unordered_set<int> seen;
  for (const auto& u : utterances) {
    if (u.start >= u.end) {
      throw ContractError("utterance " + std::to_string(u.id + 1) +
                          ": start (" + std::to_string(u.start) +
                          ") must be before end (" + std::to_string(u.end) +
                          ")");
    }
    if (!seen.insert(u.id).second) {
      throw ContractError("duplicate utterance id " + std::to_string(u.id + 1));
    }
  }
}

OverlapGraph::OverlapGraph(std::size_t num_vertices)
    : neighbors_(num_vertices) {}

void OverlapGraph::AddEdge(std::size_t u, std::size_t v) {
  if (u == v) throw ContractError("OverlapGraph: self-loop");
  if (u >= num_vertices() || v >= num_vertices()) {
    throw ContractError("OverlapGraph: vertex out of range");
  }
  if (HasEdge(u, v)) return;
  auto insert = [](std::vector<std::size_t>& list, std::size_t x) {
    list.insert(std::lower_bound(list.begin(), list.end(), x), x);
  };
  insert(neighbors_[u], v);
  insert(neighbors_[v], u);
  ++num_edges_;
}

bool OverlapGraph::HasEdge(std::size_t u, std::size_t v) const {
  const auto& list = neighbors_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::pair<std::size_t, std::size_t>> OverlapGraph::Edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(num_edges_);
  for (std::size_t u = 0; u < neighbors_.size(); ++u) {
    for (std::size_t v : neighbors_[u]) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return edges;
}

OverlapGraph BuildOverlapGraph(std::span<const UtteranceInterval> utterances) {
  ValidateIntervals(utterances);
  const std::size_t n = utterances.size();
  // Sweep in start order; only utterances that start before the current one
  // ends can overlap it.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return utterances[a].start < utterances[b].start;
  });
  OverlapGraph graph(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = utterances[order[i]];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& b = utterances[order[j]];
      if (b.start >= a.end) break;
      if (Overlaps(a, b)) graph.AddEdge(order[i], order[j]);
    }
  }
  return graph;
}

std::vector<std::vector<std::size_t>> ConnectedComponents(
    const OverlapGraph& graph) {
  const std::size_t n = graph.num_vertices();
  std::vector<bool> visited(n, false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t root = 0; root < n; ++root) {
    if (visited[root]) continue;
    std::vector<std::size_t> component;
    std::vector<std::size_t> stack = {root};
    visited[root] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      component.push_back(u);
      for (std::size_t v : graph.Neighbors(u)) {
        if (!visited[v]) {
          visited[v] = true;
          stack.push_back(v);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

int MaxConcurrency(std::span<const UtteranceInterval> utterances) {
  // (position, delta); at equal positions ends (-1) sort before starts (+1).
  std::vector<std::pair<std::int64_t, int>> events;
  events.reserve(2 * utterances.size());
  for (const auto& u : utterances) {
    events.emplace_back(u.start, +1);
    events.emplace_back(u.end, -1);
  }
  std::sort(events.begin(), events.end());
  int active = 0;
  int best = 0;
  for (const auto& [position, delta] : events) {
    active += delta;
    best = std::max(best, active);
  }
  return best;
}

std::vector<int> EarlierNeighborCounts(
    std::span<const UtteranceInterval> utterances) {
  std::vector<std::size_t> order(utterances.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return utterances[a].start < utterances[b].start;
  });
  std::vector<int> counts(utterances.size(), 0);
  // Ends of the utterances seen so far; a min-heap drops the finished ones.
  std::priority_queue<std::int64_t, std::vector<std::int64_t>,
                      std::greater<>> ends;
  for (std::size_t v : order) {
    while (!ends.empty() && ends.top() <= utterances[v].start) ends.pop();
    counts[v] = static_cast<int>(ends.size());
    ends.push(utterances[v].end);
  }
  return counts;
}

}  // namespace graphpit
