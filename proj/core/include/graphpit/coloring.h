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

#ifndef GRAPHPIT_COLORING_H_
#define GRAPHPIT_COLORING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "graphpit/overlap_graph.h"

namespace graphpit {

// Channel assignment per utterance, 0-based channels. A proper coloring never
// puts two adjacent vertices on the same channel; it need not use every
// channel.
struct Coloring {
  std::vector<int> channels;

  std::size_t size() const { return channels.size(); }
  int operator[](std::size_t u) const { return channels[u]; }
  auto operator<=>(const Coloring&) const = default;
};

bool IsProperColoring(const OverlapGraph& graph, const Coloring& coloring,
                      int num_channels);

// Lazily enumerates every proper coloring with `num_channels` colors in
// lexicographic order of the assignment vector, by depth-first backtracking
// over vertices in index order. Channel-permuted colorings are distinct
// results. An empty sequence means the graph needs more channels.
//
// Holds a reference to `graph`, which must outlive the enumerator.
class ColoringEnumerator {
 public:
  ColoringEnumerator(const OverlapGraph& graph, int num_channels);

  // Returns the next coloring, or nullopt once exhausted.
  std::optional<Coloring> Next();
  // Advances in place; returns false once exhausted. `out` is untouched then.
  bool Next(Coloring& out);

  // Number of colorings produced so far.
  std::size_t count() const { return emitted_; }

  class Iterator {
   public:
    using value_type = Coloring;
    using difference_type = std::ptrdiff_t;

    Iterator() = default;
    explicit Iterator(ColoringEnumerator* owner) : owner_(owner) { ++*this; }

    const Coloring& operator*() const { return current_; }
    const Coloring* operator->() const { return &current_; }
    Iterator& operator++() {
      if (!owner_->Next(current_)) owner_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(const Iterator& other) const {
      return owner_ == other.owner_;
    }

   private:
    ColoringEnumerator* owner_ = nullptr;
    Coloring current_;
  };

  Iterator begin() { return Iterator(this); }
  Iterator end() { return Iterator(); }

 private:
  bool Conflicts(std::size_t vertex, int channel) const;

  const OverlapGraph& graph_;
  int num_channels_;
  std::vector<int> assignment_;
  bool started_ = false;
  bool done_ = false;
  std::size_t emitted_ = 0;
};

std::vector<Coloring> EnumerateColorings(const OverlapGraph& graph,
                                         int num_channels);
std::size_t CountColorings(const OverlapGraph& graph, int num_channels);

// Closed-form count for the overlap graph of `utterances`. In start order
// the earlier neighbours of an utterance all contain its onset, so they form
// a clique and leave num_channels - d choices. nullopt if the count does not
// fit in 64 bits.
std::optional<std::uint64_t> CountIntervalColorings(
    std::span<const UtteranceInterval> utterances, int num_channels);
// log10 of the same count; -inf when no coloring exists.
double Log10IntervalColorings(std::span<const UtteranceInterval> utterances,
                              int num_channels);

// Reference implementation: filters all num_channels^U assignment vectors.
// Refuses inputs with more than kBruteForceLimit candidates.
inline constexpr double kBruteForceLimit = 1e6;
std::vector<Coloring> BruteForceColorings(const OverlapGraph& graph,
                                          int num_channels);

}  // namespace graphpit

#endif  // GRAPHPIT_COLORING_H_
