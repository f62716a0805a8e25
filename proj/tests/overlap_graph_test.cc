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

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "graphpit/errors.h"
#include "graphpit/overlap_graph.h"
#include "test_util.h"

namespace graphpit {
namespace {

using Edge = std::pair<std::size_t, std::size_t>;

std::vector<UtteranceInterval> Make(
    std::initializer_list<std::pair<std::int64_t, std::int64_t>> spans) {
  std::vector<UtteranceInterval> out;
  int id = 0;
  for (const auto& [a, b] : spans) {
    out.push_back({id, id, a, b});
    ++id;
  }
  return out;
}

// Per-sample activity count.
int ConcurrencyBySample(const std::vector<UtteranceInterval>& ivs) {
  std::int64_t horizon = 0;
  for (const auto& u : ivs) horizon = std::max(horizon, u.end);
  int best = 0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    int active = 0;
    for (const auto& u : ivs) active += (u.start <= t && t < u.end);
    best = std::max(best, active);
  }
  return best;
}

// Union-find over the all-pairs overlap predicate.
std::vector<std::vector<std::size_t>> UnionFindComponents(
    const std::vector<UtteranceInterval>& ivs) {
  std::vector<std::size_t> parent(ivs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    for (std::size_t j = i + 1; j < ivs.size(); ++j) {
      const bool overlap = std::max(ivs[i].start, ivs[j].start) <
                           std::min(ivs[i].end, ivs[j].end);
      if (overlap) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ivs.size(); ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

TEST_CASE("touching intervals are not connected") {
  const auto g = BuildOverlapGraph(Make({{0, 10}, {10, 20}}));
  CHECK(g.num_edges() == 0);
}

TEST_CASE("chained intervals form a path") {
  const auto g = BuildOverlapGraph(Make({{0, 10}, {5, 15}, {12, 20}}));
  CHECK(g.Edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK_FALSE(g.HasEdge(0, 2));
}

TEST_CASE("three-speaker chain has no triangle") {
  // Three speakers, each overlapping only its neighbours in time.
  const auto ivs = Make({{0, 100}, {80, 200}, {180, 300}});
  const auto g = BuildOverlapGraph(ivs);
  const auto components = ConnectedComponents(g);
  REQUIRE(components.size() == 1);
  CHECK(components[0].size() == 3);
  CHECK(g.num_edges() == 2);
}

TEST_CASE("two-component example") {
  // A two-speaker exchange, a pause, then a three-speaker chain.
  std::vector<UtteranceInterval> ivs = {
      {0, 0, 0, 50},    {1, 1, 40, 90},    {2, 0, 85, 120},
      {3, 2, 200, 260}, {4, 0, 250, 320},  {5, 1, 310, 400},
  };
  const auto components = ConnectedComponents(BuildOverlapGraph(ivs));
  CHECK(components ==
        std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("connected components") {
  CHECK(ConnectedComponents(OverlapGraph(4)) ==
        std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {3}});
  const auto path_plus = Make({{0, 10}, {5, 15}, {12, 20}, {30, 40}});
  CHECK(ConnectedComponents(BuildOverlapGraph(path_plus)) ==
        std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3}});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ivs = testing::RandomIntervals(rng, 1 + trial % 9, 60);
    CHECK(ConnectedComponents(BuildOverlapGraph(ivs)) == UnionFindComponents(ivs));
  }
}

TEST_CASE("edges match the pairwise predicate") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ivs = testing::RandomIntervals(rng, 1 + trial % 10, 50);
    std::vector<Edge> expected;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      for (std::size_t j = i + 1; j < ivs.size(); ++j) {
        bool shared_sample = false;
        for (std::int64_t t = 0; t < 50; ++t) {
          shared_sample |= ivs[i].start <= t && t < ivs[i].end &&
                           ivs[j].start <= t && t < ivs[j].end;
        }
        if (shared_sample) expected.emplace_back(i, j);
      }
    }
    CHECK(BuildOverlapGraph(ivs).Edges() == expected);
  }
}

TEST_CASE("graph is invariant to input order") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ivs = testing::RandomIntervals(rng, 8, 40);
    std::vector<std::size_t> perm(ivs.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<UtteranceInterval> shuffled;
    for (std::size_t p : perm) shuffled.push_back(ivs[p]);
    std::set<Edge> relabeled;
    for (const auto& [a, b] : BuildOverlapGraph(shuffled).Edges()) {
      relabeled.insert(std::minmax(perm[a], perm[b]));
    }
    const auto original = BuildOverlapGraph(ivs).Edges();
    CHECK(relabeled == std::set<Edge>(original.begin(), original.end()));
  }
}

TEST_CASE("invalid intervals are rejected") {
  std::vector<UtteranceInterval> dup = {{0, 0, 0, 5}, {0, 1, 3, 8}};
  CHECK_THROWS_AS(BuildOverlapGraph(dup), ContractError);
  std::vector<UtteranceInterval> empty_span = {{0, 0, 5, 5}};
  CHECK_THROWS_AS(BuildOverlapGraph(empty_span), ContractError);
}

TEST_CASE("max concurrency") {
  CHECK(MaxConcurrency({}) == 0);
  CHECK(MaxConcurrency(Make({{0, 10}})) == 1);
  CHECK(MaxConcurrency(Make({{0, 10}, {10, 20}})) == 1);
  CHECK(MaxConcurrency(Make({{0, 10}, {5, 15}, {8, 12}})) == 3);

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ivs = testing::RandomIntervals(rng, 1 + trial % 12, 30);
    CHECK(MaxConcurrency(ivs) == ConcurrencyBySample(ivs));
  }
}

}  // namespace
}  // namespace graphpit
