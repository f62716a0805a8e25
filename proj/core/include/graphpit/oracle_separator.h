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

#ifndef GRAPHPIT_ORACLE_SEPARATOR_H_
#define GRAPHPIT_ORACLE_SEPARATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphpit/coloring.h"
#include "graphpit/css.h"
#include "graphpit/meeting.h"

namespace graphpit {

struct OracleOptions {
  int num_channels = 2;
  // Utterance-to-channel mapping; the first proper coloring in enumeration
  // order when unset.
  std::optional<Coloring> coloring;
  // Per-segment random channel permutation.
  std::optional<std::uint64_t> shuffle_seed;
  // Per-segment, per-channel white noise at this SNR.
  std::optional<double> snr_db;
  std::uint64_t noise_seed = 0;
};

// Parses "oracle[:<shuffle-seed>][:<snr-db>]"; empty fields are unset,
// e.g. "oracle::20" adds noise without shuffling.
OracleOptions ParseOracleSpec(std::string_view spec, int num_channels,
                              std::uint64_t noise_seed);
std::string FormatOracleSpec(const OracleOptions& options);

// Stand-in for a trained separator: returns slices of the meeting's
// ground-truth channel streams (the intermediate targets of one coloring),
// optionally shuffled and noisy per segment. Corruption depends only on the
// options and the segment offset, so calls are independent and thread-safe.
class OracleSeparator : public Separator {
 public:
  // Throws InfeasibleError if the meeting has more concurrent utterances
  // than channels, ContractError for an improper explicit coloring.
  OracleSeparator(const Meeting& meeting, OracleOptions options);

  int num_channels() const override { return options_.num_channels; }
  EstimateStreams Separate(const Waveform& segment,
                           std::int64_t offset) const override;

  const Coloring& coloring() const { return coloring_; }
  // Uncorrupted full-length channel streams.
  const EstimateStreams& clean_streams() const { return clean_; }
  // perm[g] = ground-truth channel emitted on output channel g.
  std::vector<int> ShuffleAt(std::int64_t offset) const;

 private:
  OracleOptions options_;
  Coloring coloring_;
  EstimateStreams clean_;
};

}  // namespace graphpit

#endif  // GRAPHPIT_ORACLE_SEPARATOR_H_
