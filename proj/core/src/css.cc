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

#include "graphpit/css.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "graphpit/errors.h"

namespace graphpit {

namespace {

std::int64_t ToSamples(double seconds, double sample_rate, const char* what) {
  const double exact = seconds * sample_rate;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-6 * std::max(1.0, std::abs(exact))) {
    throw ContractError(std::string("segment plan: ") + what +
                        " is not a whole number of samples");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

SegmentPlan::SegmentPlan(double history_s, double current_s, double future_s,
                         double sample_rate)
    : history_s_(history_s),
      current_s_(current_s),
      future_s_(future_s),
      sample_rate_(sample_rate) {
  if (!(sample_rate > 0.0)) {
    throw ContractError("segment plan: sample rate must be positive");
  }
  if (!(history_s >= 0.0) || !(future_s >= 0.0)) {
    throw ContractError("segment plan: history and future must be >= 0");
  }
  history_ = ToSamples(history_s, sample_rate, "history");
  current_ = ToSamples(current_s, sample_rate, "current");
  future_ = ToSamples(future_s, sample_rate, "future");
  if (current_ <= 0) {
    throw ContractError("segment plan: current context must be positive");
  }
}

SegmentPlan SegmentPlan::Parse(const std::string& text, double sample_rate) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ContractError("segment plan: bad number '" + item + "'");
    }
  }
  if (values.size() != 3) {
    throw ContractError("segment plan must be 'Th,Tc,Tf', got '" + text + "'");
  }
  return SegmentPlan(values[0], values[1], values[2], sample_rate);
}

double SegmentPlan::NominalOverhead() const {
  return static_cast<double>(history_ + future_) /
         static_cast<double>(current_);
}

std::vector<SegmentRange> PlanSegments(std::int64_t total_samples,
                                       const SegmentPlan& plan) {
  if (total_samples <= 0) {
    throw ContractError("cannot segment an empty signal");
  }
  const std::int64_t shift = plan.shift();
  const std::int64_t count = (total_samples + shift - 1) / shift;
  std::vector<SegmentRange> ranges;
  ranges.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t anchor = i * shift;
    ranges.push_back({anchor - plan.history(),
                      anchor + shift + plan.future(), anchor,
                      std::min(anchor + shift, total_samples)});
  }
  return ranges;
}

double SegmentOverhead(std::int64_t total_samples, const SegmentPlan& plan) {
  const auto ranges = PlanSegments(total_samples, plan);
  const double separated = static_cast<double>(ranges.size()) *
                           static_cast<double>(plan.segment_length());
  return (separated - static_cast<double>(total_samples)) /
         static_cast<double>(total_samples);
}

EstimateStreams IdentitySeparator::Separate(const Waveform& segment,
                                            std::int64_t) const {
  return EstimateStreams(std::vector<Waveform>(num_channels_, segment));
}

namespace {

SegmentOutput SeparateOne(const Waveform& mixture, const SegmentRange& range,
                          std::size_t index, const Separator& separator) {
  const auto total = static_cast<std::int64_t>(mixture.size());
  Waveform slice = mixture.Slice(range.start, range.end);
  EstimateStreams streams = separator.Separate(slice, range.start);
  if (streams.num_channels() != separator.num_channels()) {
    throw ContractError("separator returned " +
                        std::to_string(streams.num_channels()) +
                        " channels, declared " +
                        std::to_string(separator.num_channels()));
  }
  if (streams.length() != slice.size()) {
    throw ContractError("separator changed the segment length from " +
                        std::to_string(slice.size()) + " to " +
                        std::to_string(streams.length()));
  }
  SegmentOutput out;
  out.index = index;
  out.range = range;
  out.padding_front = std::max<std::int64_t>(0, -range.start);
  out.padding_back = std::max<std::int64_t>(0, range.end - total);
  out.streams = std::move(streams);
  return out;
}

}  // namespace

std::vector<SegmentOutput> SeparateSegments(const Waveform& mixture,
                                            const SegmentPlan& plan,
                                            const Separator& separator,
                                            unsigned max_threads) {
  if (separator.num_channels() < 1) {
    throw ContractError("separator must have at least one channel");
  }
  const auto ranges =
      PlanSegments(static_cast<std::int64_t>(mixture.size()), plan);
  std::vector<SegmentOutput> outputs(ranges.size());

  const unsigned workers =
      separator.thread_safe()
          ? std::min<unsigned>(std::max(1u, max_threads),
                               static_cast<unsigned>(ranges.size()))
          : 1u;
  if (workers <= 1) {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      outputs[i] = SeparateOne(mixture, ranges[i], i, separator);
    }
    return outputs;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < ranges.size(); i = next++) {
        try {
          outputs[i] = SeparateOne(mixture, ranges[i], i, separator);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

StitchResult StitchDetailed(const std::vector<SegmentOutput>& outputs,
                            const SegmentPlan& plan,
                            std::int64_t total_samples) {
  if (outputs.empty()) throw ContractError("nothing to stitch");
  const int n = outputs.front().streams.num_channels();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& out = outputs[i];
    if (out.streams.num_channels() != n) {
      throw ContractError("segment " + std::to_string(i) + " has " +
                          std::to_string(out.streams.num_channels()) +
                          " channels, expected " + std::to_string(n));
    }
    if (out.index != i) {
      throw ContractError("segment outputs are not consecutive");
    }
    if (static_cast<std::int64_t>(out.streams.length()) !=
        out.range.end - out.range.start) {
      throw ContractError("segment " + std::to_string(i) +
                          ": stream length differs from its range");
    }
  }
  const double sample_rate = outputs.front().streams.sample_rate();
  if (plan.segment_length() !=
      outputs.front().range.end - outputs.front().range.start) {
    throw ContractError("segment outputs do not match the plan");
  }

  StitchResult result;
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  result.permutations.push_back(identity);

  for (std::size_t i = 1; i < outputs.size(); ++i) {
    const auto& prev = outputs[i - 1];
    const auto& cur = outputs[i];
    const auto& prev_perm = result.permutations.back();
    const std::int64_t lo = std::max<std::int64_t>(0, cur.range.start);
    const std::int64_t hi = std::min(prev.range.end, total_samples);

    // cost[g][c]: squared difference of aligned previous channel g and raw
    // current channel c over the shared samples.
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (int g = 0; g < n; ++g) {
      const auto a = prev.streams[prev_perm[g]].samples();
      for (int c = 0; c < n; ++c) {
        const auto b = cur.streams[c].samples();
        double acc = 0.0;
        for (std::int64_t t = lo; t < hi; ++t) {
          const double d = a[t - prev.range.start] - b[t - cur.range.start];
          acc += d * d;
        }
        cost[g][c] = acc;
      }
    }

    std::vector<int> perm = identity;
    std::vector<int> best;
    double best_cost = std::numeric_limits<double>::infinity();
    double second_cost = std::numeric_limits<double>::infinity();
    // Lexicographic from the identity; strict < keeps the earliest on ties.
    do {
      double total = 0.0;
      for (int g = 0; g < n; ++g) total += cost[g][perm[g]];
      if (best.empty() || total < best_cost) {
        second_cost = best_cost;
        best_cost = total;
        best = perm;
      } else if (total < second_cost) {
        second_cost = total;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    result.alignment_gaps.push_back(n > 1 ? second_cost - best_cost : 0.0);
    result.permutations.push_back(std::move(best));
  }

  std::vector<Waveform> channels(
      n, Waveform::Zeros(static_cast<std::size_t>(total_samples), sample_rate));
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& out = outputs[i];
    const auto& perm = result.permutations[i];
    const std::int64_t lo = out.range.current_start;
    const std::int64_t hi = std::min(out.range.current_end, total_samples);
    for (int g = 0; g < n; ++g) {
      const auto src = out.streams[perm[g]].samples();
      auto dst = channels[g].mutable_samples();
      for (std::int64_t t = lo; t < hi; ++t) {
        dst[t] = src[t - out.range.start];
      }
    }
  }
  result.streams = EstimateStreams(std::move(channels));
  return result;
}

EstimateStreams Stitch(const std::vector<SegmentOutput>& outputs,
                       const SegmentPlan& plan, std::int64_t total_samples) {
  return StitchDetailed(outputs, plan, total_samples).streams;
}

}  // namespace graphpit
