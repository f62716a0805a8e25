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
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "graphpit/audio.h"
#include "graphpit/errors.h"
#include "test_util.h"

namespace graphpit {
namespace {

using testing::RandomWaveform;

Waveform W(std::vector<double> v) { return Waveform(std::move(v), 8000.0); }

TEST_CASE("Waveform rejects bad input") {
  CHECK_THROWS_AS(Waveform({1.0}, 0.0), ContractError);
  CHECK_THROWS_AS(Waveform({1.0, NAN}, 8000.0), ContractError);
  CHECK_THROWS_AS(Waveform({INFINITY}, 8000.0), ContractError);
}

TEST_CASE("Waveform slice pads outside the signal") {
  const Waveform w = W({1, 2, 3});
  CHECK(w.Slice(-2, 2).samples().size() == 4);
  CHECK(w.Slice(-2, 2) == W({0, 0, 1, 2}));
  CHECK(w.Slice(2, 5) == W({3, 0, 0}));
}

TEST_CASE("TsdrParams derives tau") {
  const TsdrParams p(20.0, 1e-6);
  CHECK(p.tau() == std::pow(10.0, -2.0));
  CHECK_THROWS_AS(TsdrParams(20.0, 0.0), ContractError);
  CHECK_THROWS_AS(TsdrParams(INFINITY, 1e-6), ContractError);
}

TEST_CASE("eps-tSDR fixed points") {
  const TsdrParams p(20.0, 1e-6);
  std::mt19937_64 rng(1);
  const Waveform s = RandomWaveform(rng, 256);
  CHECK(EpsTsdrLoss(s, s, p) == doctest::Approx(-20.0).epsilon(1e-12));
  const Waveform zeros = Waveform::Zeros(100, 8000.0);
  CHECK(EpsTsdrLoss(zeros, zeros, p) == doctest::Approx(-20.0).epsilon(1e-12));
}

TEST_CASE("eps-tSDR of an impulse against silence") {
  const TsdrParams p(20.0, 1e-6);
  std::vector<double> impulse(8, 0.0);
  impulse[0] = 1.0;
  // -10 log10((1 + eps) / (1 + tau (1 + eps))), evaluated by hand.
  const double expected = 0.043209437883231776;
  CHECK(EpsTsdrLoss(W(impulse), Waveform::Zeros(8, 8000.0), p) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("eps-tSDR rejects length mismatch") {
  CHECK_THROWS_AS(EpsTsdrLoss(W({1, 2}), W({1}), TsdrParams()), ContractError);
}

TEST_CASE("eps-tSDR is bounded below by -sdr_max") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> scale(0.0, 3.0);
  for (double sdr_max : {10.0, 20.0, 30.0}) {
    const TsdrParams p(sdr_max, 1e-6);
    for (int i = 0; i < 500; ++i) {
      const Waveform s = RandomWaveform(rng, 32);
      Waveform e = s;
      const Waveform noise = RandomWaveform(rng, 32);
      const double k = std::pow(10.0, -scale(rng) * 3);
      for (std::size_t t = 0; t < 32; ++t) e.mutable_samples()[t] += k * noise[t];
      CHECK(EpsTsdrLoss(s, e, p) >= -sdr_max - 1e-12);
    }
  }
}

TEST_CASE("eps-tSDR is continuous in the estimate") {
  std::mt19937_64 rng(3);
  const TsdrParams p;
  for (int point = 0; point < 3; ++point) {
    const Waveform s = RandomWaveform(rng, 64);
    const Waveform est = RandomWaveform(rng, 64);
    const Waveform dir = RandomWaveform(rng, 64);
    auto shifted = [&](double h) {
      Waveform out = est;
      for (std::size_t t = 0; t < 64; ++t) out.mutable_samples()[t] += h * dir[t];
      return EpsTsdrLoss(s, out, p);
    };
    const double base = shifted(0.0);
    // Central differences at two step sizes agree: the loss is smooth, so
    // changes are O(|delta|).
    const double d1 = (shifted(1e-4) - shifted(-1e-4)) / 2e-4;
    const double d2 = (shifted(1e-5) - shifted(-1e-5)) / 2e-5;
    CHECK(std::abs(d1 - d2) <= 1e-4 * std::max(1.0, std::abs(d1)));
    CHECK(std::abs(shifted(1e-9) - base) <= 1e-9 * (std::abs(d1) + 1.0));
  }
}

TEST_CASE("eps-tSDR approaches -SDR for large sdr_max and tiny eps") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> target(-10.0, 30.0);
  const TsdrParams p(200.0, 1e-12);
  for (int i = 0; i < 50; ++i) {
    const Waveform s = RandomWaveform(rng, 128);
    const Waveform n = RandomWaveform(rng, 128);
    const double want = target(rng);
    const double k = std::sqrt(Energy(s.samples()) /
                               (Energy(n.samples()) * std::pow(10.0, want / 10.0)));
    Waveform e = s;
    for (std::size_t t = 0; t < 128; ++t) e.mutable_samples()[t] += k * n[t];
    CHECK(std::abs(EpsTsdrLoss(s, e, p) + Sdr(s, e)) < 1e-3);
  }
}

TEST_CASE("plain SDR examples") {
  const Waveform s = W({1, 1, 1, 1});
  CHECK(Sdr(s, W({0, 2, 0, 2})) == doctest::Approx(0.0));  // |e|^2 == |s|^2
  CHECK(Sdr(s, W({0, 0, 0, 0})) == doctest::Approx(0.0));
  // |s|^2 = 4, half-scale estimate leaves |e|^2 = 1.
  CHECK(Sdr(s, W({0.5, 0.5, 0.5, 0.5})) ==
        doctest::Approx(6.020599913279624).epsilon(1e-12));
  CHECK(Sdr(s, s) == kSdrCapDb);
  CHECK_THROWS_AS(Sdr(W({0, 0}), W({1, 1})), UndefinedMetricError);
  CHECK_THROWS_AS(Sdr(W({1, 0}), W({1})), ContractError);
}

TEST_CASE("SDR improvement") {
  std::mt19937_64 rng(5);
  const Waveform s = RandomWaveform(rng, 64);
  const Waveform u = RandomWaveform(rng, 64);
  CHECK(SdrImprovement(s, u, u) == 0.0);

  // Unprocessed at 3 dB, estimate perfect: improvement is cap - 3.
  const Waveform n = RandomWaveform(rng, 64);
  const double k = std::sqrt(Energy(s.samples()) /
                             (Energy(n.samples()) * std::pow(10.0, 0.3)));
  Waveform unprocessed = s;
  for (std::size_t t = 0; t < 64; ++t) unprocessed.mutable_samples()[t] += k * n[t];
  CHECK(Sdr(s, unprocessed) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(SdrImprovement(s, unprocessed, s) ==
        doctest::Approx(kSdrCapDb - 3.0).epsilon(1e-9));

  // Orthogonal noise: halving it removes 3/4 of the error power.
  const Waveform ref = W({1, -2, 0, 0});
  const Waveform mix = W({1, -2, 3, 1});
  const Waveform half = W({1, -2, 1.5, 0.5});
  CHECK(SdrImprovement(ref, mix, half) ==
        doctest::Approx(6.020599913279624).epsilon(1e-12));
}

TEST_CASE("white noise hits the requested SNR") {
  std::mt19937_64 signal_rng(6);
  const Waveform s = RandomWaveform(signal_rng, 4000);
  for (double snr : {0.0, 20.0, 35.0}) {
    std::mt19937_64 rng(7);
    const Waveform noisy = AddWhiteNoise(s, snr, rng);
    const double err = ErrorEnergy(s.samples(), noisy.samples());
    CHECK(std::abs(10.0 * std::log10(Energy(s.samples()) / err) - snr) < 0.01);
  }
  std::mt19937_64 rng(8);
  const Waveform n0 = WhiteNoiseAtSnr(s, 0.0, rng);
  CHECK(std::abs(Energy(n0.samples()) / Energy(s.samples()) - 1.0) < 0.0025);

  std::mt19937_64 a(9), b(9);
  CHECK(AddWhiteNoise(s, 20.0, a) == AddWhiteNoise(s, 20.0, b));
  CHECK_THROWS_AS(AddWhiteNoise(Waveform::Zeros(10, 8000.0), 20.0, a),
                  ContractError);
}

// Kolmogorov-Smirnov against the normal CDF plus the first two moments and a
// tail fraction beyond the ziggurat base layer.
TEST_CASE("standard normal sampler matches the normal distribution") {
  std::mt19937_64 rng(2024);
  std::vector<double> x(200000);
  FillStandardNormal(rng, x);
  double mean = 0.0, second = 0.0;
  std::size_t tail = 0;
  for (double v : x) {
    mean += v;
    second += v * v;
    tail += std::abs(v) > 3.442619855899;
  }
  const double n = static_cast<double>(x.size());
  mean /= n;
  second /= n;
  CHECK(std::abs(mean) < 5.0 * std::sqrt(1.0 / n));
  CHECK(std::abs(second - 1.0) < 5.0 * std::sqrt(2.0 / n));
  // P(|z| > r) = erfc(r / sqrt 2) ~ 5.76e-4.
  const double p_tail = std::erfc(3.442619855899 / std::numbers::sqrt2);
  CHECK(std::abs(static_cast<double>(tail) - n * p_tail) <
        5.0 * std::sqrt(n * p_tail));

  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-x[i] / std::numbers::sqrt2);
    d = std::max({d, std::abs(cdf - static_cast<double>(i) / n),
                  std::abs(cdf - static_cast<double>(i + 1) / n)});
  }
  // 1% critical value of the KS statistic.
  CHECK(d < 1.63 / std::sqrt(n));
}

TEST_CASE("standard normal sampler is deterministic per seed") {
  std::mt19937_64 a(5), b(5);
  std::vector<double> x(1000), y(1000);
  FillStandardNormal(a, x);
  FillStandardNormal(b, y);
  CHECK(x == y);
}

}  // namespace
}  // namespace graphpit
