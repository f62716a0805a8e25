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

#include "graphpit/wav.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "graphpit/errors.h"

namespace graphpit {

namespace {

constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view source)
      : bytes_(bytes), source_(source) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void Fail(const std::string& what) const { FailAt(pos_, what); }
  [[noreturn]] void FailAt(std::size_t offset, const std::string& what) const {
    throw ParseError(std::string(source_) + ": offset " +
                     std::to_string(offset) + ": " + what);
  }

  std::string_view Take(std::size_t n) {
    if (remaining() < n) Fail("unexpected end of data");
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint16_t U16() {
    const auto b = Take(2);
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[0]) |
                                      (static_cast<unsigned char>(b[1]) << 8));
  }
  std::uint32_t U32() {
    const auto b = Take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
    return v;
  }
  void Skip(std::size_t n) { Take(n); }

 private:
  std::string_view bytes_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EncodeWav(const Waveform& waveform) {
  const double rate = waveform.sample_rate();
  if (rate != std::floor(rate) || rate > 4294967295.0) {
    throw ContractError("WAV needs an integral sample rate, got " +
                        std::to_string(rate));
  }
  const std::uint64_t data_bytes = 4ULL * waveform.size();
  if (data_bytes + 36 > 0xFFFFFFFFULL) {
    throw ContractError("waveform too long for a RIFF file");
  }
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, static_cast<std::uint32_t>(36 + data_bytes));
  out += "WAVE";
  out += "fmt ";
  PutU32(out, 16);
  PutU16(out, kFormatIeeeFloat);
  PutU16(out, 1);
  const auto sr = static_cast<std::uint32_t>(rate);
  PutU32(out, sr);
  PutU32(out, sr * 4);
  PutU16(out, 4);
  PutU16(out, 32);
  out += "data";
  PutU32(out, static_cast<std::uint32_t>(data_bytes));
  for (double v : waveform.samples()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      throw ContractError("sample " + std::to_string(v) +
                          " does not fit in float32");
    }
    PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

Waveform DecodeWav(std::string_view bytes, std::string_view source) {
  Reader r(bytes, source);
  if (r.Take(4) != "RIFF") r.FailAt(0, "missing RIFF tag");
  const std::uint32_t riff_size = r.U32();
  if (r.Take(4) != "WAVE") r.FailAt(8, "missing WAVE tag");
  const std::size_t riff_end =
      std::min<std::size_t>(bytes.size(), 8 + static_cast<std::size_t>(riff_size));

  bool have_format = false;
  std::uint32_t sample_rate = 0;
  std::vector<double> samples;
  bool have_data = false;
  while (r.offset() + 8 <= riff_end && !(have_format && have_data)) {
    const std::size_t chunk_offset = r.offset();
    const std::string id(r.Take(4));
    const std::uint32_t size = r.U32();
    if (r.remaining() < size) {
      r.FailAt(chunk_offset, "chunk '" + id + "' runs past the end of data");
    }
    if (id == "fmt ") {
      if (size < 16) r.FailAt(chunk_offset, "fmt chunk too small");
      std::uint16_t format = r.U16();
      const std::uint16_t channels = r.U16();
      sample_rate = r.U32();
      r.U32();  // byte rate
      r.U16();  // block align
      const std::uint16_t bits = r.U16();
      std::size_t consumed = 16;
      if (format == kFormatExtensible && size >= 40) {
        r.U16();  // cbSize
        r.U16();  // valid bits
        r.U32();  // channel mask
        format = r.U16();  // first two bytes of the sub-format GUID
        r.Skip(14);
        consumed = 40;
      }
      if (format != kFormatIeeeFloat) {
        r.FailAt(chunk_offset, "unsupported format tag " + std::to_string(format) +
                                   " (need 3, IEEE float)");
      }
      if (channels != 1) {
        r.FailAt(chunk_offset,
                 "expected mono, got " + std::to_string(channels) + " channels");
      }
      if (bits != 32) {
        r.FailAt(chunk_offset,
                 "expected 32-bit samples, got " + std::to_string(bits));
      }
      if (sample_rate == 0) r.FailAt(chunk_offset, "zero sample rate");
      r.Skip(size - consumed);
      have_format = true;
    } else if (id == "data") {
      if (!have_format) r.FailAt(chunk_offset, "data chunk before fmt chunk");
      if (size % 4 != 0) {
        r.FailAt(chunk_offset, "data size is not a multiple of 4 bytes");
      }
      samples.resize(size / 4);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const float v = std::bit_cast<float>(r.U32());
        if (!std::isfinite(v)) {
          r.FailAt(r.offset() - 4, "non-finite sample");
        }
        samples[i] = v;
      }
      have_data = true;
    } else {
      r.Skip(size);
    }
    if (size % 2 == 1 && r.remaining() > 0) r.Skip(1);
  }
  if (!have_format) r.Fail("no fmt chunk");
  if (!have_data) r.Fail("no data chunk");
  return Waveform(std::move(samples), static_cast<double>(sample_rate));
}

void WriteWav(const std::filesystem::path& path, const Waveform& waveform) {
  const std::string bytes = EncodeWav(waveform);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return DecodeWav(bytes, path.string());
}

}  // namespace graphpit
