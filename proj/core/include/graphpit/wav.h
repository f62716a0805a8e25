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

#ifndef GRAPHPIT_WAV_H_
#define GRAPHPIT_WAV_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "graphpit/audio.h"

namespace graphpit {

// Mono RIFF/WAVE, IEEE float (format tag 3), 32 bit, little endian.
// Samples are rounded to float on write; the sample rate must be integral.
std::string EncodeWav(const Waveform& waveform);
// `source` names the data in error messages.
Waveform DecodeWav(std::string_view bytes, std::string_view source = "<memory>");

void WriteWav(const std::filesystem::path& path, const Waveform& waveform);
Waveform ReadWav(const std::filesystem::path& path);

}  // namespace graphpit

#endif  // GRAPHPIT_WAV_H_
