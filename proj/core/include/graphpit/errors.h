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

#ifndef GRAPHPIT_ERRORS_H_
#define GRAPHPIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace graphpit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (length mismatch, bad range...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A metric is mathematically undefined for the given input, e.g. SDR of an
// all-zero reference.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

// No channel assignment exists: too many speakers for uPIT, or more
// concurrently active utterances than output channels for Graph-PIT.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Malformed file or document. The message carries file/offset context.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphpit

#endif  // GRAPHPIT_ERRORS_H_
