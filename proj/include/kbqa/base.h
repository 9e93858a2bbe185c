// Copyright 2026 The KBQA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared error type and small string helpers.

#ifndef KBQA_BASE_H_
#define KBQA_BASE_H_

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kbqa {

// All recoverable failures (bad input files, contract violations detected at
// runtime) are reported as kbqa::Error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

using EntityId = std::string;
using EntitySet = std::set<EntityId>;

// Splits on a single character. Empty fields are kept.
std::vector<std::string> Split(std::string_view text, char sep);

// Splits on runs of ASCII whitespace. Empty fields are dropped.
std::vector<std::string> SplitWhitespace(std::string_view text);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);
std::string Lowercase(std::string_view text);
std::string Trim(std::string_view text);
bool StartsWith(std::string_view text, std::string_view prefix);

// Lowercases and strips leading/trailing punctuation (.,;:!?"()). Used
// wherever tokens from different sources are compared.
std::string NormalizeToken(std::string_view token);

// Lossless text encoding of doubles (hex float) and its inverse.
std::string EncodeDouble(double value);
double DecodeDouble(const std::string &text);

// 64-bit FNV-1a; stable across platforms.
uint64_t StableHash(std::string_view text);

}  // namespace kbqa

#endif  // KBQA_BASE_H_
