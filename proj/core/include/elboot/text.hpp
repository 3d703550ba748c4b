// Copyright 2026 The elboot Authors.
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

#ifndef ELBOOT_TEXT_HPP_
#define ELBOOT_TEXT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elboot::text {

bool is_valid_utf8(std::string_view s);

// Number of Unicode code points in a valid UTF-8 string.
std::size_t codepoint_count(std::string_view s);

// RFC 3986 percent-encoding of the UTF-8 bytes. Only unreserved characters
// (ALPHA / DIGIT / "-" / "." / "_" / "~") are left as is.
std::string percent_encode(std::string_view s);

// Inverse of percent_encode. Returns nullopt on a malformed escape.
std::optional<std::string> percent_decode(std::string_view s);

// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

// Upper-cases the first code point. Handles ASCII and the Latin-1
// supplement, which covers Icelandic; other scripts are returned unchanged.
std::string upper_first(std::string_view s);

}  // namespace elboot::text

#endif  // ELBOOT_TEXT_HPP_
