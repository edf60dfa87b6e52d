// Copyright 2026 The totr Authors
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace totr::text {

inline bool is_ascii_alnum(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

/// Word character for tokenization: ASCII alphanumerics plus any non-ASCII
/// byte, so UTF-8 words stay whole.
inline bool is_word_byte(char c) noexcept {
    return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

inline bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s) noexcept;

/// trim + collapse internal whitespace runs to a single space.
std::string collapse_whitespace(std::string_view s);

/// Lowercase, map every non-word byte to a separator, collapse, trim.
std::string normalize_for_match(std::string_view s);

/// Split on runs of non-word bytes; drops empties.
std::vector<std::string> split_words(std::string_view s);

/// Truncate to at most max_bytes without cutting a UTF-8 sequence.
std::string utf8_truncate(std::string_view s, std::size_t max_bytes);

bool icontains(std::string_view haystack, std::string_view needle);

}  // namespace totr::text
