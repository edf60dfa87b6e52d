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

#include <regex>
#include <unordered_set>

#include "totr/core/text.hpp"
#include "totr/curation.hpp"

namespace totr::curation {
namespace {

bool is_url_terminator(char c) {
    return text::is_space(c) || c == ')' || c == ']' || c == '>' || c == '}' || c == '<' || c == '"';
}

bool is_trailing_punct(char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '\'';
}

// [label](url) and <url> become "label url" / "url" so the bare-URL scan
// below sees every target exactly once.
std::string unwrap_markdown(std::string_view body) {
    static const std::regex md_link(R"(\[([^\]]*)\]\((https?://[^\s)]+)\))", std::regex::icase);
    static const std::regex autolink(R"(<(https?://[^\s>]+)>)", std::regex::icase);
    std::string out = std::regex_replace(std::string(body), md_link, "$1 $2 ");
    return std::regex_replace(out, autolink, " $1 ");
}

bool starts_with_scheme(std::string_view s, std::size_t pos, std::size_t& scheme_len) {
    auto match = [&](std::string_view scheme) {
        if (pos + scheme.size() > s.size()) return false;
        for (std::size_t i = 0; i < scheme.size(); ++i) {
            char c = s[pos + i];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if (c != scheme[i]) return false;
        }
        return true;
    };
    if (match("https://")) {
        scheme_len = 8;
        return true;
    }
    if (match("http://")) {
        scheme_len = 7;
        return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> extract_links(std::string_view body) {
    const std::string unwrapped = unwrap_markdown(body);
    const std::string_view s = unwrapped;
    std::vector<std::string> links;
    std::unordered_set<std::string> seen;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t scheme_len = 0;
        // a scheme glued to a preceding word character is not a URL start
        if (!starts_with_scheme(s, i, scheme_len) || (i > 0 && text::is_ascii_alnum(s[i - 1]))) {
            ++i;
            continue;
        }
        std::size_t end = i + scheme_len;
        while (end < s.size() && !is_url_terminator(s[end])) ++end;
        std::size_t trimmed = end;
        while (trimmed > i + scheme_len && is_trailing_punct(s[trimmed - 1])) --trimmed;
        if (trimmed > i + scheme_len) {
            std::string url(s.substr(i, trimmed - i));
            if (seen.insert(url).second) links.push_back(std::move(url));
        }
        i = end;
    }
    return links;
}

std::optional<std::string> youtube_video_id(std::string_view url) {
    static const std::regex watch(R"(^https?://(?:www\.|m\.|music\.)?youtube\.com/watch\?(?:[^#\s]*&)?v=([A-Za-z0-9_-]{3,}))",
                                  std::regex::icase);
    static const std::regex short_form(R"(^https?://(?:www\.)?youtu\.be/([A-Za-z0-9_-]{3,}))", std::regex::icase);
    static const std::regex path_form(R"(^https?://(?:www\.|m\.)?youtube\.com/(?:shorts|embed|v|live)/([A-Za-z0-9_-]{3,}))",
                                      std::regex::icase);
    std::cmatch m;
    const std::string u(url);
    for (const auto* re : {&watch, &short_form, &path_form}) {
        if (std::regex_search(u.c_str(), m, *re)) return m[1].str();
    }
    return std::nullopt;
}

}  // namespace totr::curation
