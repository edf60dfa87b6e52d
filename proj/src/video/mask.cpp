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

#include <algorithm>
#include <array>

#include "totr/core/text.hpp"
#include "totr/video.hpp"

namespace totr::video {
namespace {

bool word_bounded(std::string_view s, std::size_t pos, std::size_t len) {
    if (pos > 0 && text::is_word_byte(s[pos - 1])) return false;
    const std::size_t end = pos + len;
    return end >= s.size() || !text::is_word_byte(s[end]);
}

std::string tidy_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == ' ' && (out.empty() || out.back() == ' ' || out.back() == '\n')) continue;
        if (c == '\n') {
            while (!out.empty() && out.back() == ' ') out.pop_back();
        }
        out.push_back(c);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string_view strip_punct(std::string_view token) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && !text::is_word_byte(token[b])) ++b;
    while (e > b && !text::is_word_byte(token[e - 1])) --e;
    return token.substr(b, e - b);
}

}  // namespace

bool is_maskable_label(std::string_view label) {
    static constexpr std::array<std::string_view, 17> kLabels{
        "person", "per", "org", "organization", "gpe", "geopolitical", "loc", "location", "work_of_art",
        "creative title", "event", "product", "fac", "facility", "title", "creative_title", "norp"};
    const std::string lower = text::to_lower(label);
    return std::find(kLabels.begin(), kLabels.end(), lower) != kLabels.end();
}

std::string mask_surfaces(std::string_view input, std::span<const std::string> surfaces) {
    std::string textv(input);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& surface : surfaces) {
            if (surface.empty()) continue;
            std::size_t pos = 0;
            while ((pos = textv.find(surface, pos)) != std::string::npos) {
                if (word_bounded(textv, pos, surface.size())) {
                    textv.erase(pos, surface.size());
                    changed = true;
                } else {
                    ++pos;
                }
            }
        }
        if (changed) textv = tidy_spaces(textv);
    }
    return tidy_spaces(textv);
}

std::vector<std::string> heuristic_proper_nouns(std::string_view input) {
    std::vector<std::string> found;
    std::vector<std::string_view> run;
    auto flush = [&] {
        if (run.empty()) return;
        std::string surface(run.front());
        for (std::size_t i = 1; i < run.size(); ++i) {
            surface += ' ';
            surface += run[i];
        }
        if (std::find(found.begin(), found.end(), surface) == found.end()) found.push_back(std::move(surface));
        run.clear();
    };

    bool sentence_start = true;
    std::size_t i = 0;
    while (i < input.size()) {
        if (text::is_space(input[i])) {
            if (input[i] == '\n') {
                flush();
                sentence_start = true;
            }
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < input.size() && !text::is_space(input[j])) ++j;
        const std::string_view raw = input.substr(i, j - i);
        const std::string_view core = strip_punct(raw);
        const bool capitalized = !core.empty() && core.front() >= 'A' && core.front() <= 'Z' && core != "I";
        const bool leading_punct = !raw.empty() && !core.empty() && raw.front() != core.front();
        if (capitalized && !sentence_start) {
            if (leading_punct) flush();
            run.push_back(core);
        } else {
            flush();
        }
        const char last = raw.back();
        const bool trailing_punct = !core.empty() && raw.back() != core.back();
        if (trailing_punct) flush();
        sentence_start = (last == '.' || last == '!' || last == '?');
        i = j;
    }
    flush();
    return found;
}

MaskedAsset mask_proper_nouns(const VideoAsset& asset, clients::NerClient* ner) {
    MaskedAsset out{asset, ner == nullptr};
    auto mask_one = [&](const std::string& original) {
        if (original.empty()) return original;
        std::vector<std::string> surfaces;
        std::optional<std::vector<clients::NerSpan>> spans;
        if (ner) spans = ner->recognize(original);
        if (spans) {
            for (const auto& sp : *spans) {
                if (is_maskable_label(sp.label) && sp.end <= original.size() && sp.start < sp.end) {
                    surfaces.push_back(original.substr(sp.start, sp.end - sp.start));
                }
            }
        } else {
            out.used_fallback = true;
            surfaces = heuristic_proper_nouns(original);
        }
        return mask_surfaces(original, surfaces);
    };
    out.asset.transcript = mask_one(asset.transcript);
    for (auto& scene : out.asset.scenes) scene.ocr_text = mask_one(scene.ocr_text);
    return out;
}

}  // namespace totr::video
