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

#include "totr/core/errors.hpp"
#include "totr/core/text.hpp"
#include "totr/video.hpp"

namespace totr::video {

std::string normalize_ocr(std::string_view text) { return text::to_lower(text::collapse_whitespace(text)); }

std::vector<std::size_t> downsample_positions(std::size_t count, std::size_t cap) {
    if (cap == 0) throw Error(Errc::InvalidArgument, "scene cap must be at least 1");
    if (cap == 1) return {0};
    std::vector<std::size_t> out(cap);
    const std::size_t span = count - 1;
    const std::size_t steps = cap - 1;
    for (std::size_t j = 0; j < cap; ++j) {
        // integer round(j * span / steps)
        out[j] = (2 * j * span + steps) / (2 * steps);
    }
    return out;
}

std::vector<int> dedup_scenes(std::span<const Scene> scenes, std::size_t cap) {
    if (cap == 0) throw Error(Errc::InvalidArgument, "scene cap must be at least 1");
    std::vector<int> kept;
    std::string prev;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        std::string norm = normalize_ocr(scenes[i].ocr_text);
        if (i == 0 || norm != prev) kept.push_back(scenes[i].index);
        prev = std::move(norm);
    }
    if (kept.size() <= cap) return kept;
    std::vector<int> capped;
    capped.reserve(cap);
    for (std::size_t pos : downsample_positions(kept.size(), cap)) capped.push_back(kept[pos]);
    return capped;
}

}  // namespace totr::video
