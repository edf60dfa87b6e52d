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

// Video documents: sidecar loading, availability/duration filtering,
// OCR-change scene deduplication, and proper-noun masking.
//
// On-disk layout of one asset:
//   <root>/<video_id>/meta.json        {"video_id","title","duration_s","view_count","upload_date","available"}
//   <root>/<video_id>/scenes/NNNN.jpg
//   <root>/<video_id>/ocr.jsonl        one {"index","start_s","text"} per scene, index-ordered
//   <root>/<video_id>/transcript.txt

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "totr/clients.hpp"

namespace totr::video {

using nlohmann::json;

inline constexpr double kMaxDurationSeconds = 600.0;
inline constexpr std::size_t kDefaultSceneCap = 30;

struct Scene {
    int index = 0;
    double start_s = 0.0;
    std::string image_path;  // relative to the asset directory
    std::string ocr_text;
};

struct VideoAsset {
    std::string video_id;
    std::string title;
    std::optional<double> duration_s;
    std::vector<Scene> scenes;
    std::vector<int> deduped_scene_indices;
    std::string transcript;
    std::optional<std::int64_t> view_count;
    std::optional<std::string> upload_date;
    bool available = true;
    std::filesystem::path source_dir;  // empty for assets not loaded from disk
};

struct MaskedAsset {
    VideoAsset asset;
    bool used_fallback = false;  // NER service missing or unreachable
};

std::string scene_image_name(int index);

/// Loads one asset directory. All-or-nothing: throws Error(MissingMetadata)
/// without meta.json, Error(SchemaMismatch) when OCR lines and scene images
/// disagree, Error(Malformed) on unparseable sidecars.
VideoAsset load_asset(const std::filesystem::path& dir);

/// Writes meta.json, ocr.jsonl, and transcript.txt in the canonical layout.
/// Scene images are not touched.
void write_asset(const VideoAsset& asset, const std::filesystem::path& dir);

struct LoadReport {
    std::size_t directories = 0;
    std::size_t loaded = 0;
    std::vector<std::pair<std::string, std::string>> failures;  // (dir name, error)
};

/// Every immediate subdirectory of root, sorted by name.
std::vector<VideoAsset> load_asset_root(const std::filesystem::path& root, std::size_t workers, LoadReport& report);

struct AssetFilterReport {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::size_t too_long = 0;
    std::size_t unavailable = 0;
    std::size_t no_metadata = 0;
};

json to_json(const AssetFilterReport& r);

/// Keeps available assets strictly shorter than 600 s; assets without a
/// duration are dropped as no_metadata.
std::vector<VideoAsset> filter_video_assets(std::span<const VideoAsset> assets, AssetFilterReport& report);

/// trim + collapse whitespace + lowercase
std::string normalize_ocr(std::string_view text);

/// m evenly spaced positions out of [0, count) keeping both ends; `count`
/// must exceed `cap`. Position j is round(j * (count-1) / (cap-1)).
std::vector<std::size_t> downsample_positions(std::size_t count, std::size_t cap);

/// Scene 0 plus every scene whose normalized OCR differs from the scene just
/// before it; then downsampled to `cap` when longer.
std::vector<int> dedup_scenes(std::span<const Scene> scenes, std::size_t cap = kDefaultSceneCap);

// ---------------------------------------------------------------------------

/// Entity labels that get masked (spaCy/OntoNotes names plus long forms).
bool is_maskable_label(std::string_view label);

/// Removes every word-bounded occurrence of each surface string, repeating
/// until nothing changes, then collapses runs of spaces and trims.
std::string mask_surfaces(std::string_view text, std::span<const std::string> surfaces);

/// Fallback: runs of capitalized tokens that do not start a sentence.
std::vector<std::string> heuristic_proper_nouns(std::string_view text);

MaskedAsset mask_proper_nouns(const VideoAsset& asset, clients::NerClient* ner);

// ---------------------------------------------------------------------------

/// One assets_index.jsonl line.
json to_index_json(const VideoAsset& asset, bool masked = false, bool mask_fallback = false);
VideoAsset from_index_json(const json& j);

}  // namespace totr::video
