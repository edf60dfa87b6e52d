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
#include <cstdio>
#include <fstream>
#include <set>

#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/core/parallel.hpp"
#include "totr/video.hpp"

namespace totr::video {

namespace fs = std::filesystem;

std::string scene_image_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d.jpg", index);
    return buf;
}

namespace {

std::optional<int> parse_scene_index(const std::string& filename) {
    if (filename.size() < 5 || filename.substr(filename.size() - 4) != ".jpg") return std::nullopt;
    const std::string stem = filename.substr(0, filename.size() - 4);
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return std::nullopt;
    }
    return std::stoi(stem);
}

}  // namespace

VideoAsset load_asset(const fs::path& dir) {
    const fs::path meta_path = dir / "meta.json";
    if (!fs::exists(meta_path)) throw Error(Errc::MissingMetadata, "no meta.json in " + dir.string());

    VideoAsset asset;
    asset.source_dir = dir;
    try {
        const json meta = jsonl::read_json_file(meta_path);
        asset.video_id = jsonl::require_string(meta, "video_id");
        asset.title = jsonl::optional_string(meta, "title").value_or("");
        asset.duration_s = jsonl::optional_number(meta, "duration_s");
        asset.view_count = jsonl::optional_integer(meta, "view_count");
        asset.upload_date = jsonl::optional_string(meta, "upload_date");
        asset.available = jsonl::optional_bool(meta, "available").value_or(true);
    } catch (const json::exception& e) {
        throw Error(Errc::Malformed, meta_path.string() + ": " + e.what());
    }

    std::set<int> image_indices;
    const fs::path scenes_dir = dir / "scenes";
    if (fs::is_directory(scenes_dir)) {
        for (const auto& entry : fs::directory_iterator(scenes_dir)) {
            if (auto idx = parse_scene_index(entry.path().filename().string())) image_indices.insert(*idx);
        }
    }

    const fs::path ocr_path = dir / "ocr.jsonl";
    if (fs::exists(ocr_path)) {
        std::ifstream in(ocr_path);
        std::size_t bad = jsonl::for_each(in, [&](const json& line, std::size_t line_no) {
            Scene s;
            try {
                s.index = static_cast<int>(jsonl::optional_integer(line, "index").value_or(-1));
                s.start_s = jsonl::require_number(line, "start_s");
                s.ocr_text = jsonl::optional_string(line, "text").value_or("");
            } catch (const Error& e) {
                throw Error(Errc::Malformed, ocr_path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
            if (s.index < 0) throw Error(Errc::Malformed, ocr_path.string() + ":" + std::to_string(line_no) + ": bad index");
            s.image_path = "scenes/" + scene_image_name(s.index);
            asset.scenes.push_back(std::move(s));
        });
        if (bad > 0) throw Error(Errc::Malformed, ocr_path.string() + ": unparseable lines");
    }

    if (asset.scenes.size() != image_indices.size()) {
        throw Error(Errc::SchemaMismatch, dir.string() + ": " + std::to_string(asset.scenes.size()) + " OCR lines for " +
                                              std::to_string(image_indices.size()) + " scene images");
    }
    for (std::size_t i = 0; i < asset.scenes.size(); ++i) {
        const Scene& s = asset.scenes[i];
        if (!image_indices.contains(s.index)) {
            throw Error(Errc::SchemaMismatch, dir.string() + ": OCR line for scene " + std::to_string(s.index) + " has no image");
        }
        if (i > 0 && (s.index <= asset.scenes[i - 1].index || s.start_s < asset.scenes[i - 1].start_s)) {
            throw Error(Errc::SchemaMismatch, dir.string() + ": scenes not in index order");
        }
    }

    const fs::path transcript_path = dir / "transcript.txt";
    if (fs::exists(transcript_path)) asset.transcript = jsonl::read_text_file(transcript_path);
    return asset;
}

void write_asset(const VideoAsset& asset, const fs::path& dir) {
    fs::create_directories(dir);
    nlohmann::ordered_json meta;
    meta["video_id"] = asset.video_id;
    meta["title"] = asset.title;
    meta["duration_s"] = asset.duration_s ? nlohmann::ordered_json(*asset.duration_s) : nlohmann::ordered_json(nullptr);
    meta["view_count"] = asset.view_count ? nlohmann::ordered_json(*asset.view_count) : nlohmann::ordered_json(nullptr);
    meta["upload_date"] = asset.upload_date ? nlohmann::ordered_json(*asset.upload_date) : nlohmann::ordered_json(nullptr);
    meta["available"] = asset.available;
    jsonl::write_text_file(dir / "meta.json", meta.dump() + "\n");

    std::string ocr;
    for (const auto& s : asset.scenes) {
        nlohmann::ordered_json line;
        line["index"] = s.index;
        line["start_s"] = s.start_s;
        line["text"] = s.ocr_text;
        ocr += line.dump();
        ocr += '\n';
    }
    jsonl::write_text_file(dir / "ocr.jsonl", ocr);
    jsonl::write_text_file(dir / "transcript.txt", asset.transcript);
}

std::vector<VideoAsset> load_asset_root(const fs::path& root, std::size_t workers, LoadReport& report) {
    if (!fs::is_directory(root)) throw Error(Errc::Io, "asset root is not a directory: " + root.string());
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    report.directories = dirs.size();

    std::vector<std::optional<VideoAsset>> slots(dirs.size());
    std::vector<std::string> errors(dirs.size());
    parallel_for(dirs.size(), workers, [&](std::size_t i) {
        try {
            slots[i] = load_asset(dirs[i]);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    std::vector<VideoAsset> assets;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        if (slots[i]) {
            assets.push_back(std::move(*slots[i]));
        } else {
            report.failures.emplace_back(dirs[i].filename().string(), errors[i]);
        }
    }
    report.loaded = assets.size();
    return assets;
}

json to_json(const AssetFilterReport& r) {
    return json{{"input", r.input},
                {"kept", r.kept},
                {"too_long", r.too_long},
                {"unavailable", r.unavailable},
                {"no_metadata", r.no_metadata}};
}

std::vector<VideoAsset> filter_video_assets(std::span<const VideoAsset> assets, AssetFilterReport& report) {
    std::vector<VideoAsset> kept;
    for (const auto& a : assets) {
        ++report.input;
        if (!a.duration_s) {
            ++report.no_metadata;
        } else if (!a.available) {
            ++report.unavailable;
        } else if (*a.duration_s >= kMaxDurationSeconds) {
            ++report.too_long;
        } else {
            kept.push_back(a);
            ++report.kept;
        }
    }
    return kept;
}

json to_index_json(const VideoAsset& asset, bool masked, bool mask_fallback) {
    json j;
    j["video_id"] = asset.video_id;
    j["title"] = asset.title;
    j["duration_s"] = asset.duration_s ? json(*asset.duration_s) : json(nullptr);
    j["view_count"] = asset.view_count ? json(*asset.view_count) : json(nullptr);
    j["upload_date"] = asset.upload_date ? json(*asset.upload_date) : json(nullptr);
    j["available"] = asset.available;
    j["asset_dir"] = asset.source_dir.string();
    json scenes = json::array();
    for (const auto& s : asset.scenes) {
        scenes.push_back({{"index", s.index}, {"start_s", s.start_s}, {"image_path", s.image_path}, {"ocr_text", s.ocr_text}});
    }
    j["scenes"] = std::move(scenes);
    j["deduped_scene_indices"] = asset.deduped_scene_indices;
    j["transcript"] = asset.transcript;
    j["masked"] = masked;
    if (masked) j["mask_fallback"] = mask_fallback;
    return j;
}

VideoAsset from_index_json(const json& j) {
    VideoAsset a;
    a.video_id = jsonl::require_string(j, "video_id");
    a.title = jsonl::optional_string(j, "title").value_or("");
    a.duration_s = jsonl::optional_number(j, "duration_s");
    a.view_count = jsonl::optional_integer(j, "view_count");
    a.upload_date = jsonl::optional_string(j, "upload_date");
    a.available = jsonl::optional_bool(j, "available").value_or(true);
    a.source_dir = jsonl::optional_string(j, "asset_dir").value_or("");
    if (j.contains("scenes") && j["scenes"].is_array()) {
        for (const auto& s : j["scenes"]) {
            Scene scene;
            scene.index = s.value("index", 0);
            scene.start_s = s.value("start_s", 0.0);
            scene.image_path = s.value("image_path", std::string{});
            scene.ocr_text = s.value("ocr_text", std::string{});
            a.scenes.push_back(std::move(scene));
        }
    }
    if (j.contains("deduped_scene_indices")) a.deduped_scene_indices = j["deduped_scene_indices"].get<std::vector<int>>();
    a.transcript = jsonl::optional_string(j, "transcript").value_or("");
    return a;
}

}  // namespace totr::video
