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

#include "totr/core/errors.hpp"
#include "totr/embedding.hpp"
#include "totr/video.hpp"

namespace totr::embedding {

const std::string_view kRetrievalInstruction =
    "You are given the scenes from an advertisement video, and a detailed description of the video, including "
    "description of each scenes in the video, audio transcript of the video, and title of the video. Your task is to "
    "respond with what a person may say, when they are trying to remember this advertisement video. Precisely, if a "
    "person vaguely remembers the video, and is trying to retrieve a description of the video from their own memory, "
    "what are some possible things that they may say? Answer by considering all information about the given video: "
    "Audio Transcript: ....., OCR: .......";

EmbeddingMatrix embed_batch(std::span<const EmbedRequest> requests, std::span<const std::string> ids,
                            clients::EmbedderClient& embedder, std::size_t batch_size) {
    if (ids.size() != requests.size()) throw Error(Errc::InvalidArgument, "one id per request required");
    if (batch_size == 0) throw Error(Errc::InvalidArgument, "batch size must be positive");
    if (requests.empty()) return EmbeddingMatrix(0);

    std::optional<std::size_t> dim;
    EmbeddingMatrix out;
    std::size_t begin = 0;
    while (begin < requests.size()) {
        std::size_t end = begin + 1;
        while (end < requests.size() && end - begin < batch_size && requests[end].instruction == requests[begin].instruction) {
            ++end;
        }
        std::vector<clients::EmbedItem> items;
        items.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) items.push_back({requests[i].text, requests[i].image_paths});
        clients::EmbedResponse reply = embedder.embed(requests[begin].instruction, items);
        if (reply.vectors.size() != items.size()) throw Error(Errc::Malformed, "embedder returned wrong row count");
        if (!dim) {
            dim = reply.dim;
            out = EmbeddingMatrix(*dim);
        } else if (reply.dim != *dim) {
            throw Error(Errc::DimMismatch, "embedder dim changed from " + std::to_string(*dim) + " to " + std::to_string(reply.dim));
        }
        for (std::size_t i = 0; i < items.size(); ++i) out.add_row(ids[begin + i], reply.vectors[i]);
        begin = end;
    }
    return out;
}

EmbedRequest video_document_request(const video::VideoAsset& asset, std::optional<std::string> instruction) {
    EmbedRequest req;
    req.kind = RequestKind::VideoDocument;
    req.instruction = std::move(instruction);
    std::vector<int> kept = asset.deduped_scene_indices;
    if (kept.empty()) {
        for (const auto& s : asset.scenes) kept.push_back(s.index);
    }
    std::string ocr;
    for (const auto& s : asset.scenes) {
        if (std::find(kept.begin(), kept.end(), s.index) == kept.end()) continue;
        if (!s.ocr_text.empty()) {
            if (!ocr.empty()) ocr += " | ";
            ocr += s.ocr_text;
        }
        req.image_paths.push_back((asset.source_dir / s.image_path).string());
    }
    req.text = "Title: " + asset.title + "\nAudio Transcript: " + asset.transcript + "\nOCR: " + ocr;
    return req;
}

}  // namespace totr::embedding
