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

// Dense vectors, the embedder batching layer, the T2ME store format, and
// exact brute-force cosine search.
//
// T2ME store: "T2ME", u32 dim, u64 count (little-endian), count*dim f32
// row-major (little-endian), then one UTF-8 id per line.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "totr/clients.hpp"

namespace totr::video {
struct VideoAsset;
}

namespace totr::embedding {

class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    explicit EmbeddingMatrix(std::size_t dim) : dim_(dim) {}

    /// Throws Error(DimMismatch) on wrong length, Error(InvalidArgument) on a
    /// duplicate id, Error(NumericalError) on non-finite values.
    void add_row(std::string id, std::span<const float> values);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rows() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    bool normalized() const noexcept { return normalized_; }
    void set_normalized(bool v) noexcept { normalized_ = v; }

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::string& id(std::size_t r) const { return ids_.at(r); }
    std::span<const float> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }
    std::span<float> mutable_row(std::size_t r) { return {data_.data() + r * dim_, dim_}; }
    const std::vector<float>& data() const noexcept { return data_; }

    std::optional<std::size_t> find(std::string_view id) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<float> data_;
    std::unordered_map<std::string, std::size_t> index_;
    bool normalized_ = false;
};

/// Each row divided by its L2 norm. Throws Error(ZeroVector) naming the row.
EmbeddingMatrix normalize(const EmbeddingMatrix& m);

double l2_norm(std::span<const float> v);

/// dot / (|a||b|), clamped to [-1, 1]. Throws on dim mismatch or a zero vector.
double cosine(std::span<const float> a, std::span<const float> b);

struct Hit {
    std::string id;
    double score = 0.0;
    std::size_t row = 0;
};

/// Ranking order: score descending, then id ascending.
inline bool ranks_before(const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
}

/// Exact top-k by dot product against a normalized index (cosine when the
/// query is normalized too). k larger than the corpus returns everything.
std::vector<Hit> knn_search(const EmbeddingMatrix& index, std::span<const float> query, std::size_t k);

/// Scores for every row; out must hold index.rows() entries.
void score_all(const EmbeddingMatrix& index, std::span<const float> query, std::span<double> out);

void save_store(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix load_store(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

enum class RequestKind { QueryText, DocumentText, VideoDocument };

struct EmbedRequest {
    RequestKind kind = RequestKind::QueryText;
    std::optional<std::string> instruction;
    std::string text;
    std::vector<std::string> image_paths;
};

/// Rows follow request order. Consecutive requests sharing an instruction
/// go out together in chunks of at most batch_size, so the result does not
/// depend on batch_size. Throws Error(DimMismatch) when the embedder changes
/// dimension mid-run; service errors propagate after the client's retries.
EmbeddingMatrix embed_batch(std::span<const EmbedRequest> requests, std::span<const std::string> ids,
                            clients::EmbedderClient& embedder, std::size_t batch_size = 32);

/// Document text (title, transcript, OCR of the deduplicated scenes) plus
/// the deduplicated scene image paths, resolved against the asset directory.
EmbedRequest video_document_request(const video::VideoAsset& asset, std::optional<std::string> instruction = std::nullopt);

/// Fixed retrieval instruction prepended to search queries.
extern const std::string_view kRetrievalInstruction;

}  // namespace totr::embedding
