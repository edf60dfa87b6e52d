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
#include <cmath>

#include "totr/core/errors.hpp"
#include "totr/embedding.hpp"
#include "totr/simd/kernels.hpp"

namespace totr::embedding {

void EmbeddingMatrix::add_row(std::string id, std::span<const float> values) {
    if (values.size() != dim_) {
        throw Error(Errc::DimMismatch, "row '" + id + "' has " + std::to_string(values.size()) + " values, expected " +
                                           std::to_string(dim_));
    }
    for (float v : values) {
        if (!std::isfinite(v)) throw Error(Errc::NumericalError, "non-finite value in row '" + id + "'");
    }
    if (!index_.emplace(id, ids_.size()).second) throw Error(Errc::InvalidArgument, "duplicate id '" + id + "'");
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), values.begin(), values.end());
}

std::optional<std::size_t> EmbeddingMatrix::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double l2_norm(std::span<const float> v) { return std::sqrt(simd::dot(v, v)); }

EmbeddingMatrix normalize(const EmbeddingMatrix& m) {
    EmbeddingMatrix out(m.dim());
    std::vector<float> buf(m.dim());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        const double norm = l2_norm(row);
        if (norm == 0.0) throw Error(Errc::ZeroVector, "row '" + m.id(r) + "' has zero norm");
        for (std::size_t i = 0; i < row.size(); ++i) buf[i] = static_cast<float>(row[i] / norm);
        out.add_row(m.id(r), buf);
    }
    out.set_normalized(true);
    return out;
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw Error(Errc::DimMismatch, "cosine of vectors with different dims");
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw Error(Errc::ZeroVector, "cosine with a zero vector");
    return std::clamp(simd::dot(a, b) / (na * nb), -1.0, 1.0);
}

void score_all(const EmbeddingMatrix& index, std::span<const float> query, std::span<double> out) {
    if (query.size() != index.dim()) throw Error(Errc::DimMismatch, "query dim differs from index dim");
    simd::kernels().dot_rows_f32(index.data().data(), index.rows(), index.dim(), query.data(), out.data());
}

std::vector<Hit> knn_search(const EmbeddingMatrix& index, std::span<const float> query, std::size_t k) {
    if (index.empty()) throw Error(Errc::EmptyIndex, "search on an empty index");
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be at least 1");
    if (!index.normalized()) throw Error(Errc::InvalidArgument, "index must be normalized before search");
    std::vector<double> scores(index.rows());
    score_all(index, query, scores);

    std::vector<std::size_t> order(index.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto before = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return index.id(a) < index.id(b);
    };
    k = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), before);

    std::vector<Hit> hits;
    hits.reserve(k);
    for (std::size_t i = 0; i < k; ++i) hits.push_back({index.id(order[i]), std::clamp(scores[order[i]], -1.0, 1.0), order[i]});
    return hits;
}

}  // namespace totr::embedding
