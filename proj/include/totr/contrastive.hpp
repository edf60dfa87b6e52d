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

// InfoNCE over a trainable linear adapter on frozen embeddings, plus
// similarity-based hard-negative mining.
//
// With h(x) = W x / |W x| applied to every vector, s_j = <h(q), h(t_j)>,
// and t_0 the positive:
//
//   loss = -log( exp(s_0 / tau) / sum_j exp(s_j / tau) )
//        = logsumexp_j(s_j / tau) - s_0 / tau
//
// evaluated in log space so tau down to 0.01 cannot overflow.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "totr/embedding.hpp"

namespace totr::contrastive {

using Vec = std::span<const double>;

inline constexpr double kDefaultTemperature = 0.05;

struct AdapterState {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    std::vector<double> weight;  // dim_out x dim_in, row-major
    double tau = kDefaultTemperature;
    std::uint64_t step = 0;
    std::uint64_t seed = 0;

    static AdapterState identity(std::size_t dim, double tau = kDefaultTemperature, std::uint64_t seed = 0);

    double& at(std::size_t out, std::size_t in) { return weight[out * dim_in + in]; }
    double at(std::size_t out, std::size_t in) const { return weight[out * dim_in + in]; }
};

/// exp(cosine(a, b) / tau). Throws Error(InvalidArgument) when tau <= 0.
double phi(Vec a, Vec b, double tau);

/// Loss for already-normalized vectors. Throws Error(InvalidArgument) when
/// tau <= 0 or dims differ.
double info_nce_loss(Vec query, Vec positive, std::span<const Vec> negatives, double tau);

/// Loss after mapping every (raw) vector through the adapter and
/// re-normalizing.
double adapted_loss(const AdapterState& adapter, Vec query, Vec positive, std::span<const Vec> negatives);

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> grad;  // same layout as AdapterState::weight
};

/// Analytic gradient of adapted_loss with respect to the adapter weight,
/// using tau from the argument. Throws Error(NumericalError) when an
/// intermediate goes non-finite or an adapted vector collapses to zero.
LossAndGrad info_nce_grad(Vec query, Vec positive, std::span<const Vec> negatives, double tau, const AdapterState& adapter);

/// Adds the gradient for one instance into `grad` (scaled by `scale`) and
/// returns its loss. Allocation-free core of info_nce_grad.
double accumulate_grad(Vec query, Vec positive, std::span<const Vec> negatives, double tau, const AdapterState& adapter,
                       double scale, std::span<double> grad);

// ---------------------------------------------------------------------------

struct MiningOptions {
    std::size_t pool_size = 50;
    std::size_t per_sample = 1;
    std::uint64_t seed = 7;
    std::size_t workers = 1;
};

struct MiningResult {
    std::map<std::string, std::vector<std::string>> negatives;
    std::vector<std::string> warnings;
};

/// For every row: the pool_size most similar other rows (score desc, id asc),
/// from which per_sample are drawn without replacement. Per-anchor RNG
/// streams derive from (seed, anchor row), so worker count does not matter.
MiningResult mine_hard_negatives(const embedding::EmbeddingMatrix& recalls, const MiningOptions& options);

// ---------------------------------------------------------------------------

struct TrainingPair {
    std::string query_id;     // video-document side
    std::string positive_id;  // recall-text side
    std::vector<std::string> hard_negative_ids;
};

nlohmann::json to_json(const TrainingPair& p);
TrainingPair pair_from_json(const nlohmann::json& j);

struct TrainConfig {
    double tau = kDefaultTemperature;
    double lr = 0.01;
    double momentum = 0.0;
    std::size_t batch_size = 64;
    std::size_t epochs = 5;
    std::uint64_t seed = 7;
};

struct TrainResult {
    AdapterState state;
    std::vector<double> step_losses;
    std::vector<double> epoch_mean_losses;
    bool diverged = false;
};

/// Mini-batch gradient descent from the identity adapter. Negatives per pair:
/// its hard negatives plus the other positives in the batch. Batch order is
/// a seeded shuffle per epoch. On a non-finite loss training stops and the
/// state before that step is returned with diverged = true.
TrainResult train_adapter(std::span<const TrainingPair> pairs, const embedding::EmbeddingMatrix& queries,
                          const embedding::EmbeddingMatrix& docs, const TrainConfig& config);

TrainResult train_adapter(std::span<const TrainingPair> pairs, const embedding::EmbeddingMatrix& queries,
                          const embedding::EmbeddingMatrix& docs, const TrainConfig& config, AdapterState initial);

/// Rows mapped through the weight and re-normalized.
embedding::EmbeddingMatrix apply_adapter(const AdapterState& adapter, const embedding::EmbeddingMatrix& m);

std::vector<float> apply_adapter(const AdapterState& adapter, std::span<const float> v);

/// adapter.json: {"dim_in","dim_out","tau","seed","step","weight":[[f32]]}
nlohmann::json to_json(const AdapterState& a);
AdapterState adapter_from_json(const nlohmann::json& j);
void save_adapter(const AdapterState& a, const std::filesystem::path& path);
AdapterState load_adapter(const std::filesystem::path& path);

}  // namespace totr::contrastive
