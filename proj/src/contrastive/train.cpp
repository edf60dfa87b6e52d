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
#include <numeric>
#include <random>
#include <unordered_set>

#include "totr/contrastive.hpp"
#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/simd/kernels.hpp"

namespace totr::contrastive {
namespace {

std::vector<double> to_double(std::span<const float> v) { return {v.begin(), v.end()}; }

struct ResolvedPair {
    std::size_t query_row;
    std::size_t positive_row;
    std::vector<std::size_t> hard_rows;
};

}  // namespace

TrainResult train_adapter(std::span<const TrainingPair> pairs, const embedding::EmbeddingMatrix& queries,
                          const embedding::EmbeddingMatrix& docs, const TrainConfig& config) {
    return train_adapter(pairs, queries, docs, config, AdapterState::identity(queries.dim(), config.tau, config.seed));
}

TrainResult train_adapter(std::span<const TrainingPair> pairs, const embedding::EmbeddingMatrix& queries,
                          const embedding::EmbeddingMatrix& docs, const TrainConfig& config, AdapterState initial) {
    if (config.batch_size == 0) throw Error(Errc::InvalidArgument, "batch size must be positive");
    if (!(config.tau > 0.0)) throw Error(Errc::InvalidArgument, "temperature must be positive");
    if (queries.dim() != docs.dim()) throw Error(Errc::DimMismatch, "query and document embeddings differ in dim");
    if (initial.dim_in != queries.dim()) throw Error(Errc::DimMismatch, "adapter dim_in differs from embeddings");

    std::vector<ResolvedPair> resolved;
    resolved.reserve(pairs.size());
    for (const auto& p : pairs) {
        auto q = queries.find(p.query_id);
        auto pos = docs.find(p.positive_id);
        if (!q || !pos) throw Error(Errc::InvalidArgument, "pair (" + p.query_id + ", " + p.positive_id + ") not in corpus");
        ResolvedPair rp{*q, *pos, {}};
        for (const auto& n : p.hard_negative_ids) {
            if (n == p.positive_id) throw Error(Errc::InvalidArgument, "positive listed as hard negative: " + n);
            auto row = docs.find(n);
            if (!row) throw Error(Errc::InvalidArgument, "hard negative not in corpus: " + n);
            rp.hard_rows.push_back(*row);
        }
        resolved.push_back(std::move(rp));
    }

    // Frozen inputs in double once, up front.
    std::vector<std::vector<double>> qv(queries.rows()), dv(docs.rows());
    for (std::size_t r = 0; r < queries.rows(); ++r) qv[r] = to_double(queries.row(r));
    for (std::size_t r = 0; r < docs.rows(); ++r) dv[r] = to_double(docs.row(r));

    TrainResult result;
    result.state = std::move(initial);
    result.state.tau = config.tau;
    result.state.seed = config.seed;
    AdapterState& state = result.state;
    std::vector<double> velocity(state.weight.size(), 0.0);
    std::vector<double> grad(state.weight.size());
    const auto& k = simd::kernels();

    std::vector<std::size_t> order(resolved.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.seed);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_sum = 0.0;
        std::size_t epoch_batches = 0;
        for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
            const std::size_t e = std::min(order.size(), b + config.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            const double scale = 1.0 / static_cast<double>(e - b);
            double batch_loss = 0.0;
            std::vector<Vec> negs;
            for (std::size_t i = b; i < e; ++i) {
                const ResolvedPair& p = resolved[order[i]];
                negs.clear();
                std::unordered_set<std::size_t> used{p.positive_row};
                for (std::size_t h : p.hard_rows) {
                    if (used.insert(h).second) negs.push_back(dv[h]);
                }
                for (std::size_t j = b; j < e; ++j) {
                    const std::size_t other = resolved[order[j]].positive_row;
                    if (used.insert(other).second) negs.push_back(dv[other]);
                }
                try {
                    batch_loss += scale * accumulate_grad(qv[p.query_row], dv[p.positive_row], negs, config.tau, state, scale, grad);
                } catch (const Error& err) {
                    if (err.code() != Errc::NumericalError) throw;
                    batch_loss = std::numeric_limits<double>::quiet_NaN();
                    break;
                }
            }
            const bool finite_grad = std::all_of(grad.begin(), grad.end(), [](double g) { return std::isfinite(g); });
            if (!std::isfinite(batch_loss) || !finite_grad) {
                result.diverged = true;
                result.step_losses.push_back(batch_loss);
                if (epoch_batches > 0) result.epoch_mean_losses.push_back(epoch_sum / static_cast<double>(epoch_batches));
                return result;
            }
            result.step_losses.push_back(batch_loss);
            epoch_sum += batch_loss;
            ++epoch_batches;

            for (std::size_t i = 0; i < velocity.size(); ++i) velocity[i] = config.momentum * velocity[i] + grad[i];
            k.axpy_f64(-config.lr, velocity.data(), state.weight.data(), state.weight.size());
            ++state.step;
        }
        if (epoch_batches > 0) result.epoch_mean_losses.push_back(epoch_sum / static_cast<double>(epoch_batches));
    }
    return result;
}

std::vector<float> apply_adapter(const AdapterState& adapter, std::span<const float> v) {
    if (v.size() != adapter.dim_in) throw Error(Errc::DimMismatch, "vector dim differs from adapter dim_in");
    std::vector<double> x(v.begin(), v.end());
    std::vector<double> u(adapter.dim_out);
    const auto& k = simd::kernels();
    for (std::size_t o = 0; o < adapter.dim_out; ++o) u[o] = k.dot_f64(adapter.weight.data() + o * adapter.dim_in, x.data(), adapter.dim_in);
    const double norm = std::sqrt(k.dot_f64(u.data(), u.data(), u.size()));
    if (!(norm > 0.0)) throw Error(Errc::ZeroVector, "adapter maps vector to zero");
    std::vector<float> out(adapter.dim_out);
    for (std::size_t o = 0; o < adapter.dim_out; ++o) out[o] = static_cast<float>(u[o] / norm);
    return out;
}

embedding::EmbeddingMatrix apply_adapter(const AdapterState& adapter, const embedding::EmbeddingMatrix& m) {
    embedding::EmbeddingMatrix out(adapter.dim_out);
    for (std::size_t r = 0; r < m.rows(); ++r) out.add_row(m.id(r), apply_adapter(adapter, m.row(r)));
    out.set_normalized(true);
    return out;
}

nlohmann::json to_json(const AdapterState& a) {
    nlohmann::json w = nlohmann::json::array();
    for (std::size_t o = 0; o < a.dim_out; ++o) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < a.dim_in; ++i) row.push_back(static_cast<float>(a.at(o, i)));
        w.push_back(std::move(row));
    }
    return nlohmann::json{{"dim_in", a.dim_in}, {"dim_out", a.dim_out}, {"tau", a.tau},
                          {"seed", a.seed},     {"step", a.step},       {"weight", std::move(w)}};
}

AdapterState adapter_from_json(const nlohmann::json& j) {
    AdapterState a;
    try {
        a.dim_in = j.at("dim_in").get<std::size_t>();
        a.dim_out = j.at("dim_out").get<std::size_t>();
        a.tau = j.value("tau", kDefaultTemperature);
        a.seed = j.value("seed", std::uint64_t{0});
        a.step = j.value("step", std::uint64_t{0});
        const auto& w = j.at("weight");
        if (!w.is_array() || w.size() != a.dim_out) throw Error(Errc::Malformed, "adapter weight has wrong row count");
        a.weight.reserve(a.dim_in * a.dim_out);
        for (const auto& row : w) {
            if (!row.is_array() || row.size() != a.dim_in) throw Error(Errc::Malformed, "adapter weight has wrong column count");
            for (const auto& v : row) a.weight.push_back(static_cast<double>(v.get<float>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Malformed, std::string("adapter json: ") + e.what());
    }
    if (!(a.tau > 0.0)) throw Error(Errc::Malformed, "adapter tau must be positive");
    for (double v : a.weight) {
        if (!std::isfinite(v)) throw Error(Errc::Malformed, "adapter weight has non-finite entries");
    }
    return a;
}

void save_adapter(const AdapterState& a, const std::filesystem::path& path) { jsonl::write_json_file(path, to_json(a), -1); }

AdapterState load_adapter(const std::filesystem::path& path) { return adapter_from_json(jsonl::read_json_file(path)); }

}  // namespace totr::contrastive
