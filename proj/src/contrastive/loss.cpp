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
#include <limits>

#include "totr/contrastive.hpp"
#include "totr/core/errors.hpp"
#include "totr/simd/kernels.hpp"

namespace totr::contrastive {
namespace {

void check_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(Errc::InvalidArgument, "temperature must be positive");
}

double logsumexp(std::span<const double> z) {
    const double m = *std::max_element(z.begin(), z.end());
    double acc = 0.0;
    for (double v : z) acc += std::exp(v - m);
    return m + std::log(acc);
}

// u = W x ; returns |u|
double map_vector(const AdapterState& a, Vec x, std::span<double> u) {
    const auto& k = simd::kernels();
    for (std::size_t o = 0; o < a.dim_out; ++o) u[o] = k.dot_f64(a.weight.data() + o * a.dim_in, x.data(), a.dim_in);
    return std::sqrt(k.dot_f64(u.data(), u.data(), a.dim_out));
}

void check_dims(const AdapterState& a, Vec q, Vec p, std::span<const Vec> negs) {
    if (a.weight.size() != a.dim_in * a.dim_out) throw Error(Errc::InvalidArgument, "adapter weight has wrong size");
    auto ok = [&](Vec v) { return v.size() == a.dim_in; };
    if (!ok(q) || !ok(p) || !std::all_of(negs.begin(), negs.end(), ok)) {
        throw Error(Errc::DimMismatch, "input dim differs from adapter dim_in");
    }
}

}  // namespace

AdapterState AdapterState::identity(std::size_t dim, double tau, std::uint64_t seed) {
    AdapterState a;
    a.dim_in = dim;
    a.dim_out = dim;
    a.weight.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) a.weight[i * dim + i] = 1.0;
    a.tau = tau;
    a.seed = seed;
    return a;
}

double phi(Vec a, Vec b, double tau) {
    check_tau(tau);
    if (a.size() != b.size()) throw Error(Errc::DimMismatch, "phi of vectors with different dims");
    const double na = std::sqrt(simd::dot(a, a));
    const double nb = std::sqrt(simd::dot(b, b));
    if (na == 0.0 || nb == 0.0) throw Error(Errc::ZeroVector, "phi with a zero vector");
    const double cos = std::clamp(simd::dot(a, b) / (na * nb), -1.0, 1.0);
    return std::exp(cos / tau);
}

double info_nce_loss(Vec query, Vec positive, std::span<const Vec> negatives, double tau) {
    check_tau(tau);
    if (query.empty()) throw Error(Errc::InvalidArgument, "empty query vector");
    auto same_dim = [&](Vec v) { return v.size() == query.size(); };
    if (!same_dim(positive) || !std::all_of(negatives.begin(), negatives.end(), same_dim)) {
        throw Error(Errc::DimMismatch, "loss inputs have different dims");
    }
    std::vector<double> logits;
    logits.reserve(negatives.size() + 1);
    logits.push_back(simd::dot(query, positive) / tau);
    for (Vec n : negatives) logits.push_back(simd::dot(query, n) / tau);
    // max(0, .) absorbs the last-ulp negative values log-sum-exp can return
    // when the positive dominates.
    return std::max(0.0, logsumexp(logits) - logits.front());
}

double adapted_loss(const AdapterState& adapter, Vec query, Vec positive, std::span<const Vec> negatives) {
    check_dims(adapter, query, positive, negatives);
    const std::size_t d = adapter.dim_out;
    auto mapped = [&](Vec x) {
        std::vector<double> u(d);
        const double n = map_vector(adapter, x, u);
        if (n == 0.0) throw Error(Errc::NumericalError, "adapter maps an input to zero");
        for (double& v : u) v /= n;
        return u;
    };
    const auto hq = mapped(query);
    const auto hp = mapped(positive);
    std::vector<std::vector<double>> hn;
    hn.reserve(negatives.size());
    for (Vec n : negatives) hn.push_back(mapped(n));
    std::vector<Vec> views(hn.begin(), hn.end());
    return info_nce_loss(hq, hp, views, adapter.tau);
}

double accumulate_grad(Vec query, Vec positive, std::span<const Vec> negatives, double tau, const AdapterState& adapter,
                       double scale, std::span<double> grad) {
    check_tau(tau);
    check_dims(adapter, query, positive, negatives);
    if (grad.size() != adapter.weight.size()) throw Error(Errc::InvalidArgument, "gradient buffer has wrong size");
    const auto& k = simd::kernels();
    const std::size_t d_out = adapter.dim_out;
    const std::size_t n_docs = negatives.size() + 1;

    // Adapted, normalized vectors: row 0 query, rows 1.. docs (positive first).
    std::vector<double> h((n_docs + 1) * d_out);
    std::vector<double> norms(n_docs + 1);
    auto input = [&](std::size_t i) -> Vec { return i == 0 ? query : (i == 1 ? positive : negatives[i - 2]); };
    for (std::size_t i = 0; i <= n_docs; ++i) {
        std::span<double> u(h.data() + i * d_out, d_out);
        norms[i] = map_vector(adapter, input(i), u);
        if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) {
            throw Error(Errc::NumericalError, "adapted vector " + std::to_string(i) + " has norm " + std::to_string(norms[i]));
        }
        for (double& v : u) v /= norms[i];
    }
    const double* hq = h.data();

    std::vector<double> logits(n_docs);
    for (std::size_t j = 0; j < n_docs; ++j) logits[j] = k.dot_f64(hq, h.data() + (j + 1) * d_out, d_out) / tau;
    const double lse = logsumexp(logits);
    const double loss = std::max(0.0, lse - logits[0]);
    if (!std::isfinite(loss)) throw Error(Errc::NumericalError, "non-finite loss (lse=" + std::to_string(lse) + ")");

    // dL/ds_j = (softmax_j - [j == 0]) / tau
    std::vector<double> gs(n_docs);
    for (std::size_t j = 0; j < n_docs; ++j) gs[j] = (std::exp(logits[j] - lse) - (j == 0 ? 1.0 : 0.0)) / tau;

    // Gradients with respect to the normalized vectors.
    std::vector<double> gh((n_docs + 1) * d_out, 0.0);
    for (std::size_t j = 0; j < n_docs; ++j) {
        const double* hj = h.data() + (j + 1) * d_out;
        k.axpy_f64(gs[j], hj, gh.data(), d_out);
        k.axpy_f64(gs[j], hq, gh.data() + (j + 1) * d_out, d_out);
    }

    // Through normalization, u -> u/|u|: g_u = (g_h - <h, g_h> h) / |u|,
    // then dL/dW += g_u x^T.
    std::vector<double> gu(d_out);
    for (std::size_t i = 0; i <= n_docs; ++i) {
        const double* hi = h.data() + i * d_out;
        const double* ghi = gh.data() + i * d_out;
        const double proj = k.dot_f64(hi, ghi, d_out);
        for (std::size_t o = 0; o < d_out; ++o) gu[o] = (ghi[o] - proj * hi[o]) / norms[i];
        const Vec x = input(i);
        for (std::size_t o = 0; o < d_out; ++o) {
            const double g = scale * gu[o];
            if (g != 0.0) k.axpy_f64(g, x.data(), grad.data() + o * adapter.dim_in, adapter.dim_in);
        }
    }
    return loss;
}

LossAndGrad info_nce_grad(Vec query, Vec positive, std::span<const Vec> negatives, double tau, const AdapterState& adapter) {
    LossAndGrad out;
    out.grad.assign(adapter.weight.size(), 0.0);
    out.loss = accumulate_grad(query, positive, negatives, tau, adapter, 1.0, out.grad);
    for (double g : out.grad) {
        if (!std::isfinite(g)) throw Error(Errc::NumericalError, "non-finite gradient entry");
    }
    return out;
}

}  // namespace totr::contrastive
