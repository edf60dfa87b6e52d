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
#include <map>

#include "totr/core/errors.hpp"
#include "totr/embedding.hpp"
#include "totr/textgen_metrics.hpp"

namespace totr::textgen {

double embed_f1(std::string_view candidate, std::string_view reference, clients::EmbedderClient& embedder) {
    const auto c = tokenize(candidate);
    const auto r = tokenize(reference);
    if (c.empty() || r.empty()) throw Error(Errc::InvalidArgument, "embed_f1 needs tokens on both sides");

    std::map<std::string, std::size_t> slot;
    std::vector<clients::EmbedItem> items;
    for (const auto* side : {&c, &r}) {
        for (const auto& t : *side) {
            if (slot.emplace(t, items.size()).second) items.push_back({t, {}});
        }
    }
    const auto reply = embedder.embed(std::nullopt, items);
    if (reply.vectors.size() != items.size()) throw Error(Errc::Malformed, "embedder returned wrong row count");
    std::vector<std::vector<float>> unit;
    unit.reserve(items.size());
    for (const auto& v : reply.vectors) {
        const double n = embedding::l2_norm(v);
        if (!(n > 0.0)) throw Error(Errc::ZeroVector, "embedder returned a zero vector for a token");
        std::vector<float> u(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) u[i] = static_cast<float>(v[i] / n);
        unit.push_back(std::move(u));
    }

    auto sim = [&](const std::string& a, const std::string& b) {
        if (a == b) return 1.0;
        return std::clamp(embedding::cosine(unit[slot[a]], unit[slot[b]]), 0.0, 1.0);
    };
    auto greedy = [&](const std::vector<std::string>& from, const std::vector<std::string>& to) {
        double sum = 0.0;
        for (const auto& a : from) {
            double best = 0.0;
            for (const auto& b : to) best = std::max(best, sim(a, b));
            sum += best;
        }
        return sum / static_cast<double>(from.size());
    };
    const double p = greedy(c, r);
    const double rec = greedy(r, c);
    return p + rec > 0.0 ? 2.0 * p * rec / (p + rec) : 0.0;
}

ScoreReport score_pair(std::string_view candidate, std::string_view reference, clients::EmbedderClient* embedder) {
    ScoreReport s;
    const std::string ref(reference);
    s.bleu = bleu(candidate, std::span<const std::string>(&ref, 1));
    s.rouge1 = rouge_n(candidate, reference, 1).f1;
    s.rouge2 = rouge_n(candidate, reference, 2).f1;
    s.rougeL = rouge_l(candidate, reference).f1;
    if (embedder) s.embed_f1 = embed_f1(candidate, reference, *embedder);
    return s;
}

nlohmann::json to_json(const ScoreReport& r) {
    nlohmann::json j{{"bleu", r.bleu}, {"rouge1", r.rouge1}, {"rouge2", r.rouge2}, {"rougeL", r.rougeL}};
    j["embed_f1"] = r.embed_f1 ? nlohmann::json(*r.embed_f1) : nlohmann::json(nullptr);
    return j;
}

}  // namespace totr::textgen
