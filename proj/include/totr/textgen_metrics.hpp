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

// Text-generation scores (BLEU, ROUGE, embedding-greedy F1) and the
// prompt recall ranking harness.

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "totr/clients.hpp"
#include "totr/curation.hpp"

namespace totr::textgen {

/// Lowercase, then split on anything that is not an ASCII letter or digit.
/// Bytes >= 0x80 are kept as word bytes so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Clipped n-gram statistics for one candidate against its references.
struct BleuStats {
    std::vector<std::size_t> matches;  // per order, clipped
    std::vector<std::size_t> totals;   // candidate n-grams per order
    std::size_t cand_len = 0;
    std::size_t ref_len = 0;  // closest reference length, shorter on ties
};

BleuStats bleu_stats(std::span<const std::string> cand_tokens, std::span<const std::vector<std::string>> refs_tokens,
                     std::size_t max_n);

/// Geometric mean over the orders the candidate actually has n-grams for,
/// times the brevity penalty. No smoothing.
double bleu_from_stats(const BleuStats& s);

double bleu(std::string_view candidate, std::span<const std::string> references, std::size_t max_n = 4);

/// Sums statistics over all pairs before combining.
double corpus_bleu(std::span<const std::string> candidates, std::span<const std::vector<std::string>> references,
                   std::size_t max_n = 4);

Prf rouge_n(std::string_view candidate, std::string_view reference, std::size_t n);
Prf rouge_l(std::string_view candidate, std::string_view reference);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Greedy max-cosine token matching in both directions. Tokens are embedded
/// one per item with no instruction. Identical token strings score 1.
double embed_f1(std::string_view candidate, std::string_view reference, clients::EmbedderClient& embedder);

struct ScoreReport {
    double bleu = 0.0;
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
    std::optional<double> embed_f1;
};

ScoreReport score_pair(std::string_view candidate, std::string_view reference, clients::EmbedderClient* embedder = nullptr);

nlohmann::json to_json(const ScoreReport& r);

// --- prompt recall ranking ---

inline constexpr std::size_t kPrrCandidates = 5;

struct PrrInstance {
    std::string video_id;
    std::array<std::string, kPrrCandidates> candidate_prompts;
    std::size_t gold_index = 0;
};

PrrInstance prr_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PrrInstance& p);

extern const std::string_view kPrrInstruction;

/// Instruction, a blank line, then "Option n: <text>" lines numbered from 1.
std::string prr_prompt(const PrrInstance& instance);

/// Zero-based option index from a reply such as {"answer": "<Option 3>"},
/// {"answer": "option 3"} or {"answer": 3}. nullopt when nothing usable.
std::optional<std::size_t> parse_prr_answer(std::string_view reply);

struct PrrOptions {
    int retries = 1;  // extra attempts after an unparseable reply
    std::chrono::milliseconds min_interval{0};
};

struct PrrOutcome {
    std::string video_id;
    std::optional<std::size_t> predicted;
    std::size_t gold_index = 0;
    bool correct = false;
    int attempts = 0;
};

struct PrrReport {
    std::size_t n = 0;
    std::size_t correct = 0;
    std::size_t unparseable = 0;
    double accuracy = 0.0;
    std::vector<PrrOutcome> outcomes;
};

/// Scene images come from assets_root/<video_id>. Missing assets throw.
PrrReport prr_run(std::span<const PrrInstance> instances, const std::filesystem::path& assets_root,
                  clients::JudgeClient& judge, const PrrOptions& options = {});

nlohmann::json to_json(const PrrReport& r);

/// Recall text minus sentences tagged Episodic. Falls back to heuristic tags
/// when the stored tags do not line up with the sentence split.
std::string strip_episodic_for_training(const curation::RecallRecord& record);

}  // namespace totr::textgen
