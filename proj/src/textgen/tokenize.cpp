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

#include "totr/core/text.hpp"
#include "totr/curation.hpp"
#include "totr/textgen_metrics.hpp"

namespace totr::textgen {

std::vector<std::string> tokenize(std::string_view text) {
    return text::split_words(text::to_lower(text));
}

std::string strip_episodic_for_training(const curation::RecallRecord& record) {
    const auto pieces = curation::split_sentences(record.recall_text);
    std::vector<curation::TaggedSentence> tagged;
    tagged.reserve(pieces.size());
    const bool aligned = record.sentence_tags.size() == pieces.size();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        tagged.push_back({pieces[i], aligned ? record.sentence_tags[i] : curation::heuristic_tag(pieces[i])});
    }
    return curation::strip_episodic(tagged);
}

}  // namespace totr::textgen
