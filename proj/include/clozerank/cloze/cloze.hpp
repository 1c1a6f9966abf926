// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "clozerank/backends/client.hpp"
#include "clozerank/core/types.hpp"
#include "clozerank/prompts.hpp"

namespace clozerank::cloze {

/// Extraction prompt for one mask kind. The original query text appears
/// verbatim exactly once in the message content.
struct MaskPrompt {
    core::SlotKind kind;
    std::vector<backends::ChatMessage> messages;
};

MaskPrompt build_mask_prompt(const std::string& text, core::SlotKind kind,
                             const prompts::TemplateSet& templates);

/// Lenient bullet-list parser for extraction responses. Keeps `- ` lines,
/// strips edge quotes/punctuation, discards tokens without a whole-word,
/// case-sensitive occurrence in `text` (recording a warning), preserves
/// response order and drops exact repeats. `NONE` or zero surviving tokens
/// yields an empty list.
std::vector<std::string> parse_mask_response(const std::string& text,
                                             const std::string& response,
                                             core::SlotKind kind,
                                             std::vector<std::string>* warnings = nullptr);

/// Replaces each token's first unconsumed whole-word occurrence (left to
/// right, verbs before colors, every occurrence consumed at most once) with
/// its placeholder, recording slots in reading order. Raises MaskingError
/// naming any token that cannot be placed.
core::MaskedQuery apply_masks(const std::string& text, const std::vector<std::string>& verbs,
                              const std::vector<std::string>& colors);

/// Substitutes slot tokens back into the masked text; inverse of apply_masks.
std::string unmask(const core::MaskedQuery& masked);

struct MaskOutcome {
    core::MaskedQuery masked;
    std::vector<std::string> warnings;
};

/// Full extraction pass: verb prompt, color prompt, substitution. Tokens that
/// survive parsing but cannot be placed (not enough free occurrences) are
/// dropped with a warning rather than failing the query. A query yielding
/// zero slots comes back flagged via a warning; downstream bypasses
/// re-ranking for it. Backend failures raise Error carrying the query id.
MaskOutcome generate_masked_query(const core::QueryRecord& query,
                                  backends::ChatClient& masker,
                                  const prompts::TemplateSet& templates);

}  // namespace clozerank::cloze
