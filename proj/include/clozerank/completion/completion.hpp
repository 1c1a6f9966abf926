// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "clozerank/backends/client.hpp"
#include "clozerank/core/types.hpp"
#include "clozerank/prompts.hpp"

namespace clozerank::completion {

/// Longest fill accepted from the backend; longer answers are truncated.
inline constexpr size_t kMaxFillWords = 6;

struct ImagePayload {
    std::string media_type;
    std::string bytes;
};

/// Reads the image behind a gallery item's image_ref. Raises Error when the
/// file is missing, empty, or has no recognized image extension — before any
/// network activity.
ImagePayload load_image(const std::string& image_ref);

struct SlotManifestEntry {
    size_t index;
    core::SlotKind kind;
};

/// Fill prompt: the masked query plus exactly one image attachment, with the
/// slot list echoed in the instruction.
struct CompletionPrompt {
    std::vector<backends::ChatMessage> messages;
    std::vector<SlotManifestEntry> slot_manifest;
};

CompletionPrompt build_completion_prompt(const core::MaskedQuery& masked,
                                         const ImagePayload& image,
                                         const prompts::TemplateSet& templates);

/// Parses `SLOT i: <fill>` lines into a structurally valid Completion no
/// matter how malformed the response is: missing indices pad with UNKNOWN,
/// duplicates keep the first occurrence, out-of-range indices are ignored,
/// fills are trimmed and capped at kMaxFillWords words. Every repair is
/// recorded as a warning. `missing_out`, when given, receives the number of
/// padded slots (the repair-retry trigger).
core::Completion parse_completion_response(const core::MaskedQuery& masked,
                                           const std::string& response,
                                           size_t* missing_out = nullptr);

/// One fill call for one candidate. A parse that needed padding triggers
/// exactly one repair retry re-stating the format; the retry's parse is
/// accepted as-is. Backend and image errors propagate to the caller.
core::Completion complete_candidate(const core::QueryId& query_id,
                                    const core::MaskedQuery& masked,
                                    const core::GalleryItem& item,
                                    backends::ChatClient& completer,
                                    const prompts::TemplateSet& templates);

/// All-UNKNOWN stand-in used when a candidate's backend call fails hard.
core::Completion unknown_completion(const core::QueryId& query_id, const core::ItemId& item_id,
                                    size_t slot_count, const std::string& reason);

/// Fills every candidate in initial-ranking order. A hard failure on one
/// candidate substitutes unknown_completion instead of dropping it.
std::vector<core::Completion> complete_candidates(const core::QueryId& query_id,
                                                  const core::MaskedQuery& masked,
                                                  const std::vector<core::GalleryItem>& items,
                                                  backends::ChatClient& completer,
                                                  const prompts::TemplateSet& templates);

}  // namespace clozerank::completion
