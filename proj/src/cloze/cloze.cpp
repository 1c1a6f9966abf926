// SPDX-License-Identifier: Apache-2.0
#include "clozerank/cloze/cloze.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::cloze {

namespace {

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

struct Span {
    size_t start;
    size_t end;  // exclusive
};

bool overlaps(const Span& a, const Span& b) {
    return a.start < b.end && b.start < a.end;
}

/// First whole-word occurrence of `token` in `text` not overlapping any
/// consumed span. Word boundaries are non-alphanumeric characters or the
/// string edges; the token itself may span several words.
std::optional<Span> find_free_occurrence(const std::string& text, const std::string& token,
                                         const std::vector<Span>& consumed) {
    if (token.empty()) return std::nullopt;
    size_t from = 0;
    while (from <= text.size()) {
        size_t pos = text.find(token, from);
        if (pos == std::string::npos) return std::nullopt;
        const size_t end = pos + token.size();
        const bool left_ok = pos == 0 || !word_char(text[pos - 1]) || !word_char(token.front());
        const bool right_ok = end == text.size() || !word_char(text[end]) || !word_char(token.back());
        if (left_ok && right_ok) {
            Span candidate{pos, end};
            bool free = std::none_of(consumed.begin(), consumed.end(),
                                     [&](const Span& s) { return overlaps(candidate, s); });
            if (free) return candidate;
        }
        from = pos + 1;
    }
    return std::nullopt;
}

bool occurs_whole_word(const std::string& text, const std::string& token) {
    return find_free_occurrence(text, token, {}).has_value();
}

struct Selection {
    Span span;
    core::SlotKind kind;
    std::string token;
};

/// Greedy left-to-right span selection shared by apply_masks (strict) and
/// generate_masked_query (lenient: unplaceable tokens reported, not fatal).
std::vector<Selection> select_spans(const std::string& text,
                                    const std::vector<std::string>& verbs,
                                    const std::vector<std::string>& colors,
                                    std::vector<std::string>* dropped) {
    std::vector<Selection> picks;
    std::vector<Span> consumed;
    auto place = [&](const std::string& token, core::SlotKind kind) {
        auto span = find_free_occurrence(text, token, consumed);
        if (!span) {
            if (dropped) {
                dropped->push_back(token);
                return;
            }
            throw MaskingError("cannot mask token \"" + token +
                               "\": no free whole-word occurrence in text");
        }
        consumed.push_back(*span);
        picks.push_back({*span, kind, token});
    };
    for (const auto& v : verbs) place(v, core::SlotKind::kVerb);
    for (const auto& c : colors) place(c, core::SlotKind::kColor);

    std::sort(picks.begin(), picks.end(),
              [](const Selection& a, const Selection& b) { return a.span.start < b.span.start; });
    return picks;
}

core::MaskedQuery build_masked(const std::string& text, const std::vector<Selection>& picks) {
    core::MaskedQuery out;
    out.original_text = text;
    std::string masked;
    size_t cursor = 0;
    for (size_t i = 0; i < picks.size(); ++i) {
        const auto& p = picks[i];
        masked.append(text, cursor, p.span.start - cursor);
        masked += (p.kind == core::SlotKind::kVerb) ? core::kVerbPlaceholder
                                                    : core::kColorPlaceholder;
        cursor = p.span.end;
        out.slots.push_back({i, p.kind, p.token, p.span.start, p.span.end});
    }
    masked.append(text, cursor, std::string::npos);
    out.masked_text = std::move(masked);
    return out;
}

}  // namespace

MaskPrompt build_mask_prompt(const std::string& text, core::SlotKind kind,
                             const prompts::TemplateSet& templates) {
    if (util::trim(text).empty()) {
        throw InvalidInputError("build_mask_prompt: empty query text");
    }
    const std::string& tmpl =
        (kind == core::SlotKind::kVerb) ? templates.mask_verb : templates.mask_color;
    MaskPrompt prompt;
    prompt.kind = kind;
    prompt.messages.push_back({"user", prompts::interpolate(tmpl, {{"query", text}}), {}});
    return prompt;
}

std::vector<std::string> parse_mask_response(const std::string& text,
                                             const std::string& response,
                                             core::SlotKind kind,
                                             std::vector<std::string>* warnings) {
    std::vector<std::string> tokens;
    for (const auto& raw_line : util::split_lines(response)) {
        const std::string line = util::trim(raw_line);
        if (!util::starts_with(line, "- ")) continue;
        const std::string token = util::strip_edge_punct(line.substr(2));
        if (token.empty() || token == "NONE") continue;
        if (std::find(tokens.begin(), tokens.end(), token) != tokens.end()) continue;
        if (!occurs_whole_word(text, token)) {
            if (warnings) {
                warnings->push_back(std::string(core::to_string(kind)) + " token \"" + token +
                                    "\" does not occur verbatim in the query; discarded");
            }
            continue;
        }
        tokens.push_back(token);
    }
    return tokens;
}

core::MaskedQuery apply_masks(const std::string& text, const std::vector<std::string>& verbs,
                              const std::vector<std::string>& colors) {
    return build_masked(text, select_spans(text, verbs, colors, nullptr));
}

std::string unmask(const core::MaskedQuery& masked) {
    std::string out;
    size_t cursor = 0;
    const std::string& m = masked.masked_text;
    for (const auto& slot : masked.slots) {
        const char* placeholder = (slot.kind == core::SlotKind::kVerb)
                                      ? core::kVerbPlaceholder
                                      : core::kColorPlaceholder;
        size_t pos = m.find(placeholder, cursor);
        if (pos == std::string::npos) {
            throw InvalidInputError("unmask: placeholder for slot " +
                                    std::to_string(slot.index) + " not found");
        }
        out.append(m, cursor, pos - cursor);
        out += slot.original_token;
        cursor = pos + std::string(placeholder).size();
    }
    out.append(m, cursor, std::string::npos);
    return out;
}

MaskOutcome generate_masked_query(const core::QueryRecord& query,
                                  backends::ChatClient& masker,
                                  const prompts::TemplateSet& templates) {
    MaskOutcome outcome;

    auto extract = [&](core::SlotKind kind, const char* stage) {
        auto prompt = build_mask_prompt(query.text, kind, templates);
        backends::ChatRequest request;
        request.messages = prompt.messages;
        request.target = backends::Role::kMasker;
        request.tag = {stage, query.query_id, ""};
        std::string response;
        try {
            response = masker.chat(request);
        } catch (const Error& e) {
            throw Error("query " + query.query_id + ": mask extraction failed: " + e.what());
        }
        return parse_mask_response(query.text, response, kind, &outcome.warnings);
    };

    auto verbs = extract(core::SlotKind::kVerb, "mask_verb");
    auto colors = extract(core::SlotKind::kColor, "mask_color");

    std::vector<std::string> dropped;
    auto picks = select_spans(query.text, verbs, colors, &dropped);
    for (const auto& token : dropped) {
        outcome.warnings.push_back("token \"" + token +
                                   "\" has no free occurrence left; dropped");
    }
    outcome.masked = build_masked(query.text, picks);
    if (outcome.masked.slots.empty()) {
        outcome.warnings.push_back("zero slots: query bypasses re-ranking");
    }
    return outcome;
}

}  // namespace clozerank::cloze
