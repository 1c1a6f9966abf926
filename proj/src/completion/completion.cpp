// SPDX-License-Identifier: Apache-2.0
#include "clozerank/completion/completion.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <sstream>

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::completion {

namespace {

std::string media_type_for(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".png") return "image/png";
    if (ext == ".webp") return "image/webp";
    if (ext == ".bmp") return "image/bmp";
    if (ext == ".gif") return "image/gif";
    throw Error("unrecognized image extension: " + path.string());
}

bool iequals_unknown(const std::string& s) {
    if (s.size() != 7) return false;
    static constexpr const char* kLower = "unknown";
    for (size_t i = 0; i < 7; ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != kLower[i]) return false;
    }
    return true;
}

/// "SLOT <i>:" prefix parser; returns false when the line is anything else.
bool parse_slot_line(const std::string& line, size_t* index, std::string* fill) {
    std::string t = util::trim(line);
    if (!util::starts_with(t, "SLOT")) return false;
    size_t pos = 4;
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    size_t digits_start = pos;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos == digits_start) return false;
    size_t idx = 0;
    try {
        idx = std::stoul(t.substr(digits_start, pos - digits_start));
    } catch (...) {
        return false;
    }
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos >= t.size() || t[pos] != ':') return false;
    *index = idx;
    *fill = util::trim(t.substr(pos + 1));
    return true;
}

constexpr const char* kRepairInstruction =
    "Your previous answer did not follow the required format. Answer again with exactly "
    "one line per placeholder, nothing else, in this format:\n"
    "SLOT <index>: <word or UNKNOWN>";

}  // namespace

ImagePayload load_image(const std::string& image_ref) {
    const std::filesystem::path path(image_ref);
    ImagePayload payload;
    payload.media_type = media_type_for(path);
    payload.bytes = util::read_file(path);
    if (payload.bytes.empty()) throw Error("empty image file: " + image_ref);
    return payload;
}

CompletionPrompt build_completion_prompt(const core::MaskedQuery& masked,
                                         const ImagePayload& image,
                                         const prompts::TemplateSet& templates) {
    if (masked.slots.empty()) {
        throw InvalidInputError("build_completion_prompt: masked query has zero slots");
    }
    if (image.bytes.empty()) {
        throw InvalidInputError("build_completion_prompt: empty image payload");
    }

    CompletionPrompt prompt;
    std::ostringstream slot_lines;
    for (const auto& slot : masked.slots) {
        prompt.slot_manifest.push_back({slot.index, slot.kind});
        if (slot.index > 0) slot_lines << '\n';
        slot_lines << "SLOT " << slot.index << ": <" << core::to_string(slot.kind) << ">";
    }

    backends::ChatMessage msg;
    msg.role = "user";
    msg.text = prompts::interpolate(templates.completion,
                                    {{"masked_query", masked.masked_text},
                                     {"slot_lines", slot_lines.str()}});
    msg.image = backends::ImagePart{image.media_type, util::base64_encode(image.bytes)};
    prompt.messages.push_back(std::move(msg));
    return prompt;
}

core::Completion parse_completion_response(const core::MaskedQuery& masked,
                                           const std::string& response,
                                           size_t* missing_out) {
    const size_t n = masked.slots.size();
    core::Completion out;
    out.raw_response = response;
    out.fills.assign(n, "");
    std::vector<bool> seen(n, false);

    for (const auto& line : util::split_lines(response)) {
        size_t index = 0;
        std::string fill;
        if (!parse_slot_line(line, &index, &fill)) continue;
        if (index >= n) {
            out.warnings.push_back("SLOT " + std::to_string(index) +
                                   " is out of range; ignored");
            continue;
        }
        if (seen[index]) {
            out.warnings.push_back("duplicate SLOT " + std::to_string(index) +
                                   " line ignored (first kept)");
            continue;
        }
        seen[index] = true;
        if (fill.empty()) {
            out.warnings.push_back("empty fill for SLOT " + std::to_string(index) +
                                   "; treated as UNKNOWN");
            fill = core::kUnknown;
        } else if (iequals_unknown(fill)) {
            fill = core::kUnknown;
        } else {
            auto words = util::split_words(fill);
            if (words.size() > kMaxFillWords) {
                words.resize(kMaxFillWords);
                std::string truncated;
                for (size_t i = 0; i < words.size(); ++i) {
                    if (i) truncated += ' ';
                    truncated += words[i];
                }
                out.warnings.push_back("fill for SLOT " + std::to_string(index) +
                                       " truncated to " + std::to_string(kMaxFillWords) +
                                       " words");
                fill = truncated;
            }
        }
        out.fills[index] = fill;
    }

    size_t missing = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!seen[i]) {
            ++missing;
            out.fills[i] = core::kUnknown;
            out.warnings.push_back("missing SLOT " + std::to_string(i) +
                                   "; padded with UNKNOWN");
        }
    }
    if (missing_out) *missing_out = missing;
    return out;
}

core::Completion complete_candidate(const core::QueryId& query_id,
                                    const core::MaskedQuery& masked,
                                    const core::GalleryItem& item,
                                    backends::ChatClient& completer,
                                    const prompts::TemplateSet& templates) {
    const ImagePayload payload = load_image(item.image_ref);
    const CompletionPrompt prompt = build_completion_prompt(masked, payload, templates);

    backends::ChatRequest request;
    request.messages = prompt.messages;
    request.target = backends::Role::kCompleter;
    request.tag = {"complete", query_id, item.item_id};

    std::string response = completer.chat(request);
    size_t missing = 0;
    core::Completion result = parse_completion_response(masked, response, &missing);

    if (missing > 0) {
        backends::ChatRequest retry = request;
        retry.messages.push_back({"assistant", response, {}});
        retry.messages.push_back({"user", kRepairInstruction, {}});
        std::string second = completer.chat(retry);
        result = parse_completion_response(masked, second, nullptr);
        result.warnings.push_back("repair retry issued after incomplete answer");
    }

    result.query_id = query_id;
    result.item_id = item.item_id;
    return result;
}

core::Completion unknown_completion(const core::QueryId& query_id, const core::ItemId& item_id,
                                    size_t slot_count, const std::string& reason) {
    core::Completion out;
    out.query_id = query_id;
    out.item_id = item_id;
    out.fills.assign(slot_count, core::kUnknown);
    out.warnings.push_back(reason);
    return out;
}

std::vector<core::Completion> complete_candidates(const core::QueryId& query_id,
                                                  const core::MaskedQuery& masked,
                                                  const std::vector<core::GalleryItem>& items,
                                                  backends::ChatClient& completer,
                                                  const prompts::TemplateSet& templates) {
    std::vector<core::Completion> out;
    out.reserve(items.size());
    for (const auto& item : items) {
        try {
            out.push_back(complete_candidate(query_id, masked, item, completer, templates));
        } catch (const Error& e) {
            out.push_back(unknown_completion(query_id, item.item_id, masked.slots.size(),
                                             std::string("candidate failed: ") + e.what()));
        }
    }
    return out;
}

}  // namespace clozerank::completion
