// SPDX-License-Identifier: Apache-2.0
#include "clozerank/prompts.hpp"

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::prompts {

namespace {

constexpr const char* kMaskVerb =
    "You label action words in a sentence.\n"
    "\n"
    "Sentence: {query}\n"
    "\n"
    "List every verb that describes an action performed by, or happening to, a person\n"
    "in the sentence. Quote each verb exactly as it is written in the sentence, without\n"
    "changing its tense or form. Answer with one verb per line, each line starting with\n"
    "\"- \". If the sentence contains no such verb, answer with the single word NONE.\n";

constexpr const char* kMaskColor =
    "You label color words in a sentence.\n"
    "\n"
    "Sentence: {query}\n"
    "\n"
    "List every color term that describes the person or their surroundings in the\n"
    "sentence. Quote each color term exactly as it is written in the sentence. Answer\n"
    "with one term per line, each line starting with \"- \". If the sentence contains\n"
    "no color term, answer with the single word NONE.\n";

constexpr const char* kCompletion =
    "Look at the attached image. The sentence below describes it, but some words were\n"
    "removed and replaced with <VERB> or <COLOR> placeholders.\n"
    "\n"
    "Masked sentence: {masked_query}\n"
    "\n"
    "Fill in each placeholder using only what is visible in the image. The placeholders\n"
    "are numbered in reading order:\n"
    "{slot_lines}\n"
    "\n"
    "Answer with exactly one line per placeholder, in this format:\n"
    "SLOT <index>: <word or UNKNOWN>\n"
    "\n"
    "Keep each answer short (at most six words). If the image gives no visual evidence\n"
    "for a placeholder, answer UNKNOWN for it. Do not add any other lines.\n";

constexpr const char* kComparison =
    "You compare image descriptions against a query.\n"
    "\n"
    "Original query: {query}\n"
    "Masked query: {masked_query}\n"
    "\n"
    "Each candidate below filled the masked placeholders from a different image:\n"
    "\n"
    "{candidates}\n"
    "\n"
    "For each candidate, count how many filled slots semantically match the words they\n"
    "replaced in the original query. Judge meaning, not spelling: verbs with equivalent\n"
    "meaning count as matches (for example \"balancing\" and \"sliding\" when both\n"
    "describe the same behavior), and colors with close hues count as matches (for\n"
    "example \"gray\" and \"dark\" on the same item). UNKNOWN never matches. Then rank\n"
    "the candidates from most to fewest matching slots.\n"
    "\n"
    "Answer with exactly one line starting with \"RANKING:\" followed by the candidate\n"
    "ids from best to worst, with \">\" between strictly ordered ids and \"=\" between\n"
    "ids whose answers are equally good. Example: RANKING: id2 > id1 = id3\n"
    "After that line you may add a short explanation of your decision.\n";

void maybe_load(const std::filesystem::path& file, std::string& target) {
    if (std::filesystem::exists(file)) target = util::read_file(file);
}

}  // namespace

TemplateSet TemplateSet::defaults() {
    return {"v1", kMaskVerb, kMaskColor, kCompletion, kComparison};
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw ConfigError("template directory not found: " + dir.string());
    }
    TemplateSet set = defaults();
    set.version = "custom:" + dir.string();
    maybe_load(dir / "mask_verb.txt", set.mask_verb);
    maybe_load(dir / "mask_color.txt", set.mask_color);
    maybe_load(dir / "completion.txt", set.completion);
    maybe_load(dir / "comparison.txt", set.comparison);
    return set;
}

std::string interpolate(const std::string& tmpl,
                        const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    size_t pos = 0;
    while (pos < tmpl.size()) {
        size_t open = tmpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        size_t close = tmpl.find('}', open + 1);
        if (close == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        std::string name = tmpl.substr(open + 1, close - open - 1);
        auto it = values.find(name);
        if (it == values.end()) {
            // Not one of ours; keep the braces as literal text.
            out.append(tmpl, pos, close + 1 - pos);
        } else {
            out.append(tmpl, pos, open - pos);
            out.append(it->second);
        }
        pos = close + 1;
    }
    return out;
}

}  // namespace clozerank::prompts
