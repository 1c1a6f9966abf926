// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace clozerank::prompts {

/// The four instruction templates driving the pipeline's model calls.
/// Placeholders ({query}, {masked_query}, ...) are interpolated in a single
/// pass, so placeholder-looking text inside the substituted values is left
/// alone.
struct TemplateSet {
    std::string version;
    std::string mask_verb;    // {query}
    std::string mask_color;   // {query}
    std::string completion;   // {masked_query}, {slot_lines}
    std::string comparison;   // {query}, {masked_query}, {candidates}

    /// Built-in defaults; identical content ships under templates/v1/.
    static TemplateSet defaults();

    /// Overrides any of mask_verb.txt, mask_color.txt, completion.txt,
    /// comparison.txt found in `dir`; missing files keep the default.
    static TemplateSet load_dir(const std::filesystem::path& dir);
};

std::string interpolate(const std::string& tmpl,
                        const std::map<std::string, std::string>& values);

}  // namespace clozerank::prompts
