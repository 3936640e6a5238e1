#pragma once

#include <map>
#include <string>
#include <string_view>

#include "rlvrseq/domain.hpp"

namespace rlvrseq {

struct PromptVariant {
  Task task = Task::activity;
  bool hinted = false;
};

/// Zero-padded 24h "HH:MM". Throws DomainError outside [0, 1440).
std::string format_time(int minutes);

/// Plain-text table, single-space separated, header row first, one row per id.
std::string render_table(const Instance& instance);

/// Full prompt from the embedded template for the variant's task.
/// Throws DomainError if the instance's task does not match the variant.
std::string render_prompt(const Instance& instance, const PromptVariant& variant);

/// Variant taken from the instance itself (its task and hinted flag).
std::string render_prompt(const Instance& instance);

/// Minimal template expansion: "{{name}}" substitutes a value and
/// "{{#flag}}...{{/flag}}" keeps its body only when the flag is set. A section
/// tag followed directly by a newline consumes that newline.
std::string expand_template(std::string_view tpl, const std::map<std::string, std::string>& values,
                            const std::map<std::string, bool>& flags);

}  // namespace rlvrseq
