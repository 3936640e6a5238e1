#include "rlvrseq/prompt.hpp"

#include <cstdio>

#include "rlvrseq/prompt_templates.hpp"

namespace rlvrseq {

std::string format_time(int minutes) {
  if (minutes < 0 || minutes >= 24 * 60) {
    throw DomainError("time " + std::to_string(minutes) + " is outside one day");
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

std::string render_table(const Instance& instance) {
  std::string out;
  if (const auto* act = std::get_if<ActivityInstance>(&instance)) {
    out += "ID Start End\n";
    for (const auto& a : act->activities) {
      out += std::to_string(a.id) + ' ' + format_time(a.start) + ' ' + format_time(a.finish) + '\n';
    }
  } else {
    out += "ID Value\n";
    for (const auto& r : std::get<LisInstance>(instance).rows) {
      out += std::to_string(r.id) + ' ' + std::to_string(r.value) + '\n';
    }
  }
  return out;
}

std::string expand_template(std::string_view tpl, const std::map<std::string, std::string>& values,
                            const std::map<std::string, bool>& flags) {
  std::string out;
  out.reserve(tpl.size() + 256);
  // Depth of sections whose flag is off; text is dropped while > 0.
  int suppressed = 0;
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const std::size_t open = tpl.find("{{", pos);
    if (open == std::string_view::npos) {
      if (suppressed == 0) out.append(tpl.substr(pos));
      break;
    }
    if (suppressed == 0) out.append(tpl.substr(pos, open - pos));
    const std::size_t close = tpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw DomainError("unterminated template tag");
    const std::string_view tag = tpl.substr(open + 2, close - open - 2);
    pos = close + 2;

    if (!tag.empty() && (tag.front() == '#' || tag.front() == '/')) {
      if (pos < tpl.size() && tpl[pos] == '\n') ++pos;
      const std::string name(tag.substr(1));
      auto it = flags.find(name);
      if (it == flags.end()) throw DomainError("template flag '" + name + "' not provided");
      if (tag.front() == '#') {
        if (suppressed > 0 || !it->second) ++suppressed;
      } else if (suppressed > 0) {
        --suppressed;
      }
      continue;
    }
    const std::string name(tag);
    auto it = values.find(name);
    if (it == values.end()) throw DomainError("template value '" + name + "' not provided");
    if (suppressed == 0) out += it->second;
  }
  return out;
}

std::string render_prompt(const Instance& instance, const PromptVariant& variant) {
  if (task_of(instance) != variant.task) {
    throw DomainError("prompt variant is for " + std::string(to_string(variant.task)) +
                      " but the instance is " + std::string(to_string(task_of(instance))));
  }
  const char* tpl = variant.task == Task::activity ? templates::activity_prompt
                                                   : templates::lis_prompt;
  return expand_template(tpl, {{"table", render_table(instance)}}, {{"hint", variant.hinted}});
}

std::string render_prompt(const Instance& instance) {
  return render_prompt(instance, PromptVariant{task_of(instance), is_hinted(instance)});
}

}  // namespace rlvrseq
