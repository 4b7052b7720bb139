#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cmkb {

using PromptVars = std::map<std::string, std::string, std::less<>>;

std::vector<std::string> template_ids();
// Throws UnknownTemplate.
const std::string& template_text(std::string_view id);
// Substitutes every "{{name}}" with vars[name]. A placeholder without a value
// is an UnknownTemplate error so a typo never reaches a provider.
std::string render_template(std::string_view id, const PromptVars& vars);

}  // namespace cmkb
