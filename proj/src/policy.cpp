#include "cmkb/policy.hpp"

#include "cmkb/errors.hpp"

namespace cmkb {
namespace {

constexpr const char* kToxinNouns =
    "(toxins?|saxitoxins?|tetrodotoxins?|conotoxins?|palytoxins?|brevetoxins?|ciguatoxins?|maitotoxins?|venoms?)";

}  // namespace

RiskPolicy::RiskPolicy(std::vector<PolicyRule> rules) : rules_(std::move(rules)) {
    compiled_.reserve(rules_.size());
    for (const auto& rule : rules_) {
        try {
            compiled_.emplace_back(rule.pattern, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw ConfigError("policy rule \"" + rule.id + "\" has an invalid pattern: " + e.what());
        }
    }
}

std::vector<PolicyRule> RiskPolicy::default_rules() {
    const std::string nouns = kToxinNouns;
    return {
        {"procedural-howto",
         R"(\bhow\s+(to|do\s+(i|you|we)|can\s+(i|you|we|one)|would\s+(i|you|one))\s+)"
         R"((make|synthesi[sz]e|produce|manufacture|purify|isolate|extract|culture|cultivate|grow|concentrate|)"
         R"(weaponi[sz]e|aerosoli[sz]e|disperse|deploy|release|deliver|acquire|obtain|buy|purchase|order|smuggle|steal)\b)"},
        {"synthesis-instructions",
         R"(\b(synthe(sis|tic)\s+(route|pathway|protocol|procedure|steps?|scheme)|step[- ]by[- ]step|)"
         R"(reaction\s+conditions|precursors?\s+(needed|required|list)|)"
         R"((purification|extraction|isolation)\s+(protocol|procedure|steps?|method))\b)"},
        {"weaponization-instructions",
         R"(\b(to|how|and|or|steps?\s+to|ways?\s+to|methods?\s+(to|for))\s+(weaponi[sz]e|aerosoli[sz]e|disperse|deploy)\b|)"
         R"(\b(aerosoli[sz]ation|dispersal|dissemination)\s+(method|technique|protocol|parameter|device)s?\b|)"
         R"(\bdelivery\s+(system|device|method)s?\s+for\b)"},
        {"acquisition-instructions",
         R"(\b(where|how)\s+(to|can\s+(i|one|you))\s+(buy|purchase|acquire|obtain|order|source|get)\b|)"
         R"(\b(buy|purchase|acquire|obtain|order)\s+(\w+\s+){0,3})" + nouns + R"(\b|)"
         R"(\bwithout\s+(detection|being\s+detected|a\s+licen[cs]e|oversight|registration)\b)"},
        {"toxin-processing",
         R"(\b(synthesi[sz]e|purify|isolate|extract|concentrate|cultivate|mass[- ]produce|scale\s+up)\s+(\w+\s+){0,3})" +
             nouns + R"(\b)"},
    };
}

const RiskPolicy& RiskPolicy::defaults() {
    static const RiskPolicy policy(default_rules());
    return policy;
}

RiskPolicy RiskPolicy::from_json(const nlohmann::json& document) {
    if (!document.is_object() || !document.contains("rules") || !document["rules"].is_array())
        throw ConfigError("policy document needs a \"rules\" array");
    std::vector<PolicyRule> rules;
    for (const auto& r : document["rules"]) {
        if (!r.is_object() || !r.contains("id") || !r.contains("pattern") || !r["id"].is_string() ||
            !r["pattern"].is_string())
            throw ConfigError("policy rule needs string \"id\" and \"pattern\"");
        rules.push_back({r["id"].get<std::string>(), r["pattern"].get<std::string>()});
    }
    return RiskPolicy(std::move(rules));
}

PolicyVerdict RiskPolicy::check(std::string_view text) const {
    if (text.empty()) return PolicyVerdict::allow();
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
        if (std::regex_search(text.begin(), text.end(), compiled_[i])) return PolicyVerdict::block(rules_[i].id);
    }
    return PolicyVerdict::allow();
}

PolicyVerdict risk_communication_check(std::string_view text, const RiskPolicy& policy) { return policy.check(text); }

}  // namespace cmkb
