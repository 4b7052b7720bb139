#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cmkb {

struct PolicyRule {
    std::string id;
    std::string pattern;  // ECMAScript regex, matched case-insensitively
};

struct PolicyVerdict {
    bool allowed = true;
    std::string rule_id;  // set when blocked

    static PolicyVerdict allow() { return {}; }
    static PolicyVerdict block(std::string rule) { return {false, std::move(rule)}; }
};

// Denylist of procedural patterns: synthesis, weaponization and acquisition
// instructions. Descriptive hazard statements pass.
class RiskPolicy {
public:
    explicit RiskPolicy(std::vector<PolicyRule> rules);

    static const RiskPolicy& defaults();
    static std::vector<PolicyRule> default_rules();
    // {"rules": [{"id": ..., "pattern": ...}]}
    static RiskPolicy from_json(const nlohmann::json& document);

    PolicyVerdict check(std::string_view text) const;
    const std::vector<PolicyRule>& rules() const { return rules_; }

private:
    std::vector<PolicyRule> rules_;
    std::vector<std::regex> compiled_;
};

PolicyVerdict risk_communication_check(std::string_view text,
                                       const RiskPolicy& policy = RiskPolicy::defaults());

}  // namespace cmkb
