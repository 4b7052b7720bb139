#include "cmkb/prompt.hpp"

#include <algorithm>

#include "cmkb/errors.hpp"

namespace cmkb {

namespace {

const std::map<std::string, std::string, std::less<>>& templates() {
    static const std::map<std::string, std::string, std::less<>> kTemplates = {
        {"trx.treatments.v1",
         "Subject: {{subject_name}}\n"
         "Facet: {{facet_label}}\n"
         "Include: prophylactics, antibodies, antivirals, host-directed agents, repurposed drugs, supportive care\n"
         "Exclude: vaccines\n"
         "Evidence accepted: in vivo, in vitro, animal models, human clinical trials, preprints, peer-reviewed "
         "articles\n"
         "Per treatment: mechanism_of_action, treatment_type, dosage, effectiveness, sources\n"
         "\n"
         "Sources to consult:\n"
         "{{sources}}"
         "{{literature}}"
         "\n"
         "{{output_rules}}"
         "{{field_guide}}"},
        {"toxin.classes.v1",
         "Subject: {{subject_name}} (marine toxin family)\n"
         "Facet: {{facet_label}}\n"
         "Per class: source_organisms, host_molecular_targets, analogues, toxicity, exposure_syndromes, "
         "countermeasures, sources\n"
         "\n"
         "Sources to consult:\n"
         "{{sources}}"
         "{{literature}}"
         "\n"
         "{{output_rules}}"
         "{{field_guide}}"},
        {"toxin.biothreat.v1",
         "Subject: {{subject_name}} (marine toxin family)\n"
         "Facet: {{facet_label}}\n"
         "Scope: risk communication for the public. Hazard, exposure routes and public-health relevance only.\n"
         "Never include: synthesis, extraction, purification, production, acquisition, stabilization, delivery.\n"
         "\n"
         "Sources to consult:\n"
         "{{sources}}"
         "{{literature}}"
         "\n"
         "{{output_rules}}"
         "{{field_guide}}"},
        {"rank.decision.v1",
         "Role: decision_maker\n"
         "Subject: {{subject_name}}\n"
         "Task: order countermeasures, largest mortality reduction first\n"
         "{{geography_line}}"
         "Constraints: evidence list below is closed; no new countermeasures or sources. Quantified reductions "
         "rank above unquantified ones.\n"
         "Evidence grades: high, moderate, expert_guideline, low, insufficient\n"
         "\n"
         "Evidence:\n"
         "{{evidence}}"
         "\n"
         "Output: JSON only, {\"entries\": [{\"rank\", \"countermeasure\", \"benefit\", \"evidence\", "
         "\"rationale\", \"constraints\", \"sources\"}]}.\n"},
    };
    return kTemplates;
}

}  // namespace

std::vector<std::string> template_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, _] : templates()) ids.push_back(id);
    return ids;
}

const std::string& template_text(std::string_view id) {
    const auto& all = templates();
    const auto it = all.find(id);
    if (it == all.end()) throw UnknownTemplate("unknown prompt template: " + std::string(id));
    return it->second;
}

std::string render_template(std::string_view id, const PromptVars& vars) {
    const auto& text = template_text(id);
    std::string out;
    out.reserve(text.size() * 2);
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find("{{", pos);
        if (open == std::string::npos) break;
        const auto close = text.find("}}", open + 2);
        if (close == std::string::npos) break;
        out.append(text, pos, open - pos);
        const std::string_view name(text.data() + open + 2, close - open - 2);
        const auto it = vars.find(name);
        if (it == vars.end())
            throw UnknownTemplate("template " + std::string(id) + " has no value for {{" + std::string(name) + "}}");
        out += it->second;
        pos = close + 2;
    }
    out.append(text, pos, std::string::npos);
    return out;
}

}  // namespace cmkb
