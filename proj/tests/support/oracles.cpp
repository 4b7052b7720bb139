#include "oracles.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <unistd.h>

namespace cmkb::testing {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path data_dir() { return fs::path(CMKB_DATA_DIR); }
fs::path fixture_path() { return data_dir() / "fixture" / "kb.json"; }

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::string& fixture_text() {
    static const std::string text = read_file(fixture_path());
    return text;
}

const KnowledgeBase& fixture_kb() {
    static const KnowledgeBase kb = parse_kb(fixture_text());
    return kb;
}

TempDir::TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("cmkb-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string whitespace_canon(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    std::string out;
    while (in >> word) {
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

int grade(EvidenceStrength s) {
    static const std::map<std::string, int> kGrades = {
        {"high", 4}, {"moderate", 3}, {"expert_guideline", 2}, {"low", 1}, {"insufficient", 0}};
    return kGrades.at(std::string(to_string(s)));
}

// Larger is better.
std::tuple<int, double, int, int> oracle_key(const EvidenceItem& item) {
    const bool q = item.quantified.has_value();
    const double reduction = q ? item.quantified->control_cfr - item.quantified->treated_cfr : 0.0;
    return {q ? 1 : 0, reduction, grade(item.evidence_strength), -item.order_hint};
}

}  // namespace

std::vector<int> brute_force_rank(const std::vector<EvidenceItem>& items) {
    std::vector<std::size_t> perm(items.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> best = perm;
    auto sequence = [&](const std::vector<std::size_t>& p) {
        std::vector<std::tuple<int, double, int, int>> keys;
        for (const auto i : p) keys.push_back(oracle_key(items[i]));
        return keys;
    };
    auto best_keys = sequence(best);
    do {
        auto keys = sequence(perm);
        if (keys > best_keys) {
            best_keys = std::move(keys);
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<int> hints;
    for (const auto i : best) hints.push_back(items[i].order_hint);
    return hints;
}

// ---------------------------------------------------------------------------

bool oracle_single_valued(const std::string& path) {
    static const std::set<std::string> kSingle = {"dosage",        "mechanism_of_action", "treatment_type",
                                                  "effectiveness", "toxicity",            "biothreat_concerns"};
    const auto slash = path.rfind('/');
    return kSingle.count(slash == std::string::npos ? path : path.substr(slash + 1)) != 0;
}

OracleReport brute_force_cross_validate(const std::vector<RawClaim>& primary, const std::vector<RawClaim>& verifier) {
    OracleReport report;
    for (const auto& p : primary) {
        const auto pv = whitespace_canon(p.value);
        bool found = false;
        const RawClaim* same_path = nullptr;
        for (const auto& v : verifier) {
            if (v.path != p.path) continue;
            if (whitespace_canon(v.value) == pv) found = true;
            same_path = &v;
        }
        if (found) continue;
        if (oracle_single_valued(p.path) && same_path) {
            report.conflicting.insert({p.path, pv, whitespace_canon(same_path->value)});
        } else {
            report.missing_in_verifier.insert({p.path, pv});
        }
    }
    for (const auto& v : verifier) {
        const auto vv = whitespace_canon(v.value);
        bool found = false;
        bool same_path = false;
        for (const auto& p : primary) {
            if (p.path != v.path) continue;
            if (whitespace_canon(p.value) == vv) found = true;
            same_path = true;
        }
        if (found) continue;
        if (!(oracle_single_valued(v.path) && same_path)) report.missing_in_primary.insert({v.path, vv});
    }
    return report;
}

OracleReport as_oracle_report(const DiscrepancyReport& report) {
    OracleReport out;
    for (const auto& c : report.missing_in_verifier) out.missing_in_verifier.insert({c.field_path, c.value});
    for (const auto& c : report.missing_in_primary) out.missing_in_primary.insert({c.field_path, c.value});
    for (const auto& c : report.conflicting) out.conflicting.insert({c.field_path, c.primary_value, c.verifier_value});
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string escape(const std::string& segment) {
    std::string out;
    for (const char c : segment) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string child(const std::string& path, const std::string& segment) {
    return path.empty() ? escape(segment) : path + "/" + escape(segment);
}

bool keyed_element(const json& e, std::string& key) {
    if (e.is_string()) {
        key = e.get<std::string>();
        return true;
    }
    if (!e.is_object()) return false;
    for (const char* field : {"id", "name", "countermeasure", "panel_label", "title", "url", "source_url"}) {
        if (e.contains(field) && e[field].is_string() && !e[field].get<std::string>().empty()) {
            key = e[field].get<std::string>();
            return true;
        }
    }
    return false;
}

void flatten_into(const json& node, const std::string& path, std::map<std::string, json>& out) {
    if (node.is_object() && !node.empty()) {
        for (const auto& [k, v] : node.items()) flatten_into(v, child(path, k), out);
        return;
    }
    if (node.is_array() && !node.empty()) {
        std::vector<std::string> keys;
        std::map<std::string, int> count;
        for (const auto& e : node) {
            std::string key;
            if (!keyed_element(e, key)) {
                out[path] = node;
                return;
            }
            const int n = ++count[key];
            keys.push_back(n == 1 ? key : key + "[" + std::to_string(n) + "]");
        }
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (node[i].is_string()) {
                out[child(path, keys[i])] = node[i];
            } else {
                flatten_into(node[i], child(path, keys[i]), out);
            }
        }
        return;
    }
    out[path] = node;
}

}  // namespace

std::map<std::string, json> flatten(const json& doc) {
    std::map<std::string, json> out;
    flatten_into(doc, "", out);
    return out;
}

// ---------------------------------------------------------------------------

EvidenceItem random_item(std::mt19937& rng, int order_hint) {
    static const std::vector<double> kGrid = {0.0, 0.1, 0.2, 0.3, 0.32, 0.4, 0.5, 0.54, 0.6, 0.8, 1.0};
    static const std::vector<EvidenceStrength> kStrengths = {
        EvidenceStrength::High, EvidenceStrength::Moderate, EvidenceStrength::ExpertGuideline, EvidenceStrength::Low,
        EvidenceStrength::Insufficient};
    std::uniform_int_distribution<std::size_t> grid(0, kGrid.size() - 1);
    std::uniform_int_distribution<std::size_t> strength(0, kStrengths.size() - 1);
    std::bernoulli_distribution quantified(0.5);

    EvidenceItem item;
    item.countermeasure = "cm-" + std::to_string(order_hint);
    item.benefit_summary = "summary " + std::to_string(order_hint);
    if (quantified(rng)) {
        item.quantified = QuantifiedBenefit::from_cfr(kGrid[grid(rng)], kGrid[grid(rng)], "reported");
    }
    item.evidence_strength = kStrengths[strength(rng)];
    item.sources.push_back({"source " + std::to_string(order_hint), std::nullopt, std::nullopt});
    item.order_hint = order_hint;
    return item;
}

std::vector<EvidenceItem> random_pack_items(std::mt19937& rng, int max_items) {
    std::uniform_int_distribution<int> count(0, max_items);
    const int n = count(rng);
    std::vector<EvidenceItem> items;
    for (int i = 0; i < n; ++i) items.push_back(random_item(rng, i));
    std::shuffle(items.begin(), items.end(), rng);
    return items;
}

ExtractionTask lasv_pathogen_task() {
    return make_task(Domain::ViralTRx, "lasv", "treatments.pathogen_targeted", &fixture_kb());
}

std::vector<RawClaim> random_claims(std::mt19937& rng, int max_claims) {
    static const std::vector<std::string> kNames = {"Arevirumab-3", "Favipiravir", "LHF-535",   "Ribavirin (IV)",
                                                    "ST-193",       "Tilorone",    "Remdesivir", "hu1F5 / MBP1F5"};
    static const std::vector<std::string> kDosages = {"600 mg", "600  mg", " 600 mg ", "600mg", "1 g/day", "30 mg/kg"};
    static const std::vector<std::string> kEffects = {"improved survival", "improved  survival", "no effect"};
    const std::string prefix = "viruses/lasv/categories/pathogen_targeted";

    std::uniform_int_distribution<int> count(0, max_claims);
    std::uniform_int_distribution<std::size_t> name(0, kNames.size() - 1);
    std::uniform_int_distribution<int> kind(0, 2);
    const int n = count(rng);
    std::vector<RawClaim> out;
    std::set<std::string> used_single;
    for (int i = 0; i < n; ++i) {
        const auto& treatment = kNames[name(rng)];
        const int k = kind(rng);
        if (k == 0) {
            out.push_back({prefix, treatment});
            continue;
        }
        const std::string field = k == 1 ? "dosage" : "effectiveness";
        const auto path = prefix + "/" + escape(treatment) + "/" + field;
        if (!used_single.insert(path).second) continue;
        const auto& pool = k == 1 ? kDosages : kEffects;
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        out.push_back({path, pool[pick(rng)]});
    }
    return out;
}

ClaimSet to_claim_set(const std::vector<RawClaim>& claims, const ExtractionTask& task, const std::string& provider) {
    ClaimSet set(task);
    for (const auto& c : claims) set.insert(Claim{c.path, c.value, {}, provider, {}});
    return set;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
T& pick(std::vector<T>& list, std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> d(0, list.size() - 1);
    return list[d(rng)];
}

std::string fresh(std::mt19937& rng, const std::string& stem) {
    return stem + "-" + std::to_string(rng() % 1000000);
}

bool protected_name(const std::vector<EvidenceAnnotation>& evidence, const std::string& name) {
    return std::any_of(evidence.begin(), evidence.end(), [&](const auto& a) { return a.countermeasure == name; });
}

void edit_once(KnowledgeBase& kb, std::mt19937& rng) {
    std::uniform_int_distribution<int> op(0, 13);
    auto& virus = pick(kb.viruses, rng);
    auto& treatments = virus.categories[kAllCategories[rng() % 3]];
    auto& family = pick(kb.toxin_families, rng);
    switch (op(rng)) {
        case 0: {
            Treatment t;
            t.name = fresh(rng, "Candidate");
            t.mechanism_of_action = "Mechanism text";
            t.references.push_back({"Reference " + t.name, std::nullopt, std::nullopt});
            std::uniform_int_distribution<std::size_t> at(0, treatments.size());
            treatments.insert(treatments.begin() + static_cast<std::ptrdiff_t>(at(rng)), t);
            break;
        }
        case 1: {
            if (treatments.empty()) break;
            std::uniform_int_distribution<std::size_t> at(0, treatments.size() - 1);
            const auto i = at(rng);
            if (protected_name(virus.ranking_evidence, treatments[i].name)) break;
            treatments.erase(treatments.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
        case 2:
            if (!treatments.empty()) pick(treatments, rng).dosage = fresh(rng, "dose mg");
            break;
        case 3:
            if (treatments.size() >= 2) std::swap(treatments.front(), treatments.back());
            break;
        case 4: {
            ToxinClass c;
            c.name = fresh(rng, "Class");
            c.toxicity = "Toxicity text";
            c.source_organisms = {"Organism A"};
            std::uniform_int_distribution<std::size_t> at(0, family.classes.size());
            family.classes.insert(family.classes.begin() + static_cast<std::ptrdiff_t>(at(rng)), c);
            break;
        }
        case 5:
            if (family.classes.size() > 1 && family.ranking_evidence.empty()) family.classes.pop_back();
            break;
        case 6: {
            auto& organisms = pick(family.classes, rng).source_organisms;
            if (!organisms.empty() && rng() % 2) {
                organisms.erase(organisms.begin());
            } else {
                organisms.push_back(fresh(rng, "Organism"));
            }
            break;
        }
        case 7:
            pick(family.classes, rng).toxicity = fresh(rng, "LD50 text");
            break;
        case 8:
            if (family.biothreat_concerns && rng() % 2) {
                family.biothreat_concerns.reset();
            } else {
                family.biothreat_concerns = fresh(rng, "Public health hazard note");
            }
            break;
        case 9:
            kb.generated_at += std::chrono::seconds(1 + rng() % 86400);
            break;
        case 10:
            if (!virus.aliases.empty() && rng() % 2) {
                virus.aliases.pop_back();
            } else {
                virus.aliases.push_back(fresh(rng, "alias"));
            }
            break;
        case 11:
            if (!treatments.empty())
                pick(treatments, rng).references.push_back(
                    {fresh(rng, "Paper"), "https://example.org/" + std::to_string(rng() % 1000), std::nullopt});
            break;
        case 12: {
            if (treatments.empty()) break;
            auto& t = pick(treatments, rng);
            if (protected_name(virus.ranking_evidence, t.name)) break;
            t.name = fresh(rng, "Renamed");
            break;
        }
        case 13:
            if (!virus.ranking_evidence.empty()) pick(virus.ranking_evidence, rng).benefit_summary = fresh(rng, "Benefit");
            break;
    }
}

}  // namespace

KnowledgeBase random_edit(const KnowledgeBase& kb, std::mt19937& rng, int max_edits) {
    KnowledgeBase out = kb;
    std::uniform_int_distribution<int> count(1, max_edits);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) edit_once(out, rng);
    const auto report = validate_kb(out);
    if (!report.ok()) throw std::logic_error("random edit produced an invalid KB: " + report.findings.front().message);
    return out;
}

}  // namespace cmkb::testing
