#include "cmkb/curation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "cmkb/policy.hpp"
#include "cmkb/schema_check.hpp"
#include "cmkb/text.hpp"
#include "json_reader.hpp"

namespace cmkb {

using nlohmann::json;

namespace {

constexpr std::string_view kTreatmentPrefix = "treatments.";
constexpr std::array<std::string_view, 4> kTreatmentFields = {"mechanism_of_action", "treatment_type", "dosage",
                                                              "effectiveness"};
constexpr std::array<std::string_view, 5> kClassListFacets = {"source_organisms", "host_molecular_targets",
                                                              "analogues", "exposure_syndromes", "countermeasures"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& names, std::string_view name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::optional<CategoryKind> facet_category(std::string_view facet) {
    if (facet.substr(0, kTreatmentPrefix.size()) != kTreatmentPrefix) return std::nullopt;
    return parse_category(facet.substr(kTreatmentPrefix.size()));
}

std::string domain_prefix(Domain domain) { return domain == Domain::ViralTRx ? "trx" : "toxin"; }

std::string facet_label(std::string_view facet) {
    if (const auto category = facet_category(facet)) {
        switch (*category) {
            case CategoryKind::PathogenTargeted: return "pathogen-targeted treatments";
            case CategoryKind::HostTargeted: return "host-targeted treatments";
            case CategoryKind::Combinatorial: return "combinatorial strategies";
        }
    }
    if (facet == "classes") return "toxin classes";
    return "biothreat concerns";
}

std::string render_sources(const SourceCatalog& catalog) {
    std::string out;
    for (const auto& category : catalog.categories()) {
        out += "  " + category + ":\n";
        for (const auto& entry : catalog.entries) {
            if (entry.category != category) continue;
            out += "    - " + entry.name;
            if (entry.url) out += " (" + *entry.url + ")";
            out += "\n";
        }
    }
    return out;
}

std::string field_guide(const ExtractionTask& task) {
    const auto prefix = task.path_prefix();
    std::ostringstream out;
    if (task.domain == Domain::ViralTRx) {
        out << "One claim with field_path \"" << prefix << "\" and the treatment name as value per treatment.\n"
            << "One claim per detail with field_path \"" << prefix
            << "/<treatment name>/<field>\", field being mechanism_of_action, treatment_type, dosage or "
               "effectiveness.\n";
    } else if (task.facet == "classes") {
        out << "One claim with field_path \"" << prefix << "\" and the class name as value per class.\n"
            << "One claim per list item with field_path \"" << prefix
            << "/<class name>/<facet>\", facet being source_organisms, host_molecular_targets, analogues, "
               "exposure_syndromes or countermeasures.\n"
            << "One claim with field_path \"" << prefix << "/<class name>/toxicity\" for the toxicity summary.\n";
    } else {
        out << "Exactly one claim with field_path \"" << prefix << "\".\n";
    }
    return out.str();
}

constexpr const char* kLiterature =
    "  Literature:\n"
    "    - PubMed (https://pubmed.ncbi.nlm.nih.gov/)\n"
    "    - Europe PMC (https://europepmc.org/)\n";

constexpr const char* kOutputRules =
    "Output: JSON only, {\"claims\": [{\"field_path\": ..., \"value\": ..., \"sources\": [{\"title\": ..., "
    "\"url\": ...}]}]}.\n"
    "Inside a path segment write \"~\" as \"~0\" and \"/\" as \"~1\".\n";

std::string describe(const Claim& claim) { return "- " + claim.field_path + " = \"" + claim.value + "\"\n"; }

Reference merge_key_reference(const Reference& r) { return Reference{r.title, r.url, std::nullopt}; }

void merge_references(std::vector<Reference>& into, const std::vector<Reference>& extra) {
    for (const auto& ref : extra) {
        const auto stripped = merge_key_reference(ref);
        const bool present = std::any_of(into.begin(), into.end(), [&](const Reference& r) {
            return merge_key_reference(r) == stripped;
        });
        if (!present) into.push_back(ref);
    }
}

// Rewraps a provider failure with the round that produced it, keeping its type.
[[noreturn]] void rethrow_with_round(const Error& e, const std::string& provider_id, int round) {
    const std::string message = std::string(e.what()) + " (provider " + provider_id + ", round " +
                                std::to_string(round) + ")";
    switch (e.code()) {
        case ErrorCode::ProviderUnavailable: throw ProviderUnavailable(message, e.path());
        case ErrorCode::MalformedProviderOutput: throw MalformedProviderOutput(message, e.path());
        default: throw;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Tasks

std::string ExtractionTask::key() const { return domain_prefix(domain) + ":" + subject + ":" + facet; }

std::string ExtractionTask::path_prefix() const {
    if (domain == Domain::ViralTRx) {
        const auto category = facet_category(facet);
        if (!category) throw ConfigError("unknown facet for viral_trx: " + facet);
        return join_path({"viruses", subject, "categories", std::string(to_string(*category))});
    }
    if (facet == "classes") return join_path({"toxin_families", subject, "classes"});
    if (facet == "biothreat_concerns") return join_path({"toxin_families", subject, "biothreat_concerns"});
    throw ConfigError("unknown facet for marine_toxin: " + facet);
}

const std::vector<std::string>& facets_for(Domain domain) {
    static const std::vector<std::string> kTrx = {"treatments.pathogen_targeted", "treatments.host_targeted",
                                                  "treatments.combinatorial"};
    static const std::vector<std::string> kToxin = {"classes", "biothreat_concerns"};
    return domain == Domain::ViralTRx ? kTrx : kToxin;
}

bool is_valid_facet(Domain domain, std::string_view facet) {
    const auto& all = facets_for(domain);
    return std::find(all.begin(), all.end(), facet) != all.end();
}

std::string default_template_id(Domain domain, std::string_view facet) {
    if (domain == Domain::ViralTRx) return "trx.treatments.v1";
    return facet == "biothreat_concerns" ? "toxin.biothreat.v1" : "toxin.classes.v1";
}

ExtractionTask make_task(Domain domain, std::string subject, std::string facet, const KnowledgeBase* kb) {
    if (!is_valid_facet(domain, facet))
        throw ConfigError("facet \"" + facet + "\" is not valid for " + std::string(to_string(domain)));
    ExtractionTask task;
    task.domain = domain;
    task.subject_name = subject;
    if (kb) {
        if (domain == Domain::ViralTRx) {
            if (const auto* virus = kb->find_virus(subject))
                task.subject_name = virus->name + " (" + virus->abbreviation + ")";
        } else if (const auto* family = kb->find_family(subject)) {
            task.subject_name = family->name + " (" + family->abbreviation + ")";
        }
    }
    task.subject = std::move(subject);
    task.facet = std::move(facet);
    task.sources = builtin_catalog(domain);
    task.prompt_template_id = default_template_id(domain, task.facet);
    return task;
}

std::string build_prompt(const ExtractionTask& task) {
    // Resolve the template first so an unknown id wins over other problems.
    template_text(task.prompt_template_id);
    if (!is_valid_facet(task.domain, task.facet)) throw ConfigError("invalid facet: " + task.facet);
    if (task.sources.entries.empty()) throw ConfigError("source catalog is empty for " + task.key());
    return render_template(task.prompt_template_id, {
                                                        {"subject_name", task.subject_name},
                                                        {"facet_label", facet_label(task.facet)},
                                                        {"sources", render_sources(task.sources)},
                                                        {"literature", kLiterature},
                                                        {"output_rules", kOutputRules},
                                                        {"field_guide", field_guide(task)},
                                                    });
}

// ---------------------------------------------------------------------------
// Claims

std::optional<ClaimTarget> resolve_claim_path(std::string_view field_path) {
    const auto seg = split_path(field_path);
    if (seg.size() < 3) return std::nullopt;
    for (const auto& s : seg) {
        if (s.empty()) return std::nullopt;
    }
    ClaimTarget target;
    target.entity = seg[1];

    if (seg[0] == "viruses") {
        if (seg[2] != "categories" || seg.size() < 4) return std::nullopt;
        const auto category = parse_category(seg[3]);
        if (!category) return std::nullopt;
        target.category = *category;
        if (seg.size() == 4) {
            target.kind = ClaimTarget::Kind::TreatmentList;
            target.multi_valued = true;
            return target;
        }
        if (seg.size() == 6 && contains(kTreatmentFields, seg[5])) {
            target.kind = ClaimTarget::Kind::TreatmentField;
            target.item = seg[4];
            target.field = seg[5];
            return target;
        }
        return std::nullopt;
    }

    if (seg[0] == "toxin_families") {
        if (seg.size() == 3 && seg[2] == "biothreat_concerns") {
            target.kind = ClaimTarget::Kind::Biothreat;
            return target;
        }
        if (seg[2] != "classes") return std::nullopt;
        if (seg.size() == 3) {
            target.kind = ClaimTarget::Kind::ClassList;
            target.multi_valued = true;
            return target;
        }
        if (seg.size() != 5) return std::nullopt;
        target.item = seg[3];
        target.field = seg[4];
        if (seg[4] == "toxicity") {
            target.kind = ClaimTarget::Kind::ClassToxicity;
            return target;
        }
        if (contains(kClassListFacets, seg[4])) {
            target.kind = ClaimTarget::Kind::ClassListFacet;
            target.multi_valued = true;
            return target;
        }
    }
    return std::nullopt;
}

bool is_multi_valued(std::string_view field_path) {
    const auto target = resolve_claim_path(field_path);
    return !target || target->multi_valued;
}

std::string claim_leaf_path(const Claim& claim) {
    return is_multi_valued(claim.field_path) ? append_segment(claim.field_path, claim.value) : claim.field_path;
}

namespace {

bool path_in_facet(const ExtractionTask& task, const ClaimTarget& target) {
    if (target.entity != task.subject) return false;
    using Kind = ClaimTarget::Kind;
    if (task.domain == Domain::ViralTRx) {
        const auto category = facet_category(task.facet);
        return category && (target.kind == Kind::TreatmentList || target.kind == Kind::TreatmentField) &&
               target.category == *category;
    }
    if (task.facet == "classes")
        return target.kind == Kind::ClassList || target.kind == Kind::ClassListFacet ||
               target.kind == Kind::ClassToxicity;
    return target.kind == Kind::Biothreat;
}

}  // namespace

bool ClaimSet::insert(Claim claim) {
    claim.value = canonicalize_text(claim.value);
    ClaimKey key{claim.field_path, claim.value};
    const auto it = claims_.find(key);
    if (it != claims_.end()) {
        merge_references(it->second.sources, claim.sources);
        return false;
    }
    claims_.emplace(std::move(key), std::move(claim));
    return true;
}

const Claim* ClaimSet::find(const ClaimKey& key) const {
    const auto it = claims_.find(key);
    return it == claims_.end() ? nullptr : &it->second;
}

std::vector<std::string> ClaimSet::values_at(std::string_view field_path) const {
    std::vector<std::string> values;
    for (auto it = claims_.lower_bound(ClaimKey{std::string(field_path), ""});
         it != claims_.end() && it->first.field_path == field_path; ++it)
        values.push_back(it->first.value);
    return values;
}

std::vector<Claim> ClaimSet::claims() const {
    std::vector<Claim> out;
    out.reserve(claims_.size());
    for (const auto& [_, claim] : claims_) out.push_back(claim);
    return out;
}

ClaimSet parse_claims_response(std::string_view text, const ExtractionTask& task, const std::string& provider_id,
                               Timestamp collected_at) {
    json document;
    try {
        document = detail::parse_json_text(text);
    } catch (const SyntaxError& e) {
        throw MalformedProviderOutput(e.what());
    }
    // A bare claims array is accepted as shorthand for {"claims": [...]}.
    if (document.is_array()) document = json{{"claims", std::move(document)}};
    const auto violations = provider_contract().check(document, "claims_response");
    if (!violations.empty()) throw MalformedProviderOutput("response violates claims schema: " + violations.front());

    ClaimSet set(task);
    const auto& claims = document["claims"];
    for (std::size_t i = 0; i < claims.size(); ++i) {
        const auto& item = claims[i];
        const auto where = detail::pointer_index("/claims", i);
        const auto raw_path = item["field_path"].get<std::string>();
        const auto target = resolve_claim_path(raw_path);
        if (!target) throw MalformedProviderOutput("claim path does not resolve against the schema: " + raw_path, where);
        if (!path_in_facet(task, *target))
            throw MalformedProviderOutput("claim path outside task " + task.key() + ": " + raw_path, where);

        Claim claim;
        claim.field_path = join_path(split_path(raw_path));
        claim.value = canonicalize_text(item["value"].get<std::string>());
        if (claim.value.empty()) throw MalformedProviderOutput("empty claim value at " + claim.field_path, where);
        claim.provider_id = provider_id;
        claim.collected_at = collected_at;
        if (item.contains("sources")) {
            for (const auto& source : item["sources"]) {
                Reference ref;
                ref.title = canonicalize_text(source.value("title", ""));
                if (source.contains("url")) ref.url = source["url"].get<std::string>();
                if (ref.title.empty() && (!ref.url || ref.url->empty()))
                    throw MalformedProviderOutput("source without title or url", where);
                if (ref.url && !is_absolute_url(*ref.url))
                    throw MalformedProviderOutput("source url is not absolute: " + *ref.url, where);
                claim.sources.push_back(std::move(ref));
            }
        }
        if (!target->multi_valued) {
            const auto existing = set.values_at(claim.field_path);
            if (!existing.empty() && existing.front() != claim.value)
                throw MalformedProviderOutput("two values for single-valued path " + claim.field_path, where);
        }
        set.insert(std::move(claim));
    }
    return set;
}

ClaimSet extract_claims(Provider& provider, const ExtractionTask& task, int round, const std::string& prompt,
                        const Clock& clock) {
    ProviderRequest request;
    request.purpose = RequestPurpose::Extraction;
    request.task_key = task.key();
    request.round = round;
    request.prompt = prompt.empty() ? build_prompt(task) : prompt;
    request.response_schema = provider_contract().standalone("claims_response");

    const auto& id = provider.profile().provider_id;
    std::string last_error;
    for (int attempt = 1; attempt <= 2; ++attempt) {
        request.attempt = attempt;
        try {
            const auto text = provider.complete(request);
            return parse_claims_response(text, task, id, clock());
        } catch (const MalformedProviderOutput& e) {
            last_error = e.what();
            spdlog::warn("{}: malformed output for {} (attempt {}): {}", id, task.key(), attempt, last_error);
        }
    }
    throw MalformedProviderOutput(id + ": " + last_error + " (after retry)");
}

// ---------------------------------------------------------------------------
// Cross-validation and reconciliation

DiscrepancyReport cross_validate(const ClaimSet& primary, const ClaimSet& verifier, int round) {
    if (primary.task().key() != verifier.task().key())
        throw TaskMismatch("claim sets target different tasks: " + primary.task().key() + " vs " +
                           verifier.task().key());
    DiscrepancyReport report;
    report.round = round;

    std::set<std::string> conflict_paths;
    for (const auto& [key, _] : primary) {
        if (is_multi_valued(key.field_path)) continue;
        const auto other = verifier.values_at(key.field_path);
        if (!other.empty() && other.front() != key.value) {
            report.conflicting.push_back({key.field_path, key.value, other.front()});
            conflict_paths.insert(key.field_path);
        }
    }
    for (const auto& [key, claim] : primary) {
        if (!verifier.contains(key) && !conflict_paths.count(key.field_path))
            report.missing_in_verifier.push_back(claim);
    }
    for (const auto& [key, claim] : verifier) {
        if (!primary.contains(key) && !conflict_paths.count(key.field_path))
            report.missing_in_primary.push_back(claim);
    }
    return report;
}

std::string build_round_prompt(const ExtractionTask& task, const DiscrepancyReport& report, ProviderRole side) {
    const bool primary = side == ProviderRole::PrimaryExtractor;
    const auto& theirs_only = primary ? report.missing_in_primary : report.missing_in_verifier;
    const auto& yours_only = primary ? report.missing_in_verifier : report.missing_in_primary;

    std::string out = build_prompt(task);
    out += "\nCross-validation round " + std::to_string(report.round + 1) +
           ". An independent reviewer answered the same task and the answers differ.\n";
    if (!theirs_only.empty()) {
        out += "Claims the other reviewer reported that you did not:\n";
        for (const auto& claim : theirs_only) out += describe(claim);
    }
    if (!yours_only.empty()) {
        out += "Claims you reported that the other reviewer did not confirm:\n";
        for (const auto& claim : yours_only) out += describe(claim);
    }
    if (!report.conflicting.empty()) {
        out += "Conflicting values:\n";
        for (const auto& c : report.conflicting) {
            const auto& mine = primary ? c.primary_value : c.verifier_value;
            const auto& other = primary ? c.verifier_value : c.primary_value;
            out += "- " + c.field_path + ": yours \"" + mine + "\", theirs \"" + other + "\"\n";
        }
    }
    out += "Re-check every disputed claim against the sources and return your complete corrected claim set.\n";
    return out;
}

std::string_view to_string(UnresolvedItem::Kind kind) {
    switch (kind) {
        case UnresolvedItem::Kind::MissingInVerifier: return "missing_in_verifier";
        case UnresolvedItem::Kind::MissingInPrimary: return "missing_in_primary";
        case UnresolvedItem::Kind::Conflict: return "conflict";
    }
    return "conflict";
}

ReconcileOutcome reconcile(const ExtractionTask& task, Provider& primary, Provider& verifier,
                           const ReconciliationPolicy& policy, const Clock& clock) {
    const auto& primary_id = primary.profile().provider_id;
    const auto& verifier_id = verifier.profile().provider_id;
    if (primary_id == verifier_id) throw ConfigError("primary and verifier must be distinct providers");
    if (primary.profile().role != ProviderRole::PrimaryExtractor)
        throw ConfigError(primary_id + " is not configured as primary_extractor");
    if (verifier.profile().role != ProviderRole::Verifier)
        throw ConfigError(verifier_id + " is not configured as verifier");
    if (policy.max_rounds < 1) throw ConfigError("max_rounds must be at least 1");

    auto run = [&](Provider& provider, int round, const std::string& prompt) {
        try {
            return extract_claims(provider, task, round, prompt, clock);
        } catch (const Error& e) {
            rethrow_with_round(e, provider.profile().provider_id, round);
        }
    };

    ReconcileOutcome outcome;
    outcome.claims = ClaimSet(task);
    ClaimSet p_set(task);
    ClaimSet v_set(task);
    std::map<ClaimKey, int> agreed_since;
    for (int round = 1; round <= policy.max_rounds; ++round) {
        outcome.rounds = round;
        if (round == 1) {
            const auto prompt = build_prompt(task);
            p_set = run(primary, round, prompt);
            v_set = run(verifier, round, prompt);
        } else {
            const auto& last = outcome.reports.back();
            p_set = run(primary, round, build_round_prompt(task, last, ProviderRole::PrimaryExtractor));
            v_set = run(verifier, round, build_round_prompt(task, last, ProviderRole::Verifier));
        }
        outcome.reports.push_back(cross_validate(p_set, v_set, round));

        std::map<ClaimKey, int> next;
        for (const auto& [key, _] : p_set) {
            if (!v_set.contains(key)) continue;
            const auto it = agreed_since.find(key);
            next.emplace(key, it == agreed_since.end() ? round : it->second);
        }
        agreed_since = std::move(next);
        if (outcome.reports.back().empty()) break;
    }

    for (const auto& [key, claim] : p_set) {
        const auto* other = v_set.find(key);
        if (!other) continue;
        Claim merged = claim;
        merge_references(merged.sources, other->sources);
        outcome.provenance.push_back(
            {claim_leaf_path(merged), primary_id, {verifier_id}, agreed_since.at(key), merged.collected_at});
        outcome.claims.insert(std::move(merged));
    }

    const auto& final_report = outcome.reports.back();
    if (!final_report.empty()) {
        std::vector<UnresolvedItem> items;
        for (const auto& c : final_report.missing_in_verifier)
            items.push_back({UnresolvedItem::Kind::MissingInVerifier, claim_leaf_path(c), c.value, std::nullopt});
        for (const auto& c : final_report.missing_in_primary)
            items.push_back({UnresolvedItem::Kind::MissingInPrimary, claim_leaf_path(c), std::nullopt, c.value});
        for (const auto& c : final_report.conflicting)
            items.push_back({UnresolvedItem::Kind::Conflict, c.field_path, c.primary_value, c.verifier_value});
        spdlog::info("{}: {} unresolved item(s) after {} round(s)", task.key(), items.size(), outcome.rounds);
        if (policy.on_unresolved == UnresolvedPolicy::FlagForHuman) {
            outcome.unresolved = std::move(items);
        } else {
            outcome.dropped = items.size();
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// Apply

namespace {

template <typename T>
T& ensure_named(std::vector<T>& list, const std::string& name) {
    for (auto& item : list) {
        if (canonicalize_text(item.name) == name) return item;
    }
    T created;
    created.name = name;
    list.push_back(std::move(created));
    return list.back();
}

void append_unique(std::vector<std::string>& list, const std::string& value) {
    const bool present =
        std::any_of(list.begin(), list.end(), [&](const auto& item) { return canonicalize_text(item) == value; });
    if (!present) list.push_back(value);
}

std::string& treatment_field(Treatment& t, const std::string& field) {
    if (field == "mechanism_of_action") return t.mechanism_of_action;
    if (field == "treatment_type") return t.treatment_type;
    if (field == "dosage") return t.dosage;
    return t.effectiveness;
}

std::vector<std::string>& class_list(ToxinClass& c, const std::string& facet) {
    if (facet == "source_organisms") return c.source_organisms;
    if (facet == "host_molecular_targets") return c.host_molecular_targets;
    if (facet == "analogues") return c.analogues;
    if (facet == "exposure_syndromes") return c.exposure_syndromes;
    return c.countermeasures;
}

}  // namespace

KnowledgeBase apply_claims(const KnowledgeBase& kb, const ClaimSet& claims) {
    KnowledgeBase out = kb;
    using Kind = ClaimTarget::Kind;
    for (const auto& [key, claim] : claims) {
        const auto target = resolve_claim_path(claim.field_path);
        if (!target) throw PathConflict("claim path is not a schema path: " + claim.field_path, claim.field_path);

        switch (target->kind) {
            case Kind::TreatmentList:
            case Kind::TreatmentField: {
                auto* virus = out.find_virus(target->entity);
                if (!virus) throw PathConflict("unknown virus: " + target->entity, claim.field_path);
                auto& list = virus->categories[target->category];
                auto& treatment = ensure_named(list, target->kind == Kind::TreatmentList ? claim.value : target->item);
                if (target->kind == Kind::TreatmentField) treatment_field(treatment, target->field) = claim.value;
                merge_references(treatment.references, claim.sources);
                break;
            }
            case Kind::ClassList:
            case Kind::ClassListFacet:
            case Kind::ClassToxicity: {
                auto* family = out.find_family(target->entity);
                if (!family) throw PathConflict("unknown toxin family: " + target->entity, claim.field_path);
                auto& cls = ensure_named(family->classes, target->kind == Kind::ClassList ? claim.value : target->item);
                if (target->kind == Kind::ClassListFacet) append_unique(class_list(cls, target->field), claim.value);
                if (target->kind == Kind::ClassToxicity) cls.toxicity = claim.value;
                merge_references(cls.references, claim.sources);
                break;
            }
            case Kind::Biothreat: {
                auto* family = out.find_family(target->entity);
                if (!family) throw PathConflict("unknown toxin family: " + target->entity, claim.field_path);
                const auto verdict = risk_communication_check(claim.value);
                if (!verdict.allowed)
                    throw PolicyViolation("biothreat text blocked by rule " + verdict.rule_id, claim.field_path);
                family->biothreat_concerns = claim.value;
                break;
            }
        }
    }
    auto report = validate_kb(out);
    if (!report.ok()) throw InvariantError(std::move(report.findings));
    return out;
}

// ---------------------------------------------------------------------------
// Monthly update

std::size_t UpdateLog::failures() const {
    return static_cast<std::size_t>(std::count_if(tasks.begin(), tasks.end(), [](const auto& t) { return !t.ok; }));
}

Json to_json(const Provenance& provenance) {
    return {
        {"field_path", provenance.field_path},
        {"extracted_by", provenance.extracted_by},
        {"verified_by", provenance.verified_by},
        {"rounds", provenance.rounds},
        {"collected_at", format_rfc3339(provenance.collected_at)},
    };
}

Provenance provenance_from_json(const Json& value) {
    detail::ObjectReader reader(value, "");
    Provenance p;
    p.field_path = reader.string("field_path");
    p.extracted_by = reader.string("extracted_by");
    p.verified_by = reader.string_list("verified_by");
    const auto& rounds = reader.required("rounds");
    if (!rounds.is_number_integer() || rounds.get<int>() < 1)
        throw SchemaError("rounds must be an integer >= 1", reader.child("rounds"));
    p.rounds = rounds.get<int>();
    p.collected_at = parse_rfc3339(reader.string("collected_at"));
    reader.finish();
    return p;
}

Json to_json(const UpdateLog& log) {
    json tasks = json::array();
    for (const auto& t : log.tasks) {
        json unresolved = json::array();
        for (const auto& u : t.unresolved) {
            json item = {{"kind", to_string(u.kind)}, {"field_path", u.field_path}};
            if (u.primary_value) item["primary_value"] = *u.primary_value;
            if (u.verifier_value) item["verifier_value"] = *u.verifier_value;
            unresolved.push_back(std::move(item));
        }
        json entry = {
            {"task", t.task_key}, {"ok", t.ok},           {"rounds", t.rounds}, {"applied_claims", t.applied_claims},
            {"dropped", t.dropped}, {"unresolved", unresolved},
        };
        if (!t.error.empty()) entry["error"] = t.error;
        tasks.push_back(std::move(entry));
    }
    return {{"tasks", tasks}, {"failures", log.failures()}};
}

UpdateResult monthly_update(const KnowledgeBase& kb, const std::vector<ExtractionTask>& tasks, Provider& primary,
                            Provider& verifier, const ReconciliationPolicy& policy, const Clock& clock) {
    UpdateResult result{kb, {}, {}};
    std::map<std::string, Provenance> provenance;
    for (const auto& task : tasks) {
        TaskLogEntry entry;
        entry.task_key = task.key();
        try {
            auto outcome = reconcile(task, primary, verifier, policy, clock);
            result.kb = apply_claims(result.kb, outcome.claims);
            entry.ok = true;
            entry.rounds = outcome.rounds;
            entry.applied_claims = outcome.claims.size();
            entry.unresolved = std::move(outcome.unresolved);
            entry.dropped = outcome.dropped;
            for (auto& p : outcome.provenance) provenance[p.field_path] = std::move(p);
        } catch (const Error& e) {
            entry.error = std::string(to_string(e.code())) + ": " + e.what();
            spdlog::warn("task {} failed: {}", entry.task_key, entry.error);
        }
        result.log.tasks.push_back(std::move(entry));
    }
    result.kb.generated_at = std::max(clock(), kb.generated_at + std::chrono::seconds(1));
    for (auto& [_, p] : provenance) result.provenance.push_back(std::move(p));
    return result;
}

}  // namespace cmkb
