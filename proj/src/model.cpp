#include "cmkb/model.hpp"

#include <algorithm>
#include <set>

#include "cmkb/policy.hpp"
#include "cmkb/text.hpp"
#include "embedded.hpp"
#include "json_reader.hpp"

namespace cmkb {

using detail::ObjectReader;
using detail::pointer_child;
using detail::pointer_index;

// ---------------------------------------------------------------------------
// Enumerations

std::string_view to_string(CategoryKind kind) {
    switch (kind) {
        case CategoryKind::PathogenTargeted: return "pathogen_targeted";
        case CategoryKind::HostTargeted: return "host_targeted";
        case CategoryKind::Combinatorial: return "combinatorial";
    }
    return "";
}

std::string_view label(CategoryKind kind) {
    switch (kind) {
        case CategoryKind::PathogenTargeted: return "PathogenTargeted";
        case CategoryKind::HostTargeted: return "HostTargeted";
        case CategoryKind::Combinatorial: return "Combinatorial";
    }
    return "";
}

std::optional<CategoryKind> parse_category(std::string_view wire_name) {
    for (const auto kind : kAllCategories) {
        if (to_string(kind) == wire_name) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(EvidenceStrength strength) {
    switch (strength) {
        case EvidenceStrength::High: return "high";
        case EvidenceStrength::Moderate: return "moderate";
        case EvidenceStrength::ExpertGuideline: return "expert_guideline";
        case EvidenceStrength::Low: return "low";
        case EvidenceStrength::Insufficient: return "insufficient";
    }
    return "";
}

std::optional<EvidenceStrength> parse_evidence_strength(std::string_view wire_name) {
    for (const auto s : {EvidenceStrength::High, EvidenceStrength::Moderate, EvidenceStrength::ExpertGuideline,
                         EvidenceStrength::Low, EvidenceStrength::Insufficient}) {
        if (to_string(s) == wire_name) return s;
    }
    return std::nullopt;
}

std::string_view to_string(Domain domain) {
    return domain == Domain::ViralTRx ? "viral_trx" : "marine_toxin";
}

std::optional<Domain> parse_domain(std::string_view text) {
    if (text == "viral_trx" || text == "trx") return Domain::ViralTRx;
    if (text == "marine_toxin" || text == "toxin") return Domain::MarineToxin;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lookups

namespace {

template <typename Range>
auto* find_by_id(Range& range, std::string_view id) {
    const auto it = std::find_if(range.begin(), range.end(), [&](const auto& e) { return e.id == id; });
    return it == range.end() ? nullptr : &*it;
}

}  // namespace

const VirusEntry* KnowledgeBase::find_virus(std::string_view id) const { return find_by_id(viruses, id); }
const ToxinFamily* KnowledgeBase::find_family(std::string_view id) const { return find_by_id(toxin_families, id); }
VirusEntry* KnowledgeBase::find_virus(std::string_view id) { return find_by_id(viruses, id); }
ToxinFamily* KnowledgeBase::find_family(std::string_view id) { return find_by_id(toxin_families, id); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

FigureRef figure_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    FigureRef f;
    f.panel_label = r.string("panel_label");
    f.description = r.string("description");
    f.source_url = r.string("source_url");
    r.finish();
    return f;
}

std::vector<FigureRef> figures_from_json(const Json& value, const std::string& path) {
    ObjectReader::as_array(value, path);
    std::vector<FigureRef> out;
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(figure_from_json(value[i], pointer_index(path, i)));
    return out;
}

Treatment treatment_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    Treatment t;
    t.name = r.string("name");
    t.mechanism_of_action = r.string("mechanism_of_action");
    t.treatment_type = r.string("treatment_type");
    t.dosage = r.string("dosage");
    t.effectiveness = r.string("effectiveness");
    t.outcome_figures = figures_from_json(r.required("outcome_figures"), r.child("outcome_figures"));
    t.references = references_from_json(r.required("references"), r.child("references"));
    r.finish();
    return t;
}

EvidenceAnnotation annotation_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    EvidenceAnnotation a;
    a.countermeasure = r.string("countermeasure");
    a.benefit_summary = r.string("benefit_summary");
    if (const auto* q = r.optional("quantified")) {
        ObjectReader qr(*q, r.child("quantified"));
        QuantifiedOutcome outcome;
        outcome.treated_cfr = qr.number("treated_cfr");
        outcome.control_cfr = qr.number("control_cfr");
        outcome.reported = qr.optional_string("reported").value_or("");
        qr.finish();
        a.quantified = outcome;
    }
    const std::string strength = r.string("evidence_strength");
    const auto parsed = parse_evidence_strength(strength);
    if (!parsed) {
        throw SchemaError("unknown evidence_strength \"" + strength + "\"", r.child("evidence_strength"));
    }
    a.evidence_strength = *parsed;
    a.rationale_facts = r.optional_string_list("rationale_facts");
    a.constraints = r.optional_string("constraints").value_or("");
    if (const auto* s = r.optional("sources")) a.sources = references_from_json(*s, r.child("sources"));
    r.finish();
    return a;
}

std::vector<EvidenceAnnotation> annotations_from_json(const Json* value, const std::string& path) {
    std::vector<EvidenceAnnotation> out;
    if (!value) return out;
    ObjectReader::as_array(*value, path);
    for (std::size_t i = 0; i < value->size(); ++i)
        out.push_back(annotation_from_json((*value)[i], pointer_index(path, i)));
    return out;
}

VirusEntry virus_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    VirusEntry v;
    v.id = r.string("id");
    v.name = r.string("name");
    v.abbreviation = r.string("abbreviation");
    v.aliases = r.optional_string_list("aliases");

    {
        ObjectReader nc(r.required("native_course"), r.child("native_course"));
        v.native_course.survival_figures = figures_from_json(nc.required("survival_figures"), nc.child("survival_figures"));
        v.native_course.viremia_figures = figures_from_json(nc.required("viremia_figures"), nc.child("viremia_figures"));
        v.native_course.references = references_from_json(nc.required("references"), nc.child("references"));
        nc.finish();
    }

    const Json& categories = r.required("categories");
    const std::string cat_path = r.child("categories");
    if (!categories.is_object()) throw SchemaError("expected object at " + cat_path, cat_path);
    for (const auto& [key, list] : categories.items()) {
        const auto kind = parse_category(key);
        const std::string list_path = pointer_child(cat_path, key);
        if (!kind) throw SchemaError("unknown category \"" + key + "\"", list_path);
        ObjectReader::as_array(list, list_path);
        auto& treatments = v.categories[*kind];
        for (std::size_t i = 0; i < list.size(); ++i)
            treatments.push_back(treatment_from_json(list[i], pointer_index(list_path, i)));
    }

    v.ranking_evidence = annotations_from_json(r.optional("ranking_evidence"), r.child("ranking_evidence"));
    r.finish();
    return v;
}

ToxinClass class_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    ToxinClass c;
    c.name = r.string("name");
    c.source_organisms = r.string_list("source_organisms");
    c.host_molecular_targets = r.string_list("host_molecular_targets");
    c.analogues = r.string_list("analogues");
    c.toxicity = r.string("toxicity");
    c.exposure_syndromes = r.string_list("exposure_syndromes");
    c.countermeasures = r.string_list("countermeasures");
    c.references = references_from_json(r.required("references"), r.child("references"));
    r.finish();
    return c;
}

ToxinFamily family_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    ToxinFamily f;
    f.id = r.string("id");
    f.name = r.string("name");
    f.abbreviation = r.string("abbreviation");
    f.aliases = r.optional_string_list("aliases");
    f.biothreat_concerns = r.optional_string("biothreat_concerns");
    const Json& classes = ObjectReader::as_array(r.required("classes"), r.child("classes"));
    for (std::size_t i = 0; i < classes.size(); ++i)
        f.classes.push_back(class_from_json(classes[i], pointer_index(r.child("classes"), i)));
    f.ranking_evidence = annotations_from_json(r.optional("ranking_evidence"), r.child("ranking_evidence"));
    r.finish();
    return f;
}

}  // namespace

Reference reference_from_json(const Json& value, const std::string& path) {
    ObjectReader r(value, path);
    Reference ref;
    ref.title = r.optional_string("title").value_or("");
    ref.url = r.optional_string("url");
    ref.accessed_at = r.optional_string("accessed_at");
    r.finish();
    return ref;
}

std::vector<Reference> references_from_json(const Json& value, const std::string& path) {
    ObjectReader::as_array(value, path);
    std::vector<Reference> out;
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(reference_from_json(value[i], pointer_index(path, i)));
    return out;
}

KnowledgeBase kb_from_json(const Json& document) {
    ObjectReader r(document, "");
    KnowledgeBase kb;
    // Content lists first, so a bare or foreign document reports what it lacks.
    const Json& viruses = ObjectReader::as_array(r.required("viruses"), "/viruses");
    const Json& families = ObjectReader::as_array(r.required("toxin_families"), "/toxin_families");
    kb.schema_version = r.string("schema_version");
    kb.generated_at = parse_rfc3339(r.string("generated_at"));
    for (std::size_t i = 0; i < viruses.size(); ++i)
        kb.viruses.push_back(virus_from_json(viruses[i], pointer_index("/viruses", i)));
    for (std::size_t i = 0; i < families.size(); ++i)
        kb.toxin_families.push_back(family_from_json(families[i], pointer_index("/toxin_families", i)));
    r.finish();

    auto report = validate_kb(kb);
    if (!report.ok()) throw InvariantError(std::move(report.findings));
    return kb;
}

KnowledgeBase parse_kb(std::string_view document) { return kb_from_json(detail::parse_json_text(document)); }

// ---------------------------------------------------------------------------
// Serialization

Json to_json(const Reference& ref) {
    Json j = {{"title", ref.title}};
    if (ref.url) j["url"] = *ref.url;
    if (ref.accessed_at) j["accessed_at"] = *ref.accessed_at;
    return j;
}

Json to_json(const FigureRef& f) {
    return {{"panel_label", f.panel_label}, {"description", f.description}, {"source_url", f.source_url}};
}

namespace {

template <typename T>
Json array_of(const std::vector<T>& items) {
    Json arr = Json::array();
    for (const auto& item : items) arr.push_back(to_json(item));
    return arr;
}

Json string_array(const std::vector<std::string>& items) { return Json(items); }

}  // namespace

Json to_json(const Treatment& t) {
    return {{"name", t.name},
            {"mechanism_of_action", t.mechanism_of_action},
            {"treatment_type", t.treatment_type},
            {"dosage", t.dosage},
            {"effectiveness", t.effectiveness},
            {"outcome_figures", array_of(t.outcome_figures)},
            {"references", array_of(t.references)}};
}

Json to_json(const ToxinClass& c) {
    return {{"name", c.name},
            {"source_organisms", string_array(c.source_organisms)},
            {"host_molecular_targets", string_array(c.host_molecular_targets)},
            {"analogues", string_array(c.analogues)},
            {"toxicity", c.toxicity},
            {"exposure_syndromes", string_array(c.exposure_syndromes)},
            {"countermeasures", string_array(c.countermeasures)},
            {"references", array_of(c.references)}};
}

Json to_json(const EvidenceAnnotation& a) {
    Json j = {{"countermeasure", a.countermeasure},
              {"benefit_summary", a.benefit_summary},
              {"evidence_strength", std::string(to_string(a.evidence_strength))},
              {"rationale_facts", string_array(a.rationale_facts)},
              {"constraints", a.constraints},
              {"sources", array_of(a.sources)}};
    if (a.quantified) {
        j["quantified"] = {{"treated_cfr", a.quantified->treated_cfr},
                           {"control_cfr", a.quantified->control_cfr},
                           {"reported", a.quantified->reported}};
    }
    return j;
}

namespace {

Json to_json_entry(const VirusEntry& v) {
    Json categories = Json::object();
    for (const auto& [kind, treatments] : v.categories) categories[std::string(to_string(kind))] = array_of(treatments);
    Json j = {{"id", v.id},
              {"name", v.name},
              {"abbreviation", v.abbreviation},
              {"native_course",
               {{"survival_figures", array_of(v.native_course.survival_figures)},
                {"viremia_figures", array_of(v.native_course.viremia_figures)},
                {"references", array_of(v.native_course.references)}}},
              {"categories", categories}};
    if (!v.aliases.empty()) j["aliases"] = v.aliases;
    if (!v.ranking_evidence.empty()) j["ranking_evidence"] = array_of(v.ranking_evidence);
    return j;
}

Json to_json_entry(const ToxinFamily& f) {
    Json j = {{"id", f.id}, {"name", f.name}, {"abbreviation", f.abbreviation}, {"classes", array_of(f.classes)}};
    if (f.biothreat_concerns) j["biothreat_concerns"] = *f.biothreat_concerns;
    if (!f.aliases.empty()) j["aliases"] = f.aliases;
    if (!f.ranking_evidence.empty()) j["ranking_evidence"] = array_of(f.ranking_evidence);
    return j;
}

}  // namespace

Json to_json(const KnowledgeBase& kb) {
    Json viruses = Json::array();
    for (const auto& v : kb.viruses) viruses.push_back(to_json_entry(v));
    Json families = Json::array();
    for (const auto& f : kb.toxin_families) families.push_back(to_json_entry(f));
    return {{"schema_version", kb.schema_version},
            {"generated_at", format_rfc3339(kb.generated_at)},
            {"viruses", viruses},
            {"toxin_families", families}};
}

std::string canonical_dump(const Json& value) {
    return value.dump(2, ' ', false, Json::error_handler_t::strict) + "\n";
}

std::string serialize_kb(const KnowledgeBase& kb) { return canonical_dump(to_json(kb)); }

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has_rule(std::string_view rule_id) const {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.rule_id == rule_id; });
}

namespace {

std::string first_message(const std::vector<Finding>& findings, std::string_view fallback) {
    return findings.empty() ? std::string(fallback) : findings.front().message;
}

class Validator {
public:
    explicit Validator(const ValidationOptions& options) : options_(options) {}

    ValidationReport run(const KnowledgeBase& kb) {
        if (kb.schema_version.empty()) add("/schema_version", "empty-field", "schema_version empty");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < kb.viruses.size(); ++i) {
            const auto& v = kb.viruses[i];
            const std::string path = pointer_index("/viruses", i);
            check_id(v.id, path, ids);
            check_virus(v, path);
        }
        ids.clear();
        for (std::size_t i = 0; i < kb.toxin_families.size(); ++i) {
            const auto& f = kb.toxin_families[i];
            const std::string path = pointer_index("/toxin_families", i);
            check_id(f.id, path, ids);
            check_family(f, path);
        }
        return std::move(report_);
    }

private:
    void add(std::string path, std::string rule, std::string message) {
        report_.findings.push_back({std::move(path), std::move(rule), std::move(message)});
    }

    void check_id(const std::string& id, const std::string& path, std::set<std::string>& seen) {
        if (!is_slug(id)) add(path + "/id", "invalid-id", "invalid id: \"" + id + "\"");
        if (!seen.insert(id).second) add(path + "/id", "duplicate-id", "duplicate id: " + id);
    }

    void check_nonempty(const std::string& value, const std::string& path, std::string_view field) {
        if (value.empty()) add(path, "empty-field", std::string(field) + " empty");
    }

    void check_references(const std::vector<Reference>& refs, const std::string& path) {
        if (options_.require_references && refs.empty()) add(path, "references-required", "references empty");
        for (std::size_t i = 0; i < refs.size(); ++i) {
            const auto& ref = refs[i];
            const std::string p = pointer_index(path, i);
            const bool has_url = ref.url && !ref.url->empty();
            if (ref.title.empty() && !has_url) add(p, "reference-empty", "reference has neither title nor url");
            if (has_url && !is_absolute_url(*ref.url)) add(p + "/url", "reference-url", "reference url not absolute: " + *ref.url);
            if (ref.accessed_at && !is_iso_date(*ref.accessed_at))
                add(p + "/accessed_at", "reference-date", "accessed_at not YYYY-MM-DD: " + *ref.accessed_at);
        }
    }

    void check_figures(const std::vector<FigureRef>& figures, const std::string& path) {
        for (std::size_t i = 0; i < figures.size(); ++i) {
            if (!is_absolute_url(figures[i].source_url))
                add(pointer_index(path, i) + "/source_url", "figure-url",
                    "figure source_url not absolute: \"" + figures[i].source_url + "\"");
        }
    }

    void check_annotations(const std::vector<EvidenceAnnotation>& annotations, const std::string& path,
                           const std::set<std::string>& known) {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < annotations.size(); ++i) {
            const auto& a = annotations[i];
            const std::string p = pointer_index(path, i);
            if (!known.count(a.countermeasure))
                add(p + "/countermeasure", "evidence-unknown-countermeasure",
                    "evidence names unknown countermeasure: " + a.countermeasure);
            if (!seen.insert(a.countermeasure).second)
                add(p + "/countermeasure", "evidence-duplicate", "duplicate evidence for: " + a.countermeasure);
            if (a.quantified) {
                const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
                if (!in_unit(a.quantified->treated_cfr) || !in_unit(a.quantified->control_cfr))
                    add(p + "/quantified", "evidence-cfr-range", "case fatality fractions must lie in [0, 1]");
            }
            check_references(a.sources, p + "/sources");
        }
    }

    void check_virus(const VirusEntry& v, const std::string& path) {
        check_nonempty(v.name, path + "/name", "name");
        check_nonempty(v.abbreviation, path + "/abbreviation", "abbreviation");
        check_figures(v.native_course.survival_figures, path + "/native_course/survival_figures");
        check_figures(v.native_course.viremia_figures, path + "/native_course/viremia_figures");
        check_references(v.native_course.references, path + "/native_course/references");

        std::set<std::string> all_names;
        for (const auto kind : kAllCategories) {
            const std::string cat_path = path + "/categories/" + std::string(to_string(kind));
            const auto it = v.categories.find(kind);
            if (it == v.categories.end()) {
                add(path + "/categories", "missing-category", "missing category: " + std::string(label(kind)));
                continue;
            }
            std::set<std::string> names;
            for (std::size_t i = 0; i < it->second.size(); ++i) {
                const auto& t = it->second[i];
                const std::string tp = pointer_index(cat_path, i);
                check_nonempty(t.name, tp + "/name", "treatment name");
                if (!names.insert(t.name).second)
                    add(tp + "/name", "duplicate-treatment", "duplicate treatment: " + t.name);
                all_names.insert(t.name);
                check_figures(t.outcome_figures, tp + "/outcome_figures");
                check_references(t.references, tp + "/references");
            }
        }
        check_annotations(v.ranking_evidence, path + "/ranking_evidence", all_names);
    }

    void check_family(const ToxinFamily& f, const std::string& path) {
        check_nonempty(f.name, path + "/name", "name");
        check_nonempty(f.abbreviation, path + "/abbreviation", "abbreviation");
        if (f.classes.empty()) add(path + "/classes", "classes-empty", "classes empty");
        if (f.biothreat_concerns) {
            const auto verdict = risk_communication_check(*f.biothreat_concerns);
            if (!verdict.allowed)
                add(path + "/biothreat_concerns", "biothreat-procedural",
                    "biothreat_concerns blocked by rule " + verdict.rule_id);
        }
        std::set<std::string> names;
        std::set<std::string> countermeasures;
        for (std::size_t i = 0; i < f.classes.size(); ++i) {
            const auto& c = f.classes[i];
            const std::string cp = pointer_index(path + "/classes", i);
            check_nonempty(c.name, cp + "/name", "class name");
            if (!names.insert(c.name).second) add(cp + "/name", "duplicate-class", "duplicate class: " + c.name);
            countermeasures.insert(c.countermeasures.begin(), c.countermeasures.end());
            check_references(c.references, cp + "/references");
        }
        check_annotations(f.ranking_evidence, path + "/ranking_evidence", countermeasures);
    }

    ValidationOptions options_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_kb(const KnowledgeBase& kb, const ValidationOptions& options) {
    return Validator(options).run(kb);
}

InvariantError::InvariantError(std::vector<Finding> findings)
    : Error(ErrorCode::Invariant, first_message(findings, "invariant violated"),
            findings.empty() ? std::string{} : findings.front().path),
      findings_(std::move(findings)) {}

ValidationError::ValidationError(std::vector<Finding> findings)
    : Error(ErrorCode::Validation, first_message(findings, "validation failed"),
            findings.empty() ? std::string{} : findings.front().path),
      findings_(std::move(findings)) {}

// ---------------------------------------------------------------------------
// Cardinalities

std::size_t VirusCardinality::count(CategoryKind kind) const {
    const auto it = treatments.find(kind);
    return it == treatments.end() ? 0 : it->second;
}

std::size_t CardinalitySummary::total_treatments() const {
    std::size_t n = 0;
    for (const auto& v : viruses)
        for (const auto& [_, c] : v.treatments) n += c;
    return n;
}

std::size_t CardinalitySummary::total_classes() const {
    std::size_t n = 0;
    for (const auto& f : families) n += f.classes;
    return n;
}

const VirusCardinality* CardinalitySummary::virus(std::string_view id) const { return find_by_id(viruses, id); }
const FamilyCardinality* CardinalitySummary::family(std::string_view id) const { return find_by_id(families, id); }

CardinalitySummary kb_cardinalities(const KnowledgeBase& kb) {
    CardinalitySummary summary;
    for (const auto& v : kb.viruses) {
        VirusCardinality vc{v.id, v.abbreviation, {}};
        for (const auto kind : kAllCategories) {
            const auto it = v.categories.find(kind);
            vc.treatments[kind] = it == v.categories.end() ? 0 : it->second.size();
        }
        summary.viruses.push_back(std::move(vc));
    }
    for (const auto& f : kb.toxin_families) summary.families.push_back({f.id, f.name, f.classes.size()});
    return summary;
}

// ---------------------------------------------------------------------------
// Catalogs

SourceCatalog SourceCatalog::subset(const std::vector<std::string>& wanted) const {
    SourceCatalog out{domain, {}};
    for (const auto& e : entries) {
        if (std::find(wanted.begin(), wanted.end(), e.category) != wanted.end()) out.entries.push_back(e);
    }
    return out;
}

std::vector<std::string> SourceCatalog::categories() const {
    std::vector<std::string> out;
    for (const auto& e : entries) {
        if (std::find(out.begin(), out.end(), e.category) == out.end()) out.push_back(e.category);
    }
    return out;
}

SourceCatalog parse_catalog(std::string_view document) {
    const Json doc = detail::parse_json_text(document);
    ObjectReader r(doc, "");
    SourceCatalog catalog;
    const std::string domain = r.string("domain");
    const auto parsed = parse_domain(domain);
    if (!parsed) throw SchemaError("unknown domain \"" + domain + "\"", "/domain");
    catalog.domain = *parsed;
    const Json& entries = ObjectReader::as_array(r.required("entries"), "/entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        ObjectReader er(entries[i], pointer_index("/entries", i));
        CatalogEntry e;
        e.name = er.string("name");
        e.url = er.optional_string("url");
        e.category = er.string("category");
        er.finish();
        catalog.entries.push_back(std::move(e));
    }
    r.finish();
    return catalog;
}

Json to_json(const SourceCatalog& catalog) {
    Json entries = Json::array();
    for (const auto& e : catalog.entries) {
        Json j = {{"name", e.name}, {"category", e.category}};
        if (e.url) j["url"] = *e.url;
        entries.push_back(std::move(j));
    }
    return {{"domain", std::string(to_string(catalog.domain))}, {"entries", entries}};
}

const SourceCatalog& builtin_catalog(Domain domain) {
    static const SourceCatalog viral = parse_catalog(embedded::viral_trx_catalog());
    static const SourceCatalog toxin = parse_catalog(embedded::marine_toxin_catalog());
    return domain == Domain::ViralTRx ? viral : toxin;
}

}  // namespace cmkb
