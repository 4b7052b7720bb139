#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cmkb/errors.hpp"
#include "cmkb/time.hpp"

namespace cmkb {

using Json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "1.0.0";

enum class CategoryKind { PathogenTargeted, HostTargeted, Combinatorial };

inline constexpr std::array<CategoryKind, 3> kAllCategories = {
    CategoryKind::PathogenTargeted, CategoryKind::HostTargeted, CategoryKind::Combinatorial};

// Wire name: "pathogen_targeted" | "host_targeted" | "combinatorial".
std::string_view to_string(CategoryKind kind);
// Human label used in findings: "PathogenTargeted" etc.
std::string_view label(CategoryKind kind);
std::optional<CategoryKind> parse_category(std::string_view wire_name);

// Declared in ascending order so the built-in comparison operators give
// High > Moderate > ExpertGuideline > Low > Insufficient.
enum class EvidenceStrength { Insufficient, Low, ExpertGuideline, Moderate, High };

std::string_view to_string(EvidenceStrength strength);
std::optional<EvidenceStrength> parse_evidence_strength(std::string_view wire_name);

struct Reference {
    std::string title;
    std::optional<std::string> url;
    std::optional<std::string> accessed_at;  // YYYY-MM-DD

    bool operator==(const Reference&) const = default;
};

struct FigureRef {
    std::string panel_label;
    std::string description;
    std::string source_url;

    bool operator==(const FigureRef&) const = default;
};

struct NativeCourse {
    std::vector<FigureRef> survival_figures;
    std::vector<FigureRef> viremia_figures;
    std::vector<Reference> references;

    bool operator==(const NativeCourse&) const = default;
};

struct Treatment {
    std::string name;
    std::string mechanism_of_action;
    std::string treatment_type;
    std::string dosage;
    std::string effectiveness;
    std::vector<FigureRef> outcome_figures;
    std::vector<Reference> references;

    bool operator==(const Treatment&) const = default;
};

// Case fatality in a treated arm against a comparator arm, as published.
// `reported` keeps the source's own phrasing of the effect verbatim.
struct QuantifiedOutcome {
    double treated_cfr = 0.0;
    double control_cfr = 0.0;
    std::string reported;

    bool operator==(const QuantifiedOutcome&) const = default;
};

// Structured evidence attached to one countermeasure of a subject during
// curation. Consumed by the ranking agents; never parsed out of prose.
struct EvidenceAnnotation {
    std::string countermeasure;
    std::string benefit_summary;
    std::optional<QuantifiedOutcome> quantified;
    EvidenceStrength evidence_strength = EvidenceStrength::Insufficient;
    std::vector<std::string> rationale_facts;
    std::string constraints;
    std::vector<Reference> sources;

    bool operator==(const EvidenceAnnotation&) const = default;
};

struct VirusEntry {
    std::string id;
    std::string name;
    std::string abbreviation;
    std::vector<std::string> aliases;
    NativeCourse native_course;
    std::map<CategoryKind, std::vector<Treatment>> categories;
    std::vector<EvidenceAnnotation> ranking_evidence;

    bool operator==(const VirusEntry&) const = default;
};

struct ToxinClass {
    std::string name;
    std::vector<std::string> source_organisms;
    std::vector<std::string> host_molecular_targets;
    std::vector<std::string> analogues;
    std::string toxicity;
    std::vector<std::string> exposure_syndromes;
    std::vector<std::string> countermeasures;
    std::vector<Reference> references;

    bool operator==(const ToxinClass&) const = default;
};

struct ToxinFamily {
    std::string id;
    std::string name;
    std::string abbreviation;
    std::vector<std::string> aliases;
    std::optional<std::string> biothreat_concerns;
    std::vector<ToxinClass> classes;
    std::vector<EvidenceAnnotation> ranking_evidence;

    bool operator==(const ToxinFamily&) const = default;
};

struct KnowledgeBase {
    std::string schema_version{kSchemaVersion};
    Timestamp generated_at{};
    std::vector<VirusEntry> viruses;
    std::vector<ToxinFamily> toxin_families;

    const VirusEntry* find_virus(std::string_view id) const;
    const ToxinFamily* find_family(std::string_view id) const;
    VirusEntry* find_virus(std::string_view id);
    ToxinFamily* find_family(std::string_view id);

    bool operator==(const KnowledgeBase&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Finding {
    std::string path;
    std::string rule_id;
    std::string message;

    bool operator==(const Finding&) const = default;
};

struct ValidationOptions {
    // Fixture entries must cite at least one reference; curated drafts may not yet.
    bool require_references = false;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
    bool has_rule(std::string_view rule_id) const;
};

ValidationReport validate_kb(const KnowledgeBase& kb, const ValidationOptions& options = {});

class InvariantError : public Error {
public:
    explicit InvariantError(std::vector<Finding> findings);
    const std::vector<Finding>& findings() const noexcept { return findings_; }

private:
    std::vector<Finding> findings_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Finding> findings);
    const std::vector<Finding>& findings() const noexcept { return findings_; }

private:
    std::vector<Finding> findings_;
};

// ---------------------------------------------------------------------------
// Parsing and serialization

// Strict: unknown keys are SchemaError with a slash path, malformed JSON is
// SyntaxError, and a structurally sound document that breaks an invariant is
// InvariantError.
KnowledgeBase parse_kb(std::string_view document);
KnowledgeBase kb_from_json(const Json& document);

Json to_json(const KnowledgeBase& kb);
Json to_json(const Reference& ref);
Json to_json(const FigureRef& figure);
Json to_json(const Treatment& treatment);
Json to_json(const ToxinClass& toxin_class);
Json to_json(const EvidenceAnnotation& annotation);

Reference reference_from_json(const Json& value, const std::string& path);
std::vector<Reference> references_from_json(const Json& value, const std::string& path);

// Canonical bytes: UTF-8, bytewise-sorted keys, two-space indent, LF, trailing
// newline. Stable across runs, so suitable for checksums.
std::string canonical_dump(const Json& value);
std::string serialize_kb(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Cardinalities

struct VirusCardinality {
    std::string id;
    std::string abbreviation;
    std::map<CategoryKind, std::size_t> treatments;

    std::size_t count(CategoryKind kind) const;
};

struct FamilyCardinality {
    std::string id;
    std::string name;
    std::size_t classes = 0;
};

struct CardinalitySummary {
    std::vector<VirusCardinality> viruses;
    std::vector<FamilyCardinality> families;

    std::size_t total_treatments() const;
    std::size_t total_classes() const;
    const VirusCardinality* virus(std::string_view id) const;
    const FamilyCardinality* family(std::string_view id) const;
};

CardinalitySummary kb_cardinalities(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Source catalogs

enum class Domain { ViralTRx, MarineToxin };

std::string_view to_string(Domain domain);
// Accepts "viral_trx"/"trx" and "marine_toxin"/"toxin".
std::optional<Domain> parse_domain(std::string_view text);

struct CatalogEntry {
    std::string name;
    std::optional<std::string> url;
    std::string category;

    bool operator==(const CatalogEntry&) const = default;
};

struct SourceCatalog {
    Domain domain = Domain::ViralTRx;
    std::vector<CatalogEntry> entries;

    SourceCatalog subset(const std::vector<std::string>& categories) const;
    std::vector<std::string> categories() const;

    bool operator==(const SourceCatalog&) const = default;
};

SourceCatalog parse_catalog(std::string_view document);
Json to_json(const SourceCatalog& catalog);

// Catalogs compiled into the library from data/catalogs.
const SourceCatalog& builtin_catalog(Domain domain);

}  // namespace cmkb
