#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmkb/model.hpp"
#include "cmkb/prompt.hpp"
#include "cmkb/provider.hpp"
#include "cmkb/time.hpp"

namespace cmkb {

// ---------------------------------------------------------------------------
// Tasks and prompts

struct ExtractionTask {
    Domain domain = Domain::ViralTRx;
    std::string subject;       // virus or toxin family id
    std::string subject_name;  // display label used in prompts
    std::string facet;         // e.g. "treatments.pathogen_targeted", "classes"
    SourceCatalog sources;
    std::string prompt_template_id;

    // "trx:niv:treatments.pathogen_targeted"
    std::string key() const;
    // Slash path under which every claim of this task must fall.
    std::string path_prefix() const;
};

const std::vector<std::string>& facets_for(Domain domain);
bool is_valid_facet(Domain domain, std::string_view facet);
std::string default_template_id(Domain domain, std::string_view facet);

// Builds a task with the subject label taken from `kb` (when given) and the
// full built-in catalog of the domain as sources.
ExtractionTask make_task(Domain domain, std::string subject, std::string facet, const KnowledgeBase* kb = nullptr);

std::string build_prompt(const ExtractionTask& task);

// ---------------------------------------------------------------------------
// Claims

struct Claim {
    std::string field_path;
    std::string value;  // canonical text
    std::vector<Reference> sources;
    std::string provider_id;
    Timestamp collected_at{};
};

struct ClaimKey {
    std::string field_path;
    std::string value;

    auto operator<=>(const ClaimKey&) const = default;
    bool operator==(const ClaimKey&) const = default;
};

// Where a claim lands in the document, derived from its slash path.
struct ClaimTarget {
    enum class Kind { TreatmentList, TreatmentField, ClassList, ClassListFacet, ClassToxicity, Biothreat };

    Kind kind = Kind::TreatmentList;
    std::string entity;    // virus or family id
    CategoryKind category = CategoryKind::PathogenTargeted;
    std::string item;      // treatment or class name
    std::string field;     // treatment text field or class list facet
    bool multi_valued = false;
};

std::optional<ClaimTarget> resolve_claim_path(std::string_view field_path);
bool is_multi_valued(std::string_view field_path);
// Multi-valued claims address the element itself ("…/pathogen_targeted/ST-193").
std::string claim_leaf_path(const Claim& claim);

class ClaimSet {
public:
    ClaimSet() = default;
    explicit ClaimSet(ExtractionTask task) : task_(std::move(task)) {}

    const ExtractionTask& task() const { return task_; }

    // Canonicalizes the value first. Returns false when the (path, value) key
    // is already present; sources of the duplicate are merged.
    bool insert(Claim claim);
    bool contains(const ClaimKey& key) const { return claims_.count(key) != 0; }
    const Claim* find(const ClaimKey& key) const;
    // Values recorded for one path.
    std::vector<std::string> values_at(std::string_view field_path) const;

    std::size_t size() const { return claims_.size(); }
    bool empty() const { return claims_.empty(); }
    auto begin() const { return claims_.begin(); }
    auto end() const { return claims_.end(); }
    std::vector<Claim> claims() const;

private:
    ExtractionTask task_;
    std::map<ClaimKey, Claim> claims_;
};

// Parses a provider reply: {"claims": [...]} or a bare claims array. Every
// claim must resolve to a schema path under the task's facet.
ClaimSet parse_claims_response(std::string_view text, const ExtractionTask& task, const std::string& provider_id,
                               Timestamp collected_at);

// Sends `prompt` (or build_prompt(task) when empty) with the claims response
// schema. A reply that fails to parse is retried once, then surfaced as
// MalformedProviderOutput.
ClaimSet extract_claims(Provider& provider, const ExtractionTask& task, int round = 1, const std::string& prompt = {},
                        const Clock& clock = system_clock());

// ---------------------------------------------------------------------------
// Cross-validation

struct Conflict {
    std::string field_path;
    std::string primary_value;
    std::string verifier_value;

    bool operator==(const Conflict&) const = default;
};

struct DiscrepancyReport {
    std::vector<Claim> missing_in_verifier;
    std::vector<Claim> missing_in_primary;
    std::vector<Conflict> conflicting;
    int round = 1;

    bool empty() const { return missing_in_verifier.empty() && missing_in_primary.empty() && conflicting.empty(); }
};

// Multi-valued facets disagree only by omission; single-valued facets present
// on both sides with different canonical values are conflicts.
DiscrepancyReport cross_validate(const ClaimSet& primary, const ClaimSet& verifier, int round = 1);

enum class UnresolvedPolicy { FlagForHuman, DropClaim };

struct ReconciliationPolicy {
    int max_rounds = 3;
    UnresolvedPolicy on_unresolved = UnresolvedPolicy::FlagForHuman;
};

struct Provenance {
    std::string field_path;
    std::string extracted_by;
    std::vector<std::string> verified_by;
    int rounds = 1;
    Timestamp collected_at{};

    bool operator==(const Provenance&) const = default;
};

Json to_json(const Provenance& provenance);
Provenance provenance_from_json(const Json& value);

struct UnresolvedItem {
    enum class Kind { MissingInVerifier, MissingInPrimary, Conflict };

    Kind kind = Kind::Conflict;
    std::string field_path;
    std::optional<std::string> primary_value;
    std::optional<std::string> verifier_value;
};

std::string_view to_string(UnresolvedItem::Kind kind);

struct ReconcileOutcome {
    ClaimSet claims;  // agreed by both providers
    std::vector<Provenance> provenance;
    std::vector<UnresolvedItem> unresolved;  // FlagForHuman only
    std::size_t dropped = 0;                 // DropClaim only
    int rounds = 0;
    std::vector<DiscrepancyReport> reports;  // one per round
};

// Round k+1 prompts embed the round-k discrepancy report for both sides.
std::string build_round_prompt(const ExtractionTask& task, const DiscrepancyReport& report, ProviderRole side);

ReconcileOutcome reconcile(const ExtractionTask& task, Provider& primary, Provider& verifier,
                           const ReconciliationPolicy& policy = {}, const Clock& clock = system_clock());

// ---------------------------------------------------------------------------
// Applying claims and monthly updates

// Returns a new KB with every claim written at its path. Throws PathConflict
// for paths naming unknown entries, PolicyViolation for biothreat text the
// risk policy blocks, and InvariantError when the result fails validation.
KnowledgeBase apply_claims(const KnowledgeBase& kb, const ClaimSet& claims);

struct TaskLogEntry {
    std::string task_key;
    bool ok = false;
    int rounds = 0;
    std::size_t applied_claims = 0;
    std::vector<UnresolvedItem> unresolved;
    std::size_t dropped = 0;
    std::string error;
};

struct UpdateLog {
    std::vector<TaskLogEntry> tasks;
    std::size_t failures() const;
};

Json to_json(const UpdateLog& log);

struct UpdateResult {
    KnowledgeBase kb;
    UpdateLog log;
    std::vector<Provenance> provenance;
};

// Runs reconcile + apply_claims per task. A failing task is logged and the
// remaining tasks still run. generated_at of the result is strictly later
// than the input's.
UpdateResult monthly_update(const KnowledgeBase& kb, const std::vector<ExtractionTask>& tasks, Provider& primary,
                            Provider& verifier, const ReconciliationPolicy& policy = {},
                            const Clock& clock = system_clock());

}  // namespace cmkb
