#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmkb/model.hpp"
#include "cmkb/provider.hpp"
#include "cmkb/time.hpp"

namespace cmkb {

// ---------------------------------------------------------------------------
// Guardrail

struct RankingQuery {
    std::string raw_text;
    std::string subject;  // virus id or toxin family id
    std::optional<std::string> geography;

    bool operator==(const RankingQuery&) const = default;
};

struct GuardrailVerdict {
    bool allowed = false;
    std::string rule;    // "admitted", "procedural-harm", "off-topic", "no-subject", "multiple-subjects", "empty"
    std::string reason;  // human readable
    std::optional<std::string> resolved_subject;
    std::optional<std::string> geography;
};

GuardrailVerdict guardrail_classify(std::string_view raw_text, const KnowledgeBase& kb);

// Only valid for an admitted verdict. An explicit geography wins over the
// one parsed from the question.
RankingQuery make_query(std::string_view raw_text, const GuardrailVerdict& verdict,
                        std::optional<std::string> geography = std::nullopt);

// ---------------------------------------------------------------------------
// Researcher

struct QuantifiedBenefit {
    double treated_cfr = 0.0;
    double control_cfr = 0.0;
    double absolute_reduction = 0.0;  // control - treated
    double relative_reduction = 0.0;  // absolute / control, 0 when control is 0
    std::string reported;             // the source's own wording, verbatim

    static QuantifiedBenefit from_cfr(double treated_cfr, double control_cfr, std::string reported = {});
};

struct EvidenceItem {
    std::string countermeasure;
    std::string benefit_summary;
    std::optional<QuantifiedBenefit> quantified;
    EvidenceStrength evidence_strength = EvidenceStrength::Insufficient;
    std::vector<std::string> rationale_facts;
    std::string constraints;
    std::vector<Reference> sources;
    int order_hint = 0;
    bool external = false;  // added by a retriever rather than read from the KB
};

struct EvidencePack {
    std::string subject;
    std::string subject_name;
    std::optional<std::string> geography;
    std::vector<EvidenceItem> items;
    Timestamp assembled_at{};
};

// Optional source of additional evidence. Items whose sources fall outside
// the allowlist are discarded by researcher_assemble.
class SourceRetriever {
public:
    virtual ~SourceRetriever() = default;
    virtual std::vector<EvidenceItem> retrieve(const RankingQuery& query) = 0;
};

// Hosts of the built-in catalogs plus PubMed and Europe PMC.
std::vector<std::string> default_source_allowlist();
bool url_allowed(std::string_view url, const std::vector<std::string>& allowlist);

// Items come from the subject's structured ranking evidence. A subject
// without annotations contributes its treatments (or class countermeasures)
// as unquantified, insufficient-evidence items.
EvidencePack researcher_assemble(const RankingQuery& query, const KnowledgeBase& kb,
                                 SourceRetriever* retriever = nullptr,
                                 const std::vector<std::string>& allowlist = default_source_allowlist(),
                                 const Clock& clock = system_clock());

// ---------------------------------------------------------------------------
// Decision maker

enum class RankingMode { Deterministic, ProviderBacked };

std::string_view to_string(RankingMode mode);
std::optional<RankingMode> parse_ranking_mode(std::string_view text);

struct RankedEntry {
    int rank = 1;
    std::string countermeasure;
    std::string benefit;
    EvidenceStrength evidence_strength = EvidenceStrength::Insufficient;
    std::string rationale;
    std::string constraints;
    std::vector<Reference> sources;

    bool operator==(const RankedEntry&) const = default;
};

struct RankingResult {
    RankingQuery query;
    std::vector<RankedEntry> entries;
    RankingMode mode = RankingMode::Deterministic;
    Timestamp generated_at{};
    std::optional<std::string> fallback_reason;

    bool operator==(const RankingResult&) const = default;
};

inline constexpr std::string_view kNoQuantifiedBenefit = "Quantified mortality reduction not found.";
inline constexpr std::string_view kNoRankedCountermeasures = "No ranked countermeasures.";

// Strict weak ordering used by rank_deterministic: true when `a` ranks
// above `b`. Exposed for tests.
bool ranks_before(const EvidenceItem& a, const EvidenceItem& b);

RankingResult rank_deterministic(const EvidencePack& pack, const RankingQuery& query,
                                 const Clock& clock = system_clock());

// Asks the provider for a ranking and keeps it only if every countermeasure
// and every source it cites is in the pack; otherwise falls back to
// rank_deterministic and records why.
RankingResult rank_provider_backed(const EvidencePack& pack, const RankingQuery& query, Provider& provider,
                                   const std::string& api_key = {}, const Clock& clock = system_clock());

std::string build_ranking_prompt(const EvidencePack& pack);

// Checks a provider ranking reply against the pack. Throws SchemaViolation.
std::vector<RankedEntry> parse_ranking_response(std::string_view text, const EvidencePack& pack);

Json render_result(const RankingResult& result);
RankingResult parse_result(const Json& document);

}  // namespace cmkb
