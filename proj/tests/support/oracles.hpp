#pragma once

// Independent reference implementations used to check the library. None of
// these call into the code under test beyond plain data types.

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "cmkb/agents.hpp"
#include "cmkb/curation.hpp"
#include "cmkb/model.hpp"

namespace cmkb::testing {

std::filesystem::path data_dir();
std::filesystem::path fixture_path();
std::string read_file(const std::filesystem::path& file);
const std::string& fixture_text();
const KnowledgeBase& fixture_kb();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Canonical text: ASCII whitespace trimmed and collapsed, nothing else.

std::string whitespace_canon(const std::string& text);

// ---------------------------------------------------------------------------
// Ranking: enumerate every permutation and keep the one whose key sequence is
// lexicographically greatest. Returns the order_hints in ranked order.

std::vector<int> brute_force_rank(const std::vector<EvidenceItem>& items);

// ---------------------------------------------------------------------------
// Cross-validation: pairwise comparison over plain (path, value) pairs.

struct RawClaim {
    std::string path;
    std::string value;
};

struct OracleReport {
    std::set<std::pair<std::string, std::string>> missing_in_verifier;
    std::set<std::pair<std::string, std::string>> missing_in_primary;
    std::set<std::tuple<std::string, std::string, std::string>> conflicting;
};

bool oracle_single_valued(const std::string& path);
OracleReport brute_force_cross_validate(const std::vector<RawClaim>& primary, const std::vector<RawClaim>& verifier);
OracleReport as_oracle_report(const DiscrepancyReport& report);

// ---------------------------------------------------------------------------
// Documents: flatten to leaf paths keyed the same way the diff addresses list
// elements, written independently of the diff engine.

std::map<std::string, nlohmann::json> flatten(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Random generators

EvidenceItem random_item(std::mt19937& rng, int order_hint);
std::vector<EvidenceItem> random_pack_items(std::mt19937& rng, int max_items);

// Claims for task trx:lasv:treatments.pathogen_targeted. Single-valued paths
// carry at most one value per set.
std::vector<RawClaim> random_claims(std::mt19937& rng, int max_claims);
ExtractionTask lasv_pathogen_task();
ClaimSet to_claim_set(const std::vector<RawClaim>& claims, const ExtractionTask& task, const std::string& provider);

// Applies 1..max_edits random structural edits (add/remove/rename/reorder
// entries, edit text, touch lists) and returns a KB that still validates.
KnowledgeBase random_edit(const KnowledgeBase& kb, std::mt19937& rng, int max_edits);

}  // namespace cmkb::testing
