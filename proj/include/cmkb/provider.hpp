#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cmkb {

enum class ProviderRole { PrimaryExtractor, Verifier, DecisionMaker };
enum class ProviderKind { Http, Replay };

std::string_view to_string(ProviderRole role);
std::optional<ProviderRole> parse_provider_role(std::string_view text);

// Endpoint settings for one model provider. Credentials are never stored:
// `credential_env` names the environment variable that holds the key.
struct ProviderProfile {
    std::string provider_id;
    ProviderRole role = ProviderRole::PrimaryExtractor;
    ProviderKind kind = ProviderKind::Http;
    std::string base_url;
    std::string model;
    std::string credential_env;
    std::filesystem::path script;  // replay providers only
    int timeout_seconds = 120;
};

// Accepts either a JSON array of profiles or {"providers": [...]}. Relative
// script paths resolve against `base_dir`.
std::vector<ProviderProfile> parse_provider_config(std::string_view document,
                                                   const std::filesystem::path& base_dir = {});
std::vector<ProviderProfile> load_provider_config(const std::filesystem::path& file);
const ProviderProfile* find_role(const std::vector<ProviderProfile>& profiles, ProviderRole role);

enum class RequestPurpose { Extraction, Ranking };

struct ProviderRequest {
    RequestPurpose purpose = RequestPurpose::Extraction;
    std::string task_key;
    int round = 1;
    int attempt = 1;
    std::string prompt;
    nlohmann::json response_schema;
    std::string api_key;  // per-request override of the configured credential
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual const ProviderProfile& profile() const = 0;
    // Returns the raw response text. Throws ProviderUnavailable when the
    // provider cannot be reached.
    virtual std::string complete(const ProviderRequest& request) = 0;
};

// Scripted provider driven by a JSON array of
// {"task": ..., "round": n, "attempt"?: n, "claims" | "response" | "error": ...}.
// The entry with the highest round not above the requested round answers;
// an entry with a matching attempt wins over one without.
class ReplayProvider final : public Provider {
public:
    struct Entry {
        std::string task;
        int round = 1;
        std::optional<int> attempt;
        bool unavailable = false;
        std::string response;
    };

    ReplayProvider(ProviderProfile profile, std::vector<Entry> entries);

    static std::unique_ptr<ReplayProvider> from_script(ProviderProfile profile, std::string_view script);
    static std::unique_ptr<ReplayProvider> from_file(ProviderProfile profile, const std::filesystem::path& file);

    const ProviderProfile& profile() const override { return profile_; }
    std::string complete(const ProviderRequest& request) override;

    std::vector<ProviderRequest> requests() const;

private:
    ProviderProfile profile_;
    std::vector<Entry> entries_;
    mutable std::mutex mutex_;
    std::vector<ProviderRequest> requests_;
};

// OpenAI-compatible chat-completions client. The response schema travels as
// a json_schema response_format; the reply content is returned verbatim.
class HttpProvider final : public Provider {
public:
    explicit HttpProvider(ProviderProfile profile);

    const ProviderProfile& profile() const override { return profile_; }
    std::string complete(const ProviderRequest& request) override;

private:
    ProviderProfile profile_;
};

std::unique_ptr<Provider> make_provider(const ProviderProfile& profile);

}  // namespace cmkb
