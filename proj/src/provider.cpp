#include "cmkb/provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "cmkb/errors.hpp"
#include "cmkb/model.hpp"
#include "cmkb/log.hpp"
#include <spdlog/spdlog.h>
#include "json_reader.hpp"

namespace cmkb {

using nlohmann::json;
using detail::ObjectReader;

std::string_view to_string(ProviderRole role) {
    switch (role) {
        case ProviderRole::PrimaryExtractor: return "primary_extractor";
        case ProviderRole::Verifier: return "verifier";
        case ProviderRole::DecisionMaker: return "decision_maker";
    }
    return "primary_extractor";
}

std::optional<ProviderRole> parse_provider_role(std::string_view text) {
    if (text == "primary_extractor" || text == "primary") return ProviderRole::PrimaryExtractor;
    if (text == "verifier") return ProviderRole::Verifier;
    if (text == "decision_maker") return ProviderRole::DecisionMaker;
    return std::nullopt;
}

namespace {

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ProviderProfile profile_from_json(const json& value, const std::string& path, const std::filesystem::path& base_dir) {
    ObjectReader reader(value, path);
    ProviderProfile profile;
    profile.provider_id = reader.string("provider_id");
    if (profile.provider_id.empty()) throw SchemaError("empty provider_id", reader.child("provider_id"));

    const auto role_text = reader.string("role");
    const auto role = parse_provider_role(role_text);
    if (!role) throw SchemaError("unknown role \"" + role_text + "\"", reader.child("role"));
    profile.role = *role;

    const auto kind = reader.optional_string("kind").value_or("http");
    if (kind == "http") {
        profile.kind = ProviderKind::Http;
    } else if (kind == "mock" || kind == "replay") {
        profile.kind = ProviderKind::Replay;
    } else {
        throw SchemaError("unknown provider kind \"" + kind + "\"", reader.child("kind"));
    }

    profile.base_url = reader.optional_string("base_url").value_or("");
    profile.model = reader.optional_string("model").value_or("");
    profile.credential_env = reader.optional_string("credential_env").value_or("");
    if (const auto script = reader.optional_string("script")) {
        std::filesystem::path p(*script);
        profile.script = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (const auto* timeout = reader.optional("timeout_seconds")) {
        if (!timeout->is_number_integer() || timeout->get<int>() <= 0)
            throw SchemaError("timeout_seconds must be a positive integer", reader.child("timeout_seconds"));
        profile.timeout_seconds = timeout->get<int>();
    }
    reader.finish();

    if (profile.kind == ProviderKind::Http && profile.base_url.empty())
        throw SchemaError("http provider needs base_url", path);
    if (profile.kind == ProviderKind::Replay && profile.script.empty())
        throw SchemaError("mock provider needs script", path);
    return profile;
}

}  // namespace

std::vector<ProviderProfile> parse_provider_config(std::string_view document, const std::filesystem::path& base_dir) {
    const json root = detail::parse_json_text(document);
    const json* list = &root;
    std::string path;
    if (root.is_object()) {
        ObjectReader reader(root, "");
        list = &reader.required("providers");
        reader.finish();
        path = "/providers";
    }
    ObjectReader::as_array(*list, path);

    std::vector<ProviderProfile> profiles;
    for (std::size_t i = 0; i < list->size(); ++i)
        profiles.push_back(profile_from_json((*list)[i], detail::pointer_index(path, i), base_dir));

    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            if (profiles[i].provider_id == profiles[j].provider_id)
                throw ConfigError("duplicate provider_id: " + profiles[i].provider_id);
            if (profiles[i].role == profiles[j].role)
                throw ConfigError("more than one provider with role " + std::string(to_string(profiles[i].role)));
        }
    }
    return profiles;
}

std::vector<ProviderProfile> load_provider_config(const std::filesystem::path& file) {
    return parse_provider_config(read_file(file), file.parent_path());
}

const ProviderProfile* find_role(const std::vector<ProviderProfile>& profiles, ProviderRole role) {
    const auto it = std::find_if(profiles.begin(), profiles.end(), [&](const auto& p) { return p.role == role; });
    return it == profiles.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------
// Replay

ReplayProvider::ReplayProvider(ProviderProfile profile, std::vector<Entry> entries)
    : profile_(std::move(profile)), entries_(std::move(entries)) {}

namespace {

std::string task_string(const json& task, const std::string& path) {
    if (task.is_string()) return task.get<std::string>();
    ObjectReader reader(task, path);
    std::string key;
    if (const auto kind = reader.optional_string("kind"); kind && *kind == "rank") {
        key = "rank:" + reader.string("subject");
    } else {
        auto domain_text = reader.string("domain");
        const auto domain = parse_domain(domain_text);
        if (!domain) throw SchemaError("unknown domain \"" + domain_text + "\"", reader.child("domain"));
        const std::string prefix = *domain == Domain::ViralTRx ? "trx" : "toxin";
        key = prefix + ":" + reader.string("subject") + ":" + reader.string("facet");
    }
    reader.finish();
    return key;
}

}  // namespace

std::unique_ptr<ReplayProvider> ReplayProvider::from_script(ProviderProfile profile, std::string_view script) {
    const json root = detail::parse_json_text(script);
    ObjectReader::as_array(root, "");
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto path = detail::pointer_index("", i);
        ObjectReader reader(root[i], path);
        Entry entry;
        entry.task = task_string(reader.required("task"), reader.child("task"));
        if (const auto* round = reader.optional("round")) {
            if (!round->is_number_integer() || round->get<int>() < 1)
                throw SchemaError("round must be an integer >= 1", reader.child("round"));
            entry.round = round->get<int>();
        }
        if (const auto* attempt = reader.optional("attempt")) {
            if (!attempt->is_number_integer() || attempt->get<int>() < 1)
                throw SchemaError("attempt must be an integer >= 1", reader.child("attempt"));
            entry.attempt = attempt->get<int>();
        }
        const auto* claims = reader.optional("claims");
        const auto* response = reader.optional("response");
        const auto* error = reader.optional("error");
        if ((claims != nullptr) + (response != nullptr) + (error != nullptr) != 1)
            throw SchemaError("entry needs exactly one of claims, response, error", path);
        if (claims) {
            entry.response = json{{"claims", *claims}}.dump();
        } else if (response) {
            // A string response is sent verbatim, which lets scripts feed garbage.
            entry.response = response->is_string() ? response->get<std::string>() : response->dump();
        } else {
            if (ObjectReader::as_string(*error, reader.child("error")) != "unavailable")
                throw SchemaError("error must be \"unavailable\"", reader.child("error"));
            entry.unavailable = true;
        }
        reader.finish();
        entries.push_back(std::move(entry));
    }
    return std::make_unique<ReplayProvider>(std::move(profile), std::move(entries));
}

std::unique_ptr<ReplayProvider> ReplayProvider::from_file(ProviderProfile profile, const std::filesystem::path& file) {
    return from_script(std::move(profile), read_file(file));
}

std::string ReplayProvider::complete(const ProviderRequest& request) {
    {
        std::lock_guard lock(mutex_);
        requests_.push_back(request);
    }
    const Entry* best = nullptr;
    auto score = [&](const Entry& e) { return std::pair{e.round, e.attempt == request.attempt ? 1 : 0}; };
    for (const auto& entry : entries_) {
        if (entry.task != request.task_key || entry.round > request.round) continue;
        if (entry.attempt && *entry.attempt != request.attempt) continue;
        if (!best || score(entry) >= score(*best)) best = &entry;
    }
    if (!best) {
        if (request.purpose == RequestPurpose::Ranking)
            throw ProviderUnavailable(profile_.provider_id + ": no scripted response for " + request.task_key);
        return R"({"claims":[]})";
    }
    if (best->unavailable) throw ProviderUnavailable(profile_.provider_id + ": scripted outage");
    return best->response;
}

std::vector<ProviderRequest> ReplayProvider::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

// ---------------------------------------------------------------------------
// HTTP

HttpProvider::HttpProvider(ProviderProfile profile) : profile_(std::move(profile)) {}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw ConfigError("base_url is not absolute: " + url);
    const auto slash = url.find('/', scheme + 3);
    SplitUrl out;
    out.origin = url.substr(0, slash);
    if (slash != std::string::npos) out.prefix = url.substr(slash);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

constexpr std::string_view kSystemPrompt =
    "You are a careful biomedical curator. Answer only with JSON that matches the supplied schema.";

}  // namespace

std::string HttpProvider::complete(const ProviderRequest& request) {
    std::string key = request.api_key;
    if (key.empty() && !profile_.credential_env.empty()) {
        const char* env = std::getenv(profile_.credential_env.c_str());
        if (!env || !*env)
            throw ProviderUnavailable(profile_.provider_id + ": credential variable " + profile_.credential_env +
                                      " is not set");
        key = env;
    }

    const auto url = split_url(profile_.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(profile_.timeout_seconds));
    client.set_write_timeout(std::chrono::seconds(profile_.timeout_seconds));

    httplib::Headers headers;
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    json body = {
        {"model", profile_.model},
        {"messages",
         json::array({{{"role", "system"}, {"content", kSystemPrompt}}, {{"role", "user"}, {"content", request.prompt}}})},
    };
    if (!request.response_schema.is_null()) {
        body["response_format"] = {
            {"type", "json_schema"},
            {"json_schema", {{"name", request.purpose == RequestPurpose::Ranking ? "ranking" : "claims"},
                             {"schema", request.response_schema}}},
        };
    }

    spdlog::debug("provider {} round {} attempt {}: POST {}", profile_.provider_id, request.round, request.attempt,
                 url.prefix + "/chat/completions");
    const auto result = client.Post(url.prefix + "/chat/completions", headers, body.dump(), "application/json");
    if (!result)
        throw ProviderUnavailable(profile_.provider_id + ": " + httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300)
        throw ProviderUnavailable(profile_.provider_id + ": HTTP " + std::to_string(result->status));

    json reply;
    try {
        reply = json::parse(result->body);
        const auto& content = reply.at("choices").at(0).at("message").at("content");
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw MalformedProviderOutput(profile_.provider_id + ": unexpected completion envelope: " + e.what());
    }
}

std::unique_ptr<Provider> make_provider(const ProviderProfile& profile) {
    if (profile.kind == ProviderKind::Replay) return ReplayProvider::from_file(profile, profile.script);
    return std::make_unique<HttpProvider>(profile);
}

}  // namespace cmkb
