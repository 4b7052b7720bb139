#include "cmkb/service.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "cmkb/text.hpp"

namespace cmkb {

using nlohmann::json;

std::pair<std::string, int> parse_listen_address(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw ConfigError("listen address must be HOST:PORT: " + std::string(text));
    std::string host(text.substr(0, colon));
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    if (host.empty()) host = "127.0.0.1";
    const auto port_text = text.substr(colon + 1);
    int port = -1;
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535)
        throw ConfigError("invalid port in listen address: " + std::string(text));
    return {host, port};
}

void RequestBudget::acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
}

void RequestBudget::release() {
    {
        std::lock_guard lock(mutex_);
        ++free_;
    }
    cv_.notify_one();
}

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

std::string dump(const json& value) { return value.dump(-1, ' ', false, json::error_handler_t::strict); }

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(dump(body), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
    send(res, status, json{{"code", code}, {"message", message}});
}

bool is_loopback(const std::string& addr) {
    return addr == "127.0.0.1" || addr == "::1" || addr == "::ffff:127.0.0.1" || addr.rfind("127.", 0) == 0;
}

std::optional<int> parse_version(const std::string& text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

json find_by_id(const json& list, const std::string& id) {
    for (const auto& item : list) {
        if (item.at("id") == id) return item;
    }
    return nullptr;
}

}  // namespace

Service::Service(ServiceConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      store_(config_.store_dir, clock_),
      mode_(RankingMode::Deterministic),
      budget_(std::make_unique<RequestBudget>(std::max(1, config_.provider_budget))),
      server_(std::make_unique<httplib::Server>()) {
    if (config_.providers_path) {
        const auto profiles = load_provider_config(*config_.providers_path);
        const auto* profile = find_role(profiles, ProviderRole::DecisionMaker);
        if (!profile) profile = find_role(profiles, ProviderRole::PrimaryExtractor);
        if (!profile) throw ConfigError("provider config has no decision_maker or primary_extractor");
        provider_ = make_provider(*profile);
        mode_ = config_.default_mode;
    } else if (config_.default_mode == RankingMode::ProviderBacked) {
        throw ConfigError("provider mode needs a provider config");
    }
    try {
        reload();
    } catch (const Error& e) {
        spdlog::error("initial load failed: {}", e.what());
    }
    install_routes();
}

Service::~Service() { stop(); }

void Service::set_ranking_provider(std::unique_ptr<Provider> provider) {
    provider_ = std::move(provider);
    if (provider_ && config_.default_mode == RankingMode::ProviderBacked) mode_ = RankingMode::ProviderBacked;
}

std::optional<int> Service::reload() {
    if (!store_.latest_version()) {
        spdlog::warn("store {} is empty", store_.root().string());
        return std::nullopt;
    }
    auto snapshot = store_.latest();
    auto kb = snapshot.kb();
    auto document = to_json(kb);
    auto next = std::make_shared<const State>(State{std::move(snapshot), std::move(kb), std::move(document)});
    const int version = next->snapshot.version;
    {
        std::lock_guard lock(state_mutex_);
        state_ = std::move(next);
    }
    spdlog::info("serving snapshot {}", version);
    return version;
}

std::shared_ptr<const Service::State> Service::state() const {
    std::lock_guard lock(state_mutex_);
    return state_;
}

int Service::bind() {
    if (config_.port == 0) return server_->bind_to_any_port(config_.host);
    if (!server_->bind_to_port(config_.host, config_.port))
        throw ConfigError("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    return config_.port;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

bool Service::running() const { return server_->is_running(); }

void Service::install_routes() {
    auto& srv = *server_;

    srv.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (origin.empty()) return;
        const auto& allowed = config_.cors_origins;
        if (std::find(allowed.begin(), allowed.end(), origin) != allowed.end() ||
            std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        }
    });
    srv.Options(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        const auto& allowed = config_.cors_origins;
        if (std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Provider-Key");
        }
        res.status = 204;
    });
    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        send_error(res, res.status, res.status == 404 ? "not_found" : "http_error", httplib::status_message(res.status));
    });
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        spdlog::error("unhandled exception: {}", message);
        send_error(res, 500, "internal", message);
    });

    auto with_state = [this](httplib::Response& res) -> std::shared_ptr<const State> {
        auto s = state();
        if (!s) send_error(res, 503, "empty_store", "the store has no snapshots");
        return s;
    };

    srv.Get("/api/v1/viruses", [with_state](const httplib::Request&, httplib::Response& res) {
        const auto s = with_state(res);
        if (!s) return;
        json list = json::array();
        for (const auto& v : s->kb.viruses)
            list.push_back({{"id", v.id}, {"name", v.name}, {"abbreviation", v.abbreviation}});
        send(res, 200, list);
    });

    srv.Get(R"(/api/v1/viruses/([^/]+))", [with_state](const httplib::Request& req, httplib::Response& res) {
        const auto s = with_state(res);
        if (!s) return;
        const auto entry = find_by_id(s->document.at("viruses"), req.matches[1].str());
        if (entry.is_null()) return send_error(res, 404, "unknown_virus", "unknown virus: " + req.matches[1].str());
        send(res, 200, entry);
    });

    srv.Get("/api/v1/toxins", [with_state](const httplib::Request&, httplib::Response& res) {
        const auto s = with_state(res);
        if (!s) return;
        json list = json::array();
        for (const auto& f : s->kb.toxin_families) {
            list.push_back(
                {{"id", f.id}, {"name", f.name}, {"abbreviation", f.abbreviation}, {"class_count", f.classes.size()}});
        }
        send(res, 200, list);
    });

    srv.Get(R"(/api/v1/toxins/([^/]+))", [with_state](const httplib::Request& req, httplib::Response& res) {
        const auto s = with_state(res);
        if (!s) return;
        auto entry = find_by_id(s->document.at("toxin_families"), req.matches[1].str());
        if (entry.is_null())
            return send_error(res, 404, "unknown_family", "unknown toxin family: " + req.matches[1].str());
        entry["class_count"] = entry.at("classes").size();
        send(res, 200, entry);
    });

    srv.Post("/api/v1/ask", [this, with_state](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error&) {
            return send_error(res, 400, "bad_request", "request body is not valid JSON");
        }
        if (!body.is_object() || !body.contains("question") || !body["question"].is_string())
            return send_error(res, 400, "bad_request", "body needs a string \"question\"");
        for (const auto& [key, value] : body.items()) {
            if (key != "question" && key != "geography" && key != "mode")
                return send_error(res, 400, "bad_request", "unknown field \"" + key + "\"");
            if (!value.is_string()) return send_error(res, 400, "bad_request", "\"" + key + "\" must be a string");
        }
        auto mode = mode_;
        if (body.contains("mode")) {
            const auto parsed = parse_ranking_mode(body["mode"].get<std::string>());
            if (!parsed) return send_error(res, 400, "bad_request", "mode must be deterministic or provider");
            mode = *parsed;
        }
        std::optional<std::string> geography;
        if (body.contains("geography")) geography = body["geography"].get<std::string>();

        const auto s = with_state(res);
        if (!s) return;
        const auto question = body["question"].get<std::string>();
        const auto verdict = guardrail_classify(question, s->kb);
        if (!verdict.allowed) {
            spdlog::info("guardrail refused ({}): {}", verdict.rule, question);
            return send_error(res, 422, "guardrail_refused", verdict.reason);
        }
        const auto query = make_query(question, verdict, geography);
        const auto pack = researcher_assemble(query, s->kb, nullptr, default_source_allowlist(), clock_);

        RankingResult result;
        if (mode == RankingMode::ProviderBacked && provider_) {
            budget_->acquire();
            try {
                result = rank_provider_backed(pack, query, *provider_, req.get_header_value("X-Provider-Key"), clock_);
            } catch (const Error& e) {
                budget_->release();
                return send_error(res, 502, to_string(e.code()), e.what());
            }
            budget_->release();
        } else {
            result = rank_deterministic(pack, query, clock_);
            if (mode == RankingMode::ProviderBacked) result.fallback_reason = "no ranking provider configured";
        }
        send(res, 200, render_result(result));
    });

    srv.Get("/api/v1/snapshots", [this](const httplib::Request&, httplib::Response& res) {
        json list = json::array();
        for (const auto& info : store_.list()) {
            list.push_back({{"version", info.version},
                            {"created_at", format_rfc3339(info.created_at)},
                            {"checksum", info.checksum}});
        }
        send(res, 200, list);
    });

    srv.Get(R"(/api/v1/snapshots/([^/]+)/diff/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        const auto from = parse_version(req.matches[1].str());
        const auto to = parse_version(req.matches[2].str());
        if (!from || !to) return send_error(res, 400, "bad_request", "versions must be integers");
        try {
            send(res, 200, to_json(store_.diff(*from, *to)));
        } catch (const UnknownVersion& e) {
            send_error(res, 404, "unknown_version", e.what());
        }
    });

    srv.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
        const auto s = state();
        json store = {{"snapshots", store_.list().size()}};
        if (s) {
            store["latest_version"] = s->snapshot.version;
            store["checksum"] = s->snapshot.checksum;
        }
        send(res, 200,
             json{{"status", s ? "ok" : "degraded"}, {"service", "cmkb"}, {"mode", to_string(mode_)}, {"store", store}});
    });

    srv.Post("/api/v1/admin/reload", [this](const httplib::Request& req, httplib::Response& res) {
        if (!is_loopback(req.remote_addr))
            return send_error(res, 403, "forbidden", "reload is only accepted from loopback");
        try {
            const auto version = reload();
            json body = {{"reloaded", version.has_value()}};
            if (version) body["version"] = *version;
            send(res, 200, body);
        } catch (const Error& e) {
            send_error(res, 500, to_string(e.code()), e.what());
        }
    });
}

}  // namespace cmkb
