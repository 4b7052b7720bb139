#pragma once

#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cmkb/agents.hpp"
#include "cmkb/provider.hpp"
#include "cmkb/store.hpp"

namespace httplib {
class Server;
}

namespace cmkb {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path store_dir;
    std::optional<std::filesystem::path> providers_path;
    RankingMode default_mode = RankingMode::Deterministic;
    std::vector<std::string> cors_origins;
    int provider_budget = 4;  // concurrent provider-backed /ask calls
};

// "HOST:PORT" or ":PORT". Throws ConfigError.
std::pair<std::string, int> parse_listen_address(std::string_view text);

// Counting semaphore bounding concurrent provider calls.
class RequestBudget {
public:
    explicit RequestBudget(int slots) : free_(slots) {}
    void acquire();
    void release();

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int free_;
};

class Service {
public:
    // Loads the provider named in the config (decision_maker role, else
    // primary_extractor) and the latest snapshot, if any.
    explicit Service(ServiceConfig config, Clock clock = system_clock());
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Replaces the ranking provider; used by tests and embedders.
    void set_ranking_provider(std::unique_ptr<Provider> provider);

    // Swaps in the store's latest snapshot. Returns its version, or nothing
    // when the store is empty (the previous snapshot, if any, is kept).
    std::optional<int> reload();

    // Binds the listen address; port 0 picks a free port, which is returned.
    int bind();
    // Blocks until stop().
    void run();
    void stop();
    bool running() const;

    RankingMode mode() const { return mode_; }
    httplib::Server& server() { return *server_; }

private:
    struct State {
        Snapshot snapshot;
        KnowledgeBase kb;
        Json document;  // to_json(kb)
    };

    std::shared_ptr<const State> state() const;
    void install_routes();

    ServiceConfig config_;
    Clock clock_;
    Store store_;
    RankingMode mode_;
    std::unique_ptr<Provider> provider_;
    std::unique_ptr<RequestBudget> budget_;
    std::unique_ptr<httplib::Server> server_;

    mutable std::mutex state_mutex_;
    std::shared_ptr<const State> state_;
};

}  // namespace cmkb
