// kb: command-line front end for curation, snapshots, diffs and the HTTP service.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cmkb/agents.hpp"
#include "cmkb/curation.hpp"
#include "cmkb/log.hpp"
#include "cmkb/service.hpp"
#include "cmkb/store.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw cmkb::ConfigError("cannot read " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const fs::path& file, const std::string& text) {
    const auto tmp = fs::path(file.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw cmkb::ConfigError("cannot write " + file.string());
        out << text;
        if (!out) throw cmkb::ConfigError("write failed for " + file.string());
    }
    fs::rename(tmp, file);
}

cmkb::Service* g_service = nullptr;

extern "C" void on_signal(int) {
    if (g_service) g_service->stop();
}

struct CurateOptions {
    std::string domain;
    std::string subject;
    fs::path config;
    int max_rounds = 3;
    fs::path out;
    fs::path in;
    std::vector<std::string> facets;
    std::string on_unresolved = "flag";
    fs::path log_file;
    fs::path provenance_file;
};

int run_curate(const CurateOptions& o) {
    const auto domain = cmkb::parse_domain(o.domain);
    if (!domain) throw cmkb::ConfigError("unknown domain: " + o.domain);

    fs::path base = o.in;
    if (base.empty()) {
        if (!fs::exists(o.out)) throw cmkb::ConfigError("no base KB: pass --in or point --out at an existing KB");
        base = o.out;
    }
    const auto kb = cmkb::parse_kb(read_text(base));

    const auto profiles = cmkb::load_provider_config(o.config);
    const auto* primary_profile = cmkb::find_role(profiles, cmkb::ProviderRole::PrimaryExtractor);
    const auto* verifier_profile = cmkb::find_role(profiles, cmkb::ProviderRole::Verifier);
    if (!primary_profile || !verifier_profile)
        throw cmkb::ConfigError("provider config needs one primary_extractor and one verifier");
    auto primary = cmkb::make_provider(*primary_profile);
    auto verifier = cmkb::make_provider(*verifier_profile);

    std::vector<cmkb::ExtractionTask> tasks;
    const auto& facets = o.facets.empty() ? cmkb::facets_for(*domain) : o.facets;
    for (const auto& facet : facets) tasks.push_back(cmkb::make_task(*domain, o.subject, facet, &kb));

    cmkb::ReconciliationPolicy policy;
    policy.max_rounds = o.max_rounds;
    if (o.on_unresolved == "drop") {
        policy.on_unresolved = cmkb::UnresolvedPolicy::DropClaim;
    } else if (o.on_unresolved != "flag") {
        throw cmkb::ConfigError("--on-unresolved must be flag or drop");
    }

    const auto result = cmkb::monthly_update(kb, tasks, *primary, *verifier, policy);
    write_text(o.out, cmkb::serialize_kb(result.kb));
    const auto log = cmkb::to_json(result.log);
    if (!o.log_file.empty()) write_text(o.log_file, cmkb::canonical_dump(log));
    if (!o.provenance_file.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& p : result.provenance) list.push_back(cmkb::to_json(p));
        write_text(o.provenance_file, cmkb::canonical_dump({{"provenance", list}}));
    }
    std::cout << cmkb::canonical_dump(log);
    return result.log.failures() == 0 ? 0 : 3;
}

std::vector<cmkb::Provenance> read_provenance(const fs::path& file) {
    std::vector<cmkb::Provenance> out;
    if (file.empty()) return out;
    const auto doc = nlohmann::json::parse(read_text(file));
    for (const auto& item : doc.at("provenance")) out.push_back(cmkb::provenance_from_json(item));
    return out;
}

void print_findings(const std::vector<cmkb::Finding>& findings) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& f : findings) list.push_back({{"path", f.path}, {"rule", f.rule_id}, {"message", f.message}});
    std::cout << cmkb::canonical_dump({{"findings", list}});
}

}  // namespace

int main(int argc, char** argv) {
    cmkb::init_logging();

    CLI::App app{"Countermeasure knowledge base tool"};
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "Validate a KB document");
    fs::path validate_in;
    bool require_refs = false;
    validate->add_option("--in", validate_in, "KB document")->required();
    validate->add_flag("--require-references", require_refs, "Every entry must cite a reference");

    auto* curate = app.add_subcommand("curate", "Run extraction and cross-validation for one subject");
    CurateOptions co;
    curate->add_option("--domain", co.domain, "trx or toxin")->required();
    curate->add_option("--subject", co.subject, "Virus or toxin family id")->required();
    curate->add_option("--config", co.config, "Provider config (JSON)")->required();
    curate->add_option("--max-rounds", co.max_rounds, "Cross-validation rounds")->check(CLI::PositiveNumber);
    curate->add_option("--out", co.out, "Output KB document")->required();
    curate->add_option("--in", co.in, "Base KB (defaults to --out)");
    curate->add_option("--facet", co.facets, "Facet to curate (repeatable; default all)");
    curate->add_option("--on-unresolved", co.on_unresolved, "flag or drop");
    curate->add_option("--log", co.log_file, "Write the update log here");
    curate->add_option("--provenance", co.provenance_file, "Write provenance records here");

    auto* snapshot = app.add_subcommand("snapshot", "Store a KB document as the next snapshot");
    fs::path store_dir;
    fs::path snapshot_in;
    fs::path snapshot_prov;
    snapshot->add_option("--store", store_dir, "Store directory")->required();
    snapshot->add_option("--in", snapshot_in, "KB document")->required();
    snapshot->add_option("--provenance", snapshot_prov, "Provenance file from kb curate");

    auto* diff = app.add_subcommand("diff", "Diff two snapshots");
    int from = 0;
    int to = 0;
    diff->add_option("--store", store_dir, "Store directory")->required();
    diff->add_option("--from", from, "Older version")->required();
    diff->add_option("--to", to, "Newer version")->required();

    auto* serve = app.add_subcommand("serve", "Serve the latest snapshot over HTTP");
    std::string listen = "127.0.0.1:8080";
    fs::path providers;
    std::string mode = "deterministic";
    std::vector<std::string> cors;
    int budget = 4;
    serve->add_option("--store", store_dir, "Store directory")->required();
    serve->add_option("--listen", listen, "HOST:PORT");
    serve->add_option("--providers", providers, "Provider config (JSON)");
    serve->add_option("--mode", mode, "deterministic or provider");
    serve->add_option("--cors", cors, "Allowed CORS origin (repeatable)");
    serve->add_option("--provider-budget", budget, "Concurrent provider calls")->check(CLI::PositiveNumber);

    auto* ask = app.add_subcommand("ask", "Rank countermeasures for a question");
    std::string question;
    std::string geography;
    fs::path ask_in;
    ask->add_option("question", question, "Question text")->required();
    ask->add_option("--geography", geography, "Geographic context");
    auto* ask_store = ask->add_option("--store", store_dir, "Store directory (latest snapshot)");
    auto* ask_kb = ask->add_option("--in", ask_in, "KB document");
    ask_store->excludes(ask_kb);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            const auto kb = cmkb::parse_kb(read_text(validate_in));
            cmkb::ValidationOptions options;
            options.require_references = require_refs;
            const auto report = cmkb::validate_kb(kb, options);
            print_findings(report.findings);
            return report.ok() ? 0 : 1;
        }
        if (*curate) return run_curate(co);
        if (*snapshot) {
            cmkb::Store store(store_dir);
            const auto snap = store.create(cmkb::parse_kb(read_text(snapshot_in)), read_provenance(snapshot_prov));
            std::cout << cmkb::canonical_dump({{"version", snap.version},
                                               {"checksum", snap.checksum},
                                               {"created_at", cmkb::format_rfc3339(snap.created_at)}});
            return 0;
        }
        if (*diff) {
            cmkb::Store store(store_dir);
            std::cout << cmkb::canonical_dump(cmkb::to_json(store.diff(from, to)));
            return 0;
        }
        if (*serve) {
            cmkb::ServiceConfig config;
            std::tie(config.host, config.port) = cmkb::parse_listen_address(listen);
            config.store_dir = store_dir;
            if (!providers.empty()) config.providers_path = providers;
            const auto parsed_mode = cmkb::parse_ranking_mode(mode);
            if (!parsed_mode) throw cmkb::ConfigError("--mode must be deterministic or provider");
            config.default_mode = *parsed_mode;
            config.cors_origins = cors;
            config.provider_budget = budget;

            cmkb::Service service(config);
            const int port = service.bind();
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on " << config.host << ":" << port << " (" << cmkb::to_string(service.mode())
                      << ")\n";
            service.run();
            g_service = nullptr;
            return 0;
        }
        if (*ask) {
            cmkb::KnowledgeBase kb;
            if (!ask_in.empty()) {
                kb = cmkb::parse_kb(read_text(ask_in));
            } else if (!store_dir.empty()) {
                kb = cmkb::Store(store_dir).latest().kb();
            } else {
                throw cmkb::ConfigError("ask needs --store or --in");
            }
            const auto verdict = cmkb::guardrail_classify(question, kb);
            if (!verdict.allowed) {
                std::cerr << "refused: " << verdict.reason << "\n";
                return 4;
            }
            const auto query =
                cmkb::make_query(question, verdict, geography.empty() ? std::nullopt : std::optional(geography));
            const auto pack = cmkb::researcher_assemble(query, kb);
            std::cout << cmkb::canonical_dump(cmkb::render_result(cmkb::rank_deterministic(pack, query)));
            return 0;
        }
    } catch (const cmkb::InvariantError& e) {
        std::cerr << "kb: invariant violated: " << e.what() << "\n";
        print_findings(e.findings());
        return 1;
    } catch (const cmkb::ValidationError& e) {
        std::cerr << "kb: validation failed: " << e.what() << "\n";
        print_findings(e.findings());
        return 1;
    } catch (const cmkb::Error& e) {
        std::cerr << "kb: " << cmkb::to_string(e.code()) << ": " << e.what();
        if (!e.path().empty()) std::cerr << " (at " << e.path() << ")";
        std::cerr << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "kb: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
