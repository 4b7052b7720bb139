#include "doctest.h"

#include <random>

#include "httplib.h"

#include "oracles.hpp"

#include "cmkb/curation.hpp"
#include "cmkb/diff.hpp"
#include "cmkb/errors.hpp"
#include "cmkb/prompt.hpp"
#include "cmkb/provider.hpp"
#include "cmkb/schema_check.hpp"
#include "cmkb/text.hpp"

using namespace cmkb;
using namespace cmkb::testing;
using nlohmann::json;

namespace {

const std::string kLasvPrefix = "viruses/lasv/categories/pathogen_targeted";
const std::vector<std::string> kLasvNames = {"Arevirumab-3", "Favipiravir", "LHF-535", "Ribavirin (IV)", "ST-193"};

ProviderProfile profile(const std::string& id, ProviderRole role) {
    ProviderProfile p;
    p.provider_id = id;
    p.role = role;
    p.kind = ProviderKind::Replay;
    return p;
}

std::unique_ptr<ReplayProvider> replay(const std::string& id, ProviderRole role, const json& script) {
    return ReplayProvider::from_script(profile(id, role), script.dump());
}

json name_claims(const std::vector<std::string>& names) {
    json claims = json::array();
    for (const auto& n : names) {
        claims.push_back({{"field_path", kLasvPrefix},
                          {"value", n},
                          {"sources", {{{"title", "Source for " + n}, {"url", "https://pubmed.ncbi.nlm.nih.gov/1/"}}}}});
    }
    return claims;
}

Timestamp fixed_time() { return parse_rfc3339("2026-01-01T00:00:00Z"); }
Clock fixed_clock() {
    return [] { return fixed_time(); };
}

std::set<std::string> names_of(const ClaimSet& set) {
    std::set<std::string> out;
    for (const auto& [key, _] : set) out.insert(key.value);
    return out;
}

}  // namespace

TEST_SUITE("prompts") {
    TEST_CASE("viral prompt names the subject and the clinical trial registries") {
        const auto task = make_task(Domain::ViralTRx, "niv", "treatments.pathogen_targeted", &fixture_kb());
        const auto prompt = build_prompt(task);
        CHECK(prompt.find("Nipah virus (NiV)") != std::string::npos);
        CHECK(prompt.find("Clinical Trial Registries") != std::string::npos);
        for (const auto& e : builtin_catalog(Domain::ViralTRx).subset({"Clinical Trial Registries"}).entries)
            CHECK(prompt.find(e.name) != std::string::npos);
        CHECK(prompt.find("viruses/niv/categories/pathogen_targeted") != std::string::npos);
    }

    TEST_CASE("toxin prompt lists ConoServer") {
        const auto task = make_task(Domain::MarineToxin, "conotoxins", "classes", &fixture_kb());
        const auto prompt = build_prompt(task);
        CHECK(prompt.find("Conotoxins") != std::string::npos);
        CHECK(prompt.find("ConoServer") != std::string::npos);
    }

    TEST_CASE("prompts are deterministic") {
        const auto task = make_task(Domain::MarineToxin, "maitotoxins", "biothreat_concerns", &fixture_kb());
        CHECK(build_prompt(task) == build_prompt(task));
    }

    TEST_CASE("unknown template and invalid tasks") {
        auto task = make_task(Domain::ViralTRx, "lasv", "treatments.host_targeted");
        task.prompt_template_id = "nope.v0";
        CHECK_THROWS_AS(build_prompt(task), UnknownTemplate);
        CHECK_THROWS_AS(make_task(Domain::ViralTRx, "lasv", "classes"), ConfigError);
        auto empty = make_task(Domain::ViralTRx, "lasv", "treatments.host_targeted");
        empty.sources.entries.clear();
        CHECK_THROWS_AS(build_prompt(empty), ConfigError);
    }

    TEST_CASE("render reports missing variables") {
        CHECK_THROWS_AS(render_template("rank.decision.v1", {{"subject_name", "x"}}), UnknownTemplate);
        for (const auto& id : template_ids()) CHECK_FALSE(template_text(id).empty());
    }

    TEST_CASE("task keys and prefixes") {
        const auto task = make_task(Domain::ViralTRx, "niv", "treatments.host_targeted");
        CHECK(task.key() == "trx:niv:treatments.host_targeted");
        CHECK(task.path_prefix() == "viruses/niv/categories/host_targeted");
        const auto toxin = make_task(Domain::MarineToxin, "conotoxins", "classes");
        CHECK(toxin.key() == "toxin:conotoxins:classes");
        CHECK(toxin.path_prefix() == "toxin_families/conotoxins/classes");
    }
}

TEST_SUITE("claims") {
    TEST_CASE("claim paths resolve against the schema") {
        CHECK(resolve_claim_path(kLasvPrefix)->kind == ClaimTarget::Kind::TreatmentList);
        const auto field = resolve_claim_path(kLasvPrefix + "/ST-193/dosage");
        REQUIRE(field);
        CHECK(field->kind == ClaimTarget::Kind::TreatmentField);
        CHECK(field->item == "ST-193");
        CHECK_FALSE(field->multi_valued);
        CHECK(resolve_claim_path("toxin_families/conotoxins/classes/alpha/source_organisms")->multi_valued);
        CHECK(resolve_claim_path("toxin_families/conotoxins/biothreat_concerns")->kind ==
              ClaimTarget::Kind::Biothreat);
        CHECK_FALSE(resolve_claim_path("viruses/lasv/categories/vaccines"));
        CHECK_FALSE(resolve_claim_path(kLasvPrefix + "/ST-193/colour"));
        CHECK_FALSE(resolve_claim_path("viruses//categories/pathogen_targeted"));
    }

    TEST_CASE("insert canonicalizes and merges duplicate sources") {
        ClaimSet set(lasv_pathogen_task());
        CHECK(set.insert({kLasvPrefix, "  ST-193 ", {{"a", std::nullopt, std::nullopt}}, "p", {}}));
        CHECK_FALSE(set.insert({kLasvPrefix, "ST-193", {{"b", std::nullopt, std::nullopt}}, "p", {}}));
        REQUIRE(set.size() == 1);
        CHECK(set.find({kLasvPrefix, "ST-193"})->sources.size() == 2);
    }

    TEST_CASE("bare arrays and wrapped objects parse alike") {
        const auto task = lasv_pathogen_task();
        const auto a = parse_claims_response(name_claims(kLasvNames).dump(), task, "p", fixed_time());
        const auto b = parse_claims_response(json{{"claims", name_claims(kLasvNames)}}.dump(), task, "p", fixed_time());
        CHECK(names_of(a) == names_of(b));
        CHECK(a.size() == 5);
    }

    TEST_CASE("responses outside the facet or schema are malformed") {
        const auto task = lasv_pathogen_task();
        auto parse = [&](const json& claims) { return parse_claims_response(claims.dump(), task, "p", fixed_time()); };
        CHECK_THROWS_AS(parse(json::array({{{"field_path", "viruses/niv/categories/pathogen_targeted"}, {"value", "x"}}})),
                        MalformedProviderOutput);
        CHECK_THROWS_AS(parse(json::array({{{"field_path", kLasvPrefix}, {"value", "   "}}})), MalformedProviderOutput);
        CHECK_THROWS_AS(parse(json::array({{{"field_path", kLasvPrefix}}})), MalformedProviderOutput);
        CHECK_THROWS_AS(parse(json::array({{{"field_path", kLasvPrefix + "/ST-193/dosage"}, {"value", "1 g"}},
                                           {{"field_path", kLasvPrefix + "/ST-193/dosage"}, {"value", "2 g"}}})),
                        MalformedProviderOutput);
        CHECK_THROWS_AS(parse(json::array({{{"field_path", kLasvPrefix}, {"value", "x"},
                                            {"sources", {{{"url", "relative/path"}}}}}})),
                        MalformedProviderOutput);
        CHECK_THROWS_AS(parse_claims_response("The treatments are ...", task, "p", fixed_time()),
                        MalformedProviderOutput);
    }
}

TEST_SUITE("providers") {
    TEST_CASE("config parsing") {
        const auto profiles = parse_provider_config(R"({"providers": [
            {"provider_id": "gpt", "role": "primary_extractor", "base_url": "https://api.example.org/v1",
             "model": "m1", "credential_env": "GPT_KEY"},
            {"provider_id": "grok", "role": "verifier", "kind": "replay", "script": "grok.json"}]})",
                                                    "/etc/kb");
        REQUIRE(profiles.size() == 2);
        CHECK(profiles[0].kind == ProviderKind::Http);
        CHECK(profiles[0].timeout_seconds == 120);
        CHECK(profiles[1].script == std::filesystem::path("/etc/kb/grok.json"));
        CHECK(find_role(profiles, ProviderRole::Verifier)->provider_id == "grok");
        CHECK(find_role(profiles, ProviderRole::DecisionMaker) == nullptr);
    }

    TEST_CASE("config errors") {
        CHECK_THROWS_AS(parse_provider_config(R"([{"provider_id": "a", "role": "verifier", "api_key": "secret"}])"),
                        SchemaError);
        const std::string url = R"("base_url": "http://127.0.0.1:9/v1")";
        CHECK_THROWS_AS(parse_provider_config(R"([{"provider_id": "a", "role": "verifier", )" + url + R"(},
                                                  {"provider_id": "a", "role": "primary", )" + url + "}]"),
                        ConfigError);
        CHECK_THROWS_AS(parse_provider_config(R"([{"provider_id": "a", "role": "verifier", )" + url + R"(},
                                                  {"provider_id": "b", "role": "verifier", )" + url + "}]"),
                        ConfigError);
        CHECK_THROWS_AS(parse_provider_config(R"([{"provider_id": "a", "role": "verifier"}])"), SchemaError);
    }

    TEST_CASE("replay picks the latest round not above the request") {
        auto p = replay("p", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", "trx:lasv:treatments.pathogen_targeted"}, {"round", 1},
                                      {"claims", name_claims({"A"})}},
                                     {{"task", {{"domain", "trx"}, {"subject", "lasv"},
                                                {"facet", "treatments.pathogen_targeted"}}},
                                      {"round", 3},
                                      {"claims", name_claims({"C"})}}}));
        const auto task = lasv_pathogen_task();
        CHECK(names_of(extract_claims(*p, task, 1, {}, fixed_clock())) == std::set<std::string>{"A"});
        CHECK(names_of(extract_claims(*p, task, 2, {}, fixed_clock())) == std::set<std::string>{"A"});
        CHECK(names_of(extract_claims(*p, task, 4, {}, fixed_clock())) == std::set<std::string>{"C"});
        CHECK(p->requests().size() == 3);
        CHECK(p->requests()[0].response_schema.is_object());
    }

    TEST_CASE("mock loaded with the LASV rows yields five claims") {
        auto p = replay("p", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", "trx:lasv:treatments.pathogen_targeted"},
                                      {"claims", name_claims(kLasvNames)}}}));
        const auto set = extract_claims(*p, lasv_pathogen_task(), 1, {}, fixed_clock());
        CHECK(set.size() == 5);
        for (const auto& claim : set.claims()) {
            CHECK(claim.field_path == kLasvPrefix);
            CHECK(claim.provider_id == "p");
            CHECK(claim.sources.size() == 1);
        }
    }

    TEST_CASE("empty script yields an empty set") {
        auto p = replay("p", ProviderRole::PrimaryExtractor, json::array());
        CHECK(extract_claims(*p, lasv_pathogen_task(), 1, {}, fixed_clock()).empty());
    }

    TEST_CASE("garbage twice is malformed, garbage once is retried") {
        const std::string key = "trx:lasv:treatments.pathogen_targeted";
        auto bad = replay("p", ProviderRole::PrimaryExtractor,
                          json::array({{{"task", key}, {"response", "Sure! Here are the treatments."}}}));
        CHECK_THROWS_AS(extract_claims(*bad, lasv_pathogen_task(), 1, {}, fixed_clock()), MalformedProviderOutput);
        CHECK(bad->requests().size() == 2);

        auto flaky = replay("p", ProviderRole::PrimaryExtractor,
                            json::array({{{"task", key}, {"attempt", 1}, {"response", "{oops"}},
                                         {{"task", key}, {"attempt", 2}, {"claims", name_claims({"ST-193"})}}}));
        CHECK(extract_claims(*flaky, lasv_pathogen_task(), 1, {}, fixed_clock()).size() == 1);
    }

    TEST_CASE("scripted outage is ProviderUnavailable") {
        auto p = replay("p", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", "trx:lasv:treatments.pathogen_targeted"}, {"error", "unavailable"}}}));
        CHECK_THROWS_AS(extract_claims(*p, lasv_pathogen_task(), 1, {}, fixed_clock()), ProviderUnavailable);
    }

    TEST_CASE("http provider speaks chat completions with a schema and bearer key") {
        httplib::Server server;
        json seen;
        std::string auth;
        server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
            seen = json::parse(req.body);
            auth = req.get_header_value("Authorization");
            json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", name_claims({"ST-193"}).dump()}}}}}}};
            res.set_content(reply.dump(), "application/json");
        });
        server.Post("/down/chat/completions",
                    [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
        const int port = server.bind_to_any_port("127.0.0.1");
        std::thread thread([&] { server.listen_after_bind(); });
        server.wait_until_ready();

        ProviderProfile p = profile("gpt", ProviderRole::PrimaryExtractor);
        p.kind = ProviderKind::Http;
        p.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1/";
        p.model = "test-model";
        p.credential_env = "CMKB_TEST_KEY_THAT_IS_NOT_SET";
        HttpProvider http(p);

        ProviderRequest request;
        request.task_key = "trx:lasv:treatments.pathogen_targeted";
        request.prompt = "hello";
        request.response_schema = provider_contract().standalone("claims_response");
        CHECK_THROWS_AS(http.complete(request), ProviderUnavailable);

        request.api_key = "sk-test";
        const auto text = http.complete(request);
        CHECK(json::parse(text) == name_claims({"ST-193"}));
        CHECK(auth == "Bearer sk-test");
        CHECK(seen["model"] == "test-model");
        CHECK(seen["response_format"]["type"] == "json_schema");
        CHECK(seen["messages"][1]["content"] == "hello");

        p.base_url = "http://127.0.0.1:" + std::to_string(port) + "/down";
        CHECK_THROWS_AS(HttpProvider(p).complete(request), ProviderUnavailable);

        server.stop();
        thread.join();
    }
}

TEST_SUITE("cross_validate") {
    TEST_CASE("identical sets give an empty report") {
        const auto task = lasv_pathogen_task();
        const auto set = parse_claims_response(name_claims(kLasvNames).dump(), task, "p", fixed_time());
        CHECK(cross_validate(set, set).empty());
    }

    TEST_CASE("verifier lacking ST-193") {
        const auto task = lasv_pathogen_task();
        std::vector<RawClaim> primary;
        std::vector<RawClaim> verifier;
        for (const auto& n : kLasvNames) {
            primary.push_back({kLasvPrefix, n});
            if (n != "ST-193") verifier.push_back({kLasvPrefix, n});
        }
        const auto report = cross_validate(to_claim_set(primary, task, "p"), to_claim_set(verifier, task, "v"));
        REQUIRE(report.missing_in_verifier.size() == 1);
        CHECK(report.missing_in_verifier[0].value == "ST-193");
        CHECK(report.missing_in_primary.empty());
        CHECK(report.conflicting.empty());
        CHECK(as_oracle_report(report).missing_in_verifier == brute_force_cross_validate(primary, verifier).missing_in_verifier);
    }

    TEST_CASE("dosage spelling variants follow the canonicalizer") {
        const auto task = lasv_pathogen_task();
        const auto path = kLasvPrefix + "/Favipiravir/dosage";
        // Whitespace-collapse keeps "600 mg" and "600mg" distinct; the oracle agrees.
        const std::vector<RawClaim> p = {{path, "600 mg"}};
        const std::vector<RawClaim> v = {{path, "600mg"}};
        const auto report = cross_validate(to_claim_set(p, task, "p"), to_claim_set(v, task, "v"));
        const auto oracle = brute_force_cross_validate(p, v);
        CHECK(as_oracle_report(report).conflicting == oracle.conflicting);
        CHECK(report.conflicting.size() == 1);

        const std::vector<RawClaim> spaced = {{path, " 600   mg "}};
        CHECK(cross_validate(to_claim_set(p, task, "p"), to_claim_set(spaced, task, "v")).empty());
    }

    TEST_CASE("different tasks are a mismatch") {
        ClaimSet a(lasv_pathogen_task());
        ClaimSet b(make_task(Domain::ViralTRx, "lasv", "treatments.host_targeted"));
        CHECK_THROWS_AS(cross_validate(a, b), TaskMismatch);
    }

    TEST_CASE("randomized sets: oracle equivalence, identity, swap symmetry, disjointness") {
        std::mt19937 rng(11);
        const auto task = lasv_pathogen_task();
        for (int i = 0; i < 300; ++i) {
            const auto p = random_claims(rng, 20);
            const auto v = random_claims(rng, 20);
            const auto ps = to_claim_set(p, task, "p");
            const auto vs = to_claim_set(v, task, "v");
            const auto report = cross_validate(ps, vs);
            const auto got = as_oracle_report(report);
            const auto want = brute_force_cross_validate(p, v);
            CHECK(got.missing_in_verifier == want.missing_in_verifier);
            CHECK(got.missing_in_primary == want.missing_in_primary);
            CHECK(got.conflicting == want.conflicting);

            CHECK(cross_validate(ps, ps).empty());

            const auto swapped = as_oracle_report(cross_validate(vs, ps));
            CHECK(swapped.missing_in_verifier == got.missing_in_primary);
            CHECK(swapped.missing_in_primary == got.missing_in_verifier);
            std::set<std::tuple<std::string, std::string, std::string>> flipped;
            for (const auto& [path, a, b] : swapped.conflicting) flipped.insert({path, b, a});
            CHECK(flipped == got.conflicting);

            std::set<std::pair<std::string, std::string>> seen;
            for (const auto& k : got.missing_in_verifier) CHECK(seen.insert(k).second);
            for (const auto& k : got.missing_in_primary) CHECK(seen.insert(k).second);
            for (const auto& [path, a, b] : got.conflicting) {
                CHECK(seen.insert({path, a}).second);
                CHECK(seen.insert({path, b}).second);
            }
            CHECK(report.empty() == (names_of(ps) == names_of(vs) && ps.size() == vs.size() &&
                                     std::equal(ps.begin(), ps.end(), vs.begin(),
                                                [](const auto& x, const auto& y) { return x.first == y.first; })));
        }
    }
}

TEST_SUITE("reconcile") {
    const std::string kKey = "trx:lasv:treatments.pathogen_targeted";

    TEST_CASE("agree on round one") {
        auto p = replay("gpt", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", kKey}, {"claims", name_claims(kLasvNames)}}}));
        auto v = replay("grok", ProviderRole::Verifier,
                        json::array({{{"task", kKey}, {"claims", name_claims(kLasvNames)}}}));
        const auto outcome = reconcile(lasv_pathogen_task(), *p, *v, {}, fixed_clock());
        CHECK(outcome.rounds == 1);
        CHECK(outcome.unresolved.empty());
        CHECK(outcome.claims.size() == 5);
        REQUIRE(outcome.provenance.size() == 5);
        for (const auto& prov : outcome.provenance) {
            CHECK(prov.rounds == 1);
            CHECK(prov.extracted_by == "gpt");
            CHECK(prov.verified_by == std::vector<std::string>{"grok"});
        }
    }

    TEST_CASE("verifier's extra treatment confirmed by the primary in round two") {
        std::vector<std::string> four(kLasvNames.begin(), kLasvNames.end() - 1);
        auto p = replay("gpt", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", kKey}, {"round", 1}, {"claims", name_claims(four)}},
                                     {{"task", kKey}, {"round", 2}, {"claims", name_claims(kLasvNames)}}}));
        auto v = replay("grok", ProviderRole::Verifier,
                        json::array({{{"task", kKey}, {"claims", name_claims(kLasvNames)}}}));
        const auto outcome = reconcile(lasv_pathogen_task(), *p, *v, {3, UnresolvedPolicy::FlagForHuman}, fixed_clock());
        CHECK(outcome.rounds == 2);
        CHECK(outcome.unresolved.empty());
        CHECK(outcome.claims.contains({kLasvPrefix, "ST-193"}));
        for (const auto& prov : outcome.provenance) {
            CHECK(prov.rounds == (prov.field_path == kLasvPrefix + "/ST-193" ? 2 : 1));
        }
        // The round-two prompt to the primary carries the disputed claim.
        const auto requests = p->requests();
        REQUIRE(requests.size() == 2);
        CHECK(requests[1].round == 2);
        CHECK(requests[1].prompt.find("ST-193") != std::string::npos);
        CHECK(requests[1].prompt.find("did not") != std::string::npos);
    }

    TEST_CASE("never converging stops at max_rounds and flags") {
        auto p = replay("gpt", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", kKey}, {"claims", name_claims({"Favipiravir", "ST-193"})}}}));
        auto v = replay("grok", ProviderRole::Verifier,
                        json::array({{{"task", kKey}, {"claims", name_claims({"Favipiravir", "LHF-535"})}}}));
        const auto outcome = reconcile(lasv_pathogen_task(), *p, *v, {3, UnresolvedPolicy::FlagForHuman}, fixed_clock());
        CHECK(outcome.rounds == 3);
        CHECK(outcome.reports.size() == 3);
        CHECK(outcome.unresolved.size() == 2);
        CHECK(outcome.claims.size() == 1);
        CHECK(outcome.dropped == 0);
        CHECK(p->requests().size() == 3);
    }

    TEST_CASE("never converging with DropClaim drops instead of flagging") {
        auto p = replay("gpt", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", kKey}, {"claims", name_claims({"Favipiravir", "ST-193"})}}}));
        auto v = replay("grok", ProviderRole::Verifier,
                        json::array({{{"task", kKey}, {"claims", name_claims({"Favipiravir", "LHF-535"})}}}));
        const auto outcome = reconcile(lasv_pathogen_task(), *p, *v, {2, UnresolvedPolicy::DropClaim}, fixed_clock());
        CHECK(outcome.rounds == 2);
        CHECK(outcome.unresolved.empty());
        CHECK(outcome.dropped == 2);
        CHECK(names_of(outcome.claims) == std::set<std::string>{"Favipiravir"});
    }

    TEST_CASE("misconfigured providers are rejected") {
        auto p = replay("same", ProviderRole::PrimaryExtractor, json::array());
        auto v = replay("same", ProviderRole::Verifier, json::array());
        CHECK_THROWS_AS(reconcile(lasv_pathogen_task(), *p, *v), ConfigError);
        auto v2 = replay("other", ProviderRole::PrimaryExtractor, json::array());
        CHECK_THROWS_AS(reconcile(lasv_pathogen_task(), *p, *v2), ConfigError);
        auto v3 = replay("other", ProviderRole::Verifier, json::array());
        CHECK_THROWS_AS(reconcile(lasv_pathogen_task(), *p, *v3, {0, UnresolvedPolicy::FlagForHuman}), ConfigError);
    }

    TEST_CASE("provider errors carry the round") {
        auto p = replay("gpt", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", kKey}, {"round", 1}, {"claims", name_claims({"A"})}},
                                     {{"task", kKey}, {"round", 2}, {"error", "unavailable"}}}));
        auto v = replay("grok", ProviderRole::Verifier, json::array({{{"task", kKey}, {"claims", name_claims({"B"})}}}));
        try {
            reconcile(lasv_pathogen_task(), *p, *v, {}, fixed_clock());
            FAIL("expected ProviderUnavailable");
        } catch (const ProviderUnavailable& e) {
            CHECK(std::string(e.what()).find("round 2") != std::string::npos);
        }
    }

    TEST_CASE("randomized scripts always terminate within max_rounds with one provenance per leaf") {
        std::mt19937 rng(5);
        const auto task = lasv_pathogen_task();
        for (int i = 0; i < 100; ++i) {
            json ps = json::array();
            json vs = json::array();
            for (int round = 1; round <= 4; ++round) {
                auto to_json_claims = [](const std::vector<RawClaim>& raw) {
                    json out = json::array();
                    for (const auto& c : raw) out.push_back({{"field_path", c.path}, {"value", c.value}});
                    return out;
                };
                ps.push_back({{"task", kKey}, {"round", round}, {"claims", to_json_claims(random_claims(rng, 6))}});
                vs.push_back({{"task", kKey}, {"round", round}, {"claims", to_json_claims(random_claims(rng, 6))}});
            }
            auto p = replay("gpt", ProviderRole::PrimaryExtractor, ps);
            auto v = replay("grok", ProviderRole::Verifier, vs);
            const int max_rounds = 1 + static_cast<int>(rng() % 4);
            const auto outcome = reconcile(task, *p, *v, {max_rounds, UnresolvedPolicy::FlagForHuman}, fixed_clock());
            CHECK(outcome.rounds >= 1);
            CHECK(outcome.rounds <= max_rounds);
            CHECK(static_cast<int>(outcome.reports.size()) == outcome.rounds);
            CHECK(outcome.unresolved.empty() == outcome.reports.back().empty());
            std::set<std::string> leaves;
            for (const auto& c : outcome.claims.claims()) leaves.insert(claim_leaf_path(c));
            std::set<std::string> recorded;
            for (const auto& prov : outcome.provenance) CHECK(recorded.insert(prov.field_path).second);
            CHECK(recorded == leaves);
        }
    }
}

TEST_SUITE("apply_claims") {
    TEST_CASE("empty set is the identity") {
        CHECK(apply_claims(fixture_kb(), ClaimSet(lasv_pathogen_task())) == fixture_kb());
    }

    TEST_CASE("five LASV treatments onto an empty entry") {
        auto kb = fixture_kb();
        kb.find_virus("lasv")->categories[CategoryKind::PathogenTargeted].clear();
        const auto before = kb;
        const auto set = parse_claims_response(name_claims(kLasvNames).dump(), lasv_pathogen_task(), "p", fixed_time());
        const auto out = apply_claims(kb, set);
        CHECK(kb == before);
        const auto& list = out.find_virus("lasv")->categories.at(CategoryKind::PathogenTargeted);
        CHECK(list.size() == 5);
        CHECK(validate_kb(out).ok());
    }

    TEST_CASE("fields, class facets and biothreat text land at their paths") {
        ClaimSet trx(lasv_pathogen_task());
        trx.insert({kLasvPrefix + "/ST-193/dosage", "10 mg/kg", {}, "p", {}});
        auto out = apply_claims(fixture_kb(), trx);
        const auto& list = out.find_virus("lasv")->categories.at(CategoryKind::PathogenTargeted);
        CHECK(std::find_if(list.begin(), list.end(), [](const Treatment& t) {
                  return t.name == "ST-193" && t.dosage == "10 mg/kg";
              }) != list.end());

        ClaimSet toxin(make_task(Domain::MarineToxin, "maitotoxins", "classes"));
        const auto cls = fixture_kb().find_family("maitotoxins")->classes[0].name;
        toxin.insert({"toxin_families/maitotoxins/classes/" + escape_segment(cls) + "/analogues", "MTX-9", {}, "p", {}});
        out = apply_claims(fixture_kb(), toxin);
        const auto& analogues = out.find_family("maitotoxins")->classes[0].analogues;
        CHECK(std::find(analogues.begin(), analogues.end(), "MTX-9") != analogues.end());

        ClaimSet threat(make_task(Domain::MarineToxin, "maitotoxins", "biothreat_concerns"));
        threat.insert({"toxin_families/maitotoxins/biothreat_concerns", "Low public-health concern.", {}, "p", {}});
        CHECK(apply_claims(fixture_kb(), threat).find_family("maitotoxins")->biothreat_concerns ==
              "Low public-health concern.");

        ClaimSet bad(make_task(Domain::MarineToxin, "maitotoxins", "biothreat_concerns"));
        bad.insert({"toxin_families/maitotoxins/biothreat_concerns", "Protocol to synthesize and weaponize it", {}, "p", {}});
        CHECK_THROWS_AS(apply_claims(fixture_kb(), bad), PolicyViolation);
    }

    TEST_CASE("unknown subject is a path conflict") {
        ClaimSet set(make_task(Domain::ViralTRx, "zika", "treatments.pathogen_targeted"));
        set.insert({"viruses/zika/categories/pathogen_targeted", "Something", {}, "p", {}});
        CHECK_THROWS_AS(apply_claims(fixture_kb(), set), PathConflict);
    }

    TEST_CASE("random claim sets never mutate the input and always validate") {
        std::mt19937 rng(21);
        const auto task = lasv_pathogen_task();
        const auto before = fixture_kb();
        for (int i = 0; i < 100; ++i) {
            const auto set = to_claim_set(random_claims(rng, 20), task, "p");
            try {
                const auto out = apply_claims(fixture_kb(), set);
                CHECK(validate_kb(out).ok());
            } catch (const InvariantError&) {
            }
            CHECK(fixture_kb() == before);
        }
    }
}

TEST_SUITE("monthly_update") {
    const std::string kKey = "trx:lasv:treatments.pathogen_targeted";

    TEST_CASE("zero tasks changes only generated_at") {
        auto p = replay("gpt", ProviderRole::PrimaryExtractor, json::array());
        auto v = replay("grok", ProviderRole::Verifier, json::array());
        const auto result = monthly_update(fixture_kb(), {}, *p, *v, {}, fixed_clock());
        CHECK(result.log.tasks.empty());
        CHECK(result.kb.generated_at > fixture_kb().generated_at);
        auto same = result.kb;
        same.generated_at = fixture_kb().generated_at;
        CHECK(same == fixture_kb());
    }

    TEST_CASE("generated_at advances even when the clock is behind") {
        auto p = replay("gpt", ProviderRole::PrimaryExtractor, json::array());
        auto v = replay("grok", ProviderRole::Verifier, json::array());
        const Clock past = [] { return parse_rfc3339("2000-01-01T00:00:00Z"); };
        CHECK(monthly_update(fixture_kb(), {}, *p, *v, {}, past).kb.generated_at > fixture_kb().generated_at);
    }

    TEST_CASE("one added treatment shows as exactly one added path") {
        // Existing treatments come back bare so only the new one can add paths.
        json claims = json::array();
        for (const auto& n : kLasvNames) claims.push_back({{"field_path", kLasvPrefix}, {"value", n}});
        claims.push_back(name_claims({"Tilorone"})[0]);
        auto p = replay("gpt", ProviderRole::PrimaryExtractor, json::array({{{"task", kKey}, {"claims", claims}}}));
        auto v = replay("grok", ProviderRole::Verifier, json::array({{{"task", kKey}, {"claims", claims}}}));
        const auto result = monthly_update(fixture_kb(), {lasv_pathogen_task()}, *p, *v, {}, fixed_clock());
        REQUIRE(result.log.tasks.size() == 1);
        CHECK(result.log.tasks[0].ok);

        const auto before = to_json(fixture_kb());
        const auto after = to_json(result.kb);
        const auto diff = diff_documents(before, after);
        REQUIRE(diff.added.size() == 1);
        CHECK(diff.added[0].path == kLasvPrefix + "/Tilorone");
        CHECK(diff.removed.empty());

        // Independent comparator: top-level paths present only in the new document.
        const auto a = flatten(before);
        const auto b = flatten(after);
        std::set<std::string> fresh;
        for (const auto& [path, _] : b) {
            if (!a.count(path)) fresh.insert(path.substr(0, path.find("/Tilorone") + 9));
        }
        CHECK(fresh == std::set<std::string>{kLasvPrefix + "/Tilorone"});
    }

    TEST_CASE("a failing task is logged and the others still apply") {
        const auto host = make_task(Domain::ViralTRx, "lasv", "treatments.host_targeted", &fixture_kb());
        const std::string host_key = host.key();
        json extra = {{{"field_path", "viruses/lasv/categories/host_targeted"}, {"value", "Oxygen therapy"}}};
        auto p = replay("gpt", ProviderRole::PrimaryExtractor,
                        json::array({{{"task", kKey}, {"error", "unavailable"}}, {{"task", host_key}, {"claims", extra}}}));
        auto v = replay("grok", ProviderRole::Verifier, json::array({{{"task", host_key}, {"claims", extra}}}));
        const auto result = monthly_update(fixture_kb(), {lasv_pathogen_task(), host}, *p, *v, {}, fixed_clock());
        REQUIRE(result.log.tasks.size() == 2);
        CHECK_FALSE(result.log.tasks[0].ok);
        CHECK(result.log.tasks[0].error.find("provider_unavailable") != std::string::npos);
        CHECK(result.log.tasks[1].ok);
        CHECK(result.log.failures() == 1);
        const auto& list = result.kb.find_virus("lasv")->categories.at(CategoryKind::HostTargeted);
        CHECK(list.back().name == "Oxygen therapy");
        CHECK(to_json(result.log)["failures"] == 1);
    }

    TEST_CASE("provenance serializes and parses back") {
        Provenance p{kLasvPrefix + "/ST-193", "gpt", {"grok"}, 2, fixed_time()};
        CHECK(provenance_from_json(to_json(p)) == p);
        auto bad = to_json(p);
        bad["rounds"] = 0;
        CHECK_THROWS_AS(provenance_from_json(bad), SchemaError);
    }
}
