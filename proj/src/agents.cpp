#include "cmkb/agents.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "cmkb/policy.hpp"
#include "cmkb/prompt.hpp"
#include "cmkb/schema_check.hpp"
#include "cmkb/text.hpp"
#include "json_reader.hpp"

namespace cmkb {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Guardrail

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80 || c == '_'; }

// Whole-word occurrence of `needle` in `hay`, optionally followed by a plural "s"/"es".
bool contains_term(std::string_view hay, std::string_view needle, bool allow_plural) {
    if (needle.empty()) return false;
    for (std::size_t pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + 1)) {
        if (pos > 0 && is_word_byte(static_cast<unsigned char>(hay[pos - 1]))) continue;
        std::size_t end = pos + needle.size();
        if (end < hay.size() && is_word_byte(static_cast<unsigned char>(hay[end]))) {
            if (!allow_plural) continue;
            if (hay[end] == 's') {
                ++end;
            } else if (hay.compare(end, 2, "es") == 0) {
                end += 2;
            } else {
                continue;
            }
            if (end < hay.size() && is_word_byte(static_cast<unsigned char>(hay[end]))) continue;
        }
        return true;
    }
    return false;
}

struct SubjectTerms {
    std::string id;
    std::vector<std::string> folded;     // matched case-insensitively
    std::vector<std::string> exact;      // abbreviations, matched as written
};

std::vector<std::string> abbreviation_tokens(const std::string& abbreviation) {
    std::vector<std::string> out;
    std::string token;
    for (const char c : abbreviation + ",") {
        if (c == ',' || c == ' ' || c == '/') {
            if (token.size() >= 3) out.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    return out;
}

template <typename Entry>
SubjectTerms terms_for(const Entry& entry) {
    SubjectTerms terms;
    terms.id = entry.id;
    auto add = [&](const std::string& text) {
        auto folded = to_lower_ascii(canonicalize_text(text));
        if (!folded.empty()) terms.folded.push_back(std::move(folded));
    };
    add(entry.id);
    add(entry.name);
    for (const auto& alias : entry.aliases) add(alias);
    terms.exact = abbreviation_tokens(entry.abbreviation);
    return terms;
}

std::vector<SubjectTerms> all_terms(const KnowledgeBase& kb) {
    std::vector<SubjectTerms> out;
    for (const auto& v : kb.viruses) out.push_back(terms_for(v));
    for (const auto& f : kb.toxin_families) out.push_back(terms_for(f));
    return out;
}

bool mentions(const SubjectTerms& terms, std::string_view text, std::string_view folded) {
    for (const auto& t : terms.folded) {
        if (contains_term(folded, t, true)) return true;
    }
    for (const auto& t : terms.exact) {
        if (contains_term(text, t, true)) return true;
    }
    return false;
}

const std::regex& harm_intent() {
    static const std::regex re(
        R"(\b(bio)?weapon\w*\b|\bbioterror\w*\b|\bgain[- ]of[- ]function\b|)"
        R"(\b(kill|poison|harm|murder|assassinate|incapacitate|attack)\s+(\w+\s+){0,3}(someone|somebody|people|persons?|)"
        R"(a\s+crowd|crowds|civilians|population|city|neighbou?rs?|my\s+\w+|him|her|them)\b|)"
        R"(\b(make|render)\s+(\w+\s+){0,3}(more\s+)?(lethal|deadly|transmissible|contagious|virulent|potent)\b|)"
        R"(\b(enhance|increase|boost)\s+(its\s+|the\s+)?(transmissibility|virulence|lethality|toxicity)\b|)"
        R"(\bundetectable\b|\bevade\s+(detection|screening)\b)",
        std::regex::ECMAScript | std::regex::icase);
    return re;
}

const std::regex& ranking_intent() {
    static const std::regex re(
        R"(\b(treat\w*|therap\w*|countermeasure\w*|cure\w*|drugs?|medication\w*|medicine\w*|antivirals?|)"
        R"(antidotes?|antibod\w*|manag\w*|interventions?|remed\w*|prophyla\w*|care|rank\w*|compar\w*|)"
        R"(mortality|survival|options?|works?\s+best|what\s+works|effective\w*|recommend\w*)\b)",
        std::regex::ECMAScript | std::regex::icase);
    return re;
}

const std::regex& geography_pattern() {
    static const std::regex re(
        R"(\b(?:in|within|across|from)\s+((?:the\s+)?[A-Z][A-Za-z'\-]*(?:\s+[A-Z][A-Za-z'\-]*)*))",
        std::regex::ECMAScript);
    return re;
}

std::optional<std::string> parse_geography(const std::string& text, const std::vector<SubjectTerms>& subjects) {
    std::optional<std::string> found;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), geography_pattern()); it != std::sregex_iterator();
         ++it) {
        std::string place = (*it)[1].str();
        if (place.rfind("the ", 0) == 0) place.erase(0, 4);
        const auto folded = to_lower_ascii(place);
        const bool is_subject = std::any_of(subjects.begin(), subjects.end(),
                                            [&](const auto& s) { return mentions(s, place, folded); });
        if (!is_subject) found = place;
    }
    return found;
}

GuardrailVerdict refuse(std::string rule, std::string reason) {
    GuardrailVerdict v;
    v.rule = std::move(rule);
    v.reason = std::move(reason);
    return v;
}

}  // namespace

GuardrailVerdict guardrail_classify(std::string_view raw_text, const KnowledgeBase& kb) {
    const auto text = canonicalize_text(raw_text);
    if (text.empty()) return refuse("empty", "The question is empty.");

    if (const auto verdict = RiskPolicy::defaults().check(text); !verdict.allowed)
        return refuse("procedural-harm",
                      "Refused by the procedural-harm rule (" + verdict.rule_id +
                          "): only questions about ranking countermeasures are answered.");
    if (std::regex_search(text, harm_intent()))
        return refuse("procedural-harm",
                      "Refused by the procedural-harm rule (harm-intent): only questions about ranking "
                      "countermeasures are answered.");

    const auto folded = to_lower_ascii(text);
    const auto subjects = all_terms(kb);
    std::vector<std::string> matched;
    for (const auto& s : subjects) {
        if (mentions(s, text, folded)) matched.push_back(s.id);
    }
    if (matched.empty())
        return refuse("no-subject",
                      "The question does not name a virus or marine toxin family in the knowledge base. Ask about "
                      "the best countermeasures for one of them.");
    if (matched.size() > 1)
        return refuse("multiple-subjects", "The question names more than one subject; ask about one at a time.");
    if (!std::regex_search(text, ranking_intent()))
        return refuse("off-topic", "Only questions about ranking treatments or countermeasures are answered.");

    GuardrailVerdict v;
    v.allowed = true;
    v.rule = "admitted";
    v.reason = "Countermeasure ranking question about " + matched.front() + ".";
    v.resolved_subject = matched.front();
    v.geography = parse_geography(text, subjects);
    return v;
}

RankingQuery make_query(std::string_view raw_text, const GuardrailVerdict& verdict,
                        std::optional<std::string> geography) {
    if (!verdict.allowed || !verdict.resolved_subject)
        throw UnknownSubject("query was not admitted by the guardrail");
    RankingQuery q;
    q.raw_text = std::string(raw_text);
    q.subject = *verdict.resolved_subject;
    if (geography && !canonicalize_text(*geography).empty()) {
        q.geography = canonicalize_text(*geography);
    } else {
        q.geography = verdict.geography;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Researcher

QuantifiedBenefit QuantifiedBenefit::from_cfr(double treated_cfr, double control_cfr, std::string reported) {
    QuantifiedBenefit q;
    q.treated_cfr = treated_cfr;
    q.control_cfr = control_cfr;
    q.absolute_reduction = control_cfr - treated_cfr;
    q.relative_reduction = control_cfr > 0.0 ? q.absolute_reduction / control_cfr : 0.0;
    q.reported = std::move(reported);
    return q;
}

namespace {

std::string url_host(std::string_view url) {
    const auto scheme = url.find("://");
    if (scheme == std::string_view::npos) return {};
    auto rest = url.substr(scheme + 3);
    rest = rest.substr(0, rest.find_first_of("/?#"));
    if (const auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
    rest = rest.substr(0, rest.find(':'));
    return to_lower_ascii(rest);
}

EvidenceItem item_from_annotation(const EvidenceAnnotation& a, int order) {
    EvidenceItem item;
    item.countermeasure = a.countermeasure;
    item.benefit_summary = a.benefit_summary;
    if (a.quantified)
        item.quantified = QuantifiedBenefit::from_cfr(a.quantified->treated_cfr, a.quantified->control_cfr,
                                                      a.quantified->reported);
    item.evidence_strength = a.evidence_strength;
    item.rationale_facts = a.rationale_facts;
    item.constraints = a.constraints;
    item.sources = a.sources;
    item.order_hint = order;
    return item;
}

}  // namespace

std::vector<std::string> default_source_allowlist() {
    std::set<std::string> hosts = {"pubmed.ncbi.nlm.nih.gov", "europepmc.org", "www.ncbi.nlm.nih.gov"};
    for (const auto domain : {Domain::ViralTRx, Domain::MarineToxin}) {
        for (const auto& entry : builtin_catalog(domain).entries) {
            if (entry.url) {
                if (auto host = url_host(*entry.url); !host.empty()) hosts.insert(std::move(host));
            }
        }
    }
    return {hosts.begin(), hosts.end()};
}

bool url_allowed(std::string_view url, const std::vector<std::string>& allowlist) {
    const auto host = url_host(url);
    if (host.empty()) return false;
    for (const auto& allowed : allowlist) {
        const auto a = to_lower_ascii(allowed);
        if (host == a) return true;
        if (host.size() > a.size() && host.compare(host.size() - a.size(), a.size(), a) == 0 &&
            host[host.size() - a.size() - 1] == '.')
            return true;
    }
    return false;
}

EvidencePack researcher_assemble(const RankingQuery& query, const KnowledgeBase& kb, SourceRetriever* retriever,
                                 const std::vector<std::string>& allowlist, const Clock& clock) {
    EvidencePack pack;
    pack.subject = query.subject;
    pack.geography = query.geography;

    if (const auto* virus = kb.find_virus(query.subject)) {
        pack.subject_name = virus->name + " (" + virus->abbreviation + ")";
        for (std::size_t i = 0; i < virus->ranking_evidence.size(); ++i)
            pack.items.push_back(item_from_annotation(virus->ranking_evidence[i], static_cast<int>(i)));
        if (pack.items.empty()) {
            std::set<std::string> seen;
            for (const auto kind : kAllCategories) {
                const auto it = virus->categories.find(kind);
                if (it == virus->categories.end()) continue;
                for (const auto& t : it->second) {
                    if (!seen.insert(t.name).second) continue;
                    EvidenceItem item;
                    item.countermeasure = t.name;
                    item.benefit_summary = t.effectiveness;
                    item.constraints = t.treatment_type;
                    item.sources = t.references;
                    item.order_hint = static_cast<int>(pack.items.size());
                    pack.items.push_back(std::move(item));
                }
            }
        }
    } else if (const auto* family = kb.find_family(query.subject)) {
        pack.subject_name = family->name + " (" + family->abbreviation + ")";
        for (std::size_t i = 0; i < family->ranking_evidence.size(); ++i)
            pack.items.push_back(item_from_annotation(family->ranking_evidence[i], static_cast<int>(i)));
        if (pack.items.empty()) {
            std::map<std::string, std::size_t> index;
            for (const auto& cls : family->classes) {
                for (const auto& cm : cls.countermeasures) {
                    auto [it, inserted] = index.emplace(cm, pack.items.size());
                    if (inserted) {
                        EvidenceItem item;
                        item.countermeasure = cm;
                        item.order_hint = static_cast<int>(pack.items.size());
                        pack.items.push_back(std::move(item));
                    }
                    auto& sources = pack.items[it->second].sources;
                    for (const auto& ref : cls.references) {
                        if (std::find(sources.begin(), sources.end(), ref) == sources.end()) sources.push_back(ref);
                    }
                }
            }
        }
    } else {
        throw UnknownSubject("unknown subject: " + query.subject);
    }

    if (retriever) {
        for (auto& item : retriever->retrieve(query)) {
            const bool sourced = !item.sources.empty() &&
                                 std::all_of(item.sources.begin(), item.sources.end(), [&](const Reference& r) {
                                     return r.url && url_allowed(*r.url, allowlist);
                                 });
            if (!sourced) {
                spdlog::info("retriever item \"{}\" dropped: source outside allowlist", item.countermeasure);
                continue;
            }
            item.external = true;
            item.order_hint = static_cast<int>(pack.items.size());
            pack.items.push_back(std::move(item));
        }
    }
    pack.assembled_at = clock();
    return pack;
}

// ---------------------------------------------------------------------------
// Decision maker

std::string_view to_string(RankingMode mode) {
    return mode == RankingMode::Deterministic ? "deterministic" : "provider";
}

std::optional<RankingMode> parse_ranking_mode(std::string_view text) {
    if (text == "deterministic") return RankingMode::Deterministic;
    if (text == "provider" || text == "provider_backed") return RankingMode::ProviderBacked;
    return std::nullopt;
}

bool ranks_before(const EvidenceItem& a, const EvidenceItem& b) {
    const bool qa = a.quantified.has_value();
    const bool qb = b.quantified.has_value();
    if (qa != qb) return qa;
    if (qa && a.quantified->absolute_reduction != b.quantified->absolute_reduction)
        return a.quantified->absolute_reduction > b.quantified->absolute_reduction;
    if (a.evidence_strength != b.evidence_strength) return a.evidence_strength > b.evidence_strength;
    if (a.order_hint != b.order_hint) return a.order_hint < b.order_hint;
    if (a.countermeasure != b.countermeasure) return a.countermeasure < b.countermeasure;
    return a.benefit_summary < b.benefit_summary;
}

namespace {

std::vector<Reference> strip_dates(const std::vector<Reference>& refs) {
    std::vector<Reference> out;
    for (const auto& r : refs) out.push_back({r.title, r.url, std::nullopt});
    return out;
}

std::string join_facts(const EvidenceItem& item, const std::optional<std::string>& geography) {
    std::string out;
    for (const auto& fact : item.rationale_facts) {
        if (!out.empty()) out += " ";
        out += fact;
    }
    if (geography) {
        if (!out.empty()) out += " ";
        out += "Geographic context: " + *geography + ".";
    }
    return out;
}

}  // namespace

RankingResult rank_deterministic(const EvidencePack& pack, const RankingQuery& query, const Clock& clock) {
    std::vector<const EvidenceItem*> order;
    for (const auto& item : pack.items) order.push_back(&item);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return ranks_before(*a, *b); });

    RankingResult result;
    result.query = query;
    result.mode = RankingMode::Deterministic;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& item = *order[i];
        RankedEntry entry;
        entry.rank = static_cast<int>(i + 1);
        entry.countermeasure = item.countermeasure;
        if (item.quantified) {
            entry.benefit = item.benefit_summary;
        } else {
            entry.benefit = std::string(kNoQuantifiedBenefit);
            if (!item.benefit_summary.empty()) entry.benefit += " " + item.benefit_summary;
        }
        entry.evidence_strength = item.evidence_strength;
        entry.rationale = join_facts(item, query.geography);
        entry.constraints = item.constraints;
        entry.sources = strip_dates(item.sources);
        result.entries.push_back(std::move(entry));
    }
    result.generated_at = clock();
    return result;
}

std::string build_ranking_prompt(const EvidencePack& pack) {
    std::ostringstream evidence;
    for (std::size_t i = 0; i < pack.items.size(); ++i) {
        const auto& item = pack.items[i];
        evidence << "[" << i + 1 << "] " << item.countermeasure << "\n";
        if (!item.benefit_summary.empty()) evidence << "  benefit: " << item.benefit_summary << "\n";
        if (item.quantified) {
            const auto& q = *item.quantified;
            evidence << "  case fatality treated " << q.treated_cfr << " vs control " << q.control_cfr
                     << " (absolute reduction " << q.absolute_reduction << ")";
            if (!q.reported.empty()) evidence << "; source wording: " << q.reported;
            evidence << "\n";
        }
        evidence << "  evidence: " << to_string(item.evidence_strength) << "\n";
        for (const auto& fact : item.rationale_facts) evidence << "  fact: " << fact << "\n";
        if (!item.constraints.empty()) evidence << "  constraints: " << item.constraints << "\n";
        for (const auto& s : item.sources) {
            evidence << "  source: " << s.title;
            if (s.url) evidence << " <" << *s.url << ">";
            evidence << "\n";
        }
    }
    const std::string geography_line =
        pack.geography ? "Geographic context: " + *pack.geography + "\n"
                       : std::string();
    return render_template("rank.decision.v1", {
                                                   {"subject_name", pack.subject_name},
                                                   {"geography_line", geography_line},
                                                   {"evidence", evidence.str()},
                                               });
}

namespace {

Reference reference_from_source(const json& source) {
    Reference r;
    r.title = source.value("title", "");
    if (source.contains("url")) r.url = source["url"].get<std::string>();
    return r;
}

bool same_source(const Reference& a, const Reference& b) {
    return canonicalize_text(a.title) == canonicalize_text(b.title) && a.url == b.url;
}

}  // namespace

std::vector<RankedEntry> parse_ranking_response(std::string_view text, const EvidencePack& pack) {
    json document;
    try {
        document = detail::parse_json_text(text);
    } catch (const SyntaxError& e) {
        throw SchemaViolation(std::string("ranking reply is not JSON: ") + e.what());
    }
    const auto violations = provider_contract().check(document, "ranking_response");
    if (!violations.empty()) throw SchemaViolation("ranking reply violates schema: " + violations.front());

    std::vector<RankedEntry> entries;
    std::set<std::string> seen;
    for (const auto& e : document["entries"]) {
        RankedEntry entry;
        entry.rank = e["rank"].get<int>();
        entry.countermeasure = e["countermeasure"].get<std::string>();
        entry.benefit = e["benefit"].get<std::string>();
        entry.evidence_strength = *parse_evidence_strength(e["evidence"].get<std::string>());
        entry.rationale = e["rationale"].get<std::string>();
        entry.constraints = e["constraints"].get<std::string>();
        for (const auto& s : e["sources"]) entry.sources.push_back(reference_from_source(s));

        const auto item = std::find_if(pack.items.begin(), pack.items.end(), [&](const EvidenceItem& i) {
            return canonicalize_text(i.countermeasure) == canonicalize_text(entry.countermeasure);
        });
        if (item == pack.items.end())
            throw SchemaViolation("countermeasure not in evidence pack: " + entry.countermeasure);
        if (!seen.insert(item->countermeasure).second)
            throw SchemaViolation("countermeasure ranked twice: " + entry.countermeasure);
        entry.countermeasure = item->countermeasure;
        for (const auto& source : entry.sources) {
            const bool known = std::any_of(pack.items.begin(), pack.items.end(), [&](const EvidenceItem& i) {
                return std::any_of(i.sources.begin(), i.sources.end(),
                                   [&](const Reference& r) { return same_source(r, source); });
            });
            if (!known) throw SchemaViolation("source not in evidence pack: " + source.title);
        }
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].rank != static_cast<int>(i + 1))
            throw SchemaViolation("ranks are not contiguous from 1");
    }
    return entries;
}

RankingResult rank_provider_backed(const EvidencePack& pack, const RankingQuery& query, Provider& provider,
                                   const std::string& api_key, const Clock& clock) {
    ProviderRequest request;
    request.purpose = RequestPurpose::Ranking;
    request.task_key = "rank:" + pack.subject;
    request.prompt = build_ranking_prompt(pack);
    request.response_schema = provider_contract().standalone("ranking_response");
    request.api_key = api_key;

    std::string reason;
    try {
        const auto text = provider.complete(request);
        RankingResult result;
        result.query = query;
        result.mode = RankingMode::ProviderBacked;
        result.entries = parse_ranking_response(text, pack);
        result.generated_at = clock();
        return result;
    } catch (const SchemaViolation& e) {
        reason = std::string("schema_violation: ") + e.what();
    } catch (const ProviderUnavailable& e) {
        reason = std::string("provider_unavailable: ") + e.what();
    } catch (const MalformedProviderOutput& e) {
        reason = std::string("malformed_provider_output: ") + e.what();
    }
    spdlog::warn("provider ranking for {} discarded: {}", pack.subject, reason);
    auto result = rank_deterministic(pack, query, clock);
    result.fallback_reason = reason;
    return result;
}

// ---------------------------------------------------------------------------
// Result documents

Json render_result(const RankingResult& result) {
    json query = {{"text", result.query.raw_text}, {"subject", result.query.subject}};
    if (result.query.geography) query["geography"] = *result.query.geography;

    json entries = json::array();
    for (const auto& e : result.entries) {
        json sources = json::array();
        for (const auto& s : e.sources) {
            json source = {{"title", s.title}};
            if (s.url) source["url"] = *s.url;
            sources.push_back(std::move(source));
        }
        entries.push_back({
            {"rank", e.rank},
            {"countermeasure", e.countermeasure},
            {"benefit", e.benefit},
            {"evidence", to_string(e.evidence_strength)},
            {"rationale", e.rationale},
            {"constraints", e.constraints},
            {"sources", sources},
        });
    }
    json doc = {
        {"query", query},
        {"mode", to_string(result.mode)},
        {"generated_at", format_rfc3339(result.generated_at)},
        {"entries", entries},
    };
    if (result.entries.empty()) doc["message"] = kNoRankedCountermeasures;
    if (result.fallback_reason) doc["fallback_reason"] = *result.fallback_reason;
    return doc;
}

RankingResult parse_result(const Json& document) {
    detail::ObjectReader reader(document, "");
    RankingResult result;

    detail::ObjectReader query(reader.required("query"), "/query");
    result.query.raw_text = query.string("text");
    result.query.subject = query.string("subject");
    result.query.geography = query.optional_string("geography");
    query.finish();

    const auto mode_text = reader.string("mode");
    const auto mode = parse_ranking_mode(mode_text);
    if (!mode) throw SchemaError("unknown mode \"" + mode_text + "\"", "/mode");
    result.mode = *mode;
    result.generated_at = parse_rfc3339(reader.string("generated_at"));

    const auto& entries = detail::ObjectReader::as_array(reader.required("entries"), "/entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        detail::ObjectReader e(entries[i], detail::pointer_index("/entries", i));
        RankedEntry entry;
        const auto& rank = e.required("rank");
        if (!rank.is_number_integer() || rank.get<int>() < 1) throw SchemaError("rank must be >= 1", e.child("rank"));
        entry.rank = rank.get<int>();
        entry.countermeasure = e.string("countermeasure");
        entry.benefit = e.string("benefit");
        const auto evidence = e.string("evidence");
        const auto strength = parse_evidence_strength(evidence);
        if (!strength) throw SchemaError("unknown evidence grade \"" + evidence + "\"", e.child("evidence"));
        entry.evidence_strength = *strength;
        entry.rationale = e.string("rationale");
        entry.constraints = e.string("constraints");
        const auto sources_path = e.child("sources");
        const auto& sources = detail::ObjectReader::as_array(e.required("sources"), sources_path);
        for (std::size_t j = 0; j < sources.size(); ++j) {
            detail::ObjectReader s(sources[j], detail::pointer_index(sources_path, j));
            Reference ref;
            ref.title = s.string("title");
            ref.url = s.optional_string("url");
            s.finish();
            entry.sources.push_back(std::move(ref));
        }
        e.finish();
        result.entries.push_back(std::move(entry));
    }
    reader.optional("message");
    result.fallback_reason = reader.optional_string("fallback_reason");
    reader.finish();
    return result;
}

}  // namespace cmkb
