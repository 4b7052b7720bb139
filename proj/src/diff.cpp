#include "cmkb/diff.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cmkb/errors.hpp"
#include "cmkb/text.hpp"
#include "json_reader.hpp"

namespace cmkb {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 7> kKeyFields = {"id", "name", "countermeasure", "panel_label",
                                                   "title", "url", "source_url"};

std::optional<std::string> natural_key(const json& element) {
    if (element.is_string()) return element.get<std::string>();
    if (!element.is_object()) return std::nullopt;
    for (const char* field : kKeyFields) {
        const auto it = element.find(field);
        if (it != element.end() && it->is_string() && !it->get_ref<const std::string&>().empty())
            return it->get<std::string>();
    }
    return std::nullopt;
}

void walk(const json& a, const json& b, const std::string& path, Diff& out) {
    if (a.is_object() && b.is_object()) {
        for (const auto& [key, value] : a.items()) {
            if (!b.contains(key)) out.removed.push_back({append_segment(path, key), value});
        }
        for (const auto& [key, value] : b.items()) {
            const auto it = a.find(key);
            if (it == a.end()) {
                out.added.push_back({append_segment(path, key), value, std::nullopt});
            } else {
                walk(*it, value, append_segment(path, key), out);
            }
        }
        return;
    }
    if (a.is_array() && b.is_array() && a != b) {
        const auto ka = element_keys(a);
        const auto kb = element_keys(b);
        if (!ka || !kb) {
            out.changed.push_back({path, a, b});
            return;
        }
        std::map<std::string, std::size_t> pos_a;
        std::map<std::string, std::size_t> pos_b;
        for (std::size_t i = 0; i < ka->size(); ++i) pos_a[(*ka)[i]] = i;
        for (std::size_t i = 0; i < kb->size(); ++i) pos_b[(*kb)[i]] = i;

        std::vector<std::string> common_a;
        std::vector<std::string> common_b;
        for (const auto& k : *ka) {
            if (pos_b.count(k)) common_a.push_back(k);
        }
        for (const auto& k : *kb) {
            if (pos_a.count(k)) common_b.push_back(k);
        }
        if (common_a != common_b) {
            out.changed.push_back({path, a, b});
            return;
        }
        for (std::size_t i = 0; i < ka->size(); ++i) {
            if (!pos_b.count((*ka)[i])) out.removed.push_back({append_segment(path, (*ka)[i]), a[i]});
        }
        for (std::size_t i = 0; i < kb->size(); ++i) {
            const auto it = pos_a.find((*kb)[i]);
            if (it == pos_a.end()) {
                out.added.push_back({append_segment(path, (*kb)[i]), b[i], i});
            } else {
                walk(a[it->second], b[i], append_segment(path, (*kb)[i]), out);
            }
        }
        return;
    }
    if (a != b) out.changed.push_back({path, a, b});
}

// Follows natural-key segments from the root. Returns nullptr when a segment
// does not resolve.
json* resolve(json& doc, const std::vector<std::string>& segments, std::size_t count) {
    json* node = &doc;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& seg = segments[i];
        if (node->is_object()) {
            const auto it = node->find(seg);
            if (it == node->end()) return nullptr;
            node = &*it;
        } else if (node->is_array()) {
            const auto keys = element_keys(*node);
            if (!keys) return nullptr;
            const auto it = std::find(keys->begin(), keys->end(), seg);
            if (it == keys->end()) return nullptr;
            node = &(*node)[static_cast<std::size_t>(it - keys->begin())];
        } else {
            return nullptr;
        }
    }
    return node;
}

[[noreturn]] void unresolved(const std::string& path) {
    throw PathConflict("diff path does not resolve: " + path, path);
}

}  // namespace

std::optional<std::vector<std::string>> element_keys(const json& list) {
    std::vector<std::string> keys;
    keys.reserve(list.size());
    std::map<std::string, int> seen;
    for (const auto& element : list) {
        auto key = natural_key(element);
        if (!key) return std::nullopt;
        const int n = ++seen[*key];
        keys.push_back(n == 1 ? *key : *key + "[" + std::to_string(n) + "]");
    }
    return keys;
}

Diff diff_documents(const json& from, const json& to) {
    Diff out;
    walk(from, to, "", out);
    return out;
}

json apply_diff(const json& from, const Diff& diff) {
    json doc = from;

    // Group removals per parent so a list is filtered in one pass.
    std::map<std::string, std::set<std::string>> removals;
    for (const auto& r : diff.removed) {
        auto segments = split_path(r.path);
        if (segments.empty()) unresolved(r.path);
        const auto last = segments.back();
        segments.pop_back();
        removals[join_path(segments)].insert(last);
    }
    std::vector<std::pair<std::string, std::set<std::string>>> ordered(removals.begin(), removals.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
        return split_path(x.first).size() > split_path(y.first).size();
    });
    for (const auto& [parent_path, keys] : ordered) {
        const auto segments = split_path(parent_path);
        json* parent = resolve(doc, segments, segments.size());
        if (!parent) unresolved(parent_path);
        if (parent->is_object()) {
            for (const auto& k : keys) {
                if (!parent->erase(k)) unresolved(append_segment(parent_path, k));
            }
        } else if (parent->is_array()) {
            const auto element_key_list = element_keys(*parent);
            if (!element_key_list) unresolved(parent_path);
            json kept = json::array();
            std::size_t erased = 0;
            for (std::size_t i = 0; i < parent->size(); ++i) {
                if (keys.count((*element_key_list)[i])) {
                    ++erased;
                } else {
                    kept.push_back(std::move((*parent)[i]));
                }
            }
            if (erased != keys.size()) unresolved(parent_path);
            *parent = std::move(kept);
        } else {
            unresolved(parent_path);
        }
    }

    for (const auto& c : diff.changed) {
        const auto segments = split_path(c.path);
        json* node = resolve(doc, segments, segments.size());
        if (!node) unresolved(c.path);
        *node = c.new_value;
    }

    std::vector<const DiffAdded*> adds;
    for (const auto& a : diff.added) adds.push_back(&a);
    std::stable_sort(adds.begin(), adds.end(), [](const DiffAdded* x, const DiffAdded* y) {
        const auto dx = split_path(x->path).size();
        const auto dy = split_path(y->path).size();
        if (dx != dy) return dx < dy;
        return x->index.value_or(0) < y->index.value_or(0);
    });
    for (const auto* a : adds) {
        auto segments = split_path(a->path);
        if (segments.empty()) unresolved(a->path);
        json* parent = resolve(doc, segments, segments.size() - 1);
        if (!parent) unresolved(a->path);
        if (parent->is_object()) {
            (*parent)[segments.back()] = a->value;
        } else if (parent->is_array()) {
            const auto index = std::min(a->index.value_or(parent->size()), parent->size());
            parent->insert(parent->begin() + static_cast<std::ptrdiff_t>(index), a->value);
        } else {
            unresolved(a->path);
        }
    }
    return doc;
}

json to_json(const Diff& diff) {
    json added = json::array();
    for (const auto& a : diff.added) {
        json entry = {{"path", a.path}, {"value", a.value}};
        if (a.index) entry["index"] = *a.index;
        added.push_back(std::move(entry));
    }
    json removed = json::array();
    for (const auto& r : diff.removed) removed.push_back({{"path", r.path}, {"value", r.value}});
    json changed = json::array();
    for (const auto& c : diff.changed) changed.push_back({{"path", c.path}, {"old", c.old_value}, {"new", c.new_value}});
    return {
        {"from_version", diff.from_version},
        {"to_version", diff.to_version},
        {"added", added},
        {"removed", removed},
        {"changed", changed},
    };
}

Diff diff_from_json(const json& value) {
    detail::ObjectReader reader(value, "");
    Diff diff;
    const auto version = [&](const char* key) {
        const auto& v = reader.required(key);
        if (!v.is_number_integer()) throw SchemaError(std::string("expected integer at /") + key, reader.child(key));
        return v.get<int>();
    };
    diff.from_version = version("from_version");
    diff.to_version = version("to_version");

    const auto& added = detail::ObjectReader::as_array(reader.required("added"), "/added");
    for (std::size_t i = 0; i < added.size(); ++i) {
        detail::ObjectReader item(added[i], detail::pointer_index("/added", i));
        DiffAdded a;
        a.path = item.string("path");
        a.value = item.required("value");
        if (const auto* index = item.optional("index")) {
            if (!index->is_number_unsigned()) throw SchemaError("index must be a non-negative integer", item.child("index"));
            a.index = index->get<std::size_t>();
        }
        item.finish();
        diff.added.push_back(std::move(a));
    }
    const auto& removed = detail::ObjectReader::as_array(reader.required("removed"), "/removed");
    for (std::size_t i = 0; i < removed.size(); ++i) {
        detail::ObjectReader item(removed[i], detail::pointer_index("/removed", i));
        DiffRemoved r{item.string("path"), item.required("value")};
        item.finish();
        diff.removed.push_back(std::move(r));
    }
    const auto& changed = detail::ObjectReader::as_array(reader.required("changed"), "/changed");
    for (std::size_t i = 0; i < changed.size(); ++i) {
        detail::ObjectReader item(changed[i], detail::pointer_index("/changed", i));
        DiffChanged c{item.string("path"), item.required("old"), item.required("new")};
        item.finish();
        diff.changed.push_back(std::move(c));
    }
    reader.finish();
    return diff;
}

}  // namespace cmkb
