#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cmkb {

// Paths address list elements by natural key, never by position:
// objects by their first non-empty "id", "name", "countermeasure",
// "panel_label", "title", "url" or "source_url" member, strings by
// themselves. A repeated key gets a "[n]" suffix from its second occurrence.
struct DiffAdded {
    std::string path;
    nlohmann::json value;
    std::optional<std::size_t> index;  // position in the new list, for list elements

    bool operator==(const DiffAdded&) const = default;
};

struct DiffRemoved {
    std::string path;
    nlohmann::json value;

    bool operator==(const DiffRemoved&) const = default;
};

struct DiffChanged {
    std::string path;
    nlohmann::json old_value;
    nlohmann::json new_value;

    bool operator==(const DiffChanged&) const = default;
};

struct Diff {
    int from_version = 0;
    int to_version = 0;
    std::vector<DiffAdded> added;
    std::vector<DiffRemoved> removed;
    std::vector<DiffChanged> changed;

    bool empty() const { return added.empty() && removed.empty() && changed.empty(); }
};

// A list whose surviving elements change relative order is reported as one
// `changed` entry for the whole list.
Diff diff_documents(const nlohmann::json& from, const nlohmann::json& to);

// Removals, then changes, then insertions in ascending index order.
nlohmann::json apply_diff(const nlohmann::json& from, const Diff& diff);

// Natural key of every element of a list, or nothing when the list holds
// values that have no key (numbers, keyless objects).
std::optional<std::vector<std::string>> element_keys(const nlohmann::json& list);

nlohmann::json to_json(const Diff& diff);
Diff diff_from_json(const nlohmann::json& value);

}  // namespace cmkb
