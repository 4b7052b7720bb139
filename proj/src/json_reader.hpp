#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmkb/errors.hpp"

namespace cmkb::detail {

inline std::string pointer_child(const std::string& path, const std::string& key) {
    std::string escaped;
    for (const char c : key) {
        if (c == '~') {
            escaped += "~0";
        } else if (c == '/') {
            escaped += "~1";
        } else {
            escaped.push_back(c);
        }
    }
    return path + "/" + escaped;
}

inline std::string pointer_index(const std::string& path, std::size_t index) {
    return path + "/" + std::to_string(index);
}

inline std::string where(const std::string& path) { return path.empty() ? "root" : path; }

// Strict object reader: every key must be consumed, otherwise finish()
// reports the first unknown key as a SchemaError.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& value, std::string path) : value_(value), path_(std::move(path)) {
        if (!value_.is_object()) throw SchemaError("expected object at " + where(path_), path_);
    }

    const std::string& path() const { return path_; }
    std::string child(const std::string& key) const { return pointer_child(path_, key); }

    const nlohmann::json& required(const std::string& key) {
        const auto it = value_.find(key);
        if (it == value_.end())
            throw SchemaError("missing field \"" + key + "\" at " + where(path_), child(key));
        seen_.insert(key);
        return *it;
    }

    const nlohmann::json* optional(const std::string& key) {
        const auto it = value_.find(key);
        if (it == value_.end()) return nullptr;
        seen_.insert(key);
        return &*it;
    }

    std::string string(const std::string& key) { return as_string(required(key), child(key)); }

    std::optional<std::string> optional_string(const std::string& key) {
        const auto* v = optional(key);
        if (!v) return std::nullopt;
        return as_string(*v, child(key));
    }

    std::vector<std::string> string_list(const std::string& key) {
        return as_string_list(required(key), child(key));
    }

    std::vector<std::string> optional_string_list(const std::string& key) {
        const auto* v = optional(key);
        if (!v) return {};
        return as_string_list(*v, child(key));
    }

    double number(const std::string& key) {
        const auto& v = required(key);
        if (!v.is_number()) throw SchemaError("expected number at " + child(key), child(key));
        return v.get<double>();
    }

    void finish() const {
        for (const auto& [key, _] : value_.items()) {
            if (!seen_.count(key))
                throw SchemaError("unknown field \"" + key + "\" at " + where(path_), child(key));
        }
    }

    static std::string as_string(const nlohmann::json& v, const std::string& path) {
        if (!v.is_string()) throw SchemaError("expected string at " + where(path), path);
        return v.get<std::string>();
    }

    static const nlohmann::json& as_array(const nlohmann::json& v, const std::string& path) {
        if (!v.is_array()) throw SchemaError("expected array at " + where(path), path);
        return v;
    }

    static std::vector<std::string> as_string_list(const nlohmann::json& v, const std::string& path) {
        as_array(v, path);
        std::vector<std::string> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], pointer_index(path, i)));
        return out;
    }

private:
    const nlohmann::json& value_;
    std::string path_;
    std::set<std::string> seen_;
};

// Parses raw text, mapping library parse failures onto SyntaxError.
inline nlohmann::json parse_json_text(std::string_view text) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace cmkb::detail
