#include "cmkb/schema_check.hpp"

#include <cmath>

#include "cmkb/errors.hpp"
#include "embedded.hpp"

namespace cmkb {
namespace {

constexpr int kMaxDepth = 64;

bool type_matches(const nlohmann::json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    if (type == "number") return doc.is_number();
    if (type == "integer") {
        if (doc.is_number_integer()) return true;
        if (doc.is_number_float()) {
            const double v = doc.get<double>();
            return std::isfinite(v) && std::floor(v) == v;
        }
        return false;
    }
    return false;
}

std::size_t utf8_length(const std::string& s) {
    std::size_t n = 0;
    for (const unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string at(const std::string& path) { return path.empty() ? "/" : path; }

}  // namespace

std::vector<std::string> SchemaChecker::check(const nlohmann::json& document, std::string_view def_name) const {
    return check_against(document, resolve("#/$defs/" + std::string(def_name)));
}

std::vector<std::string> SchemaChecker::check_against(const nlohmann::json& document,
                                                      const nlohmann::json& schema) const {
    std::vector<std::string> errors;
    walk(document, schema, "", errors, 0);
    return errors;
}

nlohmann::json SchemaChecker::standalone(std::string_view def_name) const {
    resolve("#/$defs/" + std::string(def_name));
    return {{"$ref", "#/$defs/" + std::string(def_name)}, {"$defs", root_.at("$defs")}};
}

const nlohmann::json& SchemaChecker::resolve(const std::string& ref) const {
    constexpr std::string_view prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw ConfigError("unsupported schema reference: " + ref);
    const std::string name = ref.substr(prefix.size());
    const auto defs = root_.find("$defs");
    if (defs == root_.end() || !defs->contains(name)) throw ConfigError("unknown schema definition: " + name);
    return defs->at(name);
}

void SchemaChecker::walk(const nlohmann::json& doc, const nlohmann::json& schema, const std::string& path,
                         std::vector<std::string>& errors, int depth) const {
    if (depth > kMaxDepth) {
        errors.push_back(at(path) + ": schema nesting too deep");
        return;
    }
    if (schema.is_boolean()) {
        if (!schema.get<bool>()) errors.push_back(at(path) + ": not allowed");
        return;
    }
    if (!schema.is_object()) return;

    if (const auto ref = schema.find("$ref"); ref != schema.end()) {
        walk(doc, resolve(ref->get<std::string>()), path, errors, depth + 1);
    }

    if (const auto type = schema.find("type"); type != schema.end()) {
        bool ok = false;
        if (type->is_string()) {
            ok = type_matches(doc, type->get<std::string>());
        } else {
            for (const auto& t : *type) ok = ok || type_matches(doc, t.get<std::string>());
        }
        if (!ok) {
            errors.push_back(at(path) + ": expected type " + type->dump());
            return;
        }
    }

    if (const auto en = schema.find("enum"); en != schema.end()) {
        bool found = false;
        for (const auto& v : *en) found = found || v == doc;
        if (!found) errors.push_back(at(path) + ": value " + doc.dump() + " not in enum");
    }
    if (const auto c = schema.find("const"); c != schema.end() && *c != doc) {
        errors.push_back(at(path) + ": expected const " + c->dump());
    }

    if (const auto any = schema.find("anyOf"); any != schema.end()) {
        bool matched = false;
        for (const auto& option : *any) {
            std::vector<std::string> sub;
            walk(doc, option, path, sub, depth + 1);
            if (sub.empty()) {
                matched = true;
                break;
            }
        }
        if (!matched) errors.push_back(at(path) + ": matches none of anyOf");
    }

    if (doc.is_string()) {
        const std::size_t len = utf8_length(doc.get_ref<const std::string&>());
        if (const auto m = schema.find("minLength"); m != schema.end() && len < m->get<std::size_t>())
            errors.push_back(at(path) + ": shorter than minLength");
        if (const auto m = schema.find("maxLength"); m != schema.end() && len > m->get<std::size_t>())
            errors.push_back(at(path) + ": longer than maxLength");
    }

    if (doc.is_number()) {
        const double v = doc.get<double>();
        if (const auto m = schema.find("minimum"); m != schema.end() && v < m->get<double>())
            errors.push_back(at(path) + ": below minimum");
        if (const auto m = schema.find("maximum"); m != schema.end() && v > m->get<double>())
            errors.push_back(at(path) + ": above maximum");
    }

    if (doc.is_array()) {
        if (const auto m = schema.find("minItems"); m != schema.end() && doc.size() < m->get<std::size_t>())
            errors.push_back(at(path) + ": fewer than minItems");
        if (const auto m = schema.find("maxItems"); m != schema.end() && doc.size() > m->get<std::size_t>())
            errors.push_back(at(path) + ": more than maxItems");
        if (const auto items = schema.find("items"); items != schema.end()) {
            for (std::size_t i = 0; i < doc.size(); ++i)
                walk(doc[i], *items, path + "/" + std::to_string(i), errors, depth + 1);
        }
    }

    if (doc.is_object()) {
        const auto props = schema.find("properties");
        if (const auto req = schema.find("required"); req != schema.end()) {
            for (const auto& key : *req) {
                if (!doc.contains(key.get<std::string>()))
                    errors.push_back(at(path) + ": missing required \"" + key.get<std::string>() + "\"");
            }
        }
        const auto additional = schema.find("additionalProperties");
        for (const auto& [key, value] : doc.items()) {
            const std::string child = path + "/" + key;
            if (props != schema.end() && props->contains(key)) {
                walk(value, props->at(key), child, errors, depth + 1);
            } else if (additional != schema.end()) {
                walk(value, *additional, child, errors, depth + 1);
            }
        }
    }
}

const SchemaChecker& api_contract() {
    static const SchemaChecker checker(nlohmann::json::parse(embedded::api_contract()));
    return checker;
}

const SchemaChecker& provider_contract() {
    static const SchemaChecker checker(nlohmann::json::parse(embedded::provider_contract()));
    return checker;
}

}  // namespace cmkb
