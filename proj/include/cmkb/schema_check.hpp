#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cmkb {

// Validates a document against a JSON Schema subset: type, enum, const,
// properties, required, additionalProperties, items, minItems, maxItems,
// minLength, maxLength, minimum, maximum, anyOf and local "#/$defs/..." refs.
// Returns one message per violation, each prefixed with a slash path.
class SchemaChecker {
public:
    explicit SchemaChecker(nlohmann::json root) : root_(std::move(root)) {}

    std::vector<std::string> check(const nlohmann::json& document, std::string_view def_name) const;
    std::vector<std::string> check_against(const nlohmann::json& document, const nlohmann::json& schema) const;

    // A self-contained schema ({"$ref": "#/$defs/<name>", "$defs": ...}) that
    // can be shipped to a provider as its response format.
    nlohmann::json standalone(std::string_view def_name) const;
    const nlohmann::json& root() const { return root_; }

private:
    void walk(const nlohmann::json& doc, const nlohmann::json& schema, const std::string& path,
              std::vector<std::string>& errors, int depth) const;
    const nlohmann::json& resolve(const std::string& ref) const;

    nlohmann::json root_;
};

const SchemaChecker& api_contract();
const SchemaChecker& provider_contract();

}  // namespace cmkb
