#include "cmkb/errors.hpp"

namespace cmkb {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Syntax: return "syntax_error";
        case ErrorCode::Schema: return "schema_error";
        case ErrorCode::Invariant: return "invariant_error";
        case ErrorCode::UnknownTemplate: return "unknown_template";
        case ErrorCode::ProviderUnavailable: return "provider_unavailable";
        case ErrorCode::MalformedProviderOutput: return "malformed_provider_output";
        case ErrorCode::TaskMismatch: return "task_mismatch";
        case ErrorCode::PathConflict: return "path_conflict";
        case ErrorCode::PolicyViolation: return "policy_violation";
        case ErrorCode::Storage: return "storage_error";
        case ErrorCode::Validation: return "validation_error";
        case ErrorCode::UnknownVersion: return "unknown_version";
        case ErrorCode::EmptyStore: return "empty_store";
        case ErrorCode::UnknownSubject: return "unknown_subject";
        case ErrorCode::SchemaViolation: return "schema_violation";
        case ErrorCode::Config: return "config_error";
    }
    return "error";
}

}  // namespace cmkb
