#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmkb {

enum class ErrorCode {
    Syntax,
    Schema,
    Invariant,
    UnknownTemplate,
    ProviderUnavailable,
    MalformedProviderOutput,
    TaskMismatch,
    PathConflict,
    PolicyViolation,
    Storage,
    Validation,
    UnknownVersion,
    EmptyStore,
    UnknownSubject,
    SchemaViolation,
    Config,
};

std::string_view to_string(ErrorCode code);

// Base for every error raised by the library. `path()` is a slash-delimited
// location inside a document when the failure has one, empty otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string path = {})
        : std::runtime_error(std::move(message)), code_(code), path_(std::move(path)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& path() const noexcept { return path_; }

private:
    ErrorCode code_;
    std::string path_;
};

#define CMKB_DEFINE_ERROR(Name, Code)                                          \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(std::string message, std::string path = {})              \
            : Error(ErrorCode::Code, std::move(message), std::move(path)) {}   \
    }

CMKB_DEFINE_ERROR(SyntaxError, Syntax);
CMKB_DEFINE_ERROR(SchemaError, Schema);
CMKB_DEFINE_ERROR(UnknownTemplate, UnknownTemplate);
CMKB_DEFINE_ERROR(ProviderUnavailable, ProviderUnavailable);
CMKB_DEFINE_ERROR(MalformedProviderOutput, MalformedProviderOutput);
CMKB_DEFINE_ERROR(TaskMismatch, TaskMismatch);
CMKB_DEFINE_ERROR(PathConflict, PathConflict);
CMKB_DEFINE_ERROR(PolicyViolation, PolicyViolation);
CMKB_DEFINE_ERROR(StorageError, Storage);
CMKB_DEFINE_ERROR(UnknownVersion, UnknownVersion);
CMKB_DEFINE_ERROR(EmptyStore, EmptyStore);
CMKB_DEFINE_ERROR(UnknownSubject, UnknownSubject);
CMKB_DEFINE_ERROR(SchemaViolation, SchemaViolation);
CMKB_DEFINE_ERROR(ConfigError, Config);

#undef CMKB_DEFINE_ERROR

}  // namespace cmkb
