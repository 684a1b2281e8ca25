#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsqos {

enum class ErrorCode {
    MalformedXml,
    SchemaViolation,
    DuplicateId,
    UnparseableQoSValue,
    NotFound,
    CorruptJournal,
    InvalidUrl,
    BadHeader,
    NonNumericCell,
    TooFewRows,
    DegenerateData,
    WidthMismatch,
    LengthMismatch,
    EmptyInput,
    EmptyTestSet,
    EmptyConstraints,
    UnknownProperty,
    NoCandidates,
    ConfigError,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for all domain errors. `element` names the offending
// XML element, CSV column or property when one can be identified.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string element = "")
        : std::runtime_error(make_what(code, message, element)),
          code_(code),
          element_(std::move(element)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& element() const noexcept { return element_; }

private:
    static std::string make_what(ErrorCode code, const std::string& message,
                                 const std::string& element);

    ErrorCode code_;
    std::string element_;
};

[[noreturn]] inline void raise(ErrorCode code, std::string message,
                               std::string element = "") {
    throw Error(code, std::move(message), std::move(element));
}

}  // namespace wsqos
