#include "wsqos/errors.hpp"

namespace wsqos {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedXml: return "MalformedXml";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::UnparseableQoSValue: return "UnparseableQoSValue";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::CorruptJournal: return "CorruptJournal";
        case ErrorCode::InvalidUrl: return "InvalidUrl";
        case ErrorCode::BadHeader: return "BadHeader";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::DegenerateData: return "DegenerateData";
        case ErrorCode::WidthMismatch: return "WidthMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptyTestSet: return "EmptyTestSet";
        case ErrorCode::EmptyConstraints: return "EmptyConstraints";
        case ErrorCode::UnknownProperty: return "UnknownProperty";
        case ErrorCode::NoCandidates: return "NoCandidates";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

std::string Error::make_what(ErrorCode code, const std::string& message,
                             const std::string& element) {
    std::string what{error_code_name(code)};
    if (!element.empty()) {
        what += " [";
        what += element;
        what += "]";
    }
    what += ": ";
    what += message;
    return what;
}

}  // namespace wsqos
