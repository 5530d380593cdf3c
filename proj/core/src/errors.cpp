#include "regrepair/errors.hpp"

namespace regrepair {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::IoFailure: return "IoFailure";
        case Errc::IncompleteMatrix: return "IncompleteMatrix";
        case Errc::UnparseableOutput: return "UnparseableOutput";
        case Errc::MissingSnapshot: return "MissingSnapshot";
        case Errc::NonEmptyDestination: return "NonEmptyDestination";
        case Errc::AdapterMissing: return "AdapterMissing";
        case Errc::UnknownTest: return "UnknownTest";
        case Errc::CoverageUnavailable: return "CoverageUnavailable";
        case Errc::MalformedReport: return "MalformedReport";
        case Errc::BinaryFile: return "BinaryFile";
        case Errc::MissingBicContext: return "MissingBicContext";
        case Errc::BudgetExhausted: return "BudgetExhausted";
        case Errc::Transport: return "Transport";
        case Errc::RateLimited: return "RateLimited";
        case Errc::AuthFailure: return "AuthFailure";
        case Errc::MalformedResponse: return "MalformedResponse";
        case Errc::SpanOutOfRange: return "SpanOutOfRange";
        case Errc::FileMissing: return "FileMissing";
        case Errc::DanglingAnnotation: return "DanglingAnnotation";
        case Errc::InvalidTag: return "InvalidTag";
        case Errc::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace regrepair
