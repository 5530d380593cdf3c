#pragma once

#include <stdexcept>
#include <string>

namespace regrepair {

enum class Errc {
    InvalidArgument,
    IoFailure,
    IncompleteMatrix,
    UnparseableOutput,
    MissingSnapshot,
    NonEmptyDestination,
    AdapterMissing,
    UnknownTest,
    CoverageUnavailable,
    MalformedReport,
    BinaryFile,
    MissingBicContext,
    BudgetExhausted,
    Transport,
    RateLimited,
    AuthFailure,
    MalformedResponse,
    SpanOutOfRange,
    FileMissing,
    DanglingAnnotation,
    InvalidTag,
    ConfigError,
};

const char* errc_name(Errc code);

/// Domain error carrying a stable code; the CLI maps these to exit code 1.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message);
    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace regrepair
