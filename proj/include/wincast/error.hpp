#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wincast {

enum class ErrorCode {
    MalformedHeader,
    RaggedRow,
    NonNumericCount,
    NonMonotoneDates,
    UnknownCountry,
    AllZero,
    WindowOutOfRange,
    SingularSystem,
    NonFiniteInput,
    DimensionMismatch,
    EmptyTrainingSet,
    InsufficientHistory,
    EmptyRecords,
    InsufficientSamples,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; the code is the
// machine-readable part, what() carries the human context.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wincast
