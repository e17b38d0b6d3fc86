#include "wincast/error.hpp"

namespace wincast {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::NonNumericCount: return "NonNumericCount";
        case ErrorCode::NonMonotoneDates: return "NonMonotoneDates";
        case ErrorCode::UnknownCountry: return "UnknownCountry";
        case ErrorCode::AllZero: return "AllZero";
        case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::EmptyRecords: return "EmptyRecords";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace wincast
