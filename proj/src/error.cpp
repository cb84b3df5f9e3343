#include "tsshap/error.hpp"

namespace tsshap {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
        case ErrorCode::PeriodicityViolation: return "PeriodicityViolation";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::EmptyHistory: return "EmptyHistory";
        case ErrorCode::SeasonTooLong: return "SeasonTooLong";
        case ErrorCode::OrderTooLong: return "OrderTooLong";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::NotFitted: return "NotFitted";
        case ErrorCode::SplitExhausted: return "SplitExhausted";
        case ErrorCode::AllReferenceZero: return "AllReferenceZero";
        case ErrorCode::UnknownRegressor: return "UnknownRegressor";
        case ErrorCode::HolidayCalendarUnreadable: return "HolidayCalendarUnreadable";
        case ErrorCode::EmptyTraining: return "EmptyTraining";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::MissingCover: return "MissingCover";
        case ErrorCode::TooManyFeatures: return "TooManyFeatures";
        case ErrorCode::HorizonOutOfRange: return "HorizonOutOfRange";
        case ErrorCode::EmptyInterval: return "EmptyInterval";
        case ErrorCode::UnknownFeature: return "UnknownFeature";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::SurrogateUnderdetermined: return "SurrogateUnderdetermined";
        case ErrorCode::EvenOrder: return "EvenOrder";
        case ErrorCode::BlockTooLong: return "BlockTooLong";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::AllZeroImportance: return "AllZeroImportance";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::InputUnreadable: return "InputUnreadable";
        case ErrorCode::EmptyData: return "EmptyData";
        case ErrorCode::FetchFailed: return "FetchFailed";
        case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    }
    return "Error";
}

}  // namespace tsshap
