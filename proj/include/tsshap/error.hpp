#pragma once

#include <stdexcept>
#include <string>

namespace tsshap {

/// Every failure the library can raise, one code per condition so the CLI
/// can map them to distinct exit codes.
enum class ErrorCode : int {
    // core
    LengthMismatch = 10,
    NonMonotonicTimestamps = 11,
    PeriodicityViolation = 12,
    InsufficientHistory = 13,
    NonFiniteValue = 14,
    // forecasters
    EmptyHistory = 20,
    SeasonTooLong = 21,
    OrderTooLong = 22,
    AlphaOutOfRange = 23,
    NotFitted = 24,
    // backtest
    SplitExhausted = 30,
    AllReferenceZero = 31,
    // features
    UnknownRegressor = 40,
    HolidayCalendarUnreadable = 41,
    // gbt
    EmptyTraining = 50,
    DimensionMismatch = 51,
    NonFiniteFeature = 52,
    // treeshap
    MissingCover = 60,
    TooManyFeatures = 61,
    // explainer
    HorizonOutOfRange = 70,
    EmptyInterval = 71,
    UnknownFeature = 72,
    DegenerateRange = 73,
    SurrogateUnderdetermined = 74,
    // robustness
    EvenOrder = 80,
    BlockTooLong = 81,
    ZeroVariance = 82,
    AllZeroImportance = 83,
    // cli / io
    ConfigInvalid = 90,
    InputUnreadable = 91,
    EmptyData = 92,
    FetchFailed = 93,
    ChecksumMismatch = 94,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace tsshap
