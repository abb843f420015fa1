#ifndef TBMC_ERROR_HPP
#define TBMC_ERROR_HPP

#include <stdexcept>
#include <string>

/**
 * @file error.hpp
 * @brief Exception type shared by every module.
 */

namespace tbmc {

enum class ErrorCode {
    DuplicateEntry,
    IndexOutOfRange,
    EmptyRow,
    DimensionMismatch,
    NumericalFailure,
    TooLarge,
    SpecInvalid,
    ConfigInvalid,
    EmptyTestSet,
    ParseError,
    ValueOutOfDomain,
    IoError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateEntry: return "DuplicateEntry";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EmptyRow: return "EmptyRow";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::SpecInvalid: return "SpecInvalid";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::EmptyTestSet: return "EmptyTestSet";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValueOutOfDomain: return "ValueOutOfDomain";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/**
 * @brief Error raised by the library, tagged with an `ErrorCode` so callers
 * (the CLI in particular) can map failures onto exit statuses.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}

#endif
