#pragma once

#include <stdexcept>
#include <string>

namespace hasse {

enum class ErrorCode {
    InvalidArgument,
    NotSquarefree,
    InvalidModulus,
    InvalidDiscriminant,
    NonFundamentalDiscriminant,
    RamifiedPrime,
    BudgetExceeded,
    NotExactDivisor,
    IntegralityViolation,
    InvalidProbability,
    HypothesisFailure,
    VariantUnsupported,
    NotOddPrime,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when a curve fails one of the twist hypotheses; item() is "h1".."h4".
class HypothesisFailure : public Error {
public:
    HypothesisFailure(std::string item, const std::string& what)
        : Error(ErrorCode::HypothesisFailure, what), item_(std::move(item)) {}

    const std::string& item() const noexcept { return item_; }

private:
    std::string item_;
};

}  // namespace hasse
