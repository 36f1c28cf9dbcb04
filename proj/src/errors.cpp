#include "hasse/errors.hpp"
#include "hasse/rational.hpp"

#include <limits>

namespace hasse {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotSquarefree: return "NotSquarefree";
        case ErrorCode::InvalidModulus: return "InvalidModulus";
        case ErrorCode::InvalidDiscriminant: return "InvalidDiscriminant";
        case ErrorCode::NonFundamentalDiscriminant: return "NonFundamentalDiscriminant";
        case ErrorCode::RamifiedPrime: return "RamifiedPrime";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NotExactDivisor: return "NotExactDivisor";
        case ErrorCode::IntegralityViolation: return "IntegralityViolation";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::HypothesisFailure: return "HypothesisFailure";
        case ErrorCode::VariantUnsupported: return "VariantUnsupported";
        case ErrorCode::NotOddPrime: return "NotOddPrime";
    }
    return "Unknown";
}

std::int64_t to_exact_int(const Rational& value, const std::string& what) {
    if (denominator(value) != 1) {
        throw Error(ErrorCode::IntegralityViolation,
                    what + " is not an integer: " + value.str());
    }
    const BigInt& n = numerator(value);
    if (n > std::numeric_limits<std::int64_t>::max() ||
        n < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorCode::IntegralityViolation, what + " overflows int64: " + n.str());
    }
    return static_cast<std::int64_t>(n);
}

}  // namespace hasse
