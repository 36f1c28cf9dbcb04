#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hasse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Converts an exact rational to int64, throwing IntegralityViolation when it
// is not an integer or does not fit. `what` names the quantity in the message.
std::int64_t to_exact_int(const Rational& value, const std::string& what);

}  // namespace hasse
