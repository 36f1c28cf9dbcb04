#pragma once

#include <string>

#include <json.hpp>

#include "hasse/curves_shimura.hpp"
#include "hasse/curves_x0.hpp"
#include "hasse/twistcert.hpp"

namespace hasse::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCertificateVersion = "1";

/// Integers above 2^53 in magnitude are written as decimal strings.
Json json_integer(const BigInt& value);

Json to_json(const twist::CurveDescriptor& desc);
Json to_json(const twist::HypothesisReport& report);
Json to_json(const twist::PrimeConditionSet& conds);
Json to_json(const twist::ConditionTrace& trace);
Json to_json(const twist::TwistCertificate& cert);
Json to_json(const twist::ShihReport& report);
Json to_json(const x0::X0Invariants& inv);
Json to_json(const shimura::ShimuraInvariants& inv);
Json to_json(const shimura::AdmissibilityReport& report);
Json rational_json(const Rational& value);

/// Canonical text form: two-space indent, trailing newline.
std::string canonical(const Json& doc);

}  // namespace hasse::io
