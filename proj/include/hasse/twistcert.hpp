#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hasse/curves_shimura.hpp"
#include "hasse/ntheory.hpp"
#include "hasse/rational.hpp"

namespace hasse::twist {

using i64 = std::int64_t;

/// X0(N) with the involution w_N.
struct X0Curve {
    i64 N;
};

/// X^{D+} = X^D / w_D with the involution induced by w_q.
struct ShimuraPlusCurve {
    shimura::ShimuraDescriptor shimura;
};

using CurveDescriptor = std::variant<X0Curve, ShimuraPlusCurve>;

/// Validates N (squarefree, >= 2).
CurveDescriptor make_x0(i64 N);
/// Validates D and q | D.
CurveDescriptor make_xd_plus(i64 D, i64 q);

std::string describe(const CurveDescriptor& desc);

enum class LocalPoints { ProvenCusps, CitedFact, Unknown };

const char* to_string(LocalPoints v) noexcept;

struct HypothesisReport {
    bool h1_no_rational_fixed = false;
    std::string h1_justification;
    i64 class_number_used = 0;
    bool h2_geometric_fixed = false;
    i64 fixed_point_count = 0;
    LocalPoints h3_local_points = LocalPoints::Unknown;
    bool h4_quotient_finite = false;
    i64 genus = 0;
    i64 quotient_genus = 0;

    bool all_hold() const noexcept;
    /// "h1".."h4" for the first failing item, if any.
    std::optional<std::string> first_failure() const;
};

HypothesisReport check_hypotheses(const CurveDescriptor& desc);

/// Largest integer l >= 1 with (l + 1)^2 <= 4 g^2 l; every larger l has a
/// point on any smooth genus-g curve over F_l. Requires g >= 1.
i64 weil_threshold(i64 g);

enum class Variant { Split, InertAppendix };

const char* to_string(Variant v) noexcept;

/// p is represented by the principal form of disc.
struct PrincipalSplitting {
    nt::Discriminant disc;
};

/// (N|p) = -1.
struct InertSplitting {
    i64 N;
};

using SplittingCondition = std::variant<PrincipalSplitting, InertSplitting>;

struct PrimeConditionSet {
    i64 residue_mod_8 = 1;
    std::vector<i64> qr_primes;  // require (p|l) = 1
    SplittingCondition splitting;
    std::vector<i64> bad_primes;
    i64 weil_threshold_M = 0;  // p must exceed this
    Variant variant = Variant::Split;
};

/// Throws HypothesisFailure, then VariantUnsupported (inert needs X0(N) with
/// N prime, N = 3 mod 4, N > 163).
PrimeConditionSet build_conditions(const CurveDescriptor& desc, Variant variant);

/// Primes in qr_primes that do not divide the splitting discriminant.
i64 independent_qr_count(const PrimeConditionSet& conds);

/// Split: 1 / (4 * 2^k' * 2h). Inert: 1 / (4 * 2^k' * 2).
Rational density_lower_bound(const PrimeConditionSet& conds, i64 h);

struct ConditionTrace {
    bool residue_mod_8 = false;
    bool above_threshold = false;  // p > M
    bool not_excluded = false;     // p not in qr_primes or bad_primes
    std::vector<std::pair<i64, bool>> quadratic_residue;
    bool splitting = false;
    std::optional<nt::Representation> witness;

    bool all() const noexcept;
};

/// Evaluates every condition on p without short-circuiting.
ConditionTrace trace_conditions(const PrimeConditionSet& conds, i64 p);

struct QualifyingPrime {
    i64 p;
    ConditionTrace trace;
};

/// All primes p <= bound meeting every condition. The range is split across
/// `workers` threads; the result does not depend on the worker count.
std::vector<QualifyingPrime> enumerate_primes(const PrimeConditionSet& conds, i64 bound,
                                              unsigned workers = 1);

enum class LocalStatus { Obstructed, LocalPoints, Undetermined };

const char* to_string(LocalStatus s) noexcept;

/// For an odd prime N: Obstructed iff N = 1 mod 4. Throws NotOddPrime.
LocalStatus theorem4_obstruction(i64 N);

struct ShihReport {
    i64 N;
    i64 p;
    bool shih_applicable;  // (N|p) = -1
    int genus_class;       // 0, 1, or 2 meaning "at least two"
    i64 genus;
    LocalStatus local_obstruction;
    i64 obstruction_place;  // the place l the status refers to, 0 if none
};

ShihReport shih_classify(i64 N, i64 p);

struct TwistCertificate {
    CurveDescriptor descriptor;
    HypothesisReport hypotheses;
    PrimeConditionSet conditions;
    Rational density_lower_bound;
    std::vector<QualifyingPrime> primes_found;
    std::vector<std::string> caveats;
};

/// Runs the whole pipeline. Throws HypothesisFailure naming the failing item.
TwistCertificate certify(const CurveDescriptor& desc, Variant variant, i64 bound,
                         unsigned workers = 1);

/// Re-evaluates every condition on every listed prime.
bool verify_certificate(const TwistCertificate& cert);

}  // namespace hasse::twist
