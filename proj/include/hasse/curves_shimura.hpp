#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hasse/rational.hpp"

namespace hasse::shimura {

using i64 = std::int64_t;

/// Quaternion discriminant D (squarefree, even number >= 2 of prime factors)
/// with an optional designated prime q | D.
class ShimuraDescriptor {
public:
    /// Throws InvalidDiscriminant for a bad D and InvalidArgument when q is
    /// given but does not divide D.
    explicit ShimuraDescriptor(i64 D, std::optional<i64> q = std::nullopt);

    i64 D() const noexcept { return D_; }
    const std::vector<i64>& factors() const noexcept { return factors_; }
    const std::optional<i64>& q() const noexcept { return q_; }

    /// Exact divisors m || D with m > 1, ascending.
    std::vector<i64> exact_divisors() const;

private:
    i64 D_;
    std::vector<i64> factors_;
    std::optional<i64> q_;
};

/// True iff D is a valid quaternion discriminant over Q (excluding D = 1).
bool is_quaternion_discriminant(i64 D);

struct ShimuraInvariants {
    i64 D;
    i64 genus_xd;
    i64 e2;
    i64 e3;
    std::map<i64, i64> al_fixed;      // m -> nu(w_m)
    i64 genus_xd_plus;
    std::optional<i64> genus_klein;   // X^D / <w_D, w_q>, when q is set
    i64 genus_full_quotient;          // X^D / W
};

i64 xd_genus(const ShimuraDescriptor& desc);
i64 elliptic_points_order2(const ShimuraDescriptor& desc);
i64 elliptic_points_order3(const ShimuraDescriptor& desc);

/// CM discriminants whose optimal embeddings give the w_m fixed points:
/// -4m, plus -m when m = 3 mod 4, plus -4 when m = 2.
std::vector<i64> fixed_point_discriminants(i64 m);

/// nu(w_m) on X^D. Throws NotExactDivisor unless m || D and m > 1.
i64 al_fixed_count(const ShimuraDescriptor& desc, i64 m);

i64 xd_plus_genus(const ShimuraDescriptor& desc);

/// Genus of X^D / <w_D, w_q>; the descriptor must carry q.
i64 klein_quotient_genus(const ShimuraDescriptor& desc);

/// Genus of the full Atkin-Lehner quotient X^D / W.
i64 full_quotient_genus(const ShimuraDescriptor& desc);

ShimuraInvariants shimura_invariants(const ShimuraDescriptor& desc);

struct AdmissibilityReport {
    i64 q;
    std::vector<i64> rest;
    i64 D;
    bool q_large;              // q > 163
    bool legendre_ok;          // (q|p_i) != 1 for all i, as literally stated
    bool minus_legendre_ok;    // (-q|p_i) != 1 for all i
    bool fixed_points_exist;   // nu(w_q) > 0 on X^D
    i64 fixed_point_count;
    bool no_rational_fixed;    // h(Q(sqrt(-q))) >= 2
    i64 class_number;
    bool quotient_finite;      // Klein-quotient genus >= 2
    i64 klein_genus;
    bool admissible;           // q_large && fixed_points_exist && no_rational_fixed && quotient_finite
    bool literal_disagrees;    // legendre_ok != fixed_points_exist
};

/// Requires pairwise distinct primes and an odd number of entries in rest.
AdmissibilityReport theorem3_admissible(i64 q, std::span<const i64> rest);

/// Largest valid D <= limit having a prime q | D whose Klein quotient has
/// genus <= 1. Requires limit >= 6.
i64 scan_d0(i64 limit);

/// Smallest genus of X^D / W over valid D in [lo, hi]; nullopt if the range
/// holds no valid D.
std::optional<i64> min_full_quotient_genus(i64 lo, i64 hi);

/// 1 - (1 - num/den)^trials, exactly. Throws InvalidProbability unless
/// 0 <= num <= den and den > 0.
Rational cm_density_heuristic(i64 trials, i64 num, i64 den);

}  // namespace hasse::shimura
