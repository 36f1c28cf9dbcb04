#include "hasse/curves_x0.hpp"

#include <string>

#include "hasse/errors.hpp"
#include "hasse/ntheory.hpp"
#include "hasse/rational.hpp"

namespace hasse::x0 {

namespace {

std::vector<i64> level_primes(i64 N) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "level must be >= 1");
    return nt::factor_squarefree(N);
}

void require_involution(i64 N) {
    if (N < 2) throw Error(ErrorCode::InvalidArgument, "w_N needs N >= 2");
}

i64 elliptic_product(const std::vector<i64>& primes, i64 disc) {
    i64 count = 1;
    for (i64 p : primes) count *= 1 + nt::kronecker(disc, p);
    return count;
}

}  // namespace

i64 elliptic_points_order2(i64 N) { return elliptic_product(level_primes(N), -4); }

i64 elliptic_points_order3(i64 N) { return elliptic_product(level_primes(N), -3); }

i64 cusp_count(i64 N) { return i64{1} << level_primes(N).size(); }

i64 x0_genus(i64 N) {
    const auto primes = level_primes(N);
    BigInt index = 1;
    for (i64 p : primes) index *= p + 1;
    const i64 nu2 = elliptic_product(primes, -4);
    const i64 nu3 = elliptic_product(primes, -3);
    const i64 nu_inf = i64{1} << primes.size();
    const Rational genus = Rational(1) + Rational(index, 12) - Rational(nu2, 4) -
                           Rational(nu3, 3) - Rational(nu_inf, 2);
    return to_exact_int(genus, "genus of X0(" + std::to_string(N) + ")");
}

i64 wn_fixed_count(i64 N) {
    level_primes(N);
    require_involution(N);
    i64 count = nt::class_number(nt::Discriminant(-4 * N));
    if (N % 4 == 3) count += nt::class_number(nt::Discriminant(-N));
    if (N == 2) count += nt::class_number(nt::Discriminant(-4));
    return count;
}

i64 x0_plus_genus(i64 N) {
    const i64 g = x0_genus(N);
    const i64 nu = wn_fixed_count(N);
    const Rational plus = Rational(2 * g + 2 - nu, 4);
    const i64 value = to_exact_int(plus, "genus of X0+(" + std::to_string(N) + ")");
    if (value < 0) {
        throw Error(ErrorCode::IntegralityViolation,
                    "negative genus of X0+(" + std::to_string(N) + ")");
    }
    return value;
}

i64 min_fixed_degree(i64 N) {
    level_primes(N);
    require_involution(N);
    return nt::field_class_number(N);
}

X0Invariants x0_invariants(i64 N) {
    require_involution(N);
    X0Invariants inv{};
    inv.N = N;
    inv.genus = x0_genus(N);
    inv.nu2 = elliptic_points_order2(N);
    inv.nu3 = elliptic_points_order3(N);
    inv.nu_inf = cusp_count(N);
    inv.wn_fixed = wn_fixed_count(N);
    inv.genus_plus = x0_plus_genus(N);
    inv.min_fixed_degree = min_fixed_degree(N);
    return inv;
}

std::vector<i64> low_genus_plus_levels(i64 bound) {
    if (bound < 2) throw Error(ErrorCode::InvalidArgument, "bound must be >= 2");
    std::vector<i64> out;
    for (i64 N = 2; N <= bound; ++N) {
        if (nt::is_squarefree(N) && x0_plus_genus(N) <= 1) out.push_back(N);
    }
    return out;
}

i64 largest_low_genus_plus(i64 bound) { return low_genus_plus_levels(bound).back(); }

}  // namespace hasse::x0
