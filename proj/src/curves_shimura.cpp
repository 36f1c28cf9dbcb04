#include "hasse/curves_shimura.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

#include "hasse/errors.hpp"
#include "hasse/ntheory.hpp"

namespace hasse::shimura {

namespace {

// Class numbers are requested many times for the same discriminant during
// range scans. The memo lives only as long as one top-level call.
class ClassNumbers {
public:
    i64 operator()(const nt::Discriminant& d) {
        auto [it, inserted] = cache_.try_emplace(d.value(), 0);
        if (inserted) it->second = nt::class_number(d);
        return it->second;
    }

private:
    std::unordered_map<i64, i64> cache_;
};

i64 elliptic_product(const std::vector<i64>& primes, i64 disc) {
    i64 count = 1;
    for (i64 p : primes) count *= 1 - nt::kronecker(disc, p);
    return count;
}

i64 genus_from(const ShimuraDescriptor& desc) {
    BigInt phi = 1;
    for (i64 p : desc.factors()) phi *= p - 1;
    const i64 e2 = elliptic_product(desc.factors(), -4);
    const i64 e3 = elliptic_product(desc.factors(), -3);
    const Rational g = Rational(1) + Rational(phi, 12) - Rational(e2, 4) - Rational(e3, 3);
    return to_exact_int(g, "genus of X^" + std::to_string(desc.D()));
}

i64 fixed_count(const ShimuraDescriptor& desc, i64 m, ClassNumbers& h) {
    if (m <= 1 || desc.D() % m != 0 || std::gcd(m, desc.D() / m) != 1) {
        throw Error(ErrorCode::NotExactDivisor,
                    std::to_string(m) + " is not an exact divisor of " + std::to_string(desc.D()));
    }
    const i64 cofactor = desc.D() / m;
    i64 total = 0;
    for (i64 dv : fixed_point_discriminants(m)) {
        const nt::Discriminant d(dv);
        i64 local = 1;
        for (i64 p : desc.factors()) {
            if (cofactor % p != 0) continue;
            // An order non-maximal at a ramified prime has no optimal embedding.
            local *= (d.conductor() % p == 0) ? 0 : 1 - nt::kronecker(dv, p);
            if (local == 0) break;
        }
        if (local != 0) total += h(d) * local;
    }
    return total;
}

void check_even(i64 nu, const ShimuraDescriptor& desc, i64 m) {
    if (nu % 2 != 0) {
        throw Error(ErrorCode::IntegralityViolation, "odd fixed-point count for w_" +
                                                         std::to_string(m) + " on X^" +
                                                         std::to_string(desc.D()));
    }
}

i64 checked_genus(const Rational& value, const std::string& what) {
    const i64 g = to_exact_int(value, what);
    if (g < 0) throw Error(ErrorCode::IntegralityViolation, what + " is negative");
    return g;
}

i64 plus_genus(const ShimuraDescriptor& desc, ClassNumbers& h) {
    const i64 g = genus_from(desc);
    const i64 nu = fixed_count(desc, desc.D(), h);
    check_even(nu, desc, desc.D());
    return checked_genus(Rational(2 * g + 2 - nu, 4),
                         "genus of X^" + std::to_string(desc.D()) + "+");
}

i64 klein_genus(const ShimuraDescriptor& desc, ClassNumbers& h) {
    if (!desc.q()) throw Error(ErrorCode::InvalidArgument, "Klein quotient needs q");
    const i64 q = *desc.q();
    const i64 g = genus_from(desc);
    i64 sum = 0;
    for (i64 m : {q, desc.D() / q, desc.D()}) {
        const i64 nu = fixed_count(desc, m, h);
        check_even(nu, desc, m);
        sum += nu;
    }
    return checked_genus(Rational(2 * g + 6 - sum, 8),
                         "genus of X^" + std::to_string(desc.D()) + "/<w_D, w_" +
                             std::to_string(q) + ">");
}

i64 full_genus(const ShimuraDescriptor& desc, ClassNumbers& h) {
    const i64 g = genus_from(desc);
    i64 sum = 0;
    for (i64 m : desc.exact_divisors()) {
        const i64 nu = fixed_count(desc, m, h);
        check_even(nu, desc, m);
        sum += nu;
    }
    const i64 order = i64{1} << desc.factors().size();
    // 2g - 2 = |W| (2g_W - 2) + sum
    const Rational gw = (Rational(2 * g - 2 - sum, order) + 2) / 2;
    return checked_genus(gw, "genus of X^" + std::to_string(desc.D()) + "/W");
}

}  // namespace

bool is_quaternion_discriminant(i64 D) {
    if (D < 6 || !nt::is_squarefree(D)) return false;
    return nt::factor_squarefree(D).size() % 2 == 0;
}

ShimuraDescriptor::ShimuraDescriptor(i64 D, std::optional<i64> q) : D_(D), q_(q) {
    if (D < 2 || !nt::is_squarefree(D)) {
        throw Error(ErrorCode::InvalidDiscriminant,
                    std::to_string(D) + " is not a squarefree integer >= 2");
    }
    factors_ = nt::factor_squarefree(D);
    if (factors_.size() % 2 != 0) {
        throw Error(ErrorCode::InvalidDiscriminant,
                    std::to_string(D) + " has an odd number of prime factors");
    }
    if (q_ && std::find(factors_.begin(), factors_.end(), *q_) == factors_.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    std::to_string(*q_) + " is not a prime factor of " + std::to_string(D));
    }
}

std::vector<i64> ShimuraDescriptor::exact_divisors() const {
    std::vector<i64> out;
    const std::size_t k = factors_.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        i64 m = 1;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) m *= factors_[i];
        }
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 xd_genus(const ShimuraDescriptor& desc) { return genus_from(desc); }

i64 elliptic_points_order2(const ShimuraDescriptor& desc) {
    return elliptic_product(desc.factors(), -4);
}

i64 elliptic_points_order3(const ShimuraDescriptor& desc) {
    return elliptic_product(desc.factors(), -3);
}

std::vector<i64> fixed_point_discriminants(i64 m) {
    std::vector<i64> out{-4 * m};
    if (m % 4 == 3) out.push_back(-m);
    if (m == 2) out.push_back(-4);
    return out;
}

i64 al_fixed_count(const ShimuraDescriptor& desc, i64 m) {
    ClassNumbers h;
    return fixed_count(desc, m, h);
}

i64 xd_plus_genus(const ShimuraDescriptor& desc) {
    ClassNumbers h;
    return plus_genus(desc, h);
}

i64 klein_quotient_genus(const ShimuraDescriptor& desc) {
    ClassNumbers h;
    return klein_genus(desc, h);
}

i64 full_quotient_genus(const ShimuraDescriptor& desc) {
    ClassNumbers h;
    return full_genus(desc, h);
}

ShimuraInvariants shimura_invariants(const ShimuraDescriptor& desc) {
    ClassNumbers h;
    ShimuraInvariants inv{};
    inv.D = desc.D();
    inv.genus_xd = genus_from(desc);
    inv.e2 = elliptic_points_order2(desc);
    inv.e3 = elliptic_points_order3(desc);
    for (i64 m : desc.exact_divisors()) inv.al_fixed[m] = fixed_count(desc, m, h);
    inv.genus_xd_plus = plus_genus(desc, h);
    if (desc.q()) inv.genus_klein = klein_genus(desc, h);
    inv.genus_full_quotient = full_genus(desc, h);
    return inv;
}

AdmissibilityReport theorem3_admissible(i64 q, std::span<const i64> rest) {
    std::set<i64> distinct{q};
    if (!nt::is_prime(q)) throw Error(ErrorCode::InvalidArgument, std::to_string(q) + " is not prime");
    for (i64 p : rest) {
        if (!nt::is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
        if (!distinct.insert(p).second) {
            throw Error(ErrorCode::InvalidArgument, "primes must be pairwise distinct");
        }
    }
    if (rest.size() % 2 == 0) {
        throw Error(ErrorCode::InvalidArgument, "need an odd number of primes besides q");
    }

    AdmissibilityReport r{};
    r.q = q;
    r.rest.assign(rest.begin(), rest.end());
    r.D = q;
    for (i64 p : rest) r.D *= p;
    const ShimuraDescriptor desc(r.D, q);

    r.q_large = q > 163;
    r.legendre_ok = std::all_of(rest.begin(), rest.end(),
                                [q](i64 p) { return nt::kronecker(q, p) != 1; });
    r.minus_legendre_ok = std::all_of(rest.begin(), rest.end(),
                                      [q](i64 p) { return nt::kronecker(-q, p) != 1; });
    ClassNumbers h;
    r.fixed_point_count = fixed_count(desc, q, h);
    r.fixed_points_exist = r.fixed_point_count > 0;
    r.class_number = h(nt::field_discriminant(q));
    r.no_rational_fixed = r.class_number >= 2;
    r.klein_genus = klein_genus(desc, h);
    r.quotient_finite = r.klein_genus >= 2;
    r.admissible = r.q_large && r.fixed_points_exist && r.no_rational_fixed && r.quotient_finite;
    r.literal_disagrees = r.legendre_ok != r.fixed_points_exist;
    return r;
}

i64 scan_d0(i64 limit) {
    if (limit < 6) throw Error(ErrorCode::InvalidArgument, "scan_d0 needs limit >= 6");
    ClassNumbers h;
    for (i64 D = limit; D >= 6; --D) {
        if (!is_quaternion_discriminant(D)) continue;
        for (i64 q : nt::factor_squarefree(D)) {
            if (klein_genus(ShimuraDescriptor(D, q), h) <= 1) return D;
        }
    }
    // D = 6 always qualifies, so this is reached only on a formula bug.
    throw Error(ErrorCode::IntegralityViolation, "no D <= limit with Klein genus <= 1");
}

std::optional<i64> min_full_quotient_genus(i64 lo, i64 hi) {
    ClassNumbers h;
    std::optional<i64> best;
    for (i64 D = std::max<i64>(lo, 6); D <= hi; ++D) {
        if (!is_quaternion_discriminant(D)) continue;
        const i64 g = full_genus(ShimuraDescriptor(D), h);
        if (!best || g < *best) best = g;
    }
    return best;
}

Rational cm_density_heuristic(i64 trials, i64 num, i64 den) {
    if (den <= 0 || num < 0 || num > den) {
        throw Error(ErrorCode::InvalidProbability, "probability " + std::to_string(num) + "/" +
                                                       std::to_string(den) + " outside [0, 1]");
    }
    if (trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be nonnegative");
    const Rational miss = Rational(den - num, den);
    Rational all_miss = 1;
    for (i64 i = 0; i < trials; ++i) all_miss *= miss;
    return 1 - all_miss;
}

}  // namespace hasse::shimura
