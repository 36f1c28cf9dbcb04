#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hasse::nt {

using i64 = std::int64_t;

/// Default ceiling on |D| accepted by class_number.
inline constexpr i64 kDefaultClassNumberBudget = 1'000'000'000;

/// A negative integer congruent to 0 or 1 mod 4.
///
/// The decomposition D = f^2 * d0 with d0 fundamental is computed on
/// construction and cached.
class Discriminant {
public:
    /// Throws InvalidDiscriminant unless value < 0 and value mod 4 is 0 or 1.
    explicit Discriminant(i64 value);

    i64 value() const noexcept { return value_; }
    i64 abs() const noexcept { return -value_; }
    i64 fundamental() const noexcept { return fundamental_; }
    i64 conductor() const noexcept { return conductor_; }
    bool is_fundamental() const noexcept { return conductor_ == 1; }

    friend bool operator==(const Discriminant&, const Discriminant&) = default;

private:
    i64 value_;
    i64 fundamental_;
    i64 conductor_;
};

/// Binary quadratic form a x^2 + b xy + c y^2.
struct ReducedForm {
    i64 a;
    i64 b;
    i64 c;

    friend bool operator==(const ReducedForm&, const ReducedForm&) = default;
};

/// The form of discriminant D that represents 1.
struct PrincipalForm {
    explicit PrincipalForm(Discriminant d);

    Discriminant disc;
    ReducedForm coefficients;

    __int128 evaluate(i64 x, i64 y) const noexcept;
};

struct Representation {
    i64 x;
    i64 y;
};

bool is_prime(i64 n);
bool is_squarefree(i64 n);

/// Prime divisors of a squarefree n >= 1 in ascending order; throws
/// NotSquarefree when p^2 | n.
std::vector<i64> factor_squarefree(i64 n);

/// Kronecker symbol (a|n). Not both arguments may be zero.
int kronecker(i64 a, i64 n);

/// Square root of a modulo an odd prime p, as the smaller of the two roots
/// in [0, p-1]; nullopt when a is a non-residue. Throws InvalidModulus.
std::optional<i64> sqrt_mod(i64 a, i64 p);

/// All primitive reduced forms of discriminant d, sorted by (a, b).
std::vector<ReducedForm> reduced_forms(Discriminant d, i64 budget = kDefaultClassNumberBudget);

/// h(D): the number of primitive reduced forms. Throws BudgetExceeded when
/// |D| > budget.
i64 class_number(Discriminant d, i64 budget = kDefaultClassNumberBudget);

/// Discriminant of the maximal order of Q(sqrt(-n)), n >= 1 squarefree.
Discriminant field_discriminant(i64 n);

/// Class number of Q(sqrt(-n)).
i64 field_class_number(i64 n);

/// Cornacchia: solves principal_form(x, y) = p for fundamental d and a prime
/// p not dividing 2d. Throws NonFundamentalDiscriminant or RamifiedPrime.
std::optional<Representation> represented_by_principal_form(i64 p, Discriminant d);

/// Primes in [lo, hi] ascending (segmented sieve). Requires 2 <= lo <= hi.
std::vector<i64> primes_in_range(i64 lo, i64 hi);

}  // namespace hasse::nt
