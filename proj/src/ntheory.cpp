#include "hasse/ntheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hasse/errors.hpp"

namespace hasse::nt {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(u64 n, u64* root = nullptr) {
    const u64 r = isqrt(n);
    if (root) *root = r;
    return r * r == n;
}

// Miller-Rabin with the first twelve prime bases, deterministic below 3.3e24.
bool miller_rabin(u64 n) {
    static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kBases) {
        if (a % n == 0) continue;
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        constexpr u64 kBatch = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += kBatch;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void collect_prime_factors(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    collect_prime_factors(d, out);
    collect_prime_factors(n / d, out);
}

// Prime factorization with multiplicity, ascending.
std::vector<std::pair<u64, int>> factor(u64 n) {
    std::vector<u64> primes;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    collect_prime_factors(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, int>> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == p) {
            ++out.back().second;
        } else {
            out.emplace_back(p, 1);
        }
    }
    return out;
}

// Jacobi symbol (a|n) for odd n > 0 and 0 <= a.
int jacobi(u64 a, u64 n) {
    int t = 1;
    a %= n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const u64 r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

std::vector<char> small_sieve(u64 limit) {
    std::vector<char> is_composite(limit + 1, 0);
    for (u64 i = 2; i * i <= limit; ++i) {
        if (is_composite[i]) continue;
        for (u64 j = i * i; j <= limit; j += i) is_composite[j] = 1;
    }
    return is_composite;
}

}  // namespace

Discriminant::Discriminant(i64 value) : value_(value), fundamental_(0), conductor_(1) {
    if (value >= 0 || mod(value, 4) > 1) {
        throw Error(ErrorCode::InvalidDiscriminant,
                    "not a negative discriminant: " + std::to_string(value));
    }
    u64 kernel = 1;
    u64 square_root = 1;
    for (auto [p, e] : factor(static_cast<u64>(-value))) {
        if (e % 2) kernel *= p;
        for (int i = 0; i < e / 2; ++i) square_root *= p;
    }
    const i64 core = -static_cast<i64>(kernel);
    if (mod(core, 4) == 1) {
        fundamental_ = core;
        conductor_ = static_cast<i64>(square_root);
    } else {
        // core = 2 or 3 mod 4 forces an even square root.
        fundamental_ = 4 * core;
        conductor_ = static_cast<i64>(square_root / 2);
    }
}

PrincipalForm::PrincipalForm(Discriminant d)
    : disc(d),
      coefficients(d.value() % 4 == 0 ? ReducedForm{1, 0, d.abs() / 4}
                                      : ReducedForm{1, 1, (1 + d.abs()) / 4}) {}

__int128 PrincipalForm::evaluate(i64 x, i64 y) const noexcept {
    const __int128 X = x, Y = y;
    return coefficients.a * X * X + coefficients.b * X * Y + coefficients.c * Y * Y;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    return miller_rabin(static_cast<u64>(n));
}

bool is_squarefree(i64 n) {
    if (n < 1) return false;
    const auto f = factor(static_cast<u64>(n));
    return std::all_of(f.begin(), f.end(), [](const auto& pe) { return pe.second == 1; });
}

std::vector<i64> factor_squarefree(i64 n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "factor_squarefree needs n >= 1");
    std::vector<i64> out;
    for (auto [p, e] : factor(static_cast<u64>(n))) {
        if (e > 1) {
            throw Error(ErrorCode::NotSquarefree, std::to_string(n) + " is divisible by " +
                                                      std::to_string(p) + "^2");
        }
        out.push_back(static_cast<i64>(p));
    }
    return out;
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    u64 m;
    if (n < 0) {
        m = static_cast<u64>(-(n + 1)) + 1;
        if (a < 0) result = -result;
    } else {
        m = static_cast<u64>(n);
    }
    int twos = 0;
    while ((m & 1) == 0) {
        m >>= 1;
        ++twos;
    }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        // (a|2) = 1 if a = +-1 mod 8, -1 if a = +-3 mod 8
        const i64 r = mod(a, 8);
        if ((twos & 1) && (r == 3 || r == 5)) result = -result;
    }
    if (m == 1) return result;
    const u64 residue = static_cast<u64>(mod(a, static_cast<i64>(m)));
    return result * jacobi(residue, m);
}

std::optional<i64> sqrt_mod(i64 a, i64 p) {
    if (p < 3 || !is_prime(p)) {
        throw Error(ErrorCode::InvalidModulus, "sqrt_mod needs an odd prime, got " + std::to_string(p));
    }
    const u64 P = static_cast<u64>(p);
    const u64 A = static_cast<u64>(mod(a, p));
    if (A == 0) return 0;
    if (jacobi(A, P) != 1) return std::nullopt;

    // Tonelli-Shanks
    u64 q = P - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (jacobi(z, P) != -1) ++z;
    u64 m = static_cast<u64>(s);
    u64 c = pow_mod(z, q, P);
    u64 t = pow_mod(A, q, P);
    u64 r = pow_mod(A, (q + 1) / 2, P);
    while (t != 1) {
        u64 i = 0;
        u64 t2 = t;
        while (t2 != 1) {
            t2 = mul_mod(t2, t2, P);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, P);
        m = i;
        c = mul_mod(b, b, P);
        t = mul_mod(t, c, P);
        r = mul_mod(r, b, P);
    }
    return static_cast<i64>(std::min(r, P - r));
}

std::vector<ReducedForm> reduced_forms(Discriminant d, i64 budget) {
    if (d.abs() > budget) {
        throw Error(ErrorCode::BudgetExceeded, "|D| = " + std::to_string(d.abs()) +
                                                   " exceeds the class-number budget " +
                                                   std::to_string(budget));
    }
    const i64 D = d.value();
    std::vector<ReducedForm> forms;
    for (i64 a = 1; 3 * a * a <= d.abs(); ++a) {
        const i64 four_a = 4 * a;
        i64 b = -a + 1;
        if ((b - D) & 1) ++b;  // b = D mod 2
        for (; b <= a; b += 2) {
            const i64 num = b * b - D;
            if (num % four_a != 0) continue;
            const i64 c = num / four_a;
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            forms.push_back({a, b, c});
        }
    }
    return forms;
}

i64 class_number(Discriminant d, i64 budget) {
    return static_cast<i64>(reduced_forms(d, budget).size());
}

Discriminant field_discriminant(i64 n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "field_discriminant needs n >= 1");
    if (!is_squarefree(n)) {
        throw Error(ErrorCode::NotSquarefree, std::to_string(n) + " is not squarefree");
    }
    return Discriminant(n % 4 == 3 ? -n : -4 * n);
}

i64 field_class_number(i64 n) { return class_number(field_discriminant(n)); }

std::optional<Representation> represented_by_principal_form(i64 p, Discriminant d) {
    if (!d.is_fundamental()) {
        throw Error(ErrorCode::NonFundamentalDiscriminant,
                    std::to_string(d.value()) + " is not fundamental");
    }
    if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    if (p == 2 || d.abs() % p == 0) {
        throw Error(ErrorCode::RamifiedPrime,
                    std::to_string(p) + " divides 2*" + std::to_string(d.value()));
    }
    // Solve X^2 + |D| Y^2 = 4p with X = D mod 2, then recover (x, y).
    const auto root = sqrt_mod(d.value(), p);
    if (!root) return std::nullopt;
    u64 r0 = static_cast<u64>(*root);
    if ((r0 & 1) != static_cast<u64>(d.value() & 1)) r0 = static_cast<u64>(p) - r0;

    const u128 four_p = static_cast<u128>(4) * static_cast<u64>(p);
    const u64 limit = isqrt(static_cast<u64>(four_p > UINT64_MAX ? UINT64_MAX : four_p));
    u128 a = 2 * static_cast<u128>(static_cast<u64>(p));
    u128 b = r0;
    while (b > limit) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    const u128 rest = four_p - b * b;
    const u64 abs_d = static_cast<u64>(d.abs());
    if (rest % abs_d != 0) return std::nullopt;
    u64 y = 0;
    if (!is_square(static_cast<u64>(rest / abs_d), &y)) return std::nullopt;
    const i64 X = static_cast<i64>(b);
    const i64 Y = static_cast<i64>(y);
    if (d.value() % 4 == 0) return Representation{X / 2, Y};
    return Representation{(X - Y) / 2, Y};
}

std::vector<i64> primes_in_range(i64 lo, i64 hi) {
    if (lo < 2 || lo > hi) {
        throw Error(ErrorCode::InvalidArgument, "primes_in_range needs 2 <= lo <= hi");
    }
    const u64 root = isqrt(static_cast<u64>(hi));
    const auto base_composite = small_sieve(root);
    std::vector<u64> base;
    for (u64 i = 2; i <= root; ++i) {
        if (!base_composite[i]) base.push_back(i);
    }

    std::vector<i64> out;
    constexpr u64 kSegment = 1u << 18;
    std::vector<char> composite(kSegment);
    for (u64 start = static_cast<u64>(lo); start <= static_cast<u64>(hi); start += kSegment) {
        const u64 end = std::min<u64>(start + kSegment - 1, static_cast<u64>(hi));
        std::fill(composite.begin(), composite.begin() + (end - start + 1), 0);
        for (u64 p : base) {
            if (p * p > end) break;
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            for (u64 j = first; j <= end; j += p) composite[j - start] = 1;
        }
        for (u64 v = start; v <= end; ++v) {
            if (!composite[v - start]) out.push_back(static_cast<i64>(v));
        }
        if (end == static_cast<u64>(hi)) break;
    }
    return out;
}

}  // namespace hasse::nt
