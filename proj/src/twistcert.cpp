#include "hasse/twistcert.hpp"

#include <algorithm>
#include <array>
#include <thread>

#include "hasse/curves_x0.hpp"
#include "hasse/errors.hpp"

namespace hasse::twist {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr i64 kLargestClassNumberOneLevel = 163;

constexpr std::array<i64, 6> kGenusZeroLevels{2, 3, 5, 7, 10, 13};
constexpr std::array<i64, 6> kGenusOneLevels{11, 14, 15, 17, 19, 21};

std::vector<i64> bad_primes_of(const CurveDescriptor& desc) {
    return std::visit(overloaded{
                          [](const X0Curve& c) { return nt::factor_squarefree(c.N); },
                          [](const ShimuraPlusCurve& c) { return c.shimura.factors(); },
                      },
                      desc);
}

bool contains(const std::vector<i64>& v, i64 x) {
    return std::binary_search(v.begin(), v.end(), x);
}

// Splitting-condition check shared by the fast filter and the trace.
bool splitting_holds(const SplittingCondition& s, i64 p, std::optional<nt::Representation>* witness) {
    return std::visit(overloaded{
                          [&](const PrincipalSplitting& ps) {
                              if (p == 2 || ps.disc.abs() % p == 0) return false;
                              auto rep = nt::represented_by_principal_form(p, ps.disc);
                              if (witness) *witness = rep;
                              return rep.has_value();
                          },
                          [&](const InertSplitting& is) { return nt::kronecker(is.N, p) == -1; },
                      },
                      s);
}

bool passes(const PrimeConditionSet& conds, i64 p) {
    if (p % 8 != conds.residue_mod_8 || p <= conds.weil_threshold_M) return false;
    if (contains(conds.qr_primes, p) || contains(conds.bad_primes, p)) return false;
    for (i64 l : conds.qr_primes) {
        if (nt::kronecker(p, l) != 1) return false;
    }
    return splitting_holds(conds.splitting, p, nullptr);
}

std::vector<QualifyingPrime> scan_range(const PrimeConditionSet& conds, i64 lo, i64 hi) {
    std::vector<QualifyingPrime> out;
    if (lo > hi) return out;
    for (i64 p : nt::primes_in_range(lo, hi)) {
        if (passes(conds, p)) out.push_back({p, trace_conditions(conds, p)});
    }
    return out;
}

}  // namespace

CurveDescriptor make_x0(i64 N) {
    if (N < 2) throw Error(ErrorCode::InvalidArgument, "X0(N) with w_N needs N >= 2");
    nt::factor_squarefree(N);
    return X0Curve{N};
}

CurveDescriptor make_xd_plus(i64 D, i64 q) {
    return ShimuraPlusCurve{shimura::ShimuraDescriptor(D, q)};
}

std::string describe(const CurveDescriptor& desc) {
    return std::visit(overloaded{
                          [](const X0Curve& c) {
                              return "X0(" + std::to_string(c.N) + ") with w_" + std::to_string(c.N);
                          },
                          [](const ShimuraPlusCurve& c) {
                              return "X^" + std::to_string(c.shimura.D()) + "+ with w_" +
                                     std::to_string(*c.shimura.q());
                          },
                      },
                      desc);
}

const char* to_string(LocalPoints v) noexcept {
    switch (v) {
        case LocalPoints::ProvenCusps: return "ProvenCusps";
        case LocalPoints::CitedFact: return "CitedFact";
        case LocalPoints::Unknown: return "Unknown";
    }
    return "Unknown";
}

const char* to_string(Variant v) noexcept {
    return v == Variant::Split ? "split" : "inert";
}

const char* to_string(LocalStatus s) noexcept {
    switch (s) {
        case LocalStatus::Obstructed: return "ObstructedAtN";
        case LocalStatus::LocalPoints: return "LocalPointsAtN";
        case LocalStatus::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

bool HypothesisReport::all_hold() const noexcept { return !first_failure().has_value(); }

std::optional<std::string> HypothesisReport::first_failure() const {
    if (!h1_no_rational_fixed) return "h1";
    if (!h2_geometric_fixed) return "h2";
    if (h3_local_points == LocalPoints::Unknown) return "h3";
    if (!h4_quotient_finite) return "h4";
    return std::nullopt;
}

HypothesisReport check_hypotheses(const CurveDescriptor& desc) {
    HypothesisReport r;
    std::visit(
        overloaded{
            [&](const X0Curve& c) {
                r.class_number_used = x0::min_fixed_degree(c.N);
                r.h1_no_rational_fixed = r.class_number_used >= 2;
                r.h1_justification = "min degree of a w_N-fixed point = h(Q(sqrt(-" +
                                     std::to_string(c.N) + "))) = " +
                                     std::to_string(r.class_number_used);
                r.fixed_point_count = x0::wn_fixed_count(c.N);
                r.h2_geometric_fixed = r.fixed_point_count > 0;
                r.h3_local_points = LocalPoints::ProvenCusps;
                r.genus = x0::x0_genus(c.N);
                r.quotient_genus = x0::x0_plus_genus(c.N);
            },
            [&](const ShimuraPlusCurve& c) {
                if (!c.shimura.q()) throw Error(ErrorCode::InvalidArgument, "X^{D+} needs q");
                const i64 q = *c.shimura.q();
                r.class_number_used = nt::field_class_number(q);
                const bool large = q > kLargestClassNumberOneLevel;
                r.h1_no_rational_fixed = large && r.class_number_used >= 2;
                r.h1_justification = "h(Q(sqrt(-" + std::to_string(q) + "))) = " +
                                     std::to_string(r.class_number_used) + ", q " +
                                     (large ? "> 163" : "<= 163");
                r.fixed_point_count = shimura::al_fixed_count(c.shimura, q);
                r.h2_geometric_fixed = r.fixed_point_count > 0;
                r.h3_local_points = LocalPoints::CitedFact;
                r.genus = shimura::xd_plus_genus(c.shimura);
                r.quotient_genus = shimura::klein_quotient_genus(c.shimura);
            },
        },
        desc);
    r.h4_quotient_finite = r.quotient_genus >= 2;
    return r;
}

i64 weil_threshold(i64 g) {
    if (g < 1) throw Error(ErrorCode::InvalidArgument, "weil_threshold needs g >= 1");
    const __int128 four_g2 = static_cast<__int128>(4) * g * g;
    // (l+1)^2 <= 4g^2 l forces l <= 4g^2 - 2 for g >= 1, so 4g^2 is a safe start.
    __int128 l = four_g2;
    while ((l + 1) * (l + 1) > four_g2 * l) --l;
    return static_cast<i64>(l);
}

PrimeConditionSet build_conditions(const CurveDescriptor& desc, Variant variant) {
    const HypothesisReport report = check_hypotheses(desc);
    if (auto failed = report.first_failure()) {
        throw HypothesisFailure(*failed, describe(desc) + " fails hypothesis " + *failed);
    }
    if (variant == Variant::InertAppendix) {
        const auto* x0 = std::get_if<X0Curve>(&desc);
        if (!x0 || !nt::is_prime(x0->N) || x0->N % 4 != 3 || x0->N <= kLargestClassNumberOneLevel) {
            throw Error(ErrorCode::VariantUnsupported,
                        "inert variant needs X0(N) with N prime, N = 3 mod 4, N > 163");
        }
    }

    const std::vector<i64> bad = bad_primes_of(desc);
    const i64 M = std::max(weil_threshold(report.genus), bad.back());
    std::vector<i64> qr;
    for (i64 l : nt::primes_in_range(3, std::max<i64>(3, M))) {
        if (l <= M) qr.push_back(l);
    }
    SplittingCondition splitting = std::visit(
        overloaded{
            [&](const X0Curve& c) -> SplittingCondition {
                if (variant == Variant::Split) return PrincipalSplitting{nt::field_discriminant(c.N)};
                std::erase(qr, c.N);
                return InertSplitting{c.N};
            },
            [](const ShimuraPlusCurve& c) -> SplittingCondition {
                return PrincipalSplitting{nt::field_discriminant(*c.shimura.q())};
            },
        },
        desc);
    PrimeConditionSet conds{.residue_mod_8 = 1,
                            .qr_primes = std::move(qr),
                            .splitting = std::move(splitting),
                            .bad_primes = bad,
                            .weil_threshold_M = M,
                            .variant = variant};
    return conds;
}

i64 independent_qr_count(const PrimeConditionSet& conds) {
    const i64 disc = std::visit(overloaded{
                                    [](const PrincipalSplitting& s) { return s.disc.abs(); },
                                    [](const InertSplitting& s) { return s.N; },
                                },
                                conds.splitting);
    return std::count_if(conds.qr_primes.begin(), conds.qr_primes.end(),
                         [disc](i64 l) { return disc % l != 0; });
}

Rational density_lower_bound(const PrimeConditionSet& conds, i64 h) {
    if (h < 1) throw Error(ErrorCode::InvalidArgument, "class number must be >= 1");
    BigInt den = 4;
    den <<= static_cast<unsigned>(independent_qr_count(conds));
    den *= std::holds_alternative<PrincipalSplitting>(conds.splitting) ? 2 * h : 2;
    return Rational(BigInt(1), den);
}

bool ConditionTrace::all() const noexcept {
    return residue_mod_8 && above_threshold && not_excluded && splitting &&
           std::all_of(quadratic_residue.begin(), quadratic_residue.end(),
                       [](const auto& e) { return e.second; });
}

ConditionTrace trace_conditions(const PrimeConditionSet& conds, i64 p) {
    if (!nt::is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    ConditionTrace t;
    t.residue_mod_8 = p % 8 == conds.residue_mod_8;
    t.above_threshold = p > conds.weil_threshold_M;
    t.not_excluded = !contains(conds.qr_primes, p) && !contains(conds.bad_primes, p);
    t.quadratic_residue.reserve(conds.qr_primes.size());
    for (i64 l : conds.qr_primes) t.quadratic_residue.emplace_back(l, nt::kronecker(p, l) == 1);
    t.splitting = splitting_holds(conds.splitting, p, &t.witness);
    return t;
}

std::vector<QualifyingPrime> enumerate_primes(const PrimeConditionSet& conds, i64 bound,
                                              unsigned workers) {
    if (bound < 2) return {};
    workers = std::max(1u, workers);
    const i64 span = std::max<i64>(1, (bound - 1 + workers - 1) / workers);
    std::vector<std::vector<QualifyingPrime>> parts(workers);
    {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            const i64 lo = 2 + static_cast<i64>(w) * span;
            const i64 hi = std::min(bound, lo + span - 1);
            threads.emplace_back([&conds, &parts, w, lo, hi] { parts[w] = scan_range(conds, lo, hi); });
        }
    }
    std::vector<QualifyingPrime> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

LocalStatus theorem4_obstruction(i64 N) {
    if (N < 3 || !nt::is_prime(N)) {
        throw Error(ErrorCode::NotOddPrime, std::to_string(N) + " is not an odd prime");
    }
    return N % 4 == 1 ? LocalStatus::Obstructed : LocalStatus::LocalPoints;
}

ShihReport shih_classify(i64 N, i64 p) {
    if (N < 2) throw Error(ErrorCode::InvalidArgument, "N must be >= 2");
    nt::factor_squarefree(N);
    if (p < 3 || !nt::is_prime(p)) {
        throw Error(ErrorCode::NotOddPrime, std::to_string(p) + " is not an odd prime");
    }
    if (N % p == 0) throw Error(ErrorCode::InvalidArgument, "p must not divide N");

    ShihReport r{};
    r.N = N;
    r.p = p;
    r.shih_applicable = nt::kronecker(N, p) == -1;
    r.genus = x0::x0_genus(N);
    auto in = [N](const auto& list) { return std::find(list.begin(), list.end(), N) != list.end(); };
    // 6 is absent from the genus-0 list, so fall back to the computed genus
    r.genus_class = in(kGenusZeroLevels) ? 0 : in(kGenusOneLevels) ? 1 : std::min<i64>(r.genus, 2);
    if (N > 2 && nt::is_prime(N)) {
        r.local_obstruction = theorem4_obstruction(N);
        r.obstruction_place = N;
    } else if (N == 10) {
        r.local_obstruction =
            nt::kronecker(5, p) == 1 ? LocalStatus::LocalPoints : LocalStatus::Obstructed;
        r.obstruction_place = 5;
    } else {
        r.local_obstruction = LocalStatus::Undetermined;
        r.obstruction_place = 0;
    }
    return r;
}

TwistCertificate certify(const CurveDescriptor& desc, Variant variant, i64 bound, unsigned workers) {
    TwistCertificate cert{desc, check_hypotheses(desc), build_conditions(desc, variant),
                          Rational(0), {}, {}};
    cert.density_lower_bound = density_lower_bound(cert.conditions, cert.hypotheses.class_number_used);
    cert.primes_found = enumerate_primes(cert.conditions, bound, workers);

    cert.caveats.push_back(
        "global: C_p has no rational points for all but finitely many p in this family, "
        "but the exceptions are not effectively bounded; listed primes are members of the "
        "positive-density family with everywhere-local points, not individually proven "
        "Hasse-principle violations");
    if (std::holds_alternative<ShimuraPlusCurve>(desc)) {
        cert.caveats.push_back(
            "local: everywhere-local solvability of X^{D+} is an established theorem taken "
            "as input, not verified here");
    }
    if (variant == Variant::Split) {
        const auto& s = std::get<PrincipalSplitting>(cert.conditions.splitting);
        cert.caveats.push_back(
            "splitting: complete splitting in the field of definition of the maximal-order "
            "CM fixed point is realized as representation by the principal form of "
            "discriminant " + std::to_string(s.disc.value()));
    } else {
        cert.caveats.push_back(
            "splitting: the complete-splitting condition at the CM fixed point is replaced by "
            "(N|p) = -1; h(-N) is odd, so the Frobenius class with nontrivial restriction to "
            "Q(sqrt(-N)) gives a degree-one prime of Q(P0) above p");
    }
    return cert;
}

bool verify_certificate(const TwistCertificate& cert) {
    return std::all_of(cert.primes_found.begin(), cert.primes_found.end(), [&](const QualifyingPrime& q) {
        if (!nt::is_prime(q.p)) return false;
        const ConditionTrace t = trace_conditions(cert.conditions, q.p);
        if (!t.all()) return false;
        if (t.witness) {
            const auto& s = std::get<PrincipalSplitting>(cert.conditions.splitting);
            if (nt::PrincipalForm(s.disc).evaluate(t.witness->x, t.witness->y) != q.p) return false;
        }
        return true;
    });
}

}  // namespace hasse::twist
