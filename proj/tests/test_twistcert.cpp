#include <doctest.h>

#include <set>

#include "hasse/curves_x0.hpp"
#include "hasse/errors.hpp"
#include "hasse/twistcert.hpp"
#include "oracles.hpp"

using namespace hasse;
using namespace hasse::twist;

namespace {

// Condition sets small enough that Chebotarev statistics are visible below 10^6.
PrimeConditionSet synthetic_split(std::vector<i64> qr, i64 disc, i64 M) {
    return PrimeConditionSet{.residue_mod_8 = 1,
                             .qr_primes = std::move(qr),
                             .splitting = PrincipalSplitting{nt::Discriminant(disc)},
                             .bad_primes = {},
                             .weil_threshold_M = M,
                             .variant = Variant::Split};
}

PrimeConditionSet synthetic_inert(std::vector<i64> qr, i64 N, i64 M) {
    return PrimeConditionSet{.residue_mod_8 = 1,
                             .qr_primes = std::move(qr),
                             .splitting = InertSplitting{N},
                             .bad_primes = {N},
                             .weil_threshold_M = M,
                             .variant = Variant::InertAppendix};
}

// Tests each condition on each integer independently of the library sieve.
std::vector<i64> naive_enumerate(const PrimeConditionSet& c, i64 bound) {
    std::vector<i64> out;
    for (i64 p = 2; p <= bound; ++p) {
        if (!oracle::is_prime(p) || p % 8 != 1 || p <= c.weil_threshold_M) continue;
        bool ok = true;
        for (i64 l : c.qr_primes) ok &= p != l && oracle::legendre(p, l) == 1;
        for (i64 l : c.bad_primes) ok &= p != l;
        if (!ok) continue;
        if (const auto* ps = std::get_if<PrincipalSplitting>(&c.splitting)) {
            if (ps->disc.abs() % p == 0 || !oracle::represent(p, ps->disc.value())) continue;
        } else {
            if (oracle::legendre(std::get<InertSplitting>(c.splitting).N, p) != -1) continue;
        }
        out.push_back(p);
    }
    return out;
}

std::vector<i64> primes_of(const std::vector<QualifyingPrime>& v) {
    std::vector<i64> out;
    for (const auto& q : v) out.push_back(q.p);
    return out;
}

std::string failure_item(auto&& fn) {
    try {
        fn();
    } catch (const HypothesisFailure& e) {
        return e.item();
    }
    return "";
}

}  // namespace

TEST_CASE("descriptor construction") {
    CHECK_THROWS_AS(make_x0(12), Error);
    CHECK_THROWS_AS(make_x0(1), Error);
    CHECK_THROWS_AS(make_xd_plus(6, 5), Error);
    CHECK_THROWS_AS(make_xd_plus(30, 2), Error);
    CHECK(describe(make_x0(167)) == "X0(167) with w_167");
    CHECK(describe(make_xd_plus(6, 2)) == "X^6+ with w_2");
}

TEST_CASE("check_hypotheses on X0(N)") {
    const auto r137 = check_hypotheses(make_x0(137));
    CHECK(r137.h1_no_rational_fixed);
    CHECK(r137.h2_geometric_fixed);
    CHECK(r137.h3_local_points == LocalPoints::ProvenCusps);
    CHECK(r137.h4_quotient_finite);
    CHECK(r137.all_hold());
    CHECK(r137.class_number_used == 8);
    CHECK(r137.genus == 11);
    CHECK(r137.h1_justification.find("8") != std::string::npos);

    const auto r163 = check_hypotheses(make_x0(163));
    CHECK_FALSE(r163.h1_no_rational_fixed);
    CHECK(r163.first_failure() == "h1");

    const auto r131 = check_hypotheses(make_x0(131));
    CHECK(r131.h1_no_rational_fixed);
    CHECK_FALSE(r131.h4_quotient_finite);
    CHECK(r131.quotient_genus == 1);
    CHECK(r131.first_failure() == "h4");
}

TEST_CASE("check_hypotheses on X^{D+}") {
    const auto r = check_hypotheses(make_xd_plus(6, 3));
    CHECK_FALSE(r.h1_no_rational_fixed);
    CHECK(r.h3_local_points == LocalPoints::CitedFact);
    CHECK(r.first_failure() == "h1");
}

TEST_CASE("weil_threshold") {
    CHECK(weil_threshold(1) == 1);
    CHECK(weil_threshold(2) == 13);
    CHECK(weil_threshold(3) == 33);
    CHECK(weil_threshold(14) == 781);
    CHECK_THROWS_AS(weil_threshold(0), Error);
    for (i64 g = 1; g <= 40; ++g) {
        const i64 M = weil_threshold(g);
        const auto bad = [g](i64 l) { return (l + 1) * (l + 1) <= 4 * g * g * l; };
        CHECK(bad(M));
        for (i64 l = M + 1; l <= M + 200; ++l) CHECK_FALSE(bad(l));
    }
    CHECK(weil_threshold(1'000'000) > 0);
}

TEST_CASE("build_conditions") {
    const auto inert = build_conditions(make_x0(167), Variant::InertAppendix);
    CHECK(inert.weil_threshold_M == 781);
    std::vector<i64> expected;
    for (i64 l : nt::primes_in_range(3, 781)) {
        if (l != 167) expected.push_back(l);
    }
    CHECK(inert.qr_primes == expected);
    REQUIRE(std::holds_alternative<InertSplitting>(inert.splitting));
    CHECK(std::get<InertSplitting>(inert.splitting).N == 167);
    CHECK(inert.bad_primes == std::vector<i64>{167});

    const auto split = build_conditions(make_x0(137), Variant::Split);
    REQUIRE(std::holds_alternative<PrincipalSplitting>(split.splitting));
    CHECK(std::get<PrincipalSplitting>(split.splitting).disc.value() == -548);
    CHECK(split.weil_threshold_M == weil_threshold(11));
    CHECK(std::binary_search(split.qr_primes.begin(), split.qr_primes.end(), 137));
    for (i64 l : split.qr_primes) {
        CHECK(l % 2 == 1);
        CHECK(l <= split.weil_threshold_M);
    }

    CHECK(failure_item([] { build_conditions(make_x0(131), Variant::Split); }) == "h4");
    CHECK(failure_item([] { build_conditions(make_x0(131), Variant::InertAppendix); }) == "h4");
    try {
        build_conditions(make_x0(137), Variant::InertAppendix);
        FAIL("137 = 1 mod 4");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::VariantUnsupported);
    }
}

TEST_CASE("density_lower_bound") {
    CHECK(density_lower_bound(synthetic_inert({}, 167, 0), 1) == Rational(1, 8));
    CHECK(density_lower_bound(synthetic_split({3, 5, 7}, -4, 7), 2) == Rational(1, 128));
    // primes dividing the discriminant do not count toward k'
    CHECK(independent_qr_count(synthetic_split({3, 5, 7, 11}, -20, 11)) == 3);

    Rational previous = 1;
    for (std::size_t k = 0; k < 8; ++k) {
        const auto odd = nt::primes_in_range(3, 40);
        const std::vector<i64> qr(odd.begin(), odd.begin() + static_cast<std::ptrdiff_t>(k));
        const auto d = density_lower_bound(synthetic_split(qr, -4, 40), 1);
        CHECK(d > 0);
        CHECK(d <= previous);
        previous = d;
    }
    const auto conds = synthetic_split({3}, -4, 3);
    for (i64 h = 1; h < 10; ++h) CHECK(density_lower_bound(conds, h + 1) < density_lower_bound(conds, h));

    const auto real = build_conditions(make_x0(167), Variant::InertAppendix);
    CHECK(density_lower_bound(real, 11) == Rational(BigInt(1), BigInt(1) << 138));
}

TEST_CASE("enumerate_primes examples") {
    const auto sums = enumerate_primes(synthetic_split({}, -4, 0), 120);
    CHECK(primes_of(sums) == std::vector<i64>{17, 41, 73, 89, 97, 113});
    CHECK(enumerate_primes(synthetic_split({}, -4, 0), 3).empty());
    CHECK(enumerate_primes(build_conditions(make_x0(167), Variant::InertAppendix), 3).empty());
}

TEST_CASE("enumerate_primes agrees with a naive per-prime loop") {
    const std::vector<PrimeConditionSet> sets{
        synthetic_split({3, 5}, -20, 5),
        synthetic_split({3, 7, 11}, -23, 11),
        synthetic_split({}, -163, 0),
        synthetic_inert({3, 5, 7}, 167, 7),
        synthetic_inert({3}, 199, 3),
    };
    for (const auto& c : sets) {
        const auto fast = primes_of(enumerate_primes(c, 100'000));
        CHECK(fast == naive_enumerate(c, 100'000));
        CHECK(!fast.empty());
    }
}

TEST_CASE("enumerate_primes is independent of the worker count") {
    const auto c = synthetic_inert({3, 5}, 167, 5);
    const auto one = primes_of(enumerate_primes(c, 300'000, 1));
    for (unsigned w : {2u, 3u, 7u, 16u}) CHECK(primes_of(enumerate_primes(c, 300'000, w)) == one);
}

TEST_CASE("traces are complete and self-verifying") {
    const auto c = synthetic_split({3, 5, 7}, -23, 7);
    for (const auto& q : enumerate_primes(c, 50'000)) {
        CHECK(q.trace.all());
        CHECK(q.trace.quadratic_residue.size() == 3);
        REQUIRE(q.trace.witness.has_value());
        CHECK(nt::PrincipalForm(nt::Discriminant(-23)).evaluate(q.trace.witness->x, q.trace.witness->y) == q.p);
    }
    const auto t = trace_conditions(c, 11);
    CHECK_FALSE(t.residue_mod_8);
    CHECK_THROWS_AS(trace_conditions(c, 15), Error);
}

TEST_CASE("split primes are residues modulo the odd primes of the level") {
    // the genus field of Q(sqrt(-N)) sits inside the Hilbert class field
    for (i64 N : {5, 13, 15, 21, 35}) {
        const auto c = synthetic_split({}, nt::field_discriminant(N).value(), 0);
        for (const auto& q : enumerate_primes(c, 200'000)) {
            for (i64 l : nt::factor_squarefree(N)) {
                if (l % 2 == 1) CHECK(nt::kronecker(q.p, l) == 1);
            }
        }
    }
}

TEST_CASE("split and inert sets are disjoint") {
    const auto split = synthetic_split({3, 5}, -167, 5);
    const auto inert = synthetic_inert({3, 5}, 167, 5);
    const auto a = primes_of(enumerate_primes(split, 500'000));
    const auto b = primes_of(enumerate_primes(inert, 500'000));
    CHECK(!a.empty());
    CHECK(!b.empty());
    std::vector<i64> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    CHECK(both.empty());
}

TEST_CASE("observed frequency tracks the density bound on small condition sets") {
    const i64 bound = 1'000'000;
    const double pi = static_cast<double>(nt::primes_in_range(2, bound).size());
    struct Case {
        PrimeConditionSet conds;
        i64 h;
    };
    const std::vector<Case> cases{
        {synthetic_inert({3, 5, 7}, 167, 7), 11},
        {synthetic_inert({3, 5, 7, 11}, 199, 11), 9},
        {synthetic_split({3, 5}, -23, 5), 3},
    };
    for (const auto& c : cases) {
        const double density = density_lower_bound(c.conds, c.h).convert_to<double>();
        const double observed = static_cast<double>(enumerate_primes(c.conds, bound).size()) / pi;
        CHECK(observed >= density / 2);
        CHECK(observed <= density * 2);
    }
}

TEST_CASE("theorem4_obstruction") {
    CHECK(theorem4_obstruction(17) == LocalStatus::Obstructed);
    CHECK(theorem4_obstruction(19) == LocalStatus::LocalPoints);
    try {
        theorem4_obstruction(2);
        FAIL("2 is even");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotOddPrime);
    }
    CHECK_THROWS_AS(theorem4_obstruction(21), Error);
}

TEST_CASE("shih_classify") {
    for (i64 p : nt::primes_in_range(3, 200)) {
        if (p == 17) continue;
        const auto r = shih_classify(17, p);
        CHECK(r.genus_class == 1);
        CHECK(r.local_obstruction == LocalStatus::Obstructed);
        CHECK(r.obstruction_place == 17);
        CHECK(r.shih_applicable == (oracle::legendre(17, p) == -1));
    }
    CHECK(shih_classify(2, 3).genus_class == 0);
    CHECK(shih_classify(6, 5).genus_class == 0);
    CHECK(shih_classify(2, 3).local_obstruction == LocalStatus::Undetermined);
    REQUIRE(nt::kronecker(5, 11) == 1);
    const auto r10 = shih_classify(10, 11);
    CHECK(r10.local_obstruction == LocalStatus::LocalPoints);
    CHECK(r10.obstruction_place == 5);
    REQUIRE(nt::kronecker(5, 7) == -1);
    CHECK(shih_classify(10, 7).local_obstruction == LocalStatus::Obstructed);
    const auto big = shih_classify(167, 3);
    CHECK(big.genus_class == 2);
    CHECK(big.genus == 14);
    CHECK(big.local_obstruction == LocalStatus::LocalPoints);
    CHECK_THROWS_AS(shih_classify(10, 5), Error);
    CHECK_THROWS_AS(shih_classify(12, 5), Error);
    CHECK_THROWS_AS(shih_classify(10, 9), Error);
}

TEST_CASE("low-genus tables agree with the genus formula") {
    for (i64 N = 2; N <= 21; ++N) {
        if (!nt::is_squarefree(N)) continue;
        const i64 p = N % 3 == 0 ? 5 : 3;
        if (N % p == 0) continue;
        const auto r = shih_classify(N, p);
        CHECK(r.genus_class == std::min<i64>(r.genus, 2));
    }
}

TEST_CASE("certify") {
    CHECK(failure_item([] { certify(make_x0(163), Variant::Split, 1000); }) == "h1");
    CHECK(failure_item([] { certify(make_xd_plus(6, 3), Variant::Split, 1000); }) == "h1");

    const auto cert = certify(make_x0(137), Variant::Split, 100'000);
    CHECK(cert.hypotheses.all_hold());
    CHECK(cert.density_lower_bound > 0);
    CHECK(cert.caveats.size() == 2);
    CHECK(verify_certificate(cert));
    // 90 independent quadratic-residue conditions leave nothing below 10^5
    CHECK(independent_qr_count(cert.conditions) == 90);
    CHECK(cert.primes_found.empty());
}

TEST_CASE("certify on an admissible Shimura quotient") {
    const auto cert = certify(make_xd_plus(167 * 5 * 13 * 17, 167), Variant::Split, 10'000);
    CHECK(cert.hypotheses.all_hold());
    CHECK(cert.hypotheses.h3_local_points == LocalPoints::CitedFact);
    CHECK(cert.caveats.size() == 3);
    CHECK(std::get<PrincipalSplitting>(cert.conditions.splitting).disc.value() == -167);
    CHECK(cert.conditions.bad_primes == std::vector<i64>{5, 13, 17, 167});
    CHECK_THROWS_AS(certify(make_xd_plus(167 * 5 * 13 * 17, 167), Variant::InertAppendix, 100), Error);
}

TEST_CASE("verify_certificate rejects a tampered prime list") {
    auto cert = certify(make_x0(137), Variant::Split, 1000);
    cert.conditions = synthetic_split({3}, -548, 3);
    cert.primes_found = enumerate_primes(cert.conditions, 200'000);
    REQUIRE(!cert.primes_found.empty());
    CHECK(verify_certificate(cert));
    cert.primes_found.push_back({17, trace_conditions(cert.conditions, 17)});
    CHECK_FALSE(verify_certificate(cert));
}
