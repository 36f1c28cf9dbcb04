#include <doctest.h>

#include "hasse/certificate_json.hpp"
#include "hasse/errors.hpp"

using namespace hasse;

namespace {

std::vector<std::string> keys(const io::Json& j) {
    std::vector<std::string> out;
    for (const auto& [k, v] : j.items()) out.push_back(k);
    return out;
}

// A certificate whose prime list is nonempty: 137 hypotheses, synthetic conditions.
twist::TwistCertificate small_certificate(unsigned workers) {
    auto cert = twist::certify(twist::make_x0(137), twist::Variant::Split, 1000, workers);
    cert.conditions = twist::PrimeConditionSet{.residue_mod_8 = 1,
                                               .qr_primes = {3},
                                               .splitting = twist::PrincipalSplitting{nt::Discriminant(-548)},
                                               .bad_primes = {137},
                                               .weil_threshold_M = 3,
                                               .variant = twist::Variant::Split};
    cert.primes_found = twist::enumerate_primes(cert.conditions, 100'000, workers);
    return cert;
}

}  // namespace

TEST_CASE("json_integer switches to strings above 2^53") {
    CHECK(io::json_integer(BigInt(12)).is_number_integer());
    CHECK(io::json_integer(BigInt(-12)).get<std::int64_t>() == -12);
    const BigInt limit = BigInt(1) << 53;
    CHECK(io::json_integer(limit).is_number_integer());
    CHECK(io::json_integer(limit + 1).is_string());
    CHECK(io::json_integer(-(limit + 1)).get<std::string>() == "-9007199254740993");
    CHECK(io::json_integer(BigInt(1) << 138).get<std::string>() ==
          "348449143727040986586495598010130648530944");
}

TEST_CASE("rational_json") {
    const auto j = io::rational_json(Rational(6) / Rational(-4));
    CHECK(keys(j) == std::vector<std::string>{"num", "den"});
    CHECK(j["num"].get<std::int64_t>() == -3);
    CHECK(j["den"].get<std::int64_t>() == 2);
}

TEST_CASE("certificate layout") {
    const auto cert = twist::certify(twist::make_x0(167), twist::Variant::InertAppendix, 1000);
    const auto j = io::to_json(cert);
    CHECK(keys(j) == std::vector<std::string>{"descriptor", "hypotheses", "conditions", "density",
                                              "primes", "caveats", "version"});
    CHECK(j["version"] == "1");
    CHECK(j["density"]["num"] == 1);
    CHECK(j["density"]["den"].is_string());
    CHECK(j["conditions"]["weil_threshold_M"] == 781);
    CHECK(j["conditions"]["splitting"]["kind"] == "inert");
    CHECK(j["conditions"]["variant"] == "inert");
    CHECK(j["conditions"]["independent_qr_count"] == 135);
    CHECK(j["primes"].is_array());
    CHECK(j["caveats"].size() == cert.caveats.size());
}

TEST_CASE("prime entries carry their traces") {
    const auto cert = small_certificate(1);
    REQUIRE(!cert.primes_found.empty());
    const auto j = io::to_json(cert);
    REQUIRE(j["primes"].size() == cert.primes_found.size());
    for (std::size_t i = 0; i < cert.primes_found.size(); ++i) {
        const auto& entry = j["primes"][i];
        CHECK(entry["p"] == cert.primes_found[i].p);
        CHECK(entry["trace"]["residue_mod_8"] == true);
        CHECK(entry["trace"]["splitting"] == true);
        CHECK(entry["trace"].contains("witness"));
    }
}

TEST_CASE("canonical output is byte-identical across runs and worker counts") {
    const auto reference = io::canonical(io::to_json(small_certificate(1)));
    CHECK(reference.back() == '\n');
    CHECK(reference.find("\n  \"descriptor\"") != std::string::npos);
    for (unsigned w : {1u, 2u, 5u, 8u}) CHECK(io::canonical(io::to_json(small_certificate(w))) == reference);
    const auto parsed = io::Json::parse(reference);
    CHECK(io::canonical(parsed) == reference);
}

TEST_CASE("invariant documents") {
    const auto x = io::to_json(x0::x0_invariants(167));
    CHECK(x["genus"] == 14);
    CHECK(x["N"] == 167);
    const auto s = io::to_json(shimura::shimura_invariants(shimura::ShimuraDescriptor(26, std::nullopt)));
    CHECK(s["genus_xd_plus"] == 0);
    CHECK(s.contains("al_fixed"));
    const auto shih = io::to_json(twist::shih_classify(17, 3));
    CHECK(keys(shih) == std::vector<std::string>{"N", "p", "shih_applicable", "genus_class", "genus",
                                                 "local_obstruction", "place"});
}
