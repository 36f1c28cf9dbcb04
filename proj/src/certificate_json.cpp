#include "hasse/certificate_json.hpp"

namespace hasse::io {

namespace {

const BigInt kSafeIntegerLimit = BigInt(1) << 53;

Json bools(const std::vector<std::pair<std::int64_t, bool>>& entries) {
    Json out = Json::object();
    for (const auto& [l, ok] : entries) out[std::to_string(l)] = ok;
    return out;
}

}  // namespace

Json json_integer(const BigInt& value) {
    if (abs(value) > kSafeIntegerLimit) return value.str();
    return static_cast<std::int64_t>(value);
}

Json rational_json(const Rational& value) {
    return Json{{"num", json_integer(numerator(value))}, {"den", json_integer(denominator(value))}};
}

Json to_json(const twist::CurveDescriptor& desc) {
    if (const auto* c = std::get_if<twist::X0Curve>(&desc)) {
        return Json{{"curve", "X0"}, {"N", json_integer(c->N)}, {"involution", "w_N"}};
    }
    const auto& s = std::get<twist::ShimuraPlusCurve>(desc).shimura;
    return Json{{"curve", "XD+"},
                {"D", json_integer(s.D())},
                {"q", json_integer(s.q().value_or(0))},
                {"involution", "w_q"}};
}

Json to_json(const twist::HypothesisReport& r) {
    Json failure = nullptr;
    if (auto f = r.first_failure()) failure = *f;
    return Json{{"h1_no_rational_fixed", r.h1_no_rational_fixed},
                {"h1_justification", r.h1_justification},
                {"class_number", json_integer(r.class_number_used)},
                {"h2_geometric_fixed", r.h2_geometric_fixed},
                {"fixed_points", json_integer(r.fixed_point_count)},
                {"h3_local_points", twist::to_string(r.h3_local_points)},
                {"h4_quotient_finite", r.h4_quotient_finite},
                {"genus", json_integer(r.genus)},
                {"quotient_genus", json_integer(r.quotient_genus)},
                {"all_hold", r.all_hold()},
                {"first_failure", failure}};
}

Json to_json(const twist::PrimeConditionSet& c) {
    Json splitting;
    if (const auto* ps = std::get_if<twist::PrincipalSplitting>(&c.splitting)) {
        splitting = Json{{"kind", "principal_form"}, {"disc", json_integer(ps->disc.value())}};
    } else {
        splitting = Json{{"kind", "inert"},
                         {"N", json_integer(std::get<twist::InertSplitting>(c.splitting).N)}};
    }
    Json qr = Json::array();
    for (auto l : c.qr_primes) qr.push_back(json_integer(l));
    Json bad = Json::array();
    for (auto l : c.bad_primes) bad.push_back(json_integer(l));
    return Json{{"variant", twist::to_string(c.variant)},
                {"residue_mod_8", c.residue_mod_8},
                {"weil_threshold_M", json_integer(c.weil_threshold_M)},
                {"bad_primes", bad},
                {"qr_primes", qr},
                {"independent_qr_count", twist::independent_qr_count(c)},
                {"splitting", splitting}};
}

Json to_json(const twist::ConditionTrace& t) {
    Json out{{"residue_mod_8", t.residue_mod_8},
             {"above_threshold", t.above_threshold},
             {"not_excluded", t.not_excluded},
             {"quadratic_residue", bools(t.quadratic_residue)},
             {"splitting", t.splitting}};
    if (t.witness) out["witness"] = Json{json_integer(t.witness->x), json_integer(t.witness->y)};
    return out;
}

Json to_json(const twist::TwistCertificate& cert) {
    Json primes = Json::array();
    for (const auto& q : cert.primes_found) {
        primes.push_back(Json{{"p", json_integer(q.p)}, {"trace", to_json(q.trace)}});
    }
    return Json{{"descriptor", to_json(cert.descriptor)},
                {"hypotheses", to_json(cert.hypotheses)},
                {"conditions", to_json(cert.conditions)},
                {"density", rational_json(cert.density_lower_bound)},
                {"primes", primes},
                {"caveats", cert.caveats},
                {"version", kCertificateVersion}};
}

Json to_json(const twist::ShihReport& r) {
    return Json{{"N", json_integer(r.N)},
                {"p", json_integer(r.p)},
                {"shih_applicable", r.shih_applicable},
                {"genus_class", r.genus_class},
                {"genus", json_integer(r.genus)},
                {"local_obstruction", twist::to_string(r.local_obstruction)},
                {"place", json_integer(r.obstruction_place)}};
}

Json to_json(const x0::X0Invariants& inv) {
    return Json{{"N", json_integer(inv.N)},
                {"genus", json_integer(inv.genus)},
                {"nu2", json_integer(inv.nu2)},
                {"nu3", json_integer(inv.nu3)},
                {"nu_inf", json_integer(inv.nu_inf)},
                {"wn_fixed", json_integer(inv.wn_fixed)},
                {"genus_plus", json_integer(inv.genus_plus)},
                {"min_fixed_degree", json_integer(inv.min_fixed_degree)}};
}

Json to_json(const shimura::ShimuraInvariants& inv) {
    Json fixed = Json::object();
    for (const auto& [m, nu] : inv.al_fixed) fixed[std::to_string(m)] = json_integer(nu);
    Json out{{"D", json_integer(inv.D)},
             {"genus_xd", json_integer(inv.genus_xd)},
             {"e2", json_integer(inv.e2)},
             {"e3", json_integer(inv.e3)},
             {"al_fixed", fixed},
             {"genus_xd_plus", json_integer(inv.genus_xd_plus)},
             {"genus_klein", nullptr},
             {"genus_full_quotient", json_integer(inv.genus_full_quotient)}};
    if (inv.genus_klein) out["genus_klein"] = json_integer(*inv.genus_klein);
    return out;
}

Json to_json(const shimura::AdmissibilityReport& r) {
    Json rest = Json::array();
    for (auto p : r.rest) rest.push_back(json_integer(p));
    return Json{{"q", json_integer(r.q)},
                {"rest", rest},
                {"D", json_integer(r.D)},
                {"q_large", r.q_large},
                {"legendre_ok", r.legendre_ok},
                {"minus_legendre_ok", r.minus_legendre_ok},
                {"fixed_points_exist", r.fixed_points_exist},
                {"fixed_point_count", json_integer(r.fixed_point_count)},
                {"no_rational_fixed", r.no_rational_fixed},
                {"class_number", json_integer(r.class_number)},
                {"quotient_finite", r.quotient_finite},
                {"klein_genus", json_integer(r.klein_genus)},
                {"admissible", r.admissible},
                {"literal_disagrees", r.literal_disagrees}};
}

std::string canonical(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace hasse::io
