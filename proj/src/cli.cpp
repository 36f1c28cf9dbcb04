#include "hasse/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hasse/certificate_json.hpp"
#include "hasse/curves_shimura.hpp"
#include "hasse/curves_x0.hpp"
#include "hasse/errors.hpp"
#include "hasse/ntheory.hpp"
#include "hasse/twistcert.hpp"

namespace hasse::cli {

namespace {

using i64 = std::int64_t;

enum class Format { Table, Json, Csv };

struct CurveFlags {
    std::optional<i64> x0;
    std::optional<i64> xd;
    std::optional<i64> q;
};

struct CliConfig {
    CurveFlags curve;
    std::string variant = "split";
    i64 bound = 100000;
    i64 limit = 1000;
    i64 n = 0;
    i64 pmax = 100;
    bool applicable_only = false;
    i64 admissible_q = 0;
    std::vector<i64> rest;
    unsigned workers = 1;
    Format format = Format::Table;
    std::string out_path;
};

const std::map<std::string, Format> kFormats{
    {"table", Format::Table}, {"json", Format::Json}, {"csv", Format::Csv}};

void add_curve_flags(CLI::App* cmd, CurveFlags& flags) {
    auto* x0 = cmd->add_option("--x0", flags.x0, "level N of X0(N), twisted by w_N");
    auto* xd = cmd->add_option("--xd", flags.xd, "quaternion discriminant D of X^{D+}");
    cmd->add_option("--q", flags.q, "prime q | D whose involution w_q twists X^{D+}")->needs(xd);
    x0->excludes(xd);
}

void add_output_flags(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--format", cfg.format, "table, json or csv")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    cmd->add_option("--out", cfg.out_path, "write output to this file instead of stdout");
}

twist::CurveDescriptor resolve_curve(const CurveFlags& flags) {
    if (flags.x0) return twist::make_x0(*flags.x0);
    if (flags.xd) {
        if (!flags.q) throw Error(ErrorCode::InvalidArgument, "--xd needs --q");
        if (!nt::is_prime(*flags.q)) {
            throw Error(ErrorCode::InvalidArgument, std::to_string(*flags.q) + " is not prime");
        }
        return twist::make_xd_plus(*flags.xd, *flags.q);
    }
    throw Error(ErrorCode::InvalidArgument, "one of --x0 or --xd is required");
}

twist::Variant resolve_variant(const std::string& v) {
    if (v == "split") return twist::Variant::Split;
    if (v == "inert") return twist::Variant::InertAppendix;
    throw Error(ErrorCode::InvalidArgument, "unknown variant '" + v + "'");
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void render_hypotheses(const twist::CurveDescriptor& desc, const twist::HypothesisReport& r,
                       std::ostream& os) {
    os << describe(desc) << "\n"
       << "  h1 no rational fixed points : " << yes_no(r.h1_no_rational_fixed) << "  ("
       << r.h1_justification << ")\n"
       << "  h2 geometric fixed points   : " << yes_no(r.h2_geometric_fixed) << "  ("
       << r.fixed_point_count << " fixed points)\n"
       << "  h3 points everywhere locally: " << twist::to_string(r.h3_local_points) << "\n"
       << "  h4 finite quotient          : " << yes_no(r.h4_quotient_finite)
       << "  (quotient genus " << r.quotient_genus << ")\n"
       << "  genus                       : " << r.genus << "\n";
    if (auto f = r.first_failure()) os << "  FAILED: " << *f << "\n";
}

std::string approx(const Rational& r) {
    std::ostringstream ss;
    ss << std::setprecision(6) << std::scientific
       << r.convert_to<double>();
    return ss.str();
}

int cmd_check_curve(const CliConfig& cfg, std::ostream& os) {
    const auto desc = resolve_curve(cfg.curve);
    const auto report = twist::check_hypotheses(desc);
    if (cfg.format == Format::Json) {
        os << io::canonical(io::Json{{"descriptor", io::to_json(desc)},
                                     {"hypotheses", io::to_json(report)}});
    } else {
        render_hypotheses(desc, report, os);
    }
    return report.all_hold() ? kSuccess : kHypothesisFailure;
}

int cmd_find_twists(const CliConfig& cfg, std::ostream& os) {
    const auto desc = resolve_curve(cfg.curve);
    const auto cert = twist::certify(desc, resolve_variant(cfg.variant), cfg.bound, cfg.workers);
    switch (cfg.format) {
        case Format::Json: os << io::canonical(io::to_json(cert)); break;
        case Format::Csv:
            os << "p,residue_mod_8,above_threshold,not_excluded,quadratic_residue,splitting\n";
            for (const auto& q : cert.primes_found) {
                const bool qr = std::all_of(q.trace.quadratic_residue.begin(),
                                            q.trace.quadratic_residue.end(),
                                            [](const auto& e) { return e.second; });
                os << q.p << ',' << q.trace.residue_mod_8 << ',' << q.trace.above_threshold << ','
                   << q.trace.not_excluded << ',' << qr << ',' << q.trace.splitting << '\n';
            }
            break;
        case Format::Table:
            render_hypotheses(desc, cert.hypotheses, os);
            os << "variant " << twist::to_string(cert.conditions.variant) << ", M = "
               << cert.conditions.weil_threshold_M << ", " << cert.conditions.qr_primes.size()
               << " quadratic-residue conditions\n"
               << "density lower bound " << cert.density_lower_bound << " ~ "
               << approx(cert.density_lower_bound) << "\n"
               << cert.primes_found.size() << " primes <= " << cfg.bound << "\n";
            for (const auto& q : cert.primes_found) {
                os << "  " << q.p;
                if (q.trace.witness) os << "  = f(" << q.trace.witness->x << ", " << q.trace.witness->y << ")";
                os << "\n";
            }
            for (const auto& c : cert.caveats) os << "caveat: " << c << "\n";
            break;
    }
    return kSuccess;
}

int cmd_density(const CliConfig& cfg, std::ostream& os) {
    const auto desc = resolve_curve(cfg.curve);
    const auto report = twist::check_hypotheses(desc);
    const auto conds = twist::build_conditions(desc, resolve_variant(cfg.variant));
    const auto density = twist::density_lower_bound(conds, report.class_number_used);
    if (cfg.format == Format::Json) {
        os << io::canonical(io::Json{{"descriptor", io::to_json(desc)},
                                     {"variant", twist::to_string(conds.variant)},
                                     {"weil_threshold_M", conds.weil_threshold_M},
                                     {"independent_qr_count", twist::independent_qr_count(conds)},
                                     {"class_number", report.class_number_used},
                                     {"density", io::rational_json(density)}});
    } else {
        os << describe(desc) << ", variant " << twist::to_string(conds.variant) << "\n"
           << "M = " << conds.weil_threshold_M << ", k' = " << twist::independent_qr_count(conds)
           << ", h = " << report.class_number_used << "\n"
           << "density >= " << density << " ~ " << approx(density) << "\n";
    }
    return kSuccess;
}

int cmd_invariants(const CliConfig& cfg, std::ostream& os) {
    io::Json doc;
    if (cfg.curve.x0) {
        doc = io::to_json(x0::x0_invariants(*cfg.curve.x0));
    } else if (cfg.curve.xd) {
        doc = io::to_json(shimura::shimura_invariants(shimura::ShimuraDescriptor(*cfg.curve.xd, cfg.curve.q)));
    } else {
        throw Error(ErrorCode::InvalidArgument, "one of --x0 or --xd is required");
    }
    if (cfg.format == Format::Json) {
        os << io::canonical(doc);
        return kSuccess;
    }
    for (const auto& [key, value] : doc.items()) os << std::left << std::setw(20) << key << value.dump() << "\n";
    return kSuccess;
}

int cmd_admissible(const CliConfig& cfg, std::ostream& os) {
    const auto report = shimura::theorem3_admissible(cfg.admissible_q, cfg.rest);
    const auto doc = io::to_json(report);
    if (cfg.format == Format::Json) {
        os << io::canonical(doc);
    } else {
        for (const auto& [key, value] : doc.items()) os << std::left << std::setw(20) << key << value.dump() << "\n";
    }
    return report.admissible ? kSuccess : kHypothesisFailure;
}

int scan_plus_genus(const CliConfig& cfg, std::ostream& os) {
    const auto levels = x0::low_genus_plus_levels(cfg.limit);
    io::Json rows = io::Json::array();
    if (cfg.format == Format::Csv) os << "N,genus,wn_fixed,genus_plus\n";
    if (cfg.format == Format::Table) os << std::setw(6) << "N" << std::setw(8) << "g" << std::setw(8) << "nu" << std::setw(8) << "g+" << "\n";
    for (i64 N : levels) {
        const i64 g = x0::x0_genus(N), nu = x0::wn_fixed_count(N), gp = x0::x0_plus_genus(N);
        switch (cfg.format) {
            case Format::Json: rows.push_back(io::Json{{"N", N}, {"genus", g}, {"wn_fixed", nu}, {"genus_plus", gp}}); break;
            case Format::Csv: os << N << ',' << g << ',' << nu << ',' << gp << '\n'; break;
            case Format::Table: os << std::setw(6) << N << std::setw(8) << g << std::setw(8) << nu << std::setw(8) << gp << "\n"; break;
        }
    }
    if (cfg.format == Format::Json) os << io::canonical(io::Json{{"limit", cfg.limit}, {"levels", rows}});
    if (cfg.limit >= 131 && levels.back() != 131) {
        throw Error(ErrorCode::IntegralityViolation,
                    "largest level with genus(X0+) <= 1 is " + std::to_string(levels.back()) + ", expected 131");
    }
    return kSuccess;
}

int scan_d0(const CliConfig& cfg, std::ostream& os) {
    const i64 d0 = shimura::scan_d0(cfg.limit);
    switch (cfg.format) {
        case Format::Json: os << io::canonical(io::Json{{"limit", cfg.limit}, {"d0_lower_bound", d0}}); break;
        case Format::Csv: os << "limit,d0_lower_bound\n" << cfg.limit << ',' << d0 << '\n'; break;
        case Format::Table: os << d0 << "\n"; break;
    }
    return kSuccess;
}

int scan_shih(const CliConfig& cfg, std::ostream& os) {
    if (cfg.n < 2) throw Error(ErrorCode::InvalidArgument, "scan shih needs --n >= 2");
    if (cfg.pmax < 3) throw Error(ErrorCode::InvalidArgument, "scan shih needs --pmax >= 3");
    io::Json rows = io::Json::array();
    if (cfg.format == Format::Csv) os << "N,p,shih_applicable,genus_class,genus,local_obstruction,place\n";
    for (i64 p : nt::primes_in_range(3, cfg.pmax)) {
        if (cfg.n % p == 0) continue;
        const auto r = twist::shih_classify(cfg.n, p);
        if (cfg.applicable_only && !r.shih_applicable) continue;
        switch (cfg.format) {
            case Format::Json: rows.push_back(io::to_json(r)); break;
            case Format::Csv:
                os << r.N << ',' << r.p << ',' << r.shih_applicable << ',' << r.genus_class << ','
                   << r.genus << ',' << twist::to_string(r.local_obstruction) << ',' << r.obstruction_place << '\n';
                break;
            case Format::Table:
                os << "N=" << r.N << " p=" << r.p << " shih=" << yes_no(r.shih_applicable)
                   << " genus_class=" << r.genus_class << " local=" << twist::to_string(r.local_obstruction);
                if (r.obstruction_place) os << "@" << r.obstruction_place;
                os << "\n";
                break;
        }
    }
    if (cfg.format == Format::Json) os << io::canonical(rows);
    return kSuccess;
}

int dispatch(CLI::App& app, const CliConfig& cfg, std::ostream& os) {
    if (app.got_subcommand("check-curve")) return cmd_check_curve(cfg, os);
    if (app.got_subcommand("find-twists")) return cmd_find_twists(cfg, os);
    if (app.got_subcommand("density")) return cmd_density(cfg, os);
    if (app.got_subcommand("invariants")) return cmd_invariants(cfg, os);
    if (app.got_subcommand("admissible")) return cmd_admissible(cfg, os);
    auto* scan = app.get_subcommand("scan");
    if (scan->got_subcommand("plus-genus")) return scan_plus_genus(cfg, os);
    if (scan->got_subcommand("d0")) return scan_d0(cfg, os);
    return scan_shih(cfg, os);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hasse-principle-violating Atkin-Lehner twists of modular and Shimura curves",
                 "hasse-twist"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto* check = app.add_subcommand("check-curve", "check the twist hypotheses for a curve");
    add_curve_flags(check, cfg.curve);
    add_output_flags(check, cfg);

    auto* find = app.add_subcommand("find-twists", "build a certificate and enumerate primes");
    add_curve_flags(find, cfg.curve);
    find->add_option("--variant", cfg.variant, "split or inert")->check(CLI::IsMember({"split", "inert"}));
    find->add_option("--bound", cfg.bound, "enumerate primes up to this bound")->check(CLI::Range(i64{3}, i64{1} << 40));
    find->add_option("--workers", cfg.workers, "worker threads for enumeration")->check(CLI::Range(1u, 256u));
    add_output_flags(find, cfg);

    auto* density = app.add_subcommand("density", "density lower bound of the prime condition set");
    add_curve_flags(density, cfg.curve);
    density->add_option("--variant", cfg.variant, "split or inert")->check(CLI::IsMember({"split", "inert"}));
    add_output_flags(density, cfg);

    auto* invariants = app.add_subcommand("invariants", "dump curve invariants");
    add_curve_flags(invariants, cfg.curve);
    add_output_flags(invariants, cfg);

    auto* admissible = app.add_subcommand("admissible", "check the Shimura-quotient conditions for q and the other primes");
    admissible->add_option("--q", cfg.admissible_q, "the prime q")->required();
    admissible->add_option("--rest", cfg.rest, "the remaining primes of D")->required()->delimiter(',');
    add_output_flags(admissible, cfg);

    auto* scan = app.add_subcommand("scan", "batch scans");
    scan->require_subcommand(1);
    auto* plus = scan->add_subcommand("plus-genus", "squarefree N with genus(X0+(N)) <= 1");
    plus->add_option("--limit", cfg.limit, "largest N")->check(CLI::Range(i64{2}, i64{1} << 40));
    add_output_flags(plus, cfg);
    auto* d0 = scan->add_subcommand("d0", "empirical lower bound for D0");
    d0->add_option("--limit", cfg.limit, "largest D")->check(CLI::Range(i64{6}, i64{1} << 40));
    add_output_flags(d0, cfg);
    auto* shih = scan->add_subcommand("shih", "classify (N, p) pairs");
    shih->add_option("--n", cfg.n, "level N")->required();
    shih->add_option("--pmax", cfg.pmax, "largest p");
    shih->add_flag("--applicable-only", cfg.applicable_only, "keep only (N|p) = -1");
    add_output_flags(shih, cfg);

    std::vector<std::string> argv_storage{"hasse-twist"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        std::ostringstream buffer;
        const int code = dispatch(app, cfg, buffer);
        if (cfg.out_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(cfg.out_path, std::ios::binary);
            if (!file) {
                err << "error: cannot open " << cfg.out_path << "\n";
                return kUsageError;
            }
            file << buffer.str();
        }
        return code;
    } catch (const HypothesisFailure& e) {
        err << "hypothesis failure: " << e.item() << ": " << e.what() << "\n";
        return kHypothesisFailure;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == ErrorCode::IntegralityViolation ? kIntegralityViolation : kUsageError;
    }
}

}  // namespace hasse::cli
