// Command-line front end: basis, cohomology, verify, presets.

#include "unorm/unorm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace unorm;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;

struct Options {
    std::string system;
    std::string z;
    std::string modulus;
    int q_max = 4;
    std::vector<std::string> checks;
    std::string out;
    std::string format = "text";
};

std::optional<Int> parse_modulus(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (!detail::is_integer_token(s)) throw ConfigError("--modulus: expected a positive integer");
    Int m(s);
    if (m < 1) throw ConfigError("--modulus: expected a positive integer");
    return m;
}

std::string format_symbol(const NormSystem& sys, const ASymbol& a) {
    std::ostringstream os;
    os << '[';
    const auto& fs = a.stalk().factors();
    for (std::size_t i = 0; i < fs.size(); ++i) os << (i ? "," : "") << a.g.residues[i];
    os << (fs.empty() ? "" : " ") << format_z(sys, a.stalk()) << ']';
    return os.str();
}

json number(const Int& v) {
    if (abs_int(v) <= Int(std::numeric_limits<std::int64_t>::max())) return static_cast<std::int64_t>(v);
    return to_string(v);
}

json group_json(const HomologyGroup& h, const Int& modulus) {
    json t = json::array();
    for (const auto& d : h.torsion) t.push_back(number(d));
    return json{{"free_rank", h.free_rank}, {"torsion", t}, {"text", describe(h, modulus)}};
}

json report_json(const NormSystem& sys, const CohomologyReport& r) {
    json degrees = json::array();
    for (int n = r.band_low; n <= r.band_high; ++n) {
        json d{{"degree", n}, {"group", group_json(r.at(n), r.modulus)}};
        if (r.lineage.count(n)) {
            json pairs = json::array();
            for (const auto& [y, w] : r.lineage.at(n))
                pairs.push_back(json{{"y", format_z(sys, y)}, {"w", format_z(sys, w)}});
            d["classes"] = pairs;
        }
        degrees.push_back(d);
    }
    return json{{"band", {r.band_low, r.band_high}}, {"degrees", degrees}};
}

void emit(const Options& o, const json& doc, const std::string& text) {
    const std::string body = o.format == "json" ? doc.dump(2) + "\n" : text;
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw ConfigError("cannot write '" + o.out + "'");
        f << body;
        if (o.format == "json") std::cout << text;
    } else {
        std::cout << body;
    }
}

int cmd_presets(const Options& o) {
    json doc = json::array();
    std::ostringstream text;
    for (const auto& p : preset_catalog()) {
        doc.push_back(json{{"pattern", p.pattern}, {"description", p.description}});
        text << std::left << std::setw(22) << p.pattern << p.description << '\n';
    }
    emit(o, doc, text.str());
    return exit_ok;
}

int cmd_basis(const Options& o) {
    const NormSystem sys = load_system(o.system);
    const FormalProduct z = parse_z(sys, o.z);
    const auto syms = enumerate_A(sys, z);
    const auto b0 = basis_U(sys, z);
    const auto sd = smith_diagonal(relation_matrix(sys, z));
    json basis = json::array();
    std::ostringstream text;
    text << "system " << o.system << ", z = " << format_z(sys, z) << '\n'
         << "|A_z| = " << syms.size() << ", |G_z| = " << group_order(sys, z) << ", relation rank = " << sd.rank
         << ", torsion-free quotient: " << (sd.torsion.empty() ? "yes" : "no") << '\n'
         << "basis of U_z (" << b0.size() << "):";
    for (const auto& a : b0) {
        basis.push_back(format_symbol(sys, a));
        text << ' ' << format_symbol(sys, a);
    }
    text << '\n';
    json doc{{"system", o.system},
             {"z", format_z(sys, z)},
             {"symbols", syms.size()},
             {"group_order", group_order(sys, z)},
             {"relation_rank", sd.rank},
             {"free", sd.torsion.empty()},
             {"basis", basis}};
    emit(o, doc, text.str());
    return exit_ok;
}

int cmd_cohomology(const Options& o) {
    const NormSystem sys = load_system(o.system);
    const FormalProduct z = parse_z(sys, o.z);
    if (o.q_max < 1) throw ConfigError("--qmax must be at least 1");
    std::optional<Int> m = parse_modulus(o.modulus);
    if (!m) m = sys.modulus();
    const CohomologyReport r = m ? cohomology_U_mod(sys, z, *m, o.q_max) : cohomology_U(sys, z, o.q_max);
    std::optional<CohomologyReport> predicted;
    if (m && theorem_a_applies(sys, z, *m)) predicted = predicted_theorem_a(sys, z, *m, o.q_max);
    if (!m && theorem_b_applies(sys, z)) predicted = predicted_theorem_b(sys, z, o.q_max);

    json doc{{"system", o.system}, {"z", format_z(sys, z)}, {"modulus", m ? number(*m) : json(nullptr)},
             {"q_max", o.q_max},   {"cohomology", report_json(sys, r)}};
    if (predicted) doc["predicted"] = report_json(sys, *predicted);
    std::ostringstream text;
    text << "H^n(G_z, U_z" << (m ? "/" + to_string(*m) + "U_z" : std::string()) << ") for z = " << format_z(sys, z)
         << ", degrees " << r.band_low << ".." << r.band_high << '\n';
    for (int n = r.band_low; n <= r.band_high; ++n) {
        text << "  H^" << n << " = " << describe(r.at(n), r.modulus);
        if (predicted) text << (predicted->at(n) == r.at(n) ? "   (matches closed form)" : "   (closed form differs!)");
        text << '\n';
    }
    emit(o, doc, text.str());
    return predicted && !r.disagreements(*predicted).empty() ? exit_failed : exit_ok;
}

int cmd_verify(const Options& o) {
    const NormSystem sys = load_system(o.system);
    RunSpec spec;
    spec.z = parse_z(sys, o.z);
    spec.modulus = parse_modulus(o.modulus);
    spec.q_max = o.q_max;
    spec.checks = o.checks;
    const auto results = run_checks(sys, spec);
    const auto m = spec.modulus ? spec.modulus : sys.modulus();

    json checks = json::array();
    std::size_t counts[3] = {0, 0, 0};
    std::ostringstream text;
    text << "verify " << o.system << " at z = " << format_z(sys, spec.z) << ", q_max = " << o.q_max;
    if (m) text << ", M = " << *m;
    text << '\n';
    for (const auto& r : results) {
        ++counts[static_cast<int>(r.status)];
        json c{{"name", r.name}, {"status", to_string(r.status)}};
        if (r.band) c["band"] = {r.band->first, r.band->second};
        if (!r.rows.empty()) {
            json rows = json::array();
            for (const auto& row : r.rows)
                rows.push_back(json{{"degree", row.degree},
                                    {"computed", row.computed},
                                    {"predicted", row.predicted},
                                    {"match", row.match}});
            c["degrees"] = rows;
        }
        c["notes"] = r.notes;
        checks.push_back(c);
        text << "  " << std::left << std::setw(14) << r.name << std::setw(8) << to_string(r.status) << std::fixed
             << std::setprecision(3) << r.seconds << " s\n";
        for (const auto& n : r.notes) text << "      " << n << '\n';
    }
    text << counts[0] << " passed, " << counts[1] << " failed, " << counts[2] << " skipped\n";
    json doc{{"system", o.system},
             {"z", format_z(sys, spec.z)},
             {"modulus", m ? number(*m) : json(nullptr)},
             {"q_max", o.q_max},
             {"checks", checks},
             {"summary", {{"passed", counts[0]}, {"failed", counts[1]}, {"skipped", counts[2]}}}};
    emit(o, doc, text.str());
    return counts[1] ? exit_failed : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Universal norm distributions and their group cohomology"};
    app.require_subcommand(1);
    Options o;
    auto add_target = [&](CLI::App* c) {
        c->add_option("--system", o.system, "preset name (see `presets`) or configuration file")->required();
        c->add_option("--z", o.z, "target formal product, e.g. \"x1^2*x2\"")->required();
    };
    auto add_output = [&](CLI::App* c) {
        c->add_option("--out", o.out, "write the report to this file");
        c->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "text"}));
    };

    auto* presets = app.add_subcommand("presets", "list preset systems");
    add_output(presets);
    auto* basis = app.add_subcommand("basis", "canonical basis of U_z");
    add_target(basis);
    add_output(basis);
    auto* coh = app.add_subcommand("cohomology", "H^n(G_z, U_z) or H^n(G_z, U_z/M U_z)");
    add_target(coh);
    coh->add_option("--modulus", o.modulus, "coefficients modulo M");
    coh->add_option("--qmax", o.q_max, "truncation; groups are exact in degrees 0 .. qmax-1");
    add_output(coh);
    auto* verify = app.add_subcommand("verify", "run verification checks");
    add_target(verify);
    verify->add_option("--modulus", o.modulus, "modulus M for the mod-M checks");
    verify->add_option("--qmax", o.q_max, "truncation; groups are exact in degrees 0 .. qmax-1");
    verify->add_option("--checks", o.checks, "subset of checks (default: all)")
        ->delimiter(',')
        ->check(CLI::IsMember(all_checks()));
    add_output(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    try {
        if (*presets) return cmd_presets(o);
        if (*basis) return cmd_basis(o);
        if (*coh) return cmd_cohomology(o);
        return cmd_verify(o);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    }
}
