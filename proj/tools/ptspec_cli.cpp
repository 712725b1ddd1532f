// Command-line front end: reproduce the two published tables, sweep the
// deformation parameter for plot data, and locate pair-coalescence
// (branch) points. Emits CSV and optionally JSON.
//
// Exit codes: 0 success, 2 root/sign-change not found, 3 partial sweep
// failure (< 95% of grid points succeeded), 4 reference non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptspec/anharm.hpp"
#include "ptspec/melem.hpp"
#include "ptspec/opmethod.hpp"
#include "ptspec/refsolve.hpp"
#include "ptspec/sweep.hpp"
#include "ptspec/wkb.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_no_root = 2;
constexpr int exit_partial = 3;
constexpr int exit_no_convergence = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ptspec::Error("cannot open output file: " + path);
    f << content;
}

std::string json_path_for(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    const std::string stem =
        (dot == std::string::npos) ? csv_path : csv_path.substr(0, dot);
    return stem + ".json";
}

ptspec::opmethod::PairingScheme parse_scheme(const std::string& s,
                                             bool& auto_flag) {
    auto_flag = false;
    if (s == "auto") {
        auto_flag = true;
        return ptspec::opmethod::PairingScheme::Solo;
    }
    if (s == "solo") return ptspec::opmethod::PairingScheme::Solo;
    if (s == "standard") return ptspec::opmethod::PairingScheme::StandardMix;
    if (s == "outlook") return ptspec::opmethod::PairingScheme::OutlookMix;
    throw CLI::ValidationError("--scheme", "unknown scheme: " + s);
}

struct EpsRange {
    double lo, hi, step;
};

EpsRange parse_range(const std::string& s) {
    EpsRange r{};
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("--eps-range", "expected a:b:step");
    try {
        r.lo = std::stod(s.substr(0, c1));
        r.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        r.step = std::stod(s.substr(c2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--eps-range", "bad number in a:b:step");
    }
    if (r.step <= 0.0 || r.hi < r.lo)
        throw CLI::ValidationError("--eps-range", "need a <= b and step > 0");
    return r;
}

int cmd_table1(const std::string& out, bool json) {
    const std::vector<int> ns{0, 10, 40};
    const std::vector<double> lambdas{0.1, 1.0, 10.0, 100.0};
    std::string csv = "n,lambda,analytic,reference\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::printf("%-6s", "n\\l");
    for (double l : lambdas) std::printf("  %18g", l);
    std::printf("\n");
    for (int n : ns) {
        std::printf("n=%-4d", n);
        for (double l : lambdas) {
            double analytic, reference;
            try {
                analytic = ptspec::anharm::aho_energy(n, l);
                reference = ptspec::anharm::aho_reference(n, l);
            } catch (const ptspec::NonConvergenceError& e) {
                std::cerr << "table1: " << e.what() << "\n";
                return exit_no_convergence;
            }
            std::printf("  %9.4f (%7.4f)", analytic, reference);
            csv += ptspec::sweep::format_double(static_cast<double>(n)) + "," +
                   ptspec::sweep::format_double(l) + "," +
                   ptspec::sweep::format_double(analytic) + "," +
                   ptspec::sweep::format_double(reference) + "\n";
            rows.push_back({{"n", n},
                            {"lambda", l},
                            {"analytic", analytic},
                            {"reference", reference}});
        }
        std::printf("\n");
    }
    if (!out.empty()) {
        write_file(out, csv);
        if (json) write_file(json_path_for(out), rows.dump(2) + "\n");
    }
    return exit_ok;
}

int cmd_table2(const std::string& out, bool json, int ref_basis) {
    std::string csv = "eps,n,exact,analytic,wkb\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::printf("%-4s %-2s %10s %10s %10s\n", "eps", "n", "exact", "analytic",
                "wkb");
    for (double eps_v : {1.0, 2.0}) {
        const ptspec::melem::Epsilon eps(eps_v);
        // high levels stop certifying under basis doubling as eps grows
        // (truncation error); keep as many stable levels as possible and
        // leave the rest blank rather than printing uncertified digits
        std::vector<std::complex<double>> exact;
        for (int want = 9; want >= 1 && exact.empty(); --want) {
            try {
                exact = ptspec::refsolve::converged_levels(eps, want, 1e-3,
                                                           ref_basis);
            } catch (const ptspec::NonConvergenceError&) {
            }
        }
        if (exact.empty()) {
            std::cerr << "table2: no levels converged at eps=" << eps_v << "\n";
            return exit_no_convergence;
        }
        for (int n = 0; n < 9; ++n) {
            double analytic;
            try {
                analytic =
                    ptspec::opmethod::zeroth_energy(n, eps).value.real();
            } catch (const ptspec::Error& e) {
                std::cerr << "table2: level " << n << ": " << e.what() << "\n";
                return exit_no_root;
            }
            const double wkb = ptspec::wkb::wkb_energy(n, eps_v);
            const bool have_exact = n < static_cast<int>(exact.size());
            if (have_exact)
                std::printf("%-4g %-2d %10.3f %10.3f %10.3f\n", eps_v, n,
                            exact[n].real(), analytic, wkb);
            else
                std::printf("%-4g %-2d %10s %10.3f %10.3f\n", eps_v, n, "--",
                            analytic, wkb);
            csv += ptspec::sweep::format_double(eps_v) + "," +
                   std::to_string(n) + "," +
                   (have_exact ? ptspec::sweep::format_double(exact[n].real())
                               : std::string()) +
                   "," + ptspec::sweep::format_double(analytic) + "," +
                   ptspec::sweep::format_double(wkb) + "\n";
            nlohmann::ordered_json row = {{"eps", eps_v},
                                          {"n", n},
                                          {"analytic", analytic},
                                          {"wkb", wkb}};
            row["exact"] = have_exact
                               ? nlohmann::ordered_json(exact[n].real())
                               : nlohmann::ordered_json(nullptr);
            rows.push_back(std::move(row));
        }
    }
    if (!out.empty()) {
        write_file(out, csv);
        if (json) write_file(json_path_for(out), rows.dump(2) + "\n");
    }
    return exit_ok;
}

int cmd_sweep(const ptspec::sweep::SweepSpec& spec, const std::string& out,
              bool json) {
    const ptspec::sweep::SweepOutcome res = ptspec::sweep::run_sweep(spec);
    for (const auto& r : res.rows)
        if (!r.error.empty())
            std::cerr << "sweep: eps=" << r.eps << " n=" << r.n << ": "
                      << r.error << "\n";
    const std::string csv = ptspec::sweep::to_csv(res.rows);
    if (out.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        write_file(out, csv);
        if (json) write_file(json_path_for(out), ptspec::sweep::to_json(res.rows));
    }
    std::fprintf(stderr, "sweep: %zu/%zu points ok\n",
                 res.points - res.failed_points, res.points);
    return res.success_fraction() >= 0.95 ? exit_ok : exit_partial;
}

int cmd_branch(int lo, int hi, const std::string& scheme_s, double eps_lo,
               double eps_hi, const std::string& out) {
    bool auto_flag = false;
    const auto scheme = parse_scheme(scheme_s, auto_flag);
    if (auto_flag || scheme == ptspec::opmethod::PairingScheme::Solo)
        throw CLI::ValidationError("--scheme", "branch needs standard or outlook");
    int pair_index;
    if (scheme == ptspec::opmethod::PairingScheme::StandardMix) {
        if (lo % 2 != 1 || hi != lo + 1)
            throw CLI::ValidationError("--pair", "standard pairs are (1,2),(3,4),...");
        pair_index = (lo - 1) / 2;
    } else {
        if (lo % 2 != 0 || hi != lo + 1)
            throw CLI::ValidationError("--pair", "outlook pairs are (0,1),(2,3),...");
        pair_index = lo / 2;
    }
    double eps_star;
    try {
        eps_star = ptspec::opmethod::find_branch_point(pair_index, scheme,
                                                       eps_lo, eps_hi);
    } catch (const ptspec::NoRootError& e) {
        std::cerr << "branch: " << e.what() << "\n";
        return exit_no_root;
    }
    // slope of the discriminant at the crossing, by central difference
    const double h = 1e-4;
    auto disc = [&](double e) {
        return ptspec::opmethod::mixed_pair(pair_index,
                                            ptspec::melem::Epsilon(e, true),
                                            scheme)
            .discriminant.real();
    };
    const double slope = (disc(eps_star + h) - disc(eps_star - h)) / (2.0 * h);
    nlohmann::ordered_json j{{"pair", {lo, hi}},
                             {"scheme", scheme_s},
                             {"eps_star", eps_star},
                             {"discriminant_slope", slope}};
    const std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_file(out, text);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenvalue tables and sweeps for the PT-symmetric family "
                 "H = -d2/dx2 - (ix)^(eps+2)"};
    app.require_subcommand(1);

    std::string out, scheme = "auto", methods = "analytic", range_s, pair_s =
                                                                        "1,2";
    bool json = false;
    double eps_single = 0.0;
    int levels = 5, jobs = 0, ref_basis = 150;
    bool have_eps = false;

    auto* t1 = app.add_subcommand("table1", "anharmonic-oscillator table");
    t1->add_option("--out", out, "CSV output path");
    t1->add_flag("--json", json, "also write JSON next to the CSV");

    auto* t2 = app.add_subcommand("table2", "exact/analytic/WKB comparison");
    t2->add_option("--out", out, "CSV output path");
    t2->add_flag("--json", json, "also write JSON next to the CSV");
    t2->add_option("--ref-basis", ref_basis, "reference basis size N");

    auto* sw = app.add_subcommand("sweep", "scan eps and emit level data");
    sw->add_option("--eps", eps_single, "single eps value")
        ->each([&](const std::string&) { have_eps = true; });
    sw->add_option("--eps-range", range_s, "a:b:step grid");
    sw->add_option("--levels", levels, "number of levels");
    sw->add_option("--scheme", scheme, "solo|standard|outlook|auto");
    sw->add_option("--methods", methods,
                   "comma list of analytic,reference,wkb");
    sw->add_option("--out", out, "CSV output path (stdout if omitted)");
    sw->add_flag("--json", json, "also write JSON next to the CSV");
    sw->add_option("--jobs", jobs, "worker threads (default: all cores)");
    sw->add_option("--ref-basis", ref_basis, "reference basis size N");

    auto* br = app.add_subcommand("branch", "locate a pair-coalescence point");
    br->add_option("--pair", pair_s, "level pair lo,hi (e.g. 1,2)");
    br->add_option("--scheme", scheme, "standard|outlook")->required();
    double b_lo = -0.9, b_hi = -0.3;
    br->add_option("--eps-lo", b_lo, "search interval lower end");
    br->add_option("--eps-hi", b_hi, "search interval upper end");
    br->add_option("--out", out, "JSON output path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (t1->parsed()) return cmd_table1(out, json);
        if (t2->parsed()) return cmd_table2(out, json, ref_basis);
        if (sw->parsed()) {
            ptspec::sweep::SweepSpec spec;
            if (!range_s.empty()) {
                const EpsRange r = parse_range(range_s);
                spec.eps_lo = r.lo;
                spec.eps_hi = r.hi;
                spec.step = r.step;
            } else if (have_eps) {
                spec.eps_lo = spec.eps_hi = eps_single;
                spec.step = 1.0;
            } else {
                std::cerr << "sweep: need --eps or --eps-range\n";
                return exit_no_root;
            }
            spec.n_levels = levels;
            spec.scheme = parse_scheme(scheme, spec.auto_scheme);
            spec.methods = {false, false, false};
            std::istringstream ms(methods);
            std::string tok;
            while (std::getline(ms, tok, ',')) {
                if (tok == "analytic") spec.methods.analytic = true;
                else if (tok == "reference") spec.methods.reference = true;
                else if (tok == "wkb") spec.methods.wkb = true;
                else {
                    std::cerr << "sweep: unknown method: " << tok << "\n";
                    return exit_no_root;
                }
            }
            spec.jobs = jobs;
            spec.ref_basis = ref_basis;
            return cmd_sweep(spec, out, json);
        }
        if (br->parsed()) {
            const auto comma = pair_s.find(',');
            if (comma == std::string::npos) {
                std::cerr << "branch: --pair expects lo,hi\n";
                return exit_no_root;
            }
            const int lo = std::stoi(pair_s.substr(0, comma));
            const int hi = std::stoi(pair_s.substr(comma + 1));
            return cmd_branch(lo, hi, scheme, b_lo, b_hi, out);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const ptspec::NoRootError& e) {
        std::cerr << e.what() << "\n";
        return exit_no_root;
    } catch (const ptspec::NonConvergenceError& e) {
        std::cerr << e.what() << "\n";
        return exit_no_convergence;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return exit_ok;
}
