// spectral-forge: runs one verification suite and streams its report.
// Exit status is 0 iff every check passes; 1 on a failed check, 2 on a
// usage error, 3 when the computation itself raises an error.

#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "io.hpp"
#include "report.hpp"
#include "spectral_forge/suites.hpp"

using namespace spectral_forge;
using suites::cplx;
using suites::u64;

namespace {

/// "2.5", "2.5+1i", "2.5-0.5i", "1i" or "2.5,1".
cplx parse_complex(const std::string& text) {
    static const std::regex pair(R"(^\s*([^,]+),([^,]+)\s*$)");
    static const std::regex alg(R"(^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)?(?:([-+][0-9.]*(?:[eE][-+]?[0-9]+)?)i)?\s*$)");
    std::smatch m;
    try {
        if (std::regex_match(text, m, pair)) return {std::stod(m[1]), std::stod(m[2])};
        if (std::regex_match(text, m, alg) && (m[1].matched || m[2].matched)) {
            const double re = m[1].matched ? std::stod(m[1]) : 0.0;
            double im = 0.0;
            if (m[2].matched) {
                const std::string t = m[2];
                im = (t == "+" || t == "-") ? (t == "-" ? -1.0 : 1.0) : std::stod(t);
            }
            return {re, im};
        }
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("complex number", "cannot parse '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(std::stod(t));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-forge: numerical checks for Hecke eigensystems, L-functions, Maass forms, "
                 "Kato perturbation theory and the Selberg trace formula"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags override it");

    report::Format fmt;
    bool no_timestamp = false;
    app.add_flag("--csv", fmt.csv, "Write CSV instead of JSON lines");
    app.add_flag("--no-timestamp", no_timestamp, "Omit timestamps and wall time (byte-identical reruns)");

    std::string s_text;

    // rankin
    auto* rankin = app.add_subcommand("rankin", "Rankin-Selberg factorization suite");
    suites::RankinOptions rankin_opt;
    rankin->add_option("--seed", rankin_opt.seed, "Seed")->capture_default_str();
    rankin->add_option("--s", s_text, "Evaluation point (default 3.5)");
    rankin->add_option("--systems", rankin_opt.systems, "Number of random systems")->capture_default_str()
        ->check(CLI::PositiveNumber);
    rankin->add_option("--N", rankin_opt.N, "Series terms")->capture_default_str();
    rankin->add_option("--P", rankin_opt.P, "Euler-product primes")->capture_default_str();

    // ps
    auto* ps = app.add_subcommand("ps", "Phillips-Sarnak integral: series, quadrature and closed form");
    suites::PSOptions ps_opt;
    u64 ps_N = 0, ps_P = 0;
    ps->add_option("--level", ps_opt.level, "Level q = q1 q2")->capture_default_str();
    ps->add_option("--q1", ps_opt.q1, "First Eisenstein index")->capture_default_str();
    ps->add_option("--q2", ps_opt.q2, "Second Eisenstein index")->capture_default_str();
    ps->add_option("--s", s_text, "Evaluation point, e.g. 2.5 or 2.5+1i (default 2.5)");
    ps->add_option("--seed", ps_opt.seed, "Seed")->capture_default_str();
    ps->add_option("--mode", ps_opt.mode, "all, series, quadrature or closed")
        ->capture_default_str()
        ->check(CLI::IsMember({"all", "series", "quadrature", "closed"}));
    ps->add_option("--N", ps_N, "Series terms (default depends on s)");
    ps->add_option("--P", ps_P, "Euler-product primes (default depends on s)");

    // bessel
    auto* bessel = app.add_subcommand("bessel", "Bessel moment: closed form vs quadrature");
    suites::BesselOptions bessel_opt;
    bessel->add_option("--seed", bessel_opt.seed, "Seed")->capture_default_str();
    bessel->add_option("--samples", bessel_opt.samples, "Random (s, s_phi) samples")->capture_default_str()
        ->check(CLI::PositiveNumber);

    // kato
    auto* kato = app.add_subcommand("kato", "Kato expansion checks on random self-adjoint families");
    suites::KatoOptions kato_opt;
    std::string eps_text;
    kato->add_option("--seed", kato_opt.seed, "Seed")->capture_default_str();
    kato->add_option("--dim", kato_opt.dim, "Matrix dimension (0: random in [3, 12])")->capture_default_str()
        ->check(CLI::Range(0, 64));
    kato->add_option("--eps-grid", eps_text, "Comma-separated epsilon values (default 1e-1..1e-3, 9 points)");
    kato->add_option("--families", kato_opt.families, "Number of families")->capture_default_str()
        ->check(CLI::PositiveNumber);

    // trace
    auto* trace = app.add_subcommand("trace", "Geometric side of the trace formula for given class data");
    std::string classes_file, trace_spectrum_file, z_text;
    suites::TraceOptions trace_opt;
    trace->add_option("--classes", classes_file, "Class-data JSON file (default: built-in demo data)")
        ->check(CLI::ExistingFile);
    trace->add_option("--z", z_text, "Semicolon-separated Gaussian parameters, e.g. '0.5;1+0.5i;2'");
    trace->add_option("--k-max", trace_opt.k_max, "Largest power of each hyperbolic class")->capture_default_str()
        ->check(CLI::PositiveNumber);
    trace->add_option("--spectrum", trace_spectrum_file, "Optional eigenvalue JSON for a reported comparison")
        ->check(CLI::ExistingFile);

    // smooth
    auto* smooth = app.add_subcommand("smooth", "Smoothed eigenvalue counting and the mean-value sandwich");
    std::string spectrum_file;
    suites::SmoothOptions smooth_opt;
    double delta = 0.0;
    smooth->add_option("--spectrum", spectrum_file, "Eigenvalue JSON file")->required()->check(CLI::ExistingFile);
    smooth->add_option("--T", smooth_opt.T, "Cutoff T")->required();
    smooth->add_option("--w", smooth_opt.w, "Exponent w")->capture_default_str()->check(CLI::NonNegativeNumber);
    auto* delta_opt = smooth->add_option("--delta", delta, "Step for the sandwich check")->check(CLI::PositiveNumber);

    // twist-scan
    auto* twist = app.add_subcommand("twist-scan", "Scan even primitive twists for certified non-vanishing");
    suites::TwistScanOptions twist_opt;
    twist->add_option("--seed", twist_opt.seed, "Seed")->capture_default_str();
    twist->add_option("--level", twist_opt.level, "Level of the random system")->capture_default_str();
    twist->add_option("--s", s_text, "Evaluation point (default 2)");
    twist->add_option("--M", twist_opt.M, "Conductors must be coprime to M")->capture_default_str();
    twist->add_option("--rmax", twist_opt.r_max, "Largest conductor")->capture_default_str();
    twist->add_option("--threshold", twist_opt.threshold, "Certified lower bound on |L|")->capture_default_str();
    twist->add_option("--N", twist_opt.N, "Series terms")->capture_default_str();

    // characters
    auto* characters = app.add_subcommand("characters", "Dump the Dirichlet characters modulo q");
    u64 q = 12;
    characters->add_option("--q", q, "Modulus")->required()->check(CLI::Range(1, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    fmt.timestamp = !no_timestamp;

    try {
        suites::SuiteReport rep;
        std::vector<report::ordered_json> records;
        if (*rankin) {
            if (!s_text.empty()) rankin_opt.s = parse_complex(s_text);
            rep = suites::rankin_suite(rankin_opt);
        } else if (*ps) {
            if (!s_text.empty()) ps_opt.s = parse_complex(s_text);
            auto t = suites::default_ps_truncation(ps_opt.s);
            if (ps_N) t.N = ps_N;
            if (ps_P) t.P = ps_P;
            ps_opt.truncation = t;
            rep = suites::ps_suite(ps_opt);
        } else if (*bessel) {
            rep = suites::bessel_suite(bessel_opt);
        } else if (*kato) {
            if (!eps_text.empty()) kato_opt.eps_grid = parse_real_list(eps_text);
            rep = suites::kato_suite(kato_opt);
        } else if (*trace) {
            if (!classes_file.empty()) trace_opt.data = io::class_data_from_json(io::read_json_file(classes_file));
            if (!z_text.empty()) {
                trace_opt.z.clear();
                for (const auto& t : split(z_text, ';')) trace_opt.z.push_back(parse_complex(t));
            }
            if (!trace_spectrum_file.empty())
                trace_opt.spectrum = io::spectrum_from_json(io::read_json_file(trace_spectrum_file));
            rep = suites::trace_suite(trace_opt);
            rep.parameters.emplace_back("classes", classes_file.empty() ? "built-in demo" : classes_file);
        } else if (*smooth) {
            smooth_opt.spectrum = io::spectrum_from_json(io::read_json_file(spectrum_file));
            if (delta_opt->count() > 0) smooth_opt.delta = delta;
            rep = suites::smooth_suite(smooth_opt);
        } else if (*twist) {
            if (!s_text.empty()) twist_opt.s = parse_complex(s_text);
            rep = suites::twist_scan_suite(twist_opt);
        } else if (*characters) {
            std::vector<suites::CharacterDump> dump;
            rep = suites::characters_suite(q, &dump);
            for (const auto& d : dump) {
                report::ordered_json values = report::ordered_json::array();
                for (u64 n = 0; n < q; ++n) {
                    const cplx v = d.chi(static_cast<suites::i64>(n));
                    values.push_back({v.real(), v.imag()});
                }
                records.push_back({{"type", "character"},
                                   {"modulus", d.chi.modulus()},
                                   {"conductor", d.chi.conductor()},
                                   {"parity", d.chi.parity()},
                                   {"primitive", d.chi.is_primitive()},
                                   {"gauss_sum", {d.gauss.real(), d.gauss.imag()}},
                                   {"values", values}});
            }
        }
        report::write(std::cout, rep, fmt, records);
        return rep.all_pass() ? 0 : 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
