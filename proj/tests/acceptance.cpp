// Acceptance runner: one PASS/FAIL line per criterion, with wall time
// against its budget. Failing checks are listed underneath (first 10).

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "spectral_forge/suites.hpp"

using namespace spectral_forge;
using namespace spectral_forge::suites;

namespace {

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<std::vector<SuiteReport>()> run;
};

SuiteReport merge(std::string name, std::vector<SuiteReport> parts) {
    SuiteReport out{std::move(name), {}, {}, 0.0};
    for (auto& p : parts) {
        for (auto& c : p.checks) c.name = p.suite + ": " + c.name;
        out.checks.insert(out.checks.end(), p.checks.begin(), p.checks.end());
        out.wall_seconds += p.wall_seconds;
    }
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Rankin-Selberg factorization, 100 systems, s = 3.5", 60.0, [] { return std::vector{rankin_suite({})}; }},
        {2, "local factor identity, p <= 100", 5.0, [] { return std::vector{local_factor_suite({})}; }},
        {3, "Phillips-Sarnak three-mode agreement, 100 odd systems", 120.0,
         [] { return std::vector{ps_batch_suite({})}; }},
        {4, "Bessel moment closed form vs quadrature", 60.0, [] { return std::vector{bessel_suite({})}; }},
        {5, "Gauss sums, conductor <= 100", 5.0, [] { return std::vector{gauss_suite({})}; }},
        {6, "Hecke relation, 1000 systems, m, n <= 200", 30.0, [] { return std::vector{hecke_suite({})}; }},
        {7, "Eisenstein structure and quasi-modularity", 10.0, [] { return std::vector{eisenstein_suite({})}; }},
        {8, "Kato sandbox, 50 families", 30.0, [] { return std::vector{kato_suite({})}; }},
        {9, "Laplace machinery: Bromwich inversion and sandwich", 20.0, [] { return std::vector{laplace_suite({})}; }},
        {10, "trace-formula terms: two schemes, linearity, assembly", 20.0,
         [] { return std::vector{trace_suite({})}; }},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        SuiteReport rep;
        std::string error;
        try {
            rep = merge(c.title, c.run());
        } catch (const std::exception& e) {
            error = e.what();
        }
        const bool in_time = rep.wall_seconds <= c.budget_seconds;
        const bool pass = error.empty() && rep.all_pass() && in_time;
        failed += pass ? 0 : 1;
        std::printf("criterion %2d: %s  %s  [%zu checks, %zu failed, worst error/tolerance %.3g, %.2f s of %.0f s]\n",
                    c.id, pass ? "PASS" : "FAIL", c.title.c_str(), rep.checks.size(), rep.failures(),
                    rep.worst_ratio(), rep.wall_seconds, c.budget_seconds);
        if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
        if (!in_time) std::printf("    over the time budget\n");
        int shown = 0;
        for (const auto& k : rep.checks) {
            if (k.pass) continue;
            if (++shown > 10) {
                std::printf("    ...\n");
                break;
            }
            std::printf("    failed: %s  error %.3g  tolerance %.3g\n", k.name.c_str(), k.error, k.tolerance);
        }
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
