// Acceptance run: one PASS/FAIL line per criterion, tolerances and time limits pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "lpkit/io.hpp"
#include "lpkit/suites.hpp"
#include "lpkit_app/commands.hpp"
#include "lpkit_app/config.hpp"

using namespace lpkit;
namespace fs = std::filesystem;

namespace {

struct Bound {
    std::string check;
    double tolerance;
};

struct Criterion {
    int id;
    std::string title;
    std::string suite;
    std::vector<Bound> bounds;
    double seconds;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> c{
        {1, "partition of unity", "lp", {{"lp.partition_of_unity_1d", 1e-12}, {"lp.partition_of_unity_2d", 1e-12}}, 1.0},
        {2, "reconstruction", "lp", {{"lp.reconstruction", 1e-10}}, 5.0},
        {3, "g-function Plancherel constants", "square",
         {{"square.g_plancherel_s0", 0.02}, {"square.g_single_mode", 0.01},
          {"square.g_plancherel_s-0.3", 0.02}, {"square.g_plancherel_s0.3", 0.02}}, 30.0},
        {4, "zero-mean kernels", "poisson",
         {{"poisson.zero_mean_kernels_1d", 1e-12}, {"poisson.zero_mean_kernels_2d", 1e-12}}, 5.0},
        {5, "subordination", "poisson",
         {{"poisson.subordination_field", 1e-3}, {"poisson.subordination_scalar", 1e-6}}, 30.0},
        {6, "fractional Laplacian oracle", "fraclap",
         {{"fraclap.singular_vs_spectral_s0.3", 0.05}, {"fraclap.singular_vs_spectral_s0.5", 0.05},
          {"fraclap.singular_vs_spectral_s0.7", 0.05}}, 60.0},
        {7, "Whitney suite", "whitney", {{"whitney.clause_failures", 0.0}, {"whitney.uncovered_fraction", 0.05}}, 60.0},
        {8, "Calderon-Zygmund suite", "cz", {{"cz.clause_failures", 0.0}}, 60.0},
        {9, "maximal function exactness", "maximal", {{"maximal.brute_force_equality", 0.0}}, 30.0},
        {10, "subharmonicity", "poisson",
         {{"poisson.subharmonic_q2", 1e-8}, {"poisson.subharmonic_q1.2_refinement", 0.0}}, 60.0},
        {11, "Hormander integrals", "hormander",
         {{"hormander.finite", 0.0}, {"hormander.variation_across_x", 2.0}, {"hormander.refinement_change", 0.01}}, 60.0},
        {12, "boundedness ratio stability", "ratios",
         {{"ratios.theorem2.refinement_change", 0.10}, {"ratios.theorem3_s0.5.refinement_change", 0.10},
          {"ratios.theorem3_s-0.5.refinement_change", 0.10}, {"ratios.corollary1.refinement_change", 0.10},
          {"ratios.theorem4.refinement_change", 0.10}, {"ratios.theorem5.refinement_change", 0.10},
          {"ratios.hls.refinement_change", 0.10}}, 600.0},
        {13, "weak/strong consistency", "lp", {{"lp.weak_below_strong", 1e-12}}, 5.0},
    };
    return c;
}

bool ratio_tables_equal(const fs::path& a, const fs::path& b, std::size_t& count) {
    count = 0;
    for (const auto& e : fs::directory_iterator(a / "ratios")) {
        const fs::path other = b / "ratios" / e.path().filename();
        if (!fs::exists(other) || read_file(e.path()) != read_file(other)) return false;
        ++count;
    }
    std::size_t count_b = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b / "ratios")) ++count_b;
    return count > 0 && count == count_b;
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    const SuiteConfig cfg;
    std::map<std::string, IdentityCheck> checks;
    std::map<std::string, std::string> errors;
    for (const auto& name : suite_names()) {
        try {
            for (auto& c : run_suite(name, cfg).checks) checks[c.name] = c;
        } catch (const std::exception& e) {
            errors[name] = e.what();
        }
    }

    int failed = 0;
    for (const auto& crit : criteria()) {
        bool ok = !errors.count(crit.suite);
        double seconds = 0.0;
        std::ostringstream detail;
        for (const auto& b : crit.bounds) {
            const auto it = checks.find(b.check);
            if (it == checks.end()) {
                ok = false;
                detail << " " << b.check << "=missing";
                continue;
            }
            const double m = it->second.measured;
            seconds += it->second.runtime_s;
            if (!(m <= b.tolerance)) ok = false;
            detail << " " << b.check << "=" << m << "(<=" << b.tolerance << ")";
        }
        if (errors.count(crit.suite)) detail << " error: " << errors.at(crit.suite);
        const bool fast = seconds < crit.seconds;
        std::printf("%s criterion %2d: %s [%.2f s, limit %.0f s]%s\n", ok && fast ? "PASS" : "FAIL", crit.id,
                    crit.title.c_str(), seconds, crit.seconds, detail.str().c_str());
        if (!(ok && fast)) ++failed;
    }

    // 14: two verify runs with the same seed give byte-identical ratio tables, in under twice one run.
    {
        const fs::path root = fs::temp_directory_path() / ("lpkit_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(root);
        app::RunConfig rc;
        rc.suite = "ratios";
        rc.write_json = true;
        rc.write_csv = true;
        std::ostringstream log;
        bool ok = true;
        double t_first = 0.0, t_total = 0.0;
        std::size_t tables = 0;
        try {
            const auto t0 = Clock::now();
            rc.out_dir = root / "run1";
            ok = app::cmd_verify(rc, log) == app::exit_ok && ok;
            const auto t1 = Clock::now();
            rc.out_dir = root / "run2";
            ok = app::cmd_verify(rc, log) == app::exit_ok && ok;
            ok = ratio_tables_equal(root / "run1", root / "run2", tables) && ok;
            ok = read_file(root / "run1" / "report.json") == read_file(root / "run2" / "report.json") && ok;
            const auto t2 = Clock::now();
            t_first = std::chrono::duration<double>(t1 - t0).count();
            t_total = std::chrono::duration<double>(t2 - t0).count();
        } catch (const std::exception& e) {
            ok = false;
            std::printf("  determinism run error: %s\n", e.what());
        }
        fs::remove_all(root);
        // Slack of 10% over twice the first run absorbs scheduler noise.
        const double limit = 2.2 * t_first;
        const bool fast = t_total < limit;
        std::printf("%s criterion 14: determinism [%.2f s, limit %.2f s] %zu identical ratio tables\n",
                    ok && fast ? "PASS" : "FAIL", t_total, limit, tables);
        if (!(ok && fast)) ++failed;
    }

    std::printf("%d of 14 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
