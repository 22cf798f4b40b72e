#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lpkit_app/commands.hpp"
#include "lpkit_app/config.hpp"

using namespace lpkit::app;

int main(int argc, char** argv) {
    CLI::App app{"lpkit: Littlewood-Paley and square-function experiments on the torus"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lpkit 0.1.0");

    std::string config_path, out_dir, format, suite;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> grid_n;
    std::optional<unsigned> jobs;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "corpus seed");
    app.add_option("--grid-n", grid_n, "points per axis (power of two >= 32)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--suite", suite, "suite to verify (identities, geometry, ratios, all, or one suite)");
    app.add_option("--jobs", jobs, "worker threads, 0 = all cores");

    auto* corpus = app.add_subcommand("corpus", "write a test corpus");
    std::string family;
    std::optional<std::size_t> count;
    corpus->add_option("--family", family, "band_limited, gaussian_bump, indicator_sum or smooth_compact");
    corpus->add_option("--count", count, "number of entries");

    auto* apply = app.add_subcommand("apply", "apply an operator to a grid function");
    std::string op, input;
    std::optional<double> s, q, p, lambda, t, r, split;
    std::optional<int> j;
    apply->add_option("operator", op, "poisson, grad, d_sq, g_sq, big_g, big_r, frac_int, frac_sing, maximal, pfs")
        ->required();
    apply->add_option("input", input, "grid function file (JSON or binary)")->required();
    apply->add_option("--s", s);
    apply->add_option("--q", q);
    apply->add_option("--p", p);
    apply->add_option("--lambda", lambda);
    apply->add_option("--t", t);
    apply->add_option("--j", j);
    apply->add_option("--r", r);
    apply->add_option("--split-radius", split);

    auto* decompose = app.add_subcommand("decompose", "Whitney or Calderon-Zygmund decomposition");
    std::string kind, dinput;
    std::optional<int> k_max;
    std::optional<double> alpha, dp;
    decompose->add_option("kind", kind, "whitney or cz")->required();
    decompose->add_option("input", dinput, "open-set file (whitney) or grid function (cz)")->required();
    decompose->add_option("--k-max", k_max, "generation cap for whitney");
    decompose->add_option("--alpha", alpha, "level for cz");
    decompose->add_option("--p", dp, "exponent for cz");

    auto* verify = app.add_subcommand("verify", "run verification suites and write reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    return guarded(
        [&]() -> int {
            RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (grid_n) {
                if (*grid_n < 32 || (*grid_n & (*grid_n - 1)) != 0) throw ConfigError("--grid-n must be a power of two >= 32");
                cfg.grid = lpkit::GridSpec(cfg.grid.dim(), *grid_n, cfg.grid.period());
            }
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            if (!format.empty()) apply_format(cfg, format);
            if (!suite.empty()) cfg.suite = suite;
            if (jobs) cfg.jobs = *jobs;
            if (!family.empty()) {
                try {
                    cfg.family = lpkit::parse_corpus_family(family);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what());
                }
            }
            if (count) cfg.corpus_count = *count;
            if (s) cfg.op.s = *s;
            if (q) cfg.op.q = *q;
            if (p) cfg.op.p = *p;
            if (lambda) cfg.op.lambda = *lambda;
            if (t) cfg.op.t = *t;
            if (j) cfg.op.j = *j;
            if (r) cfg.op.r = *r;
            if (split) cfg.op.split_radius = *split;
            if (k_max) cfg.decompose.k_max = *k_max;
            if (alpha) cfg.decompose.alpha = *alpha;
            if (dp) cfg.decompose.p = *dp;
            cfg.validate();

            if (*corpus) return cmd_corpus(cfg, std::cout);
            if (*apply) return cmd_apply(cfg, op, input, std::cout);
            if (*decompose) return cmd_decompose(cfg, kind, dinput, std::cout);
            (void)verify;
            return cmd_verify(cfg, std::cout);
        },
        std::cerr);
}
