#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "../support/helpers.hpp"
#include "lpkit/io.hpp"
#include "lpkit_app/commands.hpp"
#include "lpkit_app/config.hpp"

using namespace lpkit;
using namespace lpkit::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("lpkit_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::function<int()>& body) {
    std::ostringstream err;
    return guarded(body, err);
}

RunConfig config_in(const fs::path& out) {
    RunConfig c;
    c.out_dir = out;
    c.jobs = 1;
    return c;
}

}  // namespace

TEST_CASE("config parsing accepts known keys and rejects unknown ones") {
    const auto c = parse_config(R"({
        "schema_version": 1,
        "grid": {"dim": 2, "points_per_axis": 32, "period": 2.0},
        "quadrature": {"nodes_per_octave": 8},
        "corpus": {"family": "gaussian_bump", "count": 4, "seed": 11},
        "suite": "geometry",
        "experiments": [{"operator": "theorem3", "p": 2, "q": 2, "s": -0.5, "family": "band_limited"}],
        "thresholds": {"lp.reconstruction": 1e-9},
        "operator": {"s": 0.3},
        "decompose": {"alpha": 0.5, "p": 2},
        "output": {"directory": "x", "formats": ["csv"], "grid_format": "binary"},
        "jobs": 2
    })");
    CHECK(c.grid == GridSpec(2, 32, 2.0));
    CHECK(c.nodes_per_octave == 8);
    CHECK(c.family == CorpusFamily::gaussian_bump);
    CHECK(c.seed == 11);
    CHECK(c.experiments.size() == 1);
    CHECK(c.experiments[0].params.s == -0.5);
    CHECK(c.thresholds.at("lp.reconstruction") == 1e-9);
    CHECK_FALSE(c.write_json);
    CHECK(c.write_csv);
    CHECK(c.grid_format == GridFileFormat::binary);

    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"dim": 1, "n": 32}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"points_per_axis": 48}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"points_per_axis": 16}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"suite": "nope"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiments": [{"operator": "hls", "p": 2, "q": 4}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"quadrature": {"nodes_per_octave": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("apply frac_int with s = 0 returns the input") {
    TempDir tmp;
    const GridSpec s(1, 64, 1.0);
    const auto f = lpkit::testing::random_real(s, 3).mean_free();
    write_grid_function(tmp.path / "f.json", f, GridFileFormat::json);
    auto cfg = config_in(tmp.path / "out");
    cfg.op.s = 0.0;
    std::ostringstream log;
    CHECK(cmd_apply(cfg, "frac_int", tmp.path / "f.json", log) == exit_ok);
    CHECK(lpkit::testing::max_abs_diff(read_grid_function(tmp.path / "out" / "frac_int.json"), f) <= 1e-12);
    const auto meta = nlohmann::json::parse(read_file(tmp.path / "out" / "frac_int.meta.json"));
    CHECK(meta["parameters"]["s"] == 0.0);
}

TEST_CASE("apply g_sq to a cosine gives one half with quadrature metadata") {
    TempDir tmp;
    const GridSpec s(1, 256, 1.0);
    write_grid_function(tmp.path / "cos.lpgf", lpkit::testing::cosine(s), GridFileFormat::binary);
    auto cfg = config_in(tmp.path / "out");
    std::ostringstream log;
    CHECK(cmd_apply(cfg, "g_sq", tmp.path / "cos.lpgf", log) == exit_ok);
    const auto g = read_grid_function(tmp.path / "out" / "g_sq.json");
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i].real() == doctest::Approx(0.5).epsilon(0.01));
    const auto meta = nlohmann::json::parse(read_file(tmp.path / "out" / "g_sq.meta.json"));
    CHECK(meta.contains("quadrature"));
    CHECK(meta["quadrature_error"]["endpoint_share"].get<double>() < 1e-3);
}

TEST_CASE("apply writes every gradient component") {
    TempDir tmp;
    write_grid_function(tmp.path / "f.json", lpkit::testing::random_real(GridSpec(2, 8, 1.0), 1), GridFileFormat::json);
    auto cfg = config_in(tmp.path / "out");
    std::ostringstream log;
    CHECK(cmd_apply(cfg, "grad", tmp.path / "f.json", log) == exit_ok);
    for (int k = 0; k < 3; ++k) CHECK(fs::exists(tmp.path / "out" / ("grad_" + std::to_string(k) + ".json")));
}

TEST_CASE("apply error paths map to distinct exit codes") {
    TempDir tmp;
    write_grid_function(tmp.path / "f.json", lpkit::testing::random_real(GridSpec(1, 16, 1.0), 1), GridFileFormat::json);
    lpkit::write_file(tmp.path / "junk.json", "{\"schema_version\": 1}");
    auto cfg = config_in(tmp.path / "out");
    std::ostringstream log;
    CHECK(run([&] { return cmd_apply(cfg, "nosuch", tmp.path / "f.json", log); }) == exit_usage);
    CHECK_FALSE(fs::exists(tmp.path / "out"));
    CHECK(run([&] { return cmd_apply(cfg, "poisson", tmp.path / "junk.json", log); }) == exit_malformed_input);
    CHECK(run([&] { return cmd_apply(cfg, "poisson", tmp.path / "missing.json", log); }) == exit_malformed_input);
    cfg.op.s = 1.5;
    CHECK(run([&] { return cmd_apply(cfg, "frac_sing", tmp.path / "f.json", log); }) == exit_precondition);
}

TEST_CASE("decompose whitney on the unit interval") {
    TempDir tmp;
    lpkit::write_file(tmp.path / "omega.json",
                      R"({"schema_version": 1, "kind": "open_set", "dim": 1, "period": 4, "periodic": false,
                          "boxes": [{"lo": [0], "hi": [1]}]})");
    auto cfg = config_in(tmp.path / "a");
    cfg.decompose.k_max = 10;
    std::ostringstream log;
    CHECK(cmd_decompose(cfg, "whitney", tmp.path / "omega.json", log) == exit_ok);
    const std::string first = read_file(tmp.path / "a" / "whitney.json");
    const auto j = nlohmann::json::parse(first);
    CHECK(j["all_passed"] == true);
    CHECK(j["cubes"].size() == 18);
    cfg.out_dir = tmp.path / "b";
    CHECK(cmd_decompose(cfg, "whitney", tmp.path / "omega.json", log) == exit_ok);
    CHECK(read_file(tmp.path / "b" / "whitney.json") == first);
    lpkit::write_file(tmp.path / "bad.json", R"({"schema_version": 1, "dim": 3, "period": 1, "boxes": []})");
    CHECK(run([&] { return cmd_decompose(cfg, "whitney", tmp.path / "bad.json", log); }) == exit_malformed_input);
}

TEST_CASE("decompose cz with alpha above max |f| exits with the precondition code") {
    TempDir tmp;
    const GridSpec s(1, 64, 8.0);
    std::vector<double> v(64, 0.0);
    for (int i = 0; i < 8; ++i) v[i] = 4.0;
    write_grid_function(tmp.path / "f.json", GridFunction(s, v), GridFileFormat::json);
    auto cfg = config_in(tmp.path / "out");
    cfg.decompose.alpha = 5.0;
    std::ostringstream log;
    CHECK(run([&] { return cmd_decompose(cfg, "cz", tmp.path / "f.json", log); }) == exit_precondition);
    cfg.decompose.alpha = 1.0;
    CHECK(cmd_decompose(cfg, "cz", tmp.path / "f.json", log) == exit_ok);
    CHECK(nlohmann::json::parse(read_file(tmp.path / "out" / "cz.json"))["all_passed"] == true);
    cfg.decompose.alpha = 0.0;
    CHECK(run([&] { return cmd_decompose(cfg, "cz", tmp.path / "f.json", log); }) == exit_usage);
}

TEST_CASE("verify writes reports and reflects injected failures") {
    TempDir tmp;
    auto cfg = config_in(tmp.path / "ok");
    cfg.suite = "lp";
    cfg.corpus_count = 4;
    std::ostringstream log;
    CHECK(cmd_verify(cfg, log) == exit_ok);
    CHECK(fs::exists(tmp.path / "ok" / "report.json"));

    cfg.out_dir = tmp.path / "fail";
    cfg.thresholds["lp.reconstruction"] = 0.0;
    CHECK(cmd_verify(cfg, log) == exit_verification);
    const auto j = nlohmann::json::parse(read_file(tmp.path / "fail" / "report.json"));
    CHECK(j["status"] == "fail");
    bool marked = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "lp.reconstruction") marked = c["passed"] == false;
    CHECK(marked);
}

TEST_CASE("corpus command writes the manifest and entries") {
    TempDir tmp;
    auto cfg = config_in(tmp.path);
    cfg.corpus_count = 2;
    cfg.write_csv = false;
    std::ostringstream log;
    CHECK(cmd_corpus(cfg, log) == exit_ok);
    CHECK(fs::exists(tmp.path / "corpus" / "manifest.json"));
    CHECK(fs::exists(tmp.path / "corpus" / "band_limited_001.json"));
    CHECK_FALSE(fs::exists(tmp.path / "corpus" / "band_limited_001.csv"));
}
