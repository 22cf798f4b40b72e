#include "lpkit_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>

#include <json.hpp>

#include "lpkit/cube_geometry.hpp"
#include "lpkit/error.hpp"
#include "lpkit/io.hpp"
#include "lpkit/littlewood_paley.hpp"
#include "lpkit/poisson.hpp"
#include "lpkit/square_functions.hpp"
#include "lpkit/suites.hpp"
#include "lpkit/verify.hpp"

namespace lpkit::app {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json grid_json(const GridSpec& g) {
    return {{"dim", g.dim()}, {"points_per_axis", g.points_per_axis()}, {"period", g.period()}};
}

std::string grid_extension(const RunConfig& c) { return c.grid_format == GridFileFormat::json ? ".json" : ".lpgf"; }

std::string values_csv(const GridFunction& f) {
    std::string out = f.spec().dim() == 1 ? "x,re,im\n" : "x0,x1,re,im\n";
    char buf[160];
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point x = f.spec().coordinate(i);
        if (f.spec().dim() == 1)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], f[i].real(), f[i].imag());
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x[0], x[1], f[i].real(), f[i].imag());
        out += buf;
    }
    return out;
}

GridFunction read_input(const std::filesystem::path& input) {
    if (!std::filesystem::exists(input)) throw FormatError("input file not found: " + input.string());
    return read_grid_function(input);
}

}  // namespace

const std::vector<std::string>& operator_names() {
    static const std::vector<std::string> names{"poisson", "grad",      "d_sq",      "g_sq",    "big_g",
                                                "big_r",   "frac_int",  "frac_sing", "maximal", "pfs"};
    return names;
}

int cmd_corpus(const RunConfig& config, std::ostream& log) {
    const TestCorpus corpus = make_corpus(config.seed, config.family, config.corpus_count, config.grid);
    const auto dir = config.out_dir / "corpus";
    write_file(dir / "manifest.json", corpus_manifest_json(corpus));
    for (const auto& e : corpus.entries()) {
        write_grid_function(dir / (e.label + grid_extension(config)), e.function, config.grid_format);
        if (config.write_csv) write_file(dir / (e.label + ".csv"), values_csv(e.function));
    }
    log << "wrote " << corpus.size() << " " << to_string(config.family) << " entries to " << dir.string() << "\n";
    return exit_ok;
}

int cmd_apply(const RunConfig& config, std::string_view op, const std::filesystem::path& input, std::ostream& log) {
    const auto& ops = operator_names();
    if (std::find(ops.begin(), ops.end(), op) == ops.end())
        throw ConfigError("unknown operator '" + std::string(op) + "'");
    const GridFunction f = read_input(input);
    const OperatorParams& p = config.op;
    QuadratureConfig quad = QuadratureConfig::defaults_for(f.spec());
    if (config.t_min > 0.0) quad.t_min = config.t_min;
    if (config.t_max > 0.0) quad.t_max = config.t_max;
    quad = quad.with_nodes_per_octave(config.nodes_per_octave);

    ordered_json meta;
    meta["schema_version"] = io_schema_version;
    meta["kind"] = "apply_metadata";
    meta["operator"] = std::string(op);
    meta["input"] = input.filename().string();
    meta["grid"] = grid_json(f.spec());
    ordered_json params = ordered_json::object();
    bool uses_quad = false;
    SquareFnDiagnostics diag;
    bool has_diag = false;

    std::vector<std::pair<std::string, GridFunction>> outputs;
    const std::string name(op);
    if (op == "poisson") {
        params["t"] = p.t;
        outputs.emplace_back(name, poisson_extend(f, p.t));
    } else if (op == "grad") {
        if (!(p.t > 0.0)) throw ParameterError("grad: t must be positive");
        params["t"] = p.t;
        auto comps = gradient_at(forward_transform(f), p.t);
        for (std::size_t k = 0; k < comps.size(); ++k) outputs.emplace_back(name + "_" + std::to_string(k), comps[k]);
    } else if (op == "d_sq") {
        params["s"] = p.s;
        params["q"] = p.q;
        outputs.emplace_back(name, d_sq(f, p.s, p.q));
    } else if (op == "g_sq") {
        params["s"] = p.s;
        params["q"] = p.q;
        uses_quad = has_diag = true;
        outputs.emplace_back(name, g_sq(f, p.s, p.q, quad, &diag));
    } else if (op == "big_g") {
        params["lambda"] = p.lambda;
        params["q"] = p.q;
        uses_quad = has_diag = true;
        outputs.emplace_back(name, big_g(f, p.lambda, p.q, quad, &diag));
    } else if (op == "big_r") {
        params["s"] = p.s;
        params["q"] = p.q;
        uses_quad = has_diag = true;
        outputs.emplace_back(name, big_r(f, p.s, p.q, quad, &diag));
    } else if (op == "frac_int") {
        params["s"] = p.s;
        outputs.emplace_back(name, fractional_integral(f, p.s));
    } else if (op == "frac_sing") {
        params["s"] = p.s;
        params["split_radius"] = p.split_radius;
        outputs.emplace_back(name, frac_laplacian_singular(f, p.s, p.split_radius));
    } else if (op == "maximal") {
        if (!(p.p >= 1.0)) throw ParameterError("maximal: p must be >= 1");
        params["p"] = p.p;
        outputs.emplace_back(name, hl_maximal(f, p.p));
    } else {
        params["j"] = p.j;
        params["r"] = p.r;
        outputs.emplace_back(name, pfs_maximal(f, p.j, p.r));
    }
    meta["parameters"] = params;
    if (uses_quad)
        meta["quadrature"] = {{"t_min", quad.t_min},
                              {"t_max", quad.t_max},
                              {"nodes_per_octave", quad.nodes_per_octave},
                              {"node_count", quad.node_count()}};
    if (has_diag) {
        // The endpoint pieces are added analytically; their size bounds what truncating the t-range would cost.
        meta["quadrature_error"] = {{"head_max", diag.head_max},
                                    {"tail_max", diag.tail_max},
                                    {"body_max", diag.body_max},
                                    {"endpoint_share", diag.body_max > 0.0
                                                           ? (diag.head_max + diag.tail_max) / diag.body_max
                                                           : 0.0}};
    }
    ordered_json files = ordered_json::array();
    for (const auto& [stem, g] : outputs) {
        write_grid_function(config.out_dir / (stem + grid_extension(config)), g, config.grid_format);
        files.push_back(stem + grid_extension(config));
        if (config.write_csv) {
            write_file(config.out_dir / (stem + ".csv"), values_csv(g));
            files.push_back(stem + ".csv");
        }
    }
    meta["outputs"] = files;
    write_file(config.out_dir / (name + ".meta.json"), meta.dump(2) + "\n");
    log << "applied " << name << " to " << input.string() << " -> " << config.out_dir.string() << "\n";
    return exit_ok;
}

OpenSetMask parse_open_set(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("schema_version").get<int>() != io_schema_version) throw FormatError("open set: unsupported schema_version");
        if (j.contains("kind") && j.at("kind") != "open_set") throw FormatError("open set: wrong kind");
        const int dim = j.at("dim").get<int>();
        if (dim != 1 && dim != 2) throw FormatError("open set: dim must be 1 or 2");
        const double period = j.at("period").get<double>();
        const bool periodic = j.value("periodic", false);
        std::vector<OpenSetMask::Box> boxes;
        for (const auto& b : j.at("boxes")) {
            const auto& lo = b.at("lo");
            const auto& hi = b.at("hi");
            if (!lo.is_array() || !hi.is_array() || lo.size() != static_cast<std::size_t>(dim) || hi.size() != lo.size())
                throw FormatError("open set: box corners must have dim coordinates");
            OpenSetMask::Box box;
            for (int a = 0; a < dim; ++a) {
                box.lo[a] = lo[a].get<double>();
                box.hi[a] = hi[a].get<double>();
            }
            boxes.push_back(box);
        }
        return OpenSetMask::from_boxes(dim, period, boxes, periodic);
    } catch (const FormatError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("open set: ") + e.what());
    }
}

int cmd_decompose(const RunConfig& config, std::string_view kind, const std::filesystem::path& input,
                  std::ostream& log) {
    if (kind != "whitney" && kind != "cz") throw ConfigError("decompose kind must be whitney or cz");
    if (!std::filesystem::exists(input)) throw FormatError("input file not found: " + input.string());
    bool ok = false;
    std::string body;
    if (kind == "whitney") {
        const OpenSetMask omega = parse_open_set(read_file(input));
        const WhitneyDecomposition wd = whitney_decompose(omega, config.decompose.k_max);
        auto clauses = check_whitney_clauses(wd);
        const auto nf = check_near_far_geometry(wd, config.seed);
        clauses.insert(clauses.end(), nf.begin(), nf.end());
        ok = std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.passed; });
        body = whitney_json(wd, clauses);
        log << "whitney: " << wd.cubes.size() << " cubes, " << wd.frontier.size() << " frontier cubes\n";
        for (const auto& c : clauses) log << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << "\n";
    } else {
        if (!(config.decompose.alpha > 0.0)) throw ConfigError("cz needs decompose.alpha > 0 (--alpha)");
        const GridFunction f = read_input(input);
        const CZDecomposition d = cz_decompose(f, config.decompose.p, config.decompose.alpha,
                                               config.decompose.extra_generations);
        ok = d.all_passed();
        body = cz_json(d);
        log << "cz: " << d.bad_parts.size() << " bad parts\n";
        for (const auto& c : d.clauses) log << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << "\n";
    }
    write_file(config.out_dir / (std::string(kind) + ".json"), body);
    return ok ? exit_ok : exit_verification;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
    const auto suites = expand_suite(config.suite);
    const SuiteConfig sc = config.suite_config();
    std::vector<IdentityCheck> checks;
    std::vector<RatioExperiment> experiments;
    for (const auto& s : suites) {
        SuiteResult r = run_suite(s, sc);
        for (auto& c : r.checks) {
            log << (c.passed() ? "PASS " : "FAIL ") << std::left << std::setw(44) << c.name << " measured "
                << c.measured << " threshold " << c.threshold << "\n";
            checks.push_back(std::move(c));
        }
        for (auto& e : r.experiments) experiments.push_back(std::move(e));
    }
    std::map<std::string, std::string> env{
        {"lpkit_version", "0.1.0"},
        {"seed", std::to_string(config.seed)},
        {"grid", std::to_string(config.grid.dim()) + "d, N=" + std::to_string(config.grid.points_per_axis())},
        {"nodes_per_octave", std::to_string(config.nodes_per_octave)},
        {"corpus_count", std::to_string(config.corpus_count)},
    };
    const VerificationReport report = emit_report(config.suite, std::move(experiments), std::move(checks), env);
    if (config.write_json) write_file(config.out_dir / "report.json", report_json(report));
    if (config.write_csv) {
        for (std::size_t i = 0; i < report.experiments.size(); ++i) {
            const auto& e = report.experiments[i];
            char name[96];
            std::snprintf(name, sizeof name, "%02zu_%s%s.csv", i, std::string(to_string(e.tag)).c_str(),
                          e.refined ? "_fine" : "");
            write_file(config.out_dir / "ratios" / name, ratio_table_csv(e));
        }
    }
    log << (report.passed() ? "verify: pass" : "verify: FAIL") << " (" << report.checks.size() << " checks)\n";
    return report.passed() ? exit_ok : exit_verification;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const FormatError& e) {
        err << "malformed input: " << e.what() << "\n";
        return exit_malformed_input;
    } catch (const DegenerateInputError& e) {
        err << "degenerate input: " << e.what() << "\n";
        return exit_precondition;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << "\n";
        return exit_precondition;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return exit_precondition;
    } catch (const DomainError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return exit_precondition;
    } catch (const PoleError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return exit_precondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lpkit::app
