#include "lpkit_app/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include <json.hpp>

#include "lpkit/error.hpp"
#include "lpkit/verify.hpp"

namespace lpkit::app {

namespace {

using json = nlohmann::json;

void require_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, std::string_view where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + "." + key + ": wrong type");
    }
}

bool user_grid_size(std::size_t n) { return n >= 32 && (n & (n - 1)) == 0; }

ExperimentSpec parse_experiment(const json& e, std::size_t index) {
    const std::string where = "experiments[" + std::to_string(index) + "]";
    require_keys(e, where, {"operator", "p", "q", "s", "lambda", "gamma", "family", "refine"});
    if (!e.contains("operator")) throw ConfigError(where + ": missing 'operator'");
    ExperimentSpec spec;
    try {
        spec.tag = parse_operator_tag(e.at("operator").get<std::string>());
        if (e.contains("family")) spec.family = parse_corpus_family(e.at("family").get<std::string>());
    } catch (const json::exception&) {
        throw ConfigError(where + ": operator and family must be strings");
    } catch (const std::exception& ex) {
        throw ConfigError(where + ": " + ex.what());
    }
    read(e, "p", spec.params.p, where);
    read(e, "q", spec.params.q, where);
    if (e.contains("s") && !e.at("s").is_null()) read(e, "s", spec.params.s, where);
    read(e, "lambda", spec.params.lambda, where);
    read(e, "gamma", spec.params.gamma, where);
    read(e, "refine", spec.refine, where);
    return spec;
}

}  // namespace

QuadratureConfig RunConfig::quadrature() const {
    QuadratureConfig q = QuadratureConfig::defaults_for(grid);
    if (t_min > 0.0) q.t_min = t_min;
    if (t_max > 0.0) q.t_max = t_max;
    return q.with_nodes_per_octave(nodes_per_octave);
}

SuiteConfig RunConfig::suite_config() const {
    SuiteConfig s;
    s.grid = grid;
    s.nodes_per_octave = nodes_per_octave;
    s.seed = seed;
    s.corpus_count = corpus_count;
    s.jobs = jobs;
    s.thresholds = thresholds;
    s.experiments = experiments;
    return s;
}

void RunConfig::validate() const {
    if (!user_grid_size(grid.points_per_axis())) throw ConfigError("grid.points_per_axis must be a power of two >= 32");
    try {
        quadrature().validate();
        expand_suite(suite);
        for (const auto& e : experiments) resolve_ratio_params(e.tag, e.params, grid.dim());
    } catch (const ParameterError& ex) {
        throw ConfigError(ex.what());
    }
    if (corpus_count == 0) throw ConfigError("corpus.count must be positive");
    if (nodes_per_octave < 1) throw ConfigError("quadrature.nodes_per_octave must be positive");
    for (const auto& [name, value] : thresholds)
        if (std::isnan(value)) throw ConfigError("thresholds." + name + " must be a number");
    if (!(op.t > 0.0)) throw ConfigError("operator.t must be positive");
    if (!(op.r > 0.0)) throw ConfigError("operator.r must be positive");
    if (!(op.p > 0.0) || !(op.q > 0.0)) throw ConfigError("operator.p and operator.q must be positive");
    if (!(op.split_radius > 0.0)) throw ConfigError("operator.split_radius must be positive");
    if (decompose.k_max < 0 || decompose.k_max > 40) throw ConfigError("decompose.k_max must lie in [0, 40]");
    if (decompose.alpha < 0.0) throw ConfigError("decompose.alpha must be positive");
    if (!(decompose.p >= 1.0)) throw ConfigError("decompose.p must be >= 1");
    if (decompose.extra_generations < 0) throw ConfigError("decompose.extra_generations must be >= 0");
}

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(root, "config", {"schema_version", "grid", "quadrature", "corpus", "suite", "experiments", "thresholds",
                                  "operator", "decompose", "output", "jobs"});
    if (root.contains("schema_version") && root.at("schema_version") != 1)
        throw ConfigError("config: unsupported schema_version");

    RunConfig c;
    if (root.contains("grid")) {
        const auto& g = root.at("grid");
        require_keys(g, "grid", {"dim", "points_per_axis", "period"});
        int dim = c.grid.dim();
        std::size_t n = c.grid.points_per_axis();
        double period = c.grid.period();
        read(g, "dim", dim, "grid");
        read(g, "points_per_axis", n, "grid");
        read(g, "period", period, "grid");
        if (dim != 1 && dim != 2) throw ConfigError("grid.dim must be 1 or 2");
        if (!user_grid_size(n)) throw ConfigError("grid.points_per_axis must be a power of two >= 32");
        if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("grid.period must be positive");
        c.grid = GridSpec(dim, n, period);
    }
    if (root.contains("quadrature")) {
        const auto& q = root.at("quadrature");
        require_keys(q, "quadrature", {"t_min", "t_max", "nodes_per_octave"});
        read(q, "t_min", c.t_min, "quadrature");
        read(q, "t_max", c.t_max, "quadrature");
        read(q, "nodes_per_octave", c.nodes_per_octave, "quadrature");
    }
    if (root.contains("corpus")) {
        const auto& k = root.at("corpus");
        require_keys(k, "corpus", {"family", "count", "seed"});
        if (k.contains("family")) {
            try {
                c.family = parse_corpus_family(k.at("family").get<std::string>());
            } catch (const std::exception& e) {
                throw ConfigError(std::string("corpus.family: ") + e.what());
            }
        }
        read(k, "count", c.corpus_count, "corpus");
        read(k, "seed", c.seed, "corpus");
    }
    read(root, "suite", c.suite, "config");
    if (root.contains("experiments")) {
        const auto& arr = root.at("experiments");
        if (!arr.is_array()) throw ConfigError("experiments: expected an array");
        c.experiments.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) c.experiments.push_back(parse_experiment(arr[i], i));
    }
    if (root.contains("thresholds")) {
        const auto& t = root.at("thresholds");
        if (!t.is_object()) throw ConfigError("thresholds: expected an object");
        for (const auto& [name, v] : t.items()) {
            if (!v.is_number()) throw ConfigError("thresholds." + name + ": expected a number");
            c.thresholds[name] = v.get<double>();
        }
    }
    if (root.contains("operator")) {
        const auto& o = root.at("operator");
        require_keys(o, "operator", {"s", "q", "p", "lambda", "t", "j", "r", "split_radius"});
        read(o, "s", c.op.s, "operator");
        read(o, "q", c.op.q, "operator");
        read(o, "p", c.op.p, "operator");
        read(o, "lambda", c.op.lambda, "operator");
        read(o, "t", c.op.t, "operator");
        read(o, "j", c.op.j, "operator");
        read(o, "r", c.op.r, "operator");
        read(o, "split_radius", c.op.split_radius, "operator");
    }
    if (root.contains("decompose")) {
        const auto& d = root.at("decompose");
        require_keys(d, "decompose", {"k_max", "alpha", "p", "extra_generations"});
        read(d, "k_max", c.decompose.k_max, "decompose");
        read(d, "alpha", c.decompose.alpha, "decompose");
        read(d, "p", c.decompose.p, "decompose");
        read(d, "extra_generations", c.decompose.extra_generations, "decompose");
    }
    if (root.contains("output")) {
        const auto& o = root.at("output");
        require_keys(o, "output", {"directory", "formats", "grid_format"});
        std::string dir = c.out_dir.string();
        read(o, "directory", dir, "output");
        c.out_dir = dir;
        if (o.contains("formats")) {
            std::vector<std::string> formats;
            read(o, "formats", formats, "output");
            c.write_json = c.write_csv = false;
            for (const auto& f : formats) {
                if (f == "json") c.write_json = true;
                else if (f == "csv") c.write_csv = true;
                else throw ConfigError("output.formats: unknown format '" + f + "'");
            }
        }
        if (o.contains("grid_format")) {
            std::string gf;
            read(o, "grid_format", gf, "output");
            if (gf == "json") c.grid_format = GridFileFormat::json;
            else if (gf == "binary") c.grid_format = GridFileFormat::binary;
            else throw ConfigError("output.grid_format must be json or binary");
        }
    }
    read(root, "jobs", c.jobs, "config");
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

void apply_format(RunConfig& config, std::string_view format) {
    if (format == "json") {
        config.write_json = true;
        config.write_csv = false;
    } else if (format == "csv") {
        config.write_json = false;
        config.write_csv = true;
    } else {
        throw ConfigError("--format must be json or csv");
    }
}

}  // namespace lpkit::app
