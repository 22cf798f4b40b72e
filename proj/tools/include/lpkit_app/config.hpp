#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/corpus.hpp"
#include "lpkit/grid.hpp"
#include "lpkit/io.hpp"
#include "lpkit/quadrature.hpp"
#include "lpkit/suites.hpp"

namespace lpkit::app {

/// A config file or flag that cannot be accepted. Maps to the usage exit code.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameters for cmd_apply. Only the ones an operator reads are used.
struct OperatorParams {
    double s = 0.0;
    double q = 2.0;
    double p = 2.0;
    double lambda = 2.0;
    double t = 0.1;  // poisson, grad
    int j = 0;       // pfs
    double r = 1.0;  // pfs
    double split_radius = 1.0;  // frac_sing
};

struct DecomposeParams {
    int k_max = 10;
    double alpha = 0.0;  // cz; required
    double p = 1.0;      // cz
    int extra_generations = 6;
};

struct RunConfig {
    GridSpec grid{1, 256, 1.0};
    double t_min = 0.0;  // 0 selects the grid default
    double t_max = 0.0;
    int nodes_per_octave = 16;

    CorpusFamily family = CorpusFamily::band_limited;
    std::size_t corpus_count = 20;
    std::uint64_t seed = 7;

    std::string suite = "all";
    std::vector<ExperimentSpec> experiments = default_experiments();
    std::map<std::string, double> thresholds;

    OperatorParams op;
    DecomposeParams decompose;

    std::filesystem::path out_dir = "lpkit-out";
    bool write_json = true;
    bool write_csv = true;
    GridFileFormat grid_format = GridFileFormat::json;
    unsigned jobs = 0;

    QuadratureConfig quadrature() const;
    SuiteConfig suite_config() const;
    /// Re-checks every downstream parameter constraint; throws ConfigError.
    void validate() const;
};

/// Parses a JSON config. Unknown keys at any level are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies --format: "json" or "csv" keeps only that output kind.
void apply_format(RunConfig& config, std::string_view format);

}  // namespace lpkit::app
