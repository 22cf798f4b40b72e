#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/corpus.hpp"
#include "lpkit/quadrature.hpp"
#include "lpkit/verify.hpp"

namespace lpkit {

struct ExperimentSpec {
    OperatorTag tag = OperatorTag::theorem2;
    RatioParams params;
    CorpusFamily family = CorpusFamily::gaussian_bump;
    bool refine = true;
};

/// The six parameter sets probed by default: theorem2, theorem3 (s = +-0.5), corollary1, theorem4, theorem5, hls.
std::vector<ExperimentSpec> default_experiments();

struct SuiteConfig {
    GridSpec grid{1, 256, 1.0};
    int nodes_per_octave = 16;
    std::uint64_t seed = 7;
    std::size_t corpus_count = 20;
    unsigned jobs = 0;
    std::map<std::string, double> thresholds;  // overrides keyed by check name
    std::vector<ExperimentSpec> experiments = default_experiments();
};

struct SuiteResult {
    std::vector<IdentityCheck> checks;
    std::vector<RatioExperiment> experiments;
};

/// Individual suites: lp, square, poisson, fraclap, maximal, whitney, cz, hormander, ratios.
const std::vector<std::string>& suite_names();
/// Expands "identities", "geometry" and "all" into individual suites; other names pass through after validation.
std::vector<std::string> expand_suite(std::string_view name);

SuiteResult run_suite(std::string_view name, const SuiteConfig& config);

/// Brute-force maximal function: every closed grid cube containing the sample point, summed directly.
GridFunction hl_maximal_brute_force(const GridFunction& f, double p_power);

}  // namespace lpkit
