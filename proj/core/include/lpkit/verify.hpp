#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/corpus.hpp"
#include "lpkit/grid.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

enum class OperatorTag { theorem2, theorem3, corollary1, theorem4, theorem5, hls };

std::string_view to_string(OperatorTag tag);
OperatorTag parse_operator_tag(std::string_view name);

/// Parameters of a ratio experiment. NaN for s selects s = n (1/p - 1/q) where that is the hypothesis.
struct RatioParams {
    double p = 2.0;
    double q = 4.0;
    double s = std::numeric_limits<double>::quiet_NaN();
    double lambda = 2.0;
    double gamma = 0.5;  // hls only
    int nodes_per_octave = 16;
};

struct RatioRecord {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct RatioExperiment {
    OperatorTag tag = OperatorTag::theorem2;
    RatioParams params;  // s resolved
    GridSpec spec{1, 32, 1.0};
    std::uint64_t corpus_seed = 0;
    std::string corpus_family;
    std::vector<RatioRecord> records;
    std::vector<std::string> excluded;  // labels with rhs below 1e-12 * max rhs
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    bool refined = false;  // true for the x2 grid of a refinement pair

    /// Recomputes max_ratio and median_ratio from the records.
    void summarize();
};

/// Checks the hypotheses of the tagged result and fills in the derived s; throws ParameterError naming the failed inequality.
RatioParams resolve_ratio_params(OperatorTag tag, const RatioParams& params, int dim);

/// Per-entry lhs/rhs for the tagged inequality. jobs = 0 uses every hardware thread.
RatioExperiment run_ratio_experiment(OperatorTag tag, const RatioParams& params, const TestCorpus& corpus,
                                     unsigned jobs = 0);

struct RefinementStudy {
    RatioExperiment coarse;
    RatioExperiment fine;
    /// |max_fine - max_coarse| / max_coarse.
    double relative_change = 0.0;
};

/// Runs the experiment on the corpus grid and on the x2 refined grid with the same generators.
RefinementStudy run_refinement_study(OperatorTag tag, const RatioParams& params, const TestCorpus& corpus,
                                     unsigned jobs = 0);

/// The three kernel-difference integrals at one point x.
struct HormanderValues {
    Point x{};
    std::array<double, 3> integrals{};
};

/**
 * int_0^inf int_{|y| > beta |x|} |K(y - x, t) - K(y, t)| dy dt for
 *   K_1 = t y_1 / (t^2 + |y|^2)^{(n+3)/2},  K_2 = (t^2 + |y|^2)^{-(n+1)/2},  K_3 = t^2 / (t^2 + |y|^2)^{(n+3)/2},
 * by midpoint quadrature in ln t, ln |y| (and angle for n = 2) with quad.nodes_per_octave.
 * The integration ranges are fixed multiples of |x|.
 */
std::vector<HormanderValues> check_hormander_integrals(int n, double beta, const std::vector<Point>& sample_xs,
                                                       const QuadratureConfig& quad);

/// Periodic convolution with |y|^{-gamma} over minimal-image offsets, using cell
/// averages of the kernel (the singular self cell in closed form).
GridFunction riesz_potential(const GridFunction& f, double gamma);

/// max over the corpus of ||f * |y|^{-gamma}||_q / ||f||_p; requires 1/q = 1/p - (n - gamma)/n.
double check_hls(int n, double p, double q, double gamma, const TestCorpus& corpus);

struct IdentityCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    double runtime_s = 0.0;

    bool passed() const { return measured <= threshold; }
};

struct VerificationReport {
    static constexpr int schema_version = 1;

    std::string suite;
    std::vector<IdentityCheck> checks;
    std::vector<RatioExperiment> experiments;
    std::map<std::string, std::string> environment;

    bool passed() const;
};

VerificationReport emit_report(std::string suite, std::vector<RatioExperiment> experiments,
                               std::vector<IdentityCheck> identity_checks,
                               std::map<std::string, std::string> environment = {});

/// JSON body; runtimes are left out unless include_timing is set, so equal inputs give equal bytes.
std::string report_json(const VerificationReport& report, bool include_timing = false);
/// CSV table with columns label, lhs, rhs, ratio.
std::string ratio_table_csv(const RatioExperiment& experiment);

}  // namespace lpkit
