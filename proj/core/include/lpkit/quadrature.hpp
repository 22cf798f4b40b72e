#pragma once

#include <cstddef>
#include <vector>

namespace lpkit {

class GridSpec;

enum class QuadratureRule { midpoint_log };

/**
 * Log-spaced quadrature on [t_min, t_max] for integrals over t in (0, inf).
 *
 * Nodes are midpoints of equal cells in u = ln t; the weight of a node is
 * t_i * du so that sum_i w_i g(t_i) approximates the integral of g over
 * [t_min, t_max]. The pieces (0, t_min) and (t_max, inf) are handled by the
 * caller with analytic endpoint corrections.
 */
struct QuadratureConfig {
    double t_min = 0.0;
    double t_max = 0.0;
    int nodes_per_octave = 16;
    QuadratureRule rule = QuadratureRule::midpoint_log;

    /// t_min = h/4, t_max = 4L, 16 nodes per octave.
    static QuadratureConfig defaults_for(const GridSpec& spec);

    void validate() const;
    std::size_t node_count() const;
    QuadratureConfig with_nodes_per_octave(int npo) const;
};

struct LogQuadrature {
    std::vector<double> nodes;    // increasing
    std::vector<double> weights;  // t_i * du
    std::vector<double> edges;    // cell edges in t, size nodes + 1
    double du = 0.0;

    static LogQuadrature build(const QuadratureConfig& cfg);
};

}  // namespace lpkit
