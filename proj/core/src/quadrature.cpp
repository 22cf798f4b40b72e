#include "lpkit/quadrature.hpp"

#include <cmath>

#include "lpkit/error.hpp"
#include "lpkit/grid.hpp"

namespace lpkit {

QuadratureConfig QuadratureConfig::defaults_for(const GridSpec& spec) {
    QuadratureConfig cfg;
    cfg.t_min = spec.cell_width() / 4.0;
    cfg.t_max = 4.0 * spec.period();
    cfg.nodes_per_octave = 16;
    return cfg;
}

void QuadratureConfig::validate() const {
    if (!(t_min > 0.0)) throw ParameterError("QuadratureConfig: t_min must be positive");
    if (!(t_max > t_min)) throw ParameterError("QuadratureConfig: t_max must exceed t_min");
    if (nodes_per_octave < 4) throw ParameterError("QuadratureConfig: nodes_per_octave must be >= 4");
}

std::size_t QuadratureConfig::node_count() const {
    validate();
    return static_cast<std::size_t>(std::ceil(nodes_per_octave * std::log2(t_max / t_min) - 1e-9));
}

QuadratureConfig QuadratureConfig::with_nodes_per_octave(int npo) const {
    QuadratureConfig c = *this;
    c.nodes_per_octave = npo;
    return c;
}

LogQuadrature LogQuadrature::build(const QuadratureConfig& cfg) {
    const std::size_t m = cfg.node_count();
    LogQuadrature q;
    const double u0 = std::log(cfg.t_min);
    const double u1 = std::log(cfg.t_max);
    q.du = (u1 - u0) / static_cast<double>(m);
    q.nodes.resize(m);
    q.weights.resize(m);
    q.edges.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) q.edges[i] = std::exp(u0 + q.du * static_cast<double>(i));
    q.edges.front() = cfg.t_min;
    q.edges.back() = cfg.t_max;
    for (std::size_t i = 0; i < m; ++i) {
        const double t = std::exp(u0 + q.du * (static_cast<double>(i) + 0.5));
        q.nodes[i] = t;
        q.weights[i] = t * q.du;
    }
    return q;
}

}  // namespace lpkit
