#pragma once

#include <optional>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

/// P(f; ., t): spectral multiplication by e^{-2 pi t |xi|}.
GridFunction poisson_extend(const GridFunction& f, double t);

/**
 * Gradient of the Poisson extension sampled at t-nodes.
 *
 * components[i] holds dim + 1 GridFunctions for t_nodes[i]: the spatial
 * derivatives d_1 .. d_n followed by the t-derivative.
 */
struct HalfSpaceField {
    GridSpec spec;
    std::vector<double> t_nodes;
    std::vector<std::vector<GridFunction>> components;
    std::optional<std::vector<GridFunction>> extension;

    std::size_t component_count() const;
};

/// The n + 1 gradient components of P(f; ., t) from a precomputed spectrum.
std::vector<GridFunction> gradient_at(const Spectrum& fhat, double t);

HalfSpaceField gradient_field(const GridFunction& f, const QuadratureConfig& quad, bool with_extension = false);

/// Pointwise d_k P_t(x) for k in 1..n (spatial) and k = n + 1 (the t-derivative).
double kernel_space_domain(int n, int k, const Point& x, double t);

enum class LaplacianScheme {
    stencil,  // 2(n+1)+1 point finite differences on the (x, t) product grid
    spectral  // chain rule with exact second derivatives of P
};

struct SubharmonicOptions {
    double t_lo = 0.0;  // 0 selects L/64
    double t_hi = 0.0;  // 0 selects L/4
    LaplacianScheme scheme = LaplacianScheme::stencil;
};

struct SubharmonicResult {
    double min_laplacian = 0.0;
    double scale = 0.0;  // max over nodes of the summed magnitudes entering the Laplacian
    double slack = 0.0;  // tolerated negative excursion: 1e-8 * scale (spectral) or (h/L) * scale (stencil)
    std::size_t nodes = 0;
};

/// Discrete Laplacian of |grad P(f)|^q on the (x, t) product grid with t-step h.
SubharmonicResult check_subharmonic(const GridFunction& f, double q, const SubharmonicOptions& options = {});

/**
 * Relative L2 error between P(f; ., t) and
 *   (2 pi)^s / Gamma(s) int_0^inf P(I_s f; ., t + r) r^{s-1} dr.
 */
double check_subordination(const GridFunction& f, double s, double t, const QuadratureConfig& quad);

}  // namespace lpkit
