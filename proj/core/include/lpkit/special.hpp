#pragma once

#include "lpkit/quadrature.hpp"

namespace lpkit {

/// Gamma function on the reals. Arguments below 1/2 use the reflection
/// formula; non-positive integers throw PoleError.
double gamma(double z);

/// Upper incomplete gamma Gamma(a, x) for a > 0, x >= 0.
double upper_incomplete_gamma(double a, double x);

struct DimensionConstants {
    int n = 0;
    double c0 = 0.0;         // Gamma((n+1)/2) / pi^{(n+1)/2}
    double nu_n = 0.0;       // volume of the unit ball
    double omega_nm1 = 0.0;  // area of the unit sphere
};

DimensionConstants dimension_constants(int n);

/**
 * Relative error of the scalar identity
 *   |xi|^{-s} = (2 pi)^s / Gamma(s) * int_0^inf e^{-2 pi |xi| r} r^{s-1} dr
 * with the integral evaluated by the log-midpoint rule plus endpoint corrections.
 */
double check_scalar_subordination(double xi_abs, double s, const QuadratureConfig& quad);

}  // namespace lpkit
