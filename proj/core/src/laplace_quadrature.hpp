#pragma once

#include "lpkit/quadrature.hpp"

namespace lpkit::detail {

// Pieces of int_0^inf e^{-a r} r^{c-1} dr that the log-midpoint sum over
// [t_min, t_max] misses: the analytic head (0, t_min), the analytic tail
// (t_max, inf) and the Euler-Maclaurin end corrections of the midpoint rule in
// u = ln r. Requires a >= 0, c > 0; a = 0 is only admissible without a tail.
double laplace_endpoint_corrections(double a, double c, const LogQuadrature& q);

// Full value of the integral: midpoint sum plus corrections.
double laplace_power_integral(double a, double c, const LogQuadrature& q);

}  // namespace lpkit::detail
