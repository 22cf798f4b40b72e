#include "lpkit/special.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "laplace_quadrature.hpp"
#include "lpkit/error.hpp"

namespace lpkit {

double gamma(double z) {
    if (!std::isfinite(z)) throw ParameterError("gamma: argument must be finite");
    if (z <= 0.0 && z == std::floor(z)) throw PoleError("gamma: pole at " + std::to_string(z));
    if (z >= 0.5) return std::tgamma(z);
    const double pi = std::numbers::pi;
    return pi / (std::sin(pi * z) * std::tgamma(1.0 - z));
}

double upper_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) throw ParameterError("upper_incomplete_gamma: a must be positive");
    if (!(x >= 0.0)) throw ParameterError("upper_incomplete_gamma: x must be non-negative");
    return boost::math::tgamma(a, x);
}

DimensionConstants dimension_constants(int n) {
    const double pi = std::numbers::pi;
    DimensionConstants d;
    d.n = n;
    switch (n) {
        case 1:
            d.c0 = 1.0 / pi;
            d.nu_n = 2.0;
            d.omega_nm1 = 2.0;
            break;
        case 2:
            d.c0 = 1.0 / (2.0 * pi);
            d.nu_n = pi;
            d.omega_nm1 = 2.0 * pi;
            break;
        default:
            throw ParameterError("dimension_constants: n must be 1 or 2");
    }
    return d;
}

namespace detail {

double laplace_endpoint_corrections(double a, double c, const LogQuadrature& q) {
    const double t0 = q.edges.front();
    const double t1 = q.edges.back();

    const double head = a == 0.0 ? std::pow(t0, c) / c
                                 : std::pow(a, -c) * boost::math::tgamma_lower(c, a * t0);
    const double tail = a == 0.0 ? 0.0 : std::pow(a, -c) * boost::math::tgamma(c, a * t1);

    // Integrand in u = ln r is g(u) = exp(c u - a e^u).
    auto derivs = [a, c](double t, double& g1, double& g3) {
        const double g = std::exp(c * std::log(t) - a * t);
        const double h1 = c - a * t;
        const double h2 = -a * t;
        g1 = h1 * g;
        g3 = (h2 + 3.0 * h1 * h2 + h1 * h1 * h1) * g;
    };
    double g1a, g3a, g1b, g3b;
    derivs(t0, g1a, g3a);
    derivs(t1, g1b, g3b);
    const double du2 = q.du * q.du;
    const double em = du2 / 24.0 * (g1b - g1a) - 7.0 * du2 * du2 / 5760.0 * (g3b - g3a);

    return head + tail + em;
}

double laplace_power_integral(double a, double c, const LogQuadrature& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double r = q.nodes[i];
        sum += q.weights[i] * std::exp(-a * r) * std::pow(r, c - 1.0);
    }
    return sum + laplace_endpoint_corrections(a, c, q);
}

}  // namespace detail

double check_scalar_subordination(double xi_abs, double s, const QuadratureConfig& quad) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("check_scalar_subordination: s must lie in (0,1)");
    if (!(xi_abs > 0.0)) throw ParameterError("check_scalar_subordination: xi_abs must be positive");
    const auto q = LogQuadrature::build(quad);
    const double two_pi = 2.0 * std::numbers::pi;
    const double integral = detail::laplace_power_integral(two_pi * xi_abs, s, q);
    const double value = std::pow(two_pi, s) / gamma(s) * integral;
    const double target = std::pow(xi_abs, -s);
    return std::abs(value - target) / target;
}

}  // namespace lpkit
