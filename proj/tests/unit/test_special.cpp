#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "lpkit/error.hpp"
#include "lpkit/grid.hpp"
#include "lpkit/special.hpp"

using namespace lpkit;

TEST_CASE("gamma at classical points") {
    CHECK(lpkit::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(lpkit::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(lpkit::gamma(-0.25) == doctest::Approx(-4.9016668098523).epsilon(1e-10));
}

TEST_CASE("gamma reflection branch agrees with the reflection formula evaluated independently") {
    for (double z : {-2.7, -1.5, -0.25, 0.1, 0.3, 0.49}) {
        const double oracle = std::numbers::pi / (std::sin(std::numbers::pi * z) * std::tgamma(1.0 - z));
        CHECK(lpkit::gamma(z) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("gamma poles") {
    for (double z : {0.0, -1.0, -7.0}) CHECK_THROWS_AS(lpkit::gamma(z), PoleError);
}

TEST_CASE("upper incomplete gamma matches Boost") {
    for (double a : {0.2, 0.5, 1.0, 2.5, 7.0})
        for (double x : {0.0, 0.01, 0.5, 1.0, 3.0, 20.0})
            CHECK(upper_incomplete_gamma(a, x) == doctest::Approx(boost::math::tgamma(a, x)).epsilon(1e-10));
    CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), ParameterError);
}

TEST_CASE("dimension constants") {
    const auto d1 = dimension_constants(1);
    const auto d2 = dimension_constants(2);
    CHECK(d1.c0 == doctest::Approx(1.0 / std::numbers::pi));
    CHECK(d2.c0 == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(d1.nu_n == doctest::Approx(2.0));
    CHECK(d2.nu_n == doctest::Approx(std::numbers::pi));
    CHECK(d1.omega_nm1 / d1.nu_n == doctest::Approx(1.0));
    CHECK(d2.omega_nm1 / d2.nu_n == doctest::Approx(2.0));
}

TEST_CASE("scalar subordination identity") {
    const GridSpec spec(1, 256, 1.0);
    const auto quad = QuadratureConfig::defaults_for(spec);
    CHECK(check_scalar_subordination(1.0, 0.5, quad) <= 1e-6);
    CHECK(check_scalar_subordination(2.0, 0.3, quad) <= 1e-6);
    CHECK(check_scalar_subordination(0.5, 0.7, quad) <= 1e-6);
    // every frequency the grid carries
    for (int k = 1; k <= 128; k *= 2) CHECK(check_scalar_subordination(k, 0.3, quad) <= 1e-6);
}

TEST_CASE("quadrature config") {
    const auto q = QuadratureConfig::defaults_for(GridSpec(1, 256, 2.0));
    CHECK(q.t_min == doctest::Approx(2.0 / 256 / 4));
    CHECK(q.t_max == doctest::Approx(8.0));
    CHECK(q.with_nodes_per_octave(32).node_count() == 2 * q.node_count());
    const auto lq = LogQuadrature::build(q);
    CHECK(lq.nodes.size() == q.node_count());
    double sum = 0.0;
    for (double w : lq.weights) sum += w;
    // the midpoint rule in ln t integrates dt to within O(du^2)
    CHECK(sum == doctest::Approx(q.t_max - q.t_min).epsilon(1e-3));
    QuadratureConfig bad = q;
    bad.t_min = 0.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}
