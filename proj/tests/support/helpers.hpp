#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lpkit/grid.hpp"

namespace lpkit::testing {

inline GridFunction random_real(const GridSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<double> v(spec.size());
    for (auto& x : v) x = d(rng);
    return GridFunction(spec, std::move(v));
}

inline GridFunction cosine(const GridSpec& spec, int k = 1) {
    const double L = spec.period();
    return GridFunction::sample(spec, [L, k](const Point& x) { return std::cos(2.0 * M_PI * k * x[0] / L); });
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rel_l2_diff(const GridFunction& a, const GridFunction& b) {
    return lp_norm(a - b, 2.0) / lp_norm(b, 2.0);
}

}  // namespace lpkit::testing
