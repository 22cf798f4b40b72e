#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/helpers.hpp"
#include "lpkit/corpus.hpp"
#include "lpkit/error.hpp"
#include "lpkit/littlewood_paley.hpp"
#include "lpkit/special.hpp"
#include "lpkit/square_functions.hpp"

using namespace lpkit;
using lpkit::testing::cosine;
using lpkit::testing::max_abs_diff;
using lpkit::testing::random_real;

namespace {

double spread(const GridFunction& g) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < g.size(); ++i) {
        lo = std::min(lo, g[i].real());
        hi = std::max(hi, g[i].real());
    }
    return hi - lo;
}

// Direct double loop over all other sample points with explicit minimal-image offsets.
double d_sq_at(const GridFunction& f, std::size_t x, double s, double q) {
    const GridSpec& sp = f.spec();
    const auto n = static_cast<long>(sp.points_per_axis());
    const double h = sp.cell_width();
    const auto xi = sp.multi_index(x);
    double acc = 0.0;
    for (std::size_t y = 0; y < sp.size(); ++y) {
        if (y == x) continue;
        const auto yi = sp.multi_index(y);
        double r2 = 0.0;
        for (int a = 0; a < sp.dim(); ++a) {
            long d = static_cast<long>(yi[a]) - static_cast<long>(xi[a]);
            d = ((d % n) + n) % n;
            if (d > n / 2) d -= n;
            r2 += (d * h) * (d * h);
        }
        acc += std::pow(std::abs(f[y] - f[x]), q) * std::pow(std::sqrt(r2), -sp.dim() - s * q) * sp.cell_volume();
    }
    return std::pow(acc, 1.0 / q);
}

}  // namespace

TEST_CASE("d_sq matches a direct double loop") {
    for (int dim : {1, 2}) {
        const GridSpec s(dim, dim == 1 ? 32 : 8, 1.0);
        const auto f = random_real(s, 21);
        const auto out = d_sq(f, 0.4, 3.0);
        for (std::size_t x : {std::size_t{0}, std::size_t{5}, s.size() - 1})
            CHECK(out[x].real() == doctest::Approx(d_sq_at(f, x, 0.4, 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("d_sq basic properties") {
    const GridSpec s(1, 64, 1.0);
    CHECK(d_sq(GridFunction::constant(s, 2.0), 0.5, 2.0).max_abs() == 0.0);
    CHECK(d_sq(GridFunction::zeros(s), 0.5, 2.0).max_abs() == 0.0);
    const auto e = GridFunction::sample_complex(s, [](const Point& x) {
        return std::exp(Complex(0.0, 2.0 * std::numbers::pi * 5.0 * x[0]));
    });
    CHECK(spread(d_sq(e, 0.3, 2.0)) < 1e-12);
    const auto f = random_real(s, 2);
    CHECK(max_abs_diff(d_sq(f.shifted(9), 0.3, 2.0), d_sq(f, 0.3, 2.0).shifted(9)) < 1e-12);
    CHECK_THROWS_AS(d_sq(f, 1.0, 2.0), ParameterError);
}

TEST_CASE("g_sq single mode and Plancherel constant") {
    const GridSpec s(1, 256, 1.0);
    const auto quad = QuadratureConfig::defaults_for(s);
    const auto g = g_sq(cosine(s), 0.0, 2.0, quad);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i].real() == doctest::Approx(0.5).epsilon(0.01));
    CHECK(lp_norm(g, 2.0) / lp_norm(cosine(s), 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
    CHECK(g_sq(GridFunction::zeros(s), 0.0, 2.0, quad).max_abs() == 0.0);
}

TEST_CASE("g_sq with smoothness index matches the Gamma-function constant") {
    const GridSpec s(1, 256, 1.0);
    const auto quad = QuadratureConfig::defaults_for(s);
    for (double sv : {-0.3, 0.3}) {
        const double pred = std::sqrt(std::pow(2.0, 4.0 * sv - 1.0) * std::pow(std::numbers::pi, 2.0 * sv) *
                                      lpkit::gamma(2.0 - 2.0 * sv));
        for (const auto& e : make_corpus(12, CorpusFamily::band_limited, 4, s).entries()) {
            const double ratio = lp_norm(g_sq(e.function, sv, 2.0, quad), 2.0) / lp_norm(fractional_integral(e.function, sv), 2.0);
            CHECK(ratio == doctest::Approx(pred).epsilon(0.02));
        }
    }
}

TEST_CASE("g_sq reports head and tail diagnostics") {
    const GridSpec s(1, 128, 1.0);
    SquareFnDiagnostics d;
    g_sq(cosine(s), 0.0, 2.0, QuadratureConfig::defaults_for(s), &d);
    CHECK(d.body_max > 0.0);
    CHECK(d.head_max < 1e-3 * d.body_max);
    CHECK(d.tail_max < 1e-10 * d.body_max);
}

TEST_CASE("big_g basic properties") {
    const GridSpec s(1, 64, 1.0);
    const auto quad = QuadratureConfig::defaults_for(s).with_nodes_per_octave(8);
    CHECK(big_g(GridFunction::zeros(s), 2.0, 2.0, quad).max_abs() == 0.0);
    CHECK(spread(big_g(cosine(s, 2), 2.0, 2.0, quad)) < 1e-10);
    const auto f = make_corpus(3, CorpusFamily::gaussian_bump, 1, s).entries()[0].function;
    const auto g2 = big_g(f, 2.0, 2.0, quad);
    const auto g3 = big_g(f, 3.0, 2.0, quad);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(g3[i].real() <= g2[i].real() * (1.0 + 1e-12));
    CHECK(max_abs_diff(big_g(f.shifted(5), 2.0, 2.0, quad), g2.shifted(5)) < 1e-10 * g2.max_abs());
    CHECK_THROWS_AS(big_g(f, 1.0, 2.0, quad), ParameterError);
}

TEST_CASE("big_r basic properties") {
    const GridSpec s(1, 64, 1.0);
    const auto quad = QuadratureConfig::defaults_for(s);
    CHECK(big_r(GridFunction::zeros(s), 0.5, 2.0, quad).max_abs() == 0.0);
    const auto f = make_corpus(4, CorpusFamily::gaussian_bump, 1, s).entries()[0].function;
    const auto r = big_r(f, 0.5, 2.0, quad);
    CHECK(max_abs_diff(big_r(f.shifted(7), 0.5, 2.0, quad), r.shifted(7)) < 1e-10 * r.max_abs());
    // |d_t P e| is constant in y for a single complex exponential, so R is constant in x
    const auto e = GridFunction::sample_complex(s, [](const Point& x) {
        return std::exp(Complex(0.0, 2.0 * std::numbers::pi * 3.0 * x[0]));
    });
    const auto c = big_r(e, 0.5, 2.0, quad);
    const auto c2 = big_r(e, 0.5, 2.0, quad.with_nodes_per_octave(32));
    CHECK(std::isfinite(c.max_abs()));
    CHECK(spread(c) < 1e-10 * c.max_abs());
    CHECK(c2[0].real() == doctest::Approx(c[0].real()).epsilon(0.02));
    CHECK_THROWS_AS(big_r(f, 0.0, 2.0, quad), ParameterError);
}

TEST_CASE("square function parameter validation") {
    SquareFnParams p;
    p.quad = QuadratureConfig::defaults_for(GridSpec(1, 64, 1.0));
    CHECK_NOTHROW(p.validate());
    p.lambda = 1.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p.lambda = 2.0;
    p.y_truncation = 3.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}
