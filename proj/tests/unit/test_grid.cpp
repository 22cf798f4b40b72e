#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/helpers.hpp"
#include "lpkit/corpus.hpp"
#include "lpkit/error.hpp"
#include "lpkit/grid.hpp"
#include "lpkit/io.hpp"

using namespace lpkit;
using lpkit::testing::random_real;

TEST_CASE("grid spec rejects bad shapes") {
    CHECK_THROWS(GridSpec(3, 32, 1.0));
    CHECK_THROWS(GridSpec(1, 24, 1.0));
    CHECK_THROWS(GridSpec(1, 32, 0.0));
    CHECK_NOTHROW(GridSpec(2, 2, 1.0));
}

TEST_CASE("grid spec indexing and frequencies") {
    const GridSpec s(2, 8, 2.0);
    CHECK(s.size() == 64);
    CHECK(s.cell_width() == doctest::Approx(0.25));
    CHECK(s.cell_volume() == doctest::Approx(0.0625));
    const auto idx = s.multi_index(s.flat_index(3, 5));
    CHECK(idx[0] == 3);
    CHECK(idx[1] == 5);
    CHECK(s.signed_frequency(0) == 0);
    CHECK(s.signed_frequency(3) == 3);
    CHECK(s.signed_frequency(4) == -4);
    CHECK(s.signed_frequency(7) == -1);
    CHECK(s.frequency(s.flat_index(7, 1))[0] == doctest::Approx(-0.5));
    CHECK(s.frequency(s.flat_index(7, 1))[1] == doctest::Approx(0.5));
    // minimal image across the wrap
    CHECK(s.periodic_distance(s.flat_index(0, 0), s.flat_index(7, 0)) == doctest::Approx(0.25));
}

TEST_CASE("forward transform of a constant is c L^n at DC only") {
    const GridSpec s(2, 16, 2.0);
    const auto F = forward_transform(GridFunction::constant(s, 3.0));
    CHECK(std::abs(F[0] - Complex(3.0 * 4.0, 0.0)) < 1e-12);
    for (std::size_t m = 1; m < F.size(); ++m) CHECK(std::abs(F[m]) < 1e-12);
}

TEST_CASE("single complex mode has one nonzero coefficient") {
    const GridSpec s(1, 32, 1.5);
    const double L = s.period();
    const auto f = GridFunction::sample_complex(s, [L](const Point& x) {
        return std::exp(Complex(0.0, 2.0 * std::numbers::pi * 3.0 * x[0] / L));
    });
    const auto F = forward_transform(f);
    for (std::size_t m = 0; m < F.size(); ++m) {
        if (s.signed_frequency(m) == 3)
            CHECK(std::abs(F[m] - Complex(L, 0.0)) < 1e-12);
        else
            CHECK(std::abs(F[m]) < 1e-12);
    }
    CHECK(std::abs(F.at_frequency(3) - Complex(L, 0.0)) < 1e-12);
}

TEST_CASE("transform round trip and Plancherel") {
    for (int dim : {1, 2}) {
        const GridSpec s(dim, dim == 1 ? 256 : 32, 0.75);
        const auto f = random_real(s, 11 + dim);
        const auto F = forward_transform(f);
        const auto g = inverse_transform(F);
        CHECK(lpkit::testing::rel_l2_diff(g, f) < 1e-12);
        double spec_energy = 0.0;
        for (const auto& c : F.coeffs()) spec_energy += std::norm(c);
        spec_energy /= std::pow(s.period(), dim);
        CHECK(spec_energy == doctest::Approx(std::pow(lp_norm(f, 2.0), 2)).epsilon(1e-12));
    }
}

TEST_CASE("lp_norm examples") {
    CHECK(lp_norm(GridFunction::constant(GridSpec(1, 64, 2.0), 1.0), 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(lp_norm(GridFunction::zeros(GridSpec(1, 64, 1.0)), 2.0) == 0.0);
    const GridSpec s(1, 64, 1.0);
    std::vector<double> v(64, 0.0);
    for (int i = 0; i < 16; ++i) v[i] = 2.0;
    CHECK(lp_norm(GridFunction(s, v), 2.0) == doctest::Approx(1.0));
    CHECK(weak_lp_quasinorm(GridFunction(s, v), 2.0) == doctest::Approx(1.0));
    CHECK(distribution_measure(v, s, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("weak quasinorm of a two-level function matches brute force over thresholds") {
    const GridSpec s(1, 128, 1.0);
    std::vector<double> v(128, 0.0);
    for (int i = 0; i < 16; ++i) v[i] = 3.0;
    for (int i = 16; i < 64; ++i) v[i] = 1.0;
    // oracle: sup_alpha alpha * |{|f| > alpha}| over a fine ladder just below each level
    double oracle = 0.0;
    for (int k = 1; k <= 30000; ++k) {
        const double alpha = 3.0 * k / 30000.0;
        oracle = std::max(oracle, alpha * distribution_measure(v, s, alpha));
    }
    CHECK(weak_lp_quasinorm(GridFunction(s, v), 1.0) == doctest::Approx(0.5));
    CHECK(oracle == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("weak quasinorm never exceeds the strong norm") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = random_real(GridSpec(1, 128, 1.0), seed);
        for (double p : {1.0, 1.5, 2.0, 3.0}) CHECK(weak_lp_quasinorm(f, p) <= lp_norm(f, p) * (1.0 + 1e-12));
    }
}

TEST_CASE("grid function algebra") {
    const GridSpec s(1, 8, 1.0);
    const auto f = random_real(s, 3);
    CHECK(lpkit::testing::max_abs_diff(f.shifted(3).shifted(-3), f) == 0.0);
    CHECK(f.shifted(1)[1] == f[0]);
    CHECK(std::abs(f.mean_free().mean()) < 1e-15);
    CHECK(lpkit::testing::max_abs_diff((f + f) - f.scaled(2.0), GridFunction::zeros(s)) < 1e-15);
    CHECK_THROWS(f + random_real(GridSpec(1, 16, 1.0), 3));
}

TEST_CASE("corpus generation is deterministic, zero mean and band limited") {
    const GridSpec s(1, 128, 1.0);
    const auto a = make_corpus(7, CorpusFamily::band_limited, 3, s);
    const auto b = make_corpus(7, CorpusFamily::band_limited, 3, s);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(lpkit::testing::max_abs_diff(a.entries()[i].function, b.entries()[i].function) == 0.0);
    CHECK(lpkit::testing::max_abs_diff(make_corpus(8, CorpusFamily::band_limited, 1, s).entries()[0].function,
                                       a.entries()[0].function) > 0.0);
    for (auto fam : {CorpusFamily::band_limited, CorpusFamily::gaussian_bump, CorpusFamily::indicator_sum,
                     CorpusFamily::smooth_compact})
        for (const auto& e : make_corpus(7, fam, 5, s).entries())
            CHECK(std::abs(e.function.mean()) <= 1e-12 * e.function.max_abs());
    const std::int64_t band = 128 / 8;
    for (const auto& e : a.entries()) {
        const auto F = forward_transform(e.function);
        for (std::size_t m = 0; m < F.size(); ++m)
            if (std::abs(s.signed_frequency(m)) > band) CHECK(std::abs(F[m]) < 1e-12);
    }
}

TEST_CASE("resampled corpus evaluates the same generators") {
    const auto a = make_corpus(5, CorpusFamily::gaussian_bump, 2, GridSpec(1, 64, 1.0));
    const auto b = a.resampled(GridSpec(1, 128, 1.0));
    // each grid removes its own sample mean, so coincident samples differ by one constant
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& fa = a.entries()[e].function;
        const auto& fb = b.entries()[e].function;
        const double offset = fa[0].real() - fb[0].real();
        for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(fa[i].real() - fb[2 * i].real() - offset) <= 1e-12);
    }
    CHECK(parse_corpus_family("smooth_compact") == CorpusFamily::smooth_compact);
    CHECK_THROWS_AS(parse_corpus_family("nope"), ParameterError);
}

TEST_CASE("grid function files round trip in both formats") {
    const auto f = random_real(GridSpec(2, 8, 0.5), 1);
    const auto j = grid_function_from_json(grid_function_to_json(f));
    const auto b = grid_function_from_binary(grid_function_to_binary(f));
    CHECK(j.spec() == f.spec());
    CHECK(lpkit::testing::max_abs_diff(j, f) == 0.0);
    CHECK(lpkit::testing::max_abs_diff(b, f) == 0.0);
    CHECK(grid_function_to_json(j) == grid_function_to_json(f));
}

TEST_CASE("malformed grid function files are rejected") {
    CHECK_THROWS_AS(grid_function_from_json("{"), FormatError);
    CHECK_THROWS_AS(grid_function_from_json(R"({"schema_version":2,"dim":1,"points_per_axis":2,"period":1,"values":[0,0]})"),
                    FormatError);
    CHECK_THROWS_AS(grid_function_from_json(R"({"schema_version":1,"dim":1,"points_per_axis":3,"period":1,"values":[0,0,0]})"),
                    FormatError);
    CHECK_THROWS_AS(grid_function_from_json(R"({"schema_version":1,"dim":1,"points_per_axis":2,"period":1,"values":[0]})"),
                    FormatError);
    std::string bin = grid_function_to_binary(random_real(GridSpec(1, 4, 1.0), 2));
    CHECK_THROWS_AS(grid_function_from_binary(bin.substr(0, bin.size() - 1)), FormatError);
    bin[0] = 'X';
    CHECK_THROWS_AS(grid_function_from_binary(bin), FormatError);
}
