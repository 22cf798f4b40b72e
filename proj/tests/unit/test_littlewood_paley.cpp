#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/helpers.hpp"
#include "lpkit/corpus.hpp"
#include "lpkit/error.hpp"
#include "lpkit/littlewood_paley.hpp"
#include "lpkit/special.hpp"

using namespace lpkit;
using lpkit::testing::cosine;
using lpkit::testing::max_abs_diff;
using lpkit::testing::random_real;

TEST_CASE("psi support, range and the partition at |xi| = 1") {
    for (int k : {PsiProfile::infinite, 2, 4}) {
        const PsiProfile psi = build_psi(k);
        CHECK(psi(1.0) + psi(0.5) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(psi(0.4) == 0.0);
        CHECK(psi(2.0) == 0.0);
        const auto tab = psi.tabulate(3.0, 3001);
        CHECK(*std::min_element(tab.begin(), tab.end()) >= 0.0);
        CHECK(*std::max_element(tab.begin(), tab.end()) <= 1.0);
    }
    CHECK_THROWS_AS(build_psi(1), ParameterError);
}

TEST_CASE("dyadic dilates sum to one at every nonzero grid frequency") {
    const PsiProfile psi = build_psi();
    for (const GridSpec& s : {GridSpec(1, 256, 1.0), GridSpec(2, 128, 1.0), GridSpec(1, 64, 3.0)}) {
        const auto [j0, j1] = dyadic_range(s);
        for (std::size_t m = 1; m < s.size(); ++m) {
            double acc = 0.0;
            for (int j = j0; j <= j1; ++j) acc += psi.dilated(j, s.abs_frequency(m));
            CHECK(std::abs(acc - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("single mode at |xi| = 1 splits into blocks 0 and 1") {
    const PsiProfile psi = build_psi();
    const GridSpec s(1, 64, 1.0);
    const auto f = cosine(s);
    const auto blocks = dyadic_blocks(f, psi);
    for (int j = blocks.j_min; j <= blocks.j_max; ++j)
        if (j != 0 && j != 1) CHECK(blocks.block(j).max_abs() < 1e-14);
    CHECK(max_abs_diff(blocks.block(0) + blocks.block(1), f) < 1e-14);
}

TEST_CASE("constant and zero functions have zero blocks") {
    const PsiProfile psi = build_psi();
    const GridSpec s(2, 16, 1.0);
    for (const auto& b : dyadic_blocks(GridFunction::constant(s, 4.0), psi).blocks) CHECK(b.max_abs() < 1e-14);
    for (const auto& b : dyadic_blocks(GridFunction::zeros(s), psi).blocks) CHECK(b.max_abs() == 0.0);
}

TEST_CASE("blocks reconstruct the mean-free part") {
    const PsiProfile psi = build_psi();
    for (int dim : {1, 2}) {
        const GridSpec s(dim, dim == 1 ? 256 : 32, 1.0);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto f = random_real(s, seed);
            CHECK(lp_norm(dyadic_blocks(f, psi).sum() - f.mean_free(), 2.0) <= 1e-10 * lp_norm(f, 2.0));
        }
    }
}

TEST_CASE("Triebel-Lizorkin quasinorm") {
    const PsiProfile psi = build_psi();
    const GridSpec s(1, 128, 1.0);
    CHECK(tl_quasinorm(GridFunction::zeros(s), 0.0, 2.0, 2.0, psi) == 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = random_real(s, 100 + seed).mean_free();
        CHECK(tl_quasinorm(f, 0.0, 2.0, 3.0, psi) <= tl_quasinorm(f, 0.0, 2.0, 2.0, psi) * (1.0 + 1e-12));
    }
    const auto c = cosine(s);
    const double v = tl_quasinorm(c, 0.0, 2.0, 2.0, psi);
    CHECK(v >= lp_norm(c, 2.0) / std::sqrt(2.0) * (1.0 - 1e-12));
    CHECK(v <= lp_norm(c, 2.0) * (1.0 + 1e-12));
}

TEST_CASE("fractional integral multiplier") {
    const GridSpec s(1, 64, 1.0);
    const auto e3 = GridFunction::sample_complex(s, [](const Point& x) {
        return std::exp(Complex(0.0, 2.0 * std::numbers::pi * 3.0 * x[0]));
    });
    const auto out = fractional_integral(e3, 0.5);
    CHECK(max_abs_diff(out, e3.scaled(std::sqrt(3.0))) < 1e-12);
    const auto f = random_real(s, 4).mean_free();
    CHECK(max_abs_diff(fractional_integral(f, 0.0), f) < 1e-12);
    CHECK(max_abs_diff(fractional_integral(fractional_integral(f, 0.4), -0.4), f) < 1e-12);
}

TEST_CASE("Sobolev norm") {
    const GridSpec s(1, 64, 1.0);
    const auto f = random_real(s, 6);
    CHECK(sobolev_norm(f, 0.0, 2.0) == doctest::Approx(lp_norm(f.mean_free(), 2.0)).epsilon(1e-12));
    CHECK(sobolev_norm(cosine(s, 3), 1.0, 2.0) == doctest::Approx(3.0 * lp_norm(cosine(s, 3), 2.0)).epsilon(1e-12));
    CHECK(sobolev_norm(GridFunction::zeros(s), 0.5, 2.0) == 0.0);
    // Plancherel oracle computed from the spectrum directly
    const auto F = forward_transform(f);
    double acc = 0.0;
    for (std::size_t m = 1; m < F.size(); ++m) acc += s.abs_frequency(m) * std::norm(F[m]);
    CHECK(sobolev_norm(f, 0.5, 2.0) == doctest::Approx(std::sqrt(acc / s.period())).epsilon(1e-12));
}

TEST_CASE("singular-integral fractional Laplacian agrees with the spectral path") {
    const GridSpec s(1, 256, 1.0);
    for (double sv : {0.3, 0.5, 0.7}) {
        const auto f = cosine(s, 2);
        const auto oracle = fractional_integral(f, sv).scaled(lpkit::gamma(-sv / 2.0));
        CHECK(lpkit::testing::rel_l2_diff(frac_laplacian_singular(f, sv), oracle) <= 0.05);
    }
    const auto g = make_corpus(1, CorpusFamily::band_limited, 1, s).entries()[0].function;
    CHECK(max_abs_diff(frac_laplacian_singular(g.shifted(17), 0.4), frac_laplacian_singular(g, 0.4).shifted(17)) <
          1e-10 * g.max_abs());
    CHECK_THROWS_AS(frac_laplacian_singular(g, 1.2), ParameterError);
}

TEST_CASE("Peetre-Fefferman-Stein maximal function") {
    const GridSpec s(1, 64, 1.0);
    CHECK(pfs_maximal(GridFunction::zeros(s), 2, 1.0).max_abs() == 0.0);
    const auto f = random_real(s, 9);
    const auto m = pfs_maximal(f, 3, 0.5);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(m[i].real() >= std::abs(f[i]));
    const auto e = GridFunction::sample_complex(s, [](const Point& x) {
        return 2.0 * std::exp(Complex(0.0, 2.0 * std::numbers::pi * 4.0 * x[0]));
    });
    const auto me = pfs_maximal(e, 2, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(me[i].real() == doctest::Approx(2.0).epsilon(1e-14));
    // brute-force oracle at one point
    const std::size_t x = 5;
    double oracle = 0.0;
    for (std::size_t z = 0; z < s.size(); ++z) {
        const std::size_t y = (x + s.size() - z) % s.size();
        const double dz = s.periodic_distance(0, z);
        oracle = std::max(oracle, std::abs(f[y]) / std::pow(1.0 + 8.0 * dz, 1.0 / 0.5));
    }
    CHECK(m[x].real() == doctest::Approx(oracle).epsilon(1e-14));
}
