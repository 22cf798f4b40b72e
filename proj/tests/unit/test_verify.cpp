#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "../support/helpers.hpp"
#include "lpkit/corpus.hpp"
#include "lpkit/error.hpp"
#include "lpkit/square_functions.hpp"
#include "lpkit/littlewood_paley.hpp"
#include "lpkit/suites.hpp"
#include "lpkit/verify.hpp"

using namespace lpkit;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Nested adaptive Gauss-Kronrod over t in (0, inf) and |y| > beta |x| for n = 1.
double hormander_oracle(int which, double x, double beta) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto kernel = [which](double y, double t) {
        const double s = t * t + y * y;
        switch (which) {
            case 0: return t * y / (s * s);
            case 1: return 1.0 / s;
            default: return t * t / (s * s);
        }
    };
    auto inner = [&](double y) {
        return GK::integrate([&](double t) { return std::abs(kernel(y - x, t) - kernel(y, t)); }, 0.0, inf, 15, 1e-11);
    };
    const double a = beta * std::abs(x);
    return GK::integrate(inner, a, inf, 15, 1e-10) + GK::integrate(inner, -inf, -a, 15, 1e-10);
}

TestCorpus with_zero_entry(const TestCorpus& base) {
    auto entries = base.entries();
    entries.push_back({"zero", CorpusGenerator{}, GridFunction::zeros(base.spec())});
    return TestCorpus(base.seed(), base.family(), base.spec(), entries);
}

TestCorpus scaled_corpus(const TestCorpus& base, double c) {
    auto entries = base.entries();
    for (auto& e : entries) e.function = e.function.scaled(c);
    return TestCorpus(base.seed(), base.family(), base.spec(), entries);
}

}  // namespace

TEST_CASE("operator tags round trip") {
    for (auto t : {OperatorTag::theorem2, OperatorTag::theorem3, OperatorTag::corollary1, OperatorTag::theorem4,
                   OperatorTag::theorem5, OperatorTag::hls})
        CHECK(parse_operator_tag(to_string(t)) == t);
    CHECK_THROWS_AS(parse_operator_tag("theorem9"), ParameterError);
}

TEST_CASE("ratio parameters are checked and s is derived") {
    RatioParams p;
    p.p = 2.0;
    p.q = 4.0;
    CHECK(resolve_ratio_params(OperatorTag::theorem2, p, 1).s == doctest::Approx(0.25));
    CHECK(resolve_ratio_params(OperatorTag::theorem2, p, 2).s == doctest::Approx(0.5));
    RatioParams bad = p;
    bad.p = 0.5;
    CHECK_THROWS_AS(resolve_ratio_params(OperatorTag::theorem2, bad, 1), ParameterError);
    RatioParams h;
    h.p = 4.0 / 3.0;
    h.q = 4.0;
    h.gamma = 0.5;
    CHECK_NOTHROW(resolve_ratio_params(OperatorTag::hls, h, 1));
    h.q = 3.0;
    try {
        resolve_ratio_params(OperatorTag::hls, h, 1);
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("1/q") != std::string::npos);
    }
}

TEST_CASE("Hormander integrals vanish at the origin and are scale invariant") {
    QuadratureConfig q;
    q.nodes_per_octave = 8;
    const auto v = check_hormander_integrals(1, 2.0, {{0.0, 0.0}, {0.01, 0.0}, {1.0, 0.0}, {100.0, 0.0}}, q);
    for (double x : v[0].integrals) CHECK(x == 0.0);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::isfinite(v[1].integrals[k]));
        CHECK(v[1].integrals[k] == doctest::Approx(v[2].integrals[k]).epsilon(1e-10));
        CHECK(v[3].integrals[k] == doctest::Approx(v[2].integrals[k]).epsilon(1e-10));
    }
    CHECK_THROWS_AS(check_hormander_integrals(1, 1.0, {{1.0, 0.0}}, q), ParameterError);
}

TEST_CASE("Hormander integrals agree with nested adaptive quadrature") {
    QuadratureConfig q;
    q.nodes_per_octave = 16;
    const auto v = check_hormander_integrals(1, 2.0, {{1.0, 0.0}, {-0.01, 0.0}}, q);
    for (int k = 0; k < 3; ++k) {
        const double oracle = hormander_oracle(k, 1.0, 2.0);
        CHECK(v[0].integrals[k] == doctest::Approx(oracle).epsilon(2e-3));
        CHECK(v[1].integrals[k] == doctest::Approx(hormander_oracle(k, -0.01, 2.0)).epsilon(2e-3));
    }
}

TEST_CASE("Hormander integrals in two dimensions are finite and stable under refinement") {
    QuadratureConfig q;
    q.nodes_per_octave = 4;
    const auto a = check_hormander_integrals(2, 2.0, {{0.6, 0.8}}, q);
    const auto b = check_hormander_integrals(2, 2.0, {{0.6, 0.8}}, q.with_nodes_per_octave(8));
    for (int k = 0; k < 3; ++k) {
        CHECK(std::isfinite(a[0].integrals[k]));
        CHECK(a[0].integrals[k] > 0.0);
        CHECK(b[0].integrals[k] == doctest::Approx(a[0].integrals[k]).epsilon(0.02));
    }
}

TEST_CASE("Riesz potential of a constant equals the exact kernel integral in 1D") {
    const GridSpec s(1, 64, 2.0);
    const double gamma = 0.5;
    const auto out = riesz_potential(GridFunction::constant(s, 3.0), gamma);
    const double exact = 3.0 * 2.0 * std::pow(1.0, 1.0 - gamma) / (1.0 - gamma);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(out[i].real() == doctest::Approx(exact).epsilon(1e-12));
    CHECK_THROWS_AS(riesz_potential(GridFunction::constant(s, 1.0), 1.0), ParameterError);
}

TEST_CASE("Riesz potential of a constant in 2D") {
    const GridSpec s(2, 64, 1.0);
    const double gamma = 0.5;
    // int over [-1/2, 1/2]^2 of |y|^-gamma = 8 (1/2)^{2-gamma} / (2-gamma) int_0^{pi/4} cos^{gamma-2}
    double ang = 0.0;
    const int m = 2000;
    for (int i = 0; i < m; ++i) ang += std::pow(std::cos((i + 0.5) * (std::numbers::pi / 4) / m), gamma - 2.0);
    ang *= (std::numbers::pi / 4) / m;
    const double exact = 8.0 * std::pow(0.5, 2.0 - gamma) / (2.0 - gamma) * ang;
    const auto out = riesz_potential(GridFunction::constant(s, 1.0), gamma);
    CHECK(out[0].real() == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("HLS ratio: zero entries excluded, scale invariant, finite") {
    const auto base = make_corpus(3, CorpusFamily::gaussian_bump, 4, GridSpec(1, 128, 1.0));
    RatioParams p;
    p.p = 4.0 / 3.0;
    p.q = 4.0;
    p.gamma = 0.5;
    const auto ex = run_ratio_experiment(OperatorTag::hls, p, with_zero_entry(base), 1);
    CHECK(ex.records.size() == 4);
    REQUIRE(ex.excluded.size() == 1);
    CHECK(ex.excluded[0] == "zero");
    CHECK(std::isfinite(ex.max_ratio));
    CHECK(check_hls(1, p.p, p.q, p.gamma, scaled_corpus(base, 2.0)) ==
          doctest::Approx(check_hls(1, p.p, p.q, p.gamma, base)).epsilon(1e-12));
    CHECK_THROWS_AS(check_hls(1, 2.0, 4.0, 0.5, base), ParameterError);
}

TEST_CASE("theorem2 ratios are finite and stable under refinement") {
    const auto corpus = make_corpus(7, CorpusFamily::gaussian_bump, 6, GridSpec(1, 128, 1.0));
    RatioParams p;
    p.p = 2.0;
    p.q = 4.0;
    const auto st = run_refinement_study(OperatorTag::theorem2, p, corpus, 1);
    for (const auto& r : st.coarse.records) CHECK(std::isfinite(r.ratio));
    CHECK(st.fine.refined);
    CHECK(st.fine.spec.points_per_axis() == 256);
    CHECK(st.relative_change <= 0.10);
}

TEST_CASE("strong-norm difference ratio above the critical index is refinement stable") {
    const auto coarse = make_corpus(7, CorpusFamily::gaussian_bump, 4, GridSpec(1, 128, 1.0));
    const auto fine = coarse.resampled(GridSpec(1, 256, 1.0));
    auto max_ratio = [](const TestCorpus& c) {
        double m = 0.0;
        for (const auto& e : c.entries())
            m = std::max(m, lp_norm(d_sq(e.function, 0.3, 4.0), 2.0) / sobolev_norm(e.function, 0.3, 2.0));
        return m;
    };
    const double a = max_ratio(coarse), b = max_ratio(fine);
    CHECK(std::isfinite(a));
    CHECK(std::abs(b - a) / a <= 0.10);
}

TEST_CASE("theorem4 weak-type sup is finite") {
    const auto corpus = make_corpus(2, CorpusFamily::smooth_compact, 3, GridSpec(1, 64, 1.0));
    RatioParams p;
    p.p = 2.0;
    p.q = 4.0;
    p.nodes_per_octave = 8;
    const auto ex = run_ratio_experiment(OperatorTag::theorem4, p, corpus, 1);
    CHECK(ex.records.size() == 3);
    CHECK(std::isfinite(ex.max_ratio));
    CHECK(ex.max_ratio > 0.0);
}

TEST_CASE("ratio experiments do not depend on the thread count") {
    const auto corpus = make_corpus(5, CorpusFamily::band_limited, 6, GridSpec(1, 64, 1.0));
    RatioParams p;
    p.p = 2.0;
    p.q = 2.0;
    p.s = 0.5;
    const auto a = run_ratio_experiment(OperatorTag::theorem3, p, corpus, 1);
    const auto b = run_ratio_experiment(OperatorTag::theorem3, p, corpus, 4);
    CHECK(ratio_table_csv(a) == ratio_table_csv(b));
}

TEST_CASE("report status and determinism") {
    const auto empty = emit_report("none", {}, {});
    CHECK(empty.checks.empty());
    CHECK(empty.passed());
    const auto failing = emit_report("x", {}, {{"a", 0.1, 1.0, 0.0}, {"b", 2.0, 1.0, 0.0}});
    CHECK_FALSE(failing.passed());
    CHECK(report_json(failing).find("\"status\": \"fail\"") != std::string::npos);

    const auto corpus = make_corpus(1, CorpusFamily::gaussian_bump, 3, GridSpec(1, 64, 1.0));
    RatioParams p;
    p.p = 4.0 / 3.0;
    p.q = 4.0;
    const auto ex = run_ratio_experiment(OperatorTag::hls, p, corpus, 1);
    const auto r1 = emit_report("hls", {ex}, {{"c", 0.0, 1.0, 0.25}}, {{"seed", "1"}});
    const auto r2 = emit_report("hls", {ex}, {{"c", 0.0, 1.0, 0.75}}, {{"seed", "1"}});
    CHECK(report_json(r1) == report_json(r2));
    CHECK(report_json(r1, true) != report_json(r2, true));
    const std::string csv = ratio_table_csv(ex);
    CHECK(csv.rfind("label,lhs,rhs,ratio\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("identity suites pass for any corpus seed") {
    for (std::uint64_t seed : {1u, 12345u}) {
        SuiteConfig cfg;
        cfg.seed = seed;
        cfg.corpus_count = 5;
        for (const auto& name : expand_suite("identities")) {
            const auto r = run_suite(name, cfg);
            for (const auto& c : r.checks) CHECK_MESSAGE(c.passed(), c.name << " seed " << seed << " measured " << c.measured);
        }
    }
}

TEST_CASE("suite names") {
    CHECK(expand_suite("all").size() == suite_names().size());
    CHECK(expand_suite("geometry") == std::vector<std::string>{"maximal", "whitney", "cz"});
    CHECK(expand_suite("lp") == std::vector<std::string>{"lp"});
    CHECK_THROWS_AS(expand_suite("bogus"), ParameterError);
}
