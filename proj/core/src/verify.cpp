#include "lpkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lpkit/error.hpp"
#include "lpkit/littlewood_paley.hpp"
#include "lpkit/parallel.hpp"
#include "lpkit/square_functions.hpp"

namespace lpkit {

namespace {

constexpr double kTol = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= kTol * std::max({1.0, std::abs(a), std::abs(b)}); }

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError("ratio experiment: requires " + what);
}

double critical_s(int n, double p, double q) { return n * (1.0 / p - 1.0 / q); }

// sup over a 16-level logarithmic ladder in [0.01, 1] * max of alpha * |{op > alpha}|^{1/p}.
double weak_ladder(const GridFunction& op, double p) {
    const std::vector<double> v = op.abs_values();
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top > 0.0)) return 0.0;
    double best = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double alpha = top * std::pow(10.0, -2.0 * (1.0 - i / 15.0));
        best = std::max(best, alpha * std::pow(distribution_measure(v, op.spec(), alpha), 1.0 / p));
    }
    return best;
}

}  // namespace

std::string_view to_string(OperatorTag tag) {
    switch (tag) {
        case OperatorTag::theorem2: return "theorem2";
        case OperatorTag::theorem3: return "theorem3";
        case OperatorTag::corollary1: return "corollary1";
        case OperatorTag::theorem4: return "theorem4";
        case OperatorTag::theorem5: return "theorem5";
        case OperatorTag::hls: return "hls";
    }
    return "unknown";
}

OperatorTag parse_operator_tag(std::string_view name) {
    for (auto t : {OperatorTag::theorem2, OperatorTag::theorem3, OperatorTag::corollary1, OperatorTag::theorem4,
                   OperatorTag::theorem5, OperatorTag::hls})
        if (to_string(t) == name) return t;
    throw ParameterError("unknown operator tag '" + std::string(name) + "'");
}

RatioParams resolve_ratio_params(OperatorTag tag, const RatioParams& in, int n) {
    RatioParams r = in;
    require(std::isfinite(r.p) && r.p > 0.0, "0 < p < inf");
    require(std::isfinite(r.q) && r.q > 0.0, "0 < q < inf");
    require(r.nodes_per_octave >= 4, "nodes_per_octave >= 4");
    const double sc = critical_s(n, r.p, r.q);
    auto derived_s = [&] {
        require(std::isnan(r.s) || close(r.s, sc), "s = n(1/p - 1/q)");
        r.s = sc;
    };
    switch (tag) {
        case OperatorTag::theorem2:
            require(1.0 < r.p && r.p < r.q, "1 < p < q");
            require(r.q >= 2.0, "q >= 2");
            derived_s();
            require(0.0 < r.s && r.s < 1.0, "0 < s = n(1/p - 1/q) < 1");
            break;
        case OperatorTag::theorem3:
            require(std::isfinite(r.s), "an explicit s");
            require(std::abs(r.s) < 1.0, "|s| < 1");
            break;
        case OperatorTag::corollary1:
            require(std::isnan(r.s) || r.s == 0.0, "s = 0");
            r.s = 0.0;
            break;
        case OperatorTag::theorem4:
            require(r.lambda > 1.0, "lambda > 1");
            require(close(r.lambda, r.q / r.p), "lambda = q/p");
            require(0.0 < sc && sc < 1.0, "0 < n(1/p - 1/q) < 1");
            if (std::isnan(r.s)) r.s = sc;
            break;
        case OperatorTag::theorem5:
            derived_s();
            require(0.0 < r.s && r.s < 1.0, "0 < s = n(1/p - 1/q) < 1");
            break;
        case OperatorTag::hls:
            require(0.0 < r.gamma && r.gamma < n, "0 < gamma < n");
            require(1.0 < r.p && r.p < r.q, "1 < p < q");
            require(close(1.0 / r.q, 1.0 / r.p - (n - r.gamma) / n), "1/q = 1/p - (n - gamma)/n");
            break;
    }
    return r;
}

void RatioExperiment::summarize() {
    std::vector<double> r;
    for (const auto& rec : records) r.push_back(rec.ratio);
    max_ratio = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    if (r.empty()) {
        median_ratio = 0.0;
        return;
    }
    std::sort(r.begin(), r.end());
    const std::size_t m = r.size() / 2;
    median_ratio = r.size() % 2 ? r[m] : 0.5 * (r[m - 1] + r[m]);
}

GridFunction riesz_potential(const GridFunction& f, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("riesz_potential: gamma must be positive");
    const GridSpec& spec = f.spec();
    const int n = spec.dim();
    if (gamma >= n) throw ParameterError("riesz_potential: gamma must be below the dimension");
    const double h = spec.cell_width();
    // Cell averages of |y|^{-gamma}: exact in 1D, midpoint off the origin in 2D.
    // The self cell is integrated analytically so the singular part is not lost.
    std::vector<Complex> k(spec.size(), 0.0);
    if (n == 1) {
        auto prim = [gamma](double y) { return std::pow(y, 1.0 - gamma) / (1.0 - gamma); };
        k[0] = 2.0 * prim(0.5 * h) / h;
        const double half = 0.5 * spec.period();
        for (std::size_t m = 1; m < spec.size(); ++m) {
            const double c = spec.offset_norm(m);
            // the offset L/2 stands for both images, each contributing the half cell inside [-L/2, L/2]
            k[m] = c + 0.5 * h > half ? 2.0 * (prim(half) - prim(c - 0.5 * h)) / h
                                      : (prim(c + 0.5 * h) - prim(c - 0.5 * h)) / h;
        }
    } else {
        // 8 int_0^{pi/4} int_0^{h/(2 cos th)} r^{1-gamma} dr dth over the square of side h.
        auto ang = [gamma](double th) { return std::pow(std::cos(th), gamma - 2.0); };
        const double a = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ang, 0.0, std::numbers::pi / 4.0);
        k[0] = 8.0 / (2.0 - gamma) * std::pow(0.5 * h, 2.0 - gamma) * a / (h * h);
        for (std::size_t m = 1; m < spec.size(); ++m) k[m] = std::pow(spec.offset_norm(m), -gamma);
    }
    const Spectrum fk = forward_transform(f);
    const Spectrum kk = forward_transform(GridFunction(spec, std::move(k), true));
    std::vector<Complex> prod(spec.size());
    for (std::size_t m = 0; m < prod.size(); ++m) prod[m] = fk[m] * kk[m];
    return inverse_transform(Spectrum(spec, std::move(prod), f.is_real()));
}

double check_hls(int n, double p, double q, double gamma, const TestCorpus& corpus) {
    if (corpus.spec().dim() != n) throw ParameterError("check_hls: corpus dimension differs from n");
    RatioParams params;
    params.p = p;
    params.q = q;
    params.gamma = gamma;
    return run_ratio_experiment(OperatorTag::hls, params, corpus, 1).max_ratio;
}

RatioExperiment run_ratio_experiment(OperatorTag tag, const RatioParams& params, const TestCorpus& corpus,
                                     unsigned jobs) {
    const GridSpec& spec = corpus.spec();
    const int n = spec.dim();
    RatioExperiment ex;
    ex.tag = tag;
    ex.params = resolve_ratio_params(tag, params, n);
    ex.spec = spec;
    ex.corpus_seed = corpus.seed();
    ex.corpus_family = std::string(to_string(corpus.family()));
    const RatioParams& P = ex.params;
    const QuadratureConfig quad = QuadratureConfig::defaults_for(spec).with_nodes_per_octave(P.nodes_per_octave);
    const PsiProfile psi = build_psi();

    const auto& entries = corpus.entries();
    std::vector<std::pair<double, double>> sides(entries.size());
    parallel_for(entries.size(), jobs, [&](std::size_t i) {
        const GridFunction& f = entries[i].function;
        double lhs = 0.0, rhs = 0.0;
        switch (tag) {
            case OperatorTag::theorem2:
                lhs = weak_lp_quasinorm(d_sq(f, P.s, P.q), P.p);
                rhs = sobolev_norm(f, P.s, P.p);
                break;
            case OperatorTag::theorem3:
                lhs = lp_norm(g_sq(f, P.s, P.q, quad), P.p);
                rhs = tl_quasinorm(f, P.s, P.p, P.q, psi);
                break;
            case OperatorTag::corollary1:
                lhs = lp_norm(g_sq(f, 0.0, P.q, quad), P.p);
                rhs = tl_quasinorm(f, 0.0, P.p, 2.0, psi);
                break;
            case OperatorTag::theorem4:
                lhs = weak_ladder(big_g(f, P.lambda, P.q, quad), P.p);
                rhs = lp_norm(f, P.p);
                break;
            case OperatorTag::theorem5:
                lhs = weak_ladder(big_r(f, P.s, P.q, quad), P.p);
                rhs = lp_norm(f, P.p);
                break;
            case OperatorTag::hls:
                lhs = lp_norm(riesz_potential(f, P.gamma), P.q);
                rhs = lp_norm(f, P.p);
                break;
        }
        sides[i] = {lhs, rhs};
    });

    double scale = 0.0;
    for (const auto& [l, r] : sides)
        if (std::isfinite(r)) scale = std::max(scale, r);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto [lhs, rhs] = sides[i];
        if (!(rhs > kTol * scale) || !std::isfinite(rhs)) {
            ex.excluded.push_back(entries[i].label);
            continue;
        }
        ex.records.push_back({entries[i].label, lhs, rhs, lhs / rhs});
    }
    ex.summarize();
    return ex;
}

RefinementStudy run_refinement_study(OperatorTag tag, const RatioParams& params, const TestCorpus& corpus,
                                     unsigned jobs) {
    RefinementStudy st;
    st.coarse = run_ratio_experiment(tag, params, corpus, jobs);
    st.fine = run_ratio_experiment(tag, params, corpus.resampled(corpus.spec().refined()), jobs);
    st.fine.refined = true;
    st.relative_change = st.coarse.max_ratio > 0.0
                             ? std::abs(st.fine.max_ratio - st.coarse.max_ratio) / st.coarse.max_ratio
                             : std::numeric_limits<double>::infinity();
    return st;
}

std::vector<HormanderValues> check_hormander_integrals(int n, double beta, const std::vector<Point>& sample_xs,
                                                       const QuadratureConfig& quad) {
    if (n != 1 && n != 2) throw ParameterError("check_hormander_integrals: n must be 1 or 2");
    if (!(beta > 1.0) || !std::isfinite(beta)) throw ParameterError("check_hormander_integrals: beta must exceed 1");
    if (quad.nodes_per_octave < 4) throw ParameterError("check_hormander_integrals: nodes_per_octave must be >= 4");
    const int npo = quad.nodes_per_octave;
    const double ln2 = std::numbers::ln2;
    const double e1 = (n + 3) / 2.0, e2 = (n + 1) / 2.0;

    std::vector<HormanderValues> out;
    for (const Point& x0 : sample_xs) {
        Point x = x0;
        if (n == 1) x[1] = 0.0;
        const double ax = std::hypot(x[0], x[1]);
        HormanderValues hv{x, {0.0, 0.0, 0.0}};
        if (ax == 0.0) {
            out.push_back(hv);
            continue;
        }
        // t in [2^-30, 2^40] |x|, |y| in [beta, 2^34 beta] |x|.
        const int mt = 70 * npo, mr = 34 * npo, ma = n == 2 ? 8 * npo : 2;
        const double du = ln2 / npo;
        std::vector<double> ts(mt);
        for (int i = 0; i < mt; ++i) ts[i] = ax * std::exp((i + 0.5) * du - 30.0 * ln2);

        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (int ir = 0; ir < mr; ++ir) {
            const double r = beta * ax * std::exp((ir + 0.5) * du);
            const double wr = std::pow(r, n) * du;
            for (int ia = 0; ia < ma; ++ia) {
                double y0, y1, wa;
                if (n == 1) {
                    y0 = ia == 0 ? r : -r;
                    y1 = 0.0;
                    wa = 1.0;
                } else {
                    const double th = 2.0 * std::numbers::pi * (ia + 0.5) / ma;
                    y0 = r * std::cos(th);
                    y1 = r * std::sin(th);
                    wa = 2.0 * std::numbers::pi / ma;
                }
                const double d0 = y0 - x[0], d1 = y1 - x[1];
                const double ry2 = y0 * y0 + y1 * y1, rd2 = d0 * d0 + d1 * d1;
                std::array<double, 3> inner{0.0, 0.0, 0.0};
                for (double t : ts) {
                    const double t2 = t * t;
                    const double ay = std::pow(t2 + ry2, -e1), ad = std::pow(t2 + rd2, -e1);
                    const double by = std::pow(t2 + ry2, -e2), bd = std::pow(t2 + rd2, -e2);
                    inner[0] += t * std::abs(t * d0 * ad - t * y0 * ay);
                    inner[1] += t * std::abs(bd - by);
                    inner[2] += t * std::abs(t2 * ad - t2 * ay);
                }
                for (int k = 0; k < 3; ++k) acc[k] += inner[k] * du * wr * wa;
            }
        }
        hv.integrals = acc;
        out.push_back(hv);
    }
    return out;
}

bool VerificationReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    for (const auto& e : experiments)
        if (!std::isfinite(e.max_ratio)) return false;
    return true;
}

VerificationReport emit_report(std::string suite, std::vector<RatioExperiment> experiments,
                               std::vector<IdentityCheck> identity_checks, std::map<std::string, std::string> environment) {
    VerificationReport r;
    r.suite = std::move(suite);
    r.experiments = std::move(experiments);
    r.checks = std::move(identity_checks);
    r.environment = std::move(environment);
    for (auto& e : r.experiments) e.summarize();
    return r;
}

}  // namespace lpkit
