#include "lpkit/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "laplace_quadrature.hpp"
#include "lpkit/error.hpp"
#include "lpkit/special.hpp"
#include "spectral_ops.hpp"

namespace lpkit {

namespace detail {

Spectrum apply_multiplier(const Spectrum& fhat, const SlotMultiplier& m, bool preserves_real) {
    const GridSpec& spec = fhat.spec();
    const std::size_t n = spec.points_per_axis();
    std::vector<Complex> out(fhat.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto idx = spec.multi_index(i);
        const std::array<bool, 2> nyq{idx[0] == n / 2, spec.dim() == 2 && idx[1] == n / 2};
        const Point xi = spec.frequency(i);
        out[i] = fhat[i] * m(xi, std::hypot(xi[0], xi[1]), nyq);
    }
    return Spectrum(spec, std::move(out), fhat.from_real() && preserves_real);
}

Complex derivative_symbol(const Point& xi, const std::array<bool, 2>& nyq, int axis) {
    if (nyq[axis]) return {0.0, 0.0};
    return {0.0, 2.0 * std::numbers::pi * xi[axis]};
}

void require_zero_mean(const GridFunction& f, std::string_view where) {
    const double mu = std::abs(f.mean());
    if (mu > 1e-12 * f.max_abs())
        throw PreconditionError(std::string(where) + ": input must have zero mean (|mean| = " + std::to_string(mu) +
                                ")");
}

}  // namespace detail

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Second derivatives d_a d_b P(f; ., t) for a <= b over the n + 1 variables, in
// row-major upper-triangular order.
std::vector<GridFunction> hessian_at(const Spectrum& fhat, double t) {
    const int n = fhat.spec().dim();
    std::vector<GridFunction> out;
    for (int a = 0; a <= n; ++a) {
        for (int b = a; b <= n; ++b) {
            auto m = [=](const Point& xi, double r, const std::array<bool, 2>& nyq) {
                auto factor = [&](int axis) -> Complex {
                    if (axis == n) return -kTwoPi * r;
                    return detail::derivative_symbol(xi, nyq, axis);
                };
                return factor(a) * factor(b) * std::exp(-kTwoPi * t * r);
            };
            out.push_back(inverse_transform(detail::apply_multiplier(fhat, m, true)));
        }
    }
    return out;
}

}  // namespace

GridFunction poisson_extend(const GridFunction& f, double t) {
    if (!(t > 0.0)) throw ParameterError("poisson_extend: t must be positive");
    const auto fhat = forward_transform(f);
    return inverse_transform(fhat.multiplied([t](const Point&, double r) { return std::exp(-kTwoPi * t * r); }, true));
}

std::size_t HalfSpaceField::component_count() const {
    std::size_t c = 0;
    for (const auto& v : components) c += v.size();
    return c;
}

std::vector<GridFunction> gradient_at(const Spectrum& fhat, double t) {
    const int n = fhat.spec().dim();
    std::vector<GridFunction> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k < n; ++k) {
        auto m = [=](const Point& xi, double r, const std::array<bool, 2>& nyq) {
            return detail::derivative_symbol(xi, nyq, k) * std::exp(-kTwoPi * t * r);
        };
        out.push_back(inverse_transform(detail::apply_multiplier(fhat, m, true)));
    }
    out.push_back(inverse_transform(
        fhat.multiplied([t](const Point&, double r) { return -kTwoPi * r * std::exp(-kTwoPi * t * r); }, true)));
    return out;
}

HalfSpaceField gradient_field(const GridFunction& f, const QuadratureConfig& quad, bool with_extension) {
    const auto q = LogQuadrature::build(quad);
    const auto fhat = forward_transform(f);
    HalfSpaceField field{f.spec(), q.nodes, {}, std::nullopt};
    field.components.reserve(q.nodes.size());
    if (with_extension) field.extension.emplace();
    for (double t : q.nodes) {
        field.components.push_back(gradient_at(fhat, t));
        if (with_extension)
            field.extension->push_back(
                inverse_transform(fhat.multiplied([t](const Point&, double r) { return std::exp(-kTwoPi * t * r); }, true)));
    }
    return field;
}

double kernel_space_domain(int n, int k, const Point& x, double t) {
    if (!(t > 0.0)) throw ParameterError("kernel_space_domain: t must be positive");
    if (k < 1 || k > n + 1) throw ParameterError("kernel_space_domain: k must lie in 1..n+1");
    const double c0 = dimension_constants(n).c0;
    const double r2 = x[0] * x[0] + (n == 2 ? x[1] * x[1] : 0.0);
    const double base = t * t + r2;
    const double np1 = n + 1.0;
    if (k <= n) return -np1 * c0 * t * x[k - 1] / std::pow(base, (n + 3.0) / 2.0);
    return c0 / std::pow(base, np1 / 2.0) - c0 * np1 * t * t / std::pow(base, (n + 3.0) / 2.0);
}

SubharmonicResult check_subharmonic(const GridFunction& f, double q, const SubharmonicOptions& options) {
    if (!f.is_real()) throw ParameterError("check_subharmonic: f must be real-valued");
    const GridSpec& spec = f.spec();
    const int n = spec.dim();
    if (!(q >= (n - 1.0) / n) || !std::isfinite(q))
        throw ParameterError("check_subharmonic: q must satisfy q >= (n-1)/n");
    const double L = spec.period();
    const double h = spec.cell_width();
    const double t_lo = options.t_lo > 0.0 ? options.t_lo : L / 64.0;
    const double t_hi = options.t_hi > 0.0 ? options.t_hi : L / 4.0;
    if (!(t_hi > t_lo + 2.0 * h)) throw ParameterError("check_subharmonic: t window must span at least 3 grid steps");
    const auto levels = static_cast<std::size_t>(std::floor((t_hi - t_lo) / h)) + 1;
    const std::size_t N = spec.size();
    const auto fhat = forward_transform(f);

    SubharmonicResult res;
    res.min_laplacian = std::numeric_limits<double>::infinity();

    if (options.scheme == LaplacianScheme::spectral) {
        // Delta |G|^q = q |G|^{q-2} (|H|_F^2 + (q - 2) |H G|^2 / |G|^2) for the harmonic gradient G.
        for (std::size_t j = 0; j < levels; ++j) {
            const double t = t_lo + static_cast<double>(j) * h;
            const auto g = gradient_at(fhat, t);
            const auto hs = hessian_at(fhat, t);
            const int m = n + 1;
            auto hidx = [m](int a, int b) {
                if (a > b) std::swap(a, b);
                return static_cast<std::size_t>(a * m - a * (a - 1) / 2 + (b - a));
            };
            for (std::size_t x = 0; x < N; ++x) {
                double g2 = 0.0;
                for (int a = 0; a < m; ++a) g2 += g[a][x].real() * g[a][x].real();
                if (g2 == 0.0) {
                    if (q >= 2.0) res.min_laplacian = std::min(res.min_laplacian, 0.0);
                    continue;
                }
                double frob = 0.0, hg2 = 0.0;
                for (int a = 0; a < m; ++a) {
                    double row = 0.0;
                    for (int b = 0; b < m; ++b) {
                        const double hab = hs[hidx(a, b)][x].real();
                        frob += hab * hab;
                        row += hab * g[b][x].real();
                    }
                    hg2 += row * row;
                }
                const double pref = q * std::pow(g2, (q - 2.0) / 2.0);
                const double val = pref * (frob + (q - 2.0) * hg2 / g2);
                const double mag = pref * (frob + std::abs(q - 2.0) * hg2 / g2);
                res.min_laplacian = std::min(res.min_laplacian, val);
                res.scale = std::max(res.scale, mag);
                ++res.nodes;
            }
        }
        res.slack = 1e-8 * res.scale;
        if (!std::isfinite(res.min_laplacian)) res.min_laplacian = 0.0;
        return res;
    }

    // Stencil scheme: F = |G|^q on levels t_lo + j h, Laplacian at interior levels.
    std::vector<std::vector<double>> F(levels, std::vector<double>(N));
    for (std::size_t j = 0; j < levels; ++j) {
        const auto g = gradient_at(fhat, t_lo + static_cast<double>(j) * h);
        for (std::size_t x = 0; x < N; ++x) {
            double g2 = 0.0;
            for (const auto& comp : g) g2 += comp[x].real() * comp[x].real();
            F[j][x] = std::pow(g2, q / 2.0);
        }
    }
    const auto np = static_cast<std::int64_t>(spec.points_per_axis());
    auto neighbor = [&](std::size_t x, int axis, std::int64_t d) {
        auto idx = spec.multi_index(x);
        idx[axis] = static_cast<std::size_t>(((static_cast<std::int64_t>(idx[axis]) + d) % np + np) % np);
        return spec.flat_index(idx[0], idx[1]);
    };
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t j = 1; j + 1 < levels; ++j) {
        for (std::size_t x = 0; x < N; ++x) {
            const double c = F[j][x];
            double sum = F[j - 1][x] + F[j + 1][x] - 2.0 * c;
            double mag = F[j - 1][x] + F[j + 1][x] + 2.0 * c;
            for (int axis = 0; axis < n; ++axis) {
                const double a = F[j][neighbor(x, axis, -1)];
                const double b = F[j][neighbor(x, axis, 1)];
                sum += a + b - 2.0 * c;
                mag += a + b + 2.0 * c;
            }
            res.min_laplacian = std::min(res.min_laplacian, sum * inv_h2);
            res.scale = std::max(res.scale, mag * inv_h2);
            ++res.nodes;
        }
    }
    res.slack = (h / L) * res.scale;
    return res;
}

double check_subordination(const GridFunction& f, double s, double t, const QuadratureConfig& quad) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("check_subordination: s must lie in (0,1)");
    if (!(t > 0.0)) throw ParameterError("check_subordination: t must be positive");
    detail::require_zero_mean(f, "check_subordination");
    const auto q = LogQuadrature::build(quad);
    const auto fhat = forward_transform(f);
    auto extension = [](double tt) {
        return [tt](const Point&, double r) { return Complex(r == 0.0 ? 0.0 : std::exp(-kTwoPi * tt * r), 0.0); };
    };
    const auto lhs = inverse_transform(fhat.multiplied(extension(t), true));

    const auto is_hat = fhat.multiplied([s](const Point&, double r) { return r == 0.0 ? 0.0 : std::pow(r, s); }, true);
    const double pre = std::pow(kTwoPi, s) / gamma(s);

    // Midpoint sum over [t_min, t_max] of P(I_s f; ., t + r) r^{s-1}.
    std::vector<Complex> acc(f.size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double r = q.nodes[i];
        const auto field = inverse_transform(is_hat.multiplied(extension(t + r), true));
        const double w = q.weights[i] * std::pow(r, s - 1.0);
        for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += w * field[x];
    }
    // Head, tail and midpoint end corrections act mode by mode.
    const auto corr = inverse_transform(is_hat.multiplied(
        [&](const Point&, double r) {
            if (r == 0.0) return Complex(0.0, 0.0);
            return Complex(std::exp(-kTwoPi * t * r) * detail::laplace_endpoint_corrections(kTwoPi * r, s, q), 0.0);
        },
        true));
    for (std::size_t x = 0; x < acc.size(); ++x) acc[x] = pre * (acc[x] + corr[x]);
    const GridFunction rhs(f.spec(), std::move(acc), f.is_real());

    const double denom = lp_norm(lhs, 2.0);
    if (denom == 0.0) return 0.0;
    return lp_norm(lhs - rhs, 2.0) / denom;
}

}  // namespace lpkit
