#include "lpkit/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpkit/error.hpp"
#include "lpkit/special.hpp"
#include "spectral_ops.hpp"

namespace lpkit {
namespace {

double exp_splice(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

// Smoothstep of degree 2k+1 with k vanishing derivatives at both ends.
double poly_smoothstep(double u, int k) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double sum = 0.0;
    double binom_a = 1.0;  // C(k + i, i)
    for (int i = 0; i <= k; ++i) {
        if (i > 0) binom_a = binom_a * (k + i) / i;
        double binom_b = 1.0;  // C(2k + 1, k - i)
        for (int m = 0; m < k - i; ++m) binom_b = binom_b * (2 * k + 1 - m) / (m + 1);
        sum += binom_a * binom_b * std::pow(-u, i);
    }
    return std::pow(u, k + 1) * sum;
}

}  // namespace

PsiProfile::PsiProfile(int smoothness) : smoothness_(smoothness) {
    if (smoothness < 2) throw ParameterError("build_psi: smoothness must be >= 2");
}

double PsiProfile::cutoff(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double u = 2.0 - r;  // 1 at r = 1, 0 at r = 2
    return smoothness_ == infinite ? exp_splice(u) : poly_smoothstep(u, smoothness_);
}

double PsiProfile::dilated(int j, double r) const { return (*this)(std::ldexp(r, -j)); }

std::vector<double> PsiProfile::tabulate(double r_max, std::size_t samples) const {
    std::vector<double> out(samples);
    for (std::size_t i = 0; i < samples; ++i)
        out[i] = (*this)(r_max * static_cast<double>(i) / static_cast<double>(samples > 1 ? samples - 1 : 1));
    return out;
}

PsiProfile build_psi(int smoothness) { return PsiProfile(smoothness); }

GridFunction DyadicBlocks::sum() const {
    GridFunction acc = GridFunction::zeros(base.spec());
    if (!base.is_real()) acc = GridFunction(base.spec(), std::vector<Complex>(base.size()), false);
    for (const auto& b : blocks) acc = acc + b;
    return acc;
}

std::pair<int, int> dyadic_range(const GridSpec& spec) {
    const double L = spec.period();
    const double xi_min = 1.0 / L;
    const double half = static_cast<double>(spec.points_per_axis() / 2);
    const double xi_max = (spec.dim() == 2 ? std::sqrt(2.0) : 1.0) * half / L;
    return {static_cast<int>(std::floor(std::log2(xi_min))), static_cast<int>(std::ceil(std::log2(xi_max)))};
}

DyadicBlocks dyadic_blocks(const GridFunction& f, const PsiProfile& psi) {
    const auto [j0, j1] = dyadic_range(f.spec());
    const auto fhat = forward_transform(f);
    DyadicBlocks out{f, j0, j1, {}};
    out.blocks.reserve(static_cast<std::size_t>(j1 - j0 + 1));
    for (int j = j0; j <= j1; ++j)
        out.blocks.push_back(
            inverse_transform(fhat.multiplied([&psi, j](const Point&, double r) { return psi.dilated(j, r); }, true)));
    return out;
}

double tl_quasinorm(const GridFunction& f, double s, double p, double q, const PsiProfile& psi) {
    if (!(p > 0.0) || !(q > 0.0)) throw ParameterError("tl_quasinorm: p and q must be positive");
    detail::require_zero_mean(f, "tl_quasinorm");
    const auto blocks = dyadic_blocks(f, psi);
    std::vector<double> agg(f.size(), 0.0);
    std::vector<double> mx(f.size(), 0.0);
    // Accumulate with a running maximum so large q does not overflow.
    std::vector<std::vector<double>> mags;
    mags.reserve(blocks.blocks.size());
    for (int j = blocks.j_min; j <= blocks.j_max; ++j) {
        auto a = blocks.block(j).abs_values();
        const double w = std::exp2(j * s);
        for (std::size_t x = 0; x < a.size(); ++x) {
            a[x] *= w;
            mx[x] = std::max(mx[x], a[x]);
        }
        mags.push_back(std::move(a));
    }
    for (const auto& a : mags)
        for (std::size_t x = 0; x < a.size(); ++x)
            if (mx[x] > 0.0) agg[x] += std::pow(a[x] / mx[x], q);
    for (std::size_t x = 0; x < agg.size(); ++x) agg[x] = mx[x] * std::pow(agg[x], 1.0 / q);
    return lp_norm(agg, f.spec(), p);
}

GridFunction fractional_integral(const GridFunction& f, double s) {
    if (!std::isfinite(s)) throw ParameterError("fractional_integral: s must be finite");
    if (s < 0.0) detail::require_zero_mean(f, "fractional_integral");
    const auto fhat = forward_transform(f);
    return inverse_transform(
        fhat.multiplied([s](const Point&, double r) { return r == 0.0 ? 0.0 : std::pow(r, s); }, true));
}

double sobolev_norm(const GridFunction& f, double s, double p) { return lp_norm(fractional_integral(f, s), p); }

GridFunction frac_laplacian_singular(const GridFunction& f, double s, double split_radius) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("frac_laplacian_singular: s must lie in (0,1)");
    if (!(split_radius > 0.0)) throw ParameterError("frac_laplacian_singular: split_radius must be positive");
    if (!f.is_real()) throw ParameterError("frac_laplacian_singular: f must be real-valued");
    const GridSpec& spec = f.spec();
    const int n = spec.dim();
    const auto np = static_cast<std::int64_t>(spec.points_per_axis());
    const double h = spec.cell_width();
    const double L = spec.period();
    const double vol = spec.cell_volume();
    const double rho = split_radius;
    const double R = 3.0 * L;
    const auto dc = dimension_constants(n);

    // Fraction of the cell centred at offset y lying inside |y| < rho.
    auto inner_fraction = [&](double y0, double y1) {
        if (n == 1) {
            const double a = std::abs(y0) - h / 2, b = std::abs(y0) + h / 2;
            return std::clamp((rho - a) / (b - a), 0.0, 1.0);
        }
        const double r = std::hypot(y0, y1);
        const double reach = h * std::numbers::sqrt2 / 2;
        if (r + reach <= rho) return 1.0;
        if (r - reach >= rho) return 0.0;
        constexpr int sub = 16;
        int inside = 0;
        for (int a = 0; a < sub; ++a)
            for (int b = 0; b < sub; ++b) {
                const double p0 = y0 + h * ((a + 0.5) / sub - 0.5);
                const double p1 = y1 + h * ((b + 0.5) / sub - 0.5);
                if (p0 * p0 + p1 * p1 < rho * rho) ++inside;
            }
        return static_cast<double>(inside) / (sub * sub);
    };

    // Periodized kernel |y|^{-n-s} h^n over 0 < |y| <= R, and the discrete mass of the inner part.
    std::vector<double> kernel(spec.size(), 0.0);
    double inner_mass = 0.0;
    const auto reach = static_cast<std::int64_t>(std::floor(R / h));
    const std::int64_t lo1 = n == 2 ? -reach : 0, hi1 = n == 2 ? reach : 0;
    for (std::int64_t m0 = -reach; m0 <= reach; ++m0) {
        for (std::int64_t m1 = lo1; m1 <= hi1; ++m1) {
            if (m0 == 0 && m1 == 0) continue;
            const double y0 = static_cast<double>(m0) * h, y1 = static_cast<double>(m1) * h;
            const double r = std::hypot(y0, y1);
            if (r > R) continue;
            const double w = std::pow(r, -n - s) * vol;
            const auto i0 = static_cast<std::size_t>(((m0 % np) + np) % np);
            const auto i1 = static_cast<std::size_t>(((m1 % np) + np) % np);
            kernel[spec.flat_index(i0, i1)] += w;
            if (r < rho + h) inner_mass += inner_fraction(y0, y1) * w;
        }
    }

    // sum_y f(x + y) K(y) is a correlation; K is even so the convolution theorem applies directly.
    const auto fhat = forward_transform(f);
    const auto khat = forward_transform(GridFunction(spec, kernel));
    std::vector<Complex> prod(fhat.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fhat[i] * khat[i] / vol;
    const auto conv = inverse_transform(Spectrum(spec, std::move(prod), true));

    const double outer_mass = dc.omega_nm1 * std::pow(rho, -s) / s;
    const double r_tail = n == 1 ? R + h / 2 : R;
    const double tail = f.mean().real() * dc.omega_nm1 * std::pow(r_tail, -s) / s;
    const double pre = gamma((s + n) / 2.0) / std::pow(std::numbers::pi, s + n / 2.0);

    std::vector<double> out(f.size());
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = pre * (conv[x].real() - f[x].real() * (inner_mass + outer_mass) + tail);
    return GridFunction(spec, std::move(out));
}

GridFunction pfs_maximal(const GridFunction& fj, int j, double r) {
    if (!(r > 0.0)) throw ParameterError("pfs_maximal: r must be positive");
    const GridSpec& spec = fj.spec();
    const std::size_t N = spec.size();
    const double expo = spec.dim() / r;
    const double scale = std::ldexp(1.0, j + 1);
    std::vector<double> weight(N);
    for (std::size_t z = 0; z < N; ++z) weight[z] = std::pow(1.0 + scale * spec.offset_norm(z), -expo);
    const auto a = fj.abs_values();
    const std::size_t n = spec.points_per_axis();
    std::vector<double> out(N, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
        const auto [x0, x1] = spec.multi_index(x);
        double best = 0.0;
        for (std::size_t z = 0; z < N; ++z) {
            const auto [z0, z1] = spec.multi_index(z);
            const std::size_t y = spec.flat_index((x0 + n - z0) % n, (x1 + n - z1) % n);
            best = std::max(best, a[y] * weight[z]);
        }
        out[x] = best;
    }
    return GridFunction(spec, std::move(out));
}

}  // namespace lpkit
