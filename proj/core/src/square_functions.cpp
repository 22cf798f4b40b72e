#include "lpkit/square_functions.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "lpkit/error.hpp"
#include "lpkit/poisson.hpp"
#include "spectral_ops.hpp"

namespace lpkit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_q(double q, const char* where) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError(std::string(where) + ": q must be positive");
}

std::vector<double> gradient_power(const Spectrum& fhat, double t, double q) {
    const auto g = gradient_at(fhat, t);
    std::vector<double> out(fhat.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
        double g2 = 0.0;
        for (const auto& c : g) g2 += std::norm(c[x]);
        out[x] = std::pow(g2, q / 2.0);
    }
    return out;
}

// Tail beyond t_max from the e^{-2 pi q t / L} envelope of the last node's integrand.
double envelope_tail(double last_value, double t_last, double t_max, double q, double period) {
    const double b = kTwoPi * q / period;
    return last_value * std::exp(-b * (t_max - t_last)) / b;
}

GridFunction finish(const GridSpec& spec, std::vector<double>& acc, double q) {
    for (auto& v : acc) v = std::pow(std::max(v, 0.0), 1.0 / q);
    return GridFunction(spec, std::move(acc));
}

}  // namespace

void SquareFnParams::validate() const {
    require_q(q, "SquareFnParams");
    if (!(p > 0.0)) throw ParameterError("SquareFnParams: p must be positive");
    if (!(lambda > 1.0)) throw ParameterError("SquareFnParams: lambda must exceed 1");
    if (y_truncation != 1.0) throw ParameterError("SquareFnParams: only one-period spatial truncation is supported");
    quad.validate();
}

GridFunction d_sq(const GridFunction& f, double s, double q) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("d_sq: s must lie in (0,1)");
    require_q(q, "d_sq");
    const GridSpec& spec = f.spec();
    const std::size_t N = spec.size();
    const std::size_t n = spec.points_per_axis();
    const double vol = spec.cell_volume();
    std::vector<double> weight(N, 0.0);
    for (std::size_t z = 1; z < N; ++z) weight[z] = std::pow(spec.offset_norm(z), -spec.dim() - s * q) * vol;
    std::vector<double> acc(N, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
        const auto [x0, x1] = spec.multi_index(x);
        double sum = 0.0;
        for (std::size_t z = 1; z < N; ++z) {
            const auto [z0, z1] = spec.multi_index(z);
            const std::size_t y = spec.flat_index((x0 + z0) % n, (x1 + z1) % n);
            sum += std::pow(std::abs(f[y] - f[x]), q) * weight[z];
        }
        acc[x] = sum;
    }
    return finish(spec, acc, q);
}

GridFunction g_sq(const GridFunction& f, double s, double q, const QuadratureConfig& quad, SquareFnDiagnostics* diag) {
    require_q(q, "g_sq");
    const double c = q - s * q;
    if (!(c > 0.0)) throw ParameterError("g_sq: requires q - s q > 0");
    detail::require_zero_mean(f, "g_sq");
    const GridSpec& spec = f.spec();
    const auto qr = LogQuadrature::build(quad);
    const auto fhat = forward_transform(f);
    const std::size_t N = spec.size();
    const std::size_t m = qr.nodes.size();

    std::vector<double> body(N, 0.0), first, second, last;
    for (std::size_t i = 0; i < m; ++i) {
        const double t = qr.nodes[i];
        auto F = gradient_power(fhat, t, q);
        const double w = qr.weights[i] * std::pow(t, c - 1.0);
        for (std::size_t x = 0; x < N; ++x) body[x] += w * F[x];
        if (i == 0) first = F;
        if (i == 1) second = F;
        if (i + 1 == m) last = std::move(F);
    }

    const double t0 = qr.edges.front(), t1 = qr.nodes[0], t2 = qr.nodes[1];
    std::vector<double> acc(N);
    SquareFnDiagnostics d;
    for (std::size_t x = 0; x < N; ++x) {
        // Linear extrapolation of |grad P|^q from the first two nodes down to t = 0.
        const double slope = (second[x] - first[x]) / (t2 - t1);
        const double a0 = std::max(first[x] - slope * t1, 0.0);
        const double head = a0 * std::pow(t0, c) / c + slope * std::pow(t0, c + 1.0) / (c + 1.0);
        const double tail =
            envelope_tail(last[x] * std::pow(qr.nodes.back(), c - 1.0), qr.nodes.back(), qr.edges.back(), q, spec.period());
        acc[x] = body[x] + std::max(head, 0.0) + tail;
        d.head_max = std::max(d.head_max, std::abs(head));
        d.tail_max = std::max(d.tail_max, tail);
        d.body_max = std::max(d.body_max, body[x]);
    }
    if (diag) *diag = d;
    return finish(spec, acc, q);
}

GridFunction big_g(const GridFunction& f, double lambda, double q, const QuadratureConfig& quad,
                   SquareFnDiagnostics* diag) {
    if (!(lambda > 1.0)) throw ParameterError("big_g: lambda must exceed 1");
    require_q(q, "big_g");
    detail::require_zero_mean(f, "big_g");
    const GridSpec& spec = f.spec();
    const int n = spec.dim();
    const double h = spec.cell_width();
    const double vol = spec.cell_volume();
    const double ln = lambda * n;
    const auto qr = LogQuadrature::build(quad);
    const auto fhat = forward_transform(f);
    const std::size_t N = spec.size();
    std::vector<double> dist(N);
    for (std::size_t z = 0; z < N; ++z) dist[z] = spec.offset_norm(z);

    // Integral of the cone weight over the self cell (an equal-area disc in 2D).
    auto self_weight = [&](double t) {
        if (n == 1) return 2.0 * std::pow(t, lambda) * (std::pow(t + h / 2, 1.0 - lambda) - std::pow(t, 1.0 - lambda)) /
                           (1.0 - lambda);
        const double a = h / std::sqrt(std::numbers::pi);
        auto integrand = [&](double r) { return std::pow(t / (t + r), ln) * kTwoPi * r; };
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, a, 12, 1e-12);
    };

    std::vector<double> body(N, 0.0), first, last;
    std::vector<double> weights(N);
    for (std::size_t i = 0; i < qr.nodes.size(); ++i) {
        const double t = qr.nodes[i];
        const auto F = gradient_power(fhat, t, q);
        for (std::size_t z = 0; z < N; ++z) weights[z] = std::pow(t / (t + dist[z]), ln) * vol;
        weights[0] = self_weight(t);
        const auto Fh = forward_transform(GridFunction(spec, F));
        const auto Wh = forward_transform(GridFunction(spec, weights));
        std::vector<Complex> prod(N);
        for (std::size_t k = 0; k < N; ++k) prod[k] = Fh[k] * Wh[k] / vol;
        const auto conv = inverse_transform(Spectrum(spec, std::move(prod), true));
        const double w = qr.weights[i] * std::pow(t, q - n - 1.0);
        for (std::size_t x = 0; x < N; ++x) body[x] += w * conv[x].real();
        if (i == 0) first = F;
        if (i + 1 == qr.nodes.size()) last = conv.real_values();
    }

    // Below t_min only the self cell carries weight, which grows like c_self t^n.
    const double c_self = n == 1 ? 2.0 / (lambda - 1.0) : kTwoPi / ((2.0 * lambda - 1.0) * (2.0 * lambda - 2.0));
    const double t0 = qr.edges.front();
    std::vector<double> acc(N);
    SquareFnDiagnostics d;
    for (std::size_t x = 0; x < N; ++x) {
        const double head = first[x] * c_self * std::pow(t0, q) / q;
        const double tail = envelope_tail(last[x] * std::pow(qr.nodes.back(), q - n - 1.0), qr.nodes.back(),
                                          qr.edges.back(), q, spec.period());
        acc[x] = body[x] + head + tail;
        d.head_max = std::max(d.head_max, head);
        d.tail_max = std::max(d.tail_max, tail);
        d.body_max = std::max(d.body_max, body[x]);
    }
    if (diag) *diag = d;
    return finish(spec, acc, q);
}

GridFunction big_r(const GridFunction& f, double s, double q, const QuadratureConfig& quad, SquareFnDiagnostics* diag) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("big_r: s must lie in (0,1)");
    require_q(q, "big_r");
    detail::require_zero_mean(f, "big_r");
    const GridSpec& spec = f.spec();
    const int n = spec.dim();
    const std::size_t np = spec.points_per_axis();
    const double vol = spec.cell_volume();
    const auto qr = LogQuadrature::build(quad);
    const auto fhat = forward_transform(f);
    const std::size_t N = spec.size();
    const std::size_t m = qr.nodes.size();

    // cum[i * N + y]: sum over nodes below i of w t^s |d_t P(y, t)|, plus the analytic head.
    std::vector<double> node(m * N), cum((m + 1) * N, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = qr.nodes[i];
        const auto dt = inverse_transform(
            fhat.multiplied([t](const Point&, double r) { return -kTwoPi * r * std::exp(-kTwoPi * t * r); }, true));
        const double w = qr.weights[i] * std::pow(t, s);
        for (std::size_t y = 0; y < N; ++y) node[i * N + y] = w * std::abs(dt[y]);
    }
    const double t0 = qr.edges.front();
    for (std::size_t y = 0; y < N; ++y) {
        // |d_t P| is taken constant on (0, t_min).
        cum[y] = node[y] / (qr.weights[0] * std::pow(qr.nodes[0], s)) * std::pow(t0, s + 1.0) / (s + 1.0);
        for (std::size_t i = 0; i < m; ++i) cum[(i + 1) * N + y] = cum[i * N + y] + node[i * N + y];
    }

    // For each offset: the node cell containing T = 2|z| and the covered fraction of it.
    struct Cut {
        std::size_t cell;
        double frac;
        double weight;
        double head_scale;  // >= 0 when T <= t_min: fraction of the head integral
    };
    std::vector<Cut> cuts(N);
    double head_max = 0.0;
    for (std::size_t z = 1; z < N; ++z) {
        const double d = spec.offset_norm(z);
        const double T = std::min(2.0 * d, qr.edges.back());
        Cut c{0, 0.0, std::pow(d, -n - s * q) * vol, -1.0};
        if (T <= t0) {
            c.head_scale = std::pow(T / t0, s + 1.0);
        } else {
            const double u = std::log(T / t0) / qr.du;
            c.cell = std::min(static_cast<std::size_t>(u), m - 1);
            c.frac = std::clamp(u - static_cast<double>(c.cell), 0.0, 1.0);
        }
        cuts[z] = c;
    }
    std::vector<double> acc(N, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
        const auto [x0, x1] = spec.multi_index(x);
        double sum = 0.0;
        for (std::size_t z = 1; z < N; ++z) {
            const auto [z0, z1] = spec.multi_index(z);
            const std::size_t y = spec.flat_index((x0 + z0) % np, (x1 + z1) % np);
            const Cut& c = cuts[z];
            const double J = c.head_scale >= 0.0 ? cum[y] * c.head_scale
                                                  : cum[c.cell * N + y] + c.frac * node[c.cell * N + y];
            sum += std::pow(J, q) * c.weight;
        }
        acc[x] = sum;
        head_max = std::max(head_max, cum[x]);
    }
    if (diag) {
        SquareFnDiagnostics d;
        d.head_max = head_max;
        d.body_max = *std::max_element(acc.begin(), acc.end());
        *diag = d;
    }
    return finish(spec, acc, q);
}

}  // namespace lpkit
