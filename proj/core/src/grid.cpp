#include "lpkit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "lpkit/error.hpp"

namespace lpkit {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Minimal-image signed offset, |d| <= N/2.
std::int64_t wrap_offset(std::int64_t d, std::int64_t n) {
    d %= n;
    if (d < 0) d += n;
    if (d > n / 2) d -= n;
    return d;
}

}  // namespace

GridSpec::GridSpec(int dim, std::size_t points_per_axis, double period)
    : dim_(dim), n_(points_per_axis), period_(period) {
    if (dim != 1 && dim != 2) throw ParameterError("GridSpec: dim must be 1 or 2");
    if (points_per_axis < 2 || !is_power_of_two(points_per_axis))
        throw ParameterError("GridSpec: points_per_axis must be a power of two >= 2");
    if (!(period > 0.0) || !std::isfinite(period))
        throw ParameterError("GridSpec: period must be positive and finite");
}

double GridSpec::cell_volume() const noexcept {
    const double h = cell_width();
    return dim_ == 1 ? h : h * h;
}

std::size_t GridSpec::size() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }

std::array<std::size_t, 2> GridSpec::multi_index(std::size_t flat) const noexcept {
    if (dim_ == 1) return {flat, 0};
    return {flat / n_, flat % n_};
}

std::size_t GridSpec::flat_index(std::size_t i0, std::size_t i1) const noexcept {
    return dim_ == 1 ? i0 : i0 * n_ + i1;
}

Point GridSpec::coordinate(std::size_t flat) const noexcept {
    const auto [i0, i1] = multi_index(flat);
    const double h = cell_width();
    return {static_cast<double>(i0) * h, dim_ == 1 ? 0.0 : static_cast<double>(i1) * h};
}

std::int64_t GridSpec::signed_frequency(std::size_t m) const noexcept {
    const auto n = static_cast<std::int64_t>(n_);
    const auto k = static_cast<std::int64_t>(m);
    return k >= n / 2 ? k - n : k;
}

Point GridSpec::frequency(std::size_t flat) const noexcept {
    const auto [m0, m1] = multi_index(flat);
    const double k0 = static_cast<double>(signed_frequency(m0));
    const double k1 = dim_ == 1 ? 0.0 : static_cast<double>(signed_frequency(m1));
    return {k0 / period_, k1 / period_};
}

double GridSpec::abs_frequency(std::size_t flat) const noexcept {
    const Point xi = frequency(flat);
    return std::hypot(xi[0], xi[1]);
}

double GridSpec::offset_norm(std::size_t flat_offset) const noexcept {
    const auto [d0, d1] = multi_index(flat_offset);
    const auto n = static_cast<std::int64_t>(n_);
    const double h = cell_width();
    const double a = static_cast<double>(wrap_offset(static_cast<std::int64_t>(d0), n)) * h;
    const double b = static_cast<double>(wrap_offset(static_cast<std::int64_t>(d1), n)) * h;
    return std::hypot(a, b);
}

double GridSpec::periodic_distance(std::size_t a, std::size_t b) const noexcept {
    const auto ia = multi_index(a);
    const auto ib = multi_index(b);
    const auto n = static_cast<std::int64_t>(n_);
    const double h = cell_width();
    double sq = 0.0;
    for (int ax = 0; ax < dim_; ++ax) {
        const auto d = wrap_offset(static_cast<std::int64_t>(ia[ax]) - static_cast<std::int64_t>(ib[ax]), n);
        sq += static_cast<double>(d * d);
    }
    return std::sqrt(sq) * h;
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(GridSpec spec, std::vector<Complex> values, bool is_real)
    : spec_(spec), values_(std::move(values)), is_real_(is_real) {
    if (values_.size() != spec_.size())
        throw ParameterError("GridFunction: expected " + std::to_string(spec_.size()) + " samples, got " +
                             std::to_string(values_.size()));
    if (is_real_) {
        for (auto& v : values_) v = Complex(v.real(), 0.0);
    }
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(values.size()), is_real_(true) {
    if (values.size() != spec_.size())
        throw ParameterError("GridFunction: expected " + std::to_string(spec_.size()) + " samples, got " +
                             std::to_string(values.size()));
    std::transform(values.begin(), values.end(), values_.begin(), [](double v) { return Complex(v, 0.0); });
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
    return GridFunction(spec, std::vector<double>(spec.size(), 0.0));
}

GridFunction GridFunction::constant(const GridSpec& spec, double c) {
    return GridFunction(spec, std::vector<double>(spec.size(), c));
}

GridFunction GridFunction::sample(const GridSpec& spec, const std::function<double(const Point&)>& fn) {
    std::vector<double> v(spec.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(spec.coordinate(i));
    return GridFunction(spec, std::move(v));
}

GridFunction GridFunction::sample_complex(const GridSpec& spec,
                                          const std::function<Complex(const Point&)>& fn) {
    std::vector<Complex> v(spec.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(spec.coordinate(i));
    return GridFunction(spec, std::move(v), false);
}

std::vector<double> GridFunction::real_values() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](const Complex& c) { return c.real(); });
    return out;
}

std::vector<double> GridFunction::abs_values() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](const Complex& c) { return std::abs(c); });
    return out;
}

Complex GridFunction::mean() const {
    const Complex sum = std::accumulate(values_.begin(), values_.end(), Complex(0.0, 0.0));
    return sum / static_cast<double>(values_.size());
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::mean_free() const {
    const Complex mu = mean();
    std::vector<Complex> v(values_);
    for (auto& x : v) x -= mu;
    return GridFunction(spec_, std::move(v), is_real_);
}

GridFunction GridFunction::shifted(std::int64_t s0, std::int64_t s1) const {
    const auto n = static_cast<std::int64_t>(spec_.points_per_axis());
    auto wrap = [n](std::int64_t i) { return ((i % n) + n) % n; };
    std::vector<Complex> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto [i0, i1] = spec_.multi_index(i);
        const auto j0 = static_cast<std::size_t>(wrap(static_cast<std::int64_t>(i0) - s0));
        const auto j1 = spec_.dim() == 1 ? 0 : static_cast<std::size_t>(wrap(static_cast<std::int64_t>(i1) - s1));
        v[i] = values_[spec_.flat_index(j0, j1)];
    }
    return GridFunction(spec_, std::move(v), is_real_);
}

GridFunction GridFunction::operator+(const GridFunction& rhs) const {
    if (!(spec_ == rhs.spec_)) throw ParameterError("GridFunction: grid mismatch in sum");
    std::vector<Complex> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += rhs.values_[i];
    return GridFunction(spec_, std::move(v), is_real_ && rhs.is_real_);
}

GridFunction GridFunction::operator-(const GridFunction& rhs) const {
    if (!(spec_ == rhs.spec_)) throw ParameterError("GridFunction: grid mismatch in difference");
    std::vector<Complex> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= rhs.values_[i];
    return GridFunction(spec_, std::move(v), is_real_ && rhs.is_real_);
}

GridFunction GridFunction::scaled(double c) const {
    std::vector<Complex> v(values_);
    for (auto& x : v) x *= c;
    return GridFunction(spec_, std::move(v), is_real_);
}

GridFunction GridFunction::scaled(Complex c) const {
    std::vector<Complex> v(values_);
    for (auto& x : v) x *= c;
    return GridFunction(spec_, std::move(v), is_real_ && c.imag() == 0.0);
}

// ---------------------------------------------------------------------------

Spectrum::Spectrum(GridSpec spec, std::vector<Complex> coeffs, bool from_real)
    : spec_(spec), coeffs_(std::move(coeffs)), from_real_(from_real) {
    if (coeffs_.size() != spec_.size()) throw ParameterError("Spectrum: coefficient count mismatch");
}

Complex Spectrum::at_frequency(std::int64_t k0, std::int64_t k1) const {
    const auto n = static_cast<std::int64_t>(spec_.points_per_axis());
    auto slot = [n](std::int64_t k) {
        if (k < -n / 2 || k >= n / 2) throw ParameterError("Spectrum: frequency outside grid band");
        return static_cast<std::size_t>(k < 0 ? k + n : k);
    };
    return coeffs_[spec_.flat_index(slot(k0), spec_.dim() == 1 ? 0 : slot(k1))];
}

Spectrum Spectrum::multiplied(const std::function<Complex(const Point&, double)>& m,
                              bool preserves_real) const {
    std::vector<Complex> out(coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point xi = spec_.frequency(i);
        out[i] = coeffs_[i] * m(xi, std::hypot(xi[0], xi[1]));
    }
    return Spectrum(spec_, std::move(out), from_real_ && preserves_real);
}

Spectrum forward_transform(const GridFunction& f) {
    const GridSpec& spec = f.spec();
    std::vector<Complex> data(f.values().begin(), f.values().end());
    detail::fft_inplace(data, spec.dim(), spec.points_per_axis(), -1);
    const double scale = spec.cell_volume();
    for (auto& c : data) c *= scale;
    return Spectrum(spec, std::move(data), f.is_real());
}

GridFunction inverse_transform(const Spectrum& s) {
    const GridSpec& spec = s.spec();
    std::vector<Complex> data(s.coeffs().begin(), s.coeffs().end());
    detail::fft_inplace(data, spec.dim(), spec.points_per_axis(), +1);
    const double vol = spec.dim() == 1 ? spec.period() : spec.period() * spec.period();
    const double scale = 1.0 / vol;
    for (auto& c : data) c *= scale;
    return GridFunction(spec, std::move(data), s.from_real());
}

// ---------------------------------------------------------------------------

double lp_norm(std::span<const double> values, const GridSpec& spec, double p) {
    if (!(p > 0.0)) throw ParameterError("lp_norm: p must be positive");
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return 0.0;
    // Factor out the maximum so large p does not overflow.
    double sum = 0.0;
    for (double v : values) sum += std::pow(std::abs(v) / mx, p);
    return mx * std::pow(sum * spec.cell_volume(), 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
    const auto mags = f.abs_values();
    return lp_norm(mags, f.spec(), p);
}

double weak_lp_quasinorm(std::span<const double> values, const GridSpec& spec, double p) {
    if (!(p > 0.0)) throw ParameterError("weak_lp_quasinorm: p must be positive");
    std::vector<double> a(values.size());
    std::transform(values.begin(), values.end(), a.begin(), [](double v) { return std::abs(v); });
    std::sort(a.begin(), a.end(), std::greater<>());
    const double vol = spec.cell_volume();
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0) break;
        // Within a run of equal magnitudes the last index dominates, which is the
        // measure of {|f| >= a_k}; the sup over alpha < a_k attains it.
        best = std::max(best, a[k] * std::pow(static_cast<double>(k + 1) * vol, 1.0 / p));
    }
    return best;
}

double weak_lp_quasinorm(const GridFunction& f, double p) {
    const auto mags = f.abs_values();
    return weak_lp_quasinorm(mags, f.spec(), p);
}

double distribution_measure(std::span<const double> values, const GridSpec& spec, double alpha) {
    std::size_t count = 0;
    for (double v : values)
        if (std::abs(v) > alpha) ++count;
    return static_cast<double>(count) * spec.cell_volume();
}

}  // namespace lpkit
