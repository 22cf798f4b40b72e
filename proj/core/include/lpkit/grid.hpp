#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lpkit {

using Complex = std::complex<double>;

/// Point in R^n, n <= 2. Unused trailing coordinates are zero.
using Point = std::array<double, 2>;

/**
 * Uniform periodic grid over [0, L)^dim.
 *
 * Samples are stored row-major: index i = i0 * N + i1 for dim = 2, with the
 * sample at x = (i0 * h, i1 * h).
 */
class GridSpec {
public:
    GridSpec(int dim, std::size_t points_per_axis, double period);

    int dim() const noexcept { return dim_; }
    std::size_t points_per_axis() const noexcept { return n_; }
    double period() const noexcept { return period_; }
    double cell_width() const noexcept { return period_ / static_cast<double>(n_); }
    double cell_volume() const noexcept;
    std::size_t size() const noexcept;

    /// Same period and dimension, twice the points per axis.
    GridSpec refined() const { return GridSpec(dim_, 2 * n_, period_); }

    Point coordinate(std::size_t flat_index) const noexcept;
    std::array<std::size_t, 2> multi_index(std::size_t flat_index) const noexcept;
    std::size_t flat_index(std::size_t i0, std::size_t i1 = 0) const noexcept;

    /// Signed frequency index k in {-N/2, ..., N/2-1} of the storage slot m.
    std::int64_t signed_frequency(std::size_t m) const noexcept;
    /// Continuous frequency xi = k / L of the flat spectrum slot.
    Point frequency(std::size_t flat_index) const noexcept;
    double abs_frequency(std::size_t flat_index) const noexcept;

    /// Periodic (torus) distance between the grid points with the given flat indices.
    double periodic_distance(std::size_t a, std::size_t b) const noexcept;
    /// Norm of the minimal image of the offset between two flat indices.
    double offset_norm(std::size_t flat_offset) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int dim_;
    std::size_t n_;
    double period_;
};

/// Samples of a function on a GridSpec. Immutable once built.
class GridFunction {
public:
    GridFunction(GridSpec spec, std::vector<Complex> values, bool is_real);
    GridFunction(GridSpec spec, std::vector<double> values);

    static GridFunction zeros(const GridSpec& spec);
    static GridFunction constant(const GridSpec& spec, double c);
    static GridFunction sample(const GridSpec& spec, const std::function<double(const Point&)>& fn);
    static GridFunction sample_complex(const GridSpec& spec,
                                       const std::function<Complex(const Point&)>& fn);

    const GridSpec& spec() const noexcept { return spec_; }
    std::span<const Complex> values() const noexcept { return values_; }
    bool is_real() const noexcept { return is_real_; }
    std::size_t size() const noexcept { return values_.size(); }
    const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }

    std::vector<double> real_values() const;
    std::vector<double> abs_values() const;

    /// Spatial mean (1/L^n) * integral.
    Complex mean() const;
    double max_abs() const;
    /// This function minus its mean.
    GridFunction mean_free() const;

    /// Cyclic shift: result(x) = f(x - shift * h) along each axis.
    GridFunction shifted(std::int64_t s0, std::int64_t s1 = 0) const;

    GridFunction operator+(const GridFunction& rhs) const;
    GridFunction operator-(const GridFunction& rhs) const;
    GridFunction scaled(double c) const;
    GridFunction scaled(Complex c) const;

private:
    GridSpec spec_;
    std::vector<Complex> values_;
    bool is_real_;
};

/**
 * Discrete Fourier coefficients of a GridFunction.
 *
 * coeffs[m] approximates the continuous transform at xi = k / L with
 * k = spec.signed_frequency(m) per axis, i.e. h^n * sum_x f(x) e^{-2 pi i x.xi}.
 * Slots are stored in natural FFT order.
 */
class Spectrum {
public:
    Spectrum(GridSpec spec, std::vector<Complex> coeffs, bool from_real);

    const GridSpec& spec() const noexcept { return spec_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const Complex& operator[](std::size_t m) const noexcept { return coeffs_[m]; }
    bool from_real() const noexcept { return from_real_; }

    /// Coefficient at signed integer frequency (k0, k1).
    Complex at_frequency(std::int64_t k0, std::int64_t k1 = 0) const;

    /**
     * Pointwise product with a multiplier m(xi). `preserves_real` declares that
     * the multiplier maps real functions to real functions (m(-xi) = conj m(xi)).
     */
    Spectrum multiplied(const std::function<Complex(const Point& xi, double abs_xi)>& m,
                        bool preserves_real) const;

private:
    GridSpec spec_;
    std::vector<Complex> coeffs_;
    bool from_real_;
};

Spectrum forward_transform(const GridFunction& f);
/// Exact inverse of forward_transform. Imaginary parts are discarded when the
/// spectrum is flagged as originating from a real function.
GridFunction inverse_transform(const Spectrum& s);

/// (h^n sum |f|^p)^{1/p}.
double lp_norm(const GridFunction& f, double p);
double lp_norm(std::span<const double> values, const GridSpec& spec, double p);

/// Weak L^p quasinorm of the piecewise-constant grid representative:
/// max_k a_k (k h^n)^{1/p} over magnitudes sorted in decreasing order.
double weak_lp_quasinorm(const GridFunction& f, double p);
double weak_lp_quasinorm(std::span<const double> values, const GridSpec& spec, double p);

/// Lebesgue measure of {|f| > alpha} on the grid representative.
double distribution_measure(std::span<const double> values, const GridSpec& spec, double alpha);

}  // namespace lpkit
