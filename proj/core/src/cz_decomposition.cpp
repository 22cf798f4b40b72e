#include <algorithm>
#include <cmath>
#include <numbers>

#include "geometry_detail.hpp"
#include "lpkit/cube_geometry.hpp"
#include "lpkit/error.hpp"
#include "lpkit/special.hpp"

namespace lpkit {

namespace {

// Pairwise summation; exact for 2^k equal terms.
double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return v[0];
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

int grid_generation(const GridSpec& spec) {
    int e = 0;
    if (std::frexp(spec.cell_width(), &e) != 0.5)
        throw ParameterError("cz_decompose: the period must be a power of two");
    return -(e - 1);
}

// Flat grid indices of the cells inside a cube of side >= h, in row-major order.
std::vector<std::size_t> cube_cells(const GridSpec& spec, const DyadicCube& q, int gen_h) {
    const std::size_t s = std::size_t{1} << (gen_h - q.generation);
    const auto c0 = static_cast<std::size_t>(q.corner[0]) * s;
    std::vector<std::size_t> out;
    if (spec.dim() == 1) {
        for (std::size_t i = 0; i < s; ++i) out.push_back(c0 + i);
        return out;
    }
    const auto c1 = static_cast<std::size_t>(q.corner[1]) * s;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) out.push_back(spec.flat_index(c0 + i, c1 + j));
    return out;
}

// Grid cell containing a sub-cell cube.
std::size_t host_cell(const GridSpec& spec, const DyadicCube& q, int gen_h) {
    const int shift = q.generation - gen_h;
    const auto i0 = static_cast<std::size_t>(q.corner[0] >> shift);
    const auto i1 = spec.dim() == 2 ? static_cast<std::size_t>(q.corner[1] >> shift) : 0;
    return spec.flat_index(i0, i1);
}

}  // namespace

GridFunction BadPart::as_function(const GridSpec& spec) const {
    std::vector<double> v(spec.size(), 0.0);
    for (std::size_t k = 0; k < cells.size(); ++k) v[cells[k]] = values[k];
    return GridFunction(spec, std::move(v));
}

GridFunction CZDecomposition::bad_sum() const {
    std::vector<double> v(f.size(), 0.0);
    for (const auto& b : bad_parts)
        for (std::size_t k = 0; k < b.cells.size(); ++k) v[b.cells[k]] += b.values[k];
    return GridFunction(f.spec(), std::move(v));
}

bool CZDecomposition::all_passed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.passed; });
}

CZDecomposition cz_decompose(const GridFunction& f, double p, double alpha, int extra_generations) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("cz_decompose: p must be >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("cz_decompose: alpha must be positive");
    if (!f.is_real()) throw ParameterError("cz_decompose: f must be real-valued");
    if (extra_generations < 0) throw ParameterError("cz_decompose: extra_generations must be >= 0");
    const GridSpec& spec = f.spec();
    const int gen_h = grid_generation(spec);
    const int n = spec.dim();
    const std::vector<double> fv = f.real_values();
    const double fmax = f.max_abs();
    if (alpha >= fmax) throw DegenerateInputError("cz_decompose: alpha >= max|f|, the level set is empty", f);

    const double ap = std::pow(alpha, p);
    const GridFunction M = hl_maximal(f, p);
    std::vector<bool> flags(spec.size());
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = M[i].real() > ap;
    if (std::all_of(flags.begin(), flags.end(), [](bool b) { return b; }))
        throw PreconditionError("cz_decompose: {M(|f|^p) > alpha^p} is the whole torus; raise alpha");

    OpenSetMask omega = OpenSetMask::from_grid(spec, flags, true);
    WhitneyDecomposition wd = whitney_decompose(omega, gen_h + extra_generations);

    std::vector<double> g = fv;
    std::vector<BadPart> bad;
    const double hn = spec.cell_volume();
    for (const auto& q : wd.cubes) {
        if (q.generation > gen_h) continue;  // sub-cell cube: g = f, b = 0
        BadPart b{q, cube_cells(spec, q, gen_h), {}};
        std::vector<double> vals;
        vals.reserve(b.cells.size());
        for (auto c : b.cells) vals.push_back(fv[c]);
        const double mean = pairwise_sum(vals) / static_cast<double>(vals.size());
        for (std::size_t k = 0; k < b.cells.size(); ++k) {
            g[b.cells[k]] = mean;
            b.values.push_back(fv[b.cells[k]] - mean);
        }
        bad.push_back(std::move(b));
    }

    CZDecomposition out{f, p, alpha, omega, wd, GridFunction(spec, g), std::move(bad), {}};
    auto& cl = out.clauses;
    const double sn = std::sqrt(static_cast<double>(n));
    const double c6 = std::pow(10.0 * sn, n);
    const double c7 = std::pow(2.0, p) * c6;
    const double c9 = std::pow(10.0 * sn, n / p);
    const double c5 = std::pow(6.0, n);
    const double fp = lp_norm(f, p);

    // Total measure of the cubes against the weak-type bound for M.
    double cube_measure = 0.0;
    for (const auto& q : wd.cubes) cube_measure += q.volume();
    const double measure_bound = c5 * std::pow(fp, p) / ap;
    cl.push_back({"cz.cube_measure", cube_measure <= measure_bound, cube_measure, measure_bound,
                  "sum |I_j| against C5 alpha^-p ||f||_p^p, C5 = 6^n"});

    double off_max = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i)
        if (!flags[i]) off_max = std::max(off_max, std::pow(std::abs(fv[i]), p));
    cl.push_back({"cz.off_set_bound", off_max <= ap, off_max, ap, "max |f|^p off the set"});

    double avg_max = 0.0, bad_avg_max = 0.0, mean_zero = 0.0;
    for (const auto& q : wd.cubes) {
        if (q.generation <= gen_h) continue;
        avg_max = std::max(avg_max, std::pow(std::abs(fv[host_cell(spec, q, gen_h)]), p));
    }
    for (const auto& b : out.bad_parts) {
        std::vector<double> fa, ba;
        for (std::size_t k = 0; k < b.cells.size(); ++k) {
            fa.push_back(std::pow(std::abs(fv[b.cells[k]]), p));
            ba.push_back(std::pow(std::abs(b.values[k]), p));
        }
        const auto cnt = static_cast<double>(b.cells.size());
        avg_max = std::max(avg_max, pairwise_sum(fa) / cnt);
        bad_avg_max = std::max(bad_avg_max, pairwise_sum(ba) / cnt);
        mean_zero = std::max(mean_zero, std::abs(pairwise_sum(b.values) * hn));
    }
    cl.push_back({"cz.cube_average", avg_max <= c6 * ap, avg_max, c6 * ap, "max cube average of |f|^p, C6 = (10 sqrt n)^n"});

    // Doubled cubes in units scaled by 2: [2 lo - l, 2 hi + l].
    std::vector<detail::IBox> doubled;
    for (const auto& q : wd.cubes) {
        const auto b = omega.cube_box(q);
        const std::int64_t l = b.hi[0] - b.lo[0];
        detail::IBox d;
        for (int a = 0; a < n; ++a) {
            d.lo[a] = 2 * b.lo[a] - l;
            d.hi[a] = 2 * b.hi[a] + l;
        }
        doubled.push_back(d);
    }
    const double overlap_bound = std::floor(dimension_constants(n).nu_n * std::pow(40.0 * n, n)) + 1.0;
    const auto overlap = static_cast<double>(detail::max_coverage(doubled, n, true, 2 * omega.period_units()));
    cl.push_back({"cz.doubled_overlap", overlap <= overlap_bound, overlap, overlap_bound, "max overlap of doubled cubes"});

    const GridFunction bsum = out.bad_sum();
    double resid = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) resid = std::max(resid, std::abs(fv[i] - g[i] - bsum[i].real()));
    cl.push_back({"cz.reconstruction", resid <= 1e-14 * fmax, resid, 1e-14 * fmax, "max |f - g - sum b_j|"});

    cl.push_back({"cz.bad_average", bad_avg_max <= c7 * ap, bad_avg_max, c7 * ap,
                  "max cube average of |b_j|^p, C7 = 2^p (10 sqrt n)^n"});
    const double f1 = lp_norm(f, 1.0);
    cl.push_back({"cz.bad_mean_zero", mean_zero <= 1e-12 * f1, mean_zero, 1e-12 * f1, "max |integral of b_j|"});

    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    cl.push_back({"cz.good_bound", gmax <= c9 * alpha, gmax, c9 * alpha, "max |g|, C9 = (10 sqrt n)^(n/p)"});
    const double gp = lp_norm(out.good, p);
    cl.push_back({"cz.good_norm", gp <= fp * (1.0 + 1e-14), gp, fp, "||g||_p against ||f||_p, relative rounding 1e-14"});
    return out;
}

}  // namespace lpkit
