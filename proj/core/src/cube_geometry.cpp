#include "lpkit/cube_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "geometry_detail.hpp"
#include "lpkit/error.hpp"

namespace lpkit {

using i128 = wide_int;
using IBox = OpenSetMask::IBox;

namespace {

constexpr int kUnit = OpenSetMask::unit_exponent;

std::int64_t to_units(double x) {
    const double u = std::ldexp(x, kUnit);
    if (!(std::abs(u) < 0x1.0p62) || u != std::floor(u))
        throw ParameterError("OpenSetMask: coordinate is not a multiple of 2^-40 or is out of range");
    return static_cast<std::int64_t>(u);
}

int log2_exact(double L) {
    int e = 0;
    const double m = std::frexp(L, &e);
    if (m != 0.5) throw ParameterError("OpenSetMask: period must be a power of two");
    if (e - 1 < -10 || e - 1 > 16) throw ParameterError("OpenSetMask: period out of the supported range");
    return e - 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// DyadicCube

Point DyadicCube::lower() const {
    const double l = side();
    return {static_cast<double>(corner[0]) * l, dim == 2 ? static_cast<double>(corner[1]) * l : 0.0};
}

Point DyadicCube::center() const {
    const double l = side();
    return {(static_cast<double>(corner[0]) + 0.5) * l, dim == 2 ? (static_cast<double>(corner[1]) + 0.5) * l : 0.0};
}

double DyadicCube::volume() const { return std::pow(side(), dim); }

DyadicCube DyadicCube::parent() const {
    // Floor division keeps negative corners on the dyadic lattice.
    auto half = [](std::int64_t m) { return m >= 0 ? m / 2 : -((-m + 1) / 2); };
    return {dim, generation - 1, {half(corner[0]), dim == 2 ? half(corner[1]) : 0}};
}

std::vector<DyadicCube> DyadicCube::children() const {
    std::vector<DyadicCube> out;
    for (int a = 0; a < 2; ++a) {
        if (dim == 1) {
            out.push_back({1, generation + 1, {2 * corner[0] + a, 0}});
            continue;
        }
        for (int b = 0; b < 2; ++b) out.push_back({2, generation + 1, {2 * corner[0] + a, 2 * corner[1] + b}});
    }
    return out;
}

bool DyadicCube::contains(const DyadicCube& other) const {
    if (other.generation < generation || other.dim != dim) return false;
    const int shift = other.generation - generation;
    for (int i = 0; i < dim; ++i)
        if ((other.corner[i] >> shift) != corner[i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// OpenSetMask

std::size_t OpenSetMask::element_count(int axis) const {
    const std::size_t r = coords_[axis].size() - 1;
    return periodic_ ? 2 * r : 2 * r + 1;
}

OpenSetMask OpenSetMask::from_boxes(int dim, double period, const std::vector<Box>& boxes, bool periodic) {
    if (dim != 1 && dim != 2) throw ParameterError("OpenSetMask: dim must be 1 or 2");
    log2_exact(period);
    OpenSetMask m;
    m.dim_ = dim;
    m.period_ = period;
    m.periodic_ = periodic;
    m.period_units_ = to_units(period);

    std::vector<IBox> ib;
    for (const auto& b : boxes) {
        IBox x;
        bool empty = false;
        for (int a = 0; a < dim; ++a) {
            x.lo[a] = std::clamp<std::int64_t>(to_units(b.lo[a]), 0, m.period_units_);
            x.hi[a] = std::clamp<std::int64_t>(to_units(b.hi[a]), 0, m.period_units_);
            if (x.hi[a] <= x.lo[a]) empty = true;
        }
        if (!empty) ib.push_back(x);
    }
    for (int a = 0; a < dim; ++a) {
        auto& c = m.coords_[a];
        c = {0, m.period_units_};
        for (const auto& b : ib) {
            c.push_back(b.lo[a]);
            c.push_back(b.hi[a]);
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    if (dim == 1) m.coords_[1] = {0, 0};

    const std::size_t e0 = m.element_count(0);
    const std::size_t e1 = dim == 2 ? m.element_count(1) : 1;
    m.element_in_.assign(e0 * e1, 0);
    auto rep = [&m](int axis, std::size_t e) -> std::int64_t {
        const auto& c = m.coords_[axis];
        return e % 2 == 0 ? 2 * c[e / 2] : c[e / 2] + c[e / 2 + 1];
    };
    for (std::size_t i = 0; i < e0; ++i) {
        for (std::size_t j = 0; j < e1; ++j) {
            const std::int64_t r0 = rep(0, i);
            const std::int64_t r1 = dim == 2 ? rep(1, j) : 0;
            for (const auto& b : ib) {
                if (2 * b.lo[0] < r0 && r0 < 2 * b.hi[0] && (dim == 1 || (2 * b.lo[1] < r1 && r1 < 2 * b.hi[1]))) {
                    m.element_in_[i * e1 + j] = 1;
                    break;
                }
            }
        }
    }
    m.finalize();
    return m;
}

OpenSetMask OpenSetMask::from_grid(const GridSpec& spec, const std::vector<bool>& flags, bool periodic) {
    if (flags.size() != spec.size()) throw ParameterError("OpenSetMask: flag count does not match the grid");
    log2_exact(spec.period());
    OpenSetMask m;
    m.dim_ = spec.dim();
    m.period_ = spec.period();
    m.periodic_ = periodic;
    m.period_units_ = to_units(spec.period());
    const std::size_t n = spec.points_per_axis();
    const std::int64_t h = to_units(spec.cell_width());
    for (int a = 0; a < m.dim_; ++a) {
        m.coords_[a].resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) m.coords_[a][i] = static_cast<std::int64_t>(i) * h;
    }
    if (m.dim_ == 1) m.coords_[1] = {0, 0};

    const std::size_t e0 = m.element_count(0);
    const std::size_t e1 = m.dim_ == 2 ? m.element_count(1) : 1;
    m.element_in_.assign(e0 * e1, 0);
    // Cells whose closure contains the element along one axis.
    auto incident = [&](std::size_t e) {
        std::vector<std::int64_t> cells;
        const auto i = static_cast<std::int64_t>(e / 2);
        if (e % 2 == 1) {
            cells.push_back(i);
        } else {
            cells.push_back(i - 1);
            cells.push_back(i);
        }
        for (auto& c : cells) {
            if (periodic) c = (c + static_cast<std::int64_t>(n)) % static_cast<std::int64_t>(n);
        }
        return cells;
    };
    auto flagged = [&](std::int64_t c0, std::int64_t c1) {
        const auto nn = static_cast<std::int64_t>(n);
        if (c0 < 0 || c0 >= nn || c1 < 0 || (m.dim_ == 2 && c1 >= nn)) return false;
        return static_cast<bool>(flags[spec.flat_index(static_cast<std::size_t>(c0), static_cast<std::size_t>(c1))]);
    };
    for (std::size_t i = 0; i < e0; ++i) {
        const auto ci = incident(i);
        for (std::size_t j = 0; j < e1; ++j) {
            const std::vector<std::int64_t> cj = m.dim_ == 2 ? incident(j) : std::vector<std::int64_t>{0};
            bool all = true;
            for (auto a : ci)
                for (auto b : cj) all = all && flagged(a, b);
            m.element_in_[i * e1 + j] = all ? 1 : 0;
        }
    }
    m.finalize();
    return m;
}

OpenSetMask OpenSetMask::whole_space(int dim) {
    throw DomainError("Whitney decomposition needs a proper subset; R^" + std::to_string(dim) + " was given");
}

void OpenSetMask::finalize() {
    const std::size_t e0 = element_count(0);
    const std::size_t e1 = dim_ == 2 ? element_count(1) : 1;
    auto at = [&](std::int64_t i, std::int64_t j, bool& valid) -> char {
        valid = true;
        if (periodic_) {
            i = (i % static_cast<std::int64_t>(e0) + static_cast<std::int64_t>(e0)) % static_cast<std::int64_t>(e0);
            if (dim_ == 2)
                j = (j % static_cast<std::int64_t>(e1) + static_cast<std::int64_t>(e1)) % static_cast<std::int64_t>(e1);
        }
        if (i < 0 || i >= static_cast<std::int64_t>(e0) || j < 0 || j >= static_cast<std::int64_t>(e1)) {
            valid = false;
            return 0;
        }
        return element_in_[static_cast<std::size_t>(i) * e1 + static_cast<std::size_t>(j)];
    };
    auto closure = [&](std::size_t i, std::size_t j) {
        IBox b;
        auto span = [&](int axis, std::size_t e, std::int64_t& lo, std::int64_t& hi) {
            const auto& c = coords_[axis];
            lo = c[e / 2];
            hi = e % 2 == 0 ? lo : c[e / 2 + 1];
        };
        span(0, i, b.lo[0], b.hi[0]);
        if (dim_ == 2) span(1, j, b.lo[1], b.hi[1]);
        return b;
    };

    cells_.clear();
    atoms_.clear();
    std::vector<char> adjacent(e0 * e1, 0);
    bool any_in = false, any_out = false;
    for (std::size_t i = 0; i < e0; ++i) {
        for (std::size_t j = 0; j < e1; ++j) {
            const bool in = element_in_[i * e1 + j];
            (in ? any_in : any_out) = true;
            if (in && i % 2 == 1 && (dim_ == 1 || j % 2 == 1)) cells_.push_back(closure(i, j));
            if (in) continue;
            const int dj = dim_ == 2 ? 1 : 0;
            for (int a = -1; a <= 1; ++a)
                for (int b = -dj; b <= dj; ++b) {
                    bool valid;
                    if (at(static_cast<std::int64_t>(i) + a, static_cast<std::int64_t>(j) + b, valid) && valid)
                        adjacent[i * e1 + j] = 1;
                }
        }
    }
    max_cell_width_ = 0;
    for (const auto& c : cells_) max_cell_width_ = std::max(max_cell_width_, c.hi[0] - c.lo[0]);
    if (!any_in) throw DomainError("OpenSetMask: the set is empty");
    if (!any_out) throw DomainError("OpenSetMask: the set is the whole space");

    for (std::size_t i = 0; i < e0; ++i) {
        for (std::size_t j = 0; j < e1; ++j) {
            if (!adjacent[i * e1 + j]) continue;
            // Skip elements already contained in the closure of a kept higher-dimensional neighbour.
            bool covered = false;
            const int dj = dim_ == 2 ? 1 : 0;
            for (int a = -1; a <= 1 && !covered; ++a)
                for (int b = -dj; b <= dj && !covered; ++b) {
                    if (a == 0 && b == 0) continue;
                    if ((a != 0 && i % 2 == 1) || (b != 0 && j % 2 == 1)) continue;
                    auto ii = static_cast<std::int64_t>(i) + a, jj = static_cast<std::int64_t>(j) + b;
                    bool valid;
                    const char in = at(ii, jj, valid);
                    if (!valid || in) continue;
                    if (periodic_) {
                        ii = (ii + static_cast<std::int64_t>(e0)) % static_cast<std::int64_t>(e0);
                        jj = dim_ == 2 ? (jj + static_cast<std::int64_t>(e1)) % static_cast<std::int64_t>(e1) : 0;
                    }
                    if (adjacent[static_cast<std::size_t>(ii) * e1 + static_cast<std::size_t>(jj)]) covered = true;
                }
            if (!covered) atoms_.push_back(closure(i, j));
        }
    }
}

bool OpenSetMask::contains(const Point& x) const {
    auto locate = [&](int axis, double v, std::size_t& e) {
        double u = std::ldexp(v, kUnit);
        const double P = static_cast<double>(period_units_);
        if (periodic_) u = std::fmod(std::fmod(u, P) + P, P);
        if (u < 0.0 || u > P) return false;
        const auto& c = coords_[axis];
        const auto it = std::upper_bound(c.begin(), c.end(), u, [](double a, std::int64_t b) { return a < static_cast<double>(b); });
        const auto k = static_cast<std::size_t>(it - c.begin());  // c[k-1] <= u < c[k]
        e = static_cast<double>(c[k - 1]) == u ? 2 * (k - 1) : 2 * (k - 1) + 1;
        if (periodic_ && e == element_count(axis)) e = 0;
        return true;
    };
    std::size_t i = 0, j = 0;
    if (!locate(0, x[0], i)) return false;
    if (dim_ == 2 && !locate(1, x[1], j)) return false;
    const std::size_t e1 = dim_ == 2 ? element_count(1) : 1;
    return element_in_[i * e1 + j] != 0;
}

i128 OpenSetMask::volume_units() const {
    i128 v = 0;
    for (const auto& c : cells_) v += detail::box_volume(c, dim_);
    return v;
}

double OpenSetMask::volume() const {
    return static_cast<double>(volume_units()) * std::pow(std::ldexp(1.0, -kUnit), dim_);
}

i128 OpenSetMask::dist2_to_complement(const IBox& box, std::int64_t scale) const {
    i128 best = -1;
    const std::int64_t P = period_units_ * scale;
    const int r0 = periodic_ ? 1 : 0;
    const int r1 = periodic_ && dim_ == 2 ? 1 : 0;
    for (const auto& a : atoms_) {
        const IBox s = detail::scaled(a, scale, dim_);
        for (int u = -r0; u <= r0; ++u)
            for (int v = -r1; v <= r1; ++v) {
                const IBox t = detail::shifted(s, u * P, v * P);
                const i128 d = detail::box_dist2(box, t, dim_);
                if (best < 0 || d < best) best = d;
                if (best == 0) return 0;
            }
    }
    return best;
}

i128 OpenSetMask::intersection_volume(const IBox& box) const {
    i128 v = 0;
    const auto first = std::lower_bound(cells_.begin(), cells_.end(), box.lo[0] - max_cell_width_,
                                        [](const IBox& c, std::int64_t x) { return c.lo[0] < x; });
    for (auto it = first; it != cells_.end() && it->lo[0] < box.hi[0]; ++it) v += detail::overlap_volume(box, *it, dim_);
    return v;
}

IBox OpenSetMask::cube_box(const DyadicCube& q) const {
    const int shift = kUnit - q.generation;
    if (shift < 0 || shift > 62) throw ParameterError("DyadicCube: generation outside the supported range");
    const std::int64_t side = std::int64_t{1} << shift;
    IBox b;
    for (int a = 0; a < dim_; ++a) {
        b.lo[a] = q.corner[a] * side;
        b.hi[a] = b.lo[a] + side;
    }
    return b;
}

// ---------------------------------------------------------------------------
// Whitney decomposition

WhitneyDecomposition whitney_decompose(const OpenSetMask& omega, int k_max) {
    const int n = omega.dim();
    const int k0 = -log2_exact(omega.period());
    if (k_max < k0 || k_max > kUnit - 1) throw ParameterError("whitney_decompose: k_max out of range");
    WhitneyDecomposition out{omega, {}, {}, {}, k_max, omega.volume(), 0.0};

    std::vector<DyadicCube> stack{{n, k0, {0, 0}}};
    i128 uncovered = 0;
    std::vector<std::pair<DyadicCube, i128>> chosen;
    while (!stack.empty()) {
        const DyadicCube q = stack.back();
        stack.pop_back();
        const IBox box = omega.cube_box(q);
        const i128 meet = omega.intersection_volume(box);
        if (meet == 0) continue;
        const i128 d2 = omega.dist2_to_complement(box);
        const i128 l = box.hi[0] - box.lo[0];
        if (d2 >= static_cast<i128>(n) * l * l) {
            chosen.emplace_back(q, d2);
        } else if (q.generation == k_max) {
            out.frontier.push_back(q);
            uncovered += meet;
        } else {
            for (const auto& c : q.children()) stack.push_back(c);
        }
    }
    auto key = [](const DyadicCube& c) { return std::make_tuple(c.generation, c.corner[0], c.corner[1]); };
    std::sort(chosen.begin(), chosen.end(), [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
    std::sort(out.frontier.begin(), out.frontier.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    const double unit = std::ldexp(1.0, -kUnit);
    for (const auto& [c, d2] : chosen) {
        out.cubes.push_back(c);
        out.dist.push_back(std::sqrt(static_cast<double>(d2)) * unit);
    }
    out.uncovered_volume = static_cast<double>(uncovered) * std::pow(unit, n);
    return out;
}

std::vector<ClauseResult> check_whitney_clauses(const WhitneyDecomposition& decomp) {
    const OpenSetMask& omega = decomp.omega;
    const int n = omega.dim();
    const std::size_t C = decomp.cubes.size();
    std::vector<IBox> boxes(C);
    for (std::size_t i = 0; i < C; ++i) boxes[i] = omega.cube_box(decomp.cubes[i]);
    std::vector<ClauseResult> out;

    // (a) disjoint interiors and exact coverage up to the reported frontier.
    const auto pairs = detail::touching_pairs(boxes, n, omega.periodic(), omega.period_units());
    std::size_t overlaps = 0;
    for (const auto& p : pairs)
        if (p.overlap) ++overlaps;
    i128 covered = 0;
    for (const auto& b : boxes) covered += detail::box_volume(b, n);
    i128 frontier = 0;
    for (const auto& q : decomp.frontier) frontier += omega.intersection_volume(omega.cube_box(q));
    const bool cover_ok = covered + frontier == omega.volume_units();
    out.push_back({"whitney.disjoint_cover", overlaps == 0 && cover_ok, static_cast<double>(overlaps), 0.0,
                   "overlapping pairs; covered + frontier " + std::string(cover_ok ? "==" : "!=") + " |omega|"});

    // (b) sqrt(n) l <= dist <= 4 sqrt(n) l, compared as squares.
    std::size_t bad_b = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < C; ++i) {
        const i128 l = boxes[i].hi[0] - boxes[i].lo[0];
        const i128 d2 = omega.dist2_to_complement(boxes[i]);
        if (d2 < n * l * l || d2 > 16 * n * l * l) ++bad_b;
        worst = std::max(worst, std::sqrt(static_cast<double>(d2) / static_cast<double>(n * l * l)));
    }
    out.push_back({"whitney.distance_bounds", bad_b == 0, worst, 4.0, "max dist / (sqrt(n) l)"});

    // (c) side ratio of touching cubes, (d) touching count.
    std::vector<std::size_t> touch_count(C, 0);
    int worst_ratio = 0;
    for (const auto& p : pairs) {
        if (p.overlap) continue;
        ++touch_count[p.a];
        ++touch_count[p.b];
        worst_ratio = std::max(worst_ratio, std::abs(decomp.cubes[p.a].generation - decomp.cubes[p.b].generation));
    }
    out.push_back({"whitney.neighbor_ratio", worst_ratio <= 2, std::ldexp(1.0, worst_ratio), 4.0, "max side ratio of touching cubes"});
    const std::size_t max_touch = C ? *std::max_element(touch_count.begin(), touch_count.end()) : 0;
    const double touch_bound = std::pow(12.0, n) - std::pow(4.0, n);
    out.push_back({"whitney.touch_count", static_cast<double>(max_touch) <= touch_bound, static_cast<double>(max_touch),
                   touch_bound, "max number of touching cubes"});

    // (e) dilates by 1 + 1/10, in units scaled by 20: [20 lo - l, 20 hi + l].
    std::vector<IBox> dil(C);
    bool inside = true;
    for (std::size_t i = 0; i < C; ++i) {
        const std::int64_t l = boxes[i].hi[0] - boxes[i].lo[0];
        for (int a = 0; a < n; ++a) {
            dil[i].lo[a] = 20 * boxes[i].lo[a] - l;
            dil[i].hi[a] = 20 * boxes[i].hi[a] + l;
        }
        if (omega.dist2_to_complement(dil[i], 20) == 0) inside = false;
    }
    const std::size_t cover = detail::max_coverage(dil, n, omega.periodic(), 20 * omega.period_units());
    out.push_back({"whitney.dilate_overlap", inside && static_cast<double>(cover) <= touch_bound + 1.0, static_cast<double>(cover),
                   touch_bound + 1.0, inside ? "max overlap of dilates" : "a dilate leaves the set"});
    return out;
}

// ---------------------------------------------------------------------------
// Near/far geometry in half-units of the finest generation present.

namespace {

struct LocalGeom {
    int n;
    int shift;  // mask units per local unit = 2^shift
    std::vector<IBox> box;  // doubled local units
    std::vector<std::array<i128, 2>> center;
    std::vector<i128> side;
};

LocalGeom local_geometry(const WhitneyDecomposition& d) {
    LocalGeom g{d.omega.dim(), 0, {}, {}, {}};
    int finest = d.cubes.empty() ? 0 : d.cubes.front().generation;
    for (const auto& c : d.cubes) finest = std::max(finest, c.generation);
    const int coarsest = -log2_exact(d.omega.period());
    if (finest - coarsest > 20) throw ParameterError("near/far geometry: generation span too large");
    g.shift = kUnit - finest;
    for (const auto& c : d.cubes) {
        IBox b = d.omega.cube_box(c);
        for (int a = 0; a < g.n; ++a) {
            b.lo[a] = 2 * (b.lo[a] >> g.shift);
            b.hi[a] = 2 * (b.hi[a] >> g.shift);
        }
        g.box.push_back(b);
        g.center.push_back({(b.lo[0] + b.hi[0]) / 2, g.n == 2 ? (b.lo[1] + b.hi[1]) / 2 : 0});
        g.side.push_back(b.hi[0] - b.lo[0]);
    }
    return g;
}

i128 center_dist2(const LocalGeom& g, std::size_t a, std::size_t b) {
    i128 s = 0;
    for (int k = 0; k < g.n; ++k) {
        const i128 d = g.center[a][k] - g.center[b][k];
        s += d * d;
    }
    return s;
}

bool is_far(const LocalGeom& g, std::size_t m, std::size_t j) {
    const i128 l2 = g.side[m] * g.side[m];
    return detail::sign_a_plus_b_sqrtn(g.n, center_dist2(g, m, j) - 121 * (g.n + 1) * l2, -242 * l2) > 0;
}

}  // namespace

CubeRelation classify_near_far(const WhitneyDecomposition& decomp, std::size_t m, std::size_t j) {
    if (m >= decomp.cubes.size() || j >= decomp.cubes.size())
        throw ParameterError("classify_near_far: cube index out of range");
    const auto g = local_geometry(decomp);
    return is_far(g, m, j) ? CubeRelation::far : CubeRelation::near;
}

std::vector<ClauseResult> check_near_far_geometry(const WhitneyDecomposition& decomp, std::uint64_t seed,
                                                  std::size_t samples_per_pair, std::size_t sampled_pairs) {
    const auto g = local_geometry(decomp);
    const int n = g.n;
    const std::size_t C = decomp.cubes.size();
    const double sqn = std::sqrt(static_cast<double>(n));
    const double c3 = (1.0 - sqn / (sqn + 1.0)) * (1.0 - sqn / (22.0 * (sqn + 1.0)));
    const double c4 = (1.0 + sqn / (sqn + 1.0)) * (1.0 + sqn / (22.0 * (sqn + 1.0)));

    std::size_t far = 0, near = 0, bad1 = 0, bad3 = 0, bad_near = 0, bad_samples = 0, sampled = 0;
    std::mt19937_64 rng(seed);
    // Every ordered pair when there are at most kExhaustivePairs of them, otherwise that many random pairs.
    constexpr std::size_t kExhaustivePairs = 1'000'000;
    const bool exhaustive = C < 2 || C * (C - 1) <= kExhaustivePairs;
    const std::size_t pair_count = C < 2 ? 0 : exhaustive ? C * (C - 1) : kExhaustivePairs;
    std::uniform_int_distribution<std::size_t> pick(0, C == 0 ? 0 : C - 1);
    // Reservoir of far pairs for the point samples.
    std::vector<std::pair<std::size_t, std::size_t>> far_pairs;
    far_pairs.reserve(std::min(sampled_pairs, pair_count));
    for (std::size_t k = 0; k < pair_count; ++k) {
        std::size_t m, j;
        if (exhaustive) {
            m = k / (C - 1);
            j = k % (C - 1);
            if (j >= m) ++j;
        } else {
            m = pick(rng);
            do j = pick(rng); while (j == m);
        }
        {
            const i128 lm2 = g.side[m] * g.side[m];
            const i128 lj2 = g.side[j] * g.side[j];
            if (!is_far(g, m, j)) {
                ++near;
                // Q_j inside B(c(Q_m), 11 (sqrt(n)+1)^2 l(Q_m)).
                const i128 D2 = detail::point_box_max_dist2(g.center[m], g.box[j], n);
                const i128 a = 121 * ((n + 1) * (n + 1) + 4 * n) * lm2 - D2;
                const i128 b = 121 * 4 * (n + 1) * lm2;
                if (detail::sign_a_plus_b_sqrtn(n, a, b) < 0) ++bad_near;
                continue;
            }
            ++far;
            if (far_pairs.size() < sampled_pairs) {
                far_pairs.emplace_back(m, j);
            } else if (sampled_pairs > 0) {
                const std::size_t r = std::uniform_int_distribution<std::size_t>(0, far - 1)(rng);
                if (r < sampled_pairs) far_pairs[r] = {m, j};
            }
            // |y - c(Q_j)| >= (sqrt(n)+1)/2 l(Q_j) for all y in Q_m.
            const i128 d2 = detail::point_box_min_dist2(g.center[j], g.box[m], n);
            if (detail::sign_a_plus_b_sqrtn(n, 4 * d2 - (n + 1) * lj2, -2 * lj2) < 0) ++bad1;
            // C3 |dc| <= |y - z| <= C4 |dc| at the exact extremes over y in Q_m, z in Q_j.
            const i128 dc2 = center_dist2(g, m, j);
            const i128 mn2 = detail::box_dist2(g.box[m], g.box[j], n);
            const i128 mx2 = detail::box_max_dist2(g.box[m], g.box[j], n);
            bool ok;
            if (n == 1) {
                ok = 7744 * mn2 >= 1849 * dc2 && 18225 * dc2 >= 7744 * mx2;
            } else {
                ok = detail::sign_a_plus_b_sqrtn(2, 484 * mn2 - 1046 * dc2, 684 * dc2) >= 0 &&
                     detail::sign_a_plus_b_sqrtn(2, 6934 * dc2 - 484 * mx2, -3996 * dc2) >= 0;
            }
            if (!ok) ++bad3;
        }
    }

    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (const auto& [m, j] : far_pairs) {
        ++sampled;
        const auto& Qm = decomp.cubes[m];
        const auto& Qj = decomp.cubes[j];
        const Point cm = Qm.center(), cj = Qj.center();
        const double dc = std::hypot(cm[0] - cj[0], cm[1] - cj[1]);
        for (std::size_t s = 0; s < samples_per_pair; ++s) {
            Point y{}, z{};
            for (int a = 0; a < n; ++a) {
                y[a] = Qm.lower()[a] + unit() * Qm.side();
                z[a] = Qj.lower()[a] + unit() * Qj.side();
            }
            const double d = std::hypot(y[0] - z[0], y[1] - z[1]);
            if (d < c3 * dc || d > c4 * dc) ++bad_samples;
        }
    }

    std::vector<ClauseResult> out;
    out.push_back({"near_far.center_gap", bad1 == 0, static_cast<double>(bad1), 0.0,
                   std::to_string(far) + " far pairs checked exactly" + (exhaustive ? "" : " (random subset)")});
    out.push_back({"near_far.c3_c4_exact", bad3 == 0, static_cast<double>(bad3), 0.0,
                   "extreme distances against C3, C4"});
    out.push_back({"near_far.c3_c4_samples", bad_samples == 0, static_cast<double>(bad_samples), 0.0,
                   std::to_string(sampled) + " far pairs sampled"});
    out.push_back({"near_far.near_ball", bad_near == 0, static_cast<double>(bad_near), 0.0,
                   std::to_string(near) + " near pairs checked"});
    return out;
}

// ---------------------------------------------------------------------------
// Maximal function

GridFunction hl_maximal(const GridFunction& f, double p_power) {
    if (!(p_power >= 1.0) || !std::isfinite(p_power)) throw ParameterError("hl_maximal: p_power must be >= 1");
    const GridSpec& spec = f.spec();
    const std::size_t n = spec.points_per_axis();
    const int dim = spec.dim();
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(std::abs(f[i]), p_power);

    // Sliding maximum over the starts x - w .. x: every closed window of side w
    // whose closure contains the sample point x h. Periodic.
    auto window_max = [n](const std::vector<double>& v, std::size_t w) {
        std::vector<double> out(n);
        std::deque<std::size_t> dq;  // indices into the doubled sequence
        for (std::size_t k = 0; k < 2 * n; ++k) {
            const double x = v[k % n];
            while (!dq.empty() && v[dq.back() % n] <= x) dq.pop_back();
            dq.push_back(k);
            while (dq.front() + w + 1 <= k) dq.pop_front();
            if (k >= n) out[k % n] = v[dq.front() % n];
        }
        return out;
    };

    std::vector<double> best(a.size(), 0.0);
    if (dim == 1) {
        std::vector<double> prefix(2 * n + 1, 0.0);
        for (std::size_t k = 0; k < 2 * n; ++k) prefix[k + 1] = prefix[k] + a[k % n];
        for (std::size_t w = 1; w <= n; ++w) {
            std::vector<double> mean(n);
            for (std::size_t s = 0; s < n; ++s)
                mean[s] = w == 1 ? a[s] : (prefix[s + w] - prefix[s]) / static_cast<double>(w);
            const auto m = window_max(mean, w);
            for (std::size_t x = 0; x < n; ++x) best[x] = std::max(best[x], m[x]);
        }
        return GridFunction(spec, std::move(best));
    }

    // 2D: periodic summed-area table over the doubled torus.
    const std::size_t m2 = 2 * n + 1;
    std::vector<double> sat(m2 * m2, 0.0);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j)
            sat[(i + 1) * m2 + j + 1] =
                a[spec.flat_index(i % n, j % n)] + sat[i * m2 + j + 1] + sat[(i + 1) * m2 + j] - sat[i * m2 + j];
    for (std::size_t w = 1; w <= n; ++w) {
        const double cnt = static_cast<double>(w * w);
        std::vector<double> mean(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double s = sat[(i + w) * m2 + j + w] - sat[i * m2 + j + w] - sat[(i + w) * m2 + j] + sat[i * m2 + j];
                mean[i * n + j] = w == 1 ? a[spec.flat_index(i, j)] : s / cnt;
            }
        std::vector<double> rows(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double> row(mean.begin() + static_cast<std::ptrdiff_t>(i * n),
                                          mean.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
            const auto r = window_max(row, w);
            std::copy(r.begin(), r.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = rows[i * n + j];
            const auto c = window_max(col, w);
            for (std::size_t i = 0; i < n; ++i) best[i * n + j] = std::max(best[i * n + j], c[i]);
        }
    }
    return GridFunction(spec, std::move(best));
}

}  // namespace lpkit
