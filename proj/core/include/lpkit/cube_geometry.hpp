#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/grid.hpp"

namespace lpkit {

/// Exact integer type for squared distances and volumes in mask units.
__extension__ typedef __int128 wide_int;

/// Closed dyadic cube prod_i [m_i 2^{-k}, (m_i + 1) 2^{-k}].
struct DyadicCube {
    int dim = 1;
    int generation = 0;
    std::array<std::int64_t, 2> corner{};

    double side() const { return std::ldexp(1.0, -generation); }
    Point lower() const;
    Point center() const;
    double volume() const;
    DyadicCube parent() const;
    std::vector<DyadicCube> children() const;
    /// Nested-or-disjoint test: true iff this cube contains `other`.
    bool contains(const DyadicCube& other) const;

    friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

/**
 * Open subset of R^n (or of the torus [0, L)^n when periodic) described exactly.
 *
 * Two descriptions are supported: a finite union of open boxes inside [0, L]^n,
 * and the interior of a union of closed grid cells. All coordinates are kept
 * as integers in units of 2^{-40}, so box corners must be dyadic rationals.
 */
class OpenSetMask {
public:
    struct Box {
        Point lo{};
        Point hi{};
    };
    /// Closed axis-aligned box in integer units.
    struct IBox {
        std::array<std::int64_t, 2> lo{};
        std::array<std::int64_t, 2> hi{};
    };

    static constexpr int unit_exponent = 40;

    static OpenSetMask from_boxes(int dim, double period, const std::vector<Box>& boxes, bool periodic = false);
    /// Interior of the union of the closed cells whose flag is set.
    static OpenSetMask from_grid(const GridSpec& spec, const std::vector<bool>& flags, bool periodic = true);
    /// R^n itself; always throws DomainError since Whitney cubes need a proper subset.
    [[noreturn]] static OpenSetMask whole_space(int dim);

    int dim() const noexcept { return dim_; }
    double period() const noexcept { return period_; }
    bool periodic() const noexcept { return periodic_; }
    std::int64_t period_units() const noexcept { return period_units_; }

    bool contains(const Point& x) const;
    double volume() const;
    wide_int volume_units() const;

    /// Exact squared distance from a closed box (in integer units scaled by `scale`) to the complement.
    wide_int dist2_to_complement(const IBox& box, std::int64_t scale = 1) const;
    /// Exact measure of box intersected with the set, in units^n.
    wide_int intersection_volume(const IBox& box) const;

    IBox cube_box(const DyadicCube& q) const;

    const std::vector<IBox>& complement_atoms() const noexcept { return atoms_; }
    const std::vector<IBox>& cells() const noexcept { return cells_; }

private:
    OpenSetMask() = default;
    void finalize();
    std::size_t element_count(int axis) const;

    int dim_ = 1;
    double period_ = 1.0;
    bool periodic_ = false;
    std::int64_t period_units_ = 0;
    std::array<std::vector<std::int64_t>, 2> coords_;  // arrangement breakpoints per axis, including 0 and L
    std::vector<char> element_in_;                      // per arrangement element: inside the set
    std::vector<IBox> cells_;  // open arrangement cells inside the set (closures stored), sorted by lo[0]
    std::int64_t max_cell_width_ = 0;
    std::vector<IBox> atoms_;  // closed pieces of the complement adjacent to the set
};

struct ClauseResult {
    std::string name;
    bool passed = true;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct WhitneyDecomposition {
    OpenSetMask omega;
    std::vector<DyadicCube> cubes;
    std::vector<double> dist;      // dist(Q_j, complement), per cube
    std::vector<DyadicCube> frontier;  // generation-k_max cubes meeting the set but not selected
    int k_max = 0;
    double omega_volume = 0.0;
    double uncovered_volume = 0.0;  // measure of the set inside frontier cubes
};

/**
 * Whitney cubes of omega: every dyadic cube Q inside the set with
 * sqrt(n) l(Q) <= dist(Q, complement) whose parent fails that bound.
 * Recursion stops at generation k_max; leftovers are reported as frontier.
 */
WhitneyDecomposition whitney_decompose(const OpenSetMask& omega, int k_max);

/// Whitney clauses: disjoint cover, distance bounds, neighbour ratio, touch count and dilate overlap (eps = 1/10), checked exactly.
std::vector<ClauseResult> check_whitney_clauses(const WhitneyDecomposition& decomp);

enum class CubeRelation { near, far };

/// far iff |c(Q_m) - c(Q_j)| > 11 (sqrt(n) + 1) l(Q_m); not symmetric in (m, j).
CubeRelation classify_near_far(const WhitneyDecomposition& decomp, std::size_t m, std::size_t j);

/**
 * Near/far geometry over all ordered pairs: exact extreme distances for every
 * far pair against C3, C4 and the (sqrt(n)+1)/2 l(Q_j) bound, random point
 * samples for up to `sampled_pairs` far pairs, and ball containment of near cubes.
 */
std::vector<ClauseResult> check_near_far_geometry(const WhitneyDecomposition& decomp, std::uint64_t seed,
                                                  std::size_t samples_per_pair = 50,
                                                  std::size_t sampled_pairs = 2000);

/// Uncentered maximal function of |f|^p: the largest mean over periodic grid-aligned
/// cubes whose closure contains the sample point.
GridFunction hl_maximal(const GridFunction& f, double p_power);

struct BadPart {
    DyadicCube cube;
    std::vector<std::size_t> cells;  // grid cells covered by the cube
    std::vector<double> values;      // b_j on those cells

    GridFunction as_function(const GridSpec& spec) const;
};

struct CZDecomposition {
    GridFunction f;
    double p = 1.0;
    double alpha = 0.0;
    OpenSetMask omega;
    WhitneyDecomposition whitney;
    GridFunction good;
    std::vector<BadPart> bad_parts;
    std::vector<ClauseResult> clauses;

    GridFunction bad_sum() const;
    bool all_passed() const;
};

/// alpha outside (0, max|f|): carries the trivial decomposition g = f, b = 0.
class DegenerateInputError : public std::domain_error {
public:
    DegenerateInputError(const std::string& what, GridFunction trivial_good)
        : std::domain_error(what), good(std::move(trivial_good)) {}
    GridFunction good;
};

/**
 * Calderon-Zygmund decomposition at level alpha on the torus. The period must
 * be a power of two so Whitney cubes align with grid cells; cubes smaller than
 * a cell keep g = f there.
 */
CZDecomposition cz_decompose(const GridFunction& f, double p, double alpha, int extra_generations = 6);

}  // namespace lpkit
