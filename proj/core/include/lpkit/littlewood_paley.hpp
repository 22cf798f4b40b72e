#pragma once

#include <limits>
#include <vector>

#include "lpkit/grid.hpp"

namespace lpkit {

/**
 * Radial Littlewood-Paley profile psi_hat(xi) = H(|xi|) - H(2|xi|), where H is
 * 1 on [0,1], 0 on [2, inf) and smooth in between. Dyadic sums telescope, so
 * the partition of unity holds to rounding.
 */
class PsiProfile {
public:
    static constexpr int infinite = std::numeric_limits<int>::max();

    explicit PsiProfile(int smoothness);

    int smoothness() const noexcept { return smoothness_; }
    double support_lo() const noexcept { return 0.5; }
    double support_hi() const noexcept { return 2.0; }

    /// The cutoff H.
    double cutoff(double r) const;
    /// psi_hat at |xi| = r.
    double operator()(double r) const { return cutoff(r) - cutoff(2.0 * r); }
    /// psi_hat(2^{-j} r).
    double dilated(int j, double r) const;

    std::vector<double> tabulate(double r_max, std::size_t samples) const;

private:
    int smoothness_;
};

/// smoothness >= 2 selects a C^k polynomial transition; PsiProfile::infinite the exp(-1/u) splice.
PsiProfile build_psi(int smoothness = PsiProfile::infinite);

struct DyadicBlocks {
    GridFunction base;
    int j_min = 0;
    int j_max = 0;
    std::vector<GridFunction> blocks;  // blocks[j - j_min]

    const GridFunction& block(int j) const { return blocks.at(static_cast<std::size_t>(j - j_min)); }
    GridFunction sum() const;
};

/// Dyadic indices whose dilated support meets the nonzero grid frequencies.
std::pair<int, int> dyadic_range(const GridSpec& spec);

DyadicBlocks dyadic_blocks(const GridFunction& f, const PsiProfile& psi);

/// || (sum_j 2^{jsq} |f_j|^q)^{1/q} ||_p.
double tl_quasinorm(const GridFunction& f, double s, double p, double q, const PsiProfile& psi);

/// Multiplier |xi|^s with the DC mode removed.
GridFunction fractional_integral(const GridFunction& f, double s);

double sobolev_norm(const GridFunction& f, double s, double p);

/**
 * Singular-integral representative of Gamma(-s/2) I_s f:
 *   Gamma((s+n)/2) / pi^{s+n/2} * ( int_{|y|>=rho} f(x+y) |y|^{-n-s} dy - omega f(x) rho^{-s} / s
 *                                   + int_{|y|<rho} (f(x+y) - f(x)) |y|^{-n-s} dy )
 * by grid quadrature. The outer integral runs over three periods with an
 * analytic tail for the mean; the self cell is omitted.
 */
GridFunction frac_laplacian_singular(const GridFunction& f, double s, double split_radius = 1.0);

/// max_z |f_j(x - z)| / (1 + 2^{j+1} |z|)^{n/r} over all grid offsets z.
GridFunction pfs_maximal(const GridFunction& fj, int j, double r);

}  // namespace lpkit
