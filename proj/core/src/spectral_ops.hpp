#pragma once

#include <functional>
#include <string_view>

#include "lpkit/grid.hpp"

namespace lpkit::detail {

// Multiplier evaluated per storage slot. `nyq` flags, per axis, whether the slot
// holds the unpaired Nyquist frequency -N/2 on that axis.
using SlotMultiplier = std::function<Complex(const Point& xi, double abs_xi, const std::array<bool, 2>& nyq)>;

Spectrum apply_multiplier(const Spectrum& fhat, const SlotMultiplier& m, bool preserves_real);

// 2 pi i xi_axis, zero on the Nyquist slot of that axis so real inputs stay real.
Complex derivative_symbol(const Point& xi, const std::array<bool, 2>& nyq, int axis);

// Throws PreconditionError unless |mean f| <= 1e-12 * max|f|.
void require_zero_mean(const GridFunction& f, std::string_view where);

}  // namespace lpkit::detail
