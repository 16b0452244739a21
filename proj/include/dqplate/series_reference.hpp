#pragma once

#include "dqplate/bc_builder.hpp"

#include <cstddef>

namespace dqplate {

/// Small-deflection center deflection of a uniformly loaded isotropic
/// rectangular plate, returned as the coefficient alpha in
/// w_center = alpha * q a^4 / D.
///
/// Simply supported: Navier double sine series.
/// Clamped: the same series superposed with unknown edge-moment
/// distributions, chosen so the edge slopes vanish; the inner sums over the
/// unbounded index use their closed (tanh) forms.
[[nodiscard]] double linear_center_coefficient(BcKind bc, double aspect_b_over_a = 1.0,
                                               std::size_t terms = 60);

}  // namespace dqplate
