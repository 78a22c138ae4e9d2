#pragma once

// Fourth-order Runge-Kutta Munthe-Kaas stepper for flows on the group,
// gamma' = gamma * X(t, gamma) with X taking values in the algebra. The
// update lives in the algebra and is pushed back with one exponential per
// step, so group-valued state never accumulates additive drift.

#include <utility>

#include "magflow/su2.hpp"

namespace magflow::rkmk {

// Truncated inverse of the differential of exp at -u. Three terms suffice
// for a fourth-order method because u = O(h) within a step.
inline su2::Su2Vector dexpinv(const su2::Su2Vector& u, const su2::Su2Vector& w) {
    const su2::Su2Vector uw = su2::bracket(u, w);
    return w + 0.5 * uw + (1.0 / 12.0) * su2::bracket(u, uw);
}

template <typename VelFn>
su2::Su2Element rkmk4_step(const su2::Su2Element& y, double t, double h, VelFn&& vel) {
    using su2::Su2Vector;
    const Su2Vector k1 = vel(t, y);
    const Su2Vector u2 = (0.5 * h) * k1;
    const Su2Vector k2 = dexpinv(u2, vel(t + 0.5 * h, su2::quat_mul(y, su2::exp_su2(u2))));
    const Su2Vector u3 = (0.5 * h) * k2;
    const Su2Vector k3 = dexpinv(u3, vel(t + 0.5 * h, su2::quat_mul(y, su2::exp_su2(u3))));
    const Su2Vector u4 = h * k3;
    const Su2Vector k4 = dexpinv(u4, vel(t + h, su2::quat_mul(y, su2::exp_su2(u4))));
    const Su2Vector u = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return su2::quat_mul(y, su2::exp_su2(u));
}

} // namespace magflow::rkmk
