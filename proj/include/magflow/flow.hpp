#pragma once

// Charged-particle trajectories for the contact magnetic field q * dEta on
// the deformed sphere. The tangent written in the orthonormal frame obeys a
// linear rotation system, so every trajectory has a closed form; the
// numerical integrator exists to validate that form and to exercise the
// geometry along arbitrary curves.

#include <optional>
#include <vector>

#include "magflow/sasaki.hpp"
#include "magflow/su2.hpp"

namespace magflow::flow {

struct TrajectorySample {
    double s = 0.0;
    su2::Su2Element position;
    sasaki::FrameVector tangent;
    double residual_norm = 0.0;   // |1 - |gamma|| before the per-step renormalization
    double residual_speed = 0.0;  // |1 - |T||
    double residual_angle = 0.0;  // drift of the conserved contact angle T3
};

struct FrenetInvariants {
    double kappa = 0.0;
    std::optional<double> tau;  // defined only for non-geodesic curves with sin(theta) > 0
    double theta = 0.0;
    int epsilon = 0;  // sign of the charge; orientation of the Frenet frame
    bool geodesic = false;
};

// Right-hand side of the tangent system T' = q_eff * (T2, -T1, 0); the
// third component is conserved. q_eff is evaluated from the current T3 so
// the field is defined for any (not necessarily unit) tangent.
[[nodiscard]] sasaki::FrameVector lorentz_rhs(const sasaki::SasakiParams& p,
                                              const sasaki::FrameVector& t);

// Exact solution of the tangent system with initial value t0 at arclength s.
[[nodiscard]] sasaki::FrameVector tangent_closed_form(const sasaki::SasakiParams& p,
                                                      const sasaki::FrameVector& t0, double s);

// Exact trajectory through gamma0 with initial unit tangent t0: a product of
// two one-parameter subgroups, one fixed by the initial data and one along
// the vertical direction.
[[nodiscard]] std::pair<su2::Su2Element, sasaki::FrameVector> trajectory_closed_form(
    const sasaki::SasakiParams& p, const su2::Su2Element& gamma0,
    const sasaki::FrameVector& t0, double s);

// Geometric RK4 integration of the coupled (position, tangent) system.
// Returns n_steps + 1 samples including the initial state. Requires ds > 0
// and a unit initial tangent (tolerance 1e-10).
[[nodiscard]] std::vector<TrajectorySample> integrate(const sasaki::SasakiParams& p,
                                                      const su2::Su2Element& gamma0,
                                                      const sasaki::FrameVector& t0, double ds,
                                                      int n_steps);

// Curvature and torsion of the trajectory with contact angle theta.
[[nodiscard]] FrenetInvariants frenet(const sasaki::SasakiParams& p, double cos_theta);

// Reference curve on the round sphere (alpha = 1, q = 1) with contact angle
// theta, |cos(theta)| < 1, starting at the identity.
[[nodiscard]] su2::Su2Element ikawa_curve(double s, double cos_theta);

// Doubly-rotating model curve. Requires a^2 cos^2(psi) + b^2 sin^2(psi) = 1
// (tolerance 1e-10) so the curve has unit speed on the round sphere.
[[nodiscard]] su2::Su2Element model_helix(double s, double a, double b, double psi);

// Rotation rates (a, b) with b/a = ratio, scaled to unit speed for the
// given psi. Any rational ratio closes the curve.
[[nodiscard]] std::pair<double, double> helix_periodic_params(double ratio, double psi);

} // namespace magflow::flow
