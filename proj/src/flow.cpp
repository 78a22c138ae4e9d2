#include "magflow/flow.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "magflow/rkmk.hpp"

namespace magflow::flow {

using sasaki::FrameVector;
using sasaki::SasakiParams;
using su2::Su2Element;
using su2::Su2Vector;

namespace {

double effective_rate(const SasakiParams& p, double t3) {
    return p.q + 0.5 * (p.c - 1.0) * t3;
}

void require_unit_tangent(const FrameVector& t0) {
    const double n = std::sqrt(sasaki::metric_g(t0, t0));
    if (std::abs(n - 1.0) > 1e-10) {
        throw std::invalid_argument("flow: initial tangent must have unit length");
    }
}

} // namespace

FrameVector lorentz_rhs(const SasakiParams& p, const FrameVector& t) {
    const double qt = effective_rate(p, t.a3);
    return {qt * t.a2, -qt * t.a1, 0.0};
}

FrameVector tangent_closed_form(const SasakiParams& p, const FrameVector& t0, double s) {
    const double qt = effective_rate(p, t0.a3);
    const double cs = std::cos(qt * s);
    const double sn = std::sin(qt * s);
    return {cs * t0.a1 + sn * t0.a2, -sn * t0.a1 + cs * t0.a2, t0.a3};
}

std::pair<Su2Element, FrameVector> trajectory_closed_form(const SasakiParams& p,
                                                          const Su2Element& gamma0,
                                                          const FrameVector& t0, double s) {
    require_unit_tangent(t0);
    const double qt = effective_rate(p, t0.a3);
    const double sq = std::sqrt(p.alpha);
    // The vertical rotation exp(s*qt/2 * k) undoes the frame rotation of the
    // tangent; what remains is the fixed one-parameter subgroup of axis:
    const Su2Vector axis{t0.a1 / sq, t0.a2 / sq, t0.a3 / p.alpha - 0.5 * qt};
    const Su2Element body = su2::exp_su2(s * axis);
    const Su2Element twist = su2::exp_su2(Su2Vector{0.0, 0.0, 0.5 * qt * s});
    const Su2Element pos = su2::quat_mul(su2::quat_mul(gamma0, body), twist);
    return {pos, tangent_closed_form(p, t0, s)};
}

std::vector<TrajectorySample> integrate(const SasakiParams& p, const Su2Element& gamma0,
                                        const FrameVector& t0, double ds, int n_steps) {
    if (!(ds > 0.0) || !std::isfinite(ds)) {
        throw std::invalid_argument("flow: step size must be positive");
    }
    if (n_steps < 0) throw std::invalid_argument("flow: step count must be non-negative");
    require_unit_tangent(t0);

    std::vector<TrajectorySample> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);

    Su2Element pos = su2::normalized(gamma0);
    FrameVector tan = t0;
    const double angle0 = t0.a3;

    const auto sample = [&](int step, double drift) {
        TrajectorySample row;
        row.s = ds * step;
        row.position = pos;
        row.tangent = tan;
        row.residual_norm = drift;
        row.residual_speed = std::abs(std::sqrt(sasaki::metric_g(tan, tan)) - 1.0);
        row.residual_angle = std::abs(tan.a3 - angle0);
        out.push_back(row);
    };
    sample(0, std::abs(su2::norm(gamma0) - 1.0));

    // Joint RK4 on (u, T): u lives in the algebra and restarts at zero each
    // step, position advances by one exponential of the assembled u.
    struct Deriv {
        Su2Vector du;
        FrameVector dt;
    };
    const auto f = [&](const Su2Vector& u, const FrameVector& t) {
        return Deriv{rkmk::dexpinv(u, sasaki::to_algebra(t, p)), lorentz_rhs(p, t)};
    };
    for (int step = 1; step <= n_steps; ++step) {
        const Deriv k1 = f(Su2Vector{}, tan);
        const Deriv k2 = f(0.5 * ds * k1.du, tan + 0.5 * ds * k1.dt);
        const Deriv k3 = f(0.5 * ds * k2.du, tan + 0.5 * ds * k2.dt);
        const Deriv k4 = f(ds * k3.du, tan + ds * k3.dt);
        const Su2Vector u =
            (ds / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        const Su2Element raw = su2::quat_mul_raw(pos, su2::exp_su2(u));
        const double drift = std::abs(su2::norm(raw) - 1.0);
        pos = su2::normalized(raw);
        tan = tan + (ds / 6.0) * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt);
        sample(step, drift);
    }
    return out;
}

FrenetInvariants frenet(const SasakiParams& p, double cos_theta) {
    if (std::abs(cos_theta) > 1.0) {
        throw std::invalid_argument("flow: cos(theta) must lie in [-1, 1]");
    }
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    FrenetInvariants inv;
    inv.theta = std::acos(cos_theta);
    inv.kappa = std::abs(p.q) * sin_theta;
    inv.epsilon = (p.q > 0.0) - (p.q < 0.0);
    inv.geodesic = inv.kappa == 0.0;
    if (p.q != 0.0 && sin_theta > 0.0) {
        inv.tau = p.q * cos_theta - 1.0;
    }
    return inv;
}

Su2Element ikawa_curve(double s, double cos_theta) {
    if (!(std::abs(cos_theta) < 1.0)) {
        throw std::invalid_argument("flow: reference curve needs |cos(theta)| < 1");
    }
    const double omega = std::sqrt(1.25 - cos_theta);
    const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
    const double ch = std::cos(0.5 * s);
    const double sh = std::sin(0.5 * s);
    const double u = std::cos(omega * s);
    const double v = (cos_theta - 0.5) * std::sin(omega * s) / omega;
    const double w = sin_theta * std::sin(omega * s) / omega;
    // Deliberately not normalized: lying on the unit sphere is a property of
    // the formula and is checked downstream, not enforced here.
    return Su2Element{ch * u - sh * v, sh * w, ch * w, sh * u + ch * v};
}

Su2Element model_helix(double s, double a, double b, double psi) {
    const double cp = std::cos(psi);
    const double sp = std::sin(psi);
    if (std::abs(a * a * cp * cp + b * b * sp * sp - 1.0) > 1e-10) {
        throw std::invalid_argument("flow: helix rates must satisfy the unit-speed constraint");
    }
    return Su2Element{cp * std::cos(a * s), sp * std::sin(b * s), sp * std::cos(b * s),
                      cp * std::sin(a * s)};
}

std::pair<double, double> helix_periodic_params(double ratio, double psi) {
    const double cp = std::cos(psi);
    const double sp = std::sin(psi);
    const double a = 1.0 / std::sqrt(ratio * ratio * sp * sp + cp * cp);
    return {a, ratio * a};
}

} // namespace magflow::flow
