#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "magflow/flow.hpp"
#include "support.hpp"

using namespace magflow;
using flow::FrenetInvariants;
using sasaki::FrameVector;
using sasaki::SasakiParams;
using su2::Su2Element;

namespace {

FrameVector unit_tangent(double cos_theta, double phase = 0.0) {
    const double st = std::sqrt(1.0 - cos_theta * cos_theta);
    return {st * std::sin(phase), st * std::cos(phase), cos_theta};
}

} // namespace

TEST_CASE("tangent field conserves speed and vertical component") {
    const SasakiParams p = sasaki::params_from_alpha(2.0, 1.5);
    const FrameVector t{0.3, -0.8, 0.52};
    const FrameVector d = flow::lorentz_rhs(p, t);
    CHECK(std::abs(sasaki::metric_g(t, d)) < 1e-15);
    CHECK(d.a3 == 0.0);
}

TEST_CASE("closed-form tangent solves the tangent system") {
    const SasakiParams p = sasaki::params_from_alpha(0.7, -1.2);
    const FrameVector t0 = unit_tangent(0.4, 0.9);
    const double h = 1e-5;
    for (double s : {0.0, 0.8, 3.1, 10.0}) {
        const FrameVector tm = flow::tangent_closed_form(p, t0, s - h);
        const FrameVector tc = flow::tangent_closed_form(p, t0, s);
        const FrameVector tp = flow::tangent_closed_form(p, t0, s + h);
        const FrameVector fd = (1.0 / (2.0 * h)) * (tp - tm);
        const FrameVector rhs = flow::lorentz_rhs(p, tc);
        CHECK(std::abs(fd.a1 - rhs.a1) < 1e-8);
        CHECK(std::abs(fd.a2 - rhs.a2) < 1e-8);
        CHECK(std::abs(fd.a3 - rhs.a3) < 1e-12);
        CHECK(std::abs(sasaki::metric_g(tc, tc) - 1.0) < 1e-14);
    }
}

TEST_CASE("closed-form trajectory stays on the sphere and starts correctly") {
    auto rng = testsupport::seeded_rng(31);
    std::uniform_real_distribution<double> ad(0.2, 5.0), qd(-3.0, 3.0), cd(-0.99, 0.99);
    for (int trial = 0; trial < 10; ++trial) {
        const SasakiParams p = sasaki::params_from_alpha(ad(rng), qd(rng));
        const FrameVector t0 = unit_tangent(cd(rng), cd(rng));
        const Su2Element g0 = su2::exp_su2({0.3, -0.2, 0.9});
        const auto [pos0, tan0] = flow::trajectory_closed_form(p, g0, t0, 0.0);
        CHECK(su2::dist(pos0, g0) < 1e-15);
        CHECK(std::abs(tan0.a1 - t0.a1) < 1e-15);
        for (double s : {0.5, 2.0, 7.7, 40.0}) {
            const auto [pos, tan] = flow::trajectory_closed_form(p, g0, t0, s);
            CHECK(std::abs(su2::norm(pos) - 1.0) < 1e-12);
            CHECK(std::abs(sasaki::metric_g(tan, tan) - 1.0) < 1e-14);
            CHECK(std::abs(tan.a3 - t0.a3) < 1e-15);
        }
    }
}

TEST_CASE("closed-form trajectory velocity equals the left-trivialized tangent") {
    const SasakiParams p = sasaki::params_from_alpha(2.0, 1.5);
    const FrameVector t0 = unit_tangent(0.3);
    const Su2Element g0 = su2::identity();
    const double h = 1e-5;
    for (double s : {0.0, 1.3, 6.0}) {
        const auto pm = flow::trajectory_closed_form(p, g0, t0, s - h).first;
        const auto pc = flow::trajectory_closed_form(p, g0, t0, s);
        const auto pp = flow::trajectory_closed_form(p, g0, t0, s + h).first;
        // central difference of position, pulled back to the algebra
        const Su2Element vel_amb{(pp.x0 - pm.x0) / (2 * h), (pp.x1 - pm.x1) / (2 * h),
                                 (pp.x2 - pm.x2) / (2 * h), (pp.x3 - pm.x3) / (2 * h)};
        const Su2Element triv = su2::quat_mul_raw(su2::conjugate(pc.first), vel_amb);
        const su2::Su2Vector want = sasaki::to_algebra(pc.second, p);
        CHECK(std::abs(triv.x0) < 1e-8);
        CHECK(std::abs(triv.x1 - want.v1) < 1e-8);
        CHECK(std::abs(triv.x2 - want.v2) < 1e-8);
        CHECK(std::abs(triv.x3 - want.v3) < 1e-8);
    }
}

TEST_CASE("integrator tracks the closed form and conserves invariants") {
    const SasakiParams p = sasaki::params_from_alpha(2.0, 1.5);
    const FrameVector t0 = unit_tangent(0.3);
    const Su2Element g0 = su2::identity();
    const double ds = 1e-3;
    const int n = 2000;
    const auto samples = flow::integrate(p, g0, t0, ds, n);
    REQUIRE(samples.size() == static_cast<std::size_t>(n) + 1);
    CHECK(samples.front().s == 0.0);
    double worst_pos = 0.0, worst_tan = 0.0;
    for (const auto& row : samples) {
        const auto [pos, tan] = flow::trajectory_closed_form(p, g0, t0, row.s);
        worst_pos = std::max(worst_pos, su2::dist(row.position, pos));
        worst_tan = std::max(worst_tan,
                             std::max({std::abs(row.tangent.a1 - tan.a1),
                                       std::abs(row.tangent.a2 - tan.a2),
                                       std::abs(row.tangent.a3 - tan.a3)}));
        CHECK(row.residual_norm < 1e-12);
        CHECK(row.residual_speed < 1e-11);
        CHECK(row.residual_angle < 1e-12);
    }
    CHECK(worst_pos < 1e-10);
    CHECK(worst_tan < 1e-10);
}

TEST_CASE("integrator converges at fourth order") {
    const SasakiParams p = sasaki::params_from_alpha(0.5, 2.0);
    const FrameVector t0 = unit_tangent(-0.4, 0.3);
    const Su2Element g0 = su2::identity();
    const auto err = [&](double ds, int n) {
        const auto samples = flow::integrate(p, g0, t0, ds, n);
        const auto& last = samples.back();
        const auto [pos, tan] = flow::trajectory_closed_form(p, g0, t0, last.s);
        (void)tan;
        return su2::dist(last.position, pos);
    };
    const double e1 = err(0.02, 500);
    const double e2 = err(0.01, 1000);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 24.0);
}

TEST_CASE("integrator input validation") {
    const SasakiParams p = sasaki::params_from_alpha(1.0, 1.0);
    const Su2Element g0 = su2::identity();
    CHECK_THROWS_AS((void)flow::integrate(p, g0, FrameVector{0, 0.9, 0.3}, 1e-3, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)flow::integrate(p, g0, unit_tangent(0.3), 0.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)flow::integrate(p, g0, unit_tangent(0.3), 1e-3, -1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)flow::trajectory_closed_form(p, g0, FrameVector{1, 1, 1}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("curvature and torsion of trajectories") {
    const SasakiParams p = sasaki::params_from_alpha(1.0, 2.0);
    const double ct = 0.6;
    const FrenetInvariants inv = flow::frenet(p, ct);
    const double st = std::sqrt(1 - ct * ct);
    CHECK(inv.kappa == doctest::Approx(2.0 * st).epsilon(1e-14));
    REQUIRE(inv.tau.has_value());
    CHECK(*inv.tau == doctest::Approx(2.0 * ct - 1.0).epsilon(1e-14));
    CHECK(inv.epsilon == 1);
    CHECK_FALSE(inv.geodesic);
    // q^2 = kappa^2 + (tau + 1)^2 ties charge to the invariants.
    CHECK(inv.kappa * inv.kappa + (*inv.tau + 1) * (*inv.tau + 1) ==
          doctest::Approx(p.q * p.q).epsilon(1e-13));

    const FrenetInvariants geo = flow::frenet(sasaki::params_from_alpha(1.0, 0.0), 0.6);
    CHECK(geo.geodesic);
    CHECK(geo.kappa == 0.0);
    CHECK_FALSE(geo.tau.has_value());
    CHECK(geo.epsilon == 0);

    const FrenetInvariants reeb = flow::frenet(p, 1.0);
    CHECK(reeb.geodesic);
    CHECK_FALSE(reeb.tau.has_value());

    const FrenetInvariants neg = flow::frenet(sasaki::params_from_alpha(1.0, -0.5), 0.0);
    CHECK(neg.epsilon == -1);
    CHECK(neg.kappa == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS((void)flow::frenet(p, 1.001), std::invalid_argument);
}

TEST_CASE("reference curve lies on the unit sphere") {
    for (double ct : {29.0 / 36.0, 29.0 / 37.0, 0.0, -0.95}) {
        for (int i = 0; i <= 300; ++i) {
            const double s = i * 0.13;
            CHECK(std::abs(su2::norm(flow::ikawa_curve(s, ct)) - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)flow::ikawa_curve(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)flow::ikawa_curve(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("reference curve is the unit-charge trajectory on the round sphere") {
    const SasakiParams p = sasaki::params_from_alpha(1.0, 1.0);
    for (double ct : {29.0 / 36.0, 0.3, -0.7}) {
        const FrameVector t0{0.0, std::sqrt(1 - ct * ct), ct};
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double s = i * 0.11;
            const auto [pos, tan] = flow::trajectory_closed_form(p, su2::identity(), t0, s);
            (void)tan;
            worst = std::max(worst, su2::dist(pos, flow::ikawa_curve(s, ct)));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("reference curve solves the field equation: ambient second differences") {
    // On the round sphere the covariant acceleration is gamma'' + gamma, and
    // the field equation demands it equal q * phi(T). The residual of the
    // centered second difference shrinks by ~4x when h is halved, the
    // signature of a genuine O(h^2) truncation term around a true solution.
    const double ct = 0.3;
    const auto residual = [&](double s, double h) {
        const Su2Element gm = flow::ikawa_curve(s - h, ct);
        const Su2Element gc = flow::ikawa_curve(s, ct);
        const Su2Element gp = flow::ikawa_curve(s + h, ct);
        const Su2Element acc{testsupport::second_difference(gm.x0, gc.x0, gp.x0, h) + gc.x0,
                             testsupport::second_difference(gm.x1, gc.x1, gp.x1, h) + gc.x1,
                             testsupport::second_difference(gm.x2, gc.x2, gp.x2, h) + gc.x2,
                             testsupport::second_difference(gm.x3, gc.x3, gp.x3, h) + gc.x3};
        // first derivative by central difference, trivialized
        const Su2Element vel{(gp.x0 - gm.x0) / (2 * h), (gp.x1 - gm.x1) / (2 * h),
                             (gp.x2 - gm.x2) / (2 * h), (gp.x3 - gm.x3) / (2 * h)};
        const Su2Element tv = su2::quat_mul_raw(su2::conjugate(gc), vel);
        const FrameVector t{tv.x1, tv.x2, tv.x3};
        const FrameVector force = flow::frenet(sasaki::params_from_alpha(1, 1), ct).epsilon *
                                  sasaki::structure_phi(t);
        const su2::Su2Vector fv{force.a1, force.a2, force.a3};
        const Su2Element famb = su2::quat_mul_raw(gc, Su2Element{0, fv.v1, fv.v2, fv.v3});
        return std::sqrt((acc.x0 - famb.x0) * (acc.x0 - famb.x0) +
                         (acc.x1 - famb.x1) * (acc.x1 - famb.x1) +
                         (acc.x2 - famb.x2) * (acc.x2 - famb.x2) +
                         (acc.x3 - famb.x3) * (acc.x3 - famb.x3));
    };
    const double r1 = residual(2.0, 1e-3);
    const double r2 = residual(2.0, 5e-4);
    CHECK(r1 / r2 > 3.5);
    CHECK(r1 / r2 < 4.5);
}

TEST_CASE("reference curve closes at the predicted length for omega = 2/3") {
    const double ct = 29.0 / 36.0;
    const Su2Element start = flow::ikawa_curve(0.0, ct);
    CHECK(su2::dist(flow::ikawa_curve(12 * M_PI, ct), start) < 1e-12);
    // no earlier closure at the natural candidates
    CHECK(su2::dist(flow::ikawa_curve(6 * M_PI, ct), start) > 0.5);
    CHECK(su2::dist(flow::ikawa_curve(4 * M_PI, ct), start) > 0.5);
}

TEST_CASE("model helix validates the unit-speed constraint") {
    CHECK_THROWS_AS((void)flow::model_helix(1.0, 2.0, 1.0, 0.3), std::invalid_argument);
    const auto [a, b] = flow::helix_periodic_params(2.0 / 3.0, 0.7);
    CHECK(a * a * std::cos(0.7) * std::cos(0.7) + b * b * std::sin(0.7) * std::sin(0.7) ==
          doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i <= 100; ++i) {
        CHECK(std::abs(su2::norm(flow::model_helix(i * 0.2, a, b, 0.7)) - 1.0) < 1e-14);
    }
}

TEST_CASE("reference curve is congruent to a doubly-rotating helix") {
    // Congruence preserves chordal distance from the start point, so the two
    // distance profiles must agree identically.
    for (double ct : {29.0 / 36.0, 0.3, -0.6}) {
        const double omega = std::sqrt(1.25 - ct);
        const double a = omega + 0.5;
        const double b = omega - 0.5;
        const double psi = std::acos(std::sqrt((1.0 - b * b) / (2.0 * omega)));
        const Su2Element h0 = flow::model_helix(0.0, a, b, psi);
        const Su2Element g0 = flow::ikawa_curve(0.0, ct);
        for (int i = 1; i <= 150; ++i) {
            const double s = i * 0.17;
            const double dh = su2::dist(flow::model_helix(s, a, b, psi), h0);
            const double dg = su2::dist(flow::ikawa_curve(s, ct), g0);
            CHECK(std::abs(dh - dg) < 1e-12);
        }
    }
}
