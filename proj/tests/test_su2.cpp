#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "magflow/su2.hpp"
#include "support.hpp"

using namespace magflow::su2;
using testsupport::cd;

namespace {

Su2Vector random_vector(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng)};
}

Su2Element random_element(std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    Su2Element e{d(rng), d(rng), d(rng), d(rng)};
    return normalized(e);
}

double mat_norm_diff(const testsupport::Mat2& a, const testsupport::Mat2& b) {
    double m = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

} // namespace

TEST_CASE("quaternion product matches 2x2 matrix product") {
    auto rng = testsupport::seeded_rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Su2Element a = random_element(rng);
        const Su2Element b = random_element(rng);
        const Su2Element ab = quat_mul_raw(a, b);
        const auto mab = testsupport::mat_mul(to_matrix(a), to_matrix(b));
        const Su2Element expect = testsupport::element_from_matrix(mab);
        CHECK(std::abs(ab.x0 - expect.x0) < 1e-14);
        CHECK(std::abs(ab.x1 - expect.x1) < 1e-14);
        CHECK(std::abs(ab.x2 - expect.x2) < 1e-14);
        CHECK(std::abs(ab.x3 - expect.x3) < 1e-14);
    }
}

TEST_CASE("basis products follow the quaternion table") {
    const Su2Element i{0, 1, 0, 0};
    const Su2Element j{0, 0, 1, 0};
    const Su2Element k{0, 0, 0, 1};
    const auto expect = [](const Su2Element& got, double x0, double x1, double x2, double x3) {
        CHECK(got.x0 == x0);
        CHECK(got.x1 == x1);
        CHECK(got.x2 == x2);
        CHECK(got.x3 == x3);
    };
    expect(quat_mul_raw(i, j), 0, 0, 0, 1);   // ij = k
    expect(quat_mul_raw(j, k), 0, 1, 0, 0);   // jk = i
    expect(quat_mul_raw(k, i), 0, 0, 1, 0);   // ki = j
    expect(quat_mul_raw(i, i), -1, 0, 0, 0);  // i^2 = -1
    expect(quat_mul_raw(j, j), -1, 0, 0, 0);
    expect(quat_mul_raw(k, k), -1, 0, 0, 0);
}

TEST_CASE("normalization is the only mutation and unit norm is preserved") {
    auto rng = testsupport::seeded_rng(12);
    Su2Element g = identity();
    for (int step = 0; step < 2000; ++step) {
        g = quat_mul(g, exp_su2(random_vector(rng, 0.1)));
        CHECK(std::abs(norm(g) - 1.0) < 1e-15);
    }
    CHECK_THROWS_AS(normalized(Su2Element{0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("conjugate inverts unit elements") {
    auto rng = testsupport::seeded_rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Su2Element a = random_element(rng);
        const Su2Element e = quat_mul_raw(a, conjugate(a));
        CHECK(std::abs(e.x0 - 1.0) < 1e-15);
        CHECK(std::abs(e.x1) < 1e-15);
        CHECK(std::abs(e.x2) < 1e-15);
        CHECK(std::abs(e.x3) < 1e-15);
    }
}

TEST_CASE("algebra inner product equals -trace(XY)/2 on matrices") {
    auto rng = testsupport::seeded_rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const Su2Vector x = random_vector(rng, 2.0);
        const Su2Vector y = random_vector(rng, 2.0);
        const auto mx = to_matrix(x);
        const auto my = to_matrix(y);
        const auto prod = testsupport::mat_mul(mx, my);
        const cd trace = prod[0][0] + prod[1][1];
        CHECK(std::abs(trace.imag()) < 1e-13);
        CHECK(inner_bi(x, y) == doctest::Approx(-0.5 * trace.real()).epsilon(1e-13));
    }
}

TEST_CASE("bracket matches matrix commutator") {
    auto rng = testsupport::seeded_rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const Su2Vector x = random_vector(rng, 2.0);
        const Su2Vector y = random_vector(rng, 2.0);
        const Su2Vector b = bracket(x, y);
        const auto mx = to_matrix(x);
        const auto my = to_matrix(y);
        const auto comm = testsupport::mat_add(testsupport::mat_mul(mx, my),
                                               testsupport::mat_scale(testsupport::mat_mul(my, mx), cd(-1.0)));
        CHECK(mat_norm_diff(to_matrix(b), comm) < 1e-13);
    }
}

TEST_CASE("bracket identities: antisymmetry and Jacobi") {
    auto rng = testsupport::seeded_rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        const Su2Vector x = random_vector(rng, 3.0);
        const Su2Vector y = random_vector(rng, 3.0);
        const Su2Vector z = random_vector(rng, 3.0);
        const Su2Vector anti = bracket(x, y) + bracket(y, x);
        CHECK(norm(anti) < 1e-12);
        const Su2Vector jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        CHECK(norm(jac) < 1e-12);
    }
}

TEST_CASE("exponential matches 30-term matrix series up to |X| = pi") {
    auto rng = testsupport::seeded_rng(17);
    std::uniform_real_distribution<double> mag(0.0, M_PI);
    for (int trial = 0; trial < 60; ++trial) {
        Su2Vector dir = random_vector(rng, 1.0);
        const double n = norm(dir);
        if (n < 1e-9) continue;
        const double t = mag(rng);
        const Su2Vector x = (t / n) * dir;
        const Su2Element got = exp_su2(x);
        const Su2Element expect = testsupport::element_from_matrix(testsupport::mat_exp_series(to_matrix(x)));
        CHECK(std::abs(got.x0 - expect.x0) < 1e-12);
        CHECK(std::abs(got.x1 - expect.x1) < 1e-12);
        CHECK(std::abs(got.x2 - expect.x2) < 1e-12);
        CHECK(std::abs(got.x3 - expect.x3) < 1e-12);
    }
}

TEST_CASE("exponential of tiny arguments stays accurate and unit") {
    for (double t : {1e-7, 1e-9, 1e-12, 0.0}) {
        const Su2Element e = exp_su2(Su2Vector{t, 0, 0});
        CHECK(std::abs(norm(e) - 1.0) < 1e-15);
        CHECK(std::abs(e.x1 - std::sin(t)) < 1e-18);
        CHECK(std::abs(e.x0 - std::cos(t)) < 1e-16);
    }
}

TEST_CASE("adjoint action is conjugation and preserves the inner product") {
    auto rng = testsupport::seeded_rng(18);
    for (int trial = 0; trial < 30; ++trial) {
        const Su2Element a = random_element(rng);
        const Su2Vector x = random_vector(rng, 2.0);
        const Su2Vector ax = ad_action(a, x);
        // matrix route: A X A^{-1}
        const auto m = testsupport::mat_mul(testsupport::mat_mul(to_matrix(a), to_matrix(x)),
                                            to_matrix(conjugate(a)));
        CHECK(mat_norm_diff(to_matrix(ax), m) < 1e-13);
        CHECK(inner_bi(ax, ax) == doctest::Approx(inner_bi(x, x)).epsilon(1e-12));
    }
}

TEST_CASE("adjoint action of exp(t k) rotates the (i, j) plane by 2t") {
    const double t = 0.37;
    const Su2Element g = exp_su2(Su2Vector{0, 0, t});
    const Su2Vector gi = ad_action(g, Su2Vector{1, 0, 0});
    CHECK(gi.v1 == doctest::Approx(std::cos(2 * t)).epsilon(1e-14));
    CHECK(gi.v2 == doctest::Approx(std::sin(2 * t)).epsilon(1e-14));
    CHECK(std::abs(gi.v3) < 1e-15);
    const Su2Vector gk = ad_action(g, Su2Vector{0, 0, 1});
    CHECK(std::abs(gk.v1) < 1e-15);
    CHECK(std::abs(gk.v2) < 1e-15);
    CHECK(gk.v3 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exp is a one-parameter homomorphism along a fixed direction") {
    const Su2Vector x{0.3, -0.4, 0.5};
    const Su2Element a = exp_su2(x);
    const Su2Element b = exp_su2(2.0 * x);
    const Su2Element aa = quat_mul_raw(a, a);
    CHECK(dist(aa, b) < 1e-14);
}

TEST_CASE("dist is bi-invariant under raw multiplication") {
    auto rng = testsupport::seeded_rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const Su2Element a = random_element(rng);
        const Su2Element b = random_element(rng);
        const Su2Element g = random_element(rng);
        CHECK(dist(quat_mul_raw(g, a), quat_mul_raw(g, b)) == doctest::Approx(dist(a, b)).epsilon(1e-12));
        CHECK(dist(quat_mul_raw(a, g), quat_mul_raw(b, g)) == doctest::Approx(dist(a, b)).epsilon(1e-12));
    }
}
