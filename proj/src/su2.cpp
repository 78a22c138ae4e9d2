#include "magflow/su2.hpp"

#include <cmath>
#include <stdexcept>

namespace magflow::su2 {

double norm(const Su2Element& a) {
    return std::sqrt(a.x0 * a.x0 + a.x1 * a.x1 + a.x2 * a.x2 + a.x3 * a.x3);
}

Su2Element normalized(const Su2Element& a) {
    const double n = norm(a);
    if (n <= 0.0 || !std::isfinite(n)) {
        throw std::invalid_argument("su2: cannot normalize a zero or non-finite quaternion");
    }
    return {a.x0 / n, a.x1 / n, a.x2 / n, a.x3 / n};
}

Su2Element conjugate(const Su2Element& a) { return {a.x0, -a.x1, -a.x2, -a.x3}; }

Su2Element quat_mul_raw(const Su2Element& a, const Su2Element& b) {
    return {
        a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
        a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
        a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
        a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
    };
}

Su2Element quat_mul(const Su2Element& a, const Su2Element& b) {
    return normalized(quat_mul_raw(a, b));
}

double dist(const Su2Element& a, const Su2Element& b) {
    const double d0 = a.x0 - b.x0;
    const double d1 = a.x1 - b.x1;
    const double d2 = a.x2 - b.x2;
    const double d3 = a.x3 - b.x3;
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3);
}

double inner_bi(const Su2Vector& x, const Su2Vector& y) {
    return x.v1 * y.v1 + x.v2 * y.v2 + x.v3 * y.v3;
}

double norm(const Su2Vector& x) { return std::sqrt(inner_bi(x, x)); }

Su2Vector bracket(const Su2Vector& x, const Su2Vector& y) {
    return {
        2.0 * (x.v2 * y.v3 - x.v3 * y.v2),
        2.0 * (x.v3 * y.v1 - x.v1 * y.v3),
        2.0 * (x.v1 * y.v2 - x.v2 * y.v1),
    };
}

Su2Vector ad_action(const Su2Element& a, const Su2Vector& x) {
    // a (0, x) a^{-1}; the real part of the product vanishes identically.
    const Su2Element px{0.0, x.v1, x.v2, x.v3};
    const Su2Element r = quat_mul_raw(quat_mul_raw(a, px), conjugate(a));
    return {r.x1, r.x2, r.x3};
}

Su2Element exp_su2(const Su2Vector& x) {
    const double t = norm(x);
    double sinc; // sin(t)/t
    if (t < 1e-6) {
        const double t2 = t * t;
        sinc = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    } else {
        sinc = std::sin(t) / t;
    }
    return {std::cos(t), sinc * x.v1, sinc * x.v2, sinc * x.v3};
}

Mat2c to_matrix(const Su2Element& a) {
    using C = std::complex<double>;
    return {{{C(a.x0, a.x3), C(-a.x2, a.x1)}, {C(a.x2, a.x1), C(a.x0, -a.x3)}}};
}

Mat2c to_matrix(const Su2Vector& x) {
    using C = std::complex<double>;
    return {{{C(0.0, x.v3), C(-x.v2, x.v1)}, {C(x.v2, x.v1), C(0.0, -x.v3)}}};
}

} // namespace magflow::su2
