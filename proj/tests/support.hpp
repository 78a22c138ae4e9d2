#pragma once

// Shared helpers for the test suites. Everything here is deliberately
// implemented by a different route than the library code it checks:
// exponentials via raw matrix power series, rational search by brute force,
// lifts via explicit closed-form products.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include "magflow/su2.hpp"

namespace testsupport {

using cd = std::complex<double>;
using Mat2 = std::array<std::array<cd, 2>, 2>;

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

inline Mat2 mat_add(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat2 mat_scale(const Mat2& a, cd s) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][j] * s;
    return c;
}

inline Mat2 mat_identity() {
    return {{{cd(1.0), cd(0.0)}, {cd(0.0), cd(1.0)}}};
}

// Matrix exponential by 30-term power series. For operator norms up to ~pi
// the truncation error is far below double roundoff.
inline Mat2 mat_exp_series(const Mat2& a) {
    Mat2 sum = mat_identity();
    Mat2 term = mat_identity();
    for (int n = 1; n <= 30; ++n) {
        term = mat_scale(mat_mul(term, a), cd(1.0 / n));
        sum = mat_add(sum, term);
    }
    return sum;
}

// Recover the quaternion components from a 2x2 matrix in the embedding
// [[x0+i x3, -x2+i x1], [x2+i x1, x0-i x3]].
inline magflow::su2::Su2Element element_from_matrix(const Mat2& m) {
    magflow::su2::Su2Element e;
    e.x0 = 0.5 * (m[0][0].real() + m[1][1].real());
    e.x3 = 0.5 * (m[0][0].imag() - m[1][1].imag());
    e.x2 = 0.5 * (m[1][0].real() - m[0][1].real());
    e.x1 = 0.5 * (m[1][0].imag() + m[0][1].imag());
    return e;
}

// Exhaustive best rational approximation: scan every denominator up to
// max_den and keep the smallest error, preferring smaller denominators on
// ties. Quadratic in max_den but only used with small bounds in tests.
struct BruteRational {
    long long num = 0;
    long long den = 1;
    double error = 0.0;
};

inline BruteRational brute_force_best_rational(double x, long long max_den) {
    BruteRational best;
    best.num = static_cast<long long>(std::llround(x));
    best.den = 1;
    best.error = std::abs(x - static_cast<double>(best.num));
    for (long long d = 1; d <= max_den; ++d) {
        const long long n = static_cast<long long>(std::llround(x * static_cast<double>(d)));
        const double err = std::abs(x - static_cast<double>(n) / static_cast<double>(d));
        if (err < best.error - 1e-18) {
            best.num = n;
            best.den = d;
            best.error = err;
        }
    }
    const long long g = [](long long a, long long b) {
        a = std::abs(a);
        b = std::abs(b);
        while (b != 0) {
            const long long t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }(best.num, best.den);
    best.num /= g;
    best.den /= g;
    return best;
}

// Central second difference of a sampled path component.
inline double second_difference(double fm, double f0, double fp, double h) {
    return (fp - 2.0 * f0 + fm) / (h * h);
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed = 0x5a5a1234abcd9876ULL) {
    return std::mt19937_64(seed);
}

} // namespace testsupport
