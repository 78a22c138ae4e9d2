#pragma once

#include <array>
#include <complex>

namespace magflow::su2 {

/// Point of SU(2) stored as a unit quaternion x0 + x1*i + x2*j + x3*k.
/// The matrix picture is [[x0 + i*x3, -x2 + i*x1], [x2 + i*x1, x0 - i*x3]].
struct Su2Element {
    double x0 = 1.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

/// Tangent vector at the identity, coefficients over the quaternionic basis {i, j, k}.
struct Su2Vector {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
};

using Mat2c = std::array<std::array<std::complex<double>, 2>, 2>;

[[nodiscard]] constexpr Su2Element identity() { return {1.0, 0.0, 0.0, 0.0}; }

[[nodiscard]] constexpr Su2Vector basis_i() { return {1.0, 0.0, 0.0}; }
[[nodiscard]] constexpr Su2Vector basis_j() { return {0.0, 1.0, 0.0}; }
[[nodiscard]] constexpr Su2Vector basis_k() { return {0.0, 0.0, 1.0}; }

[[nodiscard]] double norm(const Su2Element& a);
[[nodiscard]] Su2Element normalized(const Su2Element& a);

/// Quaternion inverse; equals the group inverse on the unit sphere.
[[nodiscard]] Su2Element conjugate(const Su2Element& a);

/// Plain quaternion product, no renormalization. Exposed so drift can be measured.
[[nodiscard]] Su2Element quat_mul_raw(const Su2Element& a, const Su2Element& b);

/// Group product. The result is divided by its norm; this is the only
/// mutation applied to stored state anywhere in the library.
[[nodiscard]] Su2Element quat_mul(const Su2Element& a, const Su2Element& b);

/// Chordal distance in the ambient R^4.
[[nodiscard]] double dist(const Su2Element& a, const Su2Element& b);

inline Su2Vector operator+(const Su2Vector& a, const Su2Vector& b) {
    return {a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3};
}
inline Su2Vector operator-(const Su2Vector& a, const Su2Vector& b) {
    return {a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3};
}
inline Su2Vector operator*(double s, const Su2Vector& a) {
    return {s * a.v1, s * a.v2, s * a.v3};
}

/// Bi-invariant inner product -tr(XY)/2. In {i, j, k} coordinates this is the
/// Euclidean dot product, which is what the implementation evaluates.
[[nodiscard]] double inner_bi(const Su2Vector& x, const Su2Vector& y);
[[nodiscard]] double norm(const Su2Vector& x);

/// Matrix commutator [X, Y] = XY - YX; equals twice the cross product of the
/// coordinate vectors.
[[nodiscard]] Su2Vector bracket(const Su2Vector& x, const Su2Vector& y);

/// Adjoint action a X a^{-1}; a rotation of the coordinate vector.
[[nodiscard]] Su2Vector ad_action(const Su2Element& a, const Su2Vector& x);

/// Group exponential. Closed form (cos|X|, sin|X| X/|X|) with a series
/// fallback for sin|X|/|X| once |X| < 1e-6.
[[nodiscard]] Su2Element exp_su2(const Su2Vector& x);

/// Read-only 2x2 complex views, used by tests to cross-check quaternion
/// arithmetic against literal matrix arithmetic.
[[nodiscard]] Mat2c to_matrix(const Su2Element& a);
[[nodiscard]] Mat2c to_matrix(const Su2Vector& x);

} // namespace magflow::su2
