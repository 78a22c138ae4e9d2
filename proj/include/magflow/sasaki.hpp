#pragma once

#include "magflow/su2.hpp"

namespace magflow::sasaki {

/// One member of the deformed-structure family on SU(2), plus the charge of
/// the flow under study. alpha > 0 selects the member; c and r are derived.
struct SasakiParams {
    double alpha = 1.0;
    double c = 1.0;     // 4/alpha - 3, always > -3
    double q = 1.0;     // charge of the flow; 0 gives geodesics
    double r = 0.5;     // sqrt(alpha)/2, radius of the quotient sphere
};

/// Tangent vector in components over the orthonormal frame {e1, e2, e3},
/// where e3 spans the preferred (fiber) direction.
struct FrameVector {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
};

/// Curvature data of one family member in the orthonormal frame.
struct CurvatureReport {
    double R1212 = 0.0;
    double R1313 = 0.0;
    double R2323 = 0.0;
    double K12 = 0.0;
    double K13 = 0.0;
    double K23 = 0.0;
    double Ric11 = 0.0;
    double Ric22 = 0.0;
    double Ric33 = 0.0;
    double scal = 0.0;
};

[[nodiscard]] SasakiParams params_from_alpha(double alpha, double q);

/// Deformation of the family parameter: c -> (c + 3)/a - 3 for a > 0.
[[nodiscard]] double d_homothetic(double c, double a);

inline FrameVector operator+(const FrameVector& a, const FrameVector& b) {
    return {a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3};
}
inline FrameVector operator-(const FrameVector& a, const FrameVector& b) {
    return {a.a1 - b.a1, a.a2 - b.a2, a.a3 - b.a3};
}
inline FrameVector operator*(double s, const FrameVector& a) {
    return {s * a.a1, s * a.a2, s * a.a3};
}

/// The (1,1) structure tensor: e1 -> -e2, e2 -> e1, e3 -> 0.
[[nodiscard]] FrameVector structure_phi(const FrameVector& v);

/// Contact form; in the orthonormal frame simply the e3 component.
[[nodiscard]] double eta(const FrameVector& v);

/// Dual vector field of the contact form.
[[nodiscard]] FrameVector reeb();

/// Metric in frame components; the frame is orthonormal by construction.
[[nodiscard]] double metric_g(const FrameVector& v, const FrameVector& w);

/// Lie bracket [e_i, e_j] expanded in the frame, computed from the algebra
/// commutator and the frame scaling, not from a stored table.
[[nodiscard]] FrameVector frame_bracket(int i, int j, const SasakiParams& p);

/// Connection coefficients nabla_{e_i} e_j from the Koszul formula applied to
/// the frame brackets. i, j in {1, 2, 3}.
[[nodiscard]] FrameVector levi_civita(int i, int j, const SasakiParams& p);

/// Curvature assembled from levi_civita and frame_bracket via
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
[[nodiscard]] CurvatureReport curvature_tables(const SasakiParams& p);

/// Effective rotation rate of the tangent frame: q + (c-1)/2 * cos(theta).
[[nodiscard]] double q_tilde(const SasakiParams& p, double cos_theta);

/// Frame components -> left-trivialized algebra vector:
/// (a1, a2, a3) -> a1*i/sqrt(alpha) + a2*j/sqrt(alpha) + a3*k/alpha.
[[nodiscard]] su2::Su2Vector to_algebra(const FrameVector& v, const SasakiParams& p);
[[nodiscard]] FrameVector to_frame(const su2::Su2Vector& x, const SasakiParams& p);

/// Metric evaluated on left-trivialized algebra vectors:
/// g(X,Y) = alpha*<X,Y> + alpha*(alpha-1)*<X,k><Y,k>.
[[nodiscard]] double metric_ambient(const su2::Su2Vector& x, const su2::Su2Vector& y,
                                    const SasakiParams& p);

} // namespace magflow::sasaki
