#include "magflow/sasaki.hpp"

#include <cmath>
#include <stdexcept>

namespace magflow::sasaki {

namespace {

double component(const FrameVector& v, int k) {
    switch (k) {
        case 1: return v.a1;
        case 2: return v.a2;
        default: return v.a3;
    }
}

FrameVector basis(int k) {
    FrameVector v;
    switch (k) {
        case 1: v.a1 = 1.0; break;
        case 2: v.a2 = 1.0; break;
        default: v.a3 = 1.0; break;
    }
    return v;
}

void check_index(int i) {
    if (i < 1 || i > 3) throw std::out_of_range("sasaki: frame index must be 1, 2 or 3");
}

// nabla along e_i of a frame field with constant coefficients.
FrameVector nabla(int i, const FrameVector& w, const SasakiParams& p) {
    FrameVector out;
    for (int k = 1; k <= 3; ++k) {
        out = out + component(w, k) * levi_civita(i, k, p);
    }
    return out;
}

// nabla along a constant-coefficient direction of a constant-coefficient field.
FrameVector nabla_dir(const FrameVector& dir, const FrameVector& w, const SasakiParams& p) {
    FrameVector out;
    for (int k = 1; k <= 3; ++k) {
        out = out + component(dir, k) * nabla(k, w, p);
    }
    return out;
}

FrameVector curvature_op(int i, int j, int l, const SasakiParams& p) {
    // R(e_i, e_j) e_l
    const FrameVector a = nabla(i, nabla(j, basis(l), p), p);
    const FrameVector b = nabla(j, nabla(i, basis(l), p), p);
    const FrameVector c = nabla_dir(frame_bracket(i, j, p), basis(l), p);
    return a - b - c;
}

} // namespace

SasakiParams params_from_alpha(double alpha, double q) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("sasaki: alpha must be positive and finite");
    }
    SasakiParams p;
    p.alpha = alpha;
    p.c = 4.0 / alpha - 3.0;
    p.q = q;
    p.r = std::sqrt(alpha) / 2.0;
    return p;
}

double d_homothetic(double c, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("sasaki: deformation factor must be positive");
    if (!(c > -3.0)) throw std::invalid_argument("sasaki: family parameter must exceed -3");
    return (c + 3.0) / a - 3.0;
}

FrameVector structure_phi(const FrameVector& v) { return {v.a2, -v.a1, 0.0}; }

double eta(const FrameVector& v) { return v.a3; }

FrameVector reeb() { return {0.0, 0.0, 1.0}; }

double metric_g(const FrameVector& v, const FrameVector& w) {
    return v.a1 * w.a1 + v.a2 * w.a2 + v.a3 * w.a3;
}

FrameVector frame_bracket(int i, int j, const SasakiParams& p) {
    check_index(i);
    check_index(j);
    const su2::Su2Vector b = su2::bracket(to_algebra(basis(i), p), to_algebra(basis(j), p));
    return to_frame(b, p);
}

FrameVector levi_civita(int i, int j, const SasakiParams& p) {
    check_index(i);
    check_index(j);
    // Orthonormal frame, so 2*<nabla_{e_i} e_j, e_k> reduces to a sum of
    // structure constants: c_ij^k - c_jk^i + c_ki^j.
    FrameVector out;
    for (int k = 1; k <= 3; ++k) {
        const double cijk = component(frame_bracket(i, j, p), k);
        const double cjki = component(frame_bracket(j, k, p), i);
        const double ckij = component(frame_bracket(k, i, p), j);
        const double gamma = 0.5 * (cijk - cjki + ckij);
        switch (k) {
            case 1: out.a1 = gamma; break;
            case 2: out.a2 = gamma; break;
            default: out.a3 = gamma; break;
        }
    }
    return out;
}

CurvatureReport curvature_tables(const SasakiParams& p) {
    CurvatureReport rep;
    const auto sect = [&](int i, int j) {
        // <R(e_i, e_j) e_j, e_i> with an orthonormal pair; equals K_ij.
        return metric_g(curvature_op(i, j, j, p), basis(i));
    };
    rep.R1212 = sect(1, 2);
    rep.R1313 = sect(1, 3);
    rep.R2323 = sect(2, 3);
    rep.K12 = rep.R1212;
    rep.K13 = rep.R1313;
    rep.K23 = rep.R2323;
    const auto ricci = [&](int i) {
        double sum = 0.0;
        for (int k = 1; k <= 3; ++k) {
            if (k == i) continue;
            sum += metric_g(curvature_op(k, i, i, p), basis(k));
        }
        return sum;
    };
    rep.Ric11 = ricci(1);
    rep.Ric22 = ricci(2);
    rep.Ric33 = ricci(3);
    rep.scal = rep.Ric11 + rep.Ric22 + rep.Ric33;
    return rep;
}

double q_tilde(const SasakiParams& p, double cos_theta) {
    if (std::abs(cos_theta) > 1.0) {
        throw std::invalid_argument("sasaki: cos(theta) must lie in [-1, 1]");
    }
    return p.q + 0.5 * (p.c - 1.0) * cos_theta;
}

su2::Su2Vector to_algebra(const FrameVector& v, const SasakiParams& p) {
    const double s = std::sqrt(p.alpha);
    return {v.a1 / s, v.a2 / s, v.a3 / p.alpha};
}

FrameVector to_frame(const su2::Su2Vector& x, const SasakiParams& p) {
    const double s = std::sqrt(p.alpha);
    return {x.v1 * s, x.v2 * s, x.v3 * p.alpha};
}

double metric_ambient(const su2::Su2Vector& x, const su2::Su2Vector& y, const SasakiParams& p) {
    return p.alpha * su2::inner_bi(x, y) + p.alpha * (p.alpha - 1.0) * x.v3 * y.v3;
}

} // namespace magflow::sasaki
