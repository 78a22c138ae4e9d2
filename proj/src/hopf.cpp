#include "magflow/hopf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "magflow/rkmk.hpp"

namespace magflow::hopf {

using sasaki::SasakiParams;
using su2::Su2Element;
using su2::Su2Vector;

namespace {

// Cubic Lagrange interpolation over the four samples nearest to x (grid
// units). Returns value and derivative weights for local nodes 0..3.
struct CubicWeights {
    std::size_t lo = 0;
    std::array<double, 4> w{};
    std::array<double, 4> dw{};
};

CubicWeights cubic_weights(double x, std::size_t n) {
    if (n < 4) throw std::invalid_argument("hopf: interpolation needs at least 4 samples");
    const double lo_f = std::clamp(std::floor(x) - 1.0, 0.0, static_cast<double>(n - 4));
    CubicWeights cw;
    cw.lo = static_cast<std::size_t>(lo_f);
    const double t = x - lo_f;
    for (int m = 0; m < 4; ++m) {
        // w_m = prod_{j != m} (t-j)/(m-j); dw_m is its t-derivative.
        double denom = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != m) denom *= (m - j);
        double val = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != m) val *= (t - j);
        double der = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (k == m) continue;
            double term = 1.0;
            for (int j = 0; j < 4; ++j) {
                if (j == m || j == k) continue;
                term *= (t - j);
            }
            der += term;
        }
        cw.w[m] = val / denom;
        cw.dw[m] = der / denom;
    }
    return cw;
}

Su2Vector normalize_axis(const Su2Vector& axis) {
    const double n = su2::norm(axis);
    if (!(n > 1e-12)) throw std::invalid_argument("hopf: axis must be a nonzero vector");
    return (1.0 / n) * axis;
}

double dot3(const Su2Vector& a, const Su2Vector& b) {
    return a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3;
}

Su2Vector cross3(const Su2Vector& a, const Su2Vector& b) {
    return {a.v2 * b.v3 - a.v3 * b.v2, a.v3 * b.v1 - a.v1 * b.v3, a.v1 * b.v2 - a.v2 * b.v1};
}

// Right-handed orthonormal pair completing the unit vector n.
std::array<Su2Vector, 2> complete_frame(const Su2Vector& n) {
    const std::array<Su2Vector, 3> axes{Su2Vector{1, 0, 0}, Su2Vector{0, 1, 0},
                                        Su2Vector{0, 0, 1}};
    int best = 0;
    double best_align = 2.0;
    for (int i = 0; i < 3; ++i) {
        const double a = std::abs(dot3(n, axes[i]));
        if (a < best_align) {
            best_align = a;
            best = i;
        }
    }
    Su2Vector u1 = axes[best] + (-dot3(n, axes[best])) * n;
    u1 = (1.0 / su2::norm(u1)) * u1;
    return {u1, cross3(n, u1)};
}

// 3x3 symmetric eigensolver by cyclic Jacobi rotations. Returns eigenvalues
// ascending with matching columns in v.
void jacobi3(std::array<std::array<double, 3>, 3> m, std::array<double, 3>& eval,
             std::array<std::array<double, 3>, 3>& evec) {
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-30) break;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                if (std::abs(m[i][j]) < 1e-300) continue;
                const double theta = 0.5 * (m[j][j] - m[i][i]) / m[i][j];
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double mik = m[i][k], mjk = m[j][k];
                    m[i][k] = c * mik - s * mjk;
                    m[j][k] = s * mik + c * mjk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double mki = m[k][i], mkj = m[k][j];
                    m[k][i] = c * mki - s * mkj;
                    m[k][j] = s * mki + c * mkj;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vki = v[k][i], vkj = v[k][j];
                    v[k][i] = c * vki - s * vkj;
                    v[k][j] = s * vki + c * vkj;
                }
            }
        }
    }
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return m[a][a] < m[b][b]; });
    for (int i = 0; i < 3; ++i) {
        eval[i] = m[order[i]][order[i]];
        for (int k = 0; k < 3; ++k) evec[k][i] = v[k][order[i]];
    }
}

} // namespace

Su2Vector project(const Su2Element& a, const SasakiParams& p) {
    return su2::ad_action(a, Su2Vector{0.0, 0.0, p.r});
}

std::vector<Su2Vector> sample_circle(const SasakiParams& p, double R, double height,
                                     const Su2Vector& axis, int n, int turns) {
    if (!(R > 0.0)) throw std::invalid_argument("hopf: circle radius must be positive");
    if (n < 4) throw std::invalid_argument("hopf: need at least 4 samples per turn");
    if (turns < 1) throw std::invalid_argument("hopf: turns must be positive");
    if (std::abs(R * R + height * height - p.r * p.r) > 1e-8 * p.r * p.r) {
        throw std::invalid_argument("hopf: circle does not lie on the base sphere");
    }
    const Su2Vector nhat = normalize_axis(axis);
    const auto [u1, u2] = complete_frame(nhat);
    const Su2Vector center = height * nhat;
    std::vector<Su2Vector> out;
    const long total = static_cast<long>(n) * turns;
    out.reserve(static_cast<std::size_t>(total) + 1);
    for (long i = 0; i <= total; ++i) {
        const double phi = 2.0 * M_PI * static_cast<double>(i) / n;
        out.push_back(center + (R * std::cos(phi)) * u1 + (R * std::sin(phi)) * u2);
    }
    return out;
}

std::vector<Su2Element> horizontal_lift(const std::vector<Su2Vector>& base, double du,
                                        const Su2Element& start, const SasakiParams& p) {
    if (base.size() < 4) throw std::invalid_argument("hopf: lift needs at least 4 base samples");
    if (!(du > 0.0)) throw std::invalid_argument("hopf: sample spacing must be positive");
    const Su2Element y0 = su2::normalized(start);
    {
        const Su2Vector diff = project(y0, p) + (-1.0) * base.front();
        if (su2::norm(diff) > 1e-8) {
            throw std::invalid_argument("hopf: start element does not project onto the base curve");
        }
    }
    const std::size_t n = base.size();
    const auto dbeta = [&](double u) {
        const CubicWeights cw = cubic_weights(u / du, n);
        Su2Vector d;
        for (int m = 0; m < 4; ++m) d = d + cw.dw[m] * base[cw.lo + m];
        return (1.0 / du) * d;
    };
    const double half_inv_r = 0.5 / p.r;
    const auto vel = [&](double u, const Su2Element& y) {
        const Su2Vector w = su2::ad_action(su2::conjugate(y), dbeta(u));
        return Su2Vector{-w.v2 * half_inv_r, w.v1 * half_inv_r, 0.0};
    };
    std::vector<Su2Element> lift;
    lift.reserve(n);
    lift.push_back(y0);
    Su2Element y = y0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double u = du * static_cast<double>(i);
        y = rkmk::rkmk4_step(y, u, 0.5 * du, vel);
        y = rkmk::rkmk4_step(y, u + 0.5 * du, 0.5 * du, vel);
        lift.push_back(y);
    }
    return lift;
}

Su2Element hopf_tube(const std::vector<Su2Element>& lift, double du, double t, double u) {
    if (lift.size() < 4) throw std::invalid_argument("hopf: tube needs at least 4 lift samples");
    if (!(du > 0.0)) throw std::invalid_argument("hopf: sample spacing must be positive");
    const CubicWeights cw = cubic_weights(u / du, lift.size());
    Su2Element q{0, 0, 0, 0};
    for (int m = 0; m < 4; ++m) {
        const Su2Element& l = lift[cw.lo + m];
        q.x0 += cw.w[m] * l.x0;
        q.x1 += cw.w[m] * l.x1;
        q.x2 += cw.w[m] * l.x2;
        q.x3 += cw.w[m] * l.x3;
    }
    return su2::quat_mul(su2::normalized(q), su2::exp_su2(Su2Vector{0.0, 0.0, t}));
}

CircleData circle_data(double R, const SasakiParams& p) {
    if (!(R > 0.0) || R > p.r * (1.0 + 1e-12)) {
        throw std::invalid_argument("hopf: circle radius must lie in (0, r]");
    }
    CircleData d;
    d.radius = std::min(R, p.r);
    d.height = std::sqrt(std::max(0.0, p.r * p.r - d.radius * d.radius));
    d.curvature = d.height / (p.r * d.radius);
    d.length = 2.0 * M_PI * d.radius;
    d.area = 2.0 * M_PI * p.r * (p.r - d.height);
    return d;
}

double holonomy(double area, const SasakiParams& p) {
    return area / (2.0 * p.r * p.r);
}

LatticeSpec lattice(const CircleData& circle, const SasakiParams& p) {
    LatticeSpec l;
    l.fiber_gen[0] = 2.0 * M_PI * p.alpha;
    l.fiber_gen[1] = 0.0;
    l.deck_gen[0] = holonomy(circle.area, p);
    l.deck_gen[1] = circle.length;
    l.det = l.fiber_gen[0] * l.deck_gen[1] - l.fiber_gen[1] * l.deck_gen[0];
    return l;
}

double projected_curvature_from_q(double q, double cos_theta) {
    if (q == 0.0) throw std::invalid_argument("hopf: projected curvature needs q != 0");
    const double s2 = 1.0 - cos_theta * cos_theta;
    if (!(s2 > 0.0)) throw std::invalid_argument("hopf: projected curvature needs sin(theta) > 0");
    const double eps = q > 0.0 ? 1.0 : -1.0;
    return (q - 2.0 * cos_theta) / (eps * std::sqrt(s2));
}

double projected_curvature_from_frenet(double kappa, double tau) {
    if (!(kappa > 0.0)) throw std::invalid_argument("hopf: projected curvature needs kappa > 0");
    return (kappa * kappa + tau * tau - 1.0) / kappa;
}

double tube_mean_curvature(double kappa_beta) { return 0.5 * kappa_beta; }

double geodesic_on_tube_check(const std::vector<sasaki::FrameVector>& tangents, double ds,
                              const SasakiParams& p) {
    if (tangents.size() < 3) throw std::invalid_argument("hopf: need at least 3 tangent samples");
    if (!(ds > 0.0)) throw std::invalid_argument("hopf: sample spacing must be positive");
    const double lam = 0.5 * (p.c - 1.0);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tangents.size(); ++i) {
        const sasaki::FrameVector& t = tangents[i];
        const sasaki::FrameVector dt =
            (1.0 / (2.0 * ds)) * (tangents[i + 1] + (-1.0) * tangents[i - 1]);
        // covariant acceleration in the frame
        const sasaki::FrameVector acc{dt.a1 - lam * t.a2 * t.a3, dt.a2 + lam * t.a1 * t.a3,
                                      dt.a3};
        // tube tangent plane is spanned by the curve direction and the fiber
        worst = std::max(worst, std::abs(sasaki::metric_g(acc, t)));
        worst = std::max(worst, std::abs(acc.a3));
    }
    return worst;
}

double fiber_phase(const Su2Element& from, const Su2Element& to) {
    const Su2Element f = su2::quat_mul(su2::conjugate(from), to);
    if (std::hypot(f.x1, f.x2) > 1e-6) {
        throw std::invalid_argument("hopf: elements do not lie on a common fiber");
    }
    return std::atan2(f.x3, f.x0);
}

CircleFit fit_circle(const std::vector<Su2Vector>& points) {
    if (points.size() < 4) throw std::invalid_argument("hopf: circle fit needs at least 4 points");
    Su2Vector c;
    for (const auto& q : points) c = c + q;
    c = (1.0 / static_cast<double>(points.size())) * c;
    std::array<std::array<double, 3>, 3> m{};
    for (const auto& q : points) {
        const Su2Vector d = q + (-1.0) * c;
        const double v[3] = {d.v1, d.v2, d.v3};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += v[i] * v[j];
    }
    std::array<double, 3> eval{};
    std::array<std::array<double, 3>, 3> evec{};
    jacobi3(m, eval, evec);
    Su2Vector n{evec[0][0], evec[1][0], evec[2][0]};  // smallest-spread direction
    double d = dot3(n, c);
    if (d < 0.0) {
        n = -1.0 * n;
        d = -d;
    }
    CircleFit fit;
    fit.normal = n;
    fit.center = d * n;
    double radius = 0.0;
    for (const auto& q : points) {
        const Su2Vector rel = q + (-1.0) * fit.center;
        const Su2Vector inplane = rel + (-dot3(rel, n)) * n;
        radius += su2::norm(inplane);
    }
    fit.radius = radius / static_cast<double>(points.size());
    for (const auto& q : points) {
        const Su2Vector rel = q + (-1.0) * fit.center;
        fit.plane_residual = std::max(fit.plane_residual, std::abs(dot3(rel, n)));
        const Su2Vector inplane = rel + (-dot3(rel, n)) * n;
        fit.radius_residual =
            std::max(fit.radius_residual, std::abs(su2::norm(inplane) - fit.radius));
    }
    return fit;
}

} // namespace magflow::hopf
