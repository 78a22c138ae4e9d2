#include "magflow/periodicity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace magflow::periodicity {

using sasaki::FrameVector;
using sasaki::SasakiParams;
using su2::Su2Element;
using su2::Su2Vector;

namespace {

long long gcd_ll(long long a, long long b) {
    a = std::llabs(a);
    b = std::llabs(b);
    while (b != 0) {
        const long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Integer square root with exactness flag.
bool perfect_square(long long n, long long& root) {
    if (n < 0) return false;
    root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
    for (long long r = std::max(0LL, root - 1); r <= root + 1; ++r) {
        if (r * r == n) {
            root = r;
            return true;
        }
    }
    return false;
}

double frame_dist(const FrameVector& a, const FrameVector& b) {
    return std::sqrt((a.a1 - b.a1) * (a.a1 - b.a1) + (a.a2 - b.a2) * (a.a2 - b.a2) +
                     (a.a3 - b.a3) * (a.a3 - b.a3));
}

// Golden-section minimization on [a, b].
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

} // namespace

Rational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("periodicity: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = gcd_ll(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

double to_double(const Rational& r) {
    return static_cast<double>(r.num) / static_cast<double>(r.den);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make_rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make_rational(a.num * b.den - b.num * a.den, a.den * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make_rational(a.num * b.num, a.den * b.den);
}

RationalApprox rational_approx(double x, long long max_den, double tol) {
    if (max_den < 1) throw std::invalid_argument("periodicity: denominator bound must be >= 1");
    if (!std::isfinite(x)) throw std::invalid_argument("periodicity: value must be finite");
    const double sign = x < 0.0 ? -1.0 : 1.0;
    const double ax = std::abs(x);

    long long p_prev = 1, q_prev = 0;
    long long p_cur = static_cast<long long>(std::floor(ax));
    long long q_cur = 1;
    double rem = ax - std::floor(ax);

    long long best_num = p_cur, best_den = q_cur;
    // Walk the continued fraction while denominators stay within the bound;
    // at the cutoff, the largest semiconvergent is the only other candidate.
    while (rem > 1e-12) {
        const double inv = 1.0 / rem;
        const double a_f = std::floor(inv);
        if (a_f > 9e17) break;
        const long long a = static_cast<long long>(a_f);
        const __int128 q_next_wide =
            static_cast<__int128>(a) * q_cur + q_prev;
        if (q_next_wide > max_den) {
            const long long j = (max_den - q_prev) / q_cur;
            if (j >= 1) {
                const long long ps = j * p_cur + p_prev;
                const long long qs = j * q_cur + q_prev;
                const double err_conv =
                    std::abs(ax - static_cast<double>(p_cur) / static_cast<double>(q_cur));
                const double err_semi =
                    std::abs(ax - static_cast<double>(ps) / static_cast<double>(qs));
                if (err_semi < err_conv) {
                    best_num = ps;
                    best_den = qs;
                }
            }
            break;
        }
        const long long p_next = a * p_cur + p_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = static_cast<long long>(q_next_wide);
        best_num = p_cur;
        best_den = q_cur;
        rem = inv - a_f;
    }

    const long long g = gcd_ll(best_num, best_den);
    RationalApprox out;
    out.numerator = sign < 0 ? -best_num / g : best_num / g;
    out.denominator = best_den / g;
    out.value = static_cast<double>(out.numerator) / static_cast<double>(out.denominator);
    out.error = std::abs(x - out.value);
    out.periodic = out.error <= tol;
    return out;
}

double s3_criterion(double q, double cos_theta) {
    if (std::abs(cos_theta) > 1.0) {
        throw std::invalid_argument("periodicity: cos(theta) must lie in [-1, 1]");
    }
    const double rad = q * q - 4.0 * q * cos_theta + 4.0;
    if (!(rad > 0.0)) throw std::domain_error("periodicity: criterion undefined, zero radicand");
    return q / std::sqrt(rad);
}

ExactCriterion s3_criterion_exact(const Rational& q, const Rational& cos_theta) {
    const Rational four = make_rational(4, 1);
    const Rational rad = q * q - four * q * cos_theta + four;
    if (rad.num <= 0) {
        throw std::domain_error("periodicity: criterion undefined, zero radicand");
    }
    ExactCriterion out;
    long long sn = 0, sd = 0;
    if (perfect_square(rad.num, sn) && perfect_square(rad.den, sd)) {
        out.rational = true;
        out.value = make_rational(q.num * sd, q.den * sn);
        out.approx = to_double(out.value);
    } else {
        out.rational = false;
        out.approx = to_double(q) / std::sqrt(to_double(rad));
    }
    return out;
}

double ikawa_omega(double cos_theta) {
    if (std::abs(cos_theta) > 1.0) {
        throw std::invalid_argument("periodicity: cos(theta) must lie in [-1, 1]");
    }
    return std::sqrt(1.25 - cos_theta);
}

double slope_from_mn(long long m, long long n, double R, const SasakiParams& p) {
    if (n == 0) throw std::invalid_argument("periodicity: n must be nonzero");
    if (!(R > 0.0) || R > p.r * (1.0 + 1e-12)) {
        throw std::invalid_argument("periodicity: radius must lie in (0, r]");
    }
    const double hr = std::sqrt(std::max(0.0, 1.0 - (R * R) / (p.r * p.r)));
    return (2.0 * static_cast<double>(m) * p.alpha + static_cast<double>(n) * (1.0 - hr)) /
           (2.0 * static_cast<double>(n) * R);
}

SlopeQuantization slope_quantization(double sigma, double R, const SasakiParams& p,
                                     long long max_den, double tol) {
    if (!(R > 0.0) || R > p.r * (1.0 + 1e-12)) {
        throw std::invalid_argument("periodicity: radius must lie in (0, r]");
    }
    SlopeQuantization out;
    const double vertical = std::sqrt(std::max(0.0, 1.0 - 4.0 * R * R / p.alpha));
    out.residual = R * sigma + 0.5 * vertical - 0.5;
    out.ratio = rational_approx(out.residual / p.alpha, max_den, tol);
    out.verdict = out.ratio.periodic ? Verdict::periodic : Verdict::aperiodic_at_resolution;
    return out;
}

std::optional<double> predicted_period(const SasakiParams& p, double cos_theta, long long max_den,
                                       double tol) {
    if (std::abs(cos_theta) > 1.0) {
        throw std::invalid_argument("periodicity: cos(theta) must lie in [-1, 1]");
    }
    const double s2 = 1.0 - cos_theta * cos_theta;
    if (s2 <= 0.0) {
        return 2.0 * M_PI * p.alpha;  // vertical trajectory: one fiber turn
    }
    const double qt = sasaki::q_tilde(p, cos_theta);
    const double sin_theta = std::sqrt(s2);
    const Su2Vector axis{0.0, sin_theta / std::sqrt(p.alpha), cos_theta / p.alpha - 0.5 * qt};
    const double pn = su2::norm(axis);
    if (qt == 0.0) {
        return 2.0 * M_PI / pn;  // tangent is already constant
    }
    const double rho = qt / (2.0 * pn);
    const RationalApprox ra = rational_approx(std::abs(rho), max_den, tol);
    if (!ra.periodic || ra.numerator == 0) return std::nullopt;
    const long long m1 = ra.numerator;
    const long long n1 = ra.denominator;
    const long long parity = ((m1 + n1) % 2 == 0) ? 1 : 2;
    return 2.0 * M_PI * static_cast<double>(m1 * parity) / std::abs(qt);
}

PeriodSearch measure_period(const TrajectoryFn& fn, double s_max, double scan_step, double tol) {
    if (!(s_max > 0.0) || !(scan_step > 0.0) || scan_step >= s_max) {
        throw std::invalid_argument("periodicity: need 0 < scan_step < s_max");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("periodicity: tolerance must be positive");

    const auto [pos0, tan0] = fn(0.0);
    const auto combined = [&](double s) {
        const auto [pos, tan] = fn(s);
        return std::max(su2::dist(pos, pos0), frame_dist(tan, tan0));
    };

    PeriodSearch out;
    out.min_distance = std::numeric_limits<double>::infinity();

    const long k_max = static_cast<long>(std::floor(s_max / scan_step));
    double d_prev = 0.0;  // distance at s = 0
    double d_cur = combined(scan_step);
    for (long k = 1; k < k_max; ++k) {
        const double d_next = combined(scan_step * static_cast<double>(k + 1));
        if (d_cur <= d_prev && d_cur <= d_next) {
            const auto [s_min, d_min] =
                golden_min(combined, scan_step * static_cast<double>(k - 1),
                           scan_step * static_cast<double>(k + 1));
            if (d_min < out.min_distance) {
                out.min_distance = d_min;
                out.min_distance_at = s_min;
            }
            if (!out.period && d_min < tol && s_min > 0.5 * scan_step) {
                out.period = s_min;
            }
        }
        d_prev = d_cur;
        d_cur = d_next;
    }
    if (!std::isfinite(out.min_distance)) {
        // no interior local minimum: report the best scanned point
        out.min_distance = d_cur;
        out.min_distance_at = scan_step * static_cast<double>(k_max);
    }
    return out;
}

} // namespace magflow::periodicity
