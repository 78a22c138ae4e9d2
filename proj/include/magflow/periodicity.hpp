#pragma once

// Deciding whether trajectories close up. The closure criterion is a ratio
// of rotation rates: rational means periodic, and the denominator bound plus
// tolerance make the float-side decision explicit. An exact integer path
// answers the same question without floats when the inputs are fractions.

#include <functional>
#include <optional>
#include <utility>

#include "magflow/sasaki.hpp"
#include "magflow/su2.hpp"

namespace magflow::periodicity {

// Reduced fraction, denominator always positive.
struct Rational {
    long long num = 0;
    long long den = 1;
};

[[nodiscard]] Rational make_rational(long long num, long long den);
[[nodiscard]] double to_double(const Rational& r);
[[nodiscard]] Rational operator+(const Rational& a, const Rational& b);
[[nodiscard]] Rational operator-(const Rational& a, const Rational& b);
[[nodiscard]] Rational operator*(const Rational& a, const Rational& b);

// Best rational approximation with denominator bounded by max_den.
struct RationalApprox {
    long long numerator = 0;
    long long denominator = 1;
    double value = 0.0;
    double error = 0.0;
    bool periodic = false;  // error <= tol
};

enum class Verdict { periodic, aperiodic_at_resolution };

// Best approximation of x among all fractions with denominator <= max_den,
// by continued-fraction convergents refined with the final semiconvergent.
// Ties prefer the smaller denominator.
[[nodiscard]] RationalApprox rational_approx(double x, long long max_den, double tol);

// Rotation-rate ratio deciding closure on the round sphere: q over the
// distance sqrt(q^2 - 4 q cos_theta + 4). The radicand vanishes only at
// (q, cos_theta) = (2, 1) or (-2, -1), where the criterion is undefined.
[[nodiscard]] double s3_criterion(double q, double cos_theta);

struct ExactCriterion {
    bool rational = false;
    Rational value;      // meaningful only when rational
    double approx = 0.0;  // double value either way
};

// Same criterion through exact integer arithmetic: with rational inputs the
// radicand is a fraction N/D, and the criterion is rational precisely when
// N and D are both perfect squares. No tolerance involved.
[[nodiscard]] ExactCriterion s3_criterion_exact(const Rational& q, const Rational& cos_theta);

// Frequency of the reference curve's oscillating factor.
[[nodiscard]] double ikawa_omega(double cos_theta);

// Slope of the (m, n) geodesic on the tube over the circle of radius R.
[[nodiscard]] double slope_from_mn(long long m, long long n, double R,
                                   const sasaki::SasakiParams& p);

struct SlopeQuantization {
    double residual = 0.0;
    RationalApprox ratio;  // best fraction for residual / alpha
    Verdict verdict = Verdict::aperiodic_at_resolution;
};

// Quantization condition for a tube geodesic of slope sigma: the residual
// R sigma + (1/2) sqrt(1 - 4 R^2 / alpha) - 1/2 must be a rational multiple
// of alpha for the geodesic to close.
[[nodiscard]] SlopeQuantization slope_quantization(double sigma, double R,
                                                   const sasaki::SasakiParams& p,
                                                   long long max_den, double tol);

// Predicted closure length of the trajectory with the given contact angle,
// or nothing when the rate ratio is not rational at this resolution. The
// vertical trajectory (sin(theta) = 0) always closes after 2 pi alpha.
[[nodiscard]] std::optional<double> predicted_period(const sasaki::SasakiParams& p,
                                                     double cos_theta, long long max_den,
                                                     double tol);

struct PeriodSearch {
    std::optional<double> period;
    double min_distance = 0.0;
    double min_distance_at = 0.0;
};

using TrajectoryFn = std::function<std::pair<su2::Su2Element, sasaki::FrameVector>(double)>;

// Direct numerical search: scan [0, s_max] in steps of scan_step for local
// minima of the distance (position and tangent combined) to the initial
// state, refine each by golden section, and accept the first minimum below
// tol as the period.
[[nodiscard]] PeriodSearch measure_period(const TrajectoryFn& fn, double s_max, double scan_step,
                                          double tol);

} // namespace magflow::periodicity
