#include "magflow/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "magflow/flow.hpp"
#include "magflow/hopf.hpp"
#include "magflow/periodicity.hpp"
#include "magflow/sasaki.hpp"
#include "magflow/su2.hpp"
#include "magflow/viz.hpp"

namespace magflow::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string verdict_token(periodicity::Verdict v) {
    return v == periodicity::Verdict::periodic ? "periodic" : "aperiodic_at_resolution";
}

// Renders into memory first so a failing writer never leaves a partial file.
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& writer) {
    if (path == "-") {
        writer(fallback);
        return;
    }
    std::ostringstream buf;
    writer(buf);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << buf.str();
    f.flush();
    if (!f) throw std::runtime_error("write failed on " + path);
}

void with_input(const std::string& path, const std::function<void(std::istream&)>& reader) {
    if (path == "-") {
        reader(std::cin);
        return;
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open input file " + path);
    reader(f);
}

double comp_max(const sasaki::FrameVector& v) {
    return std::max({std::abs(v.a1), std::abs(v.a2), std::abs(v.a3)});
}

// Group element whose adjoint action rotates k onto the given unit vector.
su2::Su2Element rotate_k_to(const su2::Su2Vector& target) {
    const su2::Su2Vector k = su2::basis_k();
    const su2::Su2Vector cr = 0.5 * su2::bracket(k, target);  // cross product
    const double s = su2::norm(cr);
    const double c = su2::inner_bi(k, target);
    if (s < 1e-14) {
        if (c > 0.0) return su2::identity();
        return su2::exp_su2(0.5 * kPi * su2::basis_i());  // half turn about i
    }
    const double angle = std::atan2(s, c);
    return su2::exp_su2((0.5 * angle / s) * cr);
}

double require_unit_interval_cos(const ExactReal& ct) {
    if (!(std::abs(ct.value) <= 1.0)) {
        throw std::invalid_argument("cos(theta) must lie in [-1, 1]");
    }
    return ct.value;
}

long long sample_count(double s_max, double ds) {
    if (!(ds > 0.0) || !std::isfinite(ds)) throw std::invalid_argument("ds must be positive");
    if (!(s_max > 0.0) || !std::isfinite(s_max)) {
        throw std::invalid_argument("s_max must be positive");
    }
    const long long n = std::llround(s_max / ds);
    if (n < 1) throw std::invalid_argument("s_max / ds yields no samples");
    if (n > 10'000'000) throw std::invalid_argument("s_max / ds yields too many samples");
    return n;
}

// ---------------------------------------------------------------------------
// verify

struct NamedCheck {
    const char* name;
    double tol;
    double max_err;
};

int run_verify(const ExactReal& alpha, std::ostream& out, std::ostream& err) {
    const sasaki::SasakiParams p = sasaki::params_from_alpha(alpha.value, 1.0);
    const sasaki::CurvatureReport rep = sasaki::curvature_tables(p);

    out << "alpha=" << fmt(p.alpha) << " c=" << fmt(p.c) << " r=" << fmt(p.r) << '\n';
    out << "R1212=" << fmt(rep.R1212) << " R1313=" << fmt(rep.R1313)
        << " R2323=" << fmt(rep.R2323) << '\n';
    out << "K12=" << fmt(rep.K12) << " K13=" << fmt(rep.K13) << " K23=" << fmt(rep.K23)
        << '\n';
    out << "Ric11=" << fmt(rep.Ric11) << " Ric22=" << fmt(rep.Ric22)
        << " Ric33=" << fmt(rep.Ric33) << " scal=" << fmt(rep.scal) << '\n';

    const sasaki::FrameVector e[4] = {{}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    double curv = 0.0;
    for (double d : {rep.K12 - p.c, rep.K13 - 1.0, rep.K23 - 1.0, rep.R1212 - p.c,
                     rep.R1313 - 1.0, rep.R2323 - 1.0, rep.Ric11 - (p.c + 1.0),
                     rep.Ric22 - (p.c + 1.0), rep.Ric33 - 2.0,
                     rep.scal - 2.0 * (p.c + 2.0)}) {
        curv = std::max(curv, std::abs(d));
    }

    double nabla_xi = 0.0;
    for (int i = 1; i <= 3; ++i) {
        nabla_xi = std::max(
            nabla_xi, comp_max(sasaki::levi_civita(i, 3, p) - sasaki::structure_phi(e[i])));
    }

    double phi_sq = 0.0;
    for (int i = 1; i <= 3; ++i) {
        const sasaki::FrameVector lhs = sasaki::structure_phi(sasaki::structure_phi(e[i]));
        const sasaki::FrameVector rhs =
            -1.0 * e[i] + sasaki::eta(e[i]) * sasaki::reeb();
        phi_sq = std::max(phi_sq, comp_max(lhs - rhs));
    }

    double metric = 0.0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            for (int k = 1; k <= 3; ++k) {
                const double d = sasaki::metric_g(sasaki::levi_civita(i, j, p), e[k]) +
                                 sasaki::metric_g(e[j], sasaki::levi_civita(i, k, p));
                metric = std::max(metric, std::abs(d));
            }
        }
    }

    double torsion = 0.0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const sasaki::FrameVector d = sasaki::levi_civita(i, j, p) -
                                          sasaki::levi_civita(j, i, p) -
                                          sasaki::frame_bracket(i, j, p);
            torsion = std::max(torsion, comp_max(d));
        }
    }

    const NamedCheck checks[] = {
        {"curvature_table", 1e-10, curv},
        {"sasakian_nabla_xi", 1e-14, nabla_xi},
        {"lorentz_force_square", 1e-14, phi_sq},
        {"metric_compatibility", 1e-14, metric},
        {"torsion_freeness", 1e-14, torsion},
    };

    int failures = 0;
    for (const NamedCheck& c : checks) {
        const bool ok = c.max_err <= c.tol;
        failures += !ok;
        out << (ok ? "[PASS] " : "[FAIL] ") << c.name << " max_err=" << fmt_short(c.max_err)
            << " tol=" << fmt_short(c.tol) << '\n';
    }
    if (failures > 0) {
        err << "verify: " << failures << " check(s) out of tolerance\n";
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// integrate

int run_integrate(const ExactReal& alpha, const ExactReal& q, const ExactReal& cos_theta,
                  double t1, double t2, bool t2_given, double ds, long long steps,
                  double s_max, bool s_max_given, const std::string& out_path,
                  std::ostream& out) {
    const sasaki::SasakiParams p = sasaki::params_from_alpha(alpha.value, q.value);
    const double ct = require_unit_interval_cos(cos_theta);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const sasaki::FrameVector t0{t1, t2_given ? t2 : st, ct};
    if (s_max_given) steps = sample_count(s_max, ds);
    if (steps < 0 || steps > 50'000'000) {
        throw std::invalid_argument("steps must be in [0, 5e7]");
    }
    const std::vector<flow::TrajectorySample> rows =
        flow::integrate(p, su2::identity(), t0, ds, static_cast<int>(steps));
    with_output(out_path, out,
                [&](std::ostream& os) { viz::emit_trajectory_csv(os, rows); });
    return 0;
}

// ---------------------------------------------------------------------------
// curve

std::vector<flow::TrajectorySample> ikawa_rows(double ct, double s_max, double ds) {
    const long long n = sample_count(s_max, ds);
    const sasaki::SasakiParams p = sasaki::params_from_alpha(1.0, 1.0);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const sasaki::FrameVector t0{0.0, st, ct};
    std::vector<flow::TrajectorySample> rows(static_cast<std::size_t>(n) + 1);
    for (long long k = 0; k <= n; ++k) {
        const double s = static_cast<double>(k) * ds;
        flow::TrajectorySample& r = rows[static_cast<std::size_t>(k)];
        r.s = s;
        r.position = flow::ikawa_curve(s, ct);
        r.tangent = flow::tangent_closed_form(p, t0, s);
    }
    return rows;
}

std::vector<flow::TrajectorySample> helix_rows(double a, double b, double psi, double s_max,
                                               double ds) {
    const long long n = sample_count(s_max, ds);
    const double cp = std::cos(psi);
    const double sp = std::sin(psi);
    std::vector<flow::TrajectorySample> rows(static_cast<std::size_t>(n) + 1);
    for (long long k = 0; k <= n; ++k) {
        const double s = static_cast<double>(k) * ds;
        flow::TrajectorySample& r = rows[static_cast<std::size_t>(k)];
        r.s = s;
        r.position = flow::model_helix(s, a, b, psi);
        // Left-trivialized velocity: the vector part of conj(gamma) * gamma'.
        const su2::Su2Element d{-a * cp * std::sin(a * s), b * sp * std::cos(b * s),
                                -b * sp * std::sin(b * s), a * cp * std::cos(a * s)};
        const su2::Su2Element x = su2::quat_mul_raw(su2::conjugate(r.position), d);
        r.tangent = sasaki::FrameVector{x.x1, x.x2, x.x3};
    }
    return rows;
}

int run_curve(const std::string& mode, const ExactReal& cos_theta, double ratio, bool has_ratio,
              double a, double b, bool has_a, bool has_b, double psi, double s_max, double ds,
              const std::string& format, const std::string& out_path, std::ostream& out) {
    std::vector<flow::TrajectorySample> rows;
    if (mode == "ikawa") {
        rows = ikawa_rows(cos_theta.value, s_max, ds);
    } else if (mode == "helix") {
        double ra = a;
        double rb = b;
        if (has_ratio) {
            const std::pair<double, double> ab = flow::helix_periodic_params(ratio, psi);
            ra = ab.first;
            rb = ab.second;
        } else if (!has_a || !has_b) {
            throw std::invalid_argument("helix needs either --ratio or both --a and --b");
        }
        rows = helix_rows(ra, rb, psi, s_max, ds);
    } else {
        throw std::invalid_argument("curve mode must be ikawa or helix");
    }

    if (format == "csv") {
        with_output(out_path, out, [&](std::ostream& os) { viz::emit_curve_csv(os, rows); });
    } else if (format == "obj") {
        const std::vector<viz::ProjectedPoint> pts = viz::project_samples(rows);
        with_output(out_path, out, [&](std::ostream& os) { viz::emit_curve_obj(os, pts); });
    } else if (format == "svg") {
        const std::vector<viz::ProjectedPoint> pts = viz::project_samples(rows);
        with_output(out_path, out, [&](std::ostream& os) { viz::emit_curve_svg(os, pts); });
    } else {
        throw std::invalid_argument("format must be csv, obj, or svg");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// project

int run_project(const ExactReal& alpha, const std::string& in_path,
                const std::string& out_path, std::ostream& out) {
    const sasaki::SasakiParams p = sasaki::params_from_alpha(alpha.value, 1.0);
    std::vector<flow::TrajectorySample> rows;
    with_input(in_path,
               [&](std::istream& is) { rows = viz::read_trajectory_csv(is); });
    std::vector<su2::Su2Vector> base;
    base.reserve(rows.size());
    for (const flow::TrajectorySample& r : rows) base.push_back(hopf::project(r.position, p));
    with_output(out_path, out, [&](std::ostream& os) { viz::emit_base_csv(os, base); });
    return 0;
}

// ---------------------------------------------------------------------------
// tube

struct TubeMesh {
    std::vector<viz::ProjectedPoint> verts;
    double delta = 0.0;   // measured fiber shift over one base turn
    double radius = 0.0;  // projected circle radius
};

TubeMesh build_tube_mesh(const sasaki::SasakiParams& p, double ct, int nt, int nu) {
    if (nt < 3 || nu < 3) throw std::invalid_argument("tube grid must be at least 3 x 3");
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    if (st == 0.0) {
        throw std::invalid_argument("vertical trajectory projects to a point; no tube");
    }

    // Invariant direction of the closed-form trajectory; its normalization is
    // the projected circle's axis.
    const double sq = std::sqrt(p.alpha);
    const double qt = sasaki::q_tilde(p, ct);
    const su2::Su2Vector P{0.0, st / sq, ct / p.alpha - 0.5 * qt};
    const double pn = su2::norm(P);
    const su2::Su2Vector axis = (1.0 / pn) * P;

    const double height = p.r * axis.v3;
    const double R = std::sqrt(std::max(0.0, p.r * p.r - height * height));

    const int factor = std::max(1, static_cast<int>(std::llround(4096.0 / nu)));
    const int nu_fine = nu * factor;
    const std::vector<su2::Su2Vector> base =
        hopf::sample_circle(p, R, height, axis, nu_fine, 1);
    const double du = 2.0 * kPi * R / nu_fine;

    const su2::Su2Element a0 = rotate_k_to((1.0 / p.r) * base.front());
    const std::vector<su2::Su2Element> lift = hopf::horizontal_lift(base, du, a0, p);
    const double delta = hopf::fiber_phase(lift.front(), lift.back());

    TubeMesh mesh;
    mesh.delta = delta;
    mesh.radius = R;
    mesh.verts.resize(static_cast<std::size_t>(nt) * static_cast<std::size_t>(nu));
    for (int j = 0; j < nu; ++j) {
        const double shift = delta * static_cast<double>(j) / nu;
        const su2::Su2Element& b = lift[static_cast<std::size_t>(j) * factor];
        for (int i = 0; i < nt; ++i) {
            const double t = 2.0 * kPi * i / nt;
            const su2::Su2Element g =
                su2::quat_mul(b, su2::exp_su2(su2::Su2Vector{0.0, 0.0, t - shift}));
            try {
                mesh.verts[static_cast<std::size_t>(j) * nt + i] = viz::stereographic(g);
            } catch (const std::domain_error&) {
                throw std::domain_error("tube vertex (i=" + std::to_string(i) +
                                        ", j=" + std::to_string(j) +
                                        ") hits the chart pole x1 = 1");
            }
        }
    }
    return mesh;
}

int run_tube(const ExactReal& alpha, const ExactReal& q, const ExactReal& cos_theta, int nt,
             int nu, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const sasaki::SasakiParams p = sasaki::params_from_alpha(alpha.value, q.value);
    const double ct = require_unit_interval_cos(cos_theta);
    const TubeMesh mesh = build_tube_mesh(p, ct, nt, nu);
    err << "tube: projected radius " << fmt(mesh.radius) << ", fiber shift per turn "
        << fmt(mesh.delta) << '\n';
    with_output(out_path, out,
                [&](std::ostream& os) { viz::emit_tube_obj(os, mesh.verts, nt, nu); });
    return 0;
}

// ---------------------------------------------------------------------------
// holonomy

int run_holonomy(const ExactReal& alpha, double radius, bool radius_is_absolute, int n,
                 std::ostream& out) {
    if (n < 16) throw std::invalid_argument("need at least 16 samples");
    const sasaki::SasakiParams p = sasaki::params_from_alpha(alpha.value, 1.0);
    const double R = radius_is_absolute ? radius : radius * p.r;
    if (!(R > 0.0 && R <= p.r)) {
        throw std::invalid_argument("circle radius must be in (0, sqrt(alpha)/2]");
    }
    const double height = std::sqrt(std::max(0.0, p.r * p.r - R * R));

    const std::vector<su2::Su2Vector> base =
        hopf::sample_circle(p, R, height, su2::basis_k(), n, 1);
    const double du = 2.0 * kPi * R / n;
    const su2::Su2Element a0 = rotate_k_to((1.0 / p.r) * base.front());
    const std::vector<su2::Su2Element> lift = hopf::horizontal_lift(base, du, a0, p);
    const double measured = hopf::fiber_phase(lift.front(), lift.back());

    const hopf::CircleData cd = hopf::circle_data(R, p);
    const double formula = hopf::holonomy(cd.area, p);
    const double diff = std::abs(std::remainder(measured - formula, 2.0 * kPi));

    out << "r=" << fmt(p.r) << " R=" << fmt(R) << " height=" << fmt(height) << '\n';
    out << "area=" << fmt(cd.area) << '\n';
    out << "delta_formula=" << fmt(formula) << '\n';
    out << "delta_measured=" << fmt(measured) << '\n';
    out << "abs_diff=" << fmt(diff) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// period

int run_period(const ExactReal& q, const ExactReal& cos_theta, long long max_den, double tol,
               bool measure, double horizon_opt, std::ostream& out) {
    const sasaki::SasakiParams p = sasaki::params_from_alpha(1.0, q.value);
    const double ct = require_unit_interval_cos(cos_theta);

    out << "q=" << fmt(q.value) << '\n';
    out << "cos_theta=" << fmt(ct) << '\n';

    const double rho = periodicity::s3_criterion(q.value, ct);
    out << "criterion=" << fmt(rho) << '\n';

    std::optional<periodicity::ExactCriterion> exact;
    if (q.exact && cos_theta.exact) {
        exact = periodicity::s3_criterion_exact(*q.exact, *cos_theta.exact);
        if (exact->rational) {
            out << "exact=" << exact->value.num << '/' << exact->value.den << '\n';
        } else {
            out << "exact=irrational\n";
        }
    }

    const periodicity::RationalApprox ra = periodicity::rational_approx(rho, max_den, tol);
    out << "numerator=" << ra.numerator << '\n';
    out << "denominator=" << ra.denominator << '\n';
    out << "err=" << fmt(ra.error) << '\n';

    const bool periodic = exact ? exact->rational : ra.periodic;
    out << "verdict="
        << (periodic ? "periodic" : "aperiodic_at_resolution") << '\n';

    std::optional<double> period = periodicity::predicted_period(p, ct, max_den, tol);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    if (!period && exact && exact->rational && st > 0.0) {
        // The float search missed the fraction (denominator beyond max_den);
        // rebuild the closure length from the exact ratio.
        const double qt = sasaki::q_tilde(p, ct);
        if (qt != 0.0 && exact->value.num != 0) {
            const long long m1 = std::llabs(exact->value.num);
            const long long n1 = exact->value.den;
            const long long parity = ((m1 + n1) % 2 == 0) ? 1 : 2;
            period = 2.0 * kPi * static_cast<double>(m1) * static_cast<double>(parity) /
                     std::abs(qt);
        }
    }
    if (exact && !exact->rational) period.reset();
    if (period) {
        out << "period=" << fmt(*period) << '\n';
    } else {
        out << "period=none\n";
    }

    if (measure) {
        const sasaki::FrameVector t0{0.0, st, ct};
        const periodicity::TrajectoryFn fn = [&](double s) {
            return flow::trajectory_closed_form(p, su2::identity(), t0, s);
        };
        double horizon = period ? *period * 1.05 : 200.0 * kPi;
        if (horizon_opt > 0.0) horizon = horizon_opt;
        const periodicity::PeriodSearch ps = periodicity::measure_period(fn, horizon, 0.02, 1e-5);
        if (ps.period) {
            out << "measured=" << fmt(*ps.period) << '\n';
        } else {
            out << "measured=none\n";
        }
        out << "min_distance=" << fmt(ps.min_distance) << '\n';
        out << "min_distance_at=" << fmt(ps.min_distance_at) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// quantize

int run_quantize(const ExactReal& alpha, long long m, long long n, double radius,
                 bool radius_is_absolute, long long max_den, double tol, std::ostream& out) {
    const sasaki::SasakiParams p = sasaki::params_from_alpha(alpha.value, 1.0);
    const double R = radius_is_absolute ? radius : radius * p.r;
    if (!(R > 0.0 && R <= p.r)) {
        throw std::invalid_argument("circle radius must be in (0, sqrt(alpha)/2]");
    }
    const double sigma = periodicity::slope_from_mn(m, n, R, p);
    const periodicity::SlopeQuantization sq =
        periodicity::slope_quantization(sigma, R, p, max_den, tol);

    out << "m=" << m << " n=" << n << '\n';
    out << "R=" << fmt(R) << '\n';
    out << "sigma=" << fmt(sigma) << '\n';
    out << "residual=" << fmt(sq.residual) << '\n';
    out << "ratio=" << sq.ratio.numerator << '/' << sq.ratio.denominator << '\n';
    out << "ratio_err=" << fmt(sq.ratio.error) << '\n';
    out << "verdict=" << verdict_token(sq.verdict) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// scan

int run_scan(const ExactReal& alpha, const ExactReal& q, long long n, long long max_den,
             double tol, const std::string& out_path, std::ostream& out) {
    // alpha participates in validation only: the criterion column is the
    // round-sphere quantization value, which does not depend on it.
    (void)sasaki::params_from_alpha(alpha.value, q.value);
    if (n < 1 || n > 1'000'000) throw std::invalid_argument("grid size must be in [1, 1e6]");
    with_output(out_path, out, [&](std::ostream& os) {
        os << "cos_theta,criterion,p,den,err,verdict\n";
        for (long long k = 0; k < n; ++k) {
            const double ct = -1.0 + 2.0 * (static_cast<double>(k) + 0.5) / n;
            const double rho = periodicity::s3_criterion(q.value, ct);
            const periodicity::RationalApprox ra =
                periodicity::rational_approx(rho, max_den, tol);
            os << fmt(ct) << ',' << fmt(rho) << ',' << ra.numerator << ',' << ra.denominator
               << ',' << fmt(ra.error) << ','
               << (ra.periodic ? "periodic" : "aperiodic_at_resolution") << '\n';
        }
    });
    return 0;
}

// ---------------------------------------------------------------------------
// figure

void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& writer) {
    const std::string path = dir + "/" + name;
    std::ostringstream buf;
    writer(buf);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << buf.str();
    f.flush();
    if (!f) throw std::runtime_error("write failed on " + path);
}

int run_figure(const std::string& out_dir, std::ostream& err) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

    const double s_max = 12.0 * kPi;
    const double ds = s_max / 4096.0;

    const struct {
        long long num;
        long long den;
        const char* stem;
    } curves[] = {{29, 36, "curve_cos_29_36"}, {29, 37, "curve_cos_29_37"}};

    for (const auto& c : curves) {
        const double ct = static_cast<double>(c.num) / static_cast<double>(c.den);
        const std::vector<flow::TrajectorySample> rows = ikawa_rows(ct, s_max, ds);
        const std::vector<viz::ProjectedPoint> pts = viz::project_samples(rows);
        const std::string stem = c.stem;
        write_file(out_dir, stem + ".csv",
                   [&](std::ostream& os) { viz::emit_curve_csv(os, rows); });
        write_file(out_dir, stem + ".obj",
                   [&](std::ostream& os) { viz::emit_curve_obj(os, pts); });
        write_file(out_dir, stem + ".svg",
                   [&](std::ostream& os) { viz::emit_curve_svg(os, pts); });
    }

    const sasaki::SasakiParams p = sasaki::params_from_alpha(1.0, 1.0);
    const TubeMesh mesh = build_tube_mesh(p, 29.0 / 36.0, 64, 256);
    write_file(out_dir, "tube_cos_29_36.obj",
               [&](std::ostream& os) { viz::emit_tube_obj(os, mesh.verts, 64, 256); });

    const periodicity::ExactCriterion near =
        periodicity::s3_criterion_exact(periodicity::make_rational(1, 1),
                                        periodicity::make_rational(29, 36));
    const periodicity::ExactCriterion off =
        periodicity::s3_criterion_exact(periodicity::make_rational(1, 1),
                                        periodicity::make_rational(29, 37));
    err << "note: cos(theta) = 29/36 has closure ratio ";
    if (near.rational) {
        err << near.value.num << '/' << near.value.den
            << ", so the curve closes at s = 12*pi";
    } else {
        err << "irrational";
    }
    err << "; cos(theta) = 29/37 has ";
    err << (off.rational ? "a rational" : "an irrational");
    err << " closure ratio, so that curve never closes.\n";
    return 0;
}

} // namespace

ExactReal parse_exact_real(const std::string& text) {
    std::size_t lo = text.find_first_not_of(" \t");
    std::size_t hi = text.find_last_not_of(" \t");
    if (lo == std::string::npos) throw std::invalid_argument("empty numeric value");
    const std::string s = text.substr(lo, hi - lo + 1);

    const std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        const std::string ns = s.substr(0, slash);
        const std::string ds = s.substr(slash + 1);
        long long num = 0;
        long long den = 0;
        const auto nr = std::from_chars(ns.data(), ns.data() + ns.size(), num);
        const auto dr = std::from_chars(ds.data(), ds.data() + ds.size(), den);
        if (nr.ec != std::errc{} || nr.ptr != ns.data() + ns.size() || dr.ec != std::errc{} ||
            dr.ptr != ds.data() + ds.size()) {
            throw std::invalid_argument("cannot parse fraction \"" + s + "\"");
        }
        if (den == 0) throw std::invalid_argument("fraction denominator is zero");
        ExactReal r;
        r.exact = periodicity::make_rational(num, den);
        r.value = periodicity::to_double(*r.exact);
        return r;
    }

    long long whole = 0;
    const auto ir = std::from_chars(s.data(), s.data() + s.size(), whole);
    if (ir.ec == std::errc{} && ir.ptr == s.data() + s.size()) {
        ExactReal r;
        r.exact = periodicity::make_rational(whole, 1);
        r.value = static_cast<double>(whole);
        return r;
    }

    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw std::invalid_argument("cannot parse number \"" + s + "\"");
    }
    ExactReal r;
    r.value = v;
    return r;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Magnetic trajectories on the deformed 3-sphere family", "magflow"};
    app.require_subcommand(1);

    // Float-valued flags also take "p/q"; exactness is dropped, the value kept.
    const CLI::Validator fraction_ok(
        [](std::string& s) -> std::string {
            try {
                s = fmt(parse_exact_real(s).value);
            } catch (const std::invalid_argument& e) {
                return e.what();
            }
            return {};
        },
        "NUMBER");

    // verify
    auto* sub_verify = app.add_subcommand("verify", "check the structure and curvature tables");
    std::string v_alpha = "1";
    sub_verify->add_option("--alpha", v_alpha, "family parameter (number or fraction)")
        ->capture_default_str();
    sub_verify->set_config("--config");

    // integrate
    auto* sub_int = app.add_subcommand("integrate", "integrate a trajectory numerically");
    std::string i_alpha = "1", i_q = "1", i_ct = "29/36";
    double i_t1 = 0.0, i_t2 = 0.0, i_ds = 0.001, i_smax = 0.0;
    long long i_steps = 10000;
    std::string i_out = "-";
    sub_int->add_option("--alpha", i_alpha, "family parameter")->capture_default_str();
    sub_int->add_option("--q", i_q, "charge")->capture_default_str();
    sub_int->add_option("--cos-theta", i_ct, "contact angle cosine")->capture_default_str();
    sub_int->add_option("--t1", i_t1, "initial tangent e1 component")
        ->transform(fraction_ok)
        ->capture_default_str();
    auto* i_t2_opt = sub_int->add_option("--t2", i_t2,
                                         "initial tangent e2 component (default sin(theta))")
                         ->transform(fraction_ok);
    sub_int->add_option("--ds", i_ds, "step size")->transform(fraction_ok)->capture_default_str();
    auto* i_steps_opt =
        sub_int->add_option("--steps", i_steps, "number of steps")->capture_default_str();
    auto* i_smax_opt = sub_int->add_option("--s-max", i_smax, "arclength to cover (alternative to --steps)")
                           ->transform(fraction_ok)
                           ->excludes(i_steps_opt);
    i_steps_opt->excludes(i_smax_opt);
    sub_int->add_option("--out", i_out, "output file, - for stdout")->capture_default_str();
    sub_int->set_config("--config");

    // curve
    auto* sub_curve = app.add_subcommand("curve", "sample a closed-form curve");
    std::string c_mode;
    sub_curve->add_option("mode", c_mode, "ikawa or helix")->required();
    std::string c_ct = "29/36";
    double c_ratio = 0.0, c_a = 0.0, c_b = 0.0, c_psi = kPi / 4.0;
    double c_smax = 12.0 * kPi, c_ds = 0.01;
    std::string c_format = "csv", c_out = "-";
    sub_curve->add_option("--cos-theta", c_ct, "contact angle cosine (ikawa)")
        ->capture_default_str();
    auto* c_ratio_opt =
        sub_curve->add_option("--ratio,--p", c_ratio, "rate ratio b/a (helix)")
            ->transform(fraction_ok);
    auto* c_a_opt =
        sub_curve->add_option("--a", c_a, "first rotation rate (helix)")->transform(fraction_ok);
    auto* c_b_opt =
        sub_curve->add_option("--b", c_b, "second rotation rate (helix)")->transform(fraction_ok);
    sub_curve->add_option("--psi", c_psi, "amplitude angle (helix)")
        ->transform(fraction_ok)
        ->capture_default_str();
    sub_curve->add_option("--s-max", c_smax, "arclength to cover")
        ->transform(fraction_ok)
        ->capture_default_str();
    sub_curve->add_option("--ds", c_ds, "sample spacing")->transform(fraction_ok)->capture_default_str();
    sub_curve->add_option("--format", c_format, "csv, obj, or svg")->capture_default_str();
    sub_curve->add_option("--out", c_out, "output file, - for stdout")->capture_default_str();
    sub_curve->set_config("--config");

    // project
    auto* sub_proj = app.add_subcommand("project", "project a trajectory csv to the base sphere");
    std::string p_alpha = "1", p_in = "-", p_out = "-";
    sub_proj->add_option("--alpha", p_alpha, "family parameter")->capture_default_str();
    sub_proj->add_option("--in", p_in, "input csv, - for stdin")->capture_default_str();
    sub_proj->add_option("--out", p_out, "output file, - for stdout")->capture_default_str();
    sub_proj->set_config("--config");

    // tube
    auto* sub_tube = app.add_subcommand("tube", "mesh the tube over a trajectory's base circle");
    std::string tb_alpha = "1", tb_q = "1", tb_ct = "29/36", tb_out = "-";
    int tb_nt = 64, tb_nu = 256;
    sub_tube->add_option("--alpha", tb_alpha, "family parameter")->capture_default_str();
    sub_tube->add_option("--q", tb_q, "charge")->capture_default_str();
    sub_tube->add_option("--cos-theta", tb_ct, "contact angle cosine")->capture_default_str();
    sub_tube->add_option("--nt", tb_nt, "fiber subdivisions")->capture_default_str();
    sub_tube->add_option("--nu", tb_nu, "base subdivisions")->capture_default_str();
    sub_tube->add_option("--out", tb_out, "output file, - for stdout")->capture_default_str();
    sub_tube->set_config("--config");

    // holonomy
    auto* sub_hol = app.add_subcommand("holonomy", "fiber shift around a base circle");
    std::string h_alpha = "1";
    double h_ratio = 0.5, h_R = 0.0;
    int h_n = 4096;
    sub_hol->add_option("--alpha", h_alpha, "family parameter")->capture_default_str();
    auto* h_ratio_opt =
        sub_hol->add_option("--ratio", h_ratio, "circle radius over sphere radius, in (0, 1]")
            ->transform(fraction_ok)
            ->capture_default_str();
    auto* h_R_opt = sub_hol->add_option("--R", h_R, "absolute circle radius (alternative to --ratio)")
                        ->transform(fraction_ok)
                        ->excludes(h_ratio_opt);
    h_ratio_opt->excludes(h_R_opt);
    sub_hol->add_option("--n", h_n, "lift samples per turn")->capture_default_str();
    sub_hol->set_config("--config");

    // period
    auto* sub_per = app.add_subcommand("period", "closure decision on the round sphere");
    std::string pe_q = "1", pe_ct = "29/36";
    long long pe_maxden = 64;
    double pe_tol = 1e-9, pe_horizon = 0.0;
    bool pe_measure = false;
    sub_per->add_option("--q", pe_q, "charge")->capture_default_str();
    sub_per->add_option("--cos-theta", pe_ct, "contact angle cosine")->capture_default_str();
    sub_per->add_option("--max-den", pe_maxden, "denominator bound")->capture_default_str();
    sub_per->add_option("--tol", pe_tol, "rationality tolerance")
        ->transform(fraction_ok)
        ->capture_default_str();
    sub_per->add_flag("--measure", pe_measure, "also search for the period numerically");
    sub_per->add_option("--horizon", pe_horizon, "arclength searched by --measure (default: auto)")
        ->transform(fraction_ok);
    sub_per->set_config("--config");

    // quantize
    auto* sub_qz = app.add_subcommand("quantize", "closure condition for a tube geodesic");
    std::string qz_alpha = "1";
    long long qz_m = 1, qz_n = 1, qz_maxden = 64;
    double qz_ratio = 0.6, qz_R = 0.0, qz_tol = 1e-9;
    sub_qz->add_option("--alpha", qz_alpha, "family parameter")->capture_default_str();
    sub_qz->add_option("--m", qz_m, "fiber winding number")->capture_default_str();
    sub_qz->add_option("--n", qz_n, "base winding number")->capture_default_str();
    auto* qz_ratio_opt =
        sub_qz->add_option("--radius-ratio", qz_ratio, "circle radius over sphere radius")
            ->transform(fraction_ok)
            ->capture_default_str();
    auto* qz_R_opt =
        sub_qz->add_option("--R", qz_R, "absolute circle radius (alternative to --radius-ratio)")
            ->transform(fraction_ok)
            ->excludes(qz_ratio_opt);
    qz_ratio_opt->excludes(qz_R_opt);
    sub_qz->add_option("--max-den", qz_maxden, "denominator bound")->capture_default_str();
    sub_qz->add_option("--tol", qz_tol, "rationality tolerance")
        ->transform(fraction_ok)
        ->capture_default_str();
    sub_qz->set_config("--config");

    // scan
    auto* sub_scan = app.add_subcommand("scan", "closure verdicts over a contact-angle grid");
    std::string sc_alpha = "1", sc_q = "2", sc_out = "-";
    long long sc_n = 41, sc_maxden = 64;
    double sc_tol = 1e-6;
    sub_scan->add_option("--alpha", sc_alpha, "family parameter")->capture_default_str();
    sub_scan->add_option("--q", sc_q, "charge")->capture_default_str();
    sub_scan->add_option("--n,--grid", sc_n, "grid size")->capture_default_str();
    sub_scan->add_option("--max-den", sc_maxden, "denominator bound")->capture_default_str();
    sub_scan->add_option("--tol", sc_tol, "rationality tolerance")
        ->transform(fraction_ok)
        ->capture_default_str();
    sub_scan->add_option("--out", sc_out, "output file, - for stdout")->capture_default_str();
    sub_scan->set_config("--config");

    // figure
    auto* sub_fig = app.add_subcommand("figure", "emit the reference figure data set");
    std::string f_dir = ".";
    sub_fig->add_option("--out-dir", f_dir, "output directory")->capture_default_str();
    sub_fig->set_config("--config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sub_verify) return run_verify(parse_exact_real(v_alpha), out, err);
        if (*sub_int) {
            return run_integrate(parse_exact_real(i_alpha), parse_exact_real(i_q),
                                 parse_exact_real(i_ct), i_t1, i_t2,
                                 i_t2_opt->count() > 0, i_ds, i_steps, i_smax,
                                 i_smax_opt->count() > 0, i_out, out);
        }
        if (*sub_curve) {
            return run_curve(c_mode, parse_exact_real(c_ct), c_ratio, c_ratio_opt->count() > 0,
                             c_a, c_b, c_a_opt->count() > 0, c_b_opt->count() > 0, c_psi,
                             c_smax, c_ds, c_format, c_out, out);
        }
        if (*sub_proj) return run_project(parse_exact_real(p_alpha), p_in, p_out, out);
        if (*sub_tube) {
            return run_tube(parse_exact_real(tb_alpha), parse_exact_real(tb_q),
                            parse_exact_real(tb_ct), tb_nt, tb_nu, tb_out, out, err);
        }
        if (*sub_hol) {
            const bool h_abs = h_R_opt->count() > 0;
            return run_holonomy(parse_exact_real(h_alpha), h_abs ? h_R : h_ratio, h_abs, h_n,
                                out);
        }
        if (*sub_per) {
            return run_period(parse_exact_real(pe_q), parse_exact_real(pe_ct), pe_maxden,
                              pe_tol, pe_measure, pe_horizon, out);
        }
        if (*sub_qz) {
            const bool qz_abs = qz_R_opt->count() > 0;
            return run_quantize(parse_exact_real(qz_alpha), qz_m, qz_n,
                                qz_abs ? qz_R : qz_ratio, qz_abs, qz_maxden, qz_tol, out);
        }
        if (*sub_scan) {
            return run_scan(parse_exact_real(sc_alpha), parse_exact_real(sc_q), sc_n,
                            sc_maxden, sc_tol, sc_out, out);
        }
        if (*sub_fig) return run_figure(f_dir, err);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace magflow::cli
