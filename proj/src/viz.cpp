#include "magflow/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace magflow::viz {

namespace {

constexpr const char* kTrajectoryHeader =
    "s,x0,x1,x2,x3,T1,T2,T3,res_norm,res_speed,res_angle";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Shorter mantissa for SVG coordinates; still deterministic.
std::string fmt_svg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void emit_rows(std::ostream& os, const std::vector<flow::TrajectorySample>& rows,
               const std::vector<ProjectedPoint>* projected) {
    if (rows.empty()) throw std::invalid_argument("trajectory csv: no samples to emit");
    os << kTrajectoryHeader;
    if (projected != nullptr) os << ",px,py,pz";
    os << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const flow::TrajectorySample& r = rows[i];
        os << fmt(r.s) << ',' << fmt(r.position.x0) << ',' << fmt(r.position.x1) << ','
           << fmt(r.position.x2) << ',' << fmt(r.position.x3) << ',' << fmt(r.tangent.a1)
           << ',' << fmt(r.tangent.a2) << ',' << fmt(r.tangent.a3) << ','
           << fmt(r.residual_norm) << ',' << fmt(r.residual_speed) << ','
           << fmt(r.residual_angle);
        if (projected != nullptr) {
            const ProjectedPoint& w = (*projected)[i];
            os << ',' << fmt(w.x) << ',' << fmt(w.y) << ',' << fmt(w.z);
        }
        os << '\n';
    }
}

} // namespace

ProjectedPoint stereographic(const su2::Su2Element& p) {
    const double pole_dist_sq = 2.0 * (1.0 - p.x1);
    if (!(pole_dist_sq > 1e-18)) {
        throw std::domain_error("stereographic: point too close to the chart pole x1 = 1");
    }
    const double d = 1.0 - p.x1;
    return ProjectedPoint{p.x0 / d, p.x3 / d, p.x2 / d};
}

su2::Su2Element stereographic_inverse(const ProjectedPoint& w) {
    const double s = w.x * w.x + w.y * w.y + w.z * w.z;
    const double d = s + 1.0;
    return su2::Su2Element{2.0 * w.x / d, (s - 1.0) / d, 2.0 * w.z / d, 2.0 * w.y / d};
}

std::vector<ProjectedPoint> project_samples(const std::vector<flow::TrajectorySample>& rows) {
    std::vector<ProjectedPoint> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            out.push_back(stereographic(rows[i].position));
        } catch (const std::domain_error&) {
            throw std::domain_error("stereographic: sample " + std::to_string(i) +
                                    " (s = " + fmt(rows[i].s) + ") hits the chart pole x1 = 1");
        }
    }
    return out;
}

void emit_trajectory_csv(std::ostream& os, const std::vector<flow::TrajectorySample>& rows) {
    emit_rows(os, rows, nullptr);
}

void emit_curve_csv(std::ostream& os, const std::vector<flow::TrajectorySample>& rows) {
    const std::vector<ProjectedPoint> projected = project_samples(rows);
    emit_rows(os, rows, &projected);
}

std::vector<flow::TrajectorySample> read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error("trajectory csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(kTrajectoryHeader, 0) != 0) {
        throw std::runtime_error("trajectory csv: unexpected header \"" + line + "\"");
    }

    std::vector<flow::TrajectorySample> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        double f[11];
        const char* cur = line.c_str();
        for (int k = 0; k < 11; ++k) {
            char* end = nullptr;
            f[k] = std::strtod(cur, &end);
            if (end == cur) {
                throw std::runtime_error("trajectory csv: bad field " + std::to_string(k + 1) +
                                         " on line " + std::to_string(line_no));
            }
            cur = end;
            if (k < 10) {
                if (*cur != ',') {
                    throw std::runtime_error("trajectory csv: expected ',' after field " +
                                             std::to_string(k + 1) + " on line " +
                                             std::to_string(line_no));
                }
                ++cur;
            }
        }

        flow::TrajectorySample r;
        r.s = f[0];
        r.position = su2::Su2Element{f[1], f[2], f[3], f[4]};
        r.tangent = sasaki::FrameVector{f[5], f[6], f[7]};
        r.residual_norm = f[8];
        r.residual_speed = f[9];
        r.residual_angle = f[10];
        rows.push_back(r);
    }
    return rows;
}

void emit_base_csv(std::ostream& os, const std::vector<su2::Su2Vector>& pts) {
    if (pts.empty()) throw std::invalid_argument("base csv: no samples to emit");
    os << "u,y1,y2,y3\n";
    double u = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) {
            const su2::Su2Vector d = pts[i] - pts[i - 1];
            u += su2::norm(d);
        }
        os << fmt(u) << ',' << fmt(pts[i].v1) << ',' << fmt(pts[i].v2) << ','
           << fmt(pts[i].v3) << '\n';
    }
}

void emit_curve_obj(std::ostream& os, const std::vector<ProjectedPoint>& pts) {
    if (pts.size() < 2) {
        throw std::invalid_argument("curve obj: need at least two points");
    }
    for (const ProjectedPoint& p : pts) {
        os << "v " << fmt(p.x) << ' ' << fmt(p.y) << ' ' << fmt(p.z) << '\n';
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        os << "l " << i << ' ' << i + 1 << '\n';
    }
}

void emit_tube_obj(std::ostream& os, const std::vector<ProjectedPoint>& verts, int nt, int nu) {
    if (nt < 3 || nu < 3) {
        throw std::invalid_argument("tube obj: grid must be at least 3 x 3");
    }
    if (verts.size() != static_cast<std::size_t>(nt) * static_cast<std::size_t>(nu)) {
        throw std::invalid_argument("tube obj: vertex count does not match grid");
    }
    for (const ProjectedPoint& p : verts) {
        os << "v " << fmt(p.x) << ' ' << fmt(p.y) << ' ' << fmt(p.z) << '\n';
    }
    const auto idx = [nt](int i, int j) { return j * nt + i + 1; };
    for (int j = 0; j < nu; ++j) {
        const int jn = (j + 1) % nu;
        for (int i = 0; i < nt; ++i) {
            const int in = (i + 1) % nt;
            os << "f " << idx(i, j) << ' ' << idx(in, j) << ' ' << idx(in, jn) << ' '
               << idx(i, jn) << '\n';
        }
    }
}

void emit_curve_svg(std::ostream& os, const std::vector<ProjectedPoint>& pts, double size) {
    if (pts.size() < 2) {
        throw std::invalid_argument("curve svg: need at least two points");
    }
    if (!(size > 0.0) || !std::isfinite(size)) {
        throw std::invalid_argument("curve svg: canvas size must be positive");
    }

    double min_x = pts[0].x, max_x = pts[0].x;
    double min_y = pts[0].y, max_y = pts[0].y;
    for (const ProjectedPoint& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }

    const double margin = size * 0.05;
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-300});
    const double scale = (size - 2.0 * margin) / span;
    // Center both axes inside the canvas; flip y so larger y is drawn upward.
    const double off_x = margin + 0.5 * (size - 2.0 * margin - (max_x - min_x) * scale);
    const double off_y = margin + 0.5 * (size - 2.0 * margin - (max_y - min_y) * scale);

    const std::string dim = fmt_svg(size);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << dim << ' ' << dim
       << "\" width=\"" << dim << "\" height=\"" << dim << "\">\n";
    os << "<polyline fill=\"none\" stroke=\"#1b4f72\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double px = off_x + (pts[i].x - min_x) * scale;
        const double py = size - (off_y + (pts[i].y - min_y) * scale);
        if (i > 0) os << ' ';
        os << fmt_svg(px) << ',' << fmt_svg(py);
    }
    os << "\"/>\n</svg>\n";
}

} // namespace magflow::viz
