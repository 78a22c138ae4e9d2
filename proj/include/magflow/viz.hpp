#pragma once

// Figure-data emission. Curves on the 3-sphere are flattened through the
// stereographic chart at the pole x1 = 1 and written as CSV (for plotting),
// OBJ (curves as polylines, tubes as quad meshes), or SVG (planar preview).
// All emitters are deterministic: same input, same bytes.

#include <iosfwd>
#include <vector>

#include "magflow/flow.hpp"
#include "magflow/su2.hpp"

namespace magflow::viz {

struct ProjectedPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Chart (x0, x3, x2) / (1 - x1). Throws when the point is closer than 1e-9
// (chordal) to the pole.
[[nodiscard]] ProjectedPoint stereographic(const su2::Su2Element& p);

// Inverse chart; always lands on the unit sphere.
[[nodiscard]] su2::Su2Element stereographic_inverse(const ProjectedPoint& w);

// Stereographic images of the sample positions; a pole hit names the
// offending sample index in the error.
[[nodiscard]] std::vector<ProjectedPoint> project_samples(
    const std::vector<flow::TrajectorySample>& rows);

// CSV with the fixed header s,x0,x1,x2,x3,T1,T2,T3,res_norm,res_speed,res_angle.
void emit_trajectory_csv(std::ostream& os, const std::vector<flow::TrajectorySample>& rows);

// Same, with stereographic px,py,pz columns appended.
void emit_curve_csv(std::ostream& os, const std::vector<flow::TrajectorySample>& rows);

// Parse the output of emit_trajectory_csv or emit_curve_csv (extra columns
// are ignored). Throws std::runtime_error naming the offending line.
[[nodiscard]] std::vector<flow::TrajectorySample> read_trajectory_csv(std::istream& is);

// Base-sphere polyline with cumulative chordal arclength: u,y1,y2,y3.
void emit_base_csv(std::ostream& os, const std::vector<su2::Su2Vector>& pts);

// Polyline as OBJ: one v per point, one l per edge.
void emit_curve_obj(std::ostream& os, const std::vector<ProjectedPoint>& pts);

// Closed quad mesh over an (nt x nu) vertex grid stored with index
// j * nt + i; both directions wrap.
void emit_tube_obj(std::ostream& os, const std::vector<ProjectedPoint>& verts, int nt, int nu);

// Planar preview of (x, y), autoscaled and y-flipped into a fixed square
// canvas. No timestamps or other varying content.
void emit_curve_svg(std::ostream& os, const std::vector<ProjectedPoint>& pts,
                    double size = 800.0);

} // namespace magflow::viz
