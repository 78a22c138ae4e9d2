#pragma once

// Fibration geometry: projection to the base sphere of radius r, horizontal
// lifts of base curves, the tubes swept by fibers over a base curve, and the
// circle data (curvature, length, enclosed area, holonomy) that controls
// when lifted geodesics close up.

#include <vector>

#include "magflow/sasaki.hpp"
#include "magflow/su2.hpp"

namespace magflow::hopf {

// Circle of radius R on the base sphere, northern branch.
struct CircleData {
    double radius = 0.0;     // R, in-sphere radius of the circle
    double height = 0.0;     // distance of the circle's plane from the center
    double curvature = 0.0;  // geodesic curvature on the base sphere
    double length = 0.0;
    double area = 0.0;  // area of the spherical cap it bounds
};

// Translation lattice of a flat tube in (fiber, base-arclength) coordinates.
struct LatticeSpec {
    double fiber_gen[2] = {0.0, 0.0};
    double deck_gen[2] = {0.0, 0.0};
    double det = 0.0;
};

// Least-squares circle through a cloud of points in R^3.
struct CircleFit {
    su2::Su2Vector center;
    su2::Su2Vector normal;  // unit, oriented so <normal, center> >= 0
    double radius = 0.0;
    double plane_residual = 0.0;   // max distance of a point from the fitted plane
    double radius_residual = 0.0;  // max deviation of in-plane distance from the radius
};

// Projection of a group element to the base sphere of radius r.
[[nodiscard]] su2::Su2Vector project(const su2::Su2Element& a, const sasaki::SasakiParams& p);

// Circle of radius R at signed height along the given axis, sampled
// counterclockwise around the axis by arclength: n points per turn, n*turns+1
// samples including both endpoints. Requires R > 0 and R^2 + height^2 = r^2.
[[nodiscard]] std::vector<su2::Su2Vector> sample_circle(const sasaki::SasakiParams& p, double R,
                                                        double height,
                                                        const su2::Su2Vector& axis, int n,
                                                        int turns = 1);

// Horizontal lift of a base curve given by samples spaced du in arclength.
// start must project onto base[0] (tolerance 1e-8). Returns one lift element
// per base sample.
[[nodiscard]] std::vector<su2::Su2Element> horizontal_lift(const std::vector<su2::Su2Vector>& base,
                                                           double du,
                                                           const su2::Su2Element& start,
                                                           const sasaki::SasakiParams& p);

// Point of the tube over the lifted curve: fiber angle t, base arclength u
// (interpolated between lift samples spaced du).
[[nodiscard]] su2::Su2Element hopf_tube(const std::vector<su2::Su2Element>& lift, double du,
                                        double t, double u);

// Data of the circle of radius R (northern branch) on the base sphere.
[[nodiscard]] CircleData circle_data(double R, const sasaki::SasakiParams& p);

// Fiber rotation gained by a horizontal lift around a loop enclosing the
// given oriented area.
[[nodiscard]] double holonomy(double area, const sasaki::SasakiParams& p);

// Lattice of the flat tube over the circle: a fiber generator and the deck
// generator combining the holonomy shift with one turn of the base.
[[nodiscard]] LatticeSpec lattice(const CircleData& circle, const sasaki::SasakiParams& p);

// Geodesic curvature of the projected circle of a trajectory, from the
// charge and contact angle. Requires q != 0 and sin(theta) > 0.
[[nodiscard]] double projected_curvature_from_q(double q, double cos_theta);

// Same quantity from the trajectory's curvature and torsion.
[[nodiscard]] double projected_curvature_from_frenet(double kappa, double tau);

// Mean curvature of the tube over a base circle with geodesic curvature
// kappa_beta.
[[nodiscard]] double tube_mean_curvature(double kappa_beta);

// How far a curve with the given frame tangents (sampled every ds) is from
// being a geodesic of the tube it lies on: max over interior samples of the
// acceleration components tangent to the tube.
[[nodiscard]] double geodesic_on_tube_check(const std::vector<sasaki::FrameVector>& tangents,
                                            double ds, const sasaki::SasakiParams& p);

// Signed fiber angle from one element to another on the same fiber; throws
// if they do not share a fiber (tolerance 1e-6).
[[nodiscard]] double fiber_phase(const su2::Su2Element& from, const su2::Su2Element& to);

[[nodiscard]] CircleFit fit_circle(const std::vector<su2::Su2Vector>& points);

} // namespace magflow::hopf
