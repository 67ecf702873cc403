#pragma once

#include <screloc/types.hpp>

#include <array>
#include <vector>

namespace screloc::detail {

// World-to-camera rigid transform candidate: p_cam = R * p_world + t.
struct RigidWorldToCam {
  Mat3 R;
  Vec3 t;
};

// Polynomial coefficients c[0]*x^4 + c[1]*x^3 + c[2]*x^2 + c[3]*x + c[4].
// Returns the real roots (up to 4), each polished by a few Newton steps.
std::vector<double> solve_quartic_real(const std::array<double, 5>& c);

// Kneip's closed-form perspective-three-point solver.
//
// `rays` are unit bearing vectors in the camera frame and `points` the
// matching world points. Returns up to four rigid-transform candidates;
// an empty vector means the configuration is degenerate (collinear world
// points or parallel bearing vectors).
std::vector<RigidWorldToCam> solve_p3p(const std::array<Vec3, 3>& rays,
                                       const std::array<Vec3, 3>& points);

}  // namespace screloc::detail
