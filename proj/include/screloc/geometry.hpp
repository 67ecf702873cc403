#pragma once

#include <screloc/types.hpp>

#include <limits>
#include <optional>

namespace screloc {

/// Projects a camera-frame point onto the image plane. Returns the pixel
/// position, which may lie outside the image bounds, or nullopt when the
/// point is at or behind the camera (z <= 0).
std::optional<Vec2> project(const Intrinsics& K, const Vec3& p_cam);

/// Lifts a pixel to a camera-frame point at the given depth (mm). Returns
/// nullopt for depth <= 0.
std::optional<Vec3> backproject(const Intrinsics& K, const Vec2& px, double depth_mm);

/// Pixel distance between `px` and the projection of the world point
/// through the camera-to-world pose. Points behind the camera yield +inf
/// so inlier-count loops need no special case.
double reprojection_error(const Intrinsics& K, const Pose& cam_to_world,
                          const Vec3& world_point, const Vec2& px);

/// Camera-center distance (mm) and relative rotation angle (deg). The
/// angle uses the absolute quaternion dot product, so q and -q compare
/// equal.
PoseError pose_error(const Pose& estimate, const Pose& ground_truth);

/// Relative rotation angle between two unit quaternions, in degrees.
double rotation_angle_deg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

inline constexpr double kInfinitePixelError = std::numeric_limits<double>::infinity();

}  // namespace screloc
