#include "screloc/geometry.hpp"

#include <cmath>

namespace screloc {

std::optional<Vec2> project(const Intrinsics& K, const Vec3& p_cam) {
  if (p_cam.z() <= 0.0) {
    return std::nullopt;
  }
  const double inv_z = 1.0 / p_cam.z();
  return Vec2(K.cx + K.fx * p_cam.x() * inv_z, K.cy + K.fy * p_cam.y() * inv_z);
}

std::optional<Vec3> backproject(const Intrinsics& K, const Vec2& px, double depth_mm) {
  if (depth_mm <= 0.0) {
    return std::nullopt;
  }
  return Vec3((px.x() - K.cx) * depth_mm / K.fx, (px.y() - K.cy) * depth_mm / K.fy, depth_mm);
}

double reprojection_error(const Intrinsics& K, const Pose& cam_to_world,
                          const Vec3& world_point, const Vec2& px) {
  const Vec3 p_cam = cam_to_world.inverse().apply(world_point);
  const auto proj = project(K, p_cam);
  if (!proj) {
    return kInfinitePixelError;
  }
  return (*proj - px).norm();
}

double rotation_angle_deg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  // |dot| folds the double cover; atan2 is accurate near both 0 and 180.
  const Eigen::Quaterniond rel = a * b.conjugate();
  const double w = std::abs(rel.w());
  const double v = rel.vec().norm();
  return 2.0 * std::atan2(v, w) * 180.0 / M_PI;
}

PoseError pose_error(const Pose& estimate, const Pose& ground_truth) {
  PoseError err;
  err.translational_mm = (estimate.center() - ground_truth.center()).norm();
  err.rotational_deg = rotation_angle_deg(estimate.rotation(), ground_truth.rotation());
  return err;
}

}  // namespace screloc
