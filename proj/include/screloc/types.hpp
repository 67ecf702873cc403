#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>
#include <vector>

namespace screloc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Thrown when a file cannot be opened, read or written.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a file opens fine but its content violates the format.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when run options contradict each other or reference missing inputs.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rigid camera-to-world transform: maps camera-frame points into the
/// world frame. The translation component is the camera center in world
/// coordinates, in millimeters. The rotation is kept as a unit quaternion.
class Pose {
 public:
  Pose() : rotation_(Eigen::Quaterniond::Identity()), translation_(Vec3::Zero()) {}

  Pose(const Eigen::Quaterniond& rotation, const Vec3& translation)
      : rotation_(rotation.normalized()), translation_(translation) {}

  static Pose from_rt(const Mat3& rotation, const Vec3& translation) {
    return Pose(Eigen::Quaterniond(rotation), translation);
  }

  /// Builds a pose from a 4x4 homogeneous matrix. The rotation block is
  /// assumed orthonormal; the quaternion constructor absorbs small drift.
  static Pose from_matrix(const Mat4& m) {
    return from_rt(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
  }

  const Eigen::Quaterniond& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation_matrix();
    m.topRightCorner<3, 1>() = translation_;
    return m;
  }

  /// Applies the rigid map: R * p + t.
  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }

  Pose inverse() const {
    const Eigen::Quaterniond qi = rotation_.conjugate();
    return Pose(qi, -(qi * translation_));
  }

  /// Composition this ∘ other: apply `other` first, then this pose.
  Pose compose(const Pose& other) const {
    return Pose(rotation_ * other.rotation_, rotation_ * other.translation_ + translation_);
  }

  /// Camera center in world coordinates (equals the translation for a
  /// camera-to-world pose).
  const Vec3& center() const { return translation_; }

 private:
  Eigen::Quaterniond rotation_;
  Vec3 translation_;
};

inline Pose operator*(const Pose& a, const Pose& b) { return a.compose(b); }

/// Pinhole camera model. Focal lengths and principal point in pixels.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && width > 0 && height > 0 && cx > 0.0 &&
           cx < width && cy > 0.0 && cy < height;
  }
};

/// The published 7-Scenes camera constants.
inline constexpr Intrinsics kSevenScenesIntrinsics{585.0, 585.0, 320.0, 240.0, 640, 480};

/// Pose estimation error: camera-center distance in millimeters and
/// relative rotation angle in degrees (always in [0, 180]).
struct PoseError {
  double translational_mm = 0.0;
  double rotational_deg = 0.0;
};

/// One 2D-3D match: an image pixel paired with a world-frame point (mm).
struct Correspondence {
  Vec2 pixel;
  Vec3 point;
};

using CorrespondenceSet = std::vector<Correspondence>;

}  // namespace screloc
