#pragma once

#include <screloc/image.hpp>
#include <screloc/rng.hpp>
#include <screloc/types.hpp>

#include <array>
#include <cstdint>
#include <utility>

namespace screloc {

/// Branch probabilities and parameter ranges of the training-time data
/// augmentation. Defaults: 40% 2D affine, 50% 3D reprojection, 10%
/// untouched; 2D translation within ±20% of the image size, rotation
/// ±45°, scale [0.7, 1.5]; 3D rotation angle [0°, 60°] about a uniform
/// axis, translation magnitude [0, 200] mm along a uniform direction.
struct AugmentationConfig {
  double p_2d = 0.40;
  double p_3d = 0.50;
  double p_identity = 0.10;
  double trans_2d_frac = 0.20;
  double rot_2d_deg = 45.0;
  std::pair<double, double> scale_range = {0.7, 1.5};
  double rot_3d_deg_max = 60.0;
  double trans_3d_mm_max = 200.0;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError unless the probabilities are a distribution
  /// (within 1e-9) and all ranges are well-formed.
  void validate() const;
};

enum class AugmentationBranch { kAffine2d, kReprojection3d, kIdentity };

/// Sampled 2D-affine parameters. The forward map on pixel coordinates is
/// A(u) = C + s·R(rotation)·(u − C) + T with C the image center
/// (width/2, height/2) and T in pixels.
struct Affine2dParams {
  double translate_x_px = 0.0;
  double translate_y_px = 0.0;
  double rotation_deg = 0.0;
  double scale = 1.0;
  std::array<std::uint8_t, 3> pad_rgb = {0, 0, 0};  // one value per sample
};

/// Sampled 3D-reprojection parameters: a camera-local pose perturbation
/// plus the seed of the per-pixel random padding stream.
struct Reprojection3dParams {
  Pose perturbation;
  std::uint64_t pad_seed = 0;
};

/// One branch draw with its parameters (only the matching member is
/// meaningful).
struct AugmentationDraw {
  AugmentationBranch branch = AugmentationBranch::kIdentity;
  Affine2dParams affine;
  Reprojection3dParams reproj;
};

/// A new training triple, together with the pose and camera that make its
/// labels geometrically consistent: projecting any masked-in coordinate
/// through (intrinsics, pose) lands within 1 px of its pixel. The 2D
/// branch realizes this with an equivalent camera (scaled focal length,
/// moved principal point, roll-adjusted pose); the 3D branch keeps the
/// original intrinsics and records the perturbed pose.
struct AugmentedSample {
  RgbImage rgb;
  SceneCoordinateImage coords;
  ValidityMask mask;
  Pose pose;
  Intrinsics intrinsics;
  AugmentationBranch branch = AugmentationBranch::kIdentity;
  Affine2dParams affine;
  Reprojection3dParams reproj;
};

/// Draws a branch and its parameters. The image size is needed to realize
/// the translation range (±trans_2d_frac of width/height, in pixels).
/// Draw order is fixed: one uniform for the branch, then the branch's
/// parameters in declaration order.
AugmentationDraw sample_augmentation(const AugmentationConfig& cfg, int width,
                                     int height, Rng& rng);

/// Applies one affine map to RGB (bilinear), coordinates and mask (both
/// nearest-neighbor, so labels are never interpolated across depth
/// edges). Output pixels that map outside the source are mask-0 with the
/// sample's single random pad color; nearest-neighbor label drift beyond
/// ~1 px (possible only at scales > 1.4) is masked out rather than kept
/// wrong. K and gt_pose describe the input frame and yield the sample's
/// equivalent camera; a nonzero rotation requires fx == fy.
AugmentedSample apply_affine_2d(const RgbImage& rgb, const SceneCoordinateImage& coords,
                                const ValidityMask& mask, const Intrinsics& K,
                                const Pose& gt_pose, const Affine2dParams& params);

/// Projects the frame's point cloud through the perturbed pose
/// compose(gt_pose, perturbation); collisions resolve nearest-depth-wins
/// (ties keep the earlier row-major point). Unrendered pixels are mask-0
/// and padded with independent random RGB values from params.pad_seed.
AugmentedSample apply_3d_reprojection(const RgbImage& rgb,
                                      const SceneCoordinateImage& coords,
                                      const ValidityMask& mask, const Intrinsics& K,
                                      const Pose& gt_pose,
                                      const Reprojection3dParams& params);

/// Draws a branch with `rng` and applies it to the frame.
AugmentedSample augment(const RgbImage& rgb, const SceneCoordinateImage& coords,
                        const ValidityMask& mask, const Intrinsics& K,
                        const Pose& gt_pose, const AugmentationConfig& cfg, Rng& rng);

}  // namespace screloc
