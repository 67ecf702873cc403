#pragma once

#include <screloc/image.hpp>
#include <screloc/types.hpp>

#include <utility>
#include <vector>

namespace screloc {

/// Masked coordinate-regression loss: the sum over masked-in pixels of
/// the Euclidean distance between prediction and ground truth, plus the
/// per-valid-pixel mean as a convenience statistic.
struct CoordinateLoss {
  double sum_mm = 0.0;
  double mean_mm = 0.0;
  std::size_t pixel_count = 0;
};

/// Backprojects every valid depth pixel through the camera-to-world pose
/// to build the ground-truth scene coordinate image. Pixels carrying an
/// invalid depth code come back mask-0 with a (0,0,0) placeholder.
/// Backprojection uses integer pixel coordinates (u = column, v = row).
std::pair<SceneCoordinateImage, ValidityMask> scene_coords_from_depth(
    const DepthImage& depth, const Pose& cam_to_world, const Intrinsics& K);

/// Sum of per-pixel Euclidean distances over masked-in pixels. An
/// all-zero mask yields loss 0 with pixel_count 0.
CoordinateLoss masked_coordinate_loss(const SceneCoordinateImage& pred,
                                      const SceneCoordinateImage& gt,
                                      const ValidityMask& mask);

/// One point of the local cloud a frame induces: world position, source
/// color and the pixel it came from.
struct CloudPoint {
  Vec3 position;
  std::array<std::uint8_t, 3> color;
  int pixel_x = 0;
  int pixel_y = 0;
};

/// Exactly one entry per masked-in pixel, in row-major pixel order.
std::vector<CloudPoint> to_point_cloud(const SceneCoordinateImage& coords,
                                       const ValidityMask& mask, const RgbImage& rgb);

}  // namespace screloc
