#include "screloc/scene_map.hpp"

#include "screloc/geometry.hpp"

#include <cmath>

namespace screloc {

namespace {

void require_resolution(int w, int h, int ow, int oh, const char* what) {
  if (w != ow || h != oh) {
    throw std::invalid_argument(std::string("resolution mismatch: ") + what);
  }
}

}  // namespace

std::pair<SceneCoordinateImage, ValidityMask> scene_coords_from_depth(
    const DepthImage& depth, const Pose& cam_to_world, const Intrinsics& K) {
  require_resolution(depth.width, depth.height, K.width, K.height, "depth vs intrinsics");

  SceneCoordinateImage coords(depth.width, depth.height);
  ValidityMask mask(depth.width, depth.height);
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const std::uint16_t d = depth.at(x, y);
      if (!DepthImage::is_valid(d)) {
        continue;
      }
      const Vec3 p_cam = *backproject(K, Vec2(x, y), static_cast<double>(d));
      coords.set_coord(x, y, cam_to_world.apply(p_cam));
      mask.set(x, y, true);
    }
  }
  return {std::move(coords), std::move(mask)};
}

CoordinateLoss masked_coordinate_loss(const SceneCoordinateImage& pred,
                                      const SceneCoordinateImage& gt,
                                      const ValidityMask& mask) {
  require_resolution(pred.width, pred.height, gt.width, gt.height, "pred vs gt");
  require_resolution(pred.width, pred.height, mask.width, mask.height, "pred vs mask");

  CoordinateLoss loss;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      if (!mask.test(x, y)) {
        continue;
      }
      loss.sum_mm += (pred.coord(x, y) - gt.coord(x, y)).norm();
      ++loss.pixel_count;
    }
  }
  loss.mean_mm = loss.pixel_count > 0 ? loss.sum_mm / static_cast<double>(loss.pixel_count) : 0.0;
  return loss;
}

std::vector<CloudPoint> to_point_cloud(const SceneCoordinateImage& coords,
                                       const ValidityMask& mask, const RgbImage& rgb) {
  require_resolution(coords.width, coords.height, mask.width, mask.height, "coords vs mask");
  require_resolution(coords.width, coords.height, rgb.width, rgb.height, "coords vs rgb");

  std::vector<CloudPoint> cloud;
  cloud.reserve(mask.count());
  for (int y = 0; y < coords.height; ++y) {
    for (int x = 0; x < coords.width; ++x) {
      if (!mask.test(x, y)) {
        continue;
      }
      cloud.push_back({coords.coord(x, y), rgb.pixel(x, y), x, y});
    }
  }
  return cloud;
}

}  // namespace screloc
