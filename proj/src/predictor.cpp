#include <screloc/predictor.hpp>

#include <screloc/rng.hpp>

#include <stdexcept>

namespace screloc {

void OracleConfig::validate() const {
  if (!(outlier_fraction >= 0.0 && outlier_fraction <= 1.0)) {
    throw ConfigError("oracle: outlier_fraction must lie in [0, 1]");
  }
  if (noise_sigma_mm < 0.0) {
    throw ConfigError("oracle: noise_sigma_mm must be non-negative");
  }
  if (!outlier_bounds.non_degenerate()) {
    throw ConfigError("oracle: outlier_bounds box is degenerate");
  }
}

std::pair<SceneCoordinateImage, ValidityMask> oracle_predict(
    const OracleConfig& cfg, const SceneCoordinateImage& gt_coords,
    const ValidityMask& gt_mask) {
  cfg.validate();
  if (!same_resolution(gt_coords.width, gt_coords.height, gt_mask)) {
    throw std::invalid_argument("oracle_predict: coords and mask resolutions differ");
  }

  Rng rng(cfg.rng_seed);
  SceneCoordinateImage out(gt_coords.width, gt_coords.height);
  ValidityMask out_mask(gt_coords.width, gt_coords.height, true);

  const auto box_draw = [&rng, &cfg]() {
    return Vec3(rng.uniform(cfg.outlier_bounds.min.x(), cfg.outlier_bounds.max.x()),
                rng.uniform(cfg.outlier_bounds.min.y(), cfg.outlier_bounds.max.y()),
                rng.uniform(cfg.outlier_bounds.min.z(), cfg.outlier_bounds.max.z()));
  };

  for (int y = 0; y < gt_coords.height; ++y) {
    for (int x = 0; x < gt_coords.width; ++x) {
      if (!gt_mask.test(x, y)) {
        out.set_coord(x, y, box_draw());
        continue;
      }
      if (rng.uniform() < cfg.outlier_fraction) {
        out.set_coord(x, y, box_draw());
      } else {
        const Vec3 gt = gt_coords.coord(x, y);
        out.set_coord(x, y, gt + cfg.noise_sigma_mm * Vec3(rng.gaussian(), rng.gaussian(),
                                                           rng.gaussian()));
      }
    }
  }
  return {std::move(out), std::move(out_mask)};
}

std::pair<SceneCoordinateImage, ValidityMask> load_prediction_map(
    const std::filesystem::path& path) {
  return load_scrd(path);
}

CorrespondenceSet sample_grid(const SceneCoordinateImage& pred, const ValidityMask& mask,
                              int grid_w, int grid_h) {
  if (grid_w < 1 || grid_h < 1) {
    throw std::invalid_argument("sample_grid: grid dimensions must be positive");
  }
  if (grid_w > pred.width || grid_h > pred.height) {
    throw std::invalid_argument("sample_grid: grid exceeds image dimensions");
  }
  if (!same_resolution(pred.width, pred.height, mask)) {
    throw std::invalid_argument("sample_grid: coords and mask resolutions differ");
  }

  CorrespondenceSet corrs;
  corrs.reserve(static_cast<std::size_t>(grid_w) * grid_h);
  for (int r = 0; r < grid_h; ++r) {
    const int py = static_cast<int>((2 * r + 1) * static_cast<std::int64_t>(pred.height) /
                                    (2 * grid_h));
    for (int c = 0; c < grid_w; ++c) {
      const int px = static_cast<int>((2 * c + 1) * static_cast<std::int64_t>(pred.width) /
                                      (2 * grid_w));
      corrs.push_back({Vec2(px, py), pred.coord(px, py)});
    }
  }
  return corrs;
}

std::pair<SceneCoordinateImage, ValidityMask> OracleSource::predict(
    const std::string& frame_id, const RgbImage& rgb) {
  auto [gt_coords, gt_mask] = provider_(frame_id);
  if (rgb.width > 0 && !same_resolution(rgb.width, rgb.height, gt_coords)) {
    throw FormatError("oracle source: ground truth resolution differs from RGB for " +
                      frame_id);
  }
  OracleConfig frame_cfg = cfg_;
  frame_cfg.rng_seed = derive_seed(cfg_.rng_seed, "oracle", fnv1a64(frame_id));
  return oracle_predict(frame_cfg, gt_coords, gt_mask);
}

std::pair<SceneCoordinateImage, ValidityMask> MapDirectorySource::predict(
    const std::string& frame_id, const RgbImage& rgb) {
  const std::filesystem::path path = root_ / (frame_id + ".scrd");
  auto result = load_prediction_map(path);
  if (rgb.width > 0 && !same_resolution(rgb.width, rgb.height, result.first)) {
    throw FormatError("prediction map resolution differs from RGB: " + path.string());
  }
  return result;
}

}  // namespace screloc
