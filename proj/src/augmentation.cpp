#include <screloc/augmentation.hpp>

#include <screloc/geometry.hpp>
#include <screloc/scene_map.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace screloc {
namespace {

// Output-space label drift above this is masked out instead of kept wrong;
// keeps every surviving label within 1 px of geometric truth (the
// worst-case nearest-neighbor drift is scale * sqrt(2)/2 ≈ 1.06 px at
// scale 1.5).
constexpr double kMaxLabelDriftPx = 0.995;

void require_triple_resolution(const RgbImage& rgb, const SceneCoordinateImage& coords,
                               const ValidityMask& mask) {
  if (!same_resolution(rgb.width, rgb.height, coords) ||
      !same_resolution(rgb.width, rgb.height, mask)) {
    throw std::invalid_argument("augmentation: rgb, coords and mask resolutions differ");
  }
  if (rgb.width < 1 || rgb.height < 1) {
    throw std::invalid_argument("augmentation: empty images");
  }
}

std::array<std::uint8_t, 3> bilinear_rgb(const RgbImage& img, double ux, double uy) {
  int x0 = static_cast<int>(std::floor(ux));
  int y0 = static_cast<int>(std::floor(uy));
  const double tx = ux - x0;
  const double ty = uy - y0;
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);

  const auto p00 = img.pixel(x0, y0);
  const auto p10 = img.pixel(x1, y0);
  const auto p01 = img.pixel(x0, y1);
  const auto p11 = img.pixel(x1, y1);

  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const double v = (1.0 - tx) * (1.0 - ty) * p00[c] + tx * (1.0 - ty) * p10[c] +
                     (1.0 - tx) * ty * p01[c] + tx * ty * p11[c];
    out[c] = static_cast<std::uint8_t>(std::clamp<long>(std::llround(v), 0, 255));
  }
  return out;
}

}  // namespace

void AugmentationConfig::validate() const {
  if (p_2d < 0.0 || p_3d < 0.0 || p_identity < 0.0) {
    throw ConfigError("augment: branch probabilities must be non-negative");
  }
  if (std::abs(p_2d + p_3d + p_identity - 1.0) > 1e-9) {
    throw ConfigError("augment: branch probabilities must sum to 1");
  }
  if (trans_2d_frac < 0.0) throw ConfigError("augment: trans_2d_frac must be >= 0");
  if (rot_2d_deg < 0.0) throw ConfigError("augment: rot_2d_deg must be >= 0");
  if (!(scale_range.first > 0.0) || scale_range.second < scale_range.first) {
    throw ConfigError("augment: scale_range must satisfy 0 < lo <= hi");
  }
  if (rot_3d_deg_max < 0.0) throw ConfigError("augment: rot_3d_deg_max must be >= 0");
  if (trans_3d_mm_max < 0.0) throw ConfigError("augment: trans_3d_mm_max must be >= 0");
}

AugmentationDraw sample_augmentation(const AugmentationConfig& cfg, int width,
                                     int height, Rng& rng) {
  cfg.validate();
  AugmentationDraw draw;
  const double u = rng.uniform();
  if (u < cfg.p_2d) {
    draw.branch = AugmentationBranch::kAffine2d;
    draw.affine.translate_x_px =
        rng.uniform(-cfg.trans_2d_frac * width, cfg.trans_2d_frac * width);
    draw.affine.translate_y_px =
        rng.uniform(-cfg.trans_2d_frac * height, cfg.trans_2d_frac * height);
    draw.affine.rotation_deg = rng.uniform(-cfg.rot_2d_deg, cfg.rot_2d_deg);
    draw.affine.scale = rng.uniform(cfg.scale_range.first, cfg.scale_range.second);
    for (int c = 0; c < 3; ++c) {
      draw.affine.pad_rgb[c] = static_cast<std::uint8_t>(rng.uniform_below(256));
    }
  } else if (u < cfg.p_2d + cfg.p_3d) {
    draw.branch = AugmentationBranch::kReprojection3d;
    const Vec3 axis = rng.unit_vector();
    const double angle_rad = rng.uniform(0.0, cfg.rot_3d_deg_max) * M_PI / 180.0;
    const Vec3 direction = rng.unit_vector();
    const double magnitude_mm = rng.uniform(0.0, cfg.trans_3d_mm_max);
    draw.reproj.perturbation = Pose(Eigen::Quaterniond(Eigen::AngleAxisd(angle_rad, axis)),
                                    magnitude_mm * direction);
    draw.reproj.pad_seed = rng.next_u64();
  } else {
    draw.branch = AugmentationBranch::kIdentity;
  }
  return draw;
}

AugmentedSample apply_affine_2d(const RgbImage& rgb, const SceneCoordinateImage& coords,
                                const ValidityMask& mask, const Intrinsics& K,
                                const Pose& gt_pose, const Affine2dParams& params) {
  require_triple_resolution(rgb, coords, mask);
  if (params.rotation_deg != 0.0 && K.fx != K.fy) {
    throw std::invalid_argument(
        "apply_affine_2d: in-plane rotation requires fx == fy (no equivalent "
        "pinhole camera exists otherwise)");
  }
  if (!(params.scale > 0.0)) {
    throw std::invalid_argument("apply_affine_2d: scale must be positive");
  }

  const int w = rgb.width;
  const int h = rgb.height;
  const double pivot_x = 0.5 * w;
  const double pivot_y = 0.5 * h;
  const double theta = params.rotation_deg * M_PI / 180.0;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double inv_s = 1.0 / params.scale;

  AugmentedSample out;
  out.rgb = RgbImage(w, h);
  out.coords = SceneCoordinateImage(w, h);
  out.mask = ValidityMask(w, h, false);
  out.branch = AugmentationBranch::kAffine2d;
  out.affine = params;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Inverse map: u = C + (1/s)·R(−θ)·(q − C − T).
      const double qx = x - pivot_x - params.translate_x_px;
      const double qy = y - pivot_y - params.translate_y_px;
      const double ux = pivot_x + inv_s * (ct * qx + st * qy);
      const double uy = pivot_y + inv_s * (-st * qx + ct * qy);

      if (!(ux >= 0.0 && ux <= w - 1 && uy >= 0.0 && uy <= h - 1)) {
        out.rgb.set_pixel(x, y, params.pad_rgb);
        continue;  // mask stays 0, coords stay (0,0,0)
      }
      out.rgb.set_pixel(x, y, bilinear_rgb(rgb, ux, uy));

      const int sx = static_cast<int>(std::llround(ux));
      const int sy = static_cast<int>(std::llround(uy));
      if (!mask.test(sx, sy)) continue;
      const double dx = ux - sx;
      const double dy = uy - sy;
      if (params.scale * std::sqrt(dx * dx + dy * dy) > kMaxLabelDriftPx) continue;
      out.coords.set_coord(x, y, coords.coord(sx, sy));
      out.mask.set(x, y, true);
    }
  }

  // Equivalent camera: focal lengths scale with s, the principal point
  // moves through the forward affine, and the camera rolls by −θ about
  // its optical axis.
  out.intrinsics = K;
  out.intrinsics.fx = params.scale * K.fx;
  out.intrinsics.fy = params.scale * K.fy;
  out.intrinsics.cx = pivot_x +
                      params.scale * (ct * (K.cx - pivot_x) - st * (K.cy - pivot_y)) +
                      params.translate_x_px;
  out.intrinsics.cy = pivot_y +
                      params.scale * (st * (K.cx - pivot_x) + ct * (K.cy - pivot_y)) +
                      params.translate_y_px;
  const Pose roll(Eigen::Quaterniond(Eigen::AngleAxisd(-theta, Vec3::UnitZ())),
                  Vec3::Zero());
  out.pose = gt_pose.compose(roll);
  return out;
}

AugmentedSample apply_3d_reprojection(const RgbImage& rgb,
                                      const SceneCoordinateImage& coords,
                                      const ValidityMask& mask, const Intrinsics& K,
                                      const Pose& gt_pose,
                                      const Reprojection3dParams& params) {
  require_triple_resolution(rgb, coords, mask);
  if (!K.valid() || K.width != rgb.width || K.height != rgb.height) {
    throw std::invalid_argument("apply_3d_reprojection: intrinsics do not match images");
  }

  const int w = rgb.width;
  const int h = rgb.height;
  const Pose new_pose = gt_pose.compose(params.perturbation);
  const Pose w2c = new_pose.inverse();

  AugmentedSample out;
  out.rgb = RgbImage(w, h);
  out.coords = SceneCoordinateImage(w, h);
  out.mask = ValidityMask(w, h, false);
  out.pose = new_pose;
  out.intrinsics = K;
  out.branch = AugmentationBranch::kReprojection3d;
  out.reproj = params;

  std::vector<double> zbuf(static_cast<std::size_t>(w) * h,
                           std::numeric_limits<double>::infinity());
  for (const CloudPoint& cp : to_point_cloud(coords, mask, rgb)) {
    const Vec3 pc = w2c.apply(cp.position);
    if (!(pc.z() > 0.0)) continue;
    const std::optional<Vec2> proj = project(K, pc);
    const long px = std::llround(proj->x());
    const long py = std::llround(proj->y());
    if (px < 0 || px >= w || py < 0 || py >= h) continue;
    const std::size_t idx = static_cast<std::size_t>(py) * w + px;
    if (pc.z() < zbuf[idx]) {  // strict: the earlier point wins depth ties
      zbuf[idx] = pc.z();
      out.rgb.set_pixel(static_cast<int>(px), static_cast<int>(py), cp.color);
      out.coords.set_coord(static_cast<int>(px), static_cast<int>(py), cp.position);
      out.mask.set(static_cast<int>(px), static_cast<int>(py), true);
    }
  }

  // Independent random color per unrendered pixel, row-major draw order.
  Rng pad_rng(params.pad_seed);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (out.mask.test(x, y)) continue;
      out.rgb.set_pixel(x, y,
                        {static_cast<std::uint8_t>(pad_rng.uniform_below(256)),
                         static_cast<std::uint8_t>(pad_rng.uniform_below(256)),
                         static_cast<std::uint8_t>(pad_rng.uniform_below(256))});
    }
  }
  return out;
}

AugmentedSample augment(const RgbImage& rgb, const SceneCoordinateImage& coords,
                        const ValidityMask& mask, const Intrinsics& K,
                        const Pose& gt_pose, const AugmentationConfig& cfg, Rng& rng) {
  const AugmentationDraw draw = sample_augmentation(cfg, rgb.width, rgb.height, rng);
  switch (draw.branch) {
    case AugmentationBranch::kAffine2d:
      return apply_affine_2d(rgb, coords, mask, K, gt_pose, draw.affine);
    case AugmentationBranch::kReprojection3d:
      return apply_3d_reprojection(rgb, coords, mask, K, gt_pose, draw.reproj);
    case AugmentationBranch::kIdentity:
      break;
  }
  AugmentedSample out;
  out.rgb = rgb;
  out.coords = coords;
  out.mask = mask;
  out.pose = gt_pose;
  out.intrinsics = K;
  out.branch = AugmentationBranch::kIdentity;
  return out;
}

}  // namespace screloc
