#pragma once

#include <screloc/types.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace screloc {

/// 8-bit RGB image, row-major, channels interleaved.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const std::size_t o = offset(x, y);
    return {data[o], data[o + 1], data[o + 2]};
  }
  void set_pixel(int x, int y, const std::array<std::uint8_t, 3>& rgb) {
    const std::size_t o = offset(x, y);
    data[o] = rgb[0];
    data[o + 1] = rgb[1];
    data[o + 2] = rgb[2];
  }
};

/// 16-bit depth image in millimeters. 0 and 65535 are reserved invalid
/// codes (65535 is the Kinect missing-depth marker; 0 shows up in
/// practice as well).
struct DepthImage {
  static constexpr std::uint16_t kInvalidZero = 0;
  static constexpr std::uint16_t kInvalidSaturated = 65535;

  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> depth_mm;  // width * height

  DepthImage() = default;
  DepthImage(int w, int h, std::uint16_t fill = kInvalidZero)
      : width(w), height(h), depth_mm(static_cast<std::size_t>(w) * h, fill) {}

  std::uint16_t at(int x, int y) const {
    return depth_mm[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, std::uint16_t d) {
    depth_mm[static_cast<std::size_t>(y) * width + x] = d;
  }
  static bool is_valid(std::uint16_t d) { return d != kInvalidZero && d != kInvalidSaturated; }
};

/// Dense per-pixel world coordinates in millimeters, xyz interleaved,
/// row-major. Pixels without a meaningful coordinate hold the (0,0,0)
/// placeholder and are flagged through the paired ValidityMask.
struct SceneCoordinateImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // width * height * 3

  SceneCoordinateImage() = default;
  SceneCoordinateImage(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0) {}

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
  Vec3 coord(int x, int y) const {
    const std::size_t o = offset(x, y);
    return Vec3(data[o], data[o + 1], data[o + 2]);
  }
  void set_coord(int x, int y, const Vec3& p) {
    const std::size_t o = offset(x, y);
    data[o] = p.x();
    data[o + 1] = p.y();
    data[o + 2] = p.z();
  }
};

/// Per-pixel validity flags, same resolution as the paired coordinate
/// image (1 = ground truth exists).
struct ValidityMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // width * height, 0/1

  ValidityMask() = default;
  ValidityMask(int w, int h, bool value = false)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, value ? 1 : 0) {}

  bool test(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool value) {
    bits[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
  }
  std::size_t count() const {
    return std::accumulate(bits.begin(), bits.end(), std::size_t{0});
  }
};

inline bool same_resolution(int w, int h, const RgbImage& img) {
  return img.width == w && img.height == h;
}
inline bool same_resolution(int w, int h, const DepthImage& img) {
  return img.width == w && img.height == h;
}
inline bool same_resolution(int w, int h, const SceneCoordinateImage& img) {
  return img.width == w && img.height == h;
}
inline bool same_resolution(int w, int h, const ValidityMask& img) {
  return img.width == w && img.height == h;
}

}  // namespace screloc
