#pragma once

#include <screloc/image.hpp>
#include <screloc/scrd.hpp>
#include <screloc/types.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>

namespace screloc {

/// Axis-aligned world-space box in millimeters.
struct AxisAlignedBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool non_degenerate() const {
    return min.x() < max.x() && min.y() < max.y() && min.z() < max.z();
  }
};

/// Noise model of the oracle prediction source: a stand-in for a trained
/// scene-coordinate regressor. Per masked-in pixel the ground-truth
/// coordinate is either replaced by a uniform draw from `outlier_bounds`
/// (probability `outlier_fraction`) or jittered by axis-wise Gaussian
/// noise. Masked-out pixels receive uniform box draws too — a network
/// predicts everywhere — and the output mask is all-ones.
struct OracleConfig {
  double noise_sigma_mm = 0.0;
  double outlier_fraction = 0.0;
  AxisAlignedBox outlier_bounds;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError when the fraction leaves [0,1] or the box is
  /// degenerate while outliers or masked-out pixels could draw from it.
  void validate() const;
};

/// Applies the oracle noise model to a ground-truth coordinate map.
/// Deterministic in cfg.rng_seed; pixels are visited row-major.
std::pair<SceneCoordinateImage, ValidityMask> oracle_predict(
    const OracleConfig& cfg, const SceneCoordinateImage& gt_coords,
    const ValidityMask& gt_mask);

/// Reads a prediction map in the SCRD format; the mask is all-ones when
/// the file carries no mask plane. Thin alias over the SCRD codec so
/// callers need not know the container.
std::pair<SceneCoordinateImage, ValidityMask> load_prediction_map(
    const std::filesystem::path& path);

/// Picks the cell-center pixels of a uniform grid_w x grid_h lattice over
/// the prediction map, row-major: pixel (floor((c+0.5)*W/grid_w),
/// floor((r+0.5)*H/grid_h)). Every cell contributes exactly one entry
/// regardless of the mask — the pose optimizer is in charge of rejecting
/// bad predictions. Throws std::invalid_argument when the grid exceeds the
/// image dimensions or is empty.
CorrespondenceSet sample_grid(const SceneCoordinateImage& pred, const ValidityMask& mask,
                              int grid_w, int grid_h);

/// A scene-coordinate prediction source: maps (frame id, RGB) to a
/// full-resolution coordinate map. This is the seam where a trained
/// regressor would plug in.
class PredictionSource {
 public:
  virtual ~PredictionSource() = default;

  /// Output resolution must equal the input RGB resolution (callers may
  /// pass an empty RgbImage when the source does not need pixels, e.g.
  /// file-backed maps; resolution is then taken from the source).
  virtual std::pair<SceneCoordinateImage, ValidityMask> predict(
      const std::string& frame_id, const RgbImage& rgb) = 0;
};

/// Looks up the ground truth for a frame id; used by OracleSource.
using GroundTruthProvider =
    std::function<std::pair<SceneCoordinateImage, ValidityMask>(const std::string&)>;

/// Oracle-backed source. Each frame uses an independent RNG stream derived
/// from (cfg.rng_seed, frame id), so prediction order does not matter.
class OracleSource : public PredictionSource {
 public:
  OracleSource(OracleConfig cfg, GroundTruthProvider provider)
      : cfg_(cfg), provider_(std::move(provider)) {}

  std::pair<SceneCoordinateImage, ValidityMask> predict(const std::string& frame_id,
                                                        const RgbImage& rgb) override;

 private:
  OracleConfig cfg_;
  GroundTruthProvider provider_;
};

/// File-backed source: reads `<root>/<frame id>.scrd`. Throws IoError when
/// the file is missing and FormatError when the resolution contradicts a
/// non-empty RGB input.
class MapDirectorySource : public PredictionSource {
 public:
  explicit MapDirectorySource(std::filesystem::path root) : root_(std::move(root)) {}

  std::pair<SceneCoordinateImage, ValidityMask> predict(const std::string& frame_id,
                                                        const RgbImage& rgb) override;

 private:
  std::filesystem::path root_;
};

}  // namespace screloc
