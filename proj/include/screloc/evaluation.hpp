#pragma once

#include <screloc/image.hpp>
#include <screloc/types.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace screloc {

/// Per-frame localization outcome, as persisted in results files. The
/// error fields are meaningful only when `localized` is true; metrics
/// treat unlocalized frames as failures with +inf error.
struct FrameResult {
  std::string scene;
  std::string frame;  // "seq-03/frame-000123"
  bool localized = false;
  PoseError error;  // translational mm, rotational deg
  int final_inlier_count = 0;
  int hypotheses_evaluated = 0;
  std::string early_stop_reason;
};

/// Fraction of frames with error strictly below 5 cm and 5°; unlocalized
/// frames count as failures. Throws std::invalid_argument when empty.
double accuracy_5cm_5deg(const std::vector<FrameResult>& results);

struct MedianError {
  double translational_cm = 0.0;
  double rotational_deg = 0.0;
};

/// Component-wise medians (lower median for even counts, i.e. the
/// ceil(n/2)-th order statistic); unlocalized frames enter as +inf.
/// Throws std::invalid_argument when empty.
MedianError median_pose_error(const std::vector<FrameResult>& results);

enum class ErrorComponent { kTranslation, kRotation };

/// Paired histogram edges and cumulative fractions: cumulative[i] is the
/// fraction of samples with value <= edges[i].
struct CumulativeHistogram {
  std::vector<double> edges;
  std::vector<double> cumulative;
};

/// Normalized cumulative error histogram over one pose-error component
/// (translation in cm, rotation in degrees). Edges must be strictly
/// increasing; unlocalized frames accumulate only at +inf, i.e. never.
CumulativeHistogram cumulative_error_histogram(const std::vector<FrameResult>& results,
                                               const std::vector<double>& edges,
                                               ErrorComponent component);

/// Scene-coordinate prediction quality over the masked-in pixels of one
/// frame (or any accumulated buffer): inlier fraction under a strict
/// threshold, mean error among inliers, and a cumulative error histogram.
struct InlierStats {
  double inlier_fraction = 0.0;
  double mean_inlier_error_mm = 0.0;
  std::size_t pixel_count = 0;   // masked-in pixels considered
  std::size_t inlier_count = 0;  // pixels below the threshold
  CumulativeHistogram error_histogram;  // edges in mm
};

/// Throws std::invalid_argument on resolution mismatch or when no pixel
/// is masked in. `hist_edges_mm` may be empty (no histogram) but must
/// otherwise be strictly increasing.
InlierStats scene_coord_inlier_stats(const SceneCoordinateImage& pred,
                                     const SceneCoordinateImage& gt,
                                     const ValidityMask& mask, double threshold_mm,
                                     const std::vector<double>& hist_edges_mm = {});

/// One row of the metric report.
struct SceneMetrics {
  std::string scene;
  int frames = 0;
  double median_t_cm = 0.0;
  double median_r_deg = 0.0;
  double accuracy = 0.0;
};

/// Per-scene rows (sorted by scene name) plus the combined aggregate over
/// every frame, labeled "Complete".
struct MetricReport {
  std::vector<SceneMetrics> per_scene;
  SceneMetrics combined;
};

MetricReport build_metric_report(const std::vector<FrameResult>& results);

/// CSV schema: scene,frames,median_t_cm,median_r_deg,acc_5cm5deg — one
/// row per scene, "Complete" last. Deterministic formatting.
void write_metric_csv(const std::filesystem::path& path, const MetricReport& report);

/// CSV schema: edge,cumulative_fraction.
void write_histogram_csv(const std::filesystem::path& path,
                         const CumulativeHistogram& histogram);

}  // namespace screloc
