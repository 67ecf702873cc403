#include <screloc/evaluation.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace screloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double component_value(const FrameResult& r, ErrorComponent component) {
  if (!r.localized) return kInf;
  return component == ErrorComponent::kTranslation ? r.error.translational_mm / 10.0
                                                   : r.error.rotational_deg;
}

// Lower median: the ceil(n/2)-th order statistic, i.e. sorted[(n-1)/2].
double lower_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

void require_sorted_edges(const std::vector<double>& edges) {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw std::invalid_argument("histogram edges must be strictly increasing");
    }
  }
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

SceneMetrics metrics_for(const std::string& label,
                         const std::vector<FrameResult>& results) {
  SceneMetrics m;
  m.scene = label;
  m.frames = static_cast<int>(results.size());
  const MedianError med = median_pose_error(results);
  m.median_t_cm = med.translational_cm;
  m.median_r_deg = med.rotational_deg;
  m.accuracy = accuracy_5cm_5deg(results);
  return m;
}

}  // namespace

double accuracy_5cm_5deg(const std::vector<FrameResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("accuracy_5cm_5deg: empty result list");
  }
  std::size_t hits = 0;
  for (const FrameResult& r : results) {
    if (r.localized && r.error.translational_mm < 50.0 && r.error.rotational_deg < 5.0) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

MedianError median_pose_error(const std::vector<FrameResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("median_pose_error: empty result list");
  }
  std::vector<double> t;
  std::vector<double> r;
  t.reserve(results.size());
  r.reserve(results.size());
  for (const FrameResult& fr : results) {
    t.push_back(component_value(fr, ErrorComponent::kTranslation));
    r.push_back(component_value(fr, ErrorComponent::kRotation));
  }
  return {lower_median(std::move(t)), lower_median(std::move(r))};
}

CumulativeHistogram cumulative_error_histogram(const std::vector<FrameResult>& results,
                                               const std::vector<double>& edges,
                                               ErrorComponent component) {
  if (results.empty()) {
    throw std::invalid_argument("cumulative_error_histogram: empty result list");
  }
  if (edges.empty()) {
    throw std::invalid_argument("cumulative_error_histogram: no edges given");
  }
  require_sorted_edges(edges);

  CumulativeHistogram hist;
  hist.edges = edges;
  hist.cumulative.resize(edges.size(), 0.0);
  for (const FrameResult& r : results) {
    const double v = component_value(r, component);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (v <= edges[i]) hist.cumulative[i] += 1.0;
    }
  }
  for (double& c : hist.cumulative) c /= static_cast<double>(results.size());
  return hist;
}

InlierStats scene_coord_inlier_stats(const SceneCoordinateImage& pred,
                                     const SceneCoordinateImage& gt,
                                     const ValidityMask& mask, double threshold_mm,
                                     const std::vector<double>& hist_edges_mm) {
  if (!same_resolution(pred.width, pred.height, gt) ||
      !same_resolution(pred.width, pred.height, mask)) {
    throw std::invalid_argument("scene_coord_inlier_stats: resolution mismatch");
  }
  if (!(threshold_mm > 0.0)) {
    throw std::invalid_argument("scene_coord_inlier_stats: threshold must be positive");
  }
  require_sorted_edges(hist_edges_mm);

  InlierStats stats;
  stats.error_histogram.edges = hist_edges_mm;
  stats.error_histogram.cumulative.resize(hist_edges_mm.size(), 0.0);

  std::size_t inliers = 0;
  double inlier_error_sum = 0.0;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      if (!mask.test(x, y)) continue;
      ++stats.pixel_count;
      const double err = (pred.coord(x, y) - gt.coord(x, y)).norm();
      if (err < threshold_mm) {
        ++inliers;
        inlier_error_sum += err;
      }
      for (std::size_t i = 0; i < hist_edges_mm.size(); ++i) {
        if (err <= hist_edges_mm[i]) stats.error_histogram.cumulative[i] += 1.0;
      }
    }
  }
  if (stats.pixel_count == 0) {
    throw std::invalid_argument("scene_coord_inlier_stats: no masked-in pixels");
  }
  stats.inlier_count = inliers;
  stats.inlier_fraction =
      static_cast<double>(inliers) / static_cast<double>(stats.pixel_count);
  stats.mean_inlier_error_mm =
      inliers > 0 ? inlier_error_sum / static_cast<double>(inliers) : 0.0;
  for (double& c : stats.error_histogram.cumulative) {
    c /= static_cast<double>(stats.pixel_count);
  }
  return stats;
}

MetricReport build_metric_report(const std::vector<FrameResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("build_metric_report: empty result list");
  }
  std::map<std::string, std::vector<FrameResult>> by_scene;
  for (const FrameResult& r : results) by_scene[r.scene].push_back(r);

  MetricReport report;
  for (const auto& [scene, group] : by_scene) {
    report.per_scene.push_back(metrics_for(scene, group));
  }
  report.combined = metrics_for("Complete", results);
  return report;
}

void write_metric_csv(const std::filesystem::path& path, const MetricReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open metric CSV for writing: " + path.string());
  out << "scene,frames,median_t_cm,median_r_deg,acc_5cm5deg\n";
  const auto row = [&out](const SceneMetrics& m) {
    out << m.scene << ',' << m.frames << ',' << format_double(m.median_t_cm) << ','
        << format_double(m.median_r_deg) << ',' << format_double(m.accuracy) << '\n';
  };
  for (const SceneMetrics& m : report.per_scene) row(m);
  row(report.combined);
  if (!out) throw IoError("failed writing metric CSV: " + path.string());
}

void write_histogram_csv(const std::filesystem::path& path,
                         const CumulativeHistogram& histogram) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open histogram CSV for writing: " + path.string());
  out << "edge,cumulative_fraction\n";
  for (std::size_t i = 0; i < histogram.edges.size(); ++i) {
    out << format_double(histogram.edges[i]) << ','
        << format_double(histogram.cumulative[i]) << '\n';
  }
  if (!out) throw IoError("failed writing histogram CSV: " + path.string());
}

}  // namespace screloc
