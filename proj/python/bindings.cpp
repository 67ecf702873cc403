// pybind11 bindings for the screloc core. Images cross the boundary as
// numpy arrays: RGB (h, w, 3) uint8, depth (h, w) uint16, scene
// coordinates (h, w, 3) float64, validity masks (h, w) bool.
// Correspondence sets cross as a (n, 2) pixel array paired with a (n, 3)
// point array.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <screloc/augmentation.hpp>
#include <screloc/commands.hpp>
#include <screloc/dataset_io.hpp>
#include <screloc/evaluation.hpp>
#include <screloc/geometry.hpp>
#include <screloc/pose_solver.hpp>
#include <screloc/predictor.hpp>
#include <screloc/rng.hpp>
#include <screloc/scene_map.hpp>
#include <screloc/scrd.hpp>

#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

namespace py = pybind11;
using namespace screloc;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using U16Array = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

RgbImage rgb_from_array(const U8Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) {
    throw std::invalid_argument("rgb array must have shape (h, w, 3)");
  }
  RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.data.data(), a.data(), img.data.size());
  return img;
}

py::array rgb_to_array(const RgbImage& img) {
  py::array_t<std::uint8_t> a({img.height, img.width, 3});
  std::memcpy(a.mutable_data(), img.data.data(), img.data.size());
  return a;
}

DepthImage depth_from_array(const U16Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("depth array must have shape (h, w)");
  DepthImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.depth_mm.data(), a.data(), img.depth_mm.size() * sizeof(std::uint16_t));
  return img;
}

py::array depth_to_array(const DepthImage& img) {
  py::array_t<std::uint16_t> a({img.height, img.width});
  std::memcpy(a.mutable_data(), img.depth_mm.data(),
              img.depth_mm.size() * sizeof(std::uint16_t));
  return a;
}

SceneCoordinateImage coords_from_array(const F64Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) {
    throw std::invalid_argument("coordinate array must have shape (h, w, 3)");
  }
  SceneCoordinateImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.data.data(), a.data(), img.data.size() * sizeof(double));
  return img;
}

py::array coords_to_array(const SceneCoordinateImage& img) {
  py::array_t<double> a({img.height, img.width, 3});
  std::memcpy(a.mutable_data(), img.data.data(), img.data.size() * sizeof(double));
  return a;
}

ValidityMask mask_from_array(const BoolArray& a) {
  if (a.ndim() != 2) throw std::invalid_argument("mask array must have shape (h, w)");
  ValidityMask mask(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  const bool* src = a.data();
  for (std::size_t k = 0; k < mask.bits.size(); ++k) mask.bits[k] = src[k] ? 1 : 0;
  return mask;
}

py::array mask_to_array(const ValidityMask& mask) {
  py::array_t<bool> a({mask.height, mask.width});
  bool* dst = a.mutable_data();
  for (std::size_t k = 0; k < mask.bits.size(); ++k) dst[k] = mask.bits[k] != 0;
  return a;
}

CorrespondenceSet corrs_from_arrays(const F64Array& pixels, const F64Array& points) {
  if (pixels.ndim() != 2 || pixels.shape(1) != 2) {
    throw std::invalid_argument("pixels array must have shape (n, 2)");
  }
  if (points.ndim() != 2 || points.shape(1) != 3) {
    throw std::invalid_argument("points array must have shape (n, 3)");
  }
  if (pixels.shape(0) != points.shape(0)) {
    throw std::invalid_argument("pixels and points must pair up one to one");
  }
  CorrespondenceSet corrs(static_cast<std::size_t>(pixels.shape(0)));
  const double* px = pixels.data();
  const double* pt = points.data();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    corrs[i].pixel = Vec2(px[2 * i], px[2 * i + 1]);
    corrs[i].point = Vec3(pt[3 * i], pt[3 * i + 1], pt[3 * i + 2]);
  }
  return corrs;
}

py::tuple corrs_to_arrays(const CorrespondenceSet& corrs) {
  const py::ssize_t n = static_cast<py::ssize_t>(corrs.size());
  py::array_t<double> pixels({n, py::ssize_t{2}});
  py::array_t<double> points({n, py::ssize_t{3}});
  double* px = pixels.mutable_data();
  double* pt = points.mutable_data();
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    px[2 * i] = corrs[i].pixel.x();
    px[2 * i + 1] = corrs[i].pixel.y();
    pt[3 * i] = corrs[i].point.x();
    pt[3 * i + 1] = corrs[i].point.y();
    pt[3 * i + 2] = corrs[i].point.z();
  }
  return py::make_tuple(pixels, points);
}

ErrorComponent component_from_string(const std::string& name) {
  if (name == "translation") return ErrorComponent::kTranslation;
  if (name == "rotation") return ErrorComponent::kRotation;
  throw std::invalid_argument("component must be 'translation' or 'rotation'");
}

const char* branch_name(AugmentationBranch branch) {
  switch (branch) {
    case AugmentationBranch::kAffine2d: return "2d";
    case AugmentationBranch::kReprojection3d: return "3d";
    case AugmentationBranch::kIdentity: return "identity";
  }
  return "identity";
}

}  // namespace

PYBIND11_MODULE(_screloc, m) {
  m.doc() = "Scene-coordinate camera relocalization toolkit";
  m.attr("__version__") = "0.1.0";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // ---- geometry ------------------------------------------------------------
  py::class_<Pose>(m, "Pose", "Camera-to-world rigid transform, translation in mm")
      .def(py::init<>())
      .def(py::init([](const Eigen::Vector4d& q_wxyz, const Vec3& t_mm) {
             return Pose(Eigen::Quaterniond(q_wxyz[0], q_wxyz[1], q_wxyz[2], q_wxyz[3]),
                         t_mm);
           }),
           py::arg("q_wxyz"), py::arg("t_mm"))
      .def_static("from_matrix", &Pose::from_matrix, py::arg("matrix"),
                  "Build from a 4x4 homogeneous matrix (translation in mm)")
      .def("matrix", &Pose::matrix)
      .def_property_readonly("q_wxyz",
                             [](const Pose& p) {
                               const Eigen::Quaterniond& q = p.rotation();
                               return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
                             })
      .def_property_readonly("t_mm", [](const Pose& p) { return p.translation(); })
      .def("apply", &Pose::apply, py::arg("point_mm"))
      .def("compose", &Pose::compose, py::arg("other"))
      .def("inverse", &Pose::inverse)
      .def("__repr__", [](const Pose& p) {
        const Eigen::Quaterniond& q = p.rotation();
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "Pose(q_wxyz=(%.4f, %.4f, %.4f, %.4f), t_mm=(%.1f, %.1f, %.1f))",
                      q.w(), q.x(), q.y(), q.z(), p.translation().x(),
                      p.translation().y(), p.translation().z());
        return std::string(buf);
      });

  py::class_<Intrinsics>(m, "Intrinsics")
      .def(py::init<>())
      .def(py::init([](double fx, double fy, double cx, double cy, int width, int height) {
             return Intrinsics{fx, fy, cx, cy, width, height};
           }),
           py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"),
           py::arg("height"))
      .def_readwrite("fx", &Intrinsics::fx)
      .def_readwrite("fy", &Intrinsics::fy)
      .def_readwrite("cx", &Intrinsics::cx)
      .def_readwrite("cy", &Intrinsics::cy)
      .def_readwrite("width", &Intrinsics::width)
      .def_readwrite("height", &Intrinsics::height)
      .def("valid", &Intrinsics::valid);
  m.attr("SEVEN_SCENES_INTRINSICS") =
      Intrinsics{kSevenScenesIntrinsics.fx, kSevenScenesIntrinsics.fy,
                 kSevenScenesIntrinsics.cx, kSevenScenesIntrinsics.cy,
                 kSevenScenesIntrinsics.width, kSevenScenesIntrinsics.height};

  py::class_<PoseError>(m, "PoseError")
      .def_readonly("translational_mm", &PoseError::translational_mm)
      .def_readonly("rotational_deg", &PoseError::rotational_deg);

  m.def("pose_error", &pose_error, py::arg("estimate"), py::arg("ground_truth"));
  m.def(
      "project",
      [](const Intrinsics& K, const Vec3& p_cam) -> py::object {
        const auto px = project(K, p_cam);
        if (!px) return py::none();
        return py::cast(*px);
      },
      py::arg("intrinsics"), py::arg("point_cam_mm"));
  m.def(
      "backproject",
      [](const Intrinsics& K, const Vec2& px, double depth_mm) -> py::object {
        const auto p = backproject(K, px, depth_mm);
        if (!p) return py::none();
        return py::cast(*p);
      },
      py::arg("intrinsics"), py::arg("pixel"), py::arg("depth_mm"));
  m.def(
      "reprojection_error",
      [](const Intrinsics& K, const Pose& pose, const Vec3& world, const Vec2& px) {
        return reprojection_error(K, pose, world, px);
      },
      py::arg("intrinsics"), py::arg("cam_to_world"), py::arg("world_point_mm"),
      py::arg("pixel"));

  // ---- scene coordinates ----------------------------------------------------
  m.def(
      "scene_coords_from_depth",
      [](const U16Array& depth, const Pose& pose, const Intrinsics& K) {
        const auto [coords, mask] = scene_coords_from_depth(depth_from_array(depth), pose, K);
        return py::make_tuple(coords_to_array(coords), mask_to_array(mask));
      },
      py::arg("depth_mm"), py::arg("cam_to_world"), py::arg("intrinsics"),
      "Backproject a depth map into a (coords, mask) pair");

  py::class_<CoordinateLoss>(m, "CoordinateLoss")
      .def_readonly("sum_mm", &CoordinateLoss::sum_mm)
      .def_readonly("mean_mm", &CoordinateLoss::mean_mm)
      .def_readonly("pixel_count", &CoordinateLoss::pixel_count);

  m.def(
      "masked_coordinate_loss",
      [](const F64Array& pred, const F64Array& gt, const BoolArray& mask) {
        return masked_coordinate_loss(coords_from_array(pred), coords_from_array(gt),
                                      mask_from_array(mask));
      },
      py::arg("pred"), py::arg("gt"), py::arg("mask"));

  // ---- prediction sources ----------------------------------------------------
  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init<>())
      .def_readwrite("noise_sigma_mm", &OracleConfig::noise_sigma_mm)
      .def_readwrite("outlier_fraction", &OracleConfig::outlier_fraction)
      .def_readwrite("rng_seed", &OracleConfig::rng_seed)
      .def_property(
          "outlier_box_min_mm",
          [](const OracleConfig& c) { return c.outlier_bounds.min; },
          [](OracleConfig& c, const Vec3& v) { c.outlier_bounds.min = v; })
      .def_property(
          "outlier_box_max_mm",
          [](const OracleConfig& c) { return c.outlier_bounds.max; },
          [](OracleConfig& c, const Vec3& v) { c.outlier_bounds.max = v; })
      .def("validate", &OracleConfig::validate);

  m.def(
      "oracle_predict",
      [](const OracleConfig& cfg, const F64Array& gt, const BoolArray& mask) {
        const auto [coords, out_mask] =
            oracle_predict(cfg, coords_from_array(gt), mask_from_array(mask));
        return py::make_tuple(coords_to_array(coords), mask_to_array(out_mask));
      },
      py::arg("config"), py::arg("gt_coords"), py::arg("gt_mask"));

  m.def(
      "sample_grid",
      [](const F64Array& pred, const BoolArray& mask, int grid_w, int grid_h) {
        return corrs_to_arrays(
            sample_grid(coords_from_array(pred), mask_from_array(mask), grid_w, grid_h));
      },
      py::arg("pred"), py::arg("mask"), py::arg("grid_w"), py::arg("grid_h"),
      "Cell-center correspondence lattice; returns (pixels (n,2), points (n,3))");

  // ---- pose optimization ------------------------------------------------------
  py::class_<RansacConfig>(m, "RansacConfig")
      .def(py::init<>())
      .def_readwrite("n_correspondences", &RansacConfig::n_correspondences)
      .def_readwrite("n_hypotheses", &RansacConfig::n_hypotheses)
      .def_readwrite("inlier_threshold_px", &RansacConfig::inlier_threshold_px)
      .def_readwrite("refine_steps", &RansacConfig::refine_steps)
      .def_readwrite("refine_inlier_cap", &RansacConfig::refine_inlier_cap)
      .def_readwrite("refine_min_inliers", &RansacConfig::refine_min_inliers)
      .def_readwrite("max_sampling_attempts_per_hypothesis",
                     &RansacConfig::max_sampling_attempts_per_hypothesis)
      .def_readwrite("rng_seed", &RansacConfig::rng_seed)
      .def("validate", &RansacConfig::validate);

  py::class_<LocalizationResult>(m, "LocalizationResult")
      .def_readonly("localized", &LocalizationResult::localized)
      .def_readonly("pose", &LocalizationResult::pose)
      .def_readonly("final_inlier_count", &LocalizationResult::final_inlier_count)
      .def_readonly("hypotheses_evaluated", &LocalizationResult::hypotheses_evaluated)
      .def_readonly("refinement_rounds_executed",
                    &LocalizationResult::refinement_rounds_executed)
      .def_readonly("selected_hypothesis", &LocalizationResult::selected_hypothesis)
      .def_readonly("selected_score", &LocalizationResult::selected_score)
      .def_readonly("fallback_hypotheses", &LocalizationResult::fallback_hypotheses)
      .def_readonly("total_sampling_attempts", &LocalizationResult::total_sampling_attempts)
      .def_readonly("early_stop_reason", &LocalizationResult::early_stop_reason);

  m.def(
      "ransac_localize",
      [](const F64Array& pixels, const F64Array& points, const Intrinsics& K,
         const RansacConfig& cfg) {
        return ransac_localize(corrs_from_arrays(pixels, points), K, cfg);
      },
      py::arg("pixels"), py::arg("points"), py::arg("intrinsics"),
      py::arg("config") = RansacConfig{});

  m.def(
      "solve_pnp_minimal",
      [](const F64Array& pixels, const F64Array& points, const Intrinsics& K) {
        const CorrespondenceSet corrs = corrs_from_arrays(pixels, points);
        if (corrs.size() != 4) {
          throw std::invalid_argument("minimal PnP takes exactly 4 correspondences");
        }
        const MinimalPnpResult res =
            solve_pnp_minimal({corrs[0], corrs[1], corrs[2], corrs[3]}, K);
        return py::make_tuple(res.pose ? py::cast(*res.pose) : py::none(),
                              res.degenerate);
      },
      py::arg("pixels"), py::arg("points"), py::arg("intrinsics"),
      "Returns (pose or None, degenerate)");

  // ---- augmentation --------------------------------------------------------
  py::class_<AugmentationConfig>(m, "AugmentationConfig")
      .def(py::init<>())
      .def_readwrite("p_2d", &AugmentationConfig::p_2d)
      .def_readwrite("p_3d", &AugmentationConfig::p_3d)
      .def_readwrite("p_identity", &AugmentationConfig::p_identity)
      .def_readwrite("trans_2d_frac", &AugmentationConfig::trans_2d_frac)
      .def_readwrite("rot_2d_deg", &AugmentationConfig::rot_2d_deg)
      .def_readwrite("scale_range", &AugmentationConfig::scale_range)
      .def_readwrite("rot_3d_deg_max", &AugmentationConfig::rot_3d_deg_max)
      .def_readwrite("trans_3d_mm_max", &AugmentationConfig::trans_3d_mm_max)
      .def_readwrite("rng_seed", &AugmentationConfig::rng_seed)
      .def("validate", &AugmentationConfig::validate);

  m.def(
      "augment",
      [](const U8Array& rgb, const F64Array& coords, const BoolArray& mask,
         const Intrinsics& K, const Pose& gt_pose, const AugmentationConfig& cfg,
         std::uint64_t seed) {
        Rng rng(seed);
        const AugmentedSample s = augment(rgb_from_array(rgb), coords_from_array(coords),
                                          mask_from_array(mask), K, gt_pose, cfg, rng);
        py::dict out;
        out["rgb"] = rgb_to_array(s.rgb);
        out["coords"] = coords_to_array(s.coords);
        out["mask"] = mask_to_array(s.mask);
        out["pose"] = s.pose;
        out["intrinsics"] = s.intrinsics;
        out["branch"] = branch_name(s.branch);
        return out;
      },
      py::arg("rgb"), py::arg("coords"), py::arg("mask"), py::arg("intrinsics"),
      py::arg("gt_pose"), py::arg("config") = AugmentationConfig{}, py::arg("seed") = 0,
      "Draw one augmented training sample; returns a dict");

  // ---- evaluation ------------------------------------------------------------
  py::class_<FrameResult>(m, "FrameResult")
      .def(py::init([](std::string scene, std::string frame, bool localized,
                       double err_t_mm, double err_r_deg) {
             FrameResult r;
             r.scene = std::move(scene);
             r.frame = std::move(frame);
             r.localized = localized;
             r.error.translational_mm = err_t_mm;
             r.error.rotational_deg = err_r_deg;
             return r;
           }),
           py::arg("scene") = "", py::arg("frame") = "", py::arg("localized") = false,
           py::arg("err_t_mm") = 0.0, py::arg("err_r_deg") = 0.0)
      .def_readwrite("scene", &FrameResult::scene)
      .def_readwrite("frame", &FrameResult::frame)
      .def_readwrite("localized", &FrameResult::localized)
      .def_property(
          "err_t_mm", [](const FrameResult& r) { return r.error.translational_mm; },
          [](FrameResult& r, double v) { r.error.translational_mm = v; })
      .def_property(
          "err_r_deg", [](const FrameResult& r) { return r.error.rotational_deg; },
          [](FrameResult& r, double v) { r.error.rotational_deg = v; });

  py::class_<MedianError>(m, "MedianError")
      .def_readonly("translational_cm", &MedianError::translational_cm)
      .def_readonly("rotational_deg", &MedianError::rotational_deg);

  py::class_<CumulativeHistogram>(m, "CumulativeHistogram")
      .def_readonly("edges", &CumulativeHistogram::edges)
      .def_readonly("cumulative", &CumulativeHistogram::cumulative);

  py::class_<InlierStats>(m, "InlierStats")
      .def_readonly("inlier_fraction", &InlierStats::inlier_fraction)
      .def_readonly("mean_inlier_error_mm", &InlierStats::mean_inlier_error_mm)
      .def_readonly("pixel_count", &InlierStats::pixel_count)
      .def_readonly("inlier_count", &InlierStats::inlier_count)
      .def_readonly("error_histogram", &InlierStats::error_histogram);

  m.def("accuracy_5cm_5deg", &accuracy_5cm_5deg, py::arg("results"));
  m.def("median_pose_error", &median_pose_error, py::arg("results"));
  m.def(
      "cumulative_error_histogram",
      [](const std::vector<FrameResult>& results, const std::vector<double>& edges,
         const std::string& component) {
        return cumulative_error_histogram(results, edges, component_from_string(component));
      },
      py::arg("results"), py::arg("edges"), py::arg("component"));
  m.def(
      "scene_coord_inlier_stats",
      [](const F64Array& pred, const F64Array& gt, const BoolArray& mask,
         double threshold_mm, const std::vector<double>& hist_edges_mm) {
        return scene_coord_inlier_stats(coords_from_array(pred), coords_from_array(gt),
                                        mask_from_array(mask), threshold_mm,
                                        hist_edges_mm);
      },
      py::arg("pred"), py::arg("gt"), py::arg("mask"), py::arg("threshold_mm"),
      py::arg("hist_edges_mm") = std::vector<double>{});

  // ---- file formats ----------------------------------------------------------
  m.def(
      "write_scrd",
      [](const std::filesystem::path& path, const F64Array& coords,
         const py::object& mask) {
        const SceneCoordinateImage img = coords_from_array(coords);
        if (mask.is_none()) {
          write_scrd(path, img, nullptr);
        } else {
          const ValidityMask m2 = mask_from_array(mask.cast<BoolArray>());
          write_scrd(path, img, &m2);
        }
      },
      py::arg("path"), py::arg("coords"), py::arg("mask") = py::none());
  m.def(
      "load_scrd",
      [](const std::filesystem::path& path) {
        const auto [coords, mask] = load_scrd(path);
        return py::make_tuple(coords_to_array(coords), mask_to_array(mask));
      },
      py::arg("path"));
  m.def(
      "write_depth_png",
      [](const std::filesystem::path& path, const U16Array& depth) {
        write_depth_png(path, depth_from_array(depth));
      },
      py::arg("path"), py::arg("depth_mm"));
  m.def(
      "load_depth_png",
      [](const std::filesystem::path& path) { return depth_to_array(load_depth_png(path)); },
      py::arg("path"));
  m.def(
      "write_rgb_png",
      [](const std::filesystem::path& path, const U8Array& rgb) {
        write_rgb_png(path, rgb_from_array(rgb));
      },
      py::arg("path"), py::arg("rgb"));
  m.def(
      "load_rgb_png",
      [](const std::filesystem::path& path) { return rgb_to_array(load_rgb_png(path)); },
      py::arg("path"));
  m.def("write_pose_file", &write_pose_file, py::arg("path"), py::arg("pose"));
  m.def("load_pose_file", &load_pose_file, py::arg("path"));

  // ---- seeds -----------------------------------------------------------------
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("label"),
        py::arg("index") = 0);
  m.def("fnv1a64", [](const std::string& s) { return fnv1a64(s); }, py::arg("text"));

  // ---- batch commands ----------------------------------------------------------
  py::class_<GenGtConfig>(m, "GenGtConfig")
      .def(py::init<>())
      .def_readwrite("dataset_root", &GenGtConfig::dataset_root)
      .def_readwrite("split_manifest", &GenGtConfig::split_manifest)
      .def_readwrite("output_dir", &GenGtConfig::output_dir)
      .def_readwrite("intrinsics", &GenGtConfig::intrinsics)
      .def_readwrite("workers", &GenGtConfig::workers);

  py::class_<AugmentRunConfig>(m, "AugmentRunConfig")
      .def(py::init<>())
      .def_readwrite("dataset_root", &AugmentRunConfig::dataset_root)
      .def_readwrite("split_manifest", &AugmentRunConfig::split_manifest)
      .def_readwrite("output_dir", &AugmentRunConfig::output_dir)
      .def_readwrite("intrinsics", &AugmentRunConfig::intrinsics)
      .def_readwrite("augmentation", &AugmentRunConfig::augmentation)
      .def_readwrite("samples_per_frame", &AugmentRunConfig::samples_per_frame)
      .def_readwrite("seed", &AugmentRunConfig::seed)
      .def_readwrite("workers", &AugmentRunConfig::workers);

  py::class_<LocalizeConfig>(m, "LocalizeConfig")
      .def(py::init<>())
      .def_readwrite("dataset_root", &LocalizeConfig::dataset_root)
      .def_readwrite("split_manifest", &LocalizeConfig::split_manifest)
      .def_readwrite("output_dir", &LocalizeConfig::output_dir)
      .def_readwrite("intrinsics", &LocalizeConfig::intrinsics)
      .def_readwrite("ransac", &LocalizeConfig::ransac)
      .def_readwrite("grid_w", &LocalizeConfig::grid_w)
      .def_readwrite("grid_h", &LocalizeConfig::grid_h)
      .def_readwrite("use_oracle", &LocalizeConfig::use_oracle)
      .def_readwrite("oracle", &LocalizeConfig::oracle)
      .def_readwrite("prediction_dir", &LocalizeConfig::prediction_dir)
      .def_readwrite("seed", &LocalizeConfig::seed)
      .def_readwrite("workers", &LocalizeConfig::workers);

  py::class_<EvaluateRunConfig>(m, "EvaluateRunConfig")
      .def(py::init<>())
      .def_readwrite("results_file", &EvaluateRunConfig::results_file)
      .def_readwrite("output_dir", &EvaluateRunConfig::output_dir)
      .def_readwrite("translation_edges_cm", &EvaluateRunConfig::translation_edges_cm)
      .def_readwrite("rotation_edges_deg", &EvaluateRunConfig::rotation_edges_deg)
      .def_readwrite("prediction_dir", &EvaluateRunConfig::prediction_dir)
      .def_readwrite("gt_dir", &EvaluateRunConfig::gt_dir)
      .def_readwrite("inlier_threshold_mm", &EvaluateRunConfig::inlier_threshold_mm)
      .def_readwrite("coord_edges_mm", &EvaluateRunConfig::coord_edges_mm);

  m.def("cmd_gen_gt", &cmd_gen_gt, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run the gen-gt command; returns the number of failed frames");
  m.def("cmd_augment", &cmd_augment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run the augment command; returns the number of failed frames");
  m.def("cmd_localize", &cmd_localize, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run the localize command; returns the number of failed frames");
  m.def("cmd_evaluate", &cmd_evaluate, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run the evaluate command; returns the number of failed frames");
}
