#include <screloc/commands.hpp>
#include <screloc/types.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

void add_intrinsics_flags(CLI::App* cmd, screloc::Intrinsics& K) {
  cmd->add_option("--fx", K.fx, "Focal length x (px)")->capture_default_str();
  cmd->add_option("--fy", K.fy, "Focal length y (px)")->capture_default_str();
  cmd->add_option("--cx", K.cx, "Principal point x (px)")->capture_default_str();
  cmd->add_option("--cy", K.cy, "Principal point y (px)")->capture_default_str();
  cmd->add_option("--width", K.width, "Image width (px)")->capture_default_str();
  cmd->add_option("--height", K.height, "Image height (px)")->capture_default_str();
}

void add_dataset_flags(CLI::App* cmd, std::filesystem::path& root,
                       std::filesystem::path& split, std::filesystem::path& out) {
  cmd->add_option("--dataset-root", root, "Scene directory holding the sequence folders")
      ->required();
  cmd->add_option("--split", split, "Split manifest: one sequence name per line")
      ->required();
  cmd->add_option("--out", out, "Output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"screloc — scene-coordinate camera relocalization toolkit"};
  app.set_version_flag("--version", "screloc 0.1.0");
  app.set_config("--config", "", "Read options from a key=value config file "
                                 "(command-line flags take precedence)");
  app.require_subcommand(1);

  // ---- gen-gt ------------------------------------------------------------
  screloc::GenGtConfig gen_cfg;
  CLI::App* gen = app.add_subcommand(
      "gen-gt", "Backproject depth maps into ground-truth scene-coordinate maps");
  add_dataset_flags(gen, gen_cfg.dataset_root, gen_cfg.split_manifest, gen_cfg.output_dir);
  add_intrinsics_flags(gen, gen_cfg.intrinsics);
  gen->add_option("--workers", gen_cfg.workers, "Worker threads")->capture_default_str();

  // ---- augment -----------------------------------------------------------
  screloc::AugmentRunConfig aug_cfg;
  double scale_min = aug_cfg.augmentation.scale_range.first;
  double scale_max = aug_cfg.augmentation.scale_range.second;
  CLI::App* aug = app.add_subcommand(
      "augment", "Emit augmented training samples with provenance records");
  add_dataset_flags(aug, aug_cfg.dataset_root, aug_cfg.split_manifest, aug_cfg.output_dir);
  add_intrinsics_flags(aug, aug_cfg.intrinsics);
  aug->add_option("--samples-per-frame", aug_cfg.samples_per_frame,
                  "Augmented samples per source frame")
      ->capture_default_str();
  aug->add_option("--p-2d", aug_cfg.augmentation.p_2d, "2D-affine branch probability")
      ->capture_default_str();
  aug->add_option("--p-3d", aug_cfg.augmentation.p_3d, "3D-reprojection branch probability")
      ->capture_default_str();
  aug->add_option("--p-identity", aug_cfg.augmentation.p_identity,
                  "Identity branch probability")
      ->capture_default_str();
  aug->add_option("--trans-2d-frac", aug_cfg.augmentation.trans_2d_frac,
                  "2D translation range as a fraction of image size")
      ->capture_default_str();
  aug->add_option("--rot-2d-deg", aug_cfg.augmentation.rot_2d_deg,
                  "2D in-plane rotation range (± degrees)")
      ->capture_default_str();
  aug->add_option("--scale-min", scale_min, "2D scale range lower bound")
      ->capture_default_str();
  aug->add_option("--scale-max", scale_max, "2D scale range upper bound")
      ->capture_default_str();
  aug->add_option("--rot-3d-deg-max", aug_cfg.augmentation.rot_3d_deg_max,
                  "3D rotation magnitude upper bound (degrees)")
      ->capture_default_str();
  aug->add_option("--trans-3d-mm-max", aug_cfg.augmentation.trans_3d_mm_max,
                  "3D translation magnitude upper bound (mm)")
      ->capture_default_str();
  aug->add_option("--seed", aug_cfg.seed, "Global RNG seed")->capture_default_str();
  aug->add_option("--workers", aug_cfg.workers, "Worker threads")->capture_default_str();

  // ---- localize ----------------------------------------------------------
  screloc::LocalizeConfig loc_cfg;
  std::string loc_pred_dir;
  std::vector<double> box_min{-10000.0, -10000.0, -10000.0};
  std::vector<double> box_max{10000.0, 10000.0, 10000.0};
  CLI::App* loc = app.add_subcommand(
      "localize", "Estimate a camera pose for every frame of the split");
  add_dataset_flags(loc, loc_cfg.dataset_root, loc_cfg.split_manifest, loc_cfg.output_dir);
  add_intrinsics_flags(loc, loc_cfg.intrinsics);
  loc->add_option("--grid-w", loc_cfg.grid_w, "Correspondence grid width")
      ->capture_default_str();
  loc->add_option("--grid-h", loc_cfg.grid_h, "Correspondence grid height")
      ->capture_default_str();
  loc->add_option("--hypotheses", loc_cfg.ransac.n_hypotheses,
                  "RANSAC pose hypotheses (K)")
      ->capture_default_str();
  loc->add_option("--inlier-threshold-px", loc_cfg.ransac.inlier_threshold_px,
                  "Reprojection inlier threshold τ (px)")
      ->capture_default_str();
  loc->add_option("--refine-steps", loc_cfg.ransac.refine_steps,
                  "Refinement rounds (R)")
      ->capture_default_str();
  loc->add_option("--refine-inlier-cap", loc_cfg.ransac.refine_inlier_cap,
                  "Inliers sampled per refinement round (P)")
      ->capture_default_str();
  loc->add_option("--refine-min-inliers", loc_cfg.ransac.refine_min_inliers,
                  "Minimum inliers to keep refining (Q)")
      ->capture_default_str();
  loc->add_option("--max-attempts", loc_cfg.ransac.max_sampling_attempts_per_hypothesis,
                  "Sampling attempts per hypothesis before fallback")
      ->capture_default_str();
  loc->add_flag("--oracle", loc_cfg.use_oracle,
                "Use the noise-injected oracle prediction source");
  loc->add_option("--oracle-sigma-mm", loc_cfg.oracle.noise_sigma_mm,
                  "Oracle Gaussian noise σ (mm)")
      ->capture_default_str();
  loc->add_option("--oracle-outlier-fraction", loc_cfg.oracle.outlier_fraction,
                  "Oracle outlier probability")
      ->capture_default_str();
  loc->add_option("--oracle-box-min", box_min,
                  "Oracle outlier box minimum corner, mm (x y z)")
      ->expected(3);
  loc->add_option("--oracle-box-max", box_max,
                  "Oracle outlier box maximum corner, mm (x y z)")
      ->expected(3);
  loc->add_option("--pred-dir", loc_pred_dir,
                  "Directory of predicted scene-coordinate maps (SCRD)");
  loc->add_option("--seed", loc_cfg.seed, "Global RNG seed")->capture_default_str();
  loc->add_option("--workers", loc_cfg.workers, "Worker threads")->capture_default_str();

  // ---- evaluate ----------------------------------------------------------
  screloc::EvaluateRunConfig eval_cfg;
  std::string eval_pred_dir;
  std::string eval_gt_dir;
  CLI::App* eval = app.add_subcommand(
      "evaluate", "Compute accuracy metrics and histograms from a results file");
  eval->add_option("--results", eval_cfg.results_file, "Results file from `localize`")
      ->required();
  eval->add_option("--out", eval_cfg.output_dir, "Output directory")->required();
  eval->add_option("--translation-edges-cm", eval_cfg.translation_edges_cm,
                   "Histogram edges for translational error (cm)");
  eval->add_option("--rotation-edges-deg", eval_cfg.rotation_edges_deg,
                   "Histogram edges for rotational error (deg)");
  eval->add_option("--pred-dir", eval_pred_dir,
                   "Predicted scene-coordinate maps for inlier statistics");
  eval->add_option("--gt-dir", eval_gt_dir,
                   "Ground-truth scene-coordinate maps for inlier statistics");
  eval->add_option("--inlier-threshold-mm", eval_cfg.inlier_threshold_mm,
                   "Scene-coordinate inlier threshold (mm)")
      ->capture_default_str();
  eval->add_option("--coord-edges-mm", eval_cfg.coord_edges_mm,
                   "Histogram edges for scene-coordinate error (mm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "ERROR: " << e.what() << "\n";
    return e.get_exit_code();
  }

  try {
    int failures = 0;
    if (gen->parsed()) {
      failures = screloc::cmd_gen_gt(gen_cfg);
    } else if (aug->parsed()) {
      aug_cfg.augmentation.scale_range = {scale_min, scale_max};
      failures = screloc::cmd_augment(aug_cfg);
    } else if (loc->parsed()) {
      if (!loc_pred_dir.empty()) loc_cfg.prediction_dir = loc_pred_dir;
      loc_cfg.oracle.outlier_bounds.min = screloc::Vec3(box_min[0], box_min[1], box_min[2]);
      loc_cfg.oracle.outlier_bounds.max = screloc::Vec3(box_max[0], box_max[1], box_max[2]);
      failures = screloc::cmd_localize(loc_cfg);
    } else if (eval->parsed()) {
      if (!eval_pred_dir.empty()) eval_cfg.prediction_dir = eval_pred_dir;
      if (!eval_gt_dir.empty()) eval_cfg.gt_dir = eval_gt_dir;
      failures = screloc::cmd_evaluate(eval_cfg);
    }
    if (failures > 0) {
      std::cerr << "completed with " << failures << " frame failure(s)\n";
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "ERROR: " << ex.what() << "\n";
    return 1;
  }
}
