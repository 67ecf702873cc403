#pragma once

#include <screloc/augmentation.hpp>
#include <screloc/pose_solver.hpp>
#include <screloc/predictor.hpp>
#include <screloc/types.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace screloc {

/// Options of the `gen-gt` subcommand: backproject every frame of the
/// split into a ground-truth scene-coordinate map.
struct GenGtConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path split_manifest;
  std::filesystem::path output_dir;
  Intrinsics intrinsics = kSevenScenesIntrinsics;
  int workers = 1;
};

/// Options of the `augment` subcommand.
struct AugmentRunConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path split_manifest;
  std::filesystem::path output_dir;
  Intrinsics intrinsics = kSevenScenesIntrinsics;
  AugmentationConfig augmentation;
  int samples_per_frame = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Options of the `localize` subcommand. Exactly one prediction source
/// must be selected: the oracle or a directory of SCRD maps.
struct LocalizeConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path split_manifest;
  std::filesystem::path output_dir;
  Intrinsics intrinsics = kSevenScenesIntrinsics;
  RansacConfig ransac;
  int grid_w = 40;
  int grid_h = 40;
  bool use_oracle = false;
  OracleConfig oracle;  // rng_seed is derived from `seed`, not read from here
  std::optional<std::filesystem::path> prediction_dir;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Options of the `evaluate` subcommand. The coordinate-statistics block
/// runs only when both map directories are given.
struct EvaluateRunConfig {
  std::filesystem::path results_file;
  std::filesystem::path output_dir;
  std::vector<double> translation_edges_cm;  // empty -> 1..50 cm
  std::vector<double> rotation_edges_deg;    // empty -> 0.5..15 deg
  std::optional<std::filesystem::path> prediction_dir;
  std::optional<std::filesystem::path> gt_dir;
  double inlier_threshold_mm = 100.0;
  std::vector<double> coord_edges_mm;  // empty -> 10..500 mm
};

/// Each command validates its config (throwing ConfigError / IoError on
/// fatal problems), runs to completion even when individual frames fail,
/// writes its outputs plus a `manifest.json` describing the semantic
/// configuration (no timestamps, no worker counts), and returns the
/// number of frames that failed.
int cmd_gen_gt(const GenGtConfig& cfg);
int cmd_augment(const AugmentRunConfig& cfg);
int cmd_localize(const LocalizeConfig& cfg);
int cmd_evaluate(const EvaluateRunConfig& cfg);

}  // namespace screloc
