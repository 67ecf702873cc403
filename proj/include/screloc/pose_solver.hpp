#pragma once

#include <screloc/types.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace screloc {

/// Tunables of the hypothesize-and-verify pose optimizer. The defaults are
/// the operating point used throughout: 256 hypotheses, a 10 px inlier
/// threshold, 8 refinement rounds drawing at most 100 inliers each, and an
/// early stop once fewer than 50 inliers support the pose.
struct RansacConfig {
  int n_correspondences = 1600;  ///< nominal grid size N (informational)
  int n_hypotheses = 256;        ///< K
  double inlier_threshold_px = 10.0;  ///< tau
  int refine_steps = 8;               ///< R
  int refine_inlier_cap = 100;        ///< P
  int refine_min_inliers = 50;        ///< Q
  std::uint64_t max_sampling_attempts_per_hypothesis = 10000;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError when K < 1, tau <= 0, P < 4 or Q < 4.
  void validate() const;
};

/// One RANSAC slot: the pose hypothesis, its inlier score against the full
/// correspondence set, and how it was produced.
struct Hypothesis {
  Pose pose;
  int score = 0;
  std::array<int, 4> sample_indices = {-1, -1, -1, -1};
  bool valid = false;     ///< the slot holds a pose at all
  bool accepted = false;  ///< passed the all-four-inliers acceptance test
  std::uint64_t attempts = 0;  ///< sampling attempts consumed by the slot
};

/// Final output of ransac_localize, with enough diagnostics to explain a
/// failure (how many slots produced poses, why refinement stopped, ...).
struct LocalizationResult {
  bool localized = false;
  Pose pose;  ///< camera-to-world; meaningful only when localized
  int final_inlier_count = 0;
  int hypotheses_evaluated = 0;      ///< slots that produced a pose
  int refinement_rounds_executed = 0;
  int selected_hypothesis = -1;      ///< argmax slot index
  int selected_score = 0;            ///< inlier count of the argmax slot
  int fallback_hypotheses = 0;       ///< slots filled by best-of-attempts
  std::uint64_t total_sampling_attempts = 0;
  std::string early_stop_reason;  ///< "", "min_inliers" or "no_hypothesis"
};

/// Outcome of the minimal solver. `pose` is empty on failure; `degenerate`
/// distinguishes unusable geometry (collinear or coincident scene points,
/// parallel rays) from the rarer case where candidates existed but none
/// placed all four points in front of the camera.
struct MinimalPnpResult {
  std::optional<Pose> pose;  ///< camera-to-world
  bool degenerate = false;
};

/// Minimal four-point pose: P3P on three points, candidate disambiguation
/// by the fourth point's reprojection error (candidates that put any point
/// behind the camera are discarded), then at most 10 Gauss-Newton steps on
/// all four reprojections. If the leading point triple is degenerate or
/// yields a poor fit, the remaining triples are tried and the best result
/// is returned.
MinimalPnpResult solve_pnp_minimal(const std::array<Correspondence, 4>& corrs,
                                   const Intrinsics& K);

/// Inlier count of a pose plus the indices that support it. A
/// correspondence is an inlier iff its reprojection error is strictly less
/// than the threshold; behind-camera points never count (+inf error).
struct HypothesisScore {
  int score = 0;
  std::vector<int> inlier_indices;
};

HypothesisScore score_hypothesis(const Pose& pose, const CorrespondenceSet& corrs,
                                 const Intrinsics& K, double inlier_threshold_px);

/// Levenberg-Marquardt refinement of `initial` over the referenced
/// correspondences: total squared reprojection error is monotonically
/// non-increasing, at most 50 iterations, stop when the gradient norm
/// drops below 1e-9. Non-convergence returns the best iterate; fewer than
/// four inliers throws std::invalid_argument.
Pose refine_pose(const Pose& initial, const CorrespondenceSet& corrs,
                 const std::vector<int>& inlier_indices, const Intrinsics& K);

/// The full hypothesize-and-verify optimizer: K slots are filled by
/// sampling four correspondences and solving minimal PnP, a hypothesis is
/// accepted only when all four of its generating correspondences are
/// inliers of it (bounded resampling with a best-of-attempts fallback),
/// the argmax-scoring slot is selected (ties break to the lowest index),
/// and the winner runs through R refinement rounds (re-score against all
/// correspondences, stop below Q inliers, refine on at most P sampled
/// inliers). Throws std::invalid_argument for fewer than 4 correspondences
/// and ConfigError for invalid settings; returns localized = false with
/// diagnostics when no slot could produce a pose.
LocalizationResult ransac_localize(const CorrespondenceSet& corrs, const Intrinsics& K,
                                   const RansacConfig& cfg);

}  // namespace screloc
