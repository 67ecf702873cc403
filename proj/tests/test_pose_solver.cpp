#include <screloc/geometry.hpp>
#include <screloc/pose_solver.hpp>
#include <screloc/rng.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace screloc;

namespace {

const Intrinsics kK = kSevenScenesIntrinsics;

Pose random_pose(Rng& rng) {
  const Eigen::Quaterniond q(Eigen::AngleAxisd(rng.uniform(0.0, 3.1), rng.unit_vector()));
  return Pose(q, Vec3(rng.uniform(-4000, 4000), rng.uniform(-4000, 4000),
                      rng.uniform(-4000, 4000)));
}

/// Exact correspondences: random in-view pixels backprojected through the
/// camera-to-world pose at random depths.
CorrespondenceSet exact_corrs(const Pose& pose, int n, Rng& rng) {
  CorrespondenceSet corrs;
  corrs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec2 px(rng.uniform(5.0, kK.width - 5.0), rng.uniform(5.0, kK.height - 5.0));
    const double depth = rng.uniform(500.0, 6000.0);
    corrs.push_back({px, pose.apply(*backproject(kK, px, depth))});
  }
  return corrs;
}

std::array<Correspondence, 4> exact_quad(const Pose& pose, Rng& rng) {
  const CorrespondenceSet c = exact_corrs(pose, 4, rng);
  return {c[0], c[1], c[2], c[3]};
}

double max_reproj(const Pose& pose, const std::array<Correspondence, 4>& corrs) {
  double worst = 0.0;
  for (const auto& c : corrs) {
    worst = std::max(worst, reprojection_error(kK, pose, c.point, c.pixel));
  }
  return worst;
}

}  // namespace

TEST_CASE("solve_pnp_minimal recovers random exact problems below 1e-6 px") {
  Rng rng(41);
  int solved = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const Pose gt = random_pose(rng);
    const auto quad = exact_quad(gt, rng);
    const MinimalPnpResult res = solve_pnp_minimal(quad, kK);
    if (res.pose.has_value() && max_reproj(*res.pose, quad) < 1e-6) ++solved;
  }
  CHECK(solved == trials);
}

TEST_CASE("solve_pnp_minimal: identity-pose fixed point") {
  // Principal ray plus offsets, all at distinct depths (non-coplanar).
  std::array<Correspondence, 4> quad;
  const std::array<Vec3, 4> pts = {Vec3(0, 0, 2000), Vec3(400, 0, 2500),
                                   Vec3(0, 300, 1500), Vec3(-350, -250, 3000)};
  for (int i = 0; i < 4; ++i) {
    quad[static_cast<std::size_t>(i)] = {*project(kK, pts[static_cast<std::size_t>(i)]),
                                         pts[static_cast<std::size_t>(i)]};
  }
  const MinimalPnpResult res = solve_pnp_minimal(quad, kK);
  REQUIRE(res.pose.has_value());
  const PoseError err = pose_error(*res.pose, Pose());
  CHECK(err.translational_mm < 1e-6);
  CHECK(err.rotational_deg < 1e-6);
}

TEST_CASE("solve_pnp_minimal flags collinear scene points as degenerate") {
  Rng rng(42);
  const Pose gt = random_pose(rng);
  const Vec3 base = gt.apply(Vec3(0, 0, 2000));
  const Vec3 dir = gt.rotation_matrix() * Vec3(1, 0.2, 0.1).normalized();
  std::array<Correspondence, 4> quad;
  for (int i = 0; i < 4; ++i) {
    const Vec3 p = base + dir * (150.0 * i);
    const auto px = project(kK, gt.inverse().apply(p));
    REQUIRE(px.has_value());
    quad[static_cast<std::size_t>(i)] = {*px, p};
  }
  const MinimalPnpResult res = solve_pnp_minimal(quad, kK);
  CHECK(res.degenerate);
  CHECK_FALSE(res.pose.has_value());
}

TEST_CASE("solve_pnp_minimal flags coincident points as degenerate") {
  std::array<Correspondence, 4> quad;
  for (int i = 0; i < 4; ++i) quad[static_cast<std::size_t>(i)] = {Vec2(320, 240), Vec3(0, 0, 2000)};
  const MinimalPnpResult res = solve_pnp_minimal(quad, kK);
  CHECK(res.degenerate);
}

TEST_CASE("score_hypothesis: exact correspondences all count") {
  Rng rng(43);
  const Pose gt = random_pose(rng);
  const CorrespondenceSet corrs = exact_corrs(gt, 200, rng);
  const HypothesisScore s = score_hypothesis(gt, corrs, kK, 10.0);
  CHECK(s.score == 200);
  CHECK(s.inlier_indices.size() == 200);
}

TEST_CASE("score_hypothesis: error exactly tau is not an inlier") {
  const Pose pose;  // identity
  CorrespondenceSet corrs;
  corrs.push_back({Vec2(320.0 + 10.0, 240.0), Vec3(0, 0, 2000)});  // error exactly 10
  corrs.push_back({Vec2(320.0, 240.0 + 9.9999), Vec3(0, 0, 2000)});
  const HypothesisScore s = score_hypothesis(pose, corrs, kK, 10.0);
  CHECK(s.score == 1);
  REQUIRE(s.inlier_indices.size() == 1);
  CHECK(s.inlier_indices[0] == 1);
}

TEST_CASE("score_hypothesis: hand-built three-inlier set") {
  Rng rng(44);
  const Pose gt = random_pose(rng);
  CorrespondenceSet corrs = exact_corrs(gt, 5, rng);
  corrs[1].pixel += Vec2(50, 0);   // outlier
  corrs[3].pixel += Vec2(0, -40);  // outlier
  const HypothesisScore s = score_hypothesis(gt, corrs, kK, 10.0);
  CHECK(s.score == 3);
  CHECK(s.inlier_indices == std::vector<int>{0, 2, 4});
}

TEST_CASE("score_hypothesis: behind-camera points are never inliers") {
  const Pose pose;
  CorrespondenceSet corrs;
  corrs.push_back({Vec2(320, 240), Vec3(0, 0, -2000)});
  const HypothesisScore s = score_hypothesis(pose, corrs, kK, 1e12);
  CHECK(s.score == 0);
}

TEST_CASE("score_hypothesis equals the brute-force recount on noisy fixtures") {
  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const Pose gt = random_pose(rng);
    CorrespondenceSet corrs = exact_corrs(gt, 300, rng);
    for (auto& c : corrs) {
      if (rng.uniform() < 0.5) {
        c.pixel += Vec2(rng.uniform(-30, 30), rng.uniform(-30, 30));
      }
    }
    const double tau = rng.uniform(2.0, 15.0);
    const HypothesisScore s = score_hypothesis(gt, corrs, kK, tau);

    int oracle = 0;
    std::vector<int> oracle_idx;
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      if (reprojection_error(kK, gt, corrs[i].point, corrs[i].pixel) < tau) {
        ++oracle;
        oracle_idx.push_back(static_cast<int>(i));
      }
    }
    CHECK(s.score == oracle);
    CHECK(s.inlier_indices == oracle_idx);
  }
}

TEST_CASE("refine_pose: zero-residual inliers leave the pose unchanged") {
  Rng rng(46);
  const Pose gt = random_pose(rng);
  const CorrespondenceSet corrs = exact_corrs(gt, 80, rng);
  std::vector<int> idx(corrs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);

  const Pose refined = refine_pose(gt, corrs, idx, kK);
  const PoseError err = pose_error(refined, gt);
  CHECK(err.translational_mm <= 1e-9);
  CHECK(err.rotational_deg <= 1e-9);
}

TEST_CASE("refine_pose converges from a 1-degree / 20 mm perturbation") {
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const Pose gt = random_pose(rng);
    const CorrespondenceSet corrs = exact_corrs(gt, 100, rng);
    std::vector<int> idx(corrs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);

    const Eigen::Quaterniond dq(Eigen::AngleAxisd(1.0 * M_PI / 180.0, rng.unit_vector()));
    const Pose start(dq * gt.rotation(), gt.translation() + 20.0 * rng.unit_vector());

    const Pose refined = refine_pose(start, corrs, idx, kK);
    const PoseError err = pose_error(refined, gt);
    CHECK(err.translational_mm < 1e-2);
    CHECK(err.rotational_deg < 1e-4);
  }
}

TEST_CASE("refine_pose rejects fewer than four inliers") {
  Rng rng(48);
  const Pose gt = random_pose(rng);
  const CorrespondenceSet corrs = exact_corrs(gt, 10, rng);
  CHECK_THROWS_AS(refine_pose(gt, corrs, {0, 1, 2}, kK), std::invalid_argument);
}

TEST_CASE("ransac_localize: noiseless run is exact") {
  Rng rng(49);
  for (int trial = 0; trial < 3; ++trial) {
    const Pose gt = random_pose(rng);
    const CorrespondenceSet corrs = exact_corrs(gt, 1600, rng);
    RansacConfig cfg;
    cfg.rng_seed = 1000 + static_cast<std::uint64_t>(trial);

    const LocalizationResult res = ransac_localize(corrs, kK, cfg);
    REQUIRE(res.localized);
    const PoseError err = pose_error(res.pose, gt);
    CHECK(err.translational_mm < 0.1);
    CHECK(err.rotational_deg < 0.001);
    CHECK(res.final_inlier_count == 1600);
    CHECK(res.hypotheses_evaluated == 256);

    double worst = 0.0;
    for (const auto& c : corrs) {
      worst = std::max(worst, reprojection_error(kK, res.pose, c.point, c.pixel));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("ransac_localize is deterministic in (corrs, cfg, seed)") {
  Rng rng(50);
  const Pose gt = random_pose(rng);
  CorrespondenceSet corrs = exact_corrs(gt, 400, rng);
  for (auto& c : corrs) {
    if (rng.uniform() < 0.3) c.point += 500.0 * rng.unit_vector();
  }
  RansacConfig cfg;
  cfg.n_hypotheses = 64;
  cfg.rng_seed = 7;

  const LocalizationResult a = ransac_localize(corrs, kK, cfg);
  const LocalizationResult b = ransac_localize(corrs, kK, cfg);
  REQUIRE(a.localized == b.localized);
  CHECK((a.pose.rotation().coeffs() - b.pose.rotation().coeffs()).norm() == 0.0);
  CHECK((a.pose.translation() - b.pose.translation()).norm() == 0.0);
  CHECK(a.final_inlier_count == b.final_inlier_count);
  CHECK(a.selected_hypothesis == b.selected_hypothesis);
  CHECK(a.selected_score == b.selected_score);
  CHECK(a.total_sampling_attempts == b.total_sampling_attempts);
  CHECK(a.early_stop_reason == b.early_stop_reason);
}

TEST_CASE("ransac_localize: 50% box outliers, 2 mm noise, 100 seeded trials") {
  Rng rng(51);
  int good = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const Pose gt = random_pose(rng);
    CorrespondenceSet corrs = exact_corrs(gt, 1600, rng);
    const Vec3 lo = gt.center() - Vec3(6000, 6000, 6000);
    const Vec3 hi = gt.center() + Vec3(6000, 6000, 6000);
    for (auto& c : corrs) {
      if (rng.uniform() < 0.5) {
        c.point = Vec3(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
                       rng.uniform(lo.z(), hi.z()));
      } else {
        c.point += Vec3(2.0 * rng.gaussian(), 2.0 * rng.gaussian(), 2.0 * rng.gaussian());
      }
    }
    RansacConfig cfg;
    cfg.rng_seed = derive_seed(99, "mc-trial", static_cast<std::uint64_t>(t));
    const LocalizationResult res = ransac_localize(corrs, kK, cfg);
    if (!res.localized) continue;
    const PoseError err = pose_error(res.pose, gt);
    if (err.translational_mm < 50.0 && err.rotational_deg < 5.0) ++good;
  }
  CHECK(good >= 99);
}

TEST_CASE("ransac_localize: identical scene points give a diagnosed no-pose result") {
  CorrespondenceSet corrs;
  for (int i = 0; i < 50; ++i) {
    corrs.push_back({Vec2(10.0 + i, 20.0), Vec3(500, 600, 2000)});
  }
  RansacConfig cfg;
  cfg.n_hypotheses = 8;
  cfg.max_sampling_attempts_per_hypothesis = 20;
  const LocalizationResult res = ransac_localize(corrs, kK, cfg);
  CHECK_FALSE(res.localized);
  CHECK(res.early_stop_reason == "no_hypothesis");
  CHECK(res.total_sampling_attempts == 8 * 20);
}

TEST_CASE("ransac_localize rejects fewer than four correspondences") {
  CorrespondenceSet corrs;
  corrs.push_back({Vec2(1, 1), Vec3(0, 0, 1000)});
  corrs.push_back({Vec2(2, 1), Vec3(10, 0, 1000)});
  corrs.push_back({Vec2(3, 1), Vec3(20, 0, 1000)});
  CHECK_THROWS_AS(ransac_localize(corrs, kK, RansacConfig{}), std::invalid_argument);
}

TEST_CASE("RansacConfig::validate enforces the documented invariants") {
  RansacConfig cfg;
  cfg.n_hypotheses = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RansacConfig{};
  cfg.inlier_threshold_px = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RansacConfig{};
  cfg.refine_inlier_cap = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RansacConfig{};
  cfg.refine_min_inliers = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RansacConfig{};
  CHECK_NOTHROW(cfg.validate());
}
