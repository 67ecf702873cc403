#include <screloc/pose_solver.hpp>

#include <screloc/geometry.hpp>
#include <screloc/rng.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "p3p.hpp"

namespace screloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// World-to-camera rigid state used by the local optimizers; converted back
// to camera-to-world only at the interface boundary.
struct W2c {
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return q * p + t; }

  static W2c from_pose(const Pose& cam_to_world) {
    const Pose inv = cam_to_world.inverse();
    return {inv.rotation(), inv.translation()};
  }

  Pose to_pose() const { return Pose(q, t).inverse(); }

  // Left-multiplicative update: the rotation delta acts on the whole
  // transform (p_cam' = exp(w) * p_cam + dt), matching the Jacobian below.
  W2c perturbed(const Eigen::Matrix<double, 6, 1>& delta) const {
    const Vec3 w = delta.head<3>();
    const double angle = w.norm();
    Eigen::Quaterniond dq = Eigen::Quaterniond::Identity();
    if (angle > 1e-16) {
      dq = Eigen::Quaterniond(Eigen::AngleAxisd(angle, w / angle));
    }
    W2c out;
    out.q = (dq * q).normalized();
    out.t = dq * t + delta.tail<3>();
    return out;
  }
};

// Total squared pixel reprojection error; +inf as soon as a point lands at
// or behind the camera, so such steps are always rejected.
double total_cost(const W2c& state, const std::vector<Correspondence>& corrs,
                  const Intrinsics& K) {
  double cost = 0.0;
  for (const Correspondence& c : corrs) {
    const Vec3 pc = state.apply(c.point);
    if (!(pc.z() > 0.0)) return kInf;
    const double inv_z = 1.0 / pc.z();
    const double du = K.cx + K.fx * pc.x() * inv_z - c.pixel.x();
    const double dv = K.cy + K.fy * pc.y() * inv_z - c.pixel.y();
    cost += du * du + dv * dv;
  }
  return cost;
}

struct NormalEquations {
  Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
  double cost = 0.0;
  bool usable = true;  // false when a point sits at or behind the camera
};

NormalEquations build_normal_equations(const W2c& state,
                                       const std::vector<Correspondence>& corrs,
                                       const Intrinsics& K) {
  NormalEquations ne;
  for (const Correspondence& c : corrs) {
    const Vec3 pc = state.apply(c.point);
    if (!(pc.z() > 0.0)) {
      ne.usable = false;
      ne.cost = kInf;
      return ne;
    }
    const double inv_z = 1.0 / pc.z();
    const double inv_z2 = inv_z * inv_z;

    Eigen::Matrix<double, 2, 3> J_proj;
    J_proj << K.fx * inv_z, 0.0, -K.fx * pc.x() * inv_z2,
              0.0, K.fy * inv_z, -K.fy * pc.y() * inv_z2;

    // d(p_cam)/dw = -[p_cam]_x for the left-multiplicative update.
    Eigen::Matrix3d neg_skew;
    neg_skew << 0.0, pc.z(), -pc.y(),
                -pc.z(), 0.0, pc.x(),
                pc.y(), -pc.x(), 0.0;

    Eigen::Matrix<double, 2, 6> J;
    J.leftCols<3>() = J_proj * neg_skew;
    J.rightCols<3>() = J_proj;

    const Vec2 r(K.cx + K.fx * pc.x() * inv_z - c.pixel.x(),
                 K.cy + K.fy * pc.y() * inv_z - c.pixel.y());

    ne.A.noalias() += J.transpose() * J;
    ne.g.noalias() += J.transpose() * r;
    ne.cost += r.squaredNorm();
  }
  return ne;
}

// Gauss-Newton with backtracking line search; monotone by construction.
// Used to polish minimal-PnP candidates on their four generating points.
W2c gauss_newton_polish(W2c state, const std::vector<Correspondence>& corrs,
                        const Intrinsics& K, int max_iters) {
  double cost = total_cost(state, corrs, K);
  if (!std::isfinite(cost)) return state;

  for (int it = 0; it < max_iters; ++it) {
    if (cost < 1e-26) break;
    const NormalEquations ne = build_normal_equations(state, corrs, K);
    if (!ne.usable || ne.g.norm() < 1e-14) break;

    Eigen::Matrix<double, 6, 6> A = ne.A;
    for (int d = 0; d < 6; ++d) {
      A(d, d) += 1e-10 * std::max(ne.A(d, d), 1e-12);  // conditioning floor
    }
    const Eigen::Matrix<double, 6, 1> delta = A.ldlt().solve(-ne.g);
    if (!delta.allFinite()) break;

    bool stepped = false;
    double step = 1.0;
    for (int half = 0; half < 9; ++half) {
      const W2c cand = state.perturbed(step * delta);
      const double cand_cost = total_cost(cand, corrs, K);
      if (cand_cost < cost) {
        const double improvement = cost - cand_cost;
        state = cand;
        cost = cand_cost;
        stepped = true;
        if (improvement < 1e-10 * cost) it = max_iters;  // plateau
        break;
      }
      step *= 0.5;
    }
    if (!stepped) break;
  }
  return state;
}

}  // namespace

void RansacConfig::validate() const {
  if (n_hypotheses < 1) throw ConfigError("ransac: n_hypotheses must be >= 1");
  if (!(inlier_threshold_px > 0.0)) {
    throw ConfigError("ransac: inlier_threshold_px must be > 0");
  }
  if (refine_inlier_cap < 4) throw ConfigError("ransac: refine_inlier_cap must be >= 4");
  if (refine_min_inliers < 4) throw ConfigError("ransac: refine_min_inliers must be >= 4");
  if (max_sampling_attempts_per_hypothesis < 1) {
    throw ConfigError("ransac: max_sampling_attempts_per_hypothesis must be >= 1");
  }
  if (refine_steps < 0) throw ConfigError("ransac: refine_steps must be >= 0");
}

MinimalPnpResult solve_pnp_minimal(const std::array<Correspondence, 4>& corrs,
                                   const Intrinsics& K) {
  MinimalPnpResult out;

  std::array<Vec3, 4> rays;
  std::array<Vec3, 4> pts;
  for (int i = 0; i < 4; ++i) {
    rays[i] = Vec3((corrs[i].pixel.x() - K.cx) / K.fx,
                   (corrs[i].pixel.y() - K.cy) / K.fy, 1.0)
                  .normalized();
    pts[i] = corrs[i].point;
  }

  // Point triples in fallback order; the held-out index disambiguates the
  // up-to-four P3P candidates.
  static constexpr std::array<std::array<int, 4>, 4> kTriples = {
      {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}}};

  const std::vector<Correspondence> all4(corrs.begin(), corrs.end());
  bool any_candidates = false;
  bool found = false;
  W2c best_state;
  double best_cost = kInf;

  for (const auto& tri : kTriples) {
    const std::vector<detail::RigidWorldToCam> cands =
        detail::solve_p3p({rays[tri[0]], rays[tri[1]], rays[tri[2]]},
                          {pts[tri[0]], pts[tri[1]], pts[tri[2]]});
    if (cands.empty()) continue;
    any_candidates = true;

    // Keep the candidate that places all four points in front of the
    // camera and reprojects the held-out point best.
    const Correspondence& probe = corrs[tri[3]];
    double best_probe_err2 = kInf;
    int best_cand = -1;
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      bool in_front = true;
      for (int j = 0; j < 4 && in_front; ++j) {
        in_front = (cands[ci].R * pts[j] + cands[ci].t).z() > 0.0;
      }
      if (!in_front) continue;
      const Vec3 pc = cands[ci].R * probe.point + cands[ci].t;
      const double inv_z = 1.0 / pc.z();
      const double du = K.cx + K.fx * pc.x() * inv_z - probe.pixel.x();
      const double dv = K.cy + K.fy * pc.y() * inv_z - probe.pixel.y();
      const double err2 = du * du + dv * dv;
      if (err2 < best_probe_err2) {
        best_probe_err2 = err2;
        best_cand = static_cast<int>(ci);
      }
    }
    if (best_cand < 0) continue;

    W2c state;
    state.q = Eigen::Quaterniond(cands[best_cand].R).normalized();
    state.t = cands[best_cand].t;
    state = gauss_newton_polish(state, all4, K, 10);
    const double cost = total_cost(state, all4, K);
    if (cost < best_cost) {
      best_cost = cost;
      best_state = state;
      found = true;
    }
    // A total squared error below 1e-12 px^2 bounds every point's error by
    // 1e-6 px; later triples cannot meaningfully improve on that.
    if (best_cost < 1e-12) break;
  }

  if (found) {
    out.pose = best_state.to_pose();
    return out;
  }
  out.degenerate = !any_candidates;
  return out;
}

HypothesisScore score_hypothesis(const Pose& pose, const CorrespondenceSet& corrs,
                                 const Intrinsics& K, double inlier_threshold_px) {
  HypothesisScore out;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    if (reprojection_error(K, pose, corrs[i].point, corrs[i].pixel) <
        inlier_threshold_px) {
      out.inlier_indices.push_back(static_cast<int>(i));
    }
  }
  out.score = static_cast<int>(out.inlier_indices.size());
  return out;
}

Pose refine_pose(const Pose& initial, const CorrespondenceSet& corrs,
                 const std::vector<int>& inlier_indices, const Intrinsics& K) {
  if (inlier_indices.size() < 4) {
    throw std::invalid_argument("refine_pose: at least 4 inliers required");
  }
  std::vector<Correspondence> pts;
  pts.reserve(inlier_indices.size());
  for (const int i : inlier_indices) {
    pts.push_back(corrs.at(static_cast<std::size_t>(i)));
  }

  W2c state = W2c::from_pose(initial);
  double cost = total_cost(state, pts, K);
  if (!std::isfinite(cost)) return initial;

  double lambda = 1e-3;
  for (int it = 0; it < 50; ++it) {
    const NormalEquations ne = build_normal_equations(state, pts, K);
    if (!ne.usable || ne.g.norm() < 1e-9) break;

    bool stepped = false;
    for (int trial = 0; trial < 12 && lambda <= 1e12; ++trial) {
      Eigen::Matrix<double, 6, 6> A = ne.A;
      for (int d = 0; d < 6; ++d) {
        A(d, d) += lambda * std::max(ne.A(d, d), 1e-12);
      }
      const Eigen::Matrix<double, 6, 1> delta = A.ldlt().solve(-ne.g);
      if (delta.allFinite()) {
        const W2c cand = state.perturbed(delta);
        const double cand_cost = total_cost(cand, pts, K);
        if (cand_cost < cost) {  // strictly monotone acceptance
          state = cand;
          cost = cand_cost;
          lambda = std::max(lambda * 0.1, 1e-12);
          stepped = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!stepped) break;  // no improving step: current state is the best iterate
    if (cost == 0.0) break;
  }
  return state.to_pose();
}

LocalizationResult ransac_localize(const CorrespondenceSet& corrs, const Intrinsics& K,
                                   const RansacConfig& cfg) {
  cfg.validate();
  if (corrs.size() < 4) {
    throw std::invalid_argument("ransac_localize: at least 4 correspondences required");
  }

  const auto n = static_cast<std::uint32_t>(corrs.size());
  const double tau = cfg.inlier_threshold_px;
  LocalizationResult result;

  // Hypothesis slots are independent; each owns an RNG stream derived from
  // (seed, slot), so a parallel fill would produce identical results.
  std::vector<Hypothesis> slots(static_cast<std::size_t>(cfg.n_hypotheses));
  for (int slot = 0; slot < cfg.n_hypotheses; ++slot) {
    Rng rng(derive_seed(cfg.rng_seed, "hypothesis", static_cast<std::uint64_t>(slot)));
    Hypothesis& hyp = slots[static_cast<std::size_t>(slot)];
    int best_sample_inliers = -1;

    while (hyp.attempts < cfg.max_sampling_attempts_per_hypothesis) {
      ++hyp.attempts;
      const std::vector<std::uint32_t> picks = rng.sample_without_replacement(n, 4);
      std::array<Correspondence, 4> sample;
      std::array<int, 4> sample_idx{};
      for (int j = 0; j < 4; ++j) {
        sample_idx[j] = static_cast<int>(picks[j]);
        sample[j] = corrs[picks[j]];
      }

      const MinimalPnpResult sol = solve_pnp_minimal(sample, K);
      if (!sol.pose) continue;

      int sample_inliers = 0;
      for (const Correspondence& c : sample) {
        if (reprojection_error(K, *sol.pose, c.point, c.pixel) < tau) {
          ++sample_inliers;
        }
      }
      if (sample_inliers == 4) {  // Algorithm 1 line 06 acceptance test
        hyp.pose = *sol.pose;
        hyp.sample_indices = sample_idx;
        hyp.valid = true;
        hyp.accepted = true;
        break;
      }
      if (sample_inliers > best_sample_inliers) {  // best-of-attempts fallback
        best_sample_inliers = sample_inliers;
        hyp.pose = *sol.pose;
        hyp.sample_indices = sample_idx;
        hyp.valid = true;
      }
    }
    if (hyp.valid && !hyp.accepted) ++result.fallback_hypotheses;
    result.total_sampling_attempts += hyp.attempts;
  }

  // Score every slot against the full set; argmax with lowest-index ties.
  int best_slot = -1;
  int best_score = -1;
  for (int slot = 0; slot < cfg.n_hypotheses; ++slot) {
    Hypothesis& hyp = slots[static_cast<std::size_t>(slot)];
    if (!hyp.valid) continue;
    ++result.hypotheses_evaluated;
    hyp.score = score_hypothesis(hyp.pose, corrs, K, tau).score;
    if (hyp.score > best_score) {
      best_score = hyp.score;
      best_slot = slot;
    }
  }

  if (best_slot < 0) {
    result.early_stop_reason = "no_hypothesis";
    return result;
  }
  result.selected_hypothesis = best_slot;
  result.selected_score = best_score;

  Pose current = slots[static_cast<std::size_t>(best_slot)].pose;
  for (int round = 0; round < cfg.refine_steps; ++round) {
    const HypothesisScore sc = score_hypothesis(current, corrs, K, tau);
    if (sc.score < cfg.refine_min_inliers) {
      result.early_stop_reason = "min_inliers";
      break;
    }
    std::vector<int> chosen;
    if (sc.score <= cfg.refine_inlier_cap) {
      chosen = sc.inlier_indices;
    } else {
      Rng rng(derive_seed(cfg.rng_seed, "refine", static_cast<std::uint64_t>(round)));
      const std::vector<std::uint32_t> picks = rng.sample_without_replacement(
          static_cast<std::uint32_t>(sc.score),
          static_cast<std::uint32_t>(cfg.refine_inlier_cap));
      chosen.reserve(picks.size());
      for (const std::uint32_t p : picks) chosen.push_back(sc.inlier_indices[p]);
    }
    current = refine_pose(current, corrs, chosen, K);
    ++result.refinement_rounds_executed;
  }

  result.localized = true;
  result.pose = current;
  result.final_inlier_count = score_hypothesis(current, corrs, K, tau).score;
  return result;
}

}  // namespace screloc
