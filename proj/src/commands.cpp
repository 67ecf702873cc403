#include <screloc/commands.hpp>

#include <screloc/dataset_io.hpp>
#include <screloc/evaluation.hpp>
#include <screloc/geometry.hpp>
#include <screloc/rng.hpp>
#include <screloc/scene_map.hpp>
#include <screloc/scrd.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace screloc {
namespace {

using nlohmann::json;

/// Runs fn(0..n-1) on `workers` threads pulling work from an atomic
/// counter. fn must be exception-free (callers wrap their bodies) and
/// must not touch shared mutable state except its own output slot.
void parallel_frames(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min(workers, n);
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

/// One per-frame failure, reported on stderr and in the manifest.
struct FrameFailure {
  std::string frame;
  std::string message;
};

json intrinsics_json(const Intrinsics& K) {
  return json{{"fx", K.fx},         {"fy", K.fy},     {"cx", K.cx},
              {"cy", K.cy},         {"width", K.width}, {"height", K.height}};
}

json pose_json(const Pose& pose) {
  const Eigen::Quaterniond& q = pose.rotation();
  const Vec3& t = pose.translation();
  return json{{"q", {q.w(), q.x(), q.y(), q.z()}},
              {"t_mm", {t.x(), t.y(), t.z()}}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("short write: " + path.string());
}

/// Serialized newline-delimited records: header line first, then one line
/// per entry (empty slots skipped), each a complete JSON object.
void write_ndjson(const std::filesystem::path& path, const std::string& header,
                  const std::vector<std::string>& lines) {
  std::string text = header;
  text.push_back('\n');
  for (const auto& line : lines) {
    if (line.empty()) continue;
    text += line;
    text.push_back('\n');
  }
  write_text_file(path, text);
}

void write_manifest(const std::filesystem::path& output_dir, json manifest,
                    const std::vector<FrameFailure>& failures) {
  json flist = json::array();
  for (const auto& f : failures) {
    flist.push_back(json{{"frame", f.frame}, {"message", f.message}});
  }
  manifest["failures"] = std::move(flist);
  write_text_file(output_dir / "manifest.json", manifest.dump(2) + "\n");
}

void report_failures(const char* command, const std::vector<FrameFailure>& failures) {
  for (const auto& f : failures) {
    std::cerr << command << ": frame " << f.frame << " failed: " << f.message << "\n";
  }
}

/// Collects non-empty failure slots in frame order.
std::vector<FrameFailure> gather_failures(const std::vector<FrameFailure>& slots) {
  std::vector<FrameFailure> out;
  for (const auto& f : slots) {
    if (!f.message.empty()) out.push_back(f);
  }
  return out;
}

void ensure_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

/// Pre-creates one subdirectory per sequence so parallel workers never
/// race on directory creation.
void ensure_sequence_dirs(const std::filesystem::path& dir, const SceneDataset& ds) {
  std::set<std::string> sequences;
  for (const auto& f : ds.frames) sequences.insert(f.id.sequence);
  for (const auto& seq : sequences) ensure_output_dir(dir / seq);
}

void surface_scan_warnings(const SceneDataset& ds) {
  for (const auto& w : ds.warnings) {
    std::cerr << "scan: " << w.subject << ": " << w.message << "\n";
  }
}

json ransac_json(const RansacConfig& cfg) {
  return json{{"n_correspondences", cfg.n_correspondences},
              {"n_hypotheses", cfg.n_hypotheses},
              {"inlier_threshold_px", cfg.inlier_threshold_px},
              {"refine_steps", cfg.refine_steps},
              {"refine_inlier_cap", cfg.refine_inlier_cap},
              {"refine_min_inliers", cfg.refine_min_inliers},
              {"max_sampling_attempts_per_hypothesis",
               cfg.max_sampling_attempts_per_hypothesis}};
}

json augmentation_json(const AugmentationConfig& cfg) {
  return json{{"p_2d", cfg.p_2d},
              {"p_3d", cfg.p_3d},
              {"p_identity", cfg.p_identity},
              {"trans_2d_frac", cfg.trans_2d_frac},
              {"rot_2d_deg", cfg.rot_2d_deg},
              {"scale_range", {cfg.scale_range.first, cfg.scale_range.second}},
              {"rot_3d_deg_max", cfg.rot_3d_deg_max},
              {"trans_3d_mm_max", cfg.trans_3d_mm_max}};
}

std::vector<double> linear_edges(double step, int count) {
  std::vector<double> edges(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) edges[static_cast<std::size_t>(i)] = step * (i + 1);
  return edges;
}

std::string frame_stem(const FrameId& id, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "frame-%06d%s", id.index, suffix);
  return id.sequence + "/" + buf;
}

}  // namespace

int cmd_gen_gt(const GenGtConfig& cfg) {
  if (!cfg.intrinsics.valid()) throw ConfigError("gen-gt: invalid intrinsics");
  const SceneDataset ds = scan_dataset(cfg.dataset_root, cfg.split_manifest, cfg.intrinsics);
  surface_scan_warnings(ds);
  ensure_output_dir(cfg.output_dir);
  ensure_sequence_dirs(cfg.output_dir, ds);

  const int n = static_cast<int>(ds.frames.size());
  std::vector<FrameFailure> slots(static_cast<std::size_t>(n));
  parallel_frames(n, cfg.workers, [&](int i) {
    const FrameFiles& files = ds.frames[static_cast<std::size_t>(i)];
    try {
      const DepthImage depth = load_depth_png(files.depth);
      const Pose pose = load_pose_file(files.pose);
      const auto [coords, mask] = scene_coords_from_depth(depth, pose, cfg.intrinsics);
      write_scrd(cfg.output_dir / frame_stem(files.id, ".scrd"), coords, &mask);
    } catch (const std::exception& ex) {
      slots[static_cast<std::size_t>(i)] = {files.id.str(), ex.what()};
    }
  });

  const auto failures = gather_failures(slots);
  report_failures("gen-gt", failures);
  write_manifest(cfg.output_dir,
                 json{{"schema", "screloc-manifest/1"},
                      {"command", "gen-gt"},
                      {"dataset_root", cfg.dataset_root.string()},
                      {"split_manifest", cfg.split_manifest.string()},
                      {"intrinsics", intrinsics_json(cfg.intrinsics)},
                      {"frames", n}},
                 failures);
  return static_cast<int>(failures.size());
}

int cmd_augment(const AugmentRunConfig& cfg) {
  if (!cfg.intrinsics.valid()) throw ConfigError("augment: invalid intrinsics");
  if (cfg.samples_per_frame < 1) {
    throw ConfigError("augment: samples_per_frame must be >= 1");
  }
  cfg.augmentation.validate();
  const SceneDataset ds = scan_dataset(cfg.dataset_root, cfg.split_manifest, cfg.intrinsics);
  surface_scan_warnings(ds);
  ensure_output_dir(cfg.output_dir);
  ensure_sequence_dirs(cfg.output_dir, ds);

  const int n = static_cast<int>(ds.frames.size());
  std::vector<FrameFailure> slots(static_cast<std::size_t>(n));
  std::vector<std::string> records(static_cast<std::size_t>(n));
  parallel_frames(n, cfg.workers, [&](int i) {
    const FrameFiles& files = ds.frames[static_cast<std::size_t>(i)];
    try {
      const FrameRecord frame = load_frame(files, cfg.intrinsics);
      const auto [coords, mask] =
          scene_coords_from_depth(frame.depth, frame.pose, cfg.intrinsics);
      const std::uint64_t frame_seed =
          derive_seed(cfg.seed, "augment", fnv1a64(files.id.str()));
      std::string lines;
      for (int k = 0; k < cfg.samples_per_frame; ++k) {
        const std::uint64_t sample_seed =
            derive_seed(frame_seed, "sample", static_cast<std::uint64_t>(k));
        Rng rng(sample_seed);
        const AugmentedSample sample =
            augment(frame.rgb, coords, mask, cfg.intrinsics, frame.pose,
                    cfg.augmentation, rng);

        char tag[32];
        std::snprintf(tag, sizeof(tag), ".aug%03d", k);
        const std::string color_rel = frame_stem(files.id, (std::string(tag) + ".color.png").c_str());
        const std::string map_rel = frame_stem(files.id, (std::string(tag) + ".scrd").c_str());
        write_rgb_png(cfg.output_dir / color_rel, sample.rgb);
        write_scrd(cfg.output_dir / map_rel, sample.coords, &sample.mask);

        json params;
        const char* branch = "identity";
        if (sample.branch == AugmentationBranch::kAffine2d) {
          branch = "2d";
          params = json{{"translate_x_px", sample.affine.translate_x_px},
                        {"translate_y_px", sample.affine.translate_y_px},
                        {"rotation_deg", sample.affine.rotation_deg},
                        {"scale", sample.affine.scale},
                        {"pad_rgb",
                         {sample.affine.pad_rgb[0], sample.affine.pad_rgb[1],
                          sample.affine.pad_rgb[2]}}};
        } else if (sample.branch == AugmentationBranch::kReprojection3d) {
          branch = "3d";
          params = json{{"perturbation", pose_json(sample.reproj.perturbation)},
                        {"pad_seed", sample.reproj.pad_seed}};
        } else {
          params = json::object();
        }
        const json rec{{"frame", files.id.str()},
                       {"sample", k},
                       {"seed", sample_seed},
                       {"branch", branch},
                       {"color", color_rel},
                       {"map", map_rel},
                       {"pose", pose_json(sample.pose)},
                       {"intrinsics", intrinsics_json(sample.intrinsics)},
                       {"params", params}};
        lines += rec.dump();
        lines.push_back('\n');
      }
      if (!lines.empty()) lines.pop_back();  // write_ndjson appends the final newline
      records[static_cast<std::size_t>(i)] = std::move(lines);
    } catch (const std::exception& ex) {
      slots[static_cast<std::size_t>(i)] = {files.id.str(), ex.what()};
    }
  });

  const auto failures = gather_failures(slots);
  report_failures("augment", failures);
  write_ndjson(cfg.output_dir / "samples.jsonl",
               json{{"schema", "screloc-augment/1"}}.dump(), records);
  write_manifest(cfg.output_dir,
                 json{{"schema", "screloc-manifest/1"},
                      {"command", "augment"},
                      {"dataset_root", cfg.dataset_root.string()},
                      {"split_manifest", cfg.split_manifest.string()},
                      {"intrinsics", intrinsics_json(cfg.intrinsics)},
                      {"augmentation", augmentation_json(cfg.augmentation)},
                      {"samples_per_frame", cfg.samples_per_frame},
                      {"seed", cfg.seed},
                      {"frames", n}},
                 failures);
  return static_cast<int>(failures.size());
}

int cmd_localize(const LocalizeConfig& cfg) {
  if (!cfg.intrinsics.valid()) throw ConfigError("localize: invalid intrinsics");
  if (cfg.use_oracle == cfg.prediction_dir.has_value()) {
    throw ConfigError(
        "localize: exactly one prediction source required (oracle or prediction dir)");
  }
  if (cfg.grid_w < 1 || cfg.grid_h < 1) throw ConfigError("localize: grid must be >= 1x1");
  RansacConfig rcfg = cfg.ransac;
  rcfg.n_correspondences = cfg.grid_w * cfg.grid_h;
  rcfg.validate();
  if (cfg.use_oracle) cfg.oracle.validate();

  const SceneDataset ds = scan_dataset(cfg.dataset_root, cfg.split_manifest, cfg.intrinsics);
  surface_scan_warnings(ds);
  ensure_output_dir(cfg.output_dir);

  std::unordered_map<std::string, FrameFiles> by_id;
  for (const auto& f : ds.frames) by_id.emplace(f.id.str(), f);

  std::unique_ptr<PredictionSource> source;
  if (cfg.use_oracle) {
    OracleConfig oracle = cfg.oracle;
    oracle.rng_seed = derive_seed(cfg.seed, "oracle-root");
    const Intrinsics K = cfg.intrinsics;
    GroundTruthProvider provider =
        [&by_id, K](const std::string& frame_id)
        -> std::pair<SceneCoordinateImage, ValidityMask> {
      const auto it = by_id.find(frame_id);
      if (it == by_id.end()) throw IoError("unknown frame id: " + frame_id);
      const DepthImage depth = load_depth_png(it->second.depth);
      const Pose pose = load_pose_file(it->second.pose);
      return scene_coords_from_depth(depth, pose, K);
    };
    source = std::make_unique<OracleSource>(oracle, std::move(provider));
  } else {
    source = std::make_unique<MapDirectorySource>(*cfg.prediction_dir);
  }

  const int n = static_cast<int>(ds.frames.size());
  std::vector<FrameFailure> slots(static_cast<std::size_t>(n));
  std::vector<std::string> records(static_cast<std::size_t>(n));
  const RgbImage no_rgb;  // sources used here derive resolution themselves
  parallel_frames(n, cfg.workers, [&](int i) {
    const FrameFiles& files = ds.frames[static_cast<std::size_t>(i)];
    const std::string id = files.id.str();
    try {
      const Pose gt_pose = load_pose_file(files.pose);
      const auto [pred, mask] = source->predict(id, no_rgb);
      const CorrespondenceSet corrs = sample_grid(pred, mask, cfg.grid_w, cfg.grid_h);

      RansacConfig frame_cfg = rcfg;
      frame_cfg.rng_seed = derive_seed(cfg.seed, "ransac", fnv1a64(id));
      const LocalizationResult result = ransac_localize(corrs, cfg.intrinsics, frame_cfg);

      json rec{{"frame", id},
               {"scene", ds.scene},
               {"localized", result.localized},
               {"hypotheses", result.hypotheses_evaluated},
               {"early_stop", result.early_stop_reason}};
      if (result.localized) {
        const PoseError err = pose_error(result.pose, gt_pose);
        rec["err_t_mm"] = err.translational_mm;
        rec["err_r_deg"] = err.rotational_deg;
        rec["inliers"] = result.final_inlier_count;
        rec["score"] = result.selected_score;
        rec["refinement_rounds"] = result.refinement_rounds_executed;
        rec["pose"] = pose_json(result.pose);
      }
      records[static_cast<std::size_t>(i)] = rec.dump();
    } catch (const std::exception& ex) {
      slots[static_cast<std::size_t>(i)] = {id, ex.what()};
      records[static_cast<std::size_t>(i)] =
          json{{"frame", id},
               {"scene", ds.scene},
               {"localized", false},
               {"failure", ex.what()}}
              .dump();
    }
  });

  const auto failures = gather_failures(slots);
  report_failures("localize", failures);
  write_ndjson(cfg.output_dir / "results.jsonl",
               json{{"schema", "screloc-results/1"}}.dump(), records);

  json source_json;
  if (cfg.use_oracle) {
    source_json = json{{"type", "oracle"},
                       {"noise_sigma_mm", cfg.oracle.noise_sigma_mm},
                       {"outlier_fraction", cfg.oracle.outlier_fraction},
                       {"outlier_bounds",
                        {{"min",
                          {cfg.oracle.outlier_bounds.min.x(), cfg.oracle.outlier_bounds.min.y(),
                           cfg.oracle.outlier_bounds.min.z()}},
                         {"max",
                          {cfg.oracle.outlier_bounds.max.x(), cfg.oracle.outlier_bounds.max.y(),
                           cfg.oracle.outlier_bounds.max.z()}}}}};
  } else {
    source_json = json{{"type", "maps"}, {"dir", cfg.prediction_dir->string()}};
  }
  write_manifest(cfg.output_dir,
                 json{{"schema", "screloc-manifest/1"},
                      {"command", "localize"},
                      {"dataset_root", cfg.dataset_root.string()},
                      {"split_manifest", cfg.split_manifest.string()},
                      {"intrinsics", intrinsics_json(cfg.intrinsics)},
                      {"grid", {{"w", cfg.grid_w}, {"h", cfg.grid_h}}},
                      {"ransac", ransac_json(rcfg)},
                      {"source", source_json},
                      {"seed", cfg.seed},
                      {"frames", n}},
                 failures);
  return static_cast<int>(failures.size());
}

namespace {

std::vector<FrameResult> read_results_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open results file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty results file: " + path.string());
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& ex) {
    throw FormatError("results header is not JSON: " + std::string(ex.what()));
  }
  if (header.value("schema", "") != "screloc-results/1") {
    throw FormatError("unsupported results schema in " + path.string());
  }

  std::vector<FrameResult> results;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      throw FormatError("results line " + std::to_string(line_no) +
                        " is not JSON: " + std::string(ex.what()));
    }
    FrameResult r;
    r.frame = j.at("frame").get<std::string>();
    r.scene = j.value("scene", "");
    r.localized = j.at("localized").get<bool>();
    if (r.localized) {
      r.error.translational_mm = j.at("err_t_mm").get<double>();
      r.error.rotational_deg = j.at("err_r_deg").get<double>();
      r.final_inlier_count = j.value("inliers", 0);
    }
    r.hypotheses_evaluated = j.value("hypotheses", 0);
    r.early_stop_reason = j.value("early_stop", "");
    results.push_back(std::move(r));
  }
  if (results.empty()) throw FormatError("results file lists no frames: " + path.string());
  return results;
}

/// Pooled scene-coordinate statistics: exact counts reconstructed from
/// the per-frame fractions (counts are integers, so the rounding is
/// lossless).
struct CoordPool {
  std::size_t pixels = 0;
  std::size_t inliers = 0;
  double inlier_error_sum_mm = 0.0;
  std::vector<std::size_t> cum_counts;  // per histogram edge

  void add(const InlierStats& s) {
    pixels += s.pixel_count;
    inliers += s.inlier_count;
    inlier_error_sum_mm += s.mean_inlier_error_mm * static_cast<double>(s.inlier_count);
    if (cum_counts.empty()) cum_counts.assign(s.error_histogram.edges.size(), 0);
    for (std::size_t k = 0; k < s.error_histogram.cumulative.size(); ++k) {
      cum_counts[k] += static_cast<std::size_t>(std::llround(
          s.error_histogram.cumulative[k] * static_cast<double>(s.pixel_count)));
    }
  }

  double fraction() const {
    return pixels == 0 ? 0.0 : static_cast<double>(inliers) / static_cast<double>(pixels);
  }
  double mean_inlier_error() const {
    return inliers == 0 ? 0.0 : inlier_error_sum_mm / static_cast<double>(inliers);
  }
};

std::string format_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

int cmd_evaluate(const EvaluateRunConfig& cfg) {
  if (cfg.prediction_dir.has_value() != cfg.gt_dir.has_value()) {
    throw ConfigError(
        "evaluate: scene-coordinate stats need both --pred-dir and --gt-dir");
  }
  if (!(cfg.inlier_threshold_mm > 0.0)) {
    throw ConfigError("evaluate: inlier_threshold_mm must be > 0");
  }
  const std::vector<double> t_edges =
      cfg.translation_edges_cm.empty() ? linear_edges(1.0, 50) : cfg.translation_edges_cm;
  const std::vector<double> r_edges =
      cfg.rotation_edges_deg.empty() ? linear_edges(0.5, 30) : cfg.rotation_edges_deg;
  const std::vector<double> c_edges =
      cfg.coord_edges_mm.empty() ? linear_edges(10.0, 50) : cfg.coord_edges_mm;

  const std::vector<FrameResult> results = read_results_file(cfg.results_file);
  ensure_output_dir(cfg.output_dir);

  const MetricReport report = build_metric_report(results);
  write_metric_csv(cfg.output_dir / "metrics.csv", report);
  write_histogram_csv(cfg.output_dir / "hist_translation_cm.csv",
                      cumulative_error_histogram(results, t_edges,
                                                 ErrorComponent::kTranslation));
  write_histogram_csv(cfg.output_dir / "hist_rotation_deg.csv",
                      cumulative_error_histogram(results, r_edges,
                                                 ErrorComponent::kRotation));

  std::vector<FrameFailure> failures;
  json manifest{{"schema", "screloc-manifest/1"},
                {"command", "evaluate"},
                {"results_file", cfg.results_file.string()},
                {"frames", results.size()},
                {"translation_edges_cm", t_edges},
                {"rotation_edges_deg", r_edges}};

  if (cfg.prediction_dir) {
    std::map<std::string, CoordPool> per_scene;
    CoordPool all;
    for (const auto& r : results) {
      try {
        const auto [pred, pred_mask] = load_prediction_map(*cfg.prediction_dir /
                                                           (r.frame + ".scrd"));
        const auto [gt, gt_mask] = load_scrd(*cfg.gt_dir / (r.frame + ".scrd"));
        (void)pred_mask;  // stats are taken over ground-truth validity
        const InlierStats stats =
            scene_coord_inlier_stats(pred, gt, gt_mask, cfg.inlier_threshold_mm, c_edges);
        per_scene[r.scene].add(stats);
        all.add(stats);
      } catch (const std::exception& ex) {
        failures.push_back({r.frame, ex.what()});
      }
    }
    report_failures("evaluate", failures);
    if (all.pixels == 0) {
      throw ConfigError("evaluate: no scene-coordinate map could be scored");
    }

    std::string csv = "scene,pixels,inlier_fraction,mean_inlier_error_mm\n";
    auto append_row = [&csv](const std::string& name, const CoordPool& pool) {
      csv += name + "," + std::to_string(pool.pixels) + "," +
             format_csv_double(pool.fraction()) + "," +
             format_csv_double(pool.mean_inlier_error()) + "\n";
    };
    for (const auto& [scene, pool] : per_scene) append_row(scene, pool);
    append_row("Complete", all);
    write_text_file(cfg.output_dir / "coord_stats.csv", csv);

    CumulativeHistogram pooled;
    pooled.edges = c_edges;
    pooled.cumulative.reserve(c_edges.size());
    for (const std::size_t count : all.cum_counts) {
      pooled.cumulative.push_back(static_cast<double>(count) /
                                  static_cast<double>(all.pixels));
    }
    write_histogram_csv(cfg.output_dir / "hist_coord_mm.csv", pooled);

    manifest["coord_stats"] = json{{"prediction_dir", cfg.prediction_dir->string()},
                                   {"gt_dir", cfg.gt_dir->string()},
                                   {"inlier_threshold_mm", cfg.inlier_threshold_mm},
                                   {"edges_mm", c_edges}};
  }

  write_manifest(cfg.output_dir, std::move(manifest), failures);
  return static_cast<int>(failures.size());
}

}  // namespace screloc
