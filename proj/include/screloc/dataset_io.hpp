#pragma once

#include <screloc/image.hpp>
#include <screloc/types.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace screloc {

/// Identifies one frame inside a scene: sequence directory plus frame
/// index. `str()` yields the canonical relative id "seq-03/frame-000123"
/// used for file naming and seed derivation.
struct FrameId {
  std::string scene;
  std::string sequence;
  int index = 0;

  std::string str() const;
};

/// One fully-loaded frame.
struct FrameRecord {
  FrameId id;
  RgbImage rgb;
  DepthImage depth;
  Pose pose;  // camera-to-world, translation in mm
  Intrinsics intrinsics;
};

/// The three files a frame consists of, located during the scan.
struct FrameFiles {
  FrameId id;
  std::filesystem::path color;
  std::filesystem::path depth;
  std::filesystem::path pose;
};

/// A per-frame problem found during scanning (missing file, unknown
/// sequence); scanning continues past these.
struct ScanWarning {
  std::string subject;  // frame id or sequence name
  std::string message;
};

/// Scan result: complete frames sorted by (sequence, index) plus the
/// warnings accumulated along the way.
struct SceneDataset {
  std::filesystem::path root;
  std::string scene;
  std::vector<FrameFiles> frames;
  std::vector<ScanWarning> warnings;
  Intrinsics intrinsics;
};

/// Reads a whitespace-separated 4x4 row-major homogeneous matrix. The
/// last row must be (0,0,0,1) within 1e-9; rotation drift up to 1e-3 is
/// re-orthonormalized through the nearest rotation, anything worse is a
/// FormatError. Translation is read in meters and converted to mm.
Pose load_pose_file(const std::filesystem::path& path);

/// Writes the pose in the same convention (meters, full double precision)
/// so load(write(p)) == p within 1e-6.
void write_pose_file(const std::filesystem::path& path, const Pose& pose);

/// 16-bit single-channel PNG in millimeters. Wrong bit depth or channel
/// count is a FormatError; an unreadable file an IoError.
DepthImage load_depth_png(const std::filesystem::path& path);
void write_depth_png(const std::filesystem::path& path, const DepthImage& depth);

/// 8-bit 3-channel PNG, returned in RGB channel order.
RgbImage load_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& rgb);

/// Walks `<root>/<sequence>/frame-NNNNNN.{color.png,depth.png,pose.txt}`
/// for every sequence named in the manifest (one name per line, blank
/// lines and '#' comments skipped). Frames missing any of their three
/// files produce a warning and are skipped; unknown sequences produce a
/// warning and contribute nothing. Throws IoError when root or the
/// manifest is missing and ConfigError when the manifest lists no
/// sequence.
SceneDataset scan_dataset(const std::filesystem::path& root,
                          const std::filesystem::path& split_manifest,
                          const Intrinsics& intrinsics = kSevenScenesIntrinsics);

/// Loads the three files of a scanned frame. The RGB and depth images
/// must agree on resolution (7-Scenes ships registered pairs).
FrameRecord load_frame(const FrameFiles& files, const Intrinsics& intrinsics);

}  // namespace screloc
