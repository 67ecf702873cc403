#include <screloc/dataset_io.hpp>

#include <Eigen/SVD>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace screloc {
namespace fs = std::filesystem;

std::string FrameId::str() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame-%06d", index);
  return sequence + "/" + buf;
}

Pose load_pose_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pose file: " + path.string());

  std::array<double, 16> v{};
  for (double& x : v) {
    if (!(in >> x)) {
      throw FormatError("pose file must hold a 4x4 matrix (16 numbers): " +
                        path.string());
    }
  }

  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = v[static_cast<std::size_t>(r) * 4 + c];
  }

  if (std::abs(m(3, 0)) > 1e-9 || std::abs(m(3, 1)) > 1e-9 ||
      std::abs(m(3, 2)) > 1e-9 || std::abs(m(3, 3) - 1.0) > 1e-9) {
    throw FormatError("pose file last row must be (0, 0, 0, 1): " + path.string());
  }

  const Mat3 R = m.topLeftCorner<3, 3>();
  const double drift = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (drift > 1e-3) {
    throw FormatError("pose rotation block drifts from orthonormal beyond 1e-3: " +
                      path.string());
  }
  if (R.determinant() < 0.0) {
    throw FormatError("pose rotation block is a reflection: " + path.string());
  }

  // Nearest rotation (Frobenius sense) absorbs the limited file precision.
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 nearest = svd.matrixU() * svd.matrixV().transpose();

  const Vec3 t_mm = m.topRightCorner<3, 1>() * 1000.0;  // meters -> mm
  return Pose::from_rt(nearest, t_mm);
}

void write_pose_file(const fs::path& path, const Pose& pose) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open pose file for writing: " + path.string());
  const Mat3 R = pose.rotation_matrix();
  const Vec3 t_m = pose.translation() / 1000.0;  // mm -> meters
  char buf[64];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", R(r, c));
      out << buf << ' ';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", t_m(r));
    out << buf << '\n';
  }
  out << "0 0 0 1\n";
  if (!out) throw IoError("failed writing pose file: " + path.string());
}

DepthImage load_depth_png(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("depth image missing: " + path.string());
  const cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw FormatError("cannot decode depth image: " + path.string());
  if (img.type() != CV_16UC1) {
    throw FormatError("depth image must be 16-bit single-channel: " + path.string());
  }
  DepthImage out(img.cols, img.rows);
  for (int y = 0; y < img.rows; ++y) {
    const auto* row = img.ptr<std::uint16_t>(y);
    std::copy(row, row + img.cols,
              out.depth_mm.begin() + static_cast<std::ptrdiff_t>(y) * img.cols);
  }
  return out;
}

void write_depth_png(const fs::path& path, const DepthImage& depth) {
  cv::Mat img(depth.height, depth.width, CV_16UC1);
  for (int y = 0; y < depth.height; ++y) {
    auto* row = img.ptr<std::uint16_t>(y);
    std::copy(depth.depth_mm.begin() + static_cast<std::ptrdiff_t>(y) * depth.width,
              depth.depth_mm.begin() + static_cast<std::ptrdiff_t>(y + 1) * depth.width,
              row);
  }
  if (!cv::imwrite(path.string(), img)) {
    throw IoError("failed writing depth image: " + path.string());
  }
}

RgbImage load_rgb_png(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("color image missing: " + path.string());
  const cv::Mat img = cv::imread(path.string(), cv::IMREAD_COLOR);  // BGR
  if (img.empty()) throw FormatError("cannot decode color image: " + path.string());
  RgbImage out(img.cols, img.rows);
  for (int y = 0; y < img.rows; ++y) {
    const auto* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.cols; ++x) {
      out.set_pixel(x, y, {row[x][2], row[x][1], row[x][0]});
    }
  }
  return out;
}

void write_rgb_png(const fs::path& path, const RgbImage& rgb) {
  cv::Mat img(rgb.height, rgb.width, CV_8UC3);
  for (int y = 0; y < rgb.height; ++y) {
    auto* row = img.ptr<cv::Vec3b>(y);
    for (int x = 0; x < rgb.width; ++x) {
      const auto px = rgb.pixel(x, y);
      row[x] = cv::Vec3b(px[2], px[1], px[0]);  // RGB -> BGR
    }
  }
  if (!cv::imwrite(path.string(), img)) {
    throw IoError("failed writing color image: " + path.string());
  }
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Parses "frame-000123.color.png" style names; returns the frame index and
// which of the three parts it is, or -1 when the name does not match.
struct FrameFilePart {
  int index = -1;
  int part = -1;  // 0 = color, 1 = depth, 2 = pose
};

FrameFilePart parse_frame_file(const std::string& name) {
  FrameFilePart out;
  constexpr std::string_view prefix = "frame-";
  if (name.rfind(prefix, 0) != 0) return out;
  std::size_t pos = prefix.size();
  std::size_t digits_end = pos;
  while (digits_end < name.size() &&
         std::isdigit(static_cast<unsigned char>(name[digits_end]))) {
    ++digits_end;
  }
  if (digits_end == pos) return out;
  int index = 0;
  const auto [ptr, ec] = std::from_chars(name.data() + pos, name.data() + digits_end, index);
  if (ec != std::errc() || ptr != name.data() + digits_end) return out;
  const std::string suffix = name.substr(digits_end);
  if (suffix == ".color.png") out.part = 0;
  else if (suffix == ".depth.png") out.part = 1;
  else if (suffix == ".pose.txt") out.part = 2;
  else return out;
  out.index = index;
  return out;
}

}  // namespace

SceneDataset scan_dataset(const fs::path& root, const fs::path& split_manifest,
                          const Intrinsics& intrinsics) {
  if (!fs::is_directory(root)) {
    throw IoError("dataset root is not a directory: " + root.string());
  }
  std::ifstream manifest(split_manifest);
  if (!manifest) throw IoError("cannot open split manifest: " + split_manifest.string());

  std::vector<std::string> sequences;
  std::string line;
  while (std::getline(manifest, line)) {
    const std::string name = trimmed(line);
    if (name.empty() || name[0] == '#') continue;
    sequences.push_back(name);
  }
  if (sequences.empty()) {
    throw ConfigError("split manifest lists no sequences: " + split_manifest.string());
  }
  std::sort(sequences.begin(), sequences.end());
  sequences.erase(std::unique(sequences.begin(), sequences.end()), sequences.end());

  SceneDataset ds;
  ds.root = root;
  ds.scene = root.filename().string();
  ds.intrinsics = intrinsics;

  for (const std::string& seq : sequences) {
    const fs::path seq_dir = root / seq;
    if (!fs::is_directory(seq_dir)) {
      ds.warnings.push_back({seq, "sequence directory missing"});
      continue;
    }
    // Gather the paths of the three files per frame index.
    std::map<int, std::array<fs::path, 3>> present;
    for (const auto& entry : fs::directory_iterator(seq_dir)) {
      if (!entry.is_regular_file()) continue;
      const FrameFilePart part = parse_frame_file(entry.path().filename().string());
      if (part.part < 0) continue;
      present[part.index][static_cast<std::size_t>(part.part)] = entry.path();
    }
    for (const auto& [index, parts] : present) {
      FrameId id{ds.scene, seq, index};
      if (parts[0].empty() || parts[1].empty() || parts[2].empty()) {
        std::string missing;
        if (parts[0].empty()) missing += " color";
        if (parts[1].empty()) missing += " depth";
        if (parts[2].empty()) missing += " pose";
        ds.warnings.push_back({id.str(), "missing frame files:" + missing});
        continue;
      }
      FrameFiles files;
      files.id = id;
      files.color = parts[0];
      files.depth = parts[1];
      files.pose = parts[2];
      ds.frames.push_back(std::move(files));
    }
  }

  std::sort(ds.frames.begin(), ds.frames.end(), [](const FrameFiles& a, const FrameFiles& b) {
    return std::tie(a.id.sequence, a.id.index) < std::tie(b.id.sequence, b.id.index);
  });
  return ds;
}

FrameRecord load_frame(const FrameFiles& files, const Intrinsics& intrinsics) {
  FrameRecord rec;
  rec.id = files.id;
  rec.rgb = load_rgb_png(files.color);
  rec.depth = load_depth_png(files.depth);
  rec.pose = load_pose_file(files.pose);
  rec.intrinsics = intrinsics;
  if (!same_resolution(rec.rgb.width, rec.rgb.height, rec.depth)) {
    throw FormatError("color and depth resolutions differ for frame " + files.id.str());
  }
  return rec;
}

}  // namespace screloc
