#include "screloc/scrd.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace screloc {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'R', 'D'};
// Keeps width*height*12 comfortably inside size_t and rejects absurd headers.
constexpr std::uint64_t kMaxPixels = 1ull << 28;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace

std::vector<std::uint8_t> encode_scrd(const SceneCoordinateImage& coords,
                                      const ValidityMask* mask) {
  if (mask != nullptr && (mask->width != coords.width || mask->height != coords.height)) {
    throw std::invalid_argument("scrd: mask resolution differs from coordinates");
  }
  const std::size_t n = coords.data.size();
  std::vector<std::uint8_t> out;
  out.reserve(20 + n * 4 + (mask ? n / 3 : 0));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kScrdVersion);
  put_u32(out, static_cast<std::uint32_t>(coords.width));
  put_u32(out, static_cast<std::uint32_t>(coords.height));
  put_u32(out, mask ? kScrdFlagMask : 0u);
  for (const double v : coords.data) {
    put_f32(out, static_cast<float>(v));
  }
  if (mask) {
    for (const std::uint8_t b : mask->bits) {
      out.push_back(b ? 1 : 0);
    }
  }
  return out;
}

std::pair<SceneCoordinateImage, ValidityMask> decode_scrd(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 20) {
    throw FormatError("scrd: truncated header");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("scrd: bad magic");
  }
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kScrdVersion) {
    throw FormatError("scrd: unsupported version " + std::to_string(version));
  }
  const std::uint32_t width = get_u32(bytes.data() + 8);
  const std::uint32_t height = get_u32(bytes.data() + 12);
  const std::uint32_t flags = get_u32(bytes.data() + 16);
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * height;
  if (width == 0 || height == 0 || pixels > kMaxPixels) {
    throw FormatError("scrd: dimension overflow");
  }
  const bool has_mask = (flags & kScrdFlagMask) != 0;
  const std::uint64_t expected = 20 + pixels * 12 + (has_mask ? pixels : 0);
  if (bytes.size() != expected) {
    throw FormatError("scrd: payload size mismatch (expected " + std::to_string(expected) +
                      " bytes, got " + std::to_string(bytes.size()) + ")");
  }

  SceneCoordinateImage coords(static_cast<int>(width), static_cast<int>(height));
  const std::uint8_t* p = bytes.data() + 20;
  for (std::size_t i = 0; i < coords.data.size(); ++i, p += 4) {
    coords.data[i] = static_cast<double>(get_f32(p));
  }
  ValidityMask mask(static_cast<int>(width), static_cast<int>(height), true);
  if (has_mask) {
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
      if (p[i] > 1) {
        throw FormatError("scrd: mask plane contains values other than 0/1");
      }
      mask.bits[i] = p[i];
    }
  }
  return {std::move(coords), std::move(mask)};
}

void write_scrd(const std::filesystem::path& path, const SceneCoordinateImage& coords,
                const ValidityMask* mask) {
  const auto bytes = encode_scrd(coords, mask);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("scrd: cannot open for writing: " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("scrd: write failed: " + path.string());
  }
}

std::pair<SceneCoordinateImage, ValidityMask> load_scrd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("scrd: cannot open: " + path.string());
  }
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return decode_scrd(bytes);
}

}  // namespace screloc
