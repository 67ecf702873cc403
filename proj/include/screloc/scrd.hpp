#pragma once

#include <screloc/image.hpp>

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace screloc {

/// SCRD is the on-disk interchange format for scene coordinate maps
/// (ground truth and predictions alike). Layout, little-endian:
///
///   magic "SCRD" | version u32 = 1 | width u32 | height u32
///   | flags u32 (bit 0: mask plane present)
///   | width*height*3 float32 world coordinates in mm, row-major,
///     xyz interleaved
///   | optional mask plane: width*height u8 (0/1)
///
/// Coordinates are stored as float32; callers that need more precision
/// keep their buffers in memory.
inline constexpr std::uint32_t kScrdVersion = 1;
inline constexpr std::uint32_t kScrdFlagMask = 1u << 0;

std::vector<std::uint8_t> encode_scrd(const SceneCoordinateImage& coords,
                                      const ValidityMask* mask);

/// Decodes an SCRD buffer. If the file omits the mask plane the returned
/// mask is all-ones. Throws FormatError on bad magic, version or size.
std::pair<SceneCoordinateImage, ValidityMask> decode_scrd(const std::vector<std::uint8_t>& bytes);

void write_scrd(const std::filesystem::path& path, const SceneCoordinateImage& coords,
                const ValidityMask* mask);

std::pair<SceneCoordinateImage, ValidityMask> load_scrd(const std::filesystem::path& path);

}  // namespace screloc
