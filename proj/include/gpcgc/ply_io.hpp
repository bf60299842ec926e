#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

enum class PlyFormat { Ascii, Binary };

// Parses an ASCII or binary-little-endian PLY whose vertex element carries
// x, y, z scalar properties (integer or floating). Floating coordinates are
// rounded to nearest, ties to even. Duplicates collapse; bit depth is the
// smallest cover. Parse failures throw PlyError with the byte offset.
PointCloud read_ply(std::span<const uint8_t> bytes);

// Serializes the cloud as int32 x/y/z vertices. read_ply(write_ply(pc)) == pc.
std::vector<uint8_t> write_ply(const PointCloud& pc, PlyFormat format);

// File wrappers.
PointCloud read_ply_file(const std::string& path);
void write_ply_file(const std::string& path, const PointCloud& pc, PlyFormat format);

}  // namespace gpcgc
