#pragma once

#include <cstdint>
#include <vector>

#include "gpcgc/projection.hpp"

namespace gpcgc {

// The nine lossy occupancy shapes: full coverage, four closed half-planes,
// and four closed triangles. Triangle pairs share their diagonal.
enum class OccupancyMode : uint8_t {
  Full = 0,
  Left = 1,
  Right = 2,
  Top = 3,
  Bottom = 4,
  UpperLeft = 5,
  LowerRight = 6,
  UpperRight = 7,
  LowerLeft = 8,
};

constexpr int kNumOccupancyModes = 9;

// Row-major S x S boolean mask (rows top-down, columns left-right). S must be
// even and >= 2.
std::vector<uint8_t> mode_mask(OccupancyMode mode, int side);

// Mode whose mask agrees with the occupancy grid on the most cells; ties go
// to the smallest mode index. The grid must have at least one occupied cell.
OccupancyMode select_mode(const std::vector<uint8_t>& occupancy, int side);

// Depth maps made dense for smooth coding: empty cells inside the mode mask
// take the mean depth (rounded half up) of the nearest occupied cells at
// minimal Chebyshev distance; cells outside the mask take the dummy value.
// Occupied cells always keep their true depths.
struct FilledMaps {
  std::vector<int> near;
  std::vector<int> far;
  bool dummy_high = false;  // dummy = side when true, -1 otherwise
};
FilledMaps fill_depth(const DepthMapSet& dms, OccupancyMode mode);

// Decoder-side occupancy reconstruction: occupancy becomes mask(mode), depths
// come from the decoded maps clamped to [0, side), everything outside the
// mask is dropped, and far collapses onto near when dual is false.
DepthMapSet reconstruct_pixels(const std::vector<int>& decoded_near,
                               const std::vector<int>& decoded_far,
                               OccupancyMode mode, bool dual, Axis axis, int side);

}  // namespace gpcgc
