#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

enum class Axis : uint8_t { X = 0, Y = 1, Z = 2 };

// Splits a leaf-local point into its projection cell (u, v) and depth along
// the dropped axis. The projection plane sits at coordinate 0, so the depth
// is the dropped coordinate itself.
inline void split_point(const Point3& p, Axis axis, int* u, int* v, int* depth) {
  switch (axis) {
    case Axis::X: *u = p.y; *v = p.z; *depth = p.x; return;
    case Axis::Y: *u = p.x; *v = p.z; *depth = p.y; return;
    case Axis::Z: *u = p.x; *v = p.y; *depth = p.z; return;
  }
}

inline Point3 merge_point(int u, int v, int depth, Axis axis) {
  switch (axis) {
    case Axis::X: return {depth, u, v};
    case Axis::Y: return {u, depth, v};
    default: return {u, v, depth};
  }
}

// Per-leaf occupancy mask plus near/far depth images over an S x S grid.
// Grids are row-major with index v * side + u. Unoccupied cells hold kEmpty.
struct DepthMapSet {
  static constexpr int kEmpty = -1;

  int side = 0;
  Axis axis = Axis::Z;
  std::vector<uint8_t> occupancy;
  std::vector<int> near;
  std::vector<int> far;
  bool dual = false;

  bool occupied(int u, int v) const { return occupancy[static_cast<std::size_t>(v) * side + u] != 0; }
  std::size_t cell(int u, int v) const { return static_cast<std::size_t>(v) * side + u; }
};

// Number of distinct (u, v) cells hit when dropping `axis`.
int projection_area(std::span<const Point3> points, Axis axis, int side);

// Axis with the largest projection area; ties break in order X < Y < Z.
Axis select_axis(std::span<const Point3> points, int side);

// Near = per-cell minimum depth, far = per-cell maximum; dual iff they differ
// anywhere.
DepthMapSet project(std::span<const Point3> points, Axis axis, int side);

// True iff every point's depth lies within `thickness` of its cell's near or
// far surface. A false result forces a split above the minimum leaf size.
bool is_projectable(const DepthMapSet& dms, std::span<const Point3> points,
                    int thickness);

// Emits the near point of every occupied cell (and the far point when it
// differs), translated by the voxel origin. Depths are clamped to [0, side).
std::vector<Point3> unproject(const DepthMapSet& dms, const Point3& origin);

}  // namespace gpcgc
