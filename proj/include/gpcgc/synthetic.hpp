#pragma once

#include <cstdint>

#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

// Deterministic test-cloud generators. All coordinates live in
// [0, 2^bit_depth); every function is a pure function of its arguments.

// Voxels whose distance to the grid center lies within `shell` of
// radius_scale * 2^(bit_depth-1).
PointCloud synth_sphere_shell(int bit_depth, double radius_scale = 0.6,
                              double shell = 0.5);

// Axis-aligned plane: the full sheet at `coord` on the given axis
// (0 = x, 1 = y, 2 = z).
PointCloud synth_plane(int bit_depth, int axis, int coord);

// Sloped sheet z = round(z0 + sx*x + sy*y), clipped to the grid.
PointCloud synth_tilted_plane(int bit_depth, double sx, double sy, double z0);

// Two sloped sheets `gap` voxels apart; produces near/far pairs everywhere.
PointCloud synth_slab(int bit_depth, double sx, double sy, double z0, int gap);

// `count` voxels drawn uniformly (deduplicated, so the result may be smaller).
PointCloud synth_random(int bit_depth, std::size_t count, uint64_t seed);

// Star-shaped surface around the center whose radius varies smoothly with
// direction; seeded harmonics make each blob distinct.
PointCloud synth_blob(int bit_depth, uint64_t seed);

}  // namespace gpcgc
