#include "gpcgc/synthetic.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace gpcgc {
namespace {

constexpr double kPi = 3.14159265358979323846;

int32_t grid_max(int bit_depth) { return (1 << bit_depth) - 1; }

}  // namespace

PointCloud synth_sphere_shell(int bit_depth, double radius_scale, double shell) {
  const int n = 1 << bit_depth;
  const double c = (n - 1) / 2.0;
  const double r = radius_scale * n / 2.0;
  const double lo = (r - shell) * (r - shell);
  const double hi = (r + shell) * (r + shell);
  std::vector<Point3> pts;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const double q = (x - c) * (x - c) + (y - c) * (y - c);
      if (q > hi) continue;
      // dz^2 must lie in [lo - q, hi - q]; enumerate both signs.
      const double dz_hi = std::sqrt(hi - q);
      const double dz_lo = q >= lo ? 0.0 : std::sqrt(lo - q);
      for (int dz = static_cast<int>(std::ceil(dz_lo)); dz <= static_cast<int>(dz_hi); ++dz) {
        for (int sign = -1; sign <= 1; sign += 2) {
          if (dz == 0 && sign == 1) continue;
          const double zf = c + sign * dz;
          const int z = static_cast<int>(std::lround(zf));
          if (z < 0 || z >= n) continue;
          const double d2 = q + (z - c) * (z - c);
          if (d2 >= lo && d2 <= hi) pts.push_back({x, y, z});
        }
      }
    }
  }
  return PointCloud::from_points(std::move(pts), bit_depth);
}

PointCloud synth_plane(int bit_depth, int axis, int coord) {
  if (axis < 0 || axis > 2) throw DomainError("synth_plane: axis must be 0, 1, or 2");
  const int n = 1 << bit_depth;
  if (coord < 0 || coord >= n) throw DomainError("synth_plane: coord outside the grid");
  std::vector<Point3> pts;
  pts.reserve(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (axis == 0) pts.push_back({coord, a, b});
      else if (axis == 1) pts.push_back({a, coord, b});
      else pts.push_back({a, b, coord});
    }
  return PointCloud::from_points(std::move(pts), bit_depth);
}

PointCloud synth_tilted_plane(int bit_depth, double sx, double sy, double z0) {
  const int n = 1 << bit_depth;
  std::vector<Point3> pts;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int z = static_cast<int>(std::lround(z0 + sx * x + sy * y));
      if (z >= 0 && z < n) pts.push_back({x, y, z});
    }
  return PointCloud::from_points(std::move(pts), bit_depth);
}

PointCloud synth_slab(int bit_depth, double sx, double sy, double z0, int gap) {
  const int n = 1 << bit_depth;
  std::vector<Point3> pts;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int z = static_cast<int>(std::lround(z0 + sx * x + sy * y));
      if (z >= 0 && z < n) pts.push_back({x, y, z});
      if (z + gap >= 0 && z + gap < n) pts.push_back({x, y, z + gap});
    }
  return PointCloud::from_points(std::move(pts), bit_depth);
}

PointCloud synth_random(int bit_depth, std::size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const uint32_t mask = static_cast<uint32_t>(grid_max(bit_depth));
  std::vector<Point3> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const uint64_t r = rng();
    pts.push_back({static_cast<int32_t>(r & mask),
                   static_cast<int32_t>((r >> 21) & mask),
                   static_cast<int32_t>((r >> 42) & mask)});
  }
  return PointCloud::from_points(std::move(pts), bit_depth);
}

PointCloud synth_blob(int bit_depth, uint64_t seed) {
  const int n = 1 << bit_depth;
  const double c = (n - 1) / 2.0;
  std::mt19937_64 rng(seed);
  auto coef = [&rng] {
    return 0.05 + 0.10 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  const double a1 = coef(), a2 = coef(), a3 = coef();
  const int f1 = 2 + static_cast<int>(rng() % 3);
  const int f2 = 1 + static_cast<int>(rng() % 4);
  const double base = 0.55 * n / 2.0;

  // Sample directions densely enough that neighboring samples land on
  // adjacent voxels at the largest radius.
  const int steps = 4 * n;
  std::vector<Point3> pts;
  for (int it = 0; it <= steps / 2; ++it) {
    const double theta = kPi * it / (steps / 2);  // [0, pi]
    for (int ip = 0; ip < steps; ++ip) {
      const double phi = 2.0 * kPi * ip / steps;
      const double r =
          base * (1.0 + a1 * std::sin(f1 * theta) * std::cos(f2 * phi) +
                  a2 * std::cos(f2 * theta + 1.0) + a3 * std::sin(f1 * phi + 2.0));
      const double sx = c + r * std::sin(theta) * std::cos(phi);
      const double sy = c + r * std::sin(theta) * std::sin(phi);
      const double sz = c + r * std::cos(theta);
      const int x = static_cast<int>(std::lround(sx));
      const int y = static_cast<int>(std::lround(sy));
      const int z = static_cast<int>(std::lround(sz));
      if (x >= 0 && x < n && y >= 0 && y < n && z >= 0 && z < n)
        pts.push_back({x, y, z});
    }
  }
  return PointCloud::from_points(std::move(pts), bit_depth);
}

}  // namespace gpcgc
