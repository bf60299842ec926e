#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

using Normal = std::array<double, 3>;

struct MetricsReport {
  double d1_mse = 0.0;
  double d2_mse = 0.0;
  double d1_psnr = 0.0;
  double d2_psnr = 0.0;
  double bpp = 0.0;
  uint64_t num_points_in = 0;
  uint64_t num_points_out = 0;

  // `name,d1_mse,d1_psnr,d2_mse,d2_psnr,bpp,points_in,points_out`
  std::string csv_line(const std::string& name) const;
  static std::string csv_header();
};

// Symmetric point-to-point distortion: max over both directions of the mean
// squared nearest-neighbor distance. Zero iff the clouds are equal as sets.
double d1_distortion(const PointCloud& ref, const PointCloud& rec, int threads = 1);

// Per-point unit normals from the covariance of the k nearest neighbors
// (smallest-eigenvalue eigenvector, largest-magnitude component positive).
std::vector<Normal> estimate_normals(const PointCloud& pc, int k, int threads = 1);

// Symmetric point-to-plane distortion; each pair's error is projected onto
// the normal of the reference-side point.
double d2_distortion(const PointCloud& ref, const PointCloud& rec,
                     const std::vector<Normal>& ref_normals, int threads = 1);

// 10*log10(peak^2 / mse) with peak = 2^bit_depth - 1; +inf when mse == 0.
double geometry_psnr(double mse, int bit_depth);

}  // namespace gpcgc
