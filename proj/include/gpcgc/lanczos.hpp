#pragma once

#include <vector>

#include "gpcgc/errors.hpp"

namespace gpcgc {

// Row-major grayscale raster with double samples.
struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<double> px;

  Image() = default;
  Image(int r, int c) : rows(r), cols(c), px(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return px[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return px[static_cast<size_t>(r) * cols + c]; }
};

// Lanczos-3 window: sinc(x)*sinc(x/3) for |x| < 3, else 0.
double lanczos3(double x);

// Halve both dimensions with a stretched Lanczos-3 kernel (12 taps per
// output sample, edge-clamped, weights normalized per output so constant
// images are preserved exactly). Dimensions must be even and at least 2.
Image lanczos_downsample(const Image& img);

// Double both dimensions with a Lanczos-3 kernel (6 taps per output sample,
// edge-clamped, weights normalized per output).
Image lanczos_upsample(const Image& img);

}  // namespace gpcgc
