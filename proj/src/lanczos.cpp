#include "gpcgc/lanczos.hpp"

#include <algorithm>
#include <cmath>

namespace gpcgc {
namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// 1-D horizontal pass shared by both directions; `down` selects the stretched
// 12-tap kernel (output o centered on input 2o+0.5) versus the 6-tap
// interpolation kernel (output o centered on input o/2-0.25).
std::vector<double> resample_row(const double* src, int n_in, int n_out, bool down) {
  std::vector<double> out(n_out);
  for (int o = 0; o < n_out; ++o) {
    double acc = 0.0, wsum = 0.0;
    if (down) {
      const double c = 2.0 * o + 0.5;
      for (int j = 2 * o - 5; j <= 2 * o + 6; ++j) {
        const double w = lanczos3((static_cast<double>(j) - c) / 2.0);
        acc += w * src[clamp_index(j, n_in)];
        wsum += w;
      }
    } else {
      const double c = 0.5 * o - 0.25;
      const int j0 = static_cast<int>(std::floor(c - 3.0)) + 1;
      for (int j = j0; j < j0 + 6; ++j) {
        const double w = lanczos3(static_cast<double>(j) - c);
        acc += w * src[clamp_index(j, n_in)];
        wsum += w;
      }
    }
    out[o] = acc / wsum;
  }
  return out;
}

// Apply resample_row along columns of `img` producing new_rows rows, then the
// caller transposes usage; simplest is to run on rows, transpose, run again.
Image transpose(const Image& img) {
  Image t(img.cols, img.rows);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) t.at(c, r) = img.at(r, c);
  return t;
}

Image resample_rows(const Image& img, int new_cols, bool down) {
  Image out(img.rows, new_cols);
  for (int r = 0; r < img.rows; ++r) {
    const std::vector<double> row = resample_row(&img.px[static_cast<size_t>(r) * img.cols],
                                                 img.cols, new_cols, down);
    std::copy(row.begin(), row.end(), out.px.begin() + static_cast<size_t>(r) * new_cols);
  }
  return out;
}

}  // namespace

double lanczos3(double x) {
  const double ax = std::fabs(x);
  if (ax >= 3.0) return 0.0;
  return sinc(x) * sinc(x / 3.0);
}

Image lanczos_downsample(const Image& img) {
  if (img.rows < 2 || img.cols < 2 || img.rows % 2 != 0 || img.cols % 2 != 0)
    throw DomainError("lanczos_downsample: dimensions must be even and >= 2");
  Image h = resample_rows(img, img.cols / 2, /*down=*/true);
  Image v = resample_rows(transpose(h), img.rows / 2, /*down=*/true);
  return transpose(v);
}

Image lanczos_upsample(const Image& img) {
  if (img.rows < 1 || img.cols < 1)
    throw DomainError("lanczos_upsample: empty image");
  Image h = resample_rows(img, img.cols * 2, /*down=*/false);
  Image v = resample_rows(transpose(h), img.rows * 2, /*down=*/false);
  return transpose(v);
}

}  // namespace gpcgc
