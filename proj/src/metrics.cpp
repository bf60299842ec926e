#include "gpcgc/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gpcgc/kdtree.hpp"
#include "gpcgc/parallel.hpp"

namespace gpcgc {

namespace {

constexpr std::size_t kBlock = 4096;

// Mean squared NN distance from each point of `from` to `to`. Block sums are
// integer-exact, so the result is independent of the worker count.
double mean_sq_nn(const std::vector<Point3>& from, const KdTree& to, int threads) {
  const std::size_t blocks = (from.size() + kBlock - 1) / kBlock;
  std::vector<int64_t> sums(blocks, 0);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(begin + kBlock, from.size());
    int64_t s = 0;
    for (std::size_t i = begin; i < end; ++i) s += to.nearest(from[i]).dist2;
    sums[b] = s;
  });
  int64_t total = 0;
  for (int64_t s : sums) total += s;
  return static_cast<double>(total) / static_cast<double>(from.size());
}

// 3x3 symmetric eigendecomposition by cyclic Jacobi rotations.
void jacobi3(double a[3][3], double eigval[3], double eigvec[3][3]) {
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-18) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-30) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (int r = 0; r < 3; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = a[p][r] = c * arp - s * arq;
          a[r][q] = a[q][r] = s * arp + c * arq;
        }
        for (int r = 0; r < 3; ++r) {
          const double vrp = v[r][p], vrq = v[r][q];
          v[r][p] = c * vrp - s * vrq;
          v[r][q] = s * vrp + c * vrq;
        }
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    eigval[i] = a[i][i];
    for (int r = 0; r < 3; ++r) eigvec[i][r] = v[r][i];
  }
}

Normal fix_sign(Normal n) {
  int arg = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) > std::abs(n[arg])) arg = i;
  if (n[arg] < 0)
    for (double& c : n) c = -c;
  return n;
}

Normal normalized(const Normal& n) {
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  return {n[0] / len, n[1] / len, n[2] / len};
}

Normal cross(const Normal& a, const Normal& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

double d1_distortion(const PointCloud& ref, const PointCloud& rec, int threads) {
  if (ref.empty() || rec.empty())
    throw DomainError("d1_distortion requires non-empty clouds");
  const KdTree ref_tree(ref.points());
  const KdTree rec_tree(rec.points());
  const double fwd = mean_sq_nn(ref.points(), rec_tree, threads);
  const double bwd = mean_sq_nn(rec.points(), ref_tree, threads);
  return std::max(fwd, bwd);
}

std::vector<Normal> estimate_normals(const PointCloud& pc, int k, int threads) {
  if (k < 3) throw DomainError("estimate_normals: k must be >= 3");
  if (pc.size() < static_cast<std::size_t>(k))
    throw DomainError("estimate_normals: cloud smaller than k");
  const KdTree tree(pc.points());
  std::vector<Normal> normals(pc.size());

  parallel_for(pc.size(), threads, [&](std::size_t i) {
    const auto nbrs = tree.k_nearest(pc.points()[i], static_cast<std::size_t>(k));
    double mean[3] = {0, 0, 0};
    for (std::size_t j : nbrs) {
      mean[0] += pc.points()[j].x;
      mean[1] += pc.points()[j].y;
      mean[2] += pc.points()[j].z;
    }
    for (double& m : mean) m /= static_cast<double>(nbrs.size());
    double cov[3][3] = {};
    for (std::size_t j : nbrs) {
      const double d[3] = {pc.points()[j].x - mean[0], pc.points()[j].y - mean[1],
                           pc.points()[j].z - mean[2]};
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) cov[r][c] += d[r] * d[c];
    }
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cov[r][c] /= static_cast<double>(nbrs.size());

    double eigval[3];
    double eigvec[3][3];
    jacobi3(cov, eigval, eigvec);
    int lo = 0, hi = 0;
    for (int e = 1; e < 3; ++e) {
      if (eigval[e] < eigval[lo]) lo = e;
      if (eigval[e] > eigval[hi]) hi = e;
    }
    int mid = 3 - lo - hi;
    if (lo == hi) { lo = 0; mid = 1; hi = 2; }

    // Rank < 2 neighborhood: any direction orthogonal to the dominant one.
    if (eigval[mid] <= 1e-12 * std::max(eigval[hi], 1e-300)) {
      const Normal dom = normalized({eigvec[hi][0], eigvec[hi][1], eigvec[hi][2]});
      int least = 0;
      for (int a = 1; a < 3; ++a)
        if (std::abs(dom[a]) < std::abs(dom[least])) least = a;
      Normal basis = {0, 0, 0};
      basis[least] = 1.0;
      normals[i] = fix_sign(normalized(cross(dom, basis)));
      return;
    }
    normals[i] = fix_sign(normalized({eigvec[lo][0], eigvec[lo][1], eigvec[lo][2]}));
  });
  return normals;
}

double d2_distortion(const PointCloud& ref, const PointCloud& rec,
                     const std::vector<Normal>& ref_normals, int threads) {
  if (ref.empty() || rec.empty())
    throw DomainError("d2_distortion requires non-empty clouds");
  if (ref_normals.size() != ref.size())
    throw DomainError("d2_distortion: normals not aligned with ref");
  const KdTree ref_tree(ref.points());
  const KdTree rec_tree(rec.points());

  auto projected_mean = [&](const std::vector<Point3>& from, const KdTree& to,
                            bool from_is_ref) {
    const std::size_t blocks = (from.size() + kBlock - 1) / kBlock;
    std::vector<double> sums(blocks, 0.0);
    parallel_for(blocks, threads, [&](std::size_t b) {
      const std::size_t begin = b * kBlock;
      const std::size_t end = std::min(begin + kBlock, from.size());
      double s = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const auto hit = to.nearest(from[i]);
        const Point3& other = to.point(hit.index);
        const Normal& n = from_is_ref ? ref_normals[i] : ref_normals[hit.index];
        const double e[3] = {static_cast<double>(from[i].x - other.x),
                             static_cast<double>(from[i].y - other.y),
                             static_cast<double>(from[i].z - other.z)};
        const double proj = e[0] * n[0] + e[1] * n[1] + e[2] * n[2];
        s += proj * proj;
      }
      sums[b] = s;
    });
    double total = 0.0;
    for (double s : sums) total += s;
    return total / static_cast<double>(from.size());
  };

  const double fwd = projected_mean(ref.points(), rec_tree, true);
  const double bwd = projected_mean(rec.points(), ref_tree, false);
  return std::max(fwd, bwd);
}

double geometry_psnr(double mse, int bit_depth) {
  if (mse < 0) throw DomainError("geometry_psnr: negative mse");
  if (mse == 0) return std::numeric_limits<double>::infinity();
  const double peak = static_cast<double>((int64_t{1} << bit_depth) - 1);
  return 10.0 * std::log10(peak * peak / mse);
}

std::string MetricsReport::csv_header() {
  return "name,d1_mse,d1_psnr,d2_mse,d2_psnr,bpp,points_in,points_out";
}

std::string MetricsReport::csv_line(const std::string& name) const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%.10g,%.10g,%llu,%llu",
                name.c_str(), d1_mse, d1_psnr, d2_mse, d2_psnr, bpp,
                static_cast<unsigned long long>(num_points_in),
                static_cast<unsigned long long>(num_points_out));
  return buf;
}

}  // namespace gpcgc
