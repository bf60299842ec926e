#include "gpcgc/saab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gpcgc {

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvectors come
// back row-per-eigenpair, unsorted.
void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eigval,
                  std::vector<double>& eigvec) {
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
  auto V = [&](int r, int c) -> double& { return v[static_cast<std::size_t>(r) * n + c]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = A(p, p), aqq = A(q, q), apq = A(p, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = A(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = A(r, p), arq = A(r, q);
          A(r, p) = A(p, r) = c * arp - s * arq;
          A(r, q) = A(q, r) = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = c * vrp - s * vrq;
          V(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  eigval.resize(n);
  eigvec.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    eigval[i] = A(i, i);
    for (int r = 0; r < n; ++r) eigvec[static_cast<std::size_t>(i) * n + r] = V(r, i);
  }
}

void fix_sign(double* v, int n) {
  int arg = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0)
    for (int i = 0; i < n; ++i) v[i] = -v[i];
}

// Project out already-accepted kernels and renormalize; returns false when
// the residual has no usable length.
bool orthonormalize(std::vector<double>& v, const std::vector<double>& kernels,
                    int count, int dim) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < count; ++k) {
      const double* kv = kernels.data() + static_cast<std::size_t>(k) * dim;
      double dot = 0.0;
      for (int i = 0; i < dim; ++i) dot += v[i] * kv[i];
      for (int i = 0; i < dim; ++i) v[i] -= dot * kv[i];
    }
  }
  double norm2 = 0.0;
  for (int i = 0; i < dim; ++i) norm2 += v[i] * v[i];
  if (norm2 < 1e-12) return false;
  const double inv = 1.0 / std::sqrt(norm2);
  for (int i = 0; i < dim; ++i) v[i] *= inv;
  return true;
}

}  // namespace

std::vector<double> saab_forward(const SaabTransform& t, const std::vector<double>& patch) {
  std::vector<double> coeffs(t.dim, 0.0);
  for (int k = 0; k < t.dim; ++k) {
    const double* kv = t.kernel(k);
    double acc = 0.0;
    for (int i = 0; i < t.dim; ++i) acc += kv[i] * patch[i];
    coeffs[k] = acc;
  }
  return coeffs;
}

std::vector<double> saab_inverse(const SaabTransform& t, const std::vector<double>& coeffs) {
  std::vector<double> patch(t.dim, 0.0);
  for (int k = 0; k < t.dim; ++k) {
    const double* kv = t.kernel(k);
    for (int i = 0; i < t.dim; ++i) patch[i] += kv[i] * coeffs[k];
  }
  return patch;
}

SaabTransform fit_saab(const std::vector<std::vector<double>>& patches, int dim) {
  if (patches.size() < 2)
    throw TrainingError("fit_saab: need at least two training patches");

  SaabTransform t;
  t.dim = dim;
  t.kernels.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  t.eigenvalues.assign(dim, 0.0);
  const double dc = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i) t.kernels[i] = dc;

  // DC-removed patches and their ensemble mean.
  const std::size_t n = patches.size();
  std::vector<double> mean(dim, 0.0);
  std::vector<std::vector<double>> ac(n);
  double dc_energy = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto& p = patches[s];
    double m = std::accumulate(p.begin(), p.end(), 0.0) / dim;
    dc_energy += (m * std::sqrt(static_cast<double>(dim))) *
                 (m * std::sqrt(static_cast<double>(dim)));
    ac[s].resize(dim);
    for (int i = 0; i < dim; ++i) {
      ac[s][i] = p[i] - m;
      mean[i] += ac[s][i];
    }
  }
  for (double& m : mean) m /= static_cast<double>(n);
  t.eigenvalues[0] = dc_energy / static_cast<double>(n);

  std::vector<double> cov(static_cast<std::size_t>(dim) * dim, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (int r = 0; r < dim; ++r) {
      const double dr = ac[s][r] - mean[r];
      for (int c = r; c < dim; ++c)
        cov[static_cast<std::size_t>(r) * dim + c] += dr * (ac[s][c] - mean[c]);
    }
  }
  double trace = 0.0;
  for (int r = 0; r < dim; ++r) {
    for (int c = r; c < dim; ++c) {
      cov[static_cast<std::size_t>(r) * dim + c] /= static_cast<double>(n);
      cov[static_cast<std::size_t>(c) * dim + r] = cov[static_cast<std::size_t>(r) * dim + c];
    }
    trace += cov[static_cast<std::size_t>(r) * dim + r];
  }

  int accepted = 1;  // DC already installed
  if (trace >= 1e-12) {
    std::vector<double> eigval, eigvec;
    jacobi_eigen(cov, dim, eigval, eigvec);
    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (eigval[a] != eigval[b]) return eigval[a] > eigval[b];
      return a < b;
    });
    for (int oi = 0; oi < dim && accepted < dim; ++oi) {
      std::vector<double> v(eigvec.begin() + static_cast<std::size_t>(order[oi]) * dim,
                            eigvec.begin() + static_cast<std::size_t>(order[oi] + 1) * dim);
      if (!orthonormalize(v, t.kernels, accepted, dim)) continue;
      fix_sign(v.data(), dim);
      std::copy(v.begin(), v.end(),
                t.kernels.begin() + static_cast<std::size_t>(accepted) * dim);
      t.eigenvalues[accepted] = std::max(0.0, eigval[order[oi]]);
      ++accepted;
    }
  }
  // Complete from the canonical basis when training provided too few
  // informative directions (or none at all).
  for (int b = 0; b < dim && accepted < dim; ++b) {
    std::vector<double> v(dim, 0.0);
    v[b] = 1.0;
    if (!orthonormalize(v, t.kernels, accepted, dim)) continue;
    fix_sign(v.data(), dim);
    std::copy(v.begin(), v.end(),
              t.kernels.begin() + static_cast<std::size_t>(accepted) * dim);
    ++accepted;
  }
  return t;
}

}  // namespace gpcgc
