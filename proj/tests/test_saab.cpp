#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>
#include "gpcgc/saab.hpp"

using namespace gpcgc;

namespace {

std::vector<std::vector<double>> random_patches(int n, int dim, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 3.0);
  std::vector<std::vector<double>> out(static_cast<size_t>(n), std::vector<double>(dim));
  for (auto& p : out)
    for (auto& x : p) x = gauss(rng);
  return out;
}

double dot(const double* a, const double* b, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Covariance of the DC-removed patches about their ensemble mean, computed
// independently of the fitting code.
std::vector<double> dc_removed_covariance(const std::vector<std::vector<double>>& patches,
                                          int dim) {
  const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<std::vector<double>> resid;
  std::vector<double> mean(static_cast<size_t>(dim), 0.0);
  for (const auto& p : patches) {
    double dc = 0;
    for (double x : p) dc += x * inv;
    std::vector<double> r(p);
    for (auto& x : r) x -= dc * inv;
    for (int i = 0; i < dim; ++i) mean[static_cast<size_t>(i)] += r[static_cast<size_t>(i)];
    resid.push_back(std::move(r));
  }
  for (auto& m : mean) m /= static_cast<double>(patches.size());
  std::vector<double> cov(static_cast<size_t>(dim) * dim, 0.0);
  for (const auto& r : resid)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        cov[static_cast<size_t>(i) * dim + j] +=
            (r[static_cast<size_t>(i)] - mean[static_cast<size_t>(i)]) *
            (r[static_cast<size_t>(j)] - mean[static_cast<size_t>(j)]);
  for (auto& c : cov) c /= static_cast<double>(patches.size());
  return cov;
}

}  // namespace

TEST_SUITE("saab") {

TEST_CASE("kernel zero is the constant vector") {
  for (int dim : {4, 16}) {
    const auto t = fit_saab(random_patches(40, dim, 5), dim);
    const double expect = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i) CHECK(t.kernel(0)[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("kernels are orthonormal") {
  const int dim = 16;
  const auto t = fit_saab(random_patches(100, dim, 11), dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b <= a; ++b) {
      const double d = dot(t.kernel(a), t.kernel(b), dim);
      CHECK(std::fabs(d - (a == b ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("AC kernels are eigenvectors of the DC-removed covariance") {
  const int dim = 8;
  const auto patches = random_patches(300, dim, 21);
  const auto t = fit_saab(patches, dim);
  const auto cov = dc_removed_covariance(patches, dim);

  double trace = 0;
  for (int i = 0; i < dim; ++i) trace += cov[static_cast<size_t>(i) * dim + i];
  double eig_sum = 0;

  for (int k = 1; k < dim; ++k) {
    const double* v = t.kernel(k);
    const double lambda = t.eigenvalues[static_cast<size_t>(k)];
    eig_sum += lambda;
    // Residual ||C v - lambda v|| must vanish for a true eigenpair.
    double resid = 0;
    for (int i = 0; i < dim; ++i) {
      double cv = 0;
      for (int j = 0; j < dim; ++j) cv += cov[static_cast<size_t>(i) * dim + j] * v[j];
      resid += (cv - lambda * v[i]) * (cv - lambda * v[i]);
    }
    CHECK(std::sqrt(resid) < 1e-6);
    // Largest-magnitude entry is positive (sign convention).
    int arg = 0;
    for (int i = 1; i < dim; ++i)
      if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
    CHECK(v[arg] > 0.0);
  }
  // DC-removed data is rank dim-1, so the AC eigenvalues absorb the trace.
  CHECK(eig_sum == doctest::Approx(trace).epsilon(1e-9));
  for (int k = 2; k < dim; ++k)
    CHECK(t.eigenvalues[static_cast<size_t>(k)] <=
          t.eigenvalues[static_cast<size_t>(k - 1)] + 1e-12);
}

TEST_CASE("top AC eigenvalue matches power iteration") {
  const int dim = 8;
  const auto patches = random_patches(200, dim, 33);
  const auto t = fit_saab(patches, dim);
  const auto cov = dc_removed_covariance(patches, dim);

  std::mt19937_64 rng(77);
  std::vector<double> v(dim);
  std::normal_distribution<double> gauss;
  for (auto& x : v) x = gauss(rng);
  double lambda = 0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<double> w(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) w[i] += cov[static_cast<size_t>(i) * dim + j] * v[j];
    lambda = std::sqrt(dot(w.data(), w.data(), dim));
    for (int i = 0; i < dim; ++i) v[i] = w[i] / lambda;
  }
  CHECK(t.eigenvalues[1] == doctest::Approx(lambda).epsilon(1e-6));
}

TEST_CASE("forward then inverse reproduces the patch") {
  const int dim = 16;
  const auto t = fit_saab(random_patches(60, dim, 44), dim);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 10.0);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<double> patch(dim);
    for (auto& x : patch) x = gauss(rng);
    const auto coeffs = saab_forward(t, patch);
    const auto back = saab_inverse(t, coeffs);
    REQUIRE(back.size() == patch.size());
    for (int i = 0; i < dim; ++i) CHECK(back[i] == doctest::Approx(patch[i]).epsilon(1e-9));
    // Orthonormality preserves energy in both domains.
    CHECK(dot(coeffs.data(), coeffs.data(), dim) ==
          doctest::Approx(dot(patch.data(), patch.data(), dim)).epsilon(1e-9));
  }
}

TEST_CASE("forward coefficients are plain dot products") {
  const int dim = 4;
  const auto t = fit_saab(random_patches(50, dim, 8), dim);
  const std::vector<double> patch = {1.0, -2.0, 0.5, 7.0};
  const auto coeffs = saab_forward(t, patch);
  for (int k = 0; k < dim; ++k)
    CHECK(coeffs[static_cast<size_t>(k)] ==
          doctest::Approx(dot(t.kernel(k), patch.data(), dim)).epsilon(1e-12));
}

TEST_CASE("constant patches fall back to a canonical completion") {
  const int dim = 4;
  std::vector<std::vector<double>> patches(5, std::vector<double>(dim, 3.0));
  const auto t = fit_saab(patches, dim);
  // Still orthonormal and still invertible.
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b <= a; ++b)
      CHECK(std::fabs(dot(t.kernel(a), t.kernel(b), dim) - (a == b ? 1.0 : 0.0)) < 1e-9);
  const std::vector<double> probe = {4.0, 1.0, -3.0, 2.0};
  const auto back = saab_inverse(t, saab_forward(t, probe));
  for (int i = 0; i < dim; ++i) CHECK(back[i] == doctest::Approx(probe[i]).epsilon(1e-9));
  for (int k = 1; k < dim; ++k) CHECK(t.eigenvalues[static_cast<size_t>(k)] == doctest::Approx(0.0));
}

TEST_CASE("fitting is deterministic") {
  const int dim = 16;
  const auto patches = random_patches(80, dim, 55);
  const auto a = fit_saab(patches, dim);
  const auto b = fit_saab(patches, dim);
  CHECK(a.kernels == b.kernels);
  CHECK(a.eigenvalues == b.eigenvalues);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(fit_saab({}, 4), TrainingError);
  CHECK_THROWS_AS(fit_saab({std::vector<double>(4, 1.0)}, 4), TrainingError);
}

TEST_CASE("eigenvalue slot zero is the mean squared DC coefficient") {
  const int dim = 4;
  const auto patches = random_patches(64, dim, 66);
  const auto t = fit_saab(patches, dim);
  const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
  double acc = 0;
  for (const auto& p : patches) {
    double dc = 0;
    for (double x : p) dc += x * inv;
    acc += dc * dc;
  }
  CHECK(t.eigenvalues[0] == doctest::Approx(acc / patches.size()).epsilon(1e-9));
}

}  // TEST_SUITE
