#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>

#include "ricci_spectra/kernels.hpp"

namespace ricci::kernels {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }
int thread_count() { return g_threads.load(); }

namespace parallel {

namespace {

// Sphere neighbours with the pole closure folded in.
inline double sphere_left(std::span<const double> phi, int i) {
  return i > 0 ? phi[i - 1] : (4.0 * phi[0] - phi[1]) / 3.0;
}

inline double sphere_right(std::span<const double> phi, int i, int n) {
  return i + 1 < n ? phi[i + 1] : (4.0 * phi[n - 1] - phi[n - 2]) / 3.0;
}

inline double sphere_laplacian_at(std::span<const double> a, std::span<const double> w,
                                  std::span<const double> phi, int i, int n) {
  const double up = (i + 1 < n) ? a[i] * (phi[i + 1] - phi[i]) : 0.0;
  const double down = (i > 0) ? a[i - 1] * (phi[i] - phi[i - 1]) : 0.0;
  return (up - down) / w[i];
}

struct TorusRows {
  int nx;
  int ny;

  std::size_t row(int j) const { return static_cast<std::size_t>(j) * nx; }
  std::size_t row_above(int j) const { return static_cast<std::size_t>(j + 1 == ny ? 0 : j + 1) * nx; }
  std::size_t row_below(int j) const { return static_cast<std::size_t>(j == 0 ? ny - 1 : j - 1) * nx; }
  int east(int i) const { return i + 1 == nx ? 0 : i + 1; }
  int west(int i) const { return i == 0 ? nx - 1 : i - 1; }
};

inline double torus_laplacian_at(const double* c, const double* n, const double* s, int i, int e, int w,
                                 double inv_hx2, double inv_hy2) {
  const double ci = c[i];
  return (c[e] - 2.0 * ci + c[w]) * inv_hx2 + (n[i] - 2.0 * ci + s[i]) * inv_hy2;
}

}  // namespace

void background_laplacian(const Background& bg, std::span<const double> phi, std::span<double> out) {
  const int threads = thread_count();
  if (bg.is_sphere()) {
    const int n = bg.nx();
    const auto a = bg.conductances();
    const auto w = bg.weights();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < n; ++i) out[i] = sphere_laplacian_at(a, w, phi, i, n);
    return;
  }
  const TorusRows rows{bg.nx(), bg.ny()};
  const double inv_hx2 = 1.0 / (bg.hx() * bg.hx());
  const double inv_hy2 = 1.0 / (bg.hy() * bg.hy());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int j = 0; j < rows.ny; ++j) {
    const double* c = phi.data() + rows.row(j);
    const double* nrow = phi.data() + rows.row_above(j);
    const double* srow = phi.data() + rows.row_below(j);
    double* o = out.data() + rows.row(j);
    for (int i = 0; i < rows.nx; ++i)
      o[i] = torus_laplacian_at(c, nrow, srow, i, rows.east(i), rows.west(i), inv_hx2, inv_hy2);
  }
}

void first_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dx,
                       std::span<double> dy) {
  const int threads = thread_count();
  if (bg.is_sphere()) {
    const int n = bg.nx();
    const double inv_2h = 1.0 / (2.0 * bg.hx());
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < n; ++i) {
      dx[i] = (sphere_right(phi, i, n) - sphere_left(phi, i)) * inv_2h;
      dy[i] = 0.0;
    }
    return;
  }
  const TorusRows rows{bg.nx(), bg.ny()};
  const double inv_2hx = 1.0 / (2.0 * bg.hx());
  const double inv_2hy = 1.0 / (2.0 * bg.hy());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int j = 0; j < rows.ny; ++j) {
    const double* c = phi.data() + rows.row(j);
    const double* nrow = phi.data() + rows.row_above(j);
    const double* srow = phi.data() + rows.row_below(j);
    double* ox = dx.data() + rows.row(j);
    double* oy = dy.data() + rows.row(j);
    for (int i = 0; i < rows.nx; ++i) {
      ox[i] = (c[rows.east(i)] - c[rows.west(i)]) * inv_2hx;
      oy[i] = (nrow[i] - srow[i]) * inv_2hy;
    }
  }
}

void second_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dxx,
                        std::span<double> dxy, std::span<double> dyy) {
  const int threads = thread_count();
  if (bg.is_sphere()) {
    const int n = bg.nx();
    const double inv_h2 = 1.0 / (bg.hx() * bg.hx());
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < n; ++i) {
      dxx[i] = (sphere_right(phi, i, n) - 2.0 * phi[i] + sphere_left(phi, i)) * inv_h2;
      dxy[i] = 0.0;
      dyy[i] = 0.0;
    }
    return;
  }
  const TorusRows rows{bg.nx(), bg.ny()};
  const double inv_hx2 = 1.0 / (bg.hx() * bg.hx());
  const double inv_hy2 = 1.0 / (bg.hy() * bg.hy());
  const double inv_4hxhy = 1.0 / (4.0 * bg.hx() * bg.hy());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int j = 0; j < rows.ny; ++j) {
    const double* c = phi.data() + rows.row(j);
    const double* nrow = phi.data() + rows.row_above(j);
    const double* srow = phi.data() + rows.row_below(j);
    double* oxx = dxx.data() + rows.row(j);
    double* oxy = dxy.data() + rows.row(j);
    double* oyy = dyy.data() + rows.row(j);
    for (int i = 0; i < rows.nx; ++i) {
      const int e = rows.east(i);
      const int w = rows.west(i);
      const double ci = c[i];
      oxx[i] = (c[e] - 2.0 * ci + c[w]) * inv_hx2;
      oyy[i] = (nrow[i] - 2.0 * ci + srow[i]) * inv_hy2;
      oxy[i] = (nrow[e] - nrow[w] - srow[e] + srow[w]) * inv_4hxhy;
    }
  }
}

void scalar_curvature(const Background& bg, std::span<const double> u, std::span<double> out) {
  const int threads = thread_count();
  const double r0 = bg.background_curvature();
  if (bg.is_sphere()) {
    const int n = bg.nx();
    const auto a = bg.conductances();
    const auto w = bg.weights();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < n; ++i) out[i] = std::exp(-2.0 * u[i]) * (r0 - 2.0 * sphere_laplacian_at(a, w, u, i, n));
    return;
  }
  const TorusRows rows{bg.nx(), bg.ny()};
  const double inv_hx2 = 1.0 / (bg.hx() * bg.hx());
  const double inv_hy2 = 1.0 / (bg.hy() * bg.hy());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int j = 0; j < rows.ny; ++j) {
    const double* c = u.data() + rows.row(j);
    const double* nrow = u.data() + rows.row_above(j);
    const double* srow = u.data() + rows.row_below(j);
    double* o = out.data() + rows.row(j);
    for (int i = 0; i < rows.nx; ++i) {
      const double lap = torus_laplacian_at(c, nrow, srow, i, rows.east(i), rows.west(i), inv_hx2, inv_hy2);
      o[i] = std::exp(-2.0 * c[i]) * (r0 - 2.0 * lap);
    }
  }
}

void flow_velocity(const Background& bg, std::span<const double> u, double r_avg, std::span<double> out) {
  scalar_curvature(bg, u, out);
  const int threads = thread_count();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = 0.5 * (r_avg - out[k]);
}

void axpy(std::span<const double> u, double a, std::span<const double> k, std::span<double> out) {
  const int threads = thread_count();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = u[i] + a * k[i];
}

void rk4_combine(std::span<const double> u, double dt, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, std::span<double> out) {
  const int threads = thread_count();
  const double w = dt / 6.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = u[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace parallel
}  // namespace ricci::kernels
