#include <cmath>
#include <cstddef>

#include "ricci_spectra/kernels.hpp"

namespace ricci::kernels::reference {

namespace {

std::size_t wrap(int i, int n) { return static_cast<std::size_t>(((i % n) + n) % n); }

// Torus node (i, j) with periodic wrap.
double at(const Background& bg, std::span<const double> phi, int i, int j) {
  return phi[wrap(j, bg.ny()) * static_cast<std::size_t>(bg.nx()) + wrap(i, bg.nx())];
}

// Sphere node i, with pole values from the even quadratic fit.
double sphere_at(std::span<const double> phi, int i) {
  const int n = static_cast<int>(phi.size());
  if (i < 0) return (4.0 * phi[0] - phi[1]) / 3.0;
  if (i >= n) return (4.0 * phi[n - 1] - phi[n - 2]) / 3.0;
  return phi[i];
}

}  // namespace

void background_laplacian(const Background& bg, std::span<const double> phi, std::span<double> out) {
  if (bg.is_sphere()) {
    const int n = bg.nx();
    const auto a = bg.conductances();
    const auto w = bg.weights();
    for (int i = 0; i < n; ++i) {
      const double up = (i + 1 < n) ? a[i] * (phi[i + 1] - phi[i]) : 0.0;
      const double down = (i > 0) ? a[i - 1] * (phi[i] - phi[i - 1]) : 0.0;
      out[i] = (up - down) / w[i];
    }
    return;
  }
  const double inv_hx2 = 1.0 / (bg.hx() * bg.hx());
  const double inv_hy2 = 1.0 / (bg.hy() * bg.hy());
  for (int j = 0; j < bg.ny(); ++j) {
    for (int i = 0; i < bg.nx(); ++i) {
      const double c = at(bg, phi, i, j);
      out[static_cast<std::size_t>(j) * bg.nx() + i] =
          (at(bg, phi, i + 1, j) - 2.0 * c + at(bg, phi, i - 1, j)) * inv_hx2 +
          (at(bg, phi, i, j + 1) - 2.0 * c + at(bg, phi, i, j - 1)) * inv_hy2;
    }
  }
}

void first_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dx,
                       std::span<double> dy) {
  if (bg.is_sphere()) {
    const double inv_2h = 1.0 / (2.0 * bg.hx());
    for (int i = 0; i < bg.nx(); ++i) {
      dx[i] = (sphere_at(phi, i + 1) - sphere_at(phi, i - 1)) * inv_2h;
      dy[i] = 0.0;
    }
    return;
  }
  const double inv_2hx = 1.0 / (2.0 * bg.hx());
  const double inv_2hy = 1.0 / (2.0 * bg.hy());
  for (int j = 0; j < bg.ny(); ++j) {
    for (int i = 0; i < bg.nx(); ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * bg.nx() + i;
      dx[k] = (at(bg, phi, i + 1, j) - at(bg, phi, i - 1, j)) * inv_2hx;
      dy[k] = (at(bg, phi, i, j + 1) - at(bg, phi, i, j - 1)) * inv_2hy;
    }
  }
}

void second_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dxx,
                        std::span<double> dxy, std::span<double> dyy) {
  if (bg.is_sphere()) {
    const double inv_h2 = 1.0 / (bg.hx() * bg.hx());
    for (int i = 0; i < bg.nx(); ++i) {
      dxx[i] = (sphere_at(phi, i + 1) - 2.0 * phi[i] + sphere_at(phi, i - 1)) * inv_h2;
      dxy[i] = 0.0;
      dyy[i] = 0.0;
    }
    return;
  }
  const double inv_hx2 = 1.0 / (bg.hx() * bg.hx());
  const double inv_hy2 = 1.0 / (bg.hy() * bg.hy());
  const double inv_4hxhy = 1.0 / (4.0 * bg.hx() * bg.hy());
  for (int j = 0; j < bg.ny(); ++j) {
    for (int i = 0; i < bg.nx(); ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * bg.nx() + i;
      const double c = at(bg, phi, i, j);
      dxx[k] = (at(bg, phi, i + 1, j) - 2.0 * c + at(bg, phi, i - 1, j)) * inv_hx2;
      dyy[k] = (at(bg, phi, i, j + 1) - 2.0 * c + at(bg, phi, i, j - 1)) * inv_hy2;
      dxy[k] = (at(bg, phi, i + 1, j + 1) - at(bg, phi, i - 1, j + 1) - at(bg, phi, i + 1, j - 1) +
                at(bg, phi, i - 1, j - 1)) *
               inv_4hxhy;
    }
  }
}

void scalar_curvature(const Background& bg, std::span<const double> u, std::span<double> out) {
  background_laplacian(bg, u, out);
  const double r0 = bg.background_curvature();
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = std::exp(-2.0 * u[k]) * (r0 - 2.0 * out[k]);
}

void flow_velocity(const Background& bg, std::span<const double> u, double r_avg, std::span<double> out) {
  scalar_curvature(bg, u, out);
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = 0.5 * (r_avg - out[k]);
}

void axpy(std::span<const double> u, double a, std::span<const double> k, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + a * k[i];
}

void rk4_combine(std::span<const double> u, double dt, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, std::span<double> out) {
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace ricci::kernels::reference
