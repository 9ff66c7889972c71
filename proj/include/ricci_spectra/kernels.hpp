#pragma once

#include <span>

#include "ricci_spectra/grid.hpp"

// Per-node stencil kernels. Two implementations with identical signatures
// and identical floating-point expression order:
//
//   kernels::reference  straightforward serial loops with explicit index
//                       wrapping; kept as the testing baseline.
//   kernels::parallel   OpenMP row-parallel loops with the periodic wrap
//                       hoisted out of the inner loop.
//
// Both must agree bitwise. Reductions are not kernels: they live in the
// geometry layer and are summed serially in node order.
//
// On the sphere, values at the poles are closed by the even quadratic fit
// phi(pole) = (4 phi_1 - phi_2) / 3, which is exact for a + b s^2.

namespace ricci::kernels {

namespace reference {

/// Background Laplace-Beltrami (conservative finite volume).
void background_laplacian(const Background& bg, std::span<const double> phi, std::span<double> out);
/// Centered first derivatives; dy is zero on the sphere.
void first_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dx,
                       std::span<double> dy);
/// Centered second derivatives; dxy and dyy are zero on the sphere.
void second_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dxx,
                        std::span<double> dxy, std::span<double> dyy);
/// R = e^{-2u} (R0 - 2 Lap0 u)
void scalar_curvature(const Background& bg, std::span<const double> u, std::span<double> out);
/// du/dt = (r - R) / 2; r = 0 is the unnormalized flow.
void flow_velocity(const Background& bg, std::span<const double> u, double r_avg, std::span<double> out);
/// out = u + a k
void axpy(std::span<const double> u, double a, std::span<const double> k, std::span<double> out);
/// out = u + dt/6 (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const double> u, double dt, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, std::span<double> out);

}  // namespace reference

namespace parallel {

void background_laplacian(const Background& bg, std::span<const double> phi, std::span<double> out);
void first_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dx,
                       std::span<double> dy);
void second_derivatives(const Background& bg, std::span<const double> phi, std::span<double> dxx,
                        std::span<double> dxy, std::span<double> dyy);
void scalar_curvature(const Background& bg, std::span<const double> u, std::span<double> out);
void flow_velocity(const Background& bg, std::span<const double> u, double r_avg, std::span<double> out);
void axpy(std::span<const double> u, double a, std::span<const double> k, std::span<double> out);
void rk4_combine(std::span<const double> u, double dt, std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4, std::span<double> out);

}  // namespace parallel

/// Thread count for the parallel kernels; values below 1 mean one thread.
void set_thread_count(int threads);
int thread_count();

}  // namespace ricci::kernels
