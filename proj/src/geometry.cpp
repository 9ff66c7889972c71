#include "ricci_spectra/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ricci_spectra/kernels.hpp"

namespace ricci {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": field sizes differ");
}

struct FirstDerivatives {
  ScalarField dx;
  ScalarField dy;
};

FirstDerivatives first_derivatives(const Background& bg, const ScalarField& phi) {
  FirstDerivatives d{ScalarField(phi.size()), ScalarField(phi.size())};
  kernels::parallel::first_derivatives(bg, phi.span(), d.dx.span(), d.dy.span());
  return d;
}

}  // namespace

ScalarField scalar_curvature(const ConformalMetric& g) {
  ScalarField r(g.size());
  kernels::parallel::scalar_curvature(g.background(), g.u().span(), r.span());
  return r;
}

SymTensorField metric_tensor(const ConformalMetric& g) {
  const auto& bg = g.background();
  SymTensorField t(g.size());
  const auto sin_s = bg.sin_nodes();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double e2u = std::exp(2.0 * g.u()[k]);
    t.xx[k] = e2u;
    t.xy[k] = 0.0;
    t.yy[k] = bg.is_sphere() ? e2u * sin_s[k] * sin_s[k] : e2u;
  }
  return t;
}

SymTensorField ricci_tensor(const ConformalMetric& g) {
  const ScalarField r = scalar_curvature(g);
  SymTensorField t = metric_tensor(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double half_r = 0.5 * r[k];
    t.xx[k] *= half_r;
    t.xy[k] *= half_r;
    t.yy[k] *= half_r;
  }
  return t;
}

ScalarField laplacian(const ConformalMetric& g, const ScalarField& phi) {
  require_same_size(g.size(), phi.size(), "laplacian");
  ScalarField out(phi.size());
  kernels::parallel::background_laplacian(g.background(), phi.span(), out.span());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::exp(-2.0 * g.u()[k]);
  return out;
}

ScalarField gradient_norm_sq(const ConformalMetric& g, const ScalarField& phi) {
  require_same_size(g.size(), phi.size(), "gradient_norm_sq");
  const auto d = first_derivatives(g.background(), phi);
  ScalarField out(phi.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::exp(-2.0 * g.u()[k]) * (d.dx[k] * d.dx[k] + d.dy[k] * d.dy[k]);
  return out;
}

ScalarField gradient_pairing(const ConformalMetric& g, const SymTensorField& t, const ScalarField& phi,
                             const ScalarField& psi) {
  require_same_size(g.size(), phi.size(), "gradient_pairing");
  require_same_size(g.size(), psi.size(), "gradient_pairing");
  require_same_size(g.size(), t.size(), "gradient_pairing");
  const auto& bg = g.background();
  const auto a = first_derivatives(bg, phi);
  const auto b = first_derivatives(bg, psi);
  ScalarField out(g.size());
  if (bg.is_sphere()) {
    // Axisymmetric: only the s-derivatives are nonzero, and g^{ss} = e^{-2u}.
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = std::exp(-4.0 * g.u()[k]) * t.xx[k] * a.dx[k] * b.dx[k];
    return out;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double contraction =
        t.xx[k] * a.dx[k] * b.dx[k] + t.xy[k] * (a.dx[k] * b.dy[k] + a.dy[k] * b.dx[k]) + t.yy[k] * a.dy[k] * b.dy[k];
    out[k] = std::exp(-4.0 * g.u()[k]) * contraction;
  }
  return out;
}

SymTensorField hessian(const ConformalMetric& g, const ScalarField& phi) {
  require_same_size(g.size(), phi.size(), "hessian");
  const auto& bg = g.background();
  const std::size_t n = g.size();
  const auto dphi = first_derivatives(bg, phi);
  const auto du = first_derivatives(bg, g.u());
  SymTensorField h(n);
  kernels::parallel::second_derivatives(bg, phi.span(), h.xx.span(), h.xy.span(), h.yy.span());

  if (bg.is_sphere()) {
    // Gamma^s_ss = u_s, Gamma^s_tt = -sin s (cos s + sin s u_s), Gamma^s_st = 0.
    const auto sin_s = bg.sin_nodes();
    const auto cos_s = bg.cos_nodes();
    for (std::size_t k = 0; k < n; ++k) {
      h.xx[k] -= du.dx[k] * dphi.dx[k];
      h.xy[k] = 0.0;
      h.yy[k] = sin_s[k] * (cos_s[k] + sin_s[k] * du.dx[k]) * dphi.dx[k];
    }
    return h;
  }
  // Flat background: Gamma^x_xx = u_x, Gamma^y_xx = -u_y, Gamma^x_xy = u_y,
  // Gamma^y_xy = u_x, Gamma^x_yy = -u_x, Gamma^y_yy = u_y.
  for (std::size_t k = 0; k < n; ++k) {
    const double ux_px = du.dx[k] * dphi.dx[k];
    const double uy_py = du.dy[k] * dphi.dy[k];
    h.xx[k] += -ux_px + uy_py;
    h.yy[k] += ux_px - uy_py;
    h.xy[k] -= du.dy[k] * dphi.dx[k] + du.dx[k] * dphi.dy[k];
  }
  return h;
}

ScalarField tensor_norm_sq(const ConformalMetric& g, const SymTensorField& t) {
  require_same_size(g.size(), t.size(), "tensor_norm_sq");
  const auto& bg = g.background();
  ScalarField out(g.size());
  if (bg.is_sphere()) {
    const auto sin_s = bg.sin_nodes();
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double sin2 = sin_s[k] * sin_s[k];
      const double st = t.xy[k] / sin_s[k];
      const double tt = t.yy[k] / sin2;
      out[k] = std::exp(-4.0 * g.u()[k]) * (t.xx[k] * t.xx[k] + 2.0 * st * st + tt * tt);
    }
    return out;
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::exp(-4.0 * g.u()[k]) * (t.xx[k] * t.xx[k] + 2.0 * t.xy[k] * t.xy[k] + t.yy[k] * t.yy[k]);
  return out;
}

ScalarField tensor_inner(const ConformalMetric& g, const SymTensorField& a, const SymTensorField& b) {
  require_same_size(g.size(), a.size(), "tensor_inner");
  require_same_size(g.size(), b.size(), "tensor_inner");
  const auto& bg = g.background();
  ScalarField out(g.size());
  if (bg.is_sphere()) {
    const auto sin_s = bg.sin_nodes();
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double sin2 = sin_s[k] * sin_s[k];
      out[k] = std::exp(-4.0 * g.u()[k]) *
               (a.xx[k] * b.xx[k] + 2.0 * a.xy[k] * b.xy[k] / sin2 + a.yy[k] * b.yy[k] / (sin2 * sin2));
    }
    return out;
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::exp(-4.0 * g.u()[k]) * (a.xx[k] * b.xx[k] + 2.0 * a.xy[k] * b.xy[k] + a.yy[k] * b.yy[k]);
  return out;
}

double integrate(const ConformalMetric& g, const ScalarField& phi) {
  require_same_size(g.size(), phi.size(), "integrate");
  const auto w = g.background().weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) sum += w[k] * std::exp(2.0 * g.u()[k]) * phi[k];
  return sum;
}

double volume(const ConformalMetric& g) { return integrate(g, ScalarField(g.size(), 1.0)); }

double average_scalar_curvature(const ConformalMetric& g) {
  return integrate(g, scalar_curvature(g)) / volume(g);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_size(a.size(), b.size(), "operator+");
  ScalarField out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_size(a.size(), b.size(), "operator-");
  ScalarField out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_size(a.size(), b.size(), "operator*");
  ScalarField out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

ScalarField operator*(double a, const ScalarField& b) {
  ScalarField out(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) out[k] = a * b[k];
  return out;
}

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) {
  SymTensorField out;
  out.xx = a.xx + b.xx;
  out.xy = a.xy + b.xy;
  out.yy = a.yy + b.yy;
  return out;
}

SymTensorField operator-(const SymTensorField& a, const SymTensorField& b) {
  SymTensorField out;
  out.xx = a.xx - b.xx;
  out.xy = a.xy - b.xy;
  out.yy = a.yy - b.yy;
  return out;
}

SymTensorField operator*(double a, const SymTensorField& t) {
  SymTensorField out;
  out.xx = a * t.xx;
  out.xy = a * t.xy;
  out.yy = a * t.yy;
  return out;
}

ScalarField exp_neg(const ScalarField& phi) {
  ScalarField out(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) out[k] = std::exp(-phi[k]);
  return out;
}

}  // namespace ricci
