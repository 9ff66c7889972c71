#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ricci {

enum class Surface { RoundSphere, FlatTorus };

/// Fixed background surface and its grid.
///
/// RoundSphere: axisymmetric unit sphere, nodes at colatitude s_i = (i+1)h,
/// i = 0..N-1, h = pi/(N+1). Poles are not nodes; node 0 and node N-1 own
/// the polar caps so that cell areas tile the sphere exactly.
///
/// FlatTorus: periodic grid x_i = i*hx, y_j = j*hy on [0, 2pi)^2, node index
/// j*nx + i.
class Background {
 public:
  static Background round_sphere(int nodes);
  static Background flat_torus(int nx, int ny);

  Surface kind() const noexcept;
  bool is_sphere() const noexcept { return kind() == Surface::RoundSphere; }

  int nx() const noexcept;
  /// 1 on the sphere.
  int ny() const noexcept;
  std::size_t size() const noexcept;
  double hx() const noexcept;
  /// Equal to hx on the sphere (unused there).
  double hy() const noexcept;
  double min_spacing() const noexcept;

  /// Scalar curvature of the background metric (2 or 0).
  double background_curvature() const noexcept;
  int euler_characteristic() const noexcept;

  /// Colatitude (sphere) or x coordinate of column i.
  double x(int i) const noexcept;
  double y(int j) const noexcept;

  /// Cell areas of the background metric. The azimuthal 2pi is included.
  std::span<const double> weights() const noexcept;
  double total_area() const noexcept;

  /// Sphere only: 2pi sin(s_face)/h for the face between node k and k+1.
  std::span<const double> conductances() const noexcept;
  std::span<const double> sin_nodes() const noexcept;
  std::span<const double> cos_nodes() const noexcept;

  bool operator==(const Background& other) const noexcept;

 private:
  struct Tables;
  explicit Background(std::shared_ptr<const Tables> tables);
  std::shared_ptr<const Tables> tables_;
};

/// Real values on the nodes of a Background.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit ScalarField(std::vector<double> values) : values_(std::move(values)) {}

  /// Samples fn(x, y) at every node (y = 0 on the sphere).
  static ScalarField sample(const Background& bg, const std::function<double(double, double)>& fn);

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  double min() const;
  double max() const;
  double max_abs() const;

  bool operator==(const ScalarField&) const = default;

 private:
  std::vector<double> values_;
};

/// Symmetric 2-tensor in background coordinates; (ss, s-theta, theta-theta)
/// on the sphere, (xx, xy, yy) on the torus.
struct SymTensorField {
  ScalarField xx;
  ScalarField xy;
  ScalarField yy;

  SymTensorField() = default;
  explicit SymTensorField(std::size_t n) : xx(n), xy(n), yy(n) {}

  std::size_t size() const noexcept { return xx.size(); }
};

/// g = e^{2u} g0 over a fixed background.
class ConformalMetric {
 public:
  explicit ConformalMetric(Background background);
  ConformalMetric(Background background, ScalarField u);

  const Background& background() const noexcept { return background_; }
  const ScalarField& u() const noexcept { return u_; }
  std::size_t size() const noexcept { return u_.size(); }

  /// e^{2u} at every node.
  ScalarField conformal_factor() const;
  double min_conformal_factor() const;

 private:
  Background background_;
  ScalarField u_;
};

}  // namespace ricci
