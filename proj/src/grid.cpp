#include "ricci_spectra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ricci {

struct Background::Tables {
  Surface kind{};
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  std::vector<double> weights;
  std::vector<double> conductances;
  std::vector<double> sin_nodes;
  std::vector<double> cos_nodes;
  double total_area = 0.0;
};

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Background::Background(std::shared_ptr<const Tables> tables) : tables_(std::move(tables)) {}

Background Background::round_sphere(int nodes) {
  if (nodes < 3) throw std::invalid_argument("sphere grid needs at least 3 nodes, got " + std::to_string(nodes));
  auto t = std::make_shared<Tables>();
  t->kind = Surface::RoundSphere;
  t->nx = nodes;
  t->ny = 1;
  t->hx = kPi / (nodes + 1);
  t->hy = t->hx;
  const double h = t->hx;

  t->sin_nodes.resize(nodes);
  t->cos_nodes.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double s = (i + 1) * h;
    t->sin_nodes[i] = std::sin(s);
    t->cos_nodes[i] = std::cos(s);
  }

  // Cell i spans [(i+1/2)h, (i+3/2)h], except the two end cells which
  // extend to the poles.
  t->weights.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double upper_cos = (i == 0) ? 1.0 : std::cos((i + 0.5) * h);
    const double lower_cos = (i == nodes - 1) ? -1.0 : std::cos((i + 1.5) * h);
    t->weights[i] = 2.0 * kPi * (upper_cos - lower_cos);
  }

  t->conductances.resize(nodes - 1);
  for (int k = 0; k + 1 < nodes; ++k) t->conductances[k] = 2.0 * kPi * std::sin((k + 1.5) * h) / h;

  double area = 0.0;
  for (double w : t->weights) area += w;
  t->total_area = area;
  return Background(std::move(t));
}

Background Background::flat_torus(int nx, int ny) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("torus grid needs at least 3x3 nodes");
  auto t = std::make_shared<Tables>();
  t->kind = Surface::FlatTorus;
  t->nx = nx;
  t->ny = ny;
  t->hx = 2.0 * kPi / nx;
  t->hy = 2.0 * kPi / ny;
  t->weights.assign(static_cast<std::size_t>(nx) * ny, t->hx * t->hy);
  double area = 0.0;
  for (double w : t->weights) area += w;
  t->total_area = area;
  return Background(std::move(t));
}

Surface Background::kind() const noexcept { return tables_->kind; }
int Background::nx() const noexcept { return tables_->nx; }
int Background::ny() const noexcept { return tables_->ny; }
std::size_t Background::size() const noexcept { return static_cast<std::size_t>(tables_->nx) * tables_->ny; }
double Background::hx() const noexcept { return tables_->hx; }
double Background::hy() const noexcept { return tables_->hy; }
double Background::min_spacing() const noexcept { return std::min(tables_->hx, tables_->hy); }

double Background::background_curvature() const noexcept { return is_sphere() ? 2.0 : 0.0; }
int Background::euler_characteristic() const noexcept { return is_sphere() ? 2 : 0; }

double Background::x(int i) const noexcept { return is_sphere() ? (i + 1) * tables_->hx : i * tables_->hx; }
double Background::y(int j) const noexcept { return is_sphere() ? 0.0 : j * tables_->hy; }

std::span<const double> Background::weights() const noexcept { return tables_->weights; }
double Background::total_area() const noexcept { return tables_->total_area; }
std::span<const double> Background::conductances() const noexcept { return tables_->conductances; }
std::span<const double> Background::sin_nodes() const noexcept { return tables_->sin_nodes; }
std::span<const double> Background::cos_nodes() const noexcept { return tables_->cos_nodes; }

bool Background::operator==(const Background& other) const noexcept {
  return tables_ == other.tables_ ||
         (kind() == other.kind() && nx() == other.nx() && ny() == other.ny());
}

ScalarField ScalarField::sample(const Background& bg, const std::function<double(double, double)>& fn) {
  ScalarField out(bg.size());
  for (int j = 0; j < bg.ny(); ++j)
    for (int i = 0; i < bg.nx(); ++i) out[static_cast<std::size_t>(j) * bg.nx() + i] = fn(bg.x(i), bg.y(j));
  return out;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ConformalMetric::ConformalMetric(Background background)
    : background_(std::move(background)), u_(background_.size(), 0.0) {}

ConformalMetric::ConformalMetric(Background background, ScalarField u)
    : background_(std::move(background)), u_(std::move(u)) {
  if (u_.size() != background_.size())
    throw std::invalid_argument("conformal potential has " + std::to_string(u_.size()) + " values, grid has " +
                                std::to_string(background_.size()));
}

ScalarField ConformalMetric::conformal_factor() const {
  ScalarField out(u_.size());
  for (std::size_t k = 0; k < u_.size(); ++k) out[k] = std::exp(2.0 * u_[k]);
  return out;
}

double ConformalMetric::min_conformal_factor() const { return std::exp(2.0 * u_.min()); }

}  // namespace ricci
