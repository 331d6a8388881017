#ifndef GEOMEST_GRID_HPP
#define GEOMEST_GRID_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "geomest/errors.hpp"

namespace geomest {

// Structured node set with quadrature weights and per-axis differentiation
// rules. Periodic axes differentiate spectrally, bounded axes with 4th-order
// centered stencils (one-sided closures at the ends).
//
// Node layout is axis0-major: node = i0 * axis_size(1) + i1 for 2-D grids.
class Grid {
 public:
  enum class Kind { Circle, Annulus, Rect, Torus };

  // theta_k = 2*pi*k/n, weight 2*pi/n. n must be >= 8 and even.
  static Grid circle(int n_points);

  // Polar annulus r < rho < R. Radial nodes are cell-centered,
  // rho_i = r + (i+1/2)*drho, so the r = 0 disk never samples the origin.
  static Grid annulus(double R, double r, int n_rho, int n_theta);

  // [a,b] x [c,d], uniform nodes including endpoints, trapezoid weights.
  static Grid rect(double a, double b, double c, double d, int n_s, int n_t);

  // Flat torus with the given periods; both axes periodic.
  static Grid torus(double period_x, double period_y, int n_x, int n_y);

  Kind kind() const { return kind_; }
  int num_axes() const { return num_axes_; }
  int axis_size(int axis) const;
  bool axis_periodic(int axis) const;
  double axis_spacing(int axis) const;
  // Full extent of the axis (2*pi for angles, b-a for bounded spans).
  double axis_length(int axis) const;

  std::size_t size() const { return nodes_; }
  std::size_t index(int i0, int i1 = 0) const;

  // Grid coordinates of a node: (theta), (rho,theta), (s,t) or (x,y).
  Eigen::Vector2d coords(std::size_t node) const;
  // Planar position; for the annulus this applies the polar map.
  Eigen::Vector2d cartesian(std::size_t node) const;
  double weight(std::size_t node) const { return weights_[node]; }
  const std::vector<double>& weights() const { return weights_; }

  double outer_radius() const { return R_; }
  double inner_radius() const { return r_; }

  bool same_layout(const Grid& other) const;

 private:
  Grid() = default;
  Kind kind_ = Kind::Circle;
  int num_axes_ = 1;
  int n_[2] = {0, 0};
  bool periodic_[2] = {false, false};
  double origin_[2] = {0.0, 0.0};
  double spacing_[2] = {0.0, 0.0};
  double length_[2] = {0.0, 0.0};
  bool cell_centered_[2] = {false, false};
  double R_ = 0.0, r_ = 0.0;  // annulus radii
  std::size_t nodes_ = 0;
  std::vector<double> weights_;
};

// Vector-valued sampled function on a Grid. Values are stored as complex;
// real data simply carries zero imaginary parts.
class GridFunction {
 public:
  GridFunction(const Grid& grid, int components);

  static GridFunction sample(
      const Grid& grid, int components,
      const std::function<Eigen::VectorXcd(const Eigen::Vector2d&)>& f);
  static GridFunction sample_real(
      const Grid& grid, const std::function<double(const Eigen::Vector2d&)>& f);

  const Grid& grid() const { return grid_; }
  int components() const { return comps_; }
  std::size_t size() const { return grid_.size(); }

  Eigen::MatrixXcd& values() { return values_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::VectorXcd at(std::size_t node) const { return values_.row(node); }
  double norm_at(std::size_t node) const { return values_.row(node).norm(); }

  // Partial derivative in grid coordinates along the given axis.
  GridFunction derivative(int axis) const;

  // (d/dx, d/dy) in planar coordinates; polar grids apply the chain rule.
  std::pair<GridFunction, GridFunction> cartesian_gradient() const;

  // Componentwise integral sum(w_i * f_i).
  Eigen::VectorXcd integral() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

 private:
  Grid grid_;
  int comps_;
  Eigen::MatrixXcd values_;
};

GridFunction differentiate(const GridFunction& f, int axis);

// Scalar quadrature: sum of weights times (real) values of a 1-component
// function. Throws NumericError naming the node on non-finite input.
double quadrature(const GridFunction& f);

namespace detail {
// In-place FFT on a strided line; radix-2 when possible, O(n^2) DFT otherwise.
void dft(std::vector<std::complex<double>>& data, bool inverse);
}  // namespace detail

}  // namespace geomest

#endif
