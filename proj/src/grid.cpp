#include "geomest/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geomest {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid Grid::circle(int n_points) {
  if (n_points < 8 || n_points % 2 != 0)
    throw std::invalid_argument("circle grid needs n >= 8 and even");
  Grid g;
  g.kind_ = Kind::Circle;
  g.num_axes_ = 1;
  g.n_[0] = n_points;
  g.periodic_[0] = true;
  g.origin_[0] = 0.0;
  g.length_[0] = kTwoPi;
  g.spacing_[0] = kTwoPi / n_points;
  g.nodes_ = static_cast<std::size_t>(n_points);
  g.weights_.assign(g.nodes_, kTwoPi / n_points);
  return g;
}

Grid Grid::annulus(double R, double r, int n_rho, int n_theta) {
  if (!(r >= 0.0 && r < R)) throw std::invalid_argument("annulus needs 0 <= r < R");
  if (n_rho < 5 || n_theta < 8 || n_theta % 2 != 0)
    throw std::invalid_argument("annulus grid too small (n_rho >= 5, n_theta >= 8 even)");
  Grid g;
  g.kind_ = Kind::Annulus;
  g.num_axes_ = 2;
  g.n_[0] = n_rho;
  g.n_[1] = n_theta;
  g.periodic_[0] = false;
  g.periodic_[1] = true;
  double drho = (R - r) / n_rho;
  g.origin_[0] = r + 0.5 * drho;
  g.spacing_[0] = drho;
  g.length_[0] = R - r;
  g.cell_centered_[0] = true;
  g.origin_[1] = 0.0;
  g.spacing_[1] = kTwoPi / n_theta;
  g.length_[1] = kTwoPi;
  g.R_ = R;
  g.r_ = r;
  g.nodes_ = static_cast<std::size_t>(n_rho) * n_theta;
  g.weights_.resize(g.nodes_);
  double dtheta = g.spacing_[1];
  for (int i = 0; i < n_rho; ++i) {
    double rho = g.origin_[0] + i * drho;
    for (int j = 0; j < n_theta; ++j) g.weights_[g.index(i, j)] = rho * drho * dtheta;
  }
  return g;
}

Grid Grid::rect(double a, double b, double c, double d, int n_s, int n_t) {
  if (!(a < b && c < d)) throw std::invalid_argument("rect bounds must be ordered");
  if (n_s < 5 || n_t < 5) throw std::invalid_argument("rect grid needs >= 5 nodes per axis");
  Grid g;
  g.kind_ = Kind::Rect;
  g.num_axes_ = 2;
  g.n_[0] = n_s;
  g.n_[1] = n_t;
  g.origin_[0] = a;
  g.origin_[1] = c;
  g.spacing_[0] = (b - a) / (n_s - 1);
  g.spacing_[1] = (d - c) / (n_t - 1);
  g.length_[0] = b - a;
  g.length_[1] = d - c;
  g.nodes_ = static_cast<std::size_t>(n_s) * n_t;
  g.weights_.resize(g.nodes_);
  auto w1d = [](int i, int n, double h) { return (i == 0 || i == n - 1) ? 0.5 * h : h; };
  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_t; ++j)
      g.weights_[g.index(i, j)] = w1d(i, n_s, g.spacing_[0]) * w1d(j, n_t, g.spacing_[1]);
  return g;
}

Grid Grid::torus(double period_x, double period_y, int n_x, int n_y) {
  if (!(period_x > 0.0 && period_y > 0.0)) throw std::invalid_argument("torus periods must be positive");
  if (n_x < 8 || n_y < 8 || n_x % 2 != 0 || n_y % 2 != 0)
    throw std::invalid_argument("torus grid needs n >= 8 and even per axis");
  Grid g;
  g.kind_ = Kind::Torus;
  g.num_axes_ = 2;
  g.n_[0] = n_x;
  g.n_[1] = n_y;
  g.periodic_[0] = g.periodic_[1] = true;
  g.origin_[0] = g.origin_[1] = 0.0;
  g.spacing_[0] = period_x / n_x;
  g.spacing_[1] = period_y / n_y;
  g.length_[0] = period_x;
  g.length_[1] = period_y;
  g.nodes_ = static_cast<std::size_t>(n_x) * n_y;
  g.weights_.assign(g.nodes_, g.spacing_[0] * g.spacing_[1]);
  return g;
}

int Grid::axis_size(int axis) const {
  if (axis < 0 || axis >= num_axes_) throw std::invalid_argument("axis out of range");
  return n_[axis];
}

bool Grid::axis_periodic(int axis) const {
  if (axis < 0 || axis >= num_axes_) throw std::invalid_argument("axis out of range");
  return periodic_[axis];
}

double Grid::axis_spacing(int axis) const {
  if (axis < 0 || axis >= num_axes_) throw std::invalid_argument("axis out of range");
  return spacing_[axis];
}

double Grid::axis_length(int axis) const {
  if (axis < 0 || axis >= num_axes_) throw std::invalid_argument("axis out of range");
  return length_[axis];
}

std::size_t Grid::index(int i0, int i1) const {
  return static_cast<std::size_t>(i0) * (num_axes_ == 2 ? n_[1] : 1) + i1;
}

Eigen::Vector2d Grid::coords(std::size_t node) const {
  Eigen::Vector2d c(0.0, 0.0);
  if (num_axes_ == 1) {
    c[0] = origin_[0] + spacing_[0] * static_cast<double>(node);
  } else {
    int i0 = static_cast<int>(node / n_[1]);
    int i1 = static_cast<int>(node % n_[1]);
    c[0] = origin_[0] + spacing_[0] * i0;
    c[1] = origin_[1] + spacing_[1] * i1;
  }
  return c;
}

Eigen::Vector2d Grid::cartesian(std::size_t node) const {
  Eigen::Vector2d c = coords(node);
  switch (kind_) {
    case Kind::Circle:
      return {std::cos(c[0]), std::sin(c[0])};
    case Kind::Annulus:
      return {c[0] * std::cos(c[1]), c[0] * std::sin(c[1])};
    default:
      return c;
  }
}

bool Grid::same_layout(const Grid& other) const {
  return kind_ == other.kind_ && n_[0] == other.n_[0] && n_[1] == other.n_[1] &&
         origin_[0] == other.origin_[0] && origin_[1] == other.origin_[1] &&
         spacing_[0] == other.spacing_[0] && spacing_[1] == other.spacing_[1];
}

namespace detail {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = kTwoPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

void dft_naive(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  double sgn = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t m = 0; m < n; ++m) {
    double ang = sgn * kTwoPi * static_cast<double>(m) / static_cast<double>(n);
    twiddle[m] = {std::cos(ang), std::sin(ang)};
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) acc += a[m] * twiddle[k * m % n];
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  a = std::move(out);
}

}  // namespace

void dft(std::vector<std::complex<double>>& data, bool inverse) {
  if (is_pow2(data.size()))
    fft_radix2(data, inverse);
  else
    dft_naive(data, inverse);
}

}  // namespace detail

GridFunction::GridFunction(const Grid& grid, int components)
    : grid_(grid), comps_(components),
      values_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.size()), components)) {}

GridFunction GridFunction::sample(
    const Grid& grid, int components,
    const std::function<Eigen::VectorXcd(const Eigen::Vector2d&)>& f) {
  GridFunction out(grid, components);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.values_.row(static_cast<Eigen::Index>(i)) = f(grid.coords(i)).transpose();
  return out;
}

GridFunction GridFunction::sample_real(
    const Grid& grid, const std::function<double(const Eigen::Vector2d&)>& f) {
  GridFunction out(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.values_(static_cast<Eigen::Index>(i), 0) = f(grid.coords(i));
  return out;
}

GridFunction GridFunction::derivative(int axis) const {
  if (axis < 0 || axis >= grid_.num_axes()) throw std::invalid_argument("axis out of range");
  GridFunction out(grid_, comps_);
  const int n = grid_.axis_size(axis);
  const int n_other = grid_.num_axes() == 2 ? grid_.axis_size(1 - axis) : 1;
  const double h = grid_.axis_spacing(axis);

  if (grid_.axis_periodic(axis)) {
    // Spectral: multiply mode m by i*m*(2*pi/L); zero the Nyquist mode.
    const double scale = kTwoPi / grid_.axis_length(axis);
    std::vector<std::complex<double>> line(static_cast<std::size_t>(n));
    for (int c = 0; c < comps_; ++c) {
      for (int q = 0; q < n_other; ++q) {
        for (int i = 0; i < n; ++i) {
          std::size_t node = (grid_.num_axes() == 1) ? static_cast<std::size_t>(i)
                             : (axis == 0 ? grid_.index(i, q) : grid_.index(q, i));
          line[static_cast<std::size_t>(i)] = values_(static_cast<Eigen::Index>(node), c);
        }
        detail::dft(line, false);
        for (int m = 0; m < n; ++m) {
          int freq = (m <= n / 2) ? m : m - n;
          if (m == n / 2) freq = 0;  // unambiguous Nyquist
          line[static_cast<std::size_t>(m)] *= std::complex<double>(0.0, freq * scale);
        }
        detail::dft(line, true);
        for (int i = 0; i < n; ++i) {
          std::size_t node = (grid_.num_axes() == 1) ? static_cast<std::size_t>(i)
                             : (axis == 0 ? grid_.index(i, q) : grid_.index(q, i));
          out.values_(static_cast<Eigen::Index>(node), c) = line[static_cast<std::size_t>(i)];
        }
      }
    }
    return out;
  }

  if (n < 5) throw ResolutionError("bounded axis needs >= 5 nodes for the 4th-order stencil");
  auto v = [&](int i, int q, int c) -> std::complex<double> {
    std::size_t node = axis == 0 ? grid_.index(i, q) : grid_.index(q, i);
    return values_(static_cast<Eigen::Index>(node), c);
  };
  for (int c = 0; c < comps_; ++c) {
    for (int q = 0; q < n_other; ++q) {
      for (int i = 0; i < n; ++i) {
        std::complex<double> d;
        if (i >= 2 && i <= n - 3) {
          d = (-v(i + 2, q, c) + 8.0 * v(i + 1, q, c) - 8.0 * v(i - 1, q, c) + v(i - 2, q, c)) /
              (12.0 * h);
        } else if (i == 0) {
          d = (-25.0 * v(0, q, c) + 48.0 * v(1, q, c) - 36.0 * v(2, q, c) + 16.0 * v(3, q, c) -
               3.0 * v(4, q, c)) /
              (12.0 * h);
        } else if (i == 1) {
          d = (-3.0 * v(0, q, c) - 10.0 * v(1, q, c) + 18.0 * v(2, q, c) - 6.0 * v(3, q, c) +
               v(4, q, c)) /
              (12.0 * h);
        } else if (i == n - 2) {
          d = (3.0 * v(n - 1, q, c) + 10.0 * v(n - 2, q, c) - 18.0 * v(n - 3, q, c) +
               6.0 * v(n - 4, q, c) - v(n - 5, q, c)) /
              (12.0 * h);
        } else {
          d = (25.0 * v(n - 1, q, c) - 48.0 * v(n - 2, q, c) + 36.0 * v(n - 3, q, c) -
               16.0 * v(n - 4, q, c) + 3.0 * v(n - 5, q, c)) /
              (12.0 * h);
        }
        std::size_t node = axis == 0 ? grid_.index(i, q) : grid_.index(q, i);
        out.values_(static_cast<Eigen::Index>(node), c) = d;
      }
    }
  }
  return out;
}

std::pair<GridFunction, GridFunction> GridFunction::cartesian_gradient() const {
  if (grid_.num_axes() != 2)
    throw std::invalid_argument("cartesian_gradient needs a 2-D grid");
  GridFunction d0 = derivative(0);
  GridFunction d1 = derivative(1);
  if (grid_.kind() != Grid::Kind::Annulus) return {std::move(d0), std::move(d1)};
  // f_x = cos(t) f_rho - sin(t)/rho f_theta ; f_y = sin(t) f_rho + cos(t)/rho f_theta
  GridFunction fx(grid_, comps_), fy(grid_, comps_);
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    Eigen::Vector2d c = grid_.coords(node);
    double rho = c[0], ct = std::cos(c[1]), st = std::sin(c[1]);
    auto dr = d0.values_.row(static_cast<Eigen::Index>(node));
    auto dt = d1.values_.row(static_cast<Eigen::Index>(node));
    fx.values_.row(static_cast<Eigen::Index>(node)) = ct * dr - (st / rho) * dt;
    fy.values_.row(static_cast<Eigen::Index>(node)) = st * dr + (ct / rho) * dt;
  }
  return {std::move(fx), std::move(fy)};
}

Eigen::VectorXcd GridFunction::integral() const {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(comps_);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    for (int c = 0; c < comps_; ++c) {
      std::complex<double> v = values_(static_cast<Eigen::Index>(i), c);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericError("non-finite value at node " + std::to_string(i));
      acc[c] += grid_.weight(i) * v;
    }
  }
  return acc;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  values_ += other.values_;
  return *this;
}
GridFunction& GridFunction::operator-=(const GridFunction& other) {
  values_ -= other.values_;
  return *this;
}
GridFunction& GridFunction::operator*=(double s) {
  values_ *= s;
  return *this;
}

GridFunction differentiate(const GridFunction& f, int axis) { return f.derivative(axis); }

double quadrature(const GridFunction& f) {
  if (f.components() != 1)
    throw std::invalid_argument("scalar quadrature needs a 1-component function");
  return f.integral()[0].real();
}

}  // namespace geomest
