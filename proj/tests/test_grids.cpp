#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geomest/grid.hpp"

using namespace geomest;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("circle grid basics") {
  CHECK_THROWS_AS(Grid::circle(6), std::invalid_argument);
  CHECK_THROWS_AS(Grid::circle(9), std::invalid_argument);
  Grid g = Grid::circle(64);
  double wsum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) wsum += g.weight(i);
  CHECK(std::abs(wsum - 2.0 * kPi) < 1e-12 * 2.0 * kPi);
}

TEST_CASE("derivative of a constant is zero") {
  for (auto make : {+[] { return Grid::circle(32); },
                    +[] { return Grid::annulus(1.0, 0.25, 16, 32); },
                    +[] { return Grid::rect(0.0, 1.0, 0.0, 2.0, 17, 17); },
                    +[] { return Grid::torus(2.0 * kPi, 2.0 * kPi, 16, 16); }}) {
    Grid g = make();
    GridFunction f = GridFunction::sample_real(g, [](const Eigen::Vector2d&) { return 3.7; });
    for (int axis = 0; axis < g.num_axes(); ++axis) {
      GridFunction d = f.derivative(axis);
      double worst = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, d.norm_at(i));
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("spectral derivative of sin on the circle") {
  Grid g = Grid::circle(256);
  GridFunction f =
      GridFunction::sample_real(g, [](const Eigen::Vector2d& c) { return std::sin(c[0]); });
  GridFunction d = f.derivative(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(d.at(i)[0].real() - std::cos(g.coords(i)[0])));
  CHECK(worst < 1e-10);
}

TEST_CASE("radial derivative of rho^2 on an annulus") {
  Grid g = Grid::annulus(1.0, 0.25, 128, 16);
  GridFunction f =
      GridFunction::sample_real(g, [](const Eigen::Vector2d& c) { return c[0] * c[0]; });
  GridFunction d = f.derivative(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(d.at(i)[0].real() - 2.0 * g.coords(i)[0]));
  CHECK(worst < 1e-6);
}

TEST_CASE("quadrature of 1 matches areas") {
  Grid an = Grid::annulus(1.0, 0.5, 64, 64);
  GridFunction one = GridFunction::sample_real(an, [](const Eigen::Vector2d&) { return 1.0; });
  double area = quadrature(one);
  double exact = kPi * (1.0 - 0.25);
  CHECK(std::abs(area - exact) < 1e-6 * exact);

  Grid rc = Grid::rect(-1.0, 2.0, 0.0, 0.5, 33, 9);
  GridFunction onr = GridFunction::sample_real(rc, [](const Eigen::Vector2d&) { return 1.0; });
  CHECK(std::abs(quadrature(onr) - 1.5) < 1e-10 * 1.5);
}

TEST_CASE("odd modes integrate to zero") {
  Grid g = Grid::circle(64);
  GridFunction f =
      GridFunction::sample_real(g, [](const Eigen::Vector2d& c) { return std::sin(c[0]); });
  CHECK(std::abs(quadrature(f)) < 1e-12);

  Grid an = Grid::annulus(2.0, 0.1, 32, 64);
  GridFunction fc =
      GridFunction::sample_real(an, [](const Eigen::Vector2d& c) { return std::cos(c[1]); });
  CHECK(std::abs(quadrature(fc)) < 1e-10);
}

TEST_CASE("torus spectral derivative is exact on a resolved mode") {
  Grid g = Grid::torus(2.0 * kPi, 2.0 * kPi, 32, 32);
  GridFunction f = GridFunction::sample_real(
      g, [](const Eigen::Vector2d& c) { return std::sin(3.0 * c[0]) * std::cos(2.0 * c[1]); });
  GridFunction dx = f.derivative(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Eigen::Vector2d c = g.coords(i);
    worst = std::max(worst,
                     std::abs(dx.at(i)[0].real() - 3.0 * std::cos(3.0 * c[0]) * std::cos(2.0 * c[1])));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("bounded-axis differentiation is 4th order under refinement") {
  auto err_at = [](int n) {
    Grid g = Grid::rect(0.0, 1.0, 0.0, 1.0, n, 5);
    GridFunction f = GridFunction::sample_real(
        g, [](const Eigen::Vector2d& c) { return std::exp(std::sin(3.0 * c[0])); });
    GridFunction d = f.derivative(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = g.coords(i)[0];
      double exact = 3.0 * std::cos(3.0 * s) * std::exp(std::sin(3.0 * s));
      worst = std::max(worst, std::abs(d.at(i)[0].real() - exact));
    }
    return worst;
  };
  double e1 = err_at(33), e2 = err_at(65);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("exactness on cubics along bounded axes") {
  Grid g = Grid::rect(0.0, 2.0, 0.0, 1.0, 9, 5);
  GridFunction f = GridFunction::sample_real(g, [](const Eigen::Vector2d& c) {
    return 1.0 + c[0] - 2.0 * c[0] * c[0] + 0.5 * c[0] * c[0] * c[0];
  });
  GridFunction d = f.derivative(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = g.coords(i)[0];
    worst = std::max(worst, std::abs(d.at(i)[0].real() - (1.0 - 4.0 * s + 1.5 * s * s)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("Parseval consistency on the circle") {
  Grid g = Grid::circle(128);
  GridFunction f = GridFunction::sample_real(g, [](const Eigen::Vector2d& c) {
    return 0.7 * std::sin(c[0]) - 1.3 * std::cos(5.0 * c[0]) + 0.2 * std::sin(11.0 * c[0]);
  });
  GridFunction sq(g, 1);
  for (std::size_t i = 0; i < g.size(); ++i)
    sq.values()(static_cast<Eigen::Index>(i), 0) = std::norm(f.at(i)[0]);
  double integral = quadrature(sq);

  std::vector<std::complex<double>> line(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) line[i] = f.at(i)[0];
  detail::dft(line, false);
  double parseval = 0.0;
  for (auto& c : line) parseval += std::norm(c) / (g.size() * (double)g.size());
  parseval *= 2.0 * kPi;
  CHECK(std::abs(integral - parseval) < 1e-10 * std::max(1.0, integral));
}

TEST_CASE("error paths") {
  Grid g = Grid::circle(16);
  GridFunction f = GridFunction::sample_real(g, [](const Eigen::Vector2d&) { return 1.0; });
  CHECK_THROWS_AS(f.derivative(1), std::invalid_argument);

  GridFunction bad = f;
  bad.values()(3, 0) = std::nan("");
  CHECK_THROWS_AS(quadrature(bad), NumericError);

  CHECK_THROWS_AS(Grid::annulus(1.0, 1.0, 16, 16), std::invalid_argument);
  CHECK_THROWS_AS(Grid::rect(0.0, 1.0, 0.0, 1.0, 4, 8), std::invalid_argument);
}

TEST_CASE("annulus with r = 0 stays finite") {
  Grid g = Grid::annulus(1.0, 0.0, 32, 32);
  GridFunction f = GridFunction::sample_real(
      g, [](const Eigen::Vector2d& c) { return std::log(c[0]); });  // singular at origin only
  double q = quadrature(f);
  CHECK(std::isfinite(q));
  // integral of log(rho) over the unit disk = -pi/2
  CHECK(std::abs(q - (-kPi / 2.0)) < 2e-3);
}
