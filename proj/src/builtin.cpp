#include "geomest/builtin.hpp"

#include <cmath>
#include <numbers>

namespace geomest {

BuiltinManifold builtin_euclidean(int n) {
  BuiltinManifold m;
  m.name = "euclidean";
  m.dim = n;
  m.metric.dim = n;
  m.metric.g = [n](const Vec&) { return Mat(Mat::Identity(n, n)); };
  m.metric.dg = [n](const Vec&) { return std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n)); };
  m.levi_civita.dim = n;
  m.levi_civita.provenance = ConnectionCoeffs::Provenance::LeviCivita;
  m.levi_civita.coeffs = [n](const Vec&) {
    return std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n));
  };
  m.box.lo = Vec::Constant(n, -10.0);
  m.box.hi = Vec::Constant(n, 10.0);
  if (n % 2 == 0) {
    m.complex_structure = [n](const Vec&) {
      Mat J = Mat::Zero(n, n);
      for (int i = 0; i < n / 2; ++i) {
        J(2 * i, 2 * i + 1) = -1.0;
        J(2 * i + 1, 2 * i) = 1.0;
      }
      return J;
    };
  }
  return m;
}

BuiltinManifold builtin_sphere() {
  BuiltinManifold m;
  m.name = "sphere";
  m.dim = 2;
  m.metric.dim = 2;
  m.metric.g = [](const Vec& x) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    double s = std::sin(x[0]);
    g(1, 1) = s * s;
    return g;
  };
  m.metric.dg = [](const Vec& x) {
    std::vector<Mat> d(2, Mat::Zero(2, 2));
    d[0](1, 1) = 2.0 * std::sin(x[0]) * std::cos(x[0]);
    return d;
  };
  m.levi_civita.dim = 2;
  m.levi_civita.provenance = ConnectionCoeffs::Provenance::LeviCivita;
  // Gamma^theta_{phi phi} = -sin cos, Gamma^phi_{theta phi} = cot
  m.levi_civita.coeffs = [](const Vec& x) {
    std::vector<Mat> G(2, Mat::Zero(2, 2));
    double s = std::sin(x[0]), c = std::cos(x[0]);
    G[0](1, 1) = -s * c;
    G[1](0, 1) = c / s;
    G[1](1, 0) = c / s;
    return G;
  };
  m.box.lo = Vec(2);
  m.box.hi = Vec(2);
  m.box.lo << 0.05, -50.0;
  m.box.hi << std::numbers::pi - 0.05, 50.0;
  // g-orthogonal rotation by 90 degrees: J d_theta = (1/sin) d_phi.
  m.complex_structure = [](const Vec& x) {
    Mat J = Mat::Zero(2, 2);
    double s = std::sin(x[0]);
    J(0, 1) = -s;
    J(1, 0) = 1.0 / s;
    return J;
  };
  return m;
}

BuiltinManifold builtin_halfplane() {
  BuiltinManifold m;
  m.name = "halfplane";
  m.dim = 2;
  m.metric.dim = 2;
  m.metric.g = [](const Vec& x) {
    double y2 = x[1] * x[1];
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0 / y2;
    g(1, 1) = 1.0 / y2;
    return g;
  };
  m.metric.dg = [](const Vec& x) {
    std::vector<Mat> d(2, Mat::Zero(2, 2));
    double y3 = x[1] * x[1] * x[1];
    d[1](0, 0) = -2.0 / y3;
    d[1](1, 1) = -2.0 / y3;
    return d;
  };
  m.levi_civita.dim = 2;
  m.levi_civita.provenance = ConnectionCoeffs::Provenance::LeviCivita;
  // Gamma^x_{xy} = Gamma^x_{yx} = -1/y, Gamma^y_{xx} = 1/y, Gamma^y_{yy} = -1/y
  m.levi_civita.coeffs = [](const Vec& x) {
    std::vector<Mat> G(2, Mat::Zero(2, 2));
    double iy = 1.0 / x[1];
    G[0](0, 1) = -iy;
    G[0](1, 0) = -iy;
    G[1](0, 0) = iy;
    G[1](1, 1) = -iy;
    return G;
  };
  m.box.lo = Vec(2);
  m.box.hi = Vec(2);
  m.box.lo << -20.0, 0.05;
  m.box.hi << 20.0, 40.0;
  m.complex_structure = [](const Vec&) {
    Mat J = Mat::Zero(2, 2);
    J(0, 1) = -1.0;
    J(1, 0) = 1.0;
    return J;
  };
  return m;
}

BuiltinManifold builtin_flat_torus(double period_x, double period_y) {
  BuiltinManifold m = builtin_euclidean(2);
  m.name = "flat_torus";
  m.box.lo = Vec(2);
  m.box.hi = Vec(2);
  m.box.lo << -2.0 * period_x, -2.0 * period_y;
  m.box.hi << 2.0 * period_x, 2.0 * period_y;
  return m;
}

double sphere_distance(const Vec& a, const Vec& b) {
  double c = std::cos(a[0]) * std::cos(b[0]) +
             std::sin(a[0]) * std::sin(b[0]) * std::cos(a[1] - b[1]);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace geomest
