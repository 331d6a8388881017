#ifndef GEOMEST_BUILTIN_HPP
#define GEOMEST_BUILTIN_HPP

#include <string>

#include "geomest/riemann.hpp"

namespace geomest {

struct ChartBox {
  Vec lo, hi;
  bool contains(const Vec& x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
    return true;
  }
  double margin(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i)
      m = std::min(m, std::min(x[i] - lo[i], hi[i] - x[i]));
    return m;
  }
};

// Chart-level model of a target manifold with closed-form metric data.
struct BuiltinManifold {
  std::string name;
  int dim = 0;
  MetricField metric;            // analytic g and dg
  ConnectionCoeffs levi_civita;  // analytic coefficients
  ChartBox box;
  std::function<Mat(const Vec&)> complex_structure;  // empty when n/a
};

// Flat R^n, identity metric.
BuiltinManifold builtin_euclidean(int n);

// Round unit sphere in the (theta, phi) chart, g = diag(1, sin^2 theta).
// Poles excluded by 0.05 rad; phi left wide so loops can wind.
BuiltinManifold builtin_sphere();

// Hyperbolic upper half-plane, g = diag(1,1)/y^2.
BuiltinManifold builtin_halfplane();

// Flat torus chart (metric is identity; periodicity handled by the caller).
BuiltinManifold builtin_flat_torus(double period_x, double period_y);

// Geodesic distance between chart points of the unit sphere.
double sphere_distance(const Vec& a, const Vec& b);

}  // namespace geomest

#endif
