#ifndef GEOMEST_TRANSPORT_HPP
#define GEOMEST_TRANSPORT_HPP

#include <functional>
#include <limits>

#include "geomest/builtin.hpp"
#include "geomest/riemann.hpp"

namespace geomest {

// Connection on the tangent bundle given by its coordinate-frame one-form,
// theta(x, v), linear in v. Wraps ConnectionCoeffs as well as derived
// connections that never materialize coefficients.
struct TangentConnection {
  int dim = 0;
  std::function<Mat(const Vec&, const Vec&)> theta;

  // theta(v)w - theta(w)v (coordinate-frame torsion applied to vectors)
  Vec torsion(const Vec& x, const Vec& v, const Vec& w) const {
    return theta(x, v) * w - theta(x, w) * v;
  }
};

TangentConnection tangent_connection(const ConnectionCoeffs& conn);

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients.
// The observer sees every accepted step and may throw.
Vec ode45(const std::function<Vec(double, const Vec&)>& f, double t0, double t1, Vec y0,
          double atol = 1e-10, double rtol = 1e-9,
          double max_step = std::numeric_limits<double>::infinity(),
          const std::function<void(double, const Vec&)>* observer = nullptr);

struct PathCurve {
  double a = 0.0, b = 1.0;
  std::function<Vec(double)> x;
  std::function<Vec(double)> dx;
  int n_steps = 64;  // resolution floor for the transport integrator
  // Axis-aligned chart periods (e.g. 2*pi in the azimuth): endpoints are
  // identified modulo these, so winding loops count as closed.
  std::vector<Vec> periods;

  bool closed(double tol = 1e-10) const {
    Vec d = x(b) - x(a);
    for (const Vec& p : periods) {
      double n2 = p.squaredNorm();
      if (n2 > 0.0) d -= std::round(d.dot(p) / n2) * p;
    }
    return d.norm() <= tol;
  }
};

// Solves Pi' = -theta(x'(t)) Pi, Pi(a) = I.
Mat parallel_transport_matrix(const TangentConnection& conn, const PathCurve& path,
                              double atol = 1e-10, double rtol = 1e-9);
Vec parallel_transport(const TangentConnection& conn, const PathCurve& path, const Vec& v0,
                       double atol = 1e-10, double rtol = 1e-9);

// Operator norm of A on (E_x, g(x)): |G^{1/2} A G^{-1/2}|_2.
double opnorm_g(const Mat& A, const Mat& G);

// Rotation angle of a g-orthogonal 2x2 transport matrix.
double rotation_angle_g(const Mat& Pi, const Mat& G);

// Geodesic flow map with a radial cutoff profile. The profile is 1 up to
// plateau_radius, 0 beyond support_radius, quintic in between, so the map
// is globally defined and restricts to the identity on the zero section.
struct ExpLikeMap {
  TangentConnection conn;
  ChartBox box;
  double plateau_radius = std::numeric_limits<double>::infinity();
  double support_radius = std::numeric_limits<double>::infinity();
  double atol = 1e-10, rtol = 1e-9;

  double cutoff(double s) const;
};

ExpLikeMap make_exp(const BuiltinManifold& m, const Vec& center);
ExpLikeMap make_exp(const TangentConnection& conn, const ChartBox& box,
                    double plateau, double support);

// gamma'' + theta(gamma')gamma' = 0 from (x, eta(|v|) v), evaluated at t = 1.
// Throws DomainEscapeError (with exit time) if the trajectory leaves the box.
Vec exp_map(const ExpLikeMap& E, const Vec& x, const Vec& v);

struct ExpTransport {
  Vec end;  // exp(x, v)
  Mat Pi;   // transport along t -> exp(t v), fiber at x to fiber at end
};
ExpTransport exp_and_transport(const ExpLikeMap& E, const Vec& x, const Vec& v);

struct HolonomyResult {
  Mat transport;
  double defect = 0.0;             // |Pi - I| in the g-operator norm at the base point
  double bound = 0.0;              // curvature-based right-hand side
  double ratio = 0.0;              // defect / bound (0 when both vanish)
  double rotation_angle = 0.0;     // 2-D fibers only
  double structural = 0.0;         // constant-free integral term
};

// Smooth map of a parameter rectangle into a chart with analytic partials.
struct MapRect {
  double a = 0.0, b = 1.0, c = 0.0, d = 1.0;
  std::function<Vec(double, double)> u;
  std::function<Vec(double, double)> us, ut;
};

// Transport around the positively oriented boundary of the rectangle.
// bound = k^2 * sup|R| * integral |u_s||u_t| ds dt, sup over an image sample
// of the g-operator norm of the curvature on orthonormal pairs.
HolonomyResult rectangle_holonomy(const MapRect& u, const ConnectionCoeffs& conn,
                                  const MetricField& g, int quad_n = 33, int curv_samples = 10,
                                  int transport_steps = 64);

struct LoopHolonomy {
  Mat transport;
  double defect = 0.0;
  double rotation_angle = 0.0;
  double length_l1 = 0.0;       // |d alpha|_1
  double energy_term = 0.0;     // (b-a) |d alpha|_2^2
  double structural = 0.0;      // min of the two
};

// Closed-loop transport defect with both candidate structural bounds.
LoopHolonomy loop_holonomy_bound(const PathCurve& alpha, const ConnectionCoeffs& conn,
                                 const MetricField& g);

struct DerivativeDefect {
  double lhs = 0.0;         // |D/dt(Pi_a(t) xi(t))|_0 - Pi_a(0) xi'(0)|
  double structural = 0.0;  // |a(0)| |a'(0)| |xi(0)|
};

// Covariant t-derivative realized by transporting back along t -> exp(a(t))
// and differencing.
DerivativeDefect transport_derivative_defect(const Vec& x,
                                             const std::function<Vec(double)>& alpha_tilde,
                                             const std::function<Vec(double)>& xi,
                                             const ExpLikeMap& E, const MetricField& g,
                                             double h = 1e-3);

struct PhiExpansion {
  Vec phi;        // Pi_{w0}^{-1} d/ds exp(xi(s)) at s = 0
  Vec residual;   // phi - (v + w1 - T(v, w0))
  double lhs = 0.0;         // |residual|_g
  double structural = 0.0;  // |v||w0|^2 + |w0||w1|
};

// Derivative of the exponential map along a curve realizing (v; w0, w1),
// by finite differences; w0 must lie inside the plateau.
PhiExpansion phi_expansion(const Vec& x, const Vec& v, const Vec& w0, const Vec& w1,
                           const ExpLikeMap& E, const MetricField& g, double h = 1e-3);

struct PhiLipschitz {
  double lhs = 0.0;
  double structural = 0.0;
};

PhiLipschitz phi_lipschitz_check(const Vec& x, const Vec& v, const Vec& w0, const Vec& w1,
                                 const Vec& w0p, const Vec& w1p, const ExpLikeMap& E,
                                 const MetricField& g, double h = 1e-3);

}  // namespace geomest

#endif
