#ifndef GEOMEST_RIEMANN_HPP
#define GEOMEST_RIEMANN_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "geomest/errors.hpp"

namespace geomest {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

// Smooth symmetric positive-definite bilinear form on a chart.
struct MetricField {
  int dim = 0;
  std::function<Mat(const Vec&)> g;
  // Optional analytic partials: dg(x)[i] = d g / d x_i. When absent,
  // centered differences with step fd_step are used.
  std::function<std::vector<Mat>(const Vec&)> dg;
  double fd_step = 1e-5;
};

// Hermitian metric on a complex bundle in a fixed frame.
struct HermitianMetricField {
  int rank = 0;
  std::function<MatC(const Vec&)> g;
  std::function<std::vector<MatC>(const Vec&)> dg;
  double fd_step = 1e-5;
};

// Christoffel coefficients Gamma^k_ij on a chart; coeffs(x)[k](i,j).
struct ConnectionCoeffs {
  enum class Provenance { LeviCivita, User, Perturbed };
  int dim = 0;
  std::function<std::vector<Mat>(const Vec&)> coeffs;
  Provenance provenance = Provenance::User;

  // theta(v)^k_j = sum_i Gamma^k_ij v^i
  Mat form(const Vec& x, const Vec& v) const;
};

// Matrix-valued connection one-form relative to a frame; linear in v.
struct ConnectionForm {
  int rank = 0;
  int chart_dim = 0;
  std::function<MatC(const Vec& x, const Vec& v)> theta;
};

// Section of a bundle in fiber coordinates relative to a fixed frame,
// with an optional analytic Jacobian (rows: fiber, cols: chart).
struct EField {
  int fiber_dim = 0;
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jac;

  Mat jacobian(const Vec& x, double h = 1e-6) const;
  Vec dirderiv(const Vec& x, const Vec& v, double h = 1e-6) const;
};

// Levi-Civita coefficients from the metric:
//   Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
// Throws DegenerateMetricError when g(x) fails a Cholesky factorization.
std::vector<Mat> christoffel(const MetricField& m, const Vec& x);

ConnectionCoeffs levi_civita_connection(const MetricField& m);

// T(v,w)^k = (Gamma^k_ij - Gamma^k_ji) v^i w^j
Vec torsion(const ConnectionCoeffs& conn, const Vec& x, const Vec& v, const Vec& w);

// Matrix of R(v,w) acting on the fiber, with the convention
// R(v,w)xi = nabla_v nabla_w xi - nabla_w nabla_v xi for coordinate v, w.
Mat curvature(const ConnectionCoeffs& conn, const Vec& x, const Vec& v, const Vec& w,
              double h = 1e-5);

// Residual of metric compatibility in a frame:
//   M_ij = sum_k (g_ik theta(v)^k_j + g_jk theta(v)^k_i) - d g_ij(v).
Mat metric_compat_residual(const ConnectionForm& theta, const MetricField& g_frame,
                           const Vec& x, const Vec& v);

// Hermitian variant: M_ij = sum_k (g_ik theta^k_j + conj(g_jk) conj(theta^k_i)) - dg_ij(v).
MatC hermitian_compat_residual(const ConnectionForm& theta, const HermitianMetricField& g_frame,
                               const Vec& x, const Vec& v);

// Difference of two connections as a one-form: (x,v) -> Gamma1(v) - Gamma2(v).
std::function<Mat(const Vec&, const Vec&)> connection_difference(const ConnectionCoeffs& a,
                                                                 const ConnectionCoeffs& b);

// d xi(v) + theta(v) xi(x); theta supplied as coefficients or a form.
Vec covariant_derivative(const ConnectionCoeffs& conn, const EField& xi, const Vec& x,
                         const Vec& v);
Vec covariant_derivative(const std::function<Mat(const Vec&, const Vec&)>& theta,
                         const EField& xi, const Vec& x, const Vec& v);

struct Splitting {
  Vec horizontal;  // base velocity
  Vec vertical;    // delta + theta(v) e
};

// Decomposition of a total-space tangent (v, delta) at fiber point e.
Splitting horizontal_splitting(const std::function<Mat(const Vec&, const Vec&)>& theta,
                               const Vec& x, const Vec& e, const Vec& v, const Vec& delta);

// Coordinate-frame coefficients as a form provider.
std::function<Mat(const Vec&, const Vec&)> as_form(const ConnectionCoeffs& conn);

// Connection one-form in a new frame F (columns = frame vectors):
//   theta'(v) = F^{-1} (d_v F + theta(v) F).
ConnectionForm frame_connection_form(const ConnectionCoeffs& conn,
                                     const std::function<Mat(const Vec&)>& frame,
                                     double h = 1e-6);

}  // namespace geomest

#endif
