#ifndef GEOMEST_COMPLEXLIN_HPP
#define GEOMEST_COMPLEXLIN_HPP

#include <optional>

#include "geomest/grid.hpp"
#include "geomest/transport.hpp"

namespace geomest {

// Endomorphism field with J(x)^2 = -Id.
struct AlmostComplex {
  int dim = 0;
  std::function<Mat(const Vec&)> J;

  // directional derivative of the matrix field (centered, Richardson)
  Mat dirderiv(const Vec& x, const Vec& v, double h = 1e-4) const;
};

// (0,1)-valued connection form on a trivial C^n bundle over a planar domain
// with the standard rotation j. Only theta(e1) is stored; theta(e2) = -i theta(e1),
// so theta(j v) = -i theta(v) holds by construction.
struct DbarForm {
  int rank = 0;
  std::function<MatC(const Eigen::Vector2d&)> theta_e1;

  MatC theta(const Eigen::Vector2d& z, const Eigen::Vector2d& v) const {
    return std::complex<double>(v[0], -v[1]) * theta_e1(z);
  }
  // (0,1) projection of a full connection form given at (e1, e2).
  static DbarForm project(int rank,
                          std::function<MatC(const Eigen::Vector2d&)> th1,
                          std::function<MatC(const Eigen::Vector2d&)> th2);
};

// Smooth map from a 2-D grid into a target chart, with planar partials.
struct MapU {
  Grid domain;
  int target_dim = 0;
  GridFunction values;
  GridFunction du1, du2;  // d/dx, d/dy of the map

  static MapU sample(const Grid& grid, int target_dim,
                     const std::function<Vec(const Eigen::Vector2d&)>& u,
                     const std::function<Mat(const Eigen::Vector2d&)>& du_cart = nullptr);

  Vec value(std::size_t node) const { return values.at(node).real(); }
  Vec d1(std::size_t node) const { return du1.at(node).real(); }
  Vec d2(std::size_t node) const { return du2.at(node).real(); }
};

// One-form field on a 2-D grid, stored by its values on (e1, e2).
struct FormField {
  GridFunction v1, v2;
  FormField(const Grid& g, int comps) : v1(g, comps), v2(g, comps) {}

  // max over nodes of |value(j v) + J value(v)| with v = e1 (type check)
  double antiholomorphic_defect(const std::function<Mat(std::size_t)>& J_at) const;
};

// dbar u = (du + J(u) du j)/2 and its (1,0) counterpart.
FormField dbar_map(const MapU& u, const AlmostComplex& J);
FormField del_map(const MapU& u, const AlmostComplex& J);

// Frame-coefficient operator on a trivial C^n bundle: dbar f + theta f.
FormField bundle_dbar(const DbarForm& theta, const GridFunction& f);

// Real matrix of the total-space structure at ((x, c)):
//   (w1, w2) -> (j w1, i w2 + 2 i theta(w1) c).
// theta is given by its values on (e1, e2) and must be of (0,1) type for j,
// theta(j v) = -i theta(v). Row/column layout:
// (w1_x, w1_y, Re c_1, Im c_1, ..., Re c_n, Im c_n).
Mat induced_total_J(const MatC& theta_e1, const MatC& theta_e2, const Mat& domain_j,
                    const VecC& c);

// (0,1) projection of a raw pair (theta(e1), theta(e2)) for the structure j.
std::pair<MatC, MatC> project_01(const MatC& th1, const MatC& th2, const Mat& j);

// Nijenhuis tensor from constant coordinate extensions of v and w.
Vec nijenhuis(const AlmostComplex& J, const Vec& x, const Vec& v, const Vec& w,
              double h = 1e-4);

// Covariant derivative of J as an endomorphism: dJ(v) + [theta(v), J(x)].
Mat nabla_J(const TangentConnection& conn, const AlmostComplex& J, const Vec& x, const Vec& v,
            double h = 1e-4);

// nabla^J_v xi = nabla_v xi - 1/2 J (nabla_v J) xi; commutes with J.
TangentConnection j_linear_connection(const TangentConnection& conn, const AlmostComplex& J,
                                      double h = 1e-4);

// Parametrized circle inside a target chart.
struct ChartCircle {
  int n = 64;
  std::function<Vec(double)> z;
  std::function<Vec(double)> dz;
};

// (D xi)(X) = (nabla_X xi + J nabla_{JX} xi)/2 - J (nabla_xi J)(X)/2 at the
// circle nodes, X the curve tangent. The connection must be torsion-free.
std::vector<Vec> d_js_operator(const AlmostComplex& J, const TangentConnection& conn,
                               const ChartCircle& sigma, const EField& xi,
                               double torsion_tol = 1e-10);

// Lie bracket of evaluator fields at x.
Vec field_bracket(const EField& f, const EField& g, const Vec& x);
EField apply_structure(const AlmostComplex& J, const EField& f);

// ([zeta, xi] + J [J zeta, xi])/2 at x.
Vec d_js_bracket_form(const AlmostComplex& J, const EField& zeta, const EField& xi,
                      const Vec& x);

// Four-bracket combination ([z,x] + J[Jz,x] - J[z,Jx] + [Jz,Jx])/4 and the
// dbar-route expression it must equal.
Vec d_js_four_bracket(const AlmostComplex& J, const EField& zeta, const EField& xi,
                      const Vec& x);
Vec d_js_dbar_route(const AlmostComplex& J, const TangentConnection& conn, const EField& xi,
                    const Vec& x, const Vec& X, double h = 1e-4);

// Pullback covariant derivative of a section along u, planar directions.
std::pair<GridFunction, GridFunction> pullback_covariant(const TangentConnection& conn,
                                                         const MapU& u,
                                                         const GridFunction& xi);

// Generalized CR operator D = dbar_nabla + A on a bundle modeled on the
// target tangent space with fiber structure Jfib.
struct CROperator {
  TangentConnection conn;
  std::function<Mat(const Vec&)> Jfib;
  // zeroth-order term A(x)(w, xi); null means A = 0
  std::function<Vec(const Vec&, const Vec&, const Vec&)> A;
};

// D_u xi = dbar_{nabla^u} xi + A(u)(del u, xi) per node.
FormField cr_pullback(const CROperator& D, const MapU& u, const GridFunction& xi);

struct NonlinearDbar {
  FormField dbar_exp;   // Pi^{-1} dbar(exp_u xi)
  FormField dbar_u;     // dbar u
  FormField linear;     // torsion-corrected linear term at u
  FormField nonlinear;  // dbar_exp - dbar_u - linear
};

// Expansion of the dbar-operator around u along the exponential-like map.
// Needs a J-linear connection (checked) and xi inside the plateau.
NonlinearDbar nonlinear_dbar(const MapU& u, const GridFunction& xi, const ExpLikeMap& E,
                             const AlmostComplex& J, double nablaJ_tol = 1e-8);

struct AdmissibilityReport {
  double mult_worst = 0.0;   // max |f eta|_p / (|f|_C0 |eta|_p)
  double jiso_worst = 0.0;   // max relative defect of |eta o j|_p = |eta|_p
  double deriv_worst = 0.0;  // max |nabla^u xi|_p / |xi|_{p,1}
  double c0 = 0.0;           // smallest admissible C0
};

AdmissibilityReport admissibility_check(const TangentConnection& conn, const MapU& u, double p,
                                        const std::vector<GridFunction>& sections,
                                        const std::vector<FormField>& forms,
                                        const std::vector<GridFunction>& scalars,
                                        const std::vector<Mat>& fiber_gram);

}  // namespace geomest

#endif
