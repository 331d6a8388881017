#include "geomest/complexlin.hpp"

#include <cmath>
#include <numbers>

#include "geomest/norms.hpp"

namespace geomest {

Mat AlmostComplex::dirderiv(const Vec& x, const Vec& v, double h) const {
  double s = v.norm();
  if (s == 0.0) return Mat::Zero(dim, dim);
  Vec dir = v / s;
  auto diff = [&](double step) {
    return Mat((J(x + step * dir) - J(x - step * dir)) / (2.0 * step));
  };
  Mat dh = diff(h), dh2 = diff(0.5 * h);
  return s * (4.0 * dh2 - dh) / 3.0;  // Richardson
}

DbarForm DbarForm::project(int rank, std::function<MatC(const Eigen::Vector2d&)> th1,
                           std::function<MatC(const Eigen::Vector2d&)> th2) {
  DbarForm f;
  f.rank = rank;
  f.theta_e1 = [th1, th2](const Eigen::Vector2d& z) {
    return MatC(0.5 * (th1(z) + std::complex<double>(0.0, 1.0) * th2(z)));
  };
  return f;
}

MapU MapU::sample(const Grid& grid, int target_dim,
                  const std::function<Vec(const Eigen::Vector2d&)>& u,
                  const std::function<Mat(const Eigen::Vector2d&)>& du_cart) {
  MapU out{grid, target_dim, GridFunction(grid, target_dim), GridFunction(grid, target_dim),
           GridFunction(grid, target_dim)};
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.values.values().row(static_cast<Eigen::Index>(i)) =
        u(grid.coords(i)).cast<std::complex<double>>().transpose();
  if (du_cart) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Mat d = du_cart(grid.coords(i));
      out.du1.values().row(static_cast<Eigen::Index>(i)) =
          d.col(0).cast<std::complex<double>>().transpose();
      out.du2.values().row(static_cast<Eigen::Index>(i)) =
          d.col(1).cast<std::complex<double>>().transpose();
    }
  } else {
    auto grads = out.values.cartesian_gradient();
    out.du1 = std::move(grads.first);
    out.du2 = std::move(grads.second);
  }
  return out;
}

double FormField::antiholomorphic_defect(const std::function<Mat(std::size_t)>& J_at) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    Eigen::VectorXcd a = v1.at(i), b = v2.at(i);
    Mat J = J_at(i);
    Eigen::VectorXcd Ja = (J * a.real()).cast<std::complex<double>>() +
                          std::complex<double>(0, 1) * (J * a.imag()).cast<std::complex<double>>();
    worst = std::max(worst, (b + Ja).norm());
  }
  return worst;
}

FormField dbar_map(const MapU& u, const AlmostComplex& J) {
  FormField out(u.domain, u.target_dim);
  for (std::size_t i = 0; i < u.domain.size(); ++i) {
    Mat Jx = J.J(u.value(i));
    Vec d1 = u.d1(i), d2 = u.d2(i);
    out.v1.values().row(static_cast<Eigen::Index>(i)) =
        (0.5 * (d1 + Jx * d2)).cast<std::complex<double>>().transpose();
    out.v2.values().row(static_cast<Eigen::Index>(i)) =
        (0.5 * (d2 - Jx * d1)).cast<std::complex<double>>().transpose();
  }
  return out;
}

FormField del_map(const MapU& u, const AlmostComplex& J) {
  FormField out(u.domain, u.target_dim);
  for (std::size_t i = 0; i < u.domain.size(); ++i) {
    Mat Jx = J.J(u.value(i));
    Vec d1 = u.d1(i), d2 = u.d2(i);
    out.v1.values().row(static_cast<Eigen::Index>(i)) =
        (0.5 * (d1 - Jx * d2)).cast<std::complex<double>>().transpose();
    out.v2.values().row(static_cast<Eigen::Index>(i)) =
        (0.5 * (d2 + Jx * d1)).cast<std::complex<double>>().transpose();
  }
  return out;
}

FormField bundle_dbar(const DbarForm& theta, const GridFunction& f) {
  const Grid& g = f.grid();
  GridFunction d1(g, f.components()), d2(g, f.components());
  if (g.kind() == Grid::Kind::Annulus) {
    auto grads = f.cartesian_gradient();
    d1 = std::move(grads.first);
    d2 = std::move(grads.second);
  } else {
    d1 = f.derivative(0);
    d2 = f.derivative(1);
  }
  FormField out(g, f.components());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Eigen::VectorXcd v = 0.5 * (d1.at(i) + I * d2.at(i));
    if (theta.theta_e1) v += theta.theta_e1(g.cartesian(i)) * f.at(i);
    out.v1.values().row(static_cast<Eigen::Index>(i)) = v.transpose();
    out.v2.values().row(static_cast<Eigen::Index>(i)) = (-I * v).transpose();
  }
  return out;
}

Mat induced_total_J(const MatC& theta_e1, const MatC& theta_e2, const Mat& domain_j,
                    const VecC& c) {
  const int n = static_cast<int>(theta_e1.rows());
  const int m = 2 + 2 * n;
  Mat J = Mat::Zero(m, m);
  J.topLeftCorner(2, 2) = domain_j;
  for (int k = 0; k < n; ++k) {
    J(2 + 2 * k, 2 + 2 * k + 1) = -1.0;
    J(2 + 2 * k + 1, 2 + 2 * k) = 1.0;
  }
  const std::complex<double> I(0.0, 1.0);
  VecC col1 = 2.0 * I * (theta_e1 * c);
  VecC col2 = 2.0 * I * (theta_e2 * c);
  for (int k = 0; k < n; ++k) {
    J(2 + 2 * k, 0) = col1[k].real();
    J(2 + 2 * k + 1, 0) = col1[k].imag();
    J(2 + 2 * k, 1) = col2[k].real();
    J(2 + 2 * k + 1, 1) = col2[k].imag();
  }
  return J;
}

std::pair<MatC, MatC> project_01(const MatC& th1, const MatC& th2, const Mat& j) {
  const std::complex<double> I(0.0, 1.0);
  // theta(j e_k) from the columns of j
  MatC tj1 = j(0, 0) * th1 + j(1, 0) * th2;
  MatC tj2 = j(0, 1) * th1 + j(1, 1) * th2;
  return {MatC(0.5 * (th1 + I * tj1)), MatC(0.5 * (th2 + I * tj2))};
}

Vec nijenhuis(const AlmostComplex& J, const Vec& x, const Vec& v, const Vec& w, double h) {
  Mat Jx = J.J(x);
  Mat dvJ = J.dirderiv(x, v, h);
  Mat dwJ = J.dirderiv(x, w, h);
  Mat dJvJ = J.dirderiv(x, Jx * v, h);
  Mat dJwJ = J.dirderiv(x, Jx * w, h);
  return 0.25 * (Jx * (dvJ * w) - Jx * (dwJ * v) - dJvJ * w + dJwJ * v);
}

Mat nabla_J(const TangentConnection& conn, const AlmostComplex& J, const Vec& x, const Vec& v,
            double h) {
  Mat th = conn.theta(x, v);
  Mat Jx = J.J(x);
  return J.dirderiv(x, v, h) + th * Jx - Jx * th;
}

TangentConnection j_linear_connection(const TangentConnection& conn, const AlmostComplex& J,
                                      double h) {
  TangentConnection out;
  out.dim = conn.dim;
  TangentConnection base = conn;
  AlmostComplex Jc = J;
  out.theta = [base, Jc, h](const Vec& x, const Vec& v) {
    Mat Jx = Jc.J(x);
    return Mat(base.theta(x, v) - 0.5 * Jx * nabla_J(base, Jc, x, v, h));
  };
  return out;
}

namespace {

Vec covariant_of_field(const TangentConnection& conn, const EField& xi, const Vec& x,
                       const Vec& X) {
  return xi.dirderiv(x, X) + conn.theta(x, X) * xi.value(x);
}

}  // namespace

std::vector<Vec> d_js_operator(const AlmostComplex& J, const TangentConnection& conn,
                               const ChartCircle& sigma, const EField& xi, double torsion_tol) {
  for (int k = 0; k < 4; ++k) {
    double t = 2.0 * std::numbers::pi * k / 4.0;
    Vec p = sigma.z(t);
    for (int i = 0; i < conn.dim; ++i)
      for (int j = i + 1; j < conn.dim; ++j) {
        Vec ei = Vec::Unit(conn.dim, i), ej = Vec::Unit(conn.dim, j);
        if (conn.torsion(p, ei, ej).norm() > torsion_tol)
          throw std::invalid_argument("connection has torsion above tolerance");
      }
  }
  std::vector<Vec> out(static_cast<std::size_t>(sigma.n));
  for (int k = 0; k < sigma.n; ++k) {
    double t = 2.0 * std::numbers::pi * k / sigma.n;
    Vec p = sigma.z(t);
    Vec X = sigma.dz(t);
    Mat Jx = J.J(p);
    Vec nx = covariant_of_field(conn, xi, p, X);
    Vec njx = covariant_of_field(conn, xi, p, Jx * X);
    Mat nJ = nabla_J(conn, J, p, xi.value(p));
    out[static_cast<std::size_t>(k)] = 0.5 * (nx + Jx * njx) - 0.5 * Jx * (nJ * X);
  }
  return out;
}

Vec field_bracket(const EField& f, const EField& g, const Vec& x) {
  return g.jacobian(x) * f.value(x) - f.jacobian(x) * g.value(x);
}

EField apply_structure(const AlmostComplex& J, const EField& f) {
  EField out;
  out.fiber_dim = f.fiber_dim;
  AlmostComplex Jc = J;
  EField fc = f;
  out.value = [Jc, fc](const Vec& x) { return Vec(Jc.J(x) * fc.value(x)); };
  out.jac = [Jc, fc](const Vec& x) {
    Mat Jf = Jc.J(x) * fc.jacobian(x);
    Vec fx = fc.value(x);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      Jf.col(i) += Jc.dirderiv(x, Vec::Unit(x.size(), i)) * fx;
    return Jf;
  };
  return out;
}

Vec d_js_bracket_form(const AlmostComplex& J, const EField& zeta, const EField& xi,
                      const Vec& x) {
  EField Jzeta = apply_structure(J, zeta);
  return 0.5 * (field_bracket(zeta, xi, x) + J.J(x) * field_bracket(Jzeta, xi, x));
}

Vec d_js_four_bracket(const AlmostComplex& J, const EField& zeta, const EField& xi,
                      const Vec& x) {
  EField Jzeta = apply_structure(J, zeta);
  EField Jxi = apply_structure(J, xi);
  Mat Jx = J.J(x);
  return 0.25 * (field_bracket(zeta, xi, x) + Jx * field_bracket(Jzeta, xi, x) -
                 Jx * field_bracket(zeta, Jxi, x) + field_bracket(Jzeta, Jxi, x));
}

Vec d_js_dbar_route(const AlmostComplex& J, const TangentConnection& conn, const EField& xi,
                    const Vec& x, const Vec& X, double h) {
  TangentConnection cj = j_linear_connection(conn, J, h);
  Mat Jx = J.J(x);
  Vec nx = covariant_of_field(cj, xi, x, X);
  Vec njx = covariant_of_field(cj, xi, x, Jx * X);
  Vec xval = xi.value(x);
  Mat nJ_Jxi = nabla_J(conn, J, x, Jx * xval, h);
  Mat nJ_xi = nabla_J(conn, J, x, xval, h);
  return 0.5 * (nx + Jx * njx) - 0.25 * ((nJ_Jxi + Jx * nJ_xi) * X);
}

std::pair<GridFunction, GridFunction> pullback_covariant(const TangentConnection& conn,
                                                         const MapU& u,
                                                         const GridFunction& xi) {
  GridFunction d1(u.domain, xi.components()), d2(u.domain, xi.components());
  if (u.domain.kind() == Grid::Kind::Annulus) {
    auto grads = xi.cartesian_gradient();
    d1 = std::move(grads.first);
    d2 = std::move(grads.second);
  } else {
    d1 = xi.derivative(0);
    d2 = xi.derivative(1);
  }
  for (std::size_t i = 0; i < u.domain.size(); ++i) {
    Vec p = u.value(i);
    Vec x1 = xi.at(i).real();
    d1.values().row(static_cast<Eigen::Index>(i)) +=
        (conn.theta(p, u.d1(i)) * x1).cast<std::complex<double>>().transpose();
    d2.values().row(static_cast<Eigen::Index>(i)) +=
        (conn.theta(p, u.d2(i)) * x1).cast<std::complex<double>>().transpose();
  }
  return {std::move(d1), std::move(d2)};
}

FormField cr_pullback(const CROperator& D, const MapU& u, const GridFunction& xi) {
  auto [n1, n2] = pullback_covariant(D.conn, u, xi);
  FormField out(u.domain, xi.components());
  FormField delu = D.A ? del_map(u, AlmostComplex{u.target_dim, D.Jfib})
                       : FormField(u.domain, u.target_dim);
  for (std::size_t i = 0; i < u.domain.size(); ++i) {
    Vec p = u.value(i);
    Mat Ji = D.Jfib(p);
    Vec a1 = n1.at(i).real(), a2 = n2.at(i).real();
    Vec o1 = 0.5 * (a1 + Ji * a2);
    Vec o2 = 0.5 * (a2 - Ji * a1);
    if (D.A) {
      o1 += D.A(p, delu.v1.at(i).real(), xi.at(i).real());
      o2 += D.A(p, delu.v2.at(i).real(), xi.at(i).real());
    }
    out.v1.values().row(static_cast<Eigen::Index>(i)) =
        o1.cast<std::complex<double>>().transpose();
    out.v2.values().row(static_cast<Eigen::Index>(i)) =
        o2.cast<std::complex<double>>().transpose();
  }
  return out;
}

NonlinearDbar nonlinear_dbar(const MapU& u, const GridFunction& xi, const ExpLikeMap& E,
                             const AlmostComplex& J, double nablaJ_tol) {
  const Grid& g = u.domain;
  const int m = u.target_dim;
  for (std::size_t i = 0; i < g.size(); i += std::max<std::size_t>(1, g.size() / 7)) {
    Vec p = u.value(i);
    for (int a = 0; a < m; ++a)
      if (nabla_J(E.conn, J, p, Vec::Unit(m, a)).norm() > nablaJ_tol)
        throw PreconditionError("connection does not commute with J");
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (xi.at(i).real().norm() >= E.plateau_radius)
      throw PreconditionError("section leaves the exponential-map plateau at node " +
                              std::to_string(i));

  NonlinearDbar out{FormField(g, m), FormField(g, m), FormField(g, m), FormField(g, m)};

  GridFunction w(g, m);
  std::vector<Mat> Pinv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    ExpTransport et = exp_and_transport(E, u.value(i), xi.at(i).real());
    w.values().row(static_cast<Eigen::Index>(i)) =
        et.end.cast<std::complex<double>>().transpose();
    Pinv[i] = et.Pi.inverse();
  }
  GridFunction dw1(g, m), dw2(g, m);
  if (g.kind() == Grid::Kind::Annulus) {
    auto grads = w.cartesian_gradient();
    dw1 = std::move(grads.first);
    dw2 = std::move(grads.second);
  } else {
    dw1 = w.derivative(0);
    dw2 = w.derivative(1);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    Mat Jw = J.J(w.at(i).real());
    Vec a1 = dw1.at(i).real(), a2 = dw2.at(i).real();
    Vec b1 = Pinv[i] * (0.5 * (a1 + Jw * a2));
    Vec b2 = Pinv[i] * (0.5 * (a2 - Jw * a1));
    out.dbar_exp.v1.values().row(static_cast<Eigen::Index>(i)) =
        b1.cast<std::complex<double>>().transpose();
    out.dbar_exp.v2.values().row(static_cast<Eigen::Index>(i)) =
        b2.cast<std::complex<double>>().transpose();
  }

  // differentiate u through the same grid pipeline as exp_u(xi), so the
  // xi = 0 remainder cancels identically
  MapU u_grid = u;
  if (g.kind() == Grid::Kind::Annulus) {
    auto gu = u.values.cartesian_gradient();
    u_grid.du1 = std::move(gu.first);
    u_grid.du2 = std::move(gu.second);
  } else {
    u_grid.du1 = u.values.derivative(0);
    u_grid.du2 = u.values.derivative(1);
  }
  out.dbar_u = dbar_map(u_grid, J);

  auto [n1, n2] = pullback_covariant(E.conn, u_grid, xi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vec p = u.value(i);
    Mat Jp = J.J(p);
    Vec x0 = xi.at(i).real();
    Vec a1 = n1.at(i).real(), a2 = n2.at(i).real();
    Vec t1 = E.conn.torsion(p, u_grid.d1(i), x0);
    Vec t2 = E.conn.torsion(p, u_grid.d2(i), x0);
    Vec l1 = 0.5 * (a1 + Jp * a2) - 0.5 * (t1 + Jp * t2);
    Vec l2 = 0.5 * (a2 - Jp * a1) - 0.5 * (t2 - Jp * t1);
    out.linear.v1.values().row(static_cast<Eigen::Index>(i)) =
        l1.cast<std::complex<double>>().transpose();
    out.linear.v2.values().row(static_cast<Eigen::Index>(i)) =
        l2.cast<std::complex<double>>().transpose();
  }

  out.nonlinear.v1.values() =
      out.dbar_exp.v1.values() - out.dbar_u.v1.values() - out.linear.v1.values();
  out.nonlinear.v2.values() =
      out.dbar_exp.v2.values() - out.dbar_u.v2.values() - out.linear.v2.values();
  return out;
}

AdmissibilityReport admissibility_check(const TangentConnection& conn, const MapU& u, double p,
                                        const std::vector<GridFunction>& sections,
                                        const std::vector<FormField>& forms,
                                        const std::vector<GridFunction>& scalars,
                                        const std::vector<Mat>& fiber_gram) {
  NormSuite norms(u.domain, p);
  const FiberGram* G = fiber_gram.empty() ? nullptr : &fiber_gram;
  AdmissibilityReport rep;
  for (const FormField& eta : forms) {
    double np = norms.pair_lp(eta.v1, eta.v2, p, G);
    if (np == 0.0) continue;
    for (const GridFunction& f : scalars) {
      GridFunction a = eta.v1, b = eta.v2;
      for (std::size_t i = 0; i < u.domain.size(); ++i) {
        std::complex<double> s = f.at(i)[0];
        a.values().row(static_cast<Eigen::Index>(i)) *= s;
        b.values().row(static_cast<Eigen::Index>(i)) *= s;
      }
      double fc0 = norms.c0(f);
      if (fc0 > 0.0)
        rep.mult_worst = std::max(rep.mult_worst, norms.pair_lp(a, b, p, G) / (fc0 * np));
    }
    // eta o j sends (e1, e2) to (eta(e2), -eta(e1))
    GridFunction c = eta.v2, d = eta.v1;
    d *= -1.0;
    rep.jiso_worst = std::max(rep.jiso_worst, std::abs(norms.pair_lp(c, d, p, G) - np) / np);
  }
  for (const GridFunction& xi : sections) {
    auto [c1, c2] = pullback_covariant(conn, u, xi);
    double dnorm = norms.pair_lp(c1, c2, p, G);
    double base = norms.lp(xi, G);
    double p1 = base + dnorm;
    if (p1 > 0.0) {
      rep.deriv_worst = std::max(rep.deriv_worst, dnorm / p1);
      rep.c0 = std::max(rep.c0, norms.c0(xi, G) / p1);
    }
  }
  return rep;
}

}  // namespace geomest
