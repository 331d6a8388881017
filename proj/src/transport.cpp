#include "geomest/transport.hpp"

#include <cmath>

namespace geomest {

TangentConnection tangent_connection(const ConnectionCoeffs& conn) {
  TangentConnection t;
  t.dim = conn.dim;
  ConnectionCoeffs c = conn;
  t.theta = [c](const Vec& x, const Vec& v) { return c.form(x, v); };
  return t;
}

Vec ode45(const std::function<Vec(double, const Vec&)>& f, double t0, double t1, Vec y0,
          double atol, double rtol, double max_step,
          const std::function<void(double, const Vec&)>* observer) {
  // Dormand-Prince 5(4)
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return y0;
  double h = std::min(span / 16.0, max_step);
  double t = t0;
  Vec y = std::move(y0);
  Vec k1 = f(t, y);
  int rejected_in_row = 0;
  const int max_iters = 1000000;
  for (int iter = 0; iter < max_iters; ++iter) {
    double remaining = dir * (t1 - t);
    if (remaining <= 0.0) break;
    if (h < 1e-14 * span) throw NumericError("ode45 step underflow; tolerance not met");
    bool final_step = (h >= remaining);
    double hd = dir * (final_step ? remaining : h);
    Vec k2 = f(t + c2 * hd, y + hd * (a21 * k1));
    Vec k3 = f(t + c3 * hd, y + hd * (a31 * k1 + a32 * k2));
    Vec k4 = f(t + c4 * hd, y + hd * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec k5 = f(t + c5 * hd, y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = f(t + hd, y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec ynew = y + hd * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vec k7 = f(t + hd, ynew);
    Vec err = hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double enorm = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      enorm = std::max(enorm, std::abs(err[i]) / sc);
    }
    if (enorm <= 1.0) {
      t = final_step ? t1 : t + hd;
      y = std::move(ynew);
      k1 = std::move(k7);
      if (observer) (*observer)(t, y);
      if (final_step) break;
      rejected_in_row = 0;
      double grow = (enorm == 0.0) ? 5.0 : std::min(5.0, 0.9 * std::pow(enorm, -0.2));
      h = std::min(std::max(h * grow, 1e-14), max_step);
    } else {
      if (++rejected_in_row > 60) throw NumericError("ode45 cannot satisfy tolerance");
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
    }
  }
  return y;
}

Mat parallel_transport_matrix(const TangentConnection& conn, const PathCurve& path, double atol,
                              double rtol) {
  const int k = conn.dim;
  Vec y0(k * k);
  Mat id = Mat::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) y0[i * k + j] = id(i, j);
  auto rhs = [&](double t, const Vec& y) {
    Mat Pi(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) Pi(i, j) = y[i * k + j];
    Mat dPi = -conn.theta(path.x(t), path.dx(t)) * Pi;
    Vec dy(k * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) dy[i * k + j] = dPi(i, j);
    return dy;
  };
  double max_step = std::abs(path.b - path.a) / std::max(1, path.n_steps);
  Vec yf = ode45(rhs, path.a, path.b, y0, atol, rtol, max_step);
  Mat Pi(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) Pi(i, j) = yf[i * k + j];
  return Pi;
}

Vec parallel_transport(const TangentConnection& conn, const PathCurve& path, const Vec& v0,
                       double atol, double rtol) {
  return parallel_transport_matrix(conn, path, atol, rtol) * v0;
}

double opnorm_g(const Mat& A, const Mat& G) {
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  Mat s = es.operatorSqrt();
  Mat si = es.operatorInverseSqrt();
  return (s * A * si).operatorNorm();
}

double rotation_angle_g(const Mat& Pi, const Mat& G) {
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  Mat Q = es.operatorSqrt() * Pi * es.operatorInverseSqrt();
  return std::atan2(Q(1, 0) - Q(0, 1), Q(0, 0) + Q(1, 1));
}

double ExpLikeMap::cutoff(double s) const {
  if (s <= plateau_radius) return 1.0;
  if (s >= support_radius) return 0.0;
  double u = (s - plateau_radius) / (support_radius - plateau_radius);
  double u3 = u * u * u;
  return 1.0 - (10.0 * u3 - 15.0 * u3 * u + 6.0 * u3 * u * u);
}

ExpLikeMap make_exp(const BuiltinManifold& m, const Vec& center) {
  ExpLikeMap E;
  E.conn = tangent_connection(m.levi_civita);
  E.box = m.box;
  double margin = m.box.margin(center);
  if (!std::isfinite(margin) || m.name == "euclidean" || m.name == "flat_torus") {
    E.plateau_radius = E.support_radius = std::numeric_limits<double>::infinity();
  } else {
    E.plateau_radius = 0.4 * margin;
    E.support_radius = 0.8 * margin;
  }
  return E;
}

ExpLikeMap make_exp(const TangentConnection& conn, const ChartBox& box, double plateau,
                    double support) {
  ExpLikeMap E;
  E.conn = conn;
  E.box = box;
  E.plateau_radius = plateau;
  E.support_radius = support;
  return E;
}

namespace {

ExpTransport integrate_exp(const ExpLikeMap& E, const Vec& x, const Vec& v, bool with_transport) {
  const int n = static_cast<int>(x.size());
  ExpTransport out;
  double eta = E.cutoff(v.norm());
  Vec w0 = eta * v;
  if (w0.norm() == 0.0) {
    out.end = x;
    out.Pi = Mat::Identity(n, n);
    return out;
  }
  const int m = with_transport ? 2 * n + n * n : 2 * n;
  Vec y0(m);
  y0.head(n) = x;
  y0.segment(n, n) = w0;
  if (with_transport) {
    Mat id = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y0[2 * n + i * n + j] = id(i, j);
  }
  auto rhs = [&](double, const Vec& y) {
    Vec gamma = y.head(n);
    Vec w = y.segment(n, n);
    Mat th = E.conn.theta(gamma, w);
    Vec dy(m);
    dy.head(n) = w;
    dy.segment(n, n) = -th * w;
    if (with_transport) {
      Mat Pi(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Pi(i, j) = y[2 * n + i * n + j];
      Mat dPi = -th * Pi;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dy[2 * n + i * n + j] = dPi(i, j);
    }
    return dy;
  };
  std::function<void(double, const Vec&)> check = [&](double t, const Vec& y) {
    if (!E.box.contains(y.head(n)))
      throw DomainEscapeError("geodesic left the chart box", t);
  };
  Vec yf = ode45(rhs, 0.0, 1.0, y0, E.atol, E.rtol,
                 std::numeric_limits<double>::infinity(), &check);
  out.end = yf.head(n);
  out.Pi = Mat::Identity(n, n);
  if (with_transport)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.Pi(i, j) = yf[2 * n + i * n + j];
  return out;
}

}  // namespace

Vec exp_map(const ExpLikeMap& E, const Vec& x, const Vec& v) {
  return integrate_exp(E, x, v, false).end;
}

ExpTransport exp_and_transport(const ExpLikeMap& E, const Vec& x, const Vec& v) {
  return integrate_exp(E, x, v, true);
}

HolonomyResult rectangle_holonomy(const MapRect& u, const ConnectionCoeffs& conn,
                                  const MetricField& g, int quad_n, int curv_samples,
                                  int transport_steps) {
  TangentConnection tc = tangent_connection(conn);
  const int k = conn.dim;
  auto edge = [&](const std::function<Vec(double)>& x, const std::function<Vec(double)>& dx) {
    PathCurve p;
    p.a = 0.0;
    p.b = 1.0;
    p.x = x;
    p.dx = dx;
    p.n_steps = transport_steps;
    return parallel_transport_matrix(tc, p);
  };
  double a = u.a, b = u.b, c = u.c, d = u.d;
  Mat P1 = edge([&](double t) { return u.u(a + t * (b - a), c); },
                [&](double t) { return Vec((b - a) * u.us(a + t * (b - a), c)); });
  Mat P2 = edge([&](double t) { return u.u(b, c + t * (d - c)); },
                [&](double t) { return Vec((d - c) * u.ut(b, c + t * (d - c))); });
  Mat P3 = edge([&](double t) { return u.u(b - t * (b - a), d); },
                [&](double t) { return Vec(-(b - a) * u.us(b - t * (b - a), d)); });
  Mat P4 = edge([&](double t) { return u.u(a, d - t * (d - c)); },
                [&](double t) { return Vec(-(d - c) * u.ut(a, d - t * (d - c))); });
  HolonomyResult res;
  res.transport = P4 * P3 * P2 * P1;
  Mat G0 = g.g(u.u(a, c));
  res.defect = opnorm_g(res.transport - Mat::Identity(k, k), G0);
  if (k == 2) res.rotation_angle = rotation_angle_g(res.transport, G0);

  // integral |u_s|_g |u_t|_g ds dt (trapezoid on a quad_n^2 lattice)
  double integral = 0.0;
  double hs = (b - a) / (quad_n - 1), ht = (d - c) / (quad_n - 1);
  for (int i = 0; i < quad_n; ++i)
    for (int j = 0; j < quad_n; ++j) {
      double s = a + i * hs, t = c + j * ht;
      Mat G = g.g(u.u(s, t));
      Vec us = u.us(s, t), ut = u.ut(s, t);
      double w = ((i == 0 || i == quad_n - 1) ? 0.5 : 1.0) *
                 ((j == 0 || j == quad_n - 1) ? 0.5 : 1.0);
      integral += w * hs * ht * std::sqrt(us.dot(G * us)) * std::sqrt(ut.dot(G * ut));
    }
  res.structural = integral;

  // curvature bound: sup over image samples of |R| on g-orthonormal pairs
  double supR = 0.0;
  for (int i = 0; i < curv_samples; ++i)
    for (int j = 0; j < curv_samples; ++j) {
      double s = a + (i + 0.5) * (b - a) / curv_samples;
      double t = c + (j + 0.5) * (d - c) / curv_samples;
      Vec p = u.u(s, t);
      Mat G = g.g(p);
      Eigen::SelfAdjointEigenSolver<Mat> es(G);
      Mat frame = es.operatorInverseSqrt();  // columns are g-orthonormal
      for (int ii = 0; ii < k; ++ii)
        for (int jj = ii + 1; jj < k; ++jj) {
          Mat R = curvature(conn, p, frame.col(ii), frame.col(jj));
          supR = std::max(supR, opnorm_g(R, G));
        }
    }
  res.bound = static_cast<double>(k) * static_cast<double>(k) * supR * integral;
  res.ratio = (res.bound > 0.0) ? res.defect / res.bound : (res.defect > 0.0 ? 1e300 : 0.0);
  return res;
}

LoopHolonomy loop_holonomy_bound(const PathCurve& alpha, const ConnectionCoeffs& conn,
                                 const MetricField& g) {
  if (!alpha.closed(1e-10)) throw std::invalid_argument("loop transport needs a closed curve");
  TangentConnection tc = tangent_connection(conn);
  LoopHolonomy res;
  res.transport = parallel_transport_matrix(tc, alpha);
  Mat G0 = g.g(alpha.x(alpha.a));
  res.defect = opnorm_g(res.transport - Mat::Identity(conn.dim, conn.dim), G0);
  if (conn.dim == 2) res.rotation_angle = rotation_angle_g(res.transport, G0);
  // Simpson quadrature for |d alpha|_1 and |d alpha|_2^2
  int n = std::max(64, alpha.n_steps) * 2;
  if (n % 2 != 0) ++n;
  double h = (alpha.b - alpha.a) / n;
  double l1 = 0.0, l2sq = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = alpha.a + i * h;
    Vec dx = alpha.dx(t);
    Mat G = g.g(alpha.x(t));
    double speed2 = dx.dot(G * dx);
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    l1 += w * std::sqrt(speed2);
    l2sq += w * speed2;
  }
  l1 *= h / 3.0;
  l2sq *= h / 3.0;
  res.length_l1 = l1;
  res.energy_term = (alpha.b - alpha.a) * l2sq;
  res.structural = std::min(res.length_l1, res.energy_term);
  return res;
}

DerivativeDefect transport_derivative_defect(const Vec& x,
                                             const std::function<Vec(double)>& alpha_tilde,
                                             const std::function<Vec(double)>& xi,
                                             const ExpLikeMap& E, const MetricField& g,
                                             double h) {
  const Vec a0 = alpha_tilde(0.0);
  auto y_at = [&](double t) {
    ExpTransport et = exp_and_transport(E, x, alpha_tilde(t));
    return std::pair<Vec, Vec>(et.Pi * xi(t), et.end);
  };
  auto [y0, c0] = y_at(0.0);
  auto [yp, cp] = y_at(h);
  auto [ym, cm] = y_at(-h);
  // transport y(+-h) back to the fiber over c(0) along tau -> exp(alpha(tau))
  auto back = [&](double sgn, const Vec& y) {
    PathCurve seg;
    seg.a = 0.0;
    seg.b = 1.0;
    seg.n_steps = 16;
    seg.x = [&, sgn](double q) { return exp_map(E, x, alpha_tilde(sgn * q * h)); };
    double hq = 1e-4;
    seg.dx = [&, sgn](double q) {
      return Vec((exp_map(E, x, alpha_tilde(sgn * (q + hq) * h)) -
                  exp_map(E, x, alpha_tilde(sgn * (q - hq) * h))) /
                 (2.0 * hq));
    };
    Mat T = parallel_transport_matrix(E.conn, seg, E.atol, E.rtol);
    return Vec(T.inverse() * y);
  };
  Vec yb_p = back(1.0, yp);
  Vec yb_m = back(-1.0, ym);
  Vec Dydt = (yb_p - yb_m) / (2.0 * h);
  // xi'(0) with a 5-point stencil (xi is a curve in the fixed fiber E_x)
  Vec dxi = (-xi(2.0 * h) + 8.0 * xi(h) - 8.0 * xi(-h) + xi(-2.0 * h)) / (12.0 * h);
  ExpTransport et0 = exp_and_transport(E, x, a0);
  Vec diff = Dydt - et0.Pi * dxi;
  Mat G = g.g(c0);
  DerivativeDefect out;
  out.lhs = std::sqrt(diff.dot(G * diff));
  Mat Gx = g.g(x);
  double da = ((alpha_tilde(h) - alpha_tilde(-h)) / (2.0 * h)).transpose() * Gx *
              ((alpha_tilde(h) - alpha_tilde(-h)) / (2.0 * h));
  out.structural = std::sqrt(a0.dot(Gx * a0)) * std::sqrt(da) *
                   std::sqrt(xi(0.0).dot(Gx * xi(0.0)));
  return out;
}

PhiExpansion phi_expansion(const Vec& x, const Vec& v, const Vec& w0, const Vec& w1,
                           const ExpLikeMap& E, const MetricField& g, double h) {
  if (w0.norm() >= E.plateau_radius)
    throw PreconditionError("w0 outside the exponential-map plateau");
  // curve alpha(s) = x + s v; xi(s) = transport of (w0 + s w1) along alpha
  auto xi_at = [&](double s) {
    if (s == 0.0) return w0;
    PathCurve seg;
    seg.a = 0.0;
    seg.b = s;
    seg.n_steps = 8;
    seg.x = [&](double q) { return Vec(x + q * v); };
    seg.dx = [&](double) { return v; };
    return Vec(parallel_transport_matrix(E.conn, seg, E.atol, E.rtol) * (w0 + s * w1));
  };
  auto z_at = [&](double s) { return exp_map(E, x + s * v, xi_at(s)); };
  Vec dz = (-z_at(2.0 * h) + 8.0 * z_at(h) - 8.0 * z_at(-h) + z_at(-2.0 * h)) / (12.0 * h);
  ExpTransport et = exp_and_transport(E, x, w0);
  PhiExpansion out;
  out.phi = et.Pi.inverse() * dz;
  out.residual = out.phi - (v + w1 - E.conn.torsion(x, v, w0));
  Mat G = g.g(x);
  auto gn = [&](const Vec& a) { return std::sqrt(a.dot(G * a)); };
  out.lhs = gn(out.residual);
  out.structural = gn(v) * gn(w0) * gn(w0) + gn(w0) * gn(w1);
  return out;
}

PhiLipschitz phi_lipschitz_check(const Vec& x, const Vec& v, const Vec& w0, const Vec& w1,
                                 const Vec& w0p, const Vec& w1p, const ExpLikeMap& E,
                                 const MetricField& g, double h) {
  PhiExpansion p1 = phi_expansion(x, v, w0, w1, E, g, h);
  PhiExpansion p2 = phi_expansion(x, v, w0p, w1p, E, g, h);
  Mat G = g.g(x);
  auto gn = [&](const Vec& a) { return std::sqrt(a.dot(G * a)); };
  PhiLipschitz out;
  Vec diff = p1.residual - p2.residual;
  out.lhs = gn(diff);
  double n0 = gn(w0), n0p = gn(w0p);
  out.structural = ((n0 + n0p) * gn(v) + gn(w1) + gn(w1p)) * gn(w0 - w0p) +
                   (n0 + n0p) * gn(w1 - w1p);
  return out;
}

}  // namespace geomest
