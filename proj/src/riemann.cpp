#include "geomest/riemann.hpp"

#include <cmath>

namespace geomest {

namespace {

std::vector<Mat> metric_partials(const MetricField& m, const Vec& x) {
  if (m.dg) return m.dg(x);
  std::vector<Mat> out(static_cast<std::size_t>(m.dim));
  double h = m.fd_step;
  for (int i = 0; i < m.dim; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    out[static_cast<std::size_t>(i)] = (m.g(xp) - m.g(xm)) / (2.0 * h);
  }
  return out;
}

}  // namespace

Mat ConnectionCoeffs::form(const Vec& x, const Vec& v) const {
  std::vector<Mat> G = coeffs(x);
  Mat th = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) s += G[static_cast<std::size_t>(k)](i, j) * v[i];
      th(k, j) = s;
    }
  return th;
}

Mat EField::jacobian(const Vec& x, double h) const {
  if (jac) return jac(x);
  Mat J(fiber_dim, x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (value(xp) - value(xm)) / (2.0 * h);
  }
  return J;
}

Vec EField::dirderiv(const Vec& x, const Vec& v, double h) const {
  if (jac) return jac(x) * v;
  double s = v.norm();
  if (s == 0.0) return Vec::Zero(fiber_dim);
  Vec dir = v / s;
  Vec xp = x + h * dir, xm = x - h * dir;
  return s * (value(xp) - value(xm)) / (2.0 * h);
}

std::vector<Mat> christoffel(const MetricField& m, const Vec& x) {
  const int n = m.dim;
  Mat gx = m.g(x);
  if ((gx - gx.transpose()).norm() > 1e-12 * std::max(1.0, gx.norm()))
    throw DegenerateMetricError("metric not symmetric at queried point");
  Eigen::LLT<Mat> llt(gx);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetricError("metric not positive definite at queried point");
  Mat ginv = llt.solve(Mat::Identity(n, n));
  std::vector<Mat> dg = metric_partials(m, x);
  std::vector<Mat> G(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) +
                             dg[static_cast<std::size_t>(j)](i, l) -
                             dg[static_cast<std::size_t>(l)](i, j));
        G[static_cast<std::size_t>(k)](i, j) = 0.5 * s;
      }
  return G;
}

ConnectionCoeffs levi_civita_connection(const MetricField& m) {
  ConnectionCoeffs c;
  c.dim = m.dim;
  c.provenance = ConnectionCoeffs::Provenance::LeviCivita;
  MetricField copy = m;
  c.coeffs = [copy](const Vec& x) { return christoffel(copy, x); };
  return c;
}

Vec torsion(const ConnectionCoeffs& conn, const Vec& x, const Vec& v, const Vec& w) {
  std::vector<Mat> G = conn.coeffs(x);
  const int n = conn.dim;
  Vec t = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += (G[static_cast<std::size_t>(k)](i, j) - G[static_cast<std::size_t>(k)](j, i)) *
             v[i] * w[j];
    t[k] = s;
  }
  return t;
}

Mat curvature(const ConnectionCoeffs& conn, const Vec& x, const Vec& v, const Vec& w, double h) {
  if (h <= 0.0 || x.norm() + 1.0 + h == x.norm() + 1.0)
    throw NumericError("curvature finite-difference step underflow");
  const int n = conn.dim;
  auto theta_at = [&](const Vec& p, const Vec& dir) { return conn.form(p, dir); };
  // d_v theta(w) - d_w theta(v) by centered differences of the matrix field.
  double sv = v.norm(), sw = w.norm();
  Mat dv_thw = Mat::Zero(n, n), dw_thv = Mat::Zero(n, n);
  if (sv > 0.0) {
    Vec dir = v / sv;
    dv_thw = sv * (theta_at(x + h * dir, w) - theta_at(x - h * dir, w)) / (2.0 * h);
  }
  if (sw > 0.0) {
    Vec dir = w / sw;
    dw_thv = sw * (theta_at(x + h * dir, v) - theta_at(x - h * dir, v)) / (2.0 * h);
  }
  Mat tv = theta_at(x, v), tw = theta_at(x, w);
  return dv_thw - dw_thv + tv * tw - tw * tv;
}

Mat metric_compat_residual(const ConnectionForm& theta, const MetricField& g_frame, const Vec& x,
                           const Vec& v) {
  const int n = theta.rank;
  Mat th = theta.theta(x, v).real();
  Mat gx = g_frame.g(x);
  std::vector<Mat> dg = metric_partials(g_frame, x);
  Mat dgv = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < v.size(); ++i) dgv += v[i] * dg[static_cast<std::size_t>(i)];
  Mat res = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gx(i, k) * th(k, j) + gx(j, k) * th(k, i);
      res(i, j) = s - dgv(i, j);
    }
  return res;
}

MatC hermitian_compat_residual(const ConnectionForm& theta, const HermitianMetricField& g_frame,
                               const Vec& x, const Vec& v) {
  const int n = theta.rank;
  MatC th = theta.theta(x, v);
  MatC gx = g_frame.g(x);
  MatC dgv = MatC::Zero(n, n);
  if (g_frame.dg) {
    std::vector<MatC> dg = g_frame.dg(x);
    for (Eigen::Index i = 0; i < v.size(); ++i) dgv += v[i] * dg[static_cast<std::size_t>(i)];
  } else {
    double h = g_frame.fd_step;
    double s = v.norm();
    if (s > 0.0) {
      Vec dir = v / s;
      dgv = s * (g_frame.g(x + h * dir) - g_frame.g(x - h * dir)) / (2.0 * h);
    }
  }
  MatC res = MatC::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::complex<double> s(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        s += gx(i, k) * th(k, j) + std::conj(gx(j, k)) * std::conj(th(k, i));
      res(i, j) = s - dgv(i, j);
    }
  return res;
}

std::function<Mat(const Vec&, const Vec&)> connection_difference(const ConnectionCoeffs& a,
                                                                 const ConnectionCoeffs& b) {
  if (a.dim != b.dim) throw std::invalid_argument("connection dimensions differ");
  ConnectionCoeffs ca = a, cb = b;
  return [ca, cb](const Vec& x, const Vec& v) { return Mat(ca.form(x, v) - cb.form(x, v)); };
}

Vec covariant_derivative(const ConnectionCoeffs& conn, const EField& xi, const Vec& x,
                         const Vec& v) {
  return xi.dirderiv(x, v) + conn.form(x, v) * xi.value(x);
}

Vec covariant_derivative(const std::function<Mat(const Vec&, const Vec&)>& theta,
                         const EField& xi, const Vec& x, const Vec& v) {
  return xi.dirderiv(x, v) + theta(x, v) * xi.value(x);
}

Splitting horizontal_splitting(const std::function<Mat(const Vec&, const Vec&)>& theta,
                               const Vec& x, const Vec& e, const Vec& v, const Vec& delta) {
  Splitting s;
  s.horizontal = v;
  s.vertical = delta + theta(x, v) * e;
  return s;
}

std::function<Mat(const Vec&, const Vec&)> as_form(const ConnectionCoeffs& conn) {
  ConnectionCoeffs c = conn;
  return [c](const Vec& x, const Vec& v) { return c.form(x, v); };
}

ConnectionForm frame_connection_form(const ConnectionCoeffs& conn,
                                     const std::function<Mat(const Vec&)>& frame, double h) {
  ConnectionForm out;
  out.rank = conn.dim;
  out.chart_dim = conn.dim;
  ConnectionCoeffs c = conn;
  out.theta = [c, frame, h](const Vec& x, const Vec& v) -> MatC {
    Mat F = frame(x);
    double s = v.norm();
    Mat dF = Mat::Zero(F.rows(), F.cols());
    if (s > 0.0) {
      Vec dir = v / s;
      dF = s * (frame(x + h * dir) - frame(x - h * dir)) / (2.0 * h);
    }
    Mat th = F.inverse() * (dF + c.form(x, v) * F);
    return th.cast<std::complex<double>>();
  };
  return out;
}

}  // namespace geomest
