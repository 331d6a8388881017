#include "geomest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <thread>

#include "geomest/builtin.hpp"
#include "geomest/rng.hpp"

namespace geomest {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec pt(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

Vec pt4(double a, double b, double c, double d) {
  Vec x(4);
  x << a, b, c, d;
  return x;
}

Vec rnd_vec(Rng& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

double fit_slope(const std::vector<double>& ts, const std::vector<double>& rs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double lx = std::log(ts[i]), ly = std::log(rs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = static_cast<double>(ts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

InequalityRecord tolerance_record(const std::string& id, double lhs, double tol) {
  InequalityRecord rec;
  rec.lemma_id = id;
  rec.lhs = lhs;
  rec.rhs_fixed = tol;
  rec.constant_used = 1.0;
  rec.provenance = InequalityRecord::Provenance::Tolerance;
  rec.finalize(0.0);
  return rec;
}

InequalityRecord fitted_record(const std::string& id, const std::string& key, double lhs,
                               double scaled, const std::map<std::string, double>& constants,
                               double slack) {
  InequalityRecord rec;
  rec.lemma_id = id;
  rec.constant_key = key;
  rec.lhs = lhs;
  rec.rhs_scaled = scaled;
  rec.provenance = InequalityRecord::Provenance::Fitted;
  auto it = constants.find(key);
  rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
  rec.finalize(slack);
  return rec;
}

// ----- shared scenario pieces -------------------------------------------

struct SphereCtx {
  BuiltinManifold M = builtin_sphere();
  TangentConnection lc = tangent_connection(M.levi_civita);
};

const SphereCtx& sphere_ctx() {
  static const SphereCtx ctx;
  return ctx;
}

Vec sphere_point(Rng& rng) { return pt(rng.uniform(0.7, kPi - 0.7), rng.uniform(-kPi, kPi)); }

// random closed loop around the sphere, star-shaped in the azimuth
PathCurve sphere_loop(Rng& rng, double base_lo = 0.7, double base_hi = 1.4) {
  double th0 = rng.uniform(base_lo, base_hi);
  double a1 = rng.uniform(-0.15, 0.15), a2 = rng.uniform(-0.1, 0.1);
  double p1 = rng.uniform(0.0, kTwoPi), p2 = rng.uniform(0.0, kTwoPi);
  PathCurve loop;
  loop.a = 0.0;
  loop.b = kTwoPi;
  loop.n_steps = 128;
  loop.periods = {pt(0.0, kTwoPi)};
  loop.x = [=](double q) {
    return pt(th0 + a1 * std::cos(q + p1) + a2 * std::cos(2.0 * q + p2), q);
  };
  loop.dx = [=](double q) {
    return pt(-a1 * std::sin(q + p1) - 2.0 * a2 * std::sin(2.0 * q + p2), 1.0);
  };
  return loop;
}

MapRect sphere_rectangle(Rng& rng) {
  double th0 = rng.uniform(0.9, kPi - 0.9);
  double ph0 = rng.uniform(-kPi, kPi);
  double a1 = rng.uniform(0.1, 0.45), a2 = rng.uniform(0.1, 0.45);
  double b1 = rng.uniform(0.1, 0.45), b2 = rng.uniform(0.1, 0.45);
  MapRect u;
  u.u = [=](double s, double t) {
    return pt(th0 + a1 * std::sin(kPi * s) * (1.0 + 0.3 * t) + a2 * s,
              ph0 + b1 * t + b2 * std::sin(kPi * t) * s);
  };
  u.us = [=](double s, double t) {
    return pt(a1 * kPi * std::cos(kPi * s) * (1.0 + 0.3 * t) + a2,
              b2 * std::sin(kPi * t));
  };
  u.ut = [=](double s, double t) {
    return pt(a1 * std::sin(kPi * s) * 0.3, b1 + b2 * kPi * std::cos(kPi * t) * s);
  };
  return u;
}

AlmostComplex standard_J(int dim) {
  AlmostComplex J;
  J.dim = dim;
  J.J = [dim](const Vec&) {
    Mat m = Mat::Zero(dim, dim);
    for (int i = 0; i < dim / 2; ++i) {
      m(2 * i, 2 * i + 1) = -1.0;
      m(2 * i + 1, 2 * i) = 1.0;
    }
    return m;
  };
  return J;
}

AlmostComplex rotated_J() {
  AlmostComplex J;
  J.dim = 4;
  J.J = [](const Vec& x) {
    double a = 0.3 * std::sin(x[0] + 2.0 * x[1]) + 0.2 * std::cos(x[2] - x[3]);
    Mat R = Mat::Identity(4, 4);
    R(0, 0) = std::cos(a);
    R(0, 2) = -std::sin(a);
    R(2, 0) = std::sin(a);
    R(2, 2) = std::cos(a);
    Mat J0 = Mat::Zero(4, 4);
    J0(0, 1) = -1.0;
    J0(1, 0) = 1.0;
    J0(2, 3) = -1.0;
    J0(3, 2) = 1.0;
    return Mat(R * J0 * R.transpose());
  };
  return J;
}

TangentConnection flat_connection(int dim) {
  TangentConnection c;
  c.dim = dim;
  c.theta = [dim](const Vec&, const Vec&) { return Mat(Mat::Zero(dim, dim)); };
  return c;
}

EField random_poly_field(Rng& rng, double scale = 1.0) {
  Mat A(4, 4);
  Vec b(4);
  std::vector<Mat> Q(4, Mat(4, 4));
  for (int i = 0; i < 4; ++i) {
    b[i] = scale * rng.normal();
    for (int j = 0; j < 4; ++j) A(i, j) = scale * rng.normal();
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) Q[static_cast<std::size_t>(i)](j, k) = 0.25 * scale * rng.normal();
    Q[static_cast<std::size_t>(i)] =
        0.5 * (Q[static_cast<std::size_t>(i)] + Q[static_cast<std::size_t>(i)].transpose()).eval();
  }
  EField f;
  f.fiber_dim = 4;
  f.value = [A, b, Q](const Vec& x) {
    Vec v = A * x + b;
    for (int i = 0; i < 4; ++i) v[i] += x.dot(Q[static_cast<std::size_t>(i)] * x);
    return v;
  };
  f.jac = [A, Q](const Vec& x) {
    Mat J = A;
    for (int i = 0; i < 4; ++i) J.row(i) += (2.0 * Q[static_cast<std::size_t>(i)] * x).transpose();
    return J;
  };
  return f;
}

// symmetric constant-coefficient torsion-free perturbation of magnitude mag
TangentConnection symmetric_perturbation(Rng& rng, double mag) {
  std::vector<Mat> S(4, Mat(4, 4));
  for (auto& m : S) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = rng.normal();
    m = (mag / 2.0) * (m + m.transpose()).eval();
  }
  TangentConnection c;
  c.dim = 4;
  c.theta = [S](const Vec&, const Vec& v) {
    Mat th = Mat::Zero(4, 4);
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) th(k, j) = S[static_cast<std::size_t>(k)].row(j).dot(v);
    return th;
  };
  return c;
}

Grid cfg_annulus(const SuiteConfig& cfg, double R = 1.0, double r = 0.25) {
  return Grid::annulus(R, r, cfg.annulus_n_rho * cfg.grid_scale,
                       cfg.annulus_n_theta * cfg.grid_scale);
}

Grid cfg_torus(const SuiteConfig& cfg, int divide = 1) {
  int n = std::max(16, cfg.torus_n * cfg.grid_scale / divide);
  if (n % 2 != 0) ++n;
  return Grid::torus(kTwoPi, kTwoPi, n, n);
}

// map from a torus into the sphere chart with analytic planar derivatives
MapU sphere_torus_map(const Grid& g, Rng& rng, double amp) {
  double a1 = amp * rng.uniform(0.5, 1.0), a2 = amp * rng.uniform(0.5, 1.0);
  double b1 = amp * rng.uniform(0.5, 1.0), b2 = amp * rng.uniform(0.5, 1.0);
  double p1 = rng.uniform(0.0, kTwoPi), p2 = rng.uniform(0.0, kTwoPi);
  return MapU::sample(
      g, 2,
      [=](const Eigen::Vector2d& z) {
        return pt(kPi / 2.0 + a1 * std::sin(z[0] + p1) + a2 * std::sin(z[1] + p2),
                  b1 * std::cos(z[0] + p2) + b2 * std::sin(z[1] + p1));
      },
      [=](const Eigen::Vector2d& z) {
        Mat d(2, 2);
        d(0, 0) = a1 * std::cos(z[0] + p1);
        d(0, 1) = a2 * std::cos(z[1] + p2);
        d(1, 0) = -b1 * std::sin(z[0] + p2);
        d(1, 1) = b2 * std::cos(z[1] + p1);
        return d;
      });
}

int resolved_mode(const Grid& g, int cap) {
  int allowed = g.axis_size(0) / 4;
  if (g.num_axes() == 2) allowed = std::min(allowed, g.axis_size(1) / 4);
  return std::max(1, std::min(cap, allowed));
}

GridFunction random_section(const Grid& g, Rng& rng, int comps, double amp, int kmax) {
  RandomFamily fam;
  fam.components = comps;
  fam.amplitude = amp;
  fam.max_mode = resolved_mode(g, kmax);
  return generate(fam, g, rng.raw());
}

// ----- check implementations --------------------------------------------

using Records = std::vector<InequalityRecord>;
using Constants = std::map<std::string, double>;

Records check_levi_civita_oracle(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (const BuiltinManifold& m : {builtin_sphere(), builtin_halfplane()}) {
    MetricField fd = m.metric;
    fd.dg = nullptr;
    for (int t = 0; t < 5; ++t) {
      Vec x = m.name == "sphere" ? pt(rng.uniform(0.4, kPi - 0.4), rng.uniform(-3.0, 3.0))
                                 : pt(rng.uniform(-2.0, 2.0), rng.uniform(0.5, 5.0));
      auto num = christoffel(fd, x);
      auto exact = m.levi_civita.coeffs(x);
      double scale = 1.0, err = 0.0;
      for (int k = 0; k < 2; ++k) {
        scale = std::max(scale, exact[static_cast<std::size_t>(k)].cwiseAbs().maxCoeff());
        err = std::max(err, (num[static_cast<std::size_t>(k)] -
                             exact[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff());
      }
      worst = std::max(worst, err / scale);
    }
  }
  return {tolerance_record("levi_civita_oracle", worst, 1e-6)};
}

Records check_torsion_free(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  MetricField fd = s.M.metric;
  fd.dg = nullptr;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Vec x = pt(rng.uniform(0.4, kPi - 0.4), rng.uniform(-3.0, 3.0));
    auto G = christoffel(fd, x);
    for (int k = 0; k < 2; ++k)
      worst = std::max(worst, (G[static_cast<std::size_t>(k)] -
                               G[static_cast<std::size_t>(k)].transpose()).norm());
  }
  return {tolerance_record("torsion_free", worst, 1e-10)};
}

Records check_metric_compat(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  ConnectionForm th;
  th.rank = 2;
  th.chart_dim = 2;
  ConnectionCoeffs lc = s.M.levi_civita;
  MetricField fd = s.M.metric;
  fd.dg = nullptr;
  th.theta = [fd](const Vec& x, const Vec& v) {
    auto G = christoffel(fd, x);
    Mat out = Mat::Zero(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) out(k, j) += G[static_cast<std::size_t>(k)](i, j) * v[i];
    return MatC(out.cast<std::complex<double>>());
  };
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Vec x = pt(rng.uniform(0.4, kPi - 0.4), rng.uniform(-3.0, 3.0));
    Vec v = rnd_vec(rng, 2);
    worst = std::max(worst, metric_compat_residual(th, s.M.metric, x, v).norm());
  }
  return {tolerance_record("metric_compat", worst, 1e-8)};
}

Records check_lc_uniqueness(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed + 1);
  const SphereCtx& s = sphere_ctx();
  MetricField fd = s.M.metric;
  fd.dg = nullptr;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Vec x = pt(rng.uniform(0.4, kPi - 0.4), rng.uniform(-3.0, 3.0));
    auto num = christoffel(fd, x);
    auto exact = s.M.levi_civita.coeffs(x);
    for (int k = 0; k < 2; ++k)
      worst = std::max(worst, (num[static_cast<std::size_t>(k)] -
                               exact[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff());
  }
  return {tolerance_record("lc_uniqueness", worst, 1e-6)};
}

Records check_covariant_locality(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  double worst = 0.0;
  for (int t = 0; t < 2; ++t) {
    Vec x0 = sphere_point(rng);
    double a = rng.normal(), b = rng.normal();
    EField xi{2, [a, b](const Vec& x) { return Vec(pt(a * std::cos(x[1]), b * x[0])); }, nullptr};
    EField mod{2,
               [a, b, x0](const Vec& x) {
                 Vec v = pt(a * std::cos(x[1]), b * x[0]);
                 if ((x - x0).norm() > 0.2) v += pt(3.0, -4.0);
                 return v;
               },
               nullptr};
    Vec v = rnd_vec(rng, 2);
    Vec da = covariant_derivative(s.M.levi_civita, xi, x0, v);
    Vec db = covariant_derivative(s.M.levi_civita, mod, x0, v);
    worst = std::max(worst, (da - db).norm());
  }
  return {tolerance_record("covariant_locality", worst, 1e-10)};
}

Records check_splitting_scaling(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  auto th = as_form(s.M.levi_civita);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    Vec x = sphere_point(rng);
    Vec e = rnd_vec(rng, 2), v = rnd_vec(rng, 2), d = rnd_vec(rng, 2);
    double scale = 2.0;
    Splitting base = horizontal_splitting(th, x, e, v, d);
    Splitting scaled = horizontal_splitting(th, x, scale * e, v, scale * d);
    worst = std::max(worst, (scaled.vertical - scale * base.vertical).norm());
    // zero fiber point: vertical part reduces to the naive velocity
    Splitting zero = horizontal_splitting(th, x, Vec::Zero(2), v, d);
    worst = std::max(worst, (zero.vertical - d).norm());
  }
  return {tolerance_record("splitting_scaling", worst, 1e-10)};
}

Records check_latitude_rotation(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  double th0 = rng.uniform(0.3, kPi - 0.3);
  PathCurve lat;
  lat.a = 0.0;
  lat.b = kTwoPi;
  lat.n_steps = 128;
  lat.periods = {pt(0.0, kTwoPi)};
  lat.x = [th0](double t) { return pt(th0, t); };
  lat.dx = [](double) { return pt(0.0, 1.0); };
  Mat Pi = parallel_transport_matrix(s.lc, lat);
  double angle = rotation_angle_g(Pi, s.M.metric.g(pt(th0, 0.0)));
  double expected = kTwoPi * std::cos(th0);
  double err = std::min(std::abs(wrap_angle(angle - expected)),
                        std::abs(wrap_angle(angle + expected)));
  InequalityRecord rec = tolerance_record("latitude_rotation", err, 1e-4);
  rec.params["theta0"] = th0;
  rec.finalize(0.0);
  return {rec};
}

Records check_gauss_bonnet(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  PathCurve loop = sphere_loop(rng);
  int n = 2048;
  double h = kTwoPi / n, area = 0.0;
  for (int i = 0; i <= n; ++i) {
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    area += w * (1.0 - std::cos(loop.x(i * h)[0]));
  }
  area *= h / 3.0;
  Mat Pi = parallel_transport_matrix(s.lc, loop);
  double angle = rotation_angle_g(Pi, s.M.metric.g(loop.x(0.0)));
  double err = std::min(std::abs(wrap_angle(angle - area)), std::abs(wrap_angle(angle + area)));
  InequalityRecord rec = tolerance_record("gauss_bonnet", err, 1e-4);
  rec.params["area"] = area;
  rec.finalize(0.0);
  return {rec};
}

Records check_rectangle_holonomy(const SuiteConfig&, const Constants& constants,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  MapRect u = sphere_rectangle(rng);
  HolonomyResult h = rectangle_holonomy(u, s.M.levi_civita, s.M.metric);
  InequalityRecord rec = fitted_record("rectangle_holonomy", "rectangle_holonomy", h.defect,
                                       h.structural, constants, 0.05);
  rec.params["curvature_bound"] = h.bound;
  rec.finalize(0.05);
  return {rec};
}

Records check_loop_holonomy(const SuiteConfig&, const Constants& constants, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  PathCurve loop = sphere_loop(rng, 0.4, 1.6);
  LoopHolonomy h = loop_holonomy_bound(loop, s.M.levi_civita, s.M.metric);
  InequalityRecord rec = fitted_record("loop_holonomy", "loop_holonomy", h.defect, h.structural,
                                       constants, 0.05);
  rec.params["length_l1"] = h.length_l1;
  rec.params["energy"] = h.energy_term;
  rec.finalize(0.05);
  return {rec};
}

Records check_transport_orthogonality(const SuiteConfig&, const Constants&,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  PathCurve loop = sphere_loop(rng);
  loop.b = rng.uniform(2.0, kTwoPi);
  loop.periods.clear();
  Mat Pi = parallel_transport_matrix(s.lc, loop);
  Mat Ga = s.M.metric.g(loop.x(loop.a)), Gb = s.M.metric.g(loop.x(loop.b));
  Eigen::SelfAdjointEigenSolver<Mat> es(Ga);
  Mat Q = es.operatorInverseSqrt() * (Pi.transpose() * Gb * Pi) * es.operatorInverseSqrt();
  return {tolerance_record("transport_orthogonality", (Q - Mat::Identity(2, 2)).norm(), 1e-8)};
}

Records check_transport_derivative(const SuiteConfig&, const Constants& constants,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Vec x = sphere_point(rng);
  ExpLikeMap E = make_exp(s.M, x);
  Records recs;
  for (int t = 0; t < 2; ++t) {
    Vec a0 = rnd_vec(rng, 2, 0.12);
    a0 += pt(0.05 * rng.sign(), 0.05 * rng.sign());  // keep |a0| away from 0
    Vec a1 = rnd_vec(rng, 2, 0.6);
    Vec x0 = rnd_vec(rng, 2, 1.0);
    Vec x1 = rnd_vec(rng, 2, 0.7);
    auto at = [a0, a1](double q) { return Vec(a0 + q * a1); };
    auto xi = [x0, x1](double q) { return Vec(x0 + q * x1); };
    DerivativeDefect d = transport_derivative_defect(x, at, xi, E, s.M.metric);
    recs.push_back(fitted_record("transport_derivative", "transport_derivative", d.lhs,
                                 d.structural, constants, 0.05));
  }
  return recs;
}

Records check_phi_expansion(const SuiteConfig&, const Constants& constants,
                            std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Vec x = sphere_point(rng);
  ExpLikeMap E = make_exp(s.M, x);
  E.atol = 1e-12;
  E.rtol = 1e-11;
  Records recs;
  for (int t = 0; t < 2; ++t) {
    Vec v = rnd_vec(rng, 2, 0.4);
    Vec w0 = rnd_vec(rng, 2, 0.08);
    w0 += pt(0.03 * rng.sign(), 0.03 * rng.sign());
    Vec w1 = rnd_vec(rng, 2, 0.3);
    PhiExpansion ph = phi_expansion(x, v, w0, w1, E, s.M.metric);
    recs.push_back(fitted_record("phi_expansion", "phi_expansion", ph.lhs, ph.structural,
                                 constants, 0.05));
  }
  return recs;
}

Records check_phi_lipschitz(const SuiteConfig&, const Constants& constants,
                            std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Vec x = sphere_point(rng);
  ExpLikeMap E = make_exp(s.M, x);
  E.atol = 1e-12;
  E.rtol = 1e-11;
  Vec v = rnd_vec(rng, 2, 0.4);
  Vec w0 = rnd_vec(rng, 2, 0.08), w0p = rnd_vec(rng, 2, 0.08);
  Vec w1 = rnd_vec(rng, 2, 0.3), w1p = rnd_vec(rng, 2, 0.3);
  PhiLipschitz pl = phi_lipschitz_check(x, v, w0, w1, w0p, w1p, E, s.M.metric);
  return {fitted_record("phi_lipschitz", "phi_lipschitz", pl.lhs, pl.structural, constants,
                        0.05)};
}

Records check_phi_quadratic_slope(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Vec x = sphere_point(rng);
  ExpLikeMap E = make_exp(s.M, x);
  E.atol = 1e-12;
  E.rtol = 1e-11;
  Vec v = rnd_vec(rng, 2, 0.5);
  Vec w = rnd_vec(rng, 2, 0.8);
  std::vector<double> ts = {0.1, 0.05, 0.025}, rs;
  for (double t : ts) rs.push_back(phi_expansion(x, v, t * w, Vec::Zero(2), E, s.M.metric).lhs);
  double slope = fit_slope(ts, rs);
  InequalityRecord rec = tolerance_record("phi_quadratic_slope", std::abs(slope - 2.0), 0.1);
  rec.params["slope"] = slope;
  rec.finalize(0.0);
  return {rec};
}

Records check_total_j_algebra(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  Mat j2 = standard_J(2).J(Vec::Zero(2));
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    int n = 1 + static_cast<int>(rng.integer(3));
    MatC th1(n, n), th2(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        th1(i, j) = std::complex<double>(rng.normal(), rng.normal());
        th2(i, j) = std::complex<double>(rng.normal(), rng.normal());
      }
    auto [p1, p2] = project_01(th1, th2, j2);
    VecC c(n);
    for (int i = 0; i < n; ++i) c[i] = std::complex<double>(rng.normal(), rng.normal());
    Mat J = induced_total_J(p1, p2, j2, c);
    worst = std::max(worst, (J * J + Mat::Identity(2 + 2 * n, 2 + 2 * n)).norm());
  }
  return {tolerance_record("total_j_algebra", worst, 1e-12)};
}

Records check_dbar_type(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  Grid g = cfg_torus(cfg, 2);
  const SphereCtx& s = sphere_ctx();
  AlmostComplex J{2, s.M.complex_structure};
  MapU u = sphere_torus_map(g, rng, 0.25);
  FormField db = dbar_map(u, J);
  AlmostComplex Jc = J;
  const MapU* up = &u;
  double defect =
      db.antiholomorphic_defect([Jc, up](std::size_t i) { return Jc.J(up->value(i)); });
  return {tolerance_record("dbar_type", defect, 1e-10)};
}

Records check_nijenhuis_antilinearity(const SuiteConfig&, const Constants&,
                                      std::uint64_t seed) {
  Rng rng(seed);
  AlmostComplex J = rotated_J();
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Vec x = rnd_vec(rng, 4, 0.5);
    Vec v = rnd_vec(rng, 4), w = rnd_vec(rng, 4);
    Vec avw = nijenhuis(J, x, v, w);
    Mat Jx = J.J(x);
    worst = std::max(worst, (avw + nijenhuis(J, x, w, v)).norm());
    worst = std::max(worst, (nijenhuis(J, x, Jx * v, w) + Jx * avw).norm());
  }
  return {tolerance_record("nijenhuis_antilinearity", worst, 1e-6)};
}

Records check_nijenhuis_oracle(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  AlmostComplex J = rotated_J();
  auto dir_fd = [&](const std::function<Vec(const Vec&)>& F, const Vec& x, const Vec& d) {
    double h2 = 5e-4;
    double s = d.norm();
    if (s == 0.0) return Vec(Vec::Zero(4));
    Vec dd = d / s;
    return Vec(s * (F(x + h2 * dd) - F(x - h2 * dd)) / (2.0 * h2));
  };
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    Vec x = rnd_vec(rng, 4, 0.5);
    Vec v = rnd_vec(rng, 4), w = rnd_vec(rng, 4);
    auto Jv = [&](const Vec& y) { return Vec(J.J(y) * v); };
    auto Jw = [&](const Vec& y) { return Vec(J.J(y) * w); };
    Mat Jx = J.J(x);
    Vec oracle = 0.25 * (Jx * dir_fd(Jw, x, v) - Jx * dir_fd(Jv, x, w) -
                         (dir_fd(Jw, x, Jx * v) - dir_fd(Jv, x, Jx * w)));
    Vec impl = nijenhuis(J, x, v, w);
    worst = std::max(worst, (impl - oracle).norm() / std::max(1.0, oracle.norm()));
  }
  return {tolerance_record("nijenhuis_oracle", worst, 1e-4)};
}

Records check_j_commutation(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  AlmostComplex J = rotated_J();
  TangentConnection cj = j_linear_connection(flat_connection(4), J);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Vec x = rnd_vec(rng, 4, 0.4);
    Vec v = rnd_vec(rng, 4);
    worst = std::max(worst, nabla_J(cj, J, x, v).norm());
  }
  return {tolerance_record("j_commutation", worst, 1e-8)};
}

ChartCircle graph_circle(double c) {
  ChartCircle sigma;
  sigma.n = 48;
  sigma.z = [c](double t) {
    return pt4(std::cos(t), std::sin(t), c * std::cos(2.0 * t), c * std::sin(2.0 * t));
  };
  sigma.dz = [c](double t) {
    return pt4(-std::sin(t), std::cos(t), -2.0 * c * std::sin(2.0 * t),
               2.0 * c * std::cos(2.0 * t));
  };
  return sigma;
}

Records check_djs_connection_independence(const SuiteConfig&, const Constants&,
                                          std::uint64_t seed) {
  Rng rng(seed);
  AlmostComplex J = standard_J(4);
  TangentConnection flat = flat_connection(4);
  TangentConnection pert = symmetric_perturbation(rng, 0.3);
  ChartCircle sigma = graph_circle(0.3);
  EField xi = random_poly_field(rng);
  auto a = d_js_operator(J, flat, sigma, xi);
  auto b = d_js_operator(J, pert, sigma, xi);
  double worst = 0.0, scale = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, (a[k] - b[k]).norm());
    scale = std::max(scale, a[k].norm());
  }
  return {tolerance_record("djs_connection_independence", worst / scale, 1e-7)};
}

Records check_djs_tangency(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  AlmostComplex J = standard_J(4);
  TangentConnection pert = symmetric_perturbation(rng, 0.3);
  double c = 0.3;
  ChartCircle sigma = graph_circle(c);
  double h1 = rng.normal(), h2 = rng.normal(), h3 = rng.normal();
  EField xi;
  xi.fiber_dim = 4;
  xi.value = [=](const Vec& x) {
    std::complex<double> z1(x[0], x[1]);
    std::complex<double> h = std::complex<double>(h1, h2) * z1 + std::complex<double>(h3, 0.2) +
                             std::complex<double>(0.3 * x[2], 0.1 * x[3]);
    std::complex<double> top = h, bot = 2.0 * c * z1 * h;
    return pt4(top.real(), top.imag(), bot.real(), bot.imag());
  };
  auto out = d_js_operator(J, pert, sigma, xi);
  double worst = 0.0;
  for (int k = 0; k < sigma.n; ++k) {
    double t = kTwoPi * k / sigma.n;
    Vec p = sigma.z(t);
    std::complex<double> z1(p[0], p[1]);
    VecC tau(2);
    tau << std::complex<double>(1.0, 0.0), 2.0 * c * z1;
    tau /= std::sqrt(std::norm(tau[0]) + std::norm(tau[1]));
    Vec o = out[static_cast<std::size_t>(k)];
    VecC oc(2);
    oc << std::complex<double>(o[0], o[1]), std::complex<double>(o[2], o[3]);
    VecC perp = oc - (tau.dot(oc)) * tau;
    worst = std::max(worst, perp.norm() / std::max(1.0, oc.norm()));
  }
  return {tolerance_record("djs_tangency", worst, 1e-6)};
}

Records check_djs_bracket_match(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  AlmostComplex J = standard_J(4);
  AlmostComplex Jr = rotated_J();
  EField xi = random_poly_field(rng);
  EField zeta = random_poly_field(rng);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    Vec x = rnd_vec(rng, 4, 0.3);
    Vec X = zeta.value(x);
    Mat Jx = J.J(x);
    Vec via_bracket = d_js_bracket_form(J, zeta, xi, x);
    Vec direct = 0.5 * (xi.jacobian(x) * X + Jx * (xi.jacobian(x) * (Jx * X)));
    worst = std::max(worst, (via_bracket - direct).norm() / std::max(1.0, direct.norm()));
    Vec lhs = d_js_dbar_route(Jr, flat_connection(4), xi, x, X);
    Vec rhs = d_js_four_bracket(Jr, zeta, xi, x);
    worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
  }
  return {tolerance_record("djs_bracket_match", worst, 1e-5)};
}

Records check_dbar_splitting(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  Mat j2 = standard_J(2).J(Vec::Zero(2));
  const std::complex<double> I(0.0, 1.0);
  // compatible side: dbar form is the (0,1) part of the full connection form
  double worst_compat = 0.0;
  double min_incompat = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 5; ++t) {
    int n = 2;
    MatC M1(n, n), M2(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        M1(i, j) = std::complex<double>(rng.normal(), rng.normal());
        M2(i, j) = std::complex<double>(rng.normal(), rng.normal());
      }
    auto [p1, p2] = project_01(M1, M2, j2);
    VecC e(n);
    for (int i = 0; i < n; ++i) e[i] = std::complex<double>(rng.normal(), rng.normal());
    Eigen::Vector2d v(rng.normal(), rng.normal());
    VecC eta(n);
    for (int i = 0; i < n; ++i) eta[i] = std::complex<double>(rng.normal(), rng.normal());

    auto theta_of = [&](const MatC& a, const MatC& b, const Eigen::Vector2d& w) {
      return MatC(w[0] * a + w[1] * b);
    };
    auto splitting_embed = [&](const MatC& a, const MatC& b, const Eigen::Vector2d& w,
                               const VecC& vert) {
      // (w, -theta(w) e + vert) as a real vector in R^{2+2n}
      VecC fiber = -theta_of(a, b, w) * e + vert;
      Vec out(2 + 2 * n);
      out[0] = w[0];
      out[1] = w[1];
      for (int i = 0; i < n; ++i) {
        out[2 + 2 * i] = fiber[i].real();
        out[2 + 2 * i + 1] = fiber[i].imag();
      }
      return out;
    };
    Eigen::Vector2d jv = j2 * v;
    // compatible: connection = full form, dbar = its (0,1) part
    Mat Jtot = induced_total_J(p1, p2, j2, e);
    Vec lhs = Jtot * splitting_embed(M1, M2, v, eta);
    Vec rhs = splitting_embed(M1, M2, jv, I * eta);
    worst_compat = std::max(worst_compat, (lhs - rhs).norm());
    // incompatible: flat dbar (zero form), connection keeps a (1,0) piece
    MatC mu = 0.1 * M1;
    Mat Jflat = induced_total_J(MatC(MatC::Zero(n, n)), MatC(MatC::Zero(n, n)), j2, e);
    Vec lhs2 = Jflat * splitting_embed(mu, MatC(MatC::Zero(n, n)), v, eta);
    Vec rhs2 = splitting_embed(mu, MatC(MatC::Zero(n, n)), jv, I * eta);
    min_incompat = std::min(min_incompat, (lhs2 - rhs2).norm());
  }
  Records recs;
  recs.push_back(tolerance_record("dbar_compat_intertwine", worst_compat, 1e-7));
  InequalityRecord floor_rec;
  floor_rec.lemma_id = "dbar_incompat_floor";
  floor_rec.lhs = 1e-3;
  floor_rec.rhs_fixed = min_incompat;
  floor_rec.provenance = InequalityRecord::Provenance::Tolerance;
  floor_rec.finalize(0.0);
  recs.push_back(floor_rec);
  return recs;
}

Records check_symbol_injectivity(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;  // largest 0.1|eta| / sigma_min; must stay below 1
  for (int t = 0; t < 10; ++t) {
    Eigen::Vector2d eta(rng.normal(), rng.normal());
    if (eta.norm() < 1e-6) continue;
    std::complex<double> c1(eta[0], eta[1]);
    std::complex<double> c2(eta[1], -eta[0]);
    double sigma_min = std::sqrt(std::norm(c1) + std::norm(c2));
    worst = std::max(worst, 0.1 * eta.norm() / sigma_min);
  }
  return {tolerance_record("symbol_injectivity", worst, 1.0)};
}

Records check_nexp_zero(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  AlmostComplex J{2, s.M.complex_structure};
  Grid g = cfg_torus(cfg, 4);
  MapU u = sphere_torus_map(g, rng, 0.2);
  ExpLikeMap E = make_exp(s.M, pt(kPi / 2.0, 0.0));
  GridFunction zero_xi(g, 2);
  NonlinearDbar nd = nonlinear_dbar(u, zero_xi, E, J);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, nd.nonlinear.v1.norm_at(i) + nd.nonlinear.v2.norm_at(i));
  InequalityRecord rec;
  rec.lemma_id = "nexp_zero";
  rec.lhs = worst;
  rec.rhs_fixed = 0.0;
  rec.provenance = InequalityRecord::Provenance::Tolerance;
  rec.finalize(0.0);
  return {rec};
}

Records check_nexp_flat(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  BuiltinManifold e4 = builtin_euclidean(4);
  AlmostComplex J4 = standard_J(4);
  Grid g = cfg_torus(cfg, 4);
  RandomFamily fam;
  fam.components = 4;
  fam.amplitude = 0.3;
  fam.max_mode = resolved_mode(g, 3);
  double phase = 0.1 * static_cast<double>(seed % 7);
  MapU u = MapU::sample(g, 4, [phase](const Eigen::Vector2d& z) {
    return pt4(0.3 * std::sin(z[0] + phase), 0.2 * std::cos(z[1]),
               0.1 * std::sin(z[0] + z[1]), 0.25 * std::cos(z[0]));
  });
  GridFunction xi = generate(fam, g, rng.raw());
  ExpLikeMap E = make_exp(e4, Vec::Zero(4));
  NonlinearDbar nd = nonlinear_dbar(u, xi, E, J4);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, nd.nonlinear.v1.norm_at(i) + nd.nonlinear.v2.norm_at(i));
  return {tolerance_record("nexp_flat", worst, 1e-10)};
}

Records check_nexp_quadratic_slope(const SuiteConfig& cfg, const Constants&,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  AlmostComplex J{2, s.M.complex_structure};
  Grid g = cfg_torus(cfg, 2);
  MapU u = sphere_torus_map(g, rng, 0.25);
  GridFunction xi0 = random_section(g, rng, 2, 0.7, 3);
  ExpLikeMap E = make_exp(s.M, pt(kPi / 2.0, 0.0));
  NormSuite norms(g, 4.0);
  std::vector<double> ts = {0.2, 0.1, 0.05}, rs;
  for (double t : ts) {
    GridFunction xi = xi0;
    xi *= t;
    NonlinearDbar nd = nonlinear_dbar(u, xi, E, J);
    rs.push_back(norms.pair_lp(nd.nonlinear.v1, nd.nonlinear.v2, 4.0));
  }
  double slope = fit_slope(ts, rs);
  InequalityRecord rec = tolerance_record("nexp_quadratic_slope", std::abs(slope - 2.0), 0.1);
  rec.params["slope"] = slope;
  rec.finalize(0.0);
  return {rec};
}

Records check_admissibility(const SuiteConfig& cfg, const Constants& constants,
                            std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Grid g = cfg_torus(cfg, 2);
  MapU u = sphere_torus_map(g, rng, 0.2);
  FiberGram gram = fiber_gram_along(s.M.metric, u.values);
  std::vector<GridFunction> sections, scalars;
  std::vector<FormField> forms;
  for (int t = 0; t < 3; ++t) {
    sections.push_back(random_section(g, rng, 2, 1.0, 4));
    GridFunction sc = random_section(g, rng, 1, 0.5, 4);
    for (std::size_t i = 0; i < g.size(); ++i)
      sc.values()(static_cast<Eigen::Index>(i), 0) += 1.0;
    scalars.push_back(std::move(sc));
    FormField f(g, 2);
    GridFunction raw = random_section(g, rng, 4, 1.0, 4);
    for (std::size_t i = 0; i < g.size(); ++i) {
      f.v1.values()(static_cast<Eigen::Index>(i), 0) = raw.at(i)[0];
      f.v1.values()(static_cast<Eigen::Index>(i), 1) = raw.at(i)[1];
      f.v2.values()(static_cast<Eigen::Index>(i), 0) = raw.at(i)[2];
      f.v2.values()(static_cast<Eigen::Index>(i), 1) = raw.at(i)[3];
    }
    forms.push_back(std::move(f));
  }
  TangentConnection lc = sphere_ctx().lc;
  AdmissibilityReport rep = admissibility_check(lc, u, 4.0, sections, forms, scalars, gram);
  Records recs;
  recs.push_back(tolerance_record("admissibility_identities",
                                  std::max(rep.mult_worst, rep.deriv_worst), 1.0 + 1e-9));
  recs.push_back(tolerance_record("admissibility_jiso", rep.jiso_worst, 1e-12));
  recs.push_back(
      fitted_record("admissibility_c0", "admissibility_c0", rep.c0, 1.0, constants, 0.05));
  return recs;
}

Records check_fourier_poincare(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Grid g = Grid::circle(cfg.circle_n);
  RandomFamily fam;
  fam.mean_zero = true;
  fam.max_mode = resolved_mode(g, cfg.circle_n / 4);
  GridFunction zeta = generate(fam, g, seed);
  return {fourier_poincare(zeta)};
}

Records check_loop_pairing(const SuiteConfig&, const Constants& constants, std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Grid g = Grid::circle(128);
  PathCurve loop = sphere_loop(rng);
  RandomFamily fam;
  fam.components = 2;
  fam.max_mode = resolved_mode(g, 8);
  GridFunction xi = generate(fam, g, rng.raw());
  GridFunction zeta = generate(fam, g, rng.raw());
  InequalityRecord rec = loop_pairing_bound(loop, s.lc, s.M.metric, xi, zeta, 1.0,
                                            InequalityRecord::Provenance::Fitted, 0.05);
  rec.constant_key = "loop_pairing_bound";
  auto it = constants.find(rec.constant_key);
  rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
  rec.finalize(0.05);
  return {rec};
}

Records check_annulus_mean_zero(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Records recs;
  for (double r : {0.5, 0.1, 0.01}) {
    Grid g = Grid::annulus(1.0, r, cfg.annulus_n_rho * cfg.grid_scale,
                           cfg.annulus_n_theta * cfg.grid_scale);
    RandomFamily fam;
    fam.mean_zero = true;
    fam.max_mode = resolved_mode(g, 8);
    GridFunction zeta = generate(fam, g, seed);
    recs.push_back(annulus_mean_zero_l1(zeta, true));
    recs.back().params["seed_r"] = r;
    recs.push_back(annulus_mean_zero_l1(zeta, false));
    recs.back().params["seed_r"] = r;
  }
  return recs;
}

Records check_convex_mean_value(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  int which = static_cast<int>(seed % 3);
  Grid g = which == 2 ? Grid::annulus(1.0, 0.15, cfg.annulus_n_rho * cfg.grid_scale,
                                      cfg.annulus_n_theta * cfg.grid_scale)
                      : Grid::annulus(1.0, 0.0, cfg.annulus_n_rho * cfg.grid_scale,
                                      cfg.annulus_n_theta * cfg.grid_scale);
  ConvexMask mask = which == 0 ? disk_mask(g)
                   : which == 1 ? half_disk_mask(g)
                                : wedge_chord_mask(g, rng.uniform(0.0, kTwoPi));
  RandomFamily fam;
  fam.max_mode = resolved_mode(g, 6);
  GridFunction xi = generate(fam, g, rng.raw());
  // reference node: a mask member away from the mask boundary
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (mask.nodes[i]) members.push_back(i);
  std::size_t node = members[members.size() / 2 + rng.integer(members.size() / 4)];
  InequalityRecord rec = convex_mean_value(xi, mask, node);
  rec.params["mask"] = which;
  rec.finalize(0.0);
  return {rec};
}

Records check_oscillation_c0(const SuiteConfig& cfg, const Constants& constants,
                             std::uint64_t seed) {
  Grid g = cfg_annulus(cfg);
  RandomFamily fam;
  fam.max_mode = resolved_mode(g, 8);
  GridFunction xi = generate(fam, g, seed);
  Records recs;
  for (double p : {2.5, 4.0}) {
    std::string key = "oscillation_bound:p=" + std::to_string(static_cast<int>(p * 10));
    auto it = constants.find(key);
    double cp = (it == constants.end()) ? 1.0 : it->second;
    InequalityRecord osc =
        oscillation_bound(xi, p, cp, InequalityRecord::Provenance::Fitted, cfg.slack_fitted);
    osc.constant_key = key;
    osc.finalize(cfg.slack_fitted);
    recs.push_back(osc);
    // companion record with (1 + C_p); calibration tracks the oscillation key
    InequalityRecord c0 =
        c0_embedding(xi, p, cp, InequalityRecord::Provenance::Fitted, cfg.slack_fitted);
    c0.finalize(cfg.slack_fitted);
    recs.push_back(c0);
  }
  return recs;
}

Records check_l2_from_l1(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Grid g = Grid::annulus(1.0, 0.0, cfg.annulus_n_rho * cfg.grid_scale,
                         cfg.annulus_n_theta * cfg.grid_scale);
  RandomFamily fam;
  fam.supported = true;
  fam.max_mode = resolved_mode(g, 6);
  GridFunction zeta = generate(fam, g, seed);
  return {l2_from_l1_gradient(zeta)};
}

Records check_pq_embedding(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Grid g = Grid::annulus(1.0, 0.0, cfg.annulus_n_rho * cfg.grid_scale,
                         cfg.annulus_n_theta * cfg.grid_scale);
  RandomFamily fam;
  fam.supported = true;
  fam.max_mode = resolved_mode(g, 6);
  GridFunction xi = generate(fam, g, seed);
  Records recs;
  for (auto [p, q] : std::vector<std::pair<double, double>>{
           {4.0 / 3.0, 4.0}, {2.0, 4.0}, {2.0, 2.0}}) {
    recs.push_back(pq_embedding(xi, p, q));
  }
  return recs;
}

Records check_section_embeddings(const SuiteConfig& cfg, const Constants& constants,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Grid g = cfg_annulus(cfg);
  MapU u = MapU::sample(g, 2, [&](const Eigen::Vector2d& c) {
    return pt(kPi / 2.0 + 0.2 * std::sin(c[1]) * (c[0] - 0.25), 0.3 * std::cos(c[1]) * c[0]);
  });
  RandomFamily fam;
  fam.components = 2;
  fam.supported = true;
  fam.max_mode = resolved_mode(g, 6);
  GridFunction xi = generate(fam, g, rng.raw());
  Records recs;
  {
    std::string key = "section_pq_embedding:sphere";
    auto it = constants.find(key);
    InequalityRecord rec = section_pq_embedding(u, xi, s.lc, s.M.metric, 2.0, 4.0,
                                                it == constants.end() ? 1.0 : it->second,
                                                InequalityRecord::Provenance::Fitted,
                                                cfg.slack_fitted);
    rec.constant_key = key;
    rec.finalize(cfg.slack_fitted);
    recs.push_back(rec);
  }
  {
    std::string key = "section_c0_bound:sphere";
    auto it = constants.find(key);
    InequalityRecord rec = section_c0_bound(u, xi, s.lc, s.M.metric, 4.0,
                                            it == constants.end() ? 1.0 : it->second,
                                            InequalityRecord::Provenance::Fitted,
                                            cfg.slack_fitted);
    rec.constant_key = key;
    rec.finalize(cfg.slack_fitted);
    recs.push_back(rec);
  }
  return recs;
}

Records check_c0_recursion(const SuiteConfig&, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  double p = 2.0 + 48.0 * rng.uniform();
  RecursionTrace tr = c0_recursion_exponents(p);
  double worst = 0.0;  // any non-decreasing step turns this positive
  for (std::size_t i = 0; i + 1 < tr.q.size(); ++i)
    worst = std::max(worst, tr.q[i + 1] - tr.q[i]);
  if (tr.q.back() > p) worst = std::max(worst, tr.q.back() - p);
  InequalityRecord rec = tolerance_record("c0_recursion", std::max(worst, 0.0), 0.0);
  rec.params["p"] = p;
  rec.params["steps"] = static_cast<double>(tr.stop_index);
  rec.finalize(0.0);
  return {rec};
}

Records check_holder_consistency(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Grid g = cfg_annulus(cfg);
  RandomFamily fam;
  fam.max_mode = resolved_mode(g, 8);
  GridFunction xi = generate(fam, g, seed);
  NormSuite norms(g, 2.0);
  double area = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) area += g.weight(i);
  InequalityRecord rec;
  rec.lemma_id = "holder_consistency";
  rec.lhs = norms.l1(xi);
  rec.rhs_fixed = norms.l2(xi) * std::sqrt(area);
  rec.provenance = InequalityRecord::Provenance::Tolerance;
  rec.finalize(1e-9);
  return {rec};
}

Records check_scale_invariance(const SuiteConfig& cfg, const Constants&, std::uint64_t seed) {
  Rng rng(seed);
  int n_rho = cfg.annulus_n_rho * cfg.grid_scale, n_theta = cfg.annulus_n_theta * cfg.grid_scale;
  double a = rng.normal(), b = rng.normal();
  int k = 1 + static_cast<int>(rng.integer(5));
  auto ratio_at = [&](double R) {
    Grid g = Grid::annulus(R, 0.25 * R, n_rho, n_theta);
    GridFunction z = GridFunction::sample_real(g, [&](const Eigen::Vector2d& c) {
      double s = c[0] / R;
      return a * std::cos(k * c[1]) * s + b * std::sin(c[1]) * s * s;
    });
    InequalityRecord rec = annulus_mean_zero_l1(z, false);
    return rec.lhs / rec.rhs_scaled;
  };
  double r1 = ratio_at(1.0), r2 = ratio_at(2.0);
  return {tolerance_record("scale_invariance", std::abs(r1 - r2) / r1, 1e-8)};
}

AnnulusPair canonical_pair() { return AnnulusPair{1.0, 0.25, 0.75, 0.5, 0.2}; }

GridFunction random_complex_field(const Grid& g, Rng& rng, int kmax = 8) {
  GridFunction re = random_section(g, rng, 1, 1.0, kmax);
  GridFunction im = random_section(g, rng, 1, 1.0, kmax);
  GridFunction out(g, 1);
  for (std::size_t i = 0; i < g.size(); ++i)
    out.values()(static_cast<Eigen::Index>(i), 0) =
        std::complex<double>(re.at(i)[0].real(), im.at(i)[0].real());
  return out;
}

Records check_interior_lp1(const SuiteConfig& cfg, const Constants& constants,
                           std::uint64_t seed) {
  Rng rng(seed);
  Grid g = cfg_annulus(cfg);
  GridFunction xi = random_complex_field(g, rng);
  InequalityRecord rec = interior_lp1_estimate(xi, canonical_pair(), 4.0, 1.0,
                                               InequalityRecord::Provenance::Fitted,
                                               cfg.slack_fitted);
  rec.constant_key = "interior_lp1";
  auto it = constants.find(rec.constant_key);
  rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
  rec.finalize(cfg.slack_fitted);
  return {rec};
}

Records check_interior_gradient(const SuiteConfig& cfg, const Constants& constants,
                                std::uint64_t seed) {
  Rng rng(seed);
  Grid g = cfg_annulus(cfg);
  GridFunction xi = random_complex_field(g, rng);
  InequalityRecord rec = interior_gradient_estimate(xi, canonical_pair(), 4.0, 1.0,
                                                    InequalityRecord::Provenance::Fitted,
                                                    cfg.slack_fitted);
  rec.constant_key = "interior_gradient";
  auto it = constants.find(rec.constant_key);
  rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
  rec.finalize(cfg.slack_fitted);
  return {rec};
}

Records check_gradient_shift_invariance(const SuiteConfig& cfg, const Constants&,
                                        std::uint64_t seed) {
  Rng rng(seed);
  Grid g = cfg_annulus(cfg);
  GridFunction xi = random_complex_field(g, rng, 6);
  InequalityRecord base = interior_gradient_estimate(xi, canonical_pair(), 4.0, 1.0,
                                                     InequalityRecord::Provenance::Fitted, 0.0);
  double worst = 0.0;
  for (double c : {10.0, 100.0}) {
    GridFunction shifted = xi;
    for (std::size_t i = 0; i < g.size(); ++i)
      shifted.values()(static_cast<Eigen::Index>(i), 0) += c;
    InequalityRecord rec = interior_gradient_estimate(shifted, canonical_pair(), 4.0, 1.0,
                                                      InequalityRecord::Provenance::Fitted, 0.0);
    worst = std::max(worst, std::abs(rec.lhs - base.lhs) / std::max(1.0, base.lhs));
    worst = std::max(worst,
                     std::abs(rec.rhs_scaled - base.rhs_scaled) / std::max(1.0, base.rhs_scaled));
  }
  return {tolerance_record("gradient_shift_invariance", worst, 1e-9)};
}

Records check_cr_interior(const SuiteConfig& cfg, const Constants& constants,
                          std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Grid g = cfg_annulus(cfg);
  Records recs;
  {
    // sphere target, Levi-Civita pullback, nijenhuis zeroth-order term
    AlmostComplex J{2, s.M.complex_structure};
    MapU u = MapU::sample(g, 2, [&](const Eigen::Vector2d& c) {
      return pt(kPi / 2.0 + 0.2 * std::sin(c[1]) * (c[0] - 0.5), 0.3 * std::cos(c[1]));
    });
    AlmostComplex Jc = J;
    CROperator D{s.lc, J.J,
                 [Jc](const Vec& x, const Vec& w, const Vec& xi_v) {
                   return nijenhuis(Jc, x, w, xi_v);
                 }};
    GridFunction xi = random_section(g, rng, 2, 1.0, 8);
    InequalityRecord rec = cr_interior_estimate(u, xi, D, s.M.metric, canonical_pair(), 4.0,
                                                1.0, InequalityRecord::Provenance::Fitted,
                                                cfg.slack_fitted);
    rec.constant_key = "cr_interior:sphere";
    auto it = constants.find(rec.constant_key);
    rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
    rec.params["target"] = 0.0;
    rec.finalize(cfg.slack_fitted);
    recs.push_back(rec);
  }
  {
    // flat R^4 with a non-integrable structure and its nijenhuis term
    BuiltinManifold e4 = builtin_euclidean(4);
    AlmostComplex J = rotated_J();
    TangentConnection cj = j_linear_connection(flat_connection(4), J);
    AlmostComplex Jc = J;
    CROperator D{cj, J.J,
                 [Jc](const Vec& x, const Vec& w, const Vec& xi_v) {
                   return nijenhuis(Jc, x, w, xi_v);
                 }};
    MapU u = MapU::sample(g, 4, [&](const Eigen::Vector2d& c) {
      return pt4(0.3 * std::cos(c[1]), 0.3 * std::sin(c[1]), 0.2 * (c[0] - 0.5), 0.1);
    });
    GridFunction xi = random_section(g, rng, 4, 1.0, 8);
    InequalityRecord rec = cr_interior_estimate(u, xi, D, e4.metric, canonical_pair(), 4.0,
                                                1.0, InequalityRecord::Provenance::Fitted,
                                                cfg.slack_fitted);
    rec.constant_key = "cr_interior:r4";
    auto it = constants.find(rec.constant_key);
    rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
    rec.params["target"] = 1.0;
    rec.finalize(cfg.slack_fitted);
    recs.push_back(rec);
  }
  return recs;
}

Records check_global_torus(const SuiteConfig& cfg, const Constants& constants,
                           std::uint64_t seed) {
  Rng rng(seed);
  const SphereCtx& s = sphere_ctx();
  Grid g = cfg_torus(cfg);
  AlmostComplex J{2, s.M.complex_structure};
  MapU u = sphere_torus_map(g, rng, 0.2);
  AlmostComplex Jc = J;
  CROperator D{s.lc, J.J,
               [Jc](const Vec& x, const Vec& w, const Vec& xi_v) {
                 return nijenhuis(Jc, x, w, xi_v);
               }};
  GridFunction xi = random_section(g, rng, 2, 1.0, 8);
  InequalityRecord rec = global_estimate(u, xi, D, s.M.metric, 4.0, 1.0,
                                         InequalityRecord::Provenance::Fitted,
                                         cfg.slack_fitted);
  rec.constant_key = "global_torus";
  auto it = constants.find(rec.constant_key);
  rec.constant_used = (it == constants.end()) ? 1.0 : it->second;
  rec.finalize(cfg.slack_fitted);
  return {rec};
}

Records check_ellipticity_floor(const SuiteConfig& cfg, const Constants&, std::uint64_t) {
  Grid g = cfg_torus(cfg);
  double floor = dbar_symbol_floor(g);
  InequalityRecord rec;
  rec.lemma_id = "ellipticity_floor";
  rec.lhs = 0.5;
  rec.rhs_fixed = floor;
  rec.provenance = InequalityRecord::Provenance::Tolerance;
  rec.finalize(0.0);
  return {rec};
}

}  // namespace

// ----- generator ---------------------------------------------------------

GridFunction generate(const RandomFamily& family, const Grid& grid, std::uint64_t seed) {
  Rng rng(seed);
  const int comps = family.components;
  GridFunction out(grid, comps);

  if (grid.kind() == Grid::Kind::Circle) {
    if (family.max_mode > grid.axis_size(0) / 4)
      throw ResolutionError("max mode unresolvable on this grid");
    int kmax = family.max_mode;
    if (kmax < 1) throw ResolutionError("max mode unresolvable on this grid");
    for (int c = 0; c < comps; ++c) {
      std::vector<double> ac, bc;
      for (int k = 1; k <= kmax; ++k) {
        double decay = family.amplitude * std::pow(k, -family.decay);
        ac.push_back(rng.normal() * decay);
        bc.push_back(rng.normal() * decay);
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double th = grid.coords(i)[0], s = 0.0;
        for (int k = 1; k <= kmax; ++k)
          s += ac[static_cast<std::size_t>(k - 1)] * std::cos(k * th) +
               bc[static_cast<std::size_t>(k - 1)] * std::sin(k * th);
        out.values()(static_cast<Eigen::Index>(i), c) = s;
      }
    }
  } else {
    // tensor trig basis: periodic in periodic axes, half-period cosines in
    // bounded ones (smooth up to the boundary)
    int n0 = grid.axis_size(0), n1 = grid.axis_size(1);
    if (family.max_mode > n0 / 4 || family.max_mode > n1 / 4)
      throw ResolutionError("max mode unresolvable on this grid");
    int k0max = family.max_mode, k1max = family.max_mode;
    if (k0max < 1 || k1max < 1) throw ResolutionError("max mode unresolvable on this grid");
    bool p0 = grid.axis_periodic(0);
    double len0 = grid.axis_length(0);
    double orig0 = grid.coords(0)[0] - (grid.kind() == Grid::Kind::Annulus
                                            ? 0.5 * grid.axis_spacing(0)
                                            : 0.0);
    struct Term {
      double a;
      int k0, k1;
      double ph0, ph1;
    };
    for (int c = 0; c < comps; ++c) {
      std::vector<Term> terms;
      for (int t = 0; t < 12; ++t) {
        Term tm;
        tm.k0 = static_cast<int>(rng.integer(static_cast<std::uint64_t>(k0max) + 1));
        tm.k1 = static_cast<int>(rng.integer(static_cast<std::uint64_t>(k1max) + 1));
        tm.a = family.amplitude * rng.normal() *
               std::pow(1.0 + tm.k0 + tm.k1, -family.decay);
        tm.ph0 = rng.uniform(0.0, kTwoPi);
        tm.ph1 = rng.uniform(0.0, kTwoPi);
        terms.push_back(tm);
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        Eigen::Vector2d z = grid.coords(i);
        double s = 0.0;
        for (const Term& tm : terms) {
          double f0 = p0 ? std::cos(tm.k0 * kTwoPi * (z[0] - orig0) / len0 + tm.ph0)
                         : std::cos(tm.k0 * kPi * (z[0] - orig0) / len0 + tm.ph0);
          double f1 = std::cos(tm.k1 * z[1] + tm.ph1);
          s += tm.a * f0 * f1;
        }
        out.values()(static_cast<Eigen::Index>(i), c) = s;
      }
    }
  }

  if (family.supported) {
    if (grid.kind() != Grid::Kind::Annulus)
      throw std::invalid_argument("supported fields need an annulus grid");
    double R = grid.outer_radius(), r = grid.inner_radius();
    double ds = grid.axis_spacing(0);
    double lo = r + 3.0 * ds, hi = R - 3.0 * ds;
    double w = 0.25 * (R - r);
    auto step = [](double u) {
      if (u <= 0.0) return 0.0;
      if (u >= 1.0) return 1.0;
      double u3 = u * u * u;
      return 10.0 * u3 - 15.0 * u3 * u + 6.0 * u3 * u * u;
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double rho = grid.coords(i)[0];
      double window = step((rho - lo) / w) * step((hi - rho) / w);
      out.values().row(static_cast<Eigen::Index>(i)) *= window;
    }
  }

  if (family.mean_zero) {
    Eigen::VectorXcd mean = out.integral();
    double area = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) area += grid.weight(i);
    mean /= area;
    for (std::size_t i = 0; i < grid.size(); ++i)
      out.values().row(static_cast<Eigen::Index>(i)) -= mean.transpose();
  }
  return out;
}

// ----- registry / calibrate / run ----------------------------------------

const std::vector<CheckDef>& check_registry() {
  using P = InequalityRecord::Provenance;
  static const std::vector<CheckDef> registry = {
      {"levi_civita_oracle", "riemann", P::Tolerance, {}, check_levi_civita_oracle},
      {"torsion_free", "riemann", P::Tolerance, {}, check_torsion_free},
      {"metric_compat", "riemann", P::Tolerance, {}, check_metric_compat},
      {"lc_uniqueness", "riemann", P::Tolerance, {}, check_lc_uniqueness},
      {"covariant_locality", "riemann", P::Tolerance, {}, check_covariant_locality},
      {"splitting_scaling", "riemann", P::Tolerance, {}, check_splitting_scaling},

      {"latitude_rotation", "transport", P::Tolerance, {}, check_latitude_rotation},
      {"gauss_bonnet", "transport", P::Tolerance, {}, check_gauss_bonnet},
      {"rectangle_holonomy", "transport", P::Fitted, {"rectangle_holonomy"},
       check_rectangle_holonomy},
      {"loop_holonomy", "transport", P::Fitted, {"loop_holonomy"}, check_loop_holonomy},
      {"transport_orthogonality", "transport", P::Tolerance, {},
       check_transport_orthogonality},
      {"transport_derivative", "transport", P::Fitted, {"transport_derivative"},
       check_transport_derivative},
      {"phi_expansion", "transport", P::Fitted, {"phi_expansion"}, check_phi_expansion},
      {"phi_lipschitz", "transport", P::Fitted, {"phi_lipschitz"}, check_phi_lipschitz},
      {"phi_quadratic_slope", "transport", P::Tolerance, {}, check_phi_quadratic_slope},

      {"total_j_algebra", "complexlin", P::Tolerance, {}, check_total_j_algebra},
      {"dbar_type", "complexlin", P::Tolerance, {}, check_dbar_type},
      {"nijenhuis_antilinearity", "complexlin", P::Tolerance, {},
       check_nijenhuis_antilinearity},
      {"nijenhuis_oracle", "complexlin", P::Tolerance, {}, check_nijenhuis_oracle},
      {"j_commutation", "complexlin", P::Tolerance, {}, check_j_commutation},
      {"djs_connection_independence", "complexlin", P::Tolerance, {},
       check_djs_connection_independence},
      {"djs_tangency", "complexlin", P::Tolerance, {}, check_djs_tangency},
      {"djs_bracket_match", "complexlin", P::Tolerance, {}, check_djs_bracket_match},
      {"dbar_splitting", "complexlin", P::Tolerance, {}, check_dbar_splitting},
      {"symbol_injectivity", "complexlin", P::Tolerance, {}, check_symbol_injectivity},
      {"nexp_zero", "complexlin", P::Tolerance, {}, check_nexp_zero},
      {"nexp_flat", "complexlin", P::Tolerance, {}, check_nexp_flat},
      {"nexp_quadratic_slope", "complexlin", P::Tolerance, {}, check_nexp_quadratic_slope},
      {"admissibility", "complexlin", P::Fitted, {"admissibility_c0"}, check_admissibility},

      {"fourier_poincare", "sobolev", P::Paper, {}, check_fourier_poincare},
      {"loop_pairing_bound", "sobolev", P::Fitted, {"loop_pairing_bound"}, check_loop_pairing},
      {"annulus_mean_zero_l1", "sobolev", P::Paper, {}, check_annulus_mean_zero},
      {"convex_mean_value", "sobolev", P::Paper, {}, check_convex_mean_value},
      {"oscillation_c0", "sobolev", P::Fitted,
       {"oscillation_bound:p=25", "oscillation_bound:p=40"}, check_oscillation_c0},
      {"l2_from_l1_gradient", "sobolev", P::Paper, {}, check_l2_from_l1},
      {"pq_embedding", "sobolev", P::Paper, {}, check_pq_embedding},
      {"section_embeddings", "sobolev", P::Fitted,
       {"section_pq_embedding:sphere", "section_c0_bound:sphere"}, check_section_embeddings},
      {"c0_recursion", "sobolev", P::Tolerance, {}, check_c0_recursion},
      {"holder_consistency", "sobolev", P::Tolerance, {}, check_holder_consistency},
      {"scale_invariance", "sobolev", P::Tolerance, {}, check_scale_invariance},

      {"interior_lp1", "elliptic", P::Fitted, {"interior_lp1"}, check_interior_lp1},
      {"interior_gradient", "elliptic", P::Fitted, {"interior_gradient"},
       check_interior_gradient},
      {"gradient_shift_invariance", "elliptic", P::Tolerance, {},
       check_gradient_shift_invariance},
      {"cr_interior", "elliptic", P::Fitted, {"cr_interior:sphere", "cr_interior:r4"},
       check_cr_interior},
      {"global_torus", "elliptic", P::Fitted, {"global_torus"}, check_global_torus},
      {"ellipticity_floor", "elliptic", P::Tolerance, {}, check_ellipticity_floor},
  };
  return registry;
}

bool suite_known(const std::string& suite) {
  if (suite == "all") return true;
  for (const CheckDef& c : check_registry())
    if (c.suite == suite) return true;
  return false;
}

int worker_count() {
  if (const char* env = std::getenv("GEOMEST_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(hw);
}

namespace {

void parallel_for(int n_tasks, const std::function<void(int)>& fn) {
  int workers = std::min(worker_count(), n_tasks);
  if (workers <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<const CheckDef*> suite_checks(const std::string& suite) {
  std::vector<const CheckDef*> out;
  for (const CheckDef& c : check_registry())
    if (suite == "all" || c.suite == suite) out.push_back(&c);
  return out;
}

}  // namespace

ConstantsFile calibrate(const SuiteConfig& cfg) {
  if (!suite_known(cfg.suite)) throw std::invalid_argument("unknown suite: " + cfg.suite);
  std::vector<const CheckDef*> checks = suite_checks(cfg.suite);
  int n_seeds = std::max(50, cfg.sample_count);

  struct Slot {
    std::map<std::string, double> ratios;  // largest clamped ratio per key
  };
  std::vector<const CheckDef*> fitted;
  for (const CheckDef* c : checks)
    if (!c->constant_keys.empty()) fitted.push_back(c);

  std::vector<Slot> slots(fitted.size() * static_cast<std::size_t>(n_seeds));
  parallel_for(static_cast<int>(slots.size()), [&](int idx) {
    const CheckDef* check = fitted[static_cast<std::size_t>(idx) / n_seeds];
    int s = idx % n_seeds;
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
    Records recs = check->run(cfg, {}, seed);
    for (const InequalityRecord& r : recs) {
      if (r.constant_key.empty() || r.rhs_scaled <= 0.0) continue;
      double ratio = std::max(0.0, r.lhs - r.rhs_fixed) / r.rhs_scaled;
      auto& m = slots[static_cast<std::size_t>(idx)].ratios;
      auto it = m.find(r.constant_key);
      if (it == m.end() || ratio > it->second) m[r.constant_key] = ratio;
    }
  });

  ConstantsFile file;
  file.seed = cfg.seed;
  file.sample_count = n_seeds;
  file.label = cfg.label;
  std::map<std::string, double> best;  // a key is present once some sample had
                                       // a live structural term
  for (const Slot& slot : slots)
    for (const auto& [key, ratio] : slot.ratios) {
      auto it = best.find(key);
      if (it == best.end() || ratio > it->second) best[key] = ratio;
    }
  for (const CheckDef* c : fitted)
    for (const std::string& key : c->constant_keys) {
      auto it = best.find(key);
      if (it == best.end())
        throw CalibrationError("degenerate structural term while calibrating " + key);
      file.entries[key] = ConstantEntry{1.1 * it->second, "fitted"};
    }
  // paper-constant checks appear with their provenance and no value
  for (const CheckDef* c : checks)
    if (c->provenance == InequalityRecord::Provenance::Paper)
      file.entries[c->id] = ConstantEntry{0.0, "paper"};
  return file;
}

Report run_suite(const SuiteConfig& cfg, const ConstantsFile& constants) {
  if (!suite_known(cfg.suite)) throw std::invalid_argument("unknown suite: " + cfg.suite);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<const CheckDef*> checks = suite_checks(cfg.suite);
  // fitted checks need their constants up front
  std::map<std::string, double> values;
  for (const CheckDef* c : checks)
    for (const std::string& key : c->constant_keys) values[key] = constants.fitted(key);

  int n_seeds = cfg.sample_count;
  std::vector<Records> slots(checks.size() * static_cast<std::size_t>(n_seeds));
  parallel_for(static_cast<int>(slots.size()), [&](int idx) {
    const CheckDef* check = checks[static_cast<std::size_t>(idx) / n_seeds];
    int s = idx % n_seeds;
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
    Records recs;
    try {
      recs = check->run(cfg, values, seed);
    } catch (const std::exception& e) {
      InequalityRecord failed;
      failed.lemma_id = check->id;
      failed.lhs = std::numeric_limits<double>::infinity();
      failed.rhs_fixed = 0.0;
      failed.provenance = check->provenance;
      failed.note = e.what();
      failed.finalize(0.0);
      recs.push_back(failed);
    }
    for (InequalityRecord& r : recs) r.params["seed"] = static_cast<double>(seed);
    slots[static_cast<std::size_t>(idx)] = std::move(recs);
  });

  Report report;
  report.constants_version = constants.digest();
  for (Records& recs : slots)
    for (InequalityRecord& r : recs) report.records.push_back(std::move(r));
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const InequalityRecord& a, const InequalityRecord& b) {
                     if (a.lemma_id != b.lemma_id) return a.lemma_id < b.lemma_id;
                     return a.params.at("seed") < b.params.at("seed");
                   });
  report.total = static_cast<int>(report.records.size());
  for (const InequalityRecord& r : report.records) {
    if (!r.pass) ++report.failed;
    if (r.ratio > report.worst_ratio ||
        (r.ratio == report.worst_ratio && report.worst_id.empty())) {
      report.worst_ratio = r.ratio;
      report.worst_id = r.lemma_id;
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  return report;
}

int report_exit_code(const Report& report) { return report.failed == 0 ? 0 : 1; }

}  // namespace geomest
