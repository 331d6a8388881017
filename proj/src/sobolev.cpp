#include "geomest/sobolev.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "geomest/rng.hpp"

namespace geomest {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* provenance_name(InequalityRecord::Provenance p) {
  switch (p) {
    case InequalityRecord::Provenance::Paper: return "paper";
    case InequalityRecord::Provenance::Fitted: return "fitted";
    default: return "tolerance";
  }
}

InequalityRecord fourier_poincare(const GridFunction& zeta) {
  if (zeta.grid().kind() != Grid::Kind::Circle)
    throw std::invalid_argument("fourier_poincare needs a circle grid");
  NormSuite norms(zeta.grid(), 2.0);
  double l2 = norms.l2(zeta);
  double mean = zeta.integral().norm();
  if (mean > 1e-8 * std::max(l2, 1e-300)) {
    std::ostringstream os;
    os << "mean-zero precondition violated: |mean| = " << mean;
    throw PreconditionError(os.str());
  }
  GridFunction d = zeta.derivative(0);
  InequalityRecord rec;
  rec.lemma_id = "fourier_poincare";
  rec.lhs = l2 * l2;
  rec.rhs_scaled = norms.l2(d) * norms.l2(d);
  rec.constant_used = 1.0;
  rec.provenance = InequalityRecord::Provenance::Paper;
  rec.params["n"] = static_cast<double>(zeta.grid().axis_size(0));
  rec.finalize(1e-10);
  return rec;
}

InequalityRecord loop_pairing_bound(const PathCurve& alpha, const TangentConnection& conn,
                                    const MetricField& g, const GridFunction& xi,
                                    const GridFunction& zeta, double constant,
                                    InequalityRecord::Provenance prov, double slack) {
  if (!alpha.closed(1e-10)) throw std::invalid_argument("loop pairing needs a closed curve");
  const Grid& grid = xi.grid();
  if (grid.kind() != Grid::Kind::Circle)
    throw std::invalid_argument("sections must live on a circle grid");
  const int k = xi.components();

  // covariant theta-derivative of the sections along alpha
  GridFunction dxi = xi.derivative(0), dzeta = zeta.derivative(0);
  GridFunction nxi = dxi, nzeta = dzeta;
  FiberGram gram(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid.coords(i)[0];
    Vec p = alpha.x(t);
    Mat th = conn.theta(p, alpha.dx(t));
    nxi.values().row(static_cast<Eigen::Index>(i)) +=
        (th * xi.at(i).real()).cast<std::complex<double>>().transpose();
    nzeta.values().row(static_cast<Eigen::Index>(i)) +=
        (th * zeta.at(i).real()).cast<std::complex<double>>().transpose();
    gram[i] = g.g(p);
  }
  double pairing = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Vec a = nxi.at(i).real(), b = zeta.at(i).real();
    pairing += grid.weight(i) * a.dot(gram[i] * b);
  }
  NormSuite norms(grid, 2.0);
  double nxi2 = norms.lp(nxi, 2.0, &gram), nzeta2 = norms.lp(nzeta, 2.0, &gram);
  double xi2 = norms.lp(xi, 2.0, &gram), zeta2 = norms.lp(zeta, 2.0, &gram);

  // loop size terms in g
  int nq = 2 * std::max(64, alpha.n_steps);
  double h = (alpha.b - alpha.a) / nq;
  double l1 = 0.0, l2sq = 0.0;
  for (int i = 0; i <= nq; ++i) {
    double t = alpha.a + i * h;
    Vec dx = alpha.dx(t);
    double sp2 = dx.dot(g.g(alpha.x(t)) * dx);
    double w = (i == 0 || i == nq) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    l1 += w * std::sqrt(sp2);
    l2sq += w * sp2;
  }
  l1 *= h / 3.0;
  l2sq *= h / 3.0;

  InequalityRecord rec;
  rec.lemma_id = "loop_pairing_bound";
  rec.lhs = std::abs(pairing);
  rec.rhs_fixed = nxi2 * nzeta2;
  rec.rhs_scaled = std::min(l1, l2sq) * (xi2 + nxi2) * zeta2;
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["k"] = k;
  rec.params["loop_l1"] = l1;
  rec.finalize(slack);
  return rec;
}

InequalityRecord annulus_mean_zero_l1(const GridFunction& zeta, bool log_variant) {
  const Grid& grid = zeta.grid();
  if (grid.kind() != Grid::Kind::Annulus)
    throw std::invalid_argument("annulus_mean_zero_l1 needs an annulus grid");
  double R = grid.outer_radius(), r = grid.inner_radius();
  if (log_variant && r <= 0.0)
    throw std::invalid_argument("log variant needs r > 0");
  NormSuite norms(grid, 2.0);
  double l1 = norms.l1(zeta);
  double mean = zeta.integral().norm();
  if (mean > 1e-8 * std::max(l1, 1e-300))
    throw PreconditionError("mean-zero precondition violated: |mean| = " + std::to_string(mean));
  double C = log_variant ? std::sqrt(kPi / 2.0) * (1.0 + std::sqrt(std::log(R / r)))
                         : 125.0 * std::sqrt(2.0 * kPi) / 4.0;
  InequalityRecord rec;
  rec.lemma_id = log_variant ? "annulus_mean_zero_l1_log" : "annulus_mean_zero_l1_uniform";
  rec.lhs = l1;
  rec.rhs_scaled = R * R * norms.grad_lp(zeta, 2.0);
  rec.constant_used = C;
  rec.provenance = InequalityRecord::Provenance::Paper;
  rec.params["R"] = R;
  rec.params["r"] = r;
  rec.finalize(0.0);
  return rec;
}

ConvexMask disk_mask(const Grid& g) {
  if (g.inner_radius() != 0.0) throw std::invalid_argument("disk mask needs r = 0");
  ConvexMask m;
  m.name = "disk";
  m.nodes.assign(g.size(), 1);
  m.diameter = 2.0 * g.outer_radius();
  return m;
}

ConvexMask half_disk_mask(const Grid& g) {
  if (g.inner_radius() != 0.0) throw std::invalid_argument("half-disk mask needs r = 0");
  ConvexMask m;
  m.name = "half_disk";
  m.nodes.assign(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.cartesian(i)[0] > 0.0) m.nodes[i] = 1;
  m.diameter = 2.0 * g.outer_radius();
  return m;
}

ConvexMask wedge_chord_mask(const Grid& g, double start_angle) {
  double r = g.inner_radius(), R = g.outer_radius();
  if (r <= 0.0) throw std::invalid_argument("wedge mask needs r > 0");
  ConvexMask m;
  m.name = "wedge_chord";
  m.nodes.assign(g.size(), 0);
  double mid = start_angle + kPi / 3.0;  // bisector of the 2pi/3 wedge
  Eigen::Vector2d dir(std::cos(mid), std::sin(mid));
  for (std::size_t i = 0; i < g.size(); ++i) {
    Eigen::Vector2d c = g.coords(i);
    double dt = std::remainder(c[1] - start_angle, 2.0 * kPi);
    if (dt < 0.0 || dt > 2.0 * kPi / 3.0) continue;
    // beyond the chord tangent to the inner circle, orthogonal to the bisector
    if (g.cartesian(i).dot(dir) > r) m.nodes[i] = 1;
  }
  m.diameter = 2.0 * R * std::sin(kPi / 3.0);
  return m;
}

bool mask_convex_probe(const Grid& grid, const std::vector<char>& mask, int pairs) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (mask[i]) members.push_back(i);
  if (members.size() < 4) return true;
  double cell = std::max(grid.axis_spacing(0), grid.outer_radius() * grid.axis_spacing(1));
  Rng rng(12345);
  for (int t = 0; t < pairs; ++t) {
    Eigen::Vector2d a = grid.cartesian(members[rng.integer(members.size())]);
    Eigen::Vector2d b = grid.cartesian(members[rng.integer(members.size())]);
    Eigen::Vector2d midpoint = 0.5 * (a + b);
    double best_any = std::numeric_limits<double>::infinity();
    double best_member = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double d = (grid.cartesian(i) - midpoint).norm();
      best_any = std::min(best_any, d);
      if (mask[i]) best_member = std::min(best_member, d);
    }
    // a midpoint with no node nearby fell into a hole of the footprint;
    // one whose nearest nodes are all non-members lies outside the mask
    if (best_any > 2.0 * cell) return false;
    if (best_member > best_any + 1.5 * cell) return false;
  }
  return true;
}

InequalityRecord convex_mean_value(const GridFunction& xi, const ConvexMask& mask,
                                   std::size_t node_x) {
  const Grid& grid = xi.grid();
  if (!mask.nodes[node_x]) throw std::invalid_argument("reference node not in mask");
  if (!mask_convex_probe(grid, mask.nodes)) throw std::invalid_argument("mask is not convex");
  double area = 0.0;
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(xi.components());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!mask.nodes[i]) continue;
    area += grid.weight(i);
    mean += grid.weight(i) * xi.at(i);
  }
  mean /= area;
  Eigen::Vector2d x = grid.cartesian(node_x);
  auto [d1, d2] = xi.cartesian_gradient();
  auto grad_norm = [&](std::size_t i) {
    double a = d1.at(i).norm(), b = d2.at(i).norm();
    return std::sqrt(a * a + b * b);
  };
  // kernel integral with local polar patch of radius 2 * cell around x
  double cell = std::max(grid.axis_spacing(0), grid.outer_radius() * grid.axis_spacing(1));
  double r_loc = 2.0 * cell;
  double integral = 2.0 * kPi * r_loc * grad_norm(node_x);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!mask.nodes[i]) continue;
    double d = (grid.cartesian(i) - x).norm();
    if (d <= r_loc) continue;
    integral += grid.weight(i) * grad_norm(i) / d;
  }
  double r0 = 0.5 * mask.diameter;
  InequalityRecord rec;
  rec.lemma_id = "convex_mean_value";
  rec.lhs = (mean - xi.at(node_x)).norm();
  rec.rhs_scaled = 2.0 * r0 * r0 / area * integral;
  rec.constant_used = 1.0;
  rec.provenance = InequalityRecord::Provenance::Paper;
  rec.params["area"] = area;
  rec.params["diameter"] = mask.diameter;
  rec.finalize(0.0);
  return rec;
}

namespace {

void require_annulus_half(const Grid& g) {
  if (g.kind() != Grid::Kind::Annulus) throw std::invalid_argument("needs an annulus grid");
  if (g.inner_radius() > 0.5 * g.outer_radius())
    throw PreconditionError("needs r <= R/2");
}

}  // namespace

InequalityRecord oscillation_bound(const GridFunction& xi, double p, double c_p,
                                   InequalityRecord::Provenance prov, double slack,
                                   std::uint64_t pair_seed) {
  require_annulus_half(xi.grid());
  if (p <= 2.0) throw std::invalid_argument("needs p > 2");
  const Grid& grid = xi.grid();
  double osc = 0.0;
  if (xi.components() == 1 && xi.values().imag().cwiseAbs().maxCoeff() == 0.0) {
    double lo = xi.values().real().minCoeff(), hi = xi.values().real().maxCoeff();
    osc = hi - lo;
  } else {
    Rng rng(pair_seed);
    std::size_t n = grid.size();
    for (int t = 0; t < 4096; ++t)
      osc = std::max(osc, (xi.at(rng.integer(n)) - xi.at(rng.integer(n))).norm());
  }
  NormSuite norms(grid, p);
  double R = grid.outer_radius();
  InequalityRecord rec;
  rec.lemma_id = "oscillation_bound";
  rec.lhs = osc;
  rec.rhs_scaled = std::pow(R, (p - 2.0) / p) * norms.grad_lp(xi);
  rec.constant_used = c_p;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["R"] = R;
  rec.params["r"] = grid.inner_radius();
  rec.finalize(slack);
  return rec;
}

InequalityRecord c0_embedding(const GridFunction& xi, double p, double c_p,
                              InequalityRecord::Provenance prov, double slack) {
  require_annulus_half(xi.grid());
  if (p <= 2.0) throw std::invalid_argument("needs p > 2");
  const Grid& grid = xi.grid();
  NormSuite norms(grid, p);
  double R = grid.outer_radius();
  InequalityRecord rec;
  rec.lemma_id = "c0_embedding";
  rec.lhs = norms.c0(xi);
  rec.rhs_scaled = std::pow(R, -2.0 / p) * (norms.lp(xi) + R * norms.grad_lp(xi));
  rec.constant_used = 1.0 + c_p;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["R"] = R;
  rec.params["r"] = grid.inner_radius();
  rec.finalize(slack);
  return rec;
}

bool vanishes_on_outer_ring(const GridFunction& f, int rings, double rel_tol) {
  const Grid& g = f.grid();
  int n_rho = g.axis_size(0), n_theta = g.axis_size(1);
  double c0 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) c0 = std::max(c0, f.norm_at(i));
  if (c0 == 0.0) return true;
  double worst = 0.0;
  for (int i = n_rho - rings; i < n_rho; ++i)
    for (int j = 0; j < n_theta; ++j) worst = std::max(worst, f.norm_at(g.index(i, j)));
  return worst < rel_tol * c0;
}

InequalityRecord l2_from_l1_gradient(const GridFunction& zeta) {
  if (zeta.grid().kind() != Grid::Kind::Annulus)
    throw std::invalid_argument("needs an annulus grid");
  if (!vanishes_on_outer_ring(zeta))
    throw PreconditionError("field does not vanish at the outer boundary");
  NormSuite norms(zeta.grid(), 2.0);
  InequalityRecord rec;
  rec.lemma_id = "l2_from_l1_gradient";
  rec.lhs = norms.l2(zeta);
  rec.rhs_scaled = norms.grad_lp(zeta, 1.0);
  rec.constant_used = 1.0;
  rec.provenance = InequalityRecord::Provenance::Paper;
  rec.params["R"] = zeta.grid().outer_radius();
  rec.params["r"] = zeta.grid().inner_radius();
  rec.finalize(0.0);
  return rec;
}

InequalityRecord pq_embedding(const GridFunction& xi, double p, double q) {
  if (1.0 - 2.0 / p < -2.0 / q - 1e-12)
    throw std::invalid_argument("exponent condition 1 - 2/p >= -2/q violated");
  if (!vanishes_on_outer_ring(xi))
    throw PreconditionError("field does not vanish at the outer boundary");
  const Grid& grid = xi.grid();
  NormSuite norms(grid, p);
  double R = grid.outer_radius();
  double expo = 1.0 - 2.0 / p + 2.0 / q;
  InequalityRecord rec;
  rec.lemma_id = "pq_embedding";
  rec.lhs = norms.lp(xi, q);
  rec.rhs_scaled = std::pow(R, expo) * norms.grad_lp(xi, p);
  rec.constant_used = std::max(2.0, q) * std::pow(kPi, 0.5 * expo);
  rec.provenance = InequalityRecord::Provenance::Paper;
  rec.params["p"] = p;
  rec.params["q"] = q;
  rec.params["R"] = R;
  rec.params["r"] = grid.inner_radius();
  rec.finalize(0.0);
  return rec;
}

InequalityRecord section_pq_embedding(const MapU& u, const GridFunction& xi,
                                      const TangentConnection& conn, const MetricField& g,
                                      double p, double q, double constant,
                                      InequalityRecord::Provenance prov, double slack) {
  if (1.0 - 2.0 / p < -2.0 / q - 1e-12)
    throw std::invalid_argument("exponent condition 1 - 2/p >= -2/q violated");
  if (!vanishes_on_outer_ring(xi))
    throw PreconditionError("section does not vanish at the outer boundary");
  const Grid& grid = u.domain;
  FiberGram gram = fiber_gram_along(g, u.values);
  NormSuite norms(grid, p);
  auto [c1, c2] = pullback_covariant(conn, u, xi);
  double nabla_p = norms.pair_lp(c1, c2, p, &gram);
  // |xi (x) du|_p with pointwise |xi|_g |du|_g
  GridFunction xdu(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double xin = node_norm(xi.at(i), gram[i]);
    double d1 = node_norm(u.du1.at(i), gram[i]), d2 = node_norm(u.du2.at(i), gram[i]);
    xdu.values()(static_cast<Eigen::Index>(i), 0) = xin * std::sqrt(d1 * d1 + d2 * d2);
  }
  double R = grid.outer_radius();
  double expo = 1.0 - 2.0 / p + 2.0 / q;
  InequalityRecord rec;
  rec.lemma_id = "section_pq_embedding";
  rec.lhs = norms.lp(xi, q, &gram);
  rec.rhs_scaled = std::pow(R, expo) * (nabla_p + norms.lp(xdu, p));
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["q"] = q;
  rec.params["R"] = R;
  rec.finalize(slack);
  return rec;
}

InequalityRecord section_c0_bound(const MapU& u, const GridFunction& xi,
                                  const TangentConnection& conn, const MetricField& g, double p,
                                  double constant, InequalityRecord::Provenance prov,
                                  double slack) {
  if (p <= 2.0) throw std::invalid_argument("needs p > 2");
  const Grid& grid = u.domain;
  if (grid.kind() == Grid::Kind::Annulus) {
    require_annulus_half(grid);
    if (!vanishes_on_outer_ring(xi))
      throw PreconditionError("section does not vanish at the outer boundary");
  }
  FiberGram gram = fiber_gram_along(g, u.values);
  NormSuite norms(grid, p);
  auto [c1, c2] = pullback_covariant(conn, u, xi);
  double du_p = norms.pair_lp(u.du1, u.du2, p, &gram);
  InequalityRecord rec;
  rec.lemma_id = "section_c0_bound";
  rec.lhs = norms.c0(xi, &gram);
  rec.rhs_scaled = norms.lp(xi, p, &gram) + norms.pair_lp(c1, c2, p, &gram);
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["du_p"] = du_p;
  rec.finalize(slack);
  return rec;
}

RecursionTrace c0_recursion_exponents(double p) {
  if (p <= 2.0) throw std::invalid_argument("recursion needs p > 2");
  RecursionTrace tr;
  double q = p * (p + 2.0) / (p - 2.0);
  tr.q.push_back(q);
  for (int i = 0; i < 10000; ++i) {
    double pi = 2.0 * q / (q + 2.0);
    tr.p.push_back(pi);
    double qn = p * pi / (p - pi);
    if (qn <= p) {
      tr.stop_index = static_cast<int>(tr.q.size());
      tr.q.push_back(qn);
      return tr;
    }
    tr.q.push_back(qn);
    q = qn;
  }
  throw NumericError("exponent recursion failed to terminate");
}

}  // namespace geomest
