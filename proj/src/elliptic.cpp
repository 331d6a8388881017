#include "geomest/elliptic.hpp"

#include <cmath>
#include <numbers>

namespace geomest {

void AnnulusPair::validate() const {
  if (!(R1 > R2 + delta && r2 - r1 >= delta && R2 > r2 && r1 >= 0.0 && delta > 0.0))
    throw std::invalid_argument("invalid nested annulus pair");
}

std::vector<char> AnnulusPair::inner_mask(const Grid& g) const {
  std::vector<char> mask(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double rho = g.coords(i)[0];
    if (rho >= r2 && rho <= R2) mask[i] = 1;
  }
  return mask;
}

std::vector<char> AnnulusPair::outer_collar_mask(const Grid& g) const {
  std::vector<char> mask(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double rho = g.coords(i)[0];
    if (rho > R2 + 0.5 * delta || rho < r2 - 0.5 * delta) mask[i] = 1;
  }
  return mask;
}

GridFunction dbar_flat(const GridFunction& xi) {
  auto [d1, d2] = xi.cartesian_gradient();
  GridFunction out(xi.grid(), xi.components());
  out.values() = 0.5 * (d1.values() + std::complex<double>(0.0, 1.0) * d2.values());
  return out;
}

InequalityRecord interior_lp1_estimate(const GridFunction& xi, const AnnulusPair& pair, double p,
                                       double constant, InequalityRecord::Provenance prov,
                                       double slack) {
  pair.validate();
  const Grid& g = xi.grid();
  std::vector<char> mask = pair.inner_mask(g);
  NormSuite norms(g, p);
  GridFunction db = dbar_flat(xi);
  InequalityRecord rec;
  rec.lemma_id = "interior_lp1";
  rec.lhs = norms.lp(xi, p, nullptr, &mask) + norms.grad_lp(xi, p, nullptr, &mask);
  rec.rhs_scaled = norms.lp(db, p) + norms.grad_lp(xi, 2.0) + norms.lp(xi, 1.0);
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["delta"] = pair.delta;
  rec.finalize(slack);
  return rec;
}

InequalityRecord interior_gradient_estimate(const GridFunction& xi, const AnnulusPair& pair,
                                            double p, double constant,
                                            InequalityRecord::Provenance prov, double slack) {
  pair.validate();
  const Grid& g = xi.grid();
  // subtract the mean; derivatives are untouched and the record becomes
  // independent of constant shifts
  GridFunction centered = xi;
  Eigen::VectorXcd mean = xi.integral();
  double area = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) area += g.weight(i);
  mean /= area;
  for (std::size_t i = 0; i < g.size(); ++i)
    centered.values().row(static_cast<Eigen::Index>(i)) -= mean.transpose();
  std::vector<char> mask = pair.inner_mask(g);
  NormSuite norms(g, p);
  GridFunction db = dbar_flat(centered);
  InequalityRecord rec;
  rec.lemma_id = "interior_gradient";
  rec.lhs = norms.grad_lp(centered, p, nullptr, &mask);
  rec.rhs_scaled = norms.lp(db, p) + norms.grad_lp(centered, 2.0);
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["delta"] = pair.delta;
  rec.finalize(slack);
  return rec;
}

InequalityRecord cr_interior_estimate(const MapU& u, const GridFunction& xi, const CROperator& D,
                                      const MetricField& g, const AnnulusPair& pair, double p,
                                      double constant, InequalityRecord::Provenance prov,
                                      double slack) {
  pair.validate();
  const Grid& grid = u.domain;
  std::vector<char> mask = pair.inner_mask(grid);
  FiberGram gram = fiber_gram_along(g, u.values);
  NormSuite norms(grid, p);
  auto [c1, c2] = pullback_covariant(D.conn, u, xi);
  // (0,1)-outputs are measured by their e1 slot, the dz-bar coefficient,
  // matching the scalar dbar route of the plain estimates
  FormField Du = cr_pullback(D, u, xi);
  GridFunction xdu(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double xin = node_norm(xi.at(i), gram[i]);
    double d1 = node_norm(u.du1.at(i), gram[i]), d2 = node_norm(u.du2.at(i), gram[i]);
    xdu.values()(static_cast<Eigen::Index>(i), 0) = xin * std::sqrt(d1 * d1 + d2 * d2);
  }
  InequalityRecord rec;
  rec.lemma_id = "cr_interior";
  rec.lhs = norms.pair_lp(c1, c2, p, &gram, &mask);
  rec.rhs_scaled = norms.lp(Du.v1, p, &gram) + norms.pair_lp(c1, c2, 2.0, &gram) +
                   norms.lp(xdu, p);
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["delta"] = pair.delta;
  rec.finalize(slack);
  return rec;
}

InequalityRecord global_estimate(const MapU& u, const GridFunction& xi, const CROperator& D,
                                 const MetricField& g, double p, double constant,
                                 InequalityRecord::Provenance prov, double slack) {
  if (p <= 2.0) throw std::invalid_argument("global estimate needs p > 2");
  if (u.domain.kind() != Grid::Kind::Torus)
    throw std::invalid_argument("global estimate runs on the torus");
  const Grid& grid = u.domain;
  FiberGram gram = fiber_gram_along(g, u.values);
  NormSuite norms(grid, p);
  auto [c1, c2] = pullback_covariant(D.conn, u, xi);
  FormField Du = cr_pullback(D, u, xi);
  RecursionTrace tr = c0_recursion_exponents(p);
  InequalityRecord rec;
  rec.lemma_id = "global_torus";
  rec.lhs = norms.lp(xi, p, &gram) + norms.pair_lp(c1, c2, p, &gram);
  rec.rhs_scaled = norms.lp(Du.v1, p, &gram) + norms.lp(xi, p, &gram);
  rec.constant_used = constant;
  rec.provenance = prov;
  rec.params["p"] = p;
  rec.params["du_p"] = norms.pair_lp(u.du1, u.du2, p, &gram);
  rec.params["recursion_steps"] = static_cast<double>(tr.stop_index);
  rec.params["q1"] = tr.q.front();
  rec.finalize(slack);
  return rec;
}

double dbar_symbol_floor(const Grid& torus) {
  if (torus.kind() != Grid::Kind::Torus) throw std::invalid_argument("needs a torus grid");
  const double two_pi = 2.0 * std::numbers::pi;
  double sx = two_pi / torus.axis_length(0), sy = two_pi / torus.axis_length(1);
  int nx = torus.axis_size(0), ny = torus.axis_size(1);
  double floor = std::numeric_limits<double>::infinity();
  for (int mx = -nx / 2 + 1; mx < nx / 2; ++mx)
    for (int my = -ny / 2 + 1; my < ny / 2; ++my) {
      if (mx == 0 && my == 0) continue;
      double kx = sx * mx, ky = sy * my;
      double mode = std::sqrt(kx * kx + ky * ky);
      // dbar e^{i k.x} = (i kx - ky)/2 e^{i k.x}
      double sym = 0.5 * std::sqrt(kx * kx + ky * ky);
      floor = std::min(floor, sym / mode);
    }
  return floor;
}

}  // namespace geomest
