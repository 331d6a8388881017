#include "geomest/norms.hpp"

#include <cmath>

namespace geomest {

double node_norm(const Eigen::VectorXcd& v) { return v.norm(); }

double node_norm(const Eigen::VectorXcd& v, const Mat& G) {
  double re = v.real().transpose() * G * v.real();
  double im = v.imag().transpose() * G * v.imag();
  return std::sqrt(re + im);
}

namespace {

double reduce_lp(const Grid& grid, double p, const std::vector<char>* mask,
                 const std::function<double(std::size_t)>& point_norm) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    acc += grid.weight(i) * std::pow(point_norm(i), p);
  }
  return std::pow(acc, 1.0 / p);
}

std::function<double(std::size_t)> pointwise(const GridFunction& f, const FiberGram* gram) {
  if (gram) {
    const FiberGram* g = gram;
    const GridFunction* fp = &f;
    return [fp, g](std::size_t i) { return node_norm(fp->at(i), (*g)[i]); };
  }
  const GridFunction* fp = &f;
  return [fp](std::size_t i) { return node_norm(fp->at(i)); };
}

}  // namespace

double NormSuite::lp(const GridFunction& f, const FiberGram* gram,
                     const std::vector<char>* mask) const {
  return lp(f, p_, gram, mask);
}

double NormSuite::lp(const GridFunction& f, double p, const FiberGram* gram,
                     const std::vector<char>* mask) const {
  return reduce_lp(grid_, p, mask, pointwise(f, gram));
}

double NormSuite::c0(const GridFunction& f, const FiberGram* gram,
                     const std::vector<char>* mask) const {
  auto pn = pointwise(f, gram);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    worst = std::max(worst, pn(i));
  }
  return worst;
}

double NormSuite::grad_lp(const GridFunction& f, const FiberGram* gram,
                          const std::vector<char>* mask) const {
  return grad_lp(f, p_, gram, mask);
}

double NormSuite::grad_lp(const GridFunction& f, double p, const FiberGram* gram,
                          const std::vector<char>* mask) const {
  if (grid_.num_axes() == 1) {
    GridFunction d = f.derivative(0);
    return reduce_lp(grid_, p, mask, pointwise(d, gram));
  }
  auto [d1, d2] = f.cartesian_gradient();
  return pair_lp(d1, d2, p, gram, mask);
}

double NormSuite::lp1(const GridFunction& f, const FiberGram* gram,
                      const std::vector<char>* mask) const {
  return lp(f, p_, gram, mask) + grad_lp(f, p_, gram, mask);
}

double NormSuite::pair_lp(const GridFunction& a, const GridFunction& b, double p,
                          const FiberGram* gram, const std::vector<char>* mask) const {
  auto na = pointwise(a, gram), nb = pointwise(b, gram);
  return reduce_lp(grid_, p, mask, [&](std::size_t i) {
    double x = na(i), y = nb(i);
    return std::sqrt(x * x + y * y);
  });
}

FiberGram fiber_gram_along(const MetricField& g, const GridFunction& u_values) {
  FiberGram out(u_values.size());
  for (std::size_t i = 0; i < u_values.size(); ++i) out[i] = g.g(u_values.at(i).real());
  return out;
}

}  // namespace geomest
