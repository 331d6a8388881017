#ifndef GEOMEST_NORMS_HPP
#define GEOMEST_NORMS_HPP

#include <vector>

#include "geomest/grid.hpp"
#include "geomest/riemann.hpp"

namespace geomest {

// Pointwise fiber norms: Euclidean by default, or sqrt(v^* G v) with a
// per-node Gram matrix (bundle metric along a map).
using FiberGram = std::vector<Mat>;

double node_norm(const Eigen::VectorXcd& v);
double node_norm(const Eigen::VectorXcd& v, const Mat& G);

// Quadrature-backed norms on a grid. |f|_{p,1} = |f|_p + |df|_p with the
// planar gradient; masked variants restrict the node set (weights kept).
class NormSuite {
 public:
  NormSuite(const Grid& grid, double p) : grid_(grid), p_(p) {
    if (p < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
  }

  double p() const { return p_; }
  const Grid& grid() const { return grid_; }

  double lp(const GridFunction& f, const FiberGram* gram = nullptr,
            const std::vector<char>* mask = nullptr) const;
  double lp(const GridFunction& f, double p, const FiberGram* gram = nullptr,
            const std::vector<char>* mask = nullptr) const;
  double l1(const GridFunction& f) const { return lp(f, 1.0); }
  double l2(const GridFunction& f) const { return lp(f, 2.0); }
  double c0(const GridFunction& f, const FiberGram* gram = nullptr,
            const std::vector<char>* mask = nullptr) const;

  // |df|_p with |df|(x)^2 = |d1 f|^2 + |d2 f|^2 (or |f'| on a circle)
  double grad_lp(const GridFunction& f, const FiberGram* gram = nullptr,
                 const std::vector<char>* mask = nullptr) const;
  double grad_lp(const GridFunction& f, double p, const FiberGram* gram = nullptr,
                 const std::vector<char>* mask = nullptr) const;

  double lp1(const GridFunction& f, const FiberGram* gram = nullptr,
             const std::vector<char>* mask = nullptr) const;

  // norm of a pair of sampled directional values (one-form field)
  double pair_lp(const GridFunction& a, const GridFunction& b, double p,
                 const FiberGram* gram = nullptr, const std::vector<char>* mask = nullptr) const;

 private:
  Grid grid_;
  double p_;
};

// Gram matrices g(u(z)) for sections along a sampled map.
FiberGram fiber_gram_along(const MetricField& g, const GridFunction& u_values);

}  // namespace geomest

#endif
