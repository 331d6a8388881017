#ifndef GEOMEST_ELLIPTIC_HPP
#define GEOMEST_ELLIPTIC_HPP

#include "geomest/sobolev.hpp"

namespace geomest {

// Nested annuli A2 = closure(B_{R2,r2}) inside A1 = B_{R1,r1} with margin
// delta: R1 - R2 > delta and r2 - r1 >= delta.
struct AnnulusPair {
  double R1 = 1.0, r1 = 0.25;
  double R2 = 0.75, r2 = 0.5;
  double delta = 0.2;

  void validate() const;
  // nodes of an A1 grid lying in the closed inner annulus
  std::vector<char> inner_mask(const Grid& a1_grid) const;
  // nodes farther than delta/2 from the closed inner annulus
  std::vector<char> outer_collar_mask(const Grid& a1_grid) const;
};

// dbar = (d/dx + i d/dy)/2, componentwise on complex-valued fields.
GridFunction dbar_flat(const GridFunction& xi);

// |xi|_{A2}|_{p,1} <= C (|dbar xi|_p + |d xi|_2 + |xi|_1)
InequalityRecord interior_lp1_estimate(const GridFunction& xi, const AnnulusPair& pair, double p,
                                       double constant, InequalityRecord::Provenance prov,
                                       double slack);

// |d xi|_{A2}|_p <= C (|dbar xi|_p + |d xi|_2); the zeroth-order term is
// removed by subtracting the mean, so the record is shift-invariant.
InequalityRecord interior_gradient_estimate(const GridFunction& xi, const AnnulusPair& pair,
                                            double p, double constant,
                                            InequalityRecord::Provenance prov, double slack);

// |nabla^u xi|_{A2}|_p <= C (|D_u xi|_p + |nabla^u xi|_2 + |xi (x) du|_p)
InequalityRecord cr_interior_estimate(const MapU& u, const GridFunction& xi,
                                      const CROperator& D, const MetricField& g,
                                      const AnnulusPair& pair, double p, double constant,
                                      InequalityRecord::Provenance prov, double slack);

// Torus stand-in for the closed-surface estimate:
// |xi|_{p,1} <= C(|du|_p) (|D_u xi|_p + |xi|_p); p > 2.
InequalityRecord global_estimate(const MapU& u, const GridFunction& xi, const CROperator& D,
                                 const MetricField& g, double p, double constant,
                                 InequalityRecord::Provenance prov, double slack);

// min over nonzero torus modes of |symbol| / |mode| for the flat dbar.
double dbar_symbol_floor(const Grid& torus);

}  // namespace geomest

#endif
