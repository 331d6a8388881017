#ifndef GEOMEST_SOBOLEV_HPP
#define GEOMEST_SOBOLEV_HPP

#include <map>
#include <string>
#include <vector>

#include "geomest/complexlin.hpp"
#include "geomest/norms.hpp"
#include "geomest/transport.hpp"

namespace geomest {

// One verification outcome. rhs = rhs_fixed + constant_used * rhs_scaled;
// the split is kept so calibration can refit the constant.
struct InequalityRecord {
  enum class Provenance { Paper, Fitted, Tolerance };

  std::string lemma_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::map<std::string, double> params;
  bool pass = false;
  double constant_used = 1.0;
  Provenance provenance = Provenance::Paper;
  double rhs_fixed = 0.0;
  double rhs_scaled = 0.0;
  std::string constant_key;  // calibration grouping; empty when not fitted
  std::string note;          // failure diagnostic, usually empty

  void finalize(double slack) {
    rhs = rhs_fixed + constant_used * rhs_scaled;
    ratio = (rhs > 0.0) ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    pass = lhs <= rhs * (1.0 + slack);
  }
};

const char* provenance_name(InequalityRecord::Provenance p);

// |zeta|_2^2 <= |zeta'|_2^2 for mean-zero functions on the circle.
InequalityRecord fourier_poincare(const GridFunction& zeta);

// |<nabla_theta xi, zeta>| against the derivative pairing plus the holonomy
// term C * min(|da|_1, |da|_2^2) |xi|_{2,1} |zeta|_2. Sections are sampled
// on a circle grid matching the loop parameter.
InequalityRecord loop_pairing_bound(const PathCurve& alpha, const TangentConnection& conn,
                                    const MetricField& g, const GridFunction& xi,
                                    const GridFunction& zeta, double constant,
                                    InequalityRecord::Provenance prov, double slack);

// |zeta|_1 <= C R^2 |d zeta|_2 for mean-zero fields on an annulus.
// log variant:     C = sqrt(pi/2) (1 + sqrt(ln(R/r)))   (needs r > 0)
// uniform variant: C = 125 sqrt(2 pi) / 4
InequalityRecord annulus_mean_zero_l1(const GridFunction& zeta, bool log_variant);

struct ConvexMask {
  std::string name;
  std::vector<char> nodes;
  double diameter = 0.0;
};

ConvexMask disk_mask(const Grid& annulus_grid);
ConvexMask half_disk_mask(const Grid& annulus_grid);
// Outer convex piece of a 2pi/3 wedge cut by the chord tangent to the inner
// circle (r > 0), as used by the uniform-variant argument.
ConvexMask wedge_chord_mask(const Grid& annulus_grid, double start_angle);

// Midpoint probe for convexity of an arbitrary mask.
bool mask_convex_probe(const Grid& grid, const std::vector<char>& mask, int pairs = 400);

// |xi_D - xi(x)| <= (2 r0^2/|D|) integral |d xi| |y-x|^{-1}, the singular
// factor integrated in closed form on a small disk around x.
InequalityRecord convex_mean_value(const GridFunction& xi, const ConvexMask& mask,
                                   std::size_t node_x);

// Oscillation and C0 embeddings on B_{R,r}, r <= R/2, p > 2; the same fitted
// C_p serves both records.
InequalityRecord oscillation_bound(const GridFunction& xi, double p, double c_p,
                                   InequalityRecord::Provenance prov, double slack,
                                   std::uint64_t pair_seed = 1);
InequalityRecord c0_embedding(const GridFunction& xi, double p, double c_p,
                              InequalityRecord::Provenance prov, double slack);

// |zeta|_2 <= |d zeta|_1 for fields vanishing at the outer boundary.
InequalityRecord l2_from_l1_gradient(const GridFunction& zeta);

// |xi|_q <= max(2,q) pi^{(1-2/p+2/q)/2} R^{1-2/p+2/q} |d xi|_p for
// compactly supported fields; needs 1 - 2/p >= -2/q.
InequalityRecord pq_embedding(const GridFunction& xi, double p, double q);

// Bundle-section versions along a map into a target chart.
InequalityRecord section_pq_embedding(const MapU& u, const GridFunction& xi,
                                      const TangentConnection& conn, const MetricField& g,
                                      double p, double q, double constant,
                                      InequalityRecord::Provenance prov, double slack);
InequalityRecord section_c0_bound(const MapU& u, const GridFunction& xi,
                                  const TangentConnection& conn, const MetricField& g, double p,
                                  double constant, InequalityRecord::Provenance prov,
                                  double slack);

struct RecursionTrace {
  std::vector<double> q;  // q_1, q_2, ...
  std::vector<double> p;  // p_1, p_2, ...
  int stop_index = 0;     // smallest N with q_{N+1} <= p
};

// q_1 = p(p+2)/(p-2), p_i = 2 q_i/(q_i+2), q_{i+1} = p p_i/(p - p_i).
RecursionTrace c0_recursion_exponents(double p);

// Support checks shared by the compactly-supported records: the outer
// (and optionally inner) two node rings must carry no data.
bool vanishes_on_outer_ring(const GridFunction& f, int rings = 2, double rel_tol = 1e-8);

}  // namespace geomest

#endif
