#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geomest/builtin.hpp"
#include "geomest/elliptic.hpp"
#include "geomest/rng.hpp"

using namespace geomest;
namespace {
constexpr double kPi = std::numbers::pi;

Vec pt(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

AnnulusPair canonical_pair() { return AnnulusPair{1.0, 0.25, 0.75, 0.5, 0.2}; }

Grid a1_grid(int scale = 1) { return Grid::annulus(1.0, 0.25, 64 * scale, 128 * scale); }

// random complex trig-polynomial on an annulus, smooth and resolved
GridFunction random_field(const Grid& g, Rng& rng, int kmax = 8) {
  std::vector<double> ar, ai, br, bi;
  std::vector<int> kr, kt;
  int terms = 6;
  for (int t = 0; t < terms; ++t) {
    ar.push_back(rng.normal());
    ai.push_back(rng.normal());
    br.push_back(rng.uniform(0.0, 2.0 * kPi));
    bi.push_back(rng.uniform(0.0, 2.0 * kPi));
    kr.push_back(1 + static_cast<int>(rng.integer(kmax)));
    kt.push_back(static_cast<int>(rng.integer(kmax)));
  }
  double R = g.outer_radius(), r = g.inner_radius();
  return GridFunction::sample(g, 1, [=](const Eigen::Vector2d& c) {
    double s = (c[0] - r) / (R - r);
    std::complex<double> acc(0.0, 0.0);
    for (int t = 0; t < terms; ++t) {
      double decay = std::pow(1.0 + kr[t] + kt[t], -2.0);
      acc += std::complex<double>(ar[t], ai[t]) * decay *
             std::cos(kPi * kr[t] * s + br[t]) *
             std::cos(kt[t] * c[1] + bi[t]);
    }
    Eigen::VectorXcd v(1);
    v[0] = acc;
    return v;
  });
}
}  // namespace

TEST_CASE("annulus pair validation and masks") {
  AnnulusPair p = canonical_pair();
  p.validate();
  AnnulusPair bad{1.0, 0.25, 0.9, 0.5, 0.2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  Grid g = a1_grid();
  std::vector<char> inner = p.inner_mask(g);
  std::size_t count = 0;
  for (char c : inner) count += c;
  CHECK(count > 0);
  CHECK(count < g.size());
}

TEST_CASE("interior lp1 estimate") {
  Grid g = a1_grid();
  AnnulusPair pair = canonical_pair();

  SUBCASE("holomorphic field has zero dbar") {
    GridFunction z2 = GridFunction::sample(g, 1, [](const Eigen::Vector2d& c) {
      std::complex<double> w(c[0] * std::cos(c[1]), c[0] * std::sin(c[1]));
      Eigen::VectorXcd v(1);
      v[0] = w * w;
      return v;
    });
    GridFunction db = dbar_flat(z2);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, db.norm_at(i));
    CHECK(worst < 1e-8);
    InequalityRecord rec =
        interior_lp1_estimate(z2, pair, 4.0, 10.0, InequalityRecord::Provenance::Fitted, 0.05);
    CHECK(rec.lhs > 0.0);
    CHECK(rec.pass);
  }

  SUBCASE("conjugate coordinate has unit dbar") {
    GridFunction zb = GridFunction::sample(g, 1, [](const Eigen::Vector2d& c) {
      Eigen::VectorXcd v(1);
      v[0] = std::complex<double>(c[0] * std::cos(c[1]), -c[0] * std::sin(c[1]));
      return v;
    });
    GridFunction db = dbar_flat(zb);
    for (std::size_t i = 0; i < g.size(); i += 97)
      CHECK(std::abs(db.at(i)[0] - std::complex<double>(1.0, 0.0)) < 1e-8);
  }

  SUBCASE("noise-mode ratio stays stable as the mode doubles") {
    auto ratio_for = [&](int k) {
      GridFunction f = GridFunction::sample(g, 1, [k](const Eigen::Vector2d& c) {
        Eigen::VectorXcd v(1);
        v[0] = std::cos(k * c[1]) * std::sin(kPi * k * (c[0] - 0.25) / 0.75);
        return v;
      });
      InequalityRecord rec =
          interior_lp1_estimate(f, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
      return rec.lhs / rec.rhs_scaled;
    };
    double r4 = ratio_for(4), r8 = ratio_for(8);
    CHECK(std::abs(r8 - r4) / r4 < 0.15);
  }

  SUBCASE("invalid pair is rejected") {
    GridFunction f(g, 1);
    AnnulusPair badp{1.0, 0.25, 0.9, 0.5, 0.2};
    CHECK_THROWS_AS((void)interior_lp1_estimate(f, badp, 4.0, 1.0,
                                                InequalityRecord::Provenance::Fitted, 0.0),
                    std::invalid_argument);
  }

  SUBCASE("record depends only on its declared inputs") {
    Rng rng(3);
    GridFunction f = random_field(g, rng);
    InequalityRecord base =
        interior_lp1_estimate(f, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
    // modify the field only where it is farther than delta/2 from A2
    GridFunction mod = f;
    std::vector<char> collar = pair.outer_collar_mask(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (collar[i]) mod.values()(static_cast<Eigen::Index>(i), 0) += 0.5;
    InequalityRecord shifted =
        interior_lp1_estimate(mod, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
    CHECK(std::abs(shifted.lhs - base.lhs) < 1e-10 * std::max(1.0, base.lhs));
    CHECK(std::abs(shifted.rhs_scaled - base.rhs_scaled) > 1e-3);  // rhs sees the change
  }
}

TEST_CASE("interior gradient estimate") {
  Grid g = a1_grid();
  AnnulusPair pair = canonical_pair();

  SUBCASE("constant field has zero gradient") {
    GridFunction f = GridFunction::sample(g, 1, [](const Eigen::Vector2d&) {
      Eigen::VectorXcd v(1);
      v[0] = 3.0;
      return v;
    });
    InequalityRecord rec =
        interior_gradient_estimate(f, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
    CHECK(rec.lhs < 1e-12);
    CHECK(rec.pass);
  }

  SUBCASE("records are invariant under constant shifts") {
    GridFunction base = GridFunction::sample(g, 1, [](const Eigen::Vector2d& c) {
      std::complex<double> w(c[0] * std::cos(c[1]), c[0] * std::sin(c[1]));
      Eigen::VectorXcd v(1);
      v[0] = w * w;
      return v;
    });
    InequalityRecord r0 =
        interior_gradient_estimate(base, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
    for (double c : {10.0, 100.0}) {
      GridFunction shifted = base;
      for (std::size_t i = 0; i < g.size(); ++i)
        shifted.values()(static_cast<Eigen::Index>(i), 0) += c;
      InequalityRecord rc = interior_gradient_estimate(shifted, pair, 4.0, 1.0,
                                                       InequalityRecord::Provenance::Fitted, 0.0);
      CHECK(std::abs(rc.lhs - r0.lhs) < 1e-9 * std::max(1.0, r0.lhs));
      CHECK(std::abs(rc.rhs_scaled - r0.rhs_scaled) < 1e-9 * std::max(1.0, r0.rhs_scaled));
    }
  }

  SUBCASE("random fields pass after calibration") {
    Rng rng(5);
    double cmax = 0.0;
    std::vector<GridFunction> cal;
    for (int t = 0; t < 25; ++t) cal.push_back(random_field(g, rng));
    for (const auto& f : cal) {
      InequalityRecord rec =
          interior_gradient_estimate(f, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
      if (rec.rhs_scaled > 0.0) cmax = std::max(cmax, rec.lhs / rec.rhs_scaled);
    }
    double C = 1.1 * cmax;
    Rng rng2(6);
    for (int t = 0; t < 25; ++t) {
      GridFunction f = random_field(g, rng2);
      InequalityRecord rec =
          interior_gradient_estimate(f, pair, 4.0, C, InequalityRecord::Provenance::Fitted, 0.05);
      CHECK(rec.pass);
    }
  }
}

TEST_CASE("pullback CR interior estimate") {
  Grid g = a1_grid();
  AnnulusPair pair = canonical_pair();
  BuiltinManifold e2 = builtin_euclidean(2);
  TangentConnection flat = tangent_connection(e2.levi_civita);
  AlmostComplex J2;
  J2.dim = 2;
  J2.J = e2.complex_structure;

  SUBCASE("constant map with A = 0 reproduces the gradient estimate") {
    MapU u = MapU::sample(
        g, 2, [](const Eigen::Vector2d&) { return Vec(pt(0.1, 0.2)); },
        [](const Eigen::Vector2d&) { return Mat(Mat::Zero(2, 2)); });
    Rng rng(7);
    GridFunction fc = random_field(g, rng);
    // real 2-component section mirroring the complex scalar
    GridFunction xi(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      xi.values()(static_cast<Eigen::Index>(i), 0) = fc.at(i)[0].real();
      xi.values()(static_cast<Eigen::Index>(i), 1) = fc.at(i)[0].imag();
    }
    CROperator D{flat, J2.J, nullptr};
    InequalityRecord a =
        cr_interior_estimate(u, xi, D, e2.metric, pair, 4.0, 1.0,
                             InequalityRecord::Provenance::Fitted, 0.0);
    // mean-shift makes no difference to either side here (du = 0, A = 0)
    GridFunction centered = fc;
    Eigen::VectorXcd mean = fc.integral();
    double area = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) area += g.weight(i);
    for (std::size_t i = 0; i < g.size(); ++i)
      centered.values()(static_cast<Eigen::Index>(i), 0) -= mean[0] / area;
    InequalityRecord b =
        interior_gradient_estimate(centered, pair, 4.0, 1.0,
                                   InequalityRecord::Provenance::Fitted, 0.0);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-9));
    // with du = 0 and A = 0 the right-hand sides coincide term by term:
    // |D xi|_p = |dbar f|_p pairs, |nabla xi|_2 = |d f|_2, |xi (x) du|_p = 0
    CHECK(a.rhs_scaled == doctest::Approx(b.rhs_scaled).epsilon(1e-9));
  }

  SUBCASE("zero section gives zero lhs") {
    MapU u = MapU::sample(g, 2, [](const Eigen::Vector2d& c) {
      return Vec(pt(0.2 * std::cos(c[1]), 0.2 * std::sin(c[1])));
    });
    GridFunction xi(g, 2);
    CROperator D{flat, J2.J, nullptr};
    InequalityRecord rec = cr_interior_estimate(u, xi, D, e2.metric, pair, 4.0, 1.0,
                                                InequalityRecord::Provenance::Fitted, 0.0);
    CHECK(rec.lhs == 0.0);
    CHECK(rec.pass);
  }

  SUBCASE("sphere target with the nijenhuis zeroth-order term") {
    BuiltinManifold s = builtin_sphere();
    TangentConnection lc = tangent_connection(s.levi_civita);
    AlmostComplex Js{2, s.complex_structure};
    MapU u = MapU::sample(g, 2, [](const Eigen::Vector2d& c) {
      return Vec(pt(kPi / 2.0 + 0.2 * std::sin(c[1]) * (c[0] - 0.5), 0.3 * std::cos(c[1])));
    });
    AlmostComplex Jcopy = Js;
    CROperator D{lc, Js.J,
                 [Jcopy](const Vec& x, const Vec& w, const Vec& sghn) {
                   return nijenhuis(Jcopy, x, w, sghn);
                 }};
    Rng rng(9);
    double cmax = 0.0;
    for (int t = 0; t < 10; ++t) {
      GridFunction fc = random_field(g, rng);
      GridFunction xi(g, 2);
      for (std::size_t i = 0; i < g.size(); ++i) {
        xi.values()(static_cast<Eigen::Index>(i), 0) = fc.at(i)[0].real();
        xi.values()(static_cast<Eigen::Index>(i), 1) = fc.at(i)[0].imag();
      }
      InequalityRecord rec = cr_interior_estimate(u, xi, D, s.metric, pair, 4.0, 1.0,
                                                  InequalityRecord::Provenance::Fitted, 0.0);
      if (rec.rhs_scaled > 0.0) cmax = std::max(cmax, rec.lhs / rec.rhs_scaled);
    }
    CHECK(cmax < 10.0);
  }
}

TEST_CASE("global torus estimate") {
  Grid g = Grid::torus(2.0 * kPi, 2.0 * kPi, 48, 48);
  BuiltinManifold e2 = builtin_euclidean(2);
  TangentConnection flat = tangent_connection(e2.levi_civita);
  AlmostComplex J2{2, e2.complex_structure};

  SUBCASE("single fourier mode against the symbol oracle") {
    MapU u = MapU::sample(
        g, 2, [](const Eigen::Vector2d&) { return Vec(pt(0.0, 0.0)); },
        [](const Eigen::Vector2d&) { return Mat(Mat::Zero(2, 2)); });
    int kx = 3, ky = -2;
    GridFunction xi(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      Eigen::Vector2d z = g.coords(i);
      std::complex<double> e = std::exp(std::complex<double>(0.0, kx * z[0] + ky * z[1]));
      xi.values()(static_cast<Eigen::Index>(i), 0) = e.real();
      xi.values()(static_cast<Eigen::Index>(i), 1) = e.imag();
    }
    CROperator D{flat, J2.J, nullptr};
    InequalityRecord rec = global_estimate(u, xi, D, e2.metric, 4.0, 1.0,
                                           InequalityRecord::Provenance::Fitted, 0.0);
    // closed forms: |xi|_p = 2 pi^{1/2... } : |e^{ik.x}| = 1 so |xi|_p = (4 pi^2)^{1/p};
    // |nabla xi| = |k|, |D xi| = |(i kx - ky)/2| = |k|/2 pointwise (e2 metric)
    double knorm = std::sqrt(double(kx * kx + ky * ky));
    double vol = std::pow(4.0 * kPi * kPi, 0.25);
    CHECK(rec.lhs == doctest::Approx(vol * (1.0 + knorm)).epsilon(1e-9));
    // dbar modulus |(i kx - ky)/2| = |k|/2 plus |xi|_p
    double dbar_mod = 0.5 * knorm;
    CHECK(rec.rhs_scaled == doctest::Approx(vol * (1.0 + dbar_mod)).epsilon(1e-9));
    CHECK(rec.params.at("recursion_steps") == doctest::Approx(1.0));
  }

  SUBCASE("constant section is controlled by its own norm") {
    MapU u = MapU::sample(
        g, 2, [](const Eigen::Vector2d&) { return Vec(pt(0.0, 0.0)); },
        [](const Eigen::Vector2d&) { return Mat(Mat::Zero(2, 2)); });
    GridFunction xi(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i)
      xi.values()(static_cast<Eigen::Index>(i), 0) = 1.0;
    CROperator D{flat, J2.J, nullptr};
    InequalityRecord rec = global_estimate(u, xi, D, e2.metric, 4.0, 1.0,
                                           InequalityRecord::Provenance::Fitted, 0.05);
    CHECK(rec.lhs == doctest::Approx(rec.rhs_scaled).epsilon(1e-10));
    CHECK(rec.pass);
  }

  SUBCASE("p below 2 is rejected and annulus domains are rejected") {
    MapU u = MapU::sample(g, 2, [](const Eigen::Vector2d&) { return Vec(pt(0.0, 0.0)); });
    GridFunction xi(g, 2);
    CROperator D{flat, J2.J, nullptr};
    CHECK_THROWS_AS((void)global_estimate(u, xi, D, e2.metric, 2.0, 1.0,
                                          InequalityRecord::Provenance::Fitted, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("symbol floor of the flat dbar on the torus") {
  Grid g = Grid::torus(2.0 * kPi, 2.0 * kPi, 32, 32);
  CHECK(dbar_symbol_floor(g) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("fitted constants shrink as the margin grows") {
  Grid g = a1_grid();
  Rng rng(11);
  std::vector<GridFunction> fields;
  for (int t = 0; t < 15; ++t) fields.push_back(random_field(g, rng));
  auto fit = [&](const AnnulusPair& pair) {
    double cmax = 0.0;
    for (const auto& f : fields) {
      InequalityRecord rec =
          interior_lp1_estimate(f, pair, 4.0, 1.0, InequalityRecord::Provenance::Fitted, 0.0);
      if (rec.rhs_scaled > 0.0) cmax = std::max(cmax, rec.lhs / rec.rhs_scaled);
    }
    return cmax;
  };
  double small_margin = fit(AnnulusPair{1.0, 0.25, 0.85, 0.4, 0.1});
  double large_margin = fit(AnnulusPair{1.0, 0.25, 0.7, 0.55, 0.25});
  CHECK(large_margin <= small_margin * 1.0000001);
}
