#ifndef GEOMEST_RNG_HPP
#define GEOMEST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace geomest {

// Deterministic random source. mt19937_64 output is pinned by the standard and
// the variates below avoid std::*_distribution, whose streams are
// implementation-defined; identical seeds give identical draws everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal (Box-Muller, cached pair)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // uniform integer in [0, n)
  std::uint64_t integer(std::uint64_t n) { return eng_() % n; }

  int sign() { return (eng_() & 1u) ? 1 : -1; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace geomest

#endif
