#ifndef GEOMEST_HARNESS_HPP
#define GEOMEST_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geomest/elliptic.hpp"
#include "geomest/sobolev.hpp"

namespace geomest {

inline constexpr const char* kToolVersion = "0.1.0";

struct SuiteConfig {
  std::string suite = "all";
  std::uint64_t seed = 12022;
  int sample_count = 100;
  double slack_fitted = 0.05;
  int circle_n = 256;
  int annulus_n_rho = 48;
  int annulus_n_theta = 96;
  int torus_n = 64;
  int grid_scale = 1;  // multiplies the 2-D grid sizes (refinement studies)
  std::string constants_path;
  std::string out_path;
  std::string label;

  static SuiteConfig from_file(const std::string& path);
  static SuiteConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ConstantEntry {
  double value = 0.0;
  std::string provenance;  // "fitted" or "paper"
};

struct ConstantsFile {
  int format_version = 1;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  int sample_count = 0;
  std::string label;
  std::map<std::string, ConstantEntry> entries;

  std::string digest() const;
  static ConstantsFile load(const std::string& path);
  void save(const std::string& path) const;
  double fitted(const std::string& key) const;
  bool has(const std::string& key) const { return entries.count(key) > 0; }
};

// Seeded random data: smooth trig polynomials with power-law coefficient
// decay, optionally mean-free or windowed to vanish at radial boundaries.
struct RandomFamily {
  enum class Kind { TrigPolynomial, RadialBump };
  Kind kind = Kind::TrigPolynomial;
  double decay = 2.5;
  int max_mode = 8;
  double amplitude = 1.0;
  int components = 1;
  bool mean_zero = false;
  bool supported = false;
};

GridFunction generate(const RandomFamily& family, const Grid& grid, std::uint64_t seed);

struct CheckDef {
  std::string id;
  std::string suite;
  InequalityRecord::Provenance provenance;
  std::vector<std::string> constant_keys;  // fitted constants used, if any
  std::function<std::vector<InequalityRecord>(const SuiteConfig&,
                                              const std::map<std::string, double>&,
                                              std::uint64_t seed)>
      run;
};

const std::vector<CheckDef>& check_registry();
bool suite_known(const std::string& suite);

// Fits every fitted constant of the configured suite: 1.1 times the largest
// observed lhs / structural ratio over max(50, sample_count) seeds.
ConstantsFile calibrate(const SuiteConfig& cfg);

struct Report {
  std::string version = kToolVersion;
  std::string constants_version;
  std::vector<InequalityRecord> records;
  int total = 0;
  int failed = 0;
  std::string worst_id;
  double worst_ratio = 0.0;
  std::int64_t wall_ms = 0;
};

Report run_suite(const SuiteConfig& cfg, const ConstantsFile& constants);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
std::string report_to_csv(const Report& report);
void write_report(const Report& report, const std::string& path);

// 0 all pass, 1 failures present
int report_exit_code(const Report& report);

// GEOMEST_THREADS override, hardware concurrency otherwise
int worker_count();

}  // namespace geomest

#endif
