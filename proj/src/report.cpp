#include <fstream>
#include <iomanip>
#include <sstream>

#include "geomest/harness.hpp"

namespace geomest {

namespace {

InequalityRecord::Provenance provenance_from_name(const std::string& name) {
  if (name == "paper") return InequalityRecord::Provenance::Paper;
  if (name == "fitted") return InequalityRecord::Provenance::Fitted;
  return InequalityRecord::Provenance::Tolerance;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void dump_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

SuiteConfig SuiteConfig::from_file(const std::string& path) {
  return from_json(load_json(path));
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
  SuiteConfig cfg;
  cfg.suite = j.value("suite", cfg.suite);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.sample_count = j.value("sample_count", cfg.sample_count);
  if (cfg.sample_count <= 0) throw std::invalid_argument("sample_count must be positive");
  cfg.slack_fitted = j.value("slack", cfg.slack_fitted);
  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    cfg.circle_n = g.value("circle_n", cfg.circle_n);
    cfg.annulus_n_rho = g.value("annulus_n_rho", cfg.annulus_n_rho);
    cfg.annulus_n_theta = g.value("annulus_n_theta", cfg.annulus_n_theta);
    cfg.torus_n = g.value("torus_n", cfg.torus_n);
    cfg.grid_scale = g.value("scale", cfg.grid_scale);
  }
  cfg.constants_path = j.value("constants_path", cfg.constants_path);
  cfg.out_path = j.value("out_path", cfg.out_path);
  cfg.label = j.value("label", cfg.label);
  if (!suite_known(cfg.suite)) throw std::invalid_argument("unknown suite: " + cfg.suite);
  return cfg;
}

nlohmann::json SuiteConfig::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["sample_count"] = sample_count;
  j["slack"] = slack_fitted;
  j["grids"] = {{"circle_n", circle_n},
                {"annulus_n_rho", annulus_n_rho},
                {"annulus_n_theta", annulus_n_theta},
                {"torus_n", torus_n},
                {"scale", grid_scale}};
  if (!constants_path.empty()) j["constants_path"] = constants_path;
  if (!out_path.empty()) j["out_path"] = out_path;
  if (!label.empty()) j["label"] = label;
  return j;
}

std::string ConstantsFile::digest() const {
  // deterministic content hash (FNV-1a over the canonical serialization)
  nlohmann::json j;
  j["format_version"] = format_version;
  j["tool_version"] = tool_version;
  for (const auto& [key, entry] : entries)
    j["constants"][key] = {{"value", entry.value}, {"provenance", entry.provenance}};
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ConstantsFile ConstantsFile::load(const std::string& path) {
  nlohmann::json j = load_json(path);
  ConstantsFile f;
  f.format_version = j.value("format_version", 1);
  f.tool_version = j.value("tool_version", "");
  f.seed = j.value("seed", 0ull);
  f.sample_count = j.value("sample_count", 0);
  f.label = j.value("label", "");
  for (const auto& [key, entry] : j.at("constants").items()) {
    ConstantEntry e;
    e.value = entry.value("value", 0.0);
    e.provenance = entry.value("provenance", "fitted");
    f.entries[key] = e;
  }
  return f;
}

void ConstantsFile::save(const std::string& path) const {
  nlohmann::json j;
  j["format_version"] = format_version;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["sample_count"] = sample_count;
  if (!label.empty()) j["label"] = label;
  j["digest"] = digest();
  nlohmann::json c;
  for (const auto& [key, entry] : entries) {
    nlohmann::json e;
    if (entry.provenance == "fitted") e["value"] = entry.value;
    e["provenance"] = entry.provenance;
    c[key] = e;
  }
  j["constants"] = c;
  dump_json(j, path);
}

double ConstantsFile::fitted(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end() || it->second.provenance != "fitted")
    throw std::runtime_error("constants file is missing fitted entry: " + key);
  return it->second.value;
}

nlohmann::json report_to_json(const Report& report) {
  nlohmann::json j;
  j["version"] = report.version;
  j["constants_version"] = report.constants_version;
  nlohmann::json records = nlohmann::json::array();
  for (const InequalityRecord& r : report.records) {
    nlohmann::json jr;
    jr["lemma_id"] = r.lemma_id;
    jr["lhs"] = r.lhs;
    jr["rhs"] = r.rhs;
    jr["ratio"] = r.ratio;
    jr["params"] = r.params;
    jr["pass"] = r.pass;
    jr["constant_used"] = r.constant_used;
    jr["constant_provenance"] = provenance_name(r.provenance);
    if (!r.note.empty()) jr["note"] = r.note;
    records.push_back(std::move(jr));
  }
  j["records"] = std::move(records);
  j["summary"] = {{"total", report.total},
                  {"failed", report.failed},
                  {"worst", {{"lemma_id", report.worst_id}, {"ratio", report.worst_ratio}}},
                  {"wall_ms", report.wall_ms}};
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report report;
  report.version = j.value("version", "");
  report.constants_version = j.value("constants_version", "");
  for (const auto& jr : j.at("records")) {
    InequalityRecord r;
    r.lemma_id = jr.at("lemma_id").get<std::string>();
    r.lhs = jr.at("lhs").get<double>();
    r.rhs = jr.at("rhs").get<double>();
    r.ratio = jr.at("ratio").get<double>();
    r.pass = jr.at("pass").get<bool>();
    r.constant_used = jr.at("constant_used").get<double>();
    r.provenance = provenance_from_name(jr.at("constant_provenance").get<std::string>());
    for (const auto& [key, value] : jr.at("params").items())
      r.params[key] = value.get<double>();
    if (jr.contains("note")) r.note = jr.at("note").get<std::string>();
    report.records.push_back(std::move(r));
  }
  const auto& s = j.at("summary");
  report.total = s.at("total").get<int>();
  report.failed = s.at("failed").get<int>();
  report.worst_id = s.at("worst").at("lemma_id").get<std::string>();
  report.worst_ratio = s.at("worst").at("ratio").get<double>();
  report.wall_ms = s.at("wall_ms").get<std::int64_t>();
  return report;
}

std::string report_to_csv(const Report& report) {
  std::ostringstream os;
  os << "lemma_id,lhs,rhs,ratio,pass,constant_used,constant_provenance,params\n";
  os << std::setprecision(17);
  for (const InequalityRecord& r : report.records) {
    os << r.lemma_id << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio << ','
       << (r.pass ? "true" : "false") << ',' << r.constant_used << ','
       << provenance_name(r.provenance) << ',' << '"';
    bool first = true;
    for (const auto& [key, value] : r.params) {
      if (!first) os << ';';
      os << key << '=' << value;
      first = false;
    }
    os << '"' << '\n';
  }
  return os.str();
}

void write_report(const Report& report, const std::string& path) {
  dump_json(report_to_json(report), path);
}

}  // namespace geomest
