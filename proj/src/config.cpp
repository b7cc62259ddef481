#include "resfluor/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "resfluor/error.hpp"

namespace resfluor {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::ConfigInvalid, "bad value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const std::string t = trim(v);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(out)) bad(key, v);
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const std::string t = trim(v);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad(key, v);
  return out;
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& p : split(v)) out.push_back(to_double(key, p));
  if (out.empty()) bad(key, v);
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& p : split(v)) out.push_back(to_int<int>(key, p));
  if (out.empty()) bad(key, v);
  return out;
}

Vec3 to_direction(const std::string& key, const std::string& v) {
  const auto c = to_doubles(key, v);
  if (c.size() != 3) bad(key, v);
  const Vec3 d(c[0], c[1], c[2]);
  if (d.norm() == 0.0) bad(key, v);
  return d.normalized();
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  bad(key, v);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

template <class T>
std::string fmt_list(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_integral_v<T>) {
      out += std::to_string(xs[i]);
    } else {
      out += fmt(xs[i]);
    }
  }
  return out;
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  if (key == "atoms.n") n_atoms = to_ints(key, value);
  else if (key == "atoms.gamma2") gamma2 = to_double(key, value);
  else if (key == "atoms.detuning") detuning = to_double(key, value);
  else if (key == "atoms.rabi") rabi = to_double(key, value);
  else if (key == "atoms.target_ratio") target_ratio = to_double(key, value);
  else if (key == "scene.spacing_lambda") spacing_lambda = to_double(key, value);
  else if (key == "scene.trap") trap = to_bool(key, value);
  else if (key == "scene.dipole") dipole = to_direction(key, value);
  else if (key == "scene.laser") laser = to_direction(key, value);
  else if (key == "scene.detector1") detector1 = to_direction(key, value);
  else if (key == "scene.phi2") phi2 = to_double(key, value);
  else if (key == "scene.phi2.start") phi2_start = to_double(key, value);
  else if (key == "scene.phi2.stop") phi2_stop = to_double(key, value);
  else if (key == "scene.phi2.steps") phi2_steps = to_int<int>(key, value);
  else if (key == "trap.mass_kg") species.mass_kg = to_double(key, value);
  else if (key == "trap.charge_e") species.charge_c = to_double(key, value) * si::elementary_charge;
  else if (key == "trap.wavelength_m") species.wavelength_m = to_double(key, value);
  else if (key == "trap.jitter_cap_lambda") jitter_cap_lambda = to_double(key, value);
  else if (key == "mc.samples") mc_samples = to_int<std::size_t>(key, value);
  else if (key == "mc.seed") seed = to_int<std::uint64_t>(key, value);
  else if (key == "mc.distribution") {
    const std::string t = trim(value);
    if (t == "uniform") distribution = JitterDistribution::Uniform;
    else if (t == "tgauss") distribution = JitterDistribution::TruncatedGaussian;
    else bad(key, value);
  }
  else if (key == "mc.jitter_scale") jitter_scale = to_double(key, value);
  else if (key == "opt.gamma_min_lambda") gamma_min_lambda = to_double(key, value);
  else if (key == "opt.gamma_max_lambda") gamma_max_lambda = to_double(key, value);
  else if (key == "random.box_lambda") box_lambda = to_double(key, value);
  else if (key == "random.samples") random_samples = to_int<std::size_t>(key, value);
  else if (key == "threshold.n") threshold_n = to_ints(key, value);
  else if (key == "threshold.gamma2") threshold_gamma2 = to_doubles(key, value);
  else if (key == "threshold.detuning") threshold_detuning = to_doubles(key, value);
  else throw Error(ErrorCode::ConfigInvalid, "unknown key " + key);
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (n_atoms.empty()) fail("atoms.n is empty");
  for (int n : n_atoms)
    if (n < 1 || n > 64) fail("atoms.n entries must be in [1, 64]");
  if (gamma2 < 0.5) fail("atoms.gamma2 must be at least 1/2");
  if (rabi && *rabi < 0.0) fail("atoms.rabi must be non-negative");
  if (!rabi && !(target_ratio > 2.0 * gamma2)) fail("atoms.target_ratio must exceed 2*gamma2");
  if (phi2_steps < 1) fail("scene.phi2.steps must be at least 1");
  if (!(spacing_lambda >= 0.0)) fail("scene.spacing_lambda must be non-negative");
  if (mc_samples < 1) fail("mc.samples must be at least 1");
  if (!(jitter_scale >= 0.0)) fail("mc.jitter_scale must be non-negative");
  if (!(jitter_cap_lambda > 0.0)) fail("trap.jitter_cap_lambda must be positive");
  if (!(species.mass_kg > 0.0) || !(species.charge_c > 0.0) || !(species.wavelength_m > 0.0))
    fail("trap species parameters must be positive");
  if (!(gamma_min_lambda > 0.0)) fail("opt.gamma_min_lambda must be positive");
  if (!(resolved_gamma_max() > gamma_min_lambda)) fail("empty trap-scale interval");
  if (threshold_n.empty() || threshold_gamma2.empty() || threshold_detuning.empty())
    fail("threshold grids must be non-empty");
  for (int n : threshold_n)
    if (n < 1) fail("threshold.n entries must be positive");
  for (double g : threshold_gamma2)
    if (g < 0.5) fail("threshold.gamma2 entries must be at least 1/2");
}

double ExperimentConfig::resolved_gamma_max() const {
  return gamma_max_lambda ? *gamma_max_lambda : max_scale(species, jitter_cap_lambda);
}

std::map<std::string, std::string> ExperimentConfig::resolved() const {
  std::map<std::string, std::string> m;
  m["atoms.n"] = fmt_list(n_atoms);
  m["atoms.gamma2"] = fmt(gamma2);
  m["atoms.detuning"] = fmt(detuning);
  if (rabi) m["atoms.rabi"] = fmt(*rabi);
  else m["atoms.target_ratio"] = fmt(target_ratio);
  m["scene.spacing_lambda"] = fmt(spacing_lambda);
  m["scene.trap"] = trap ? "true" : "false";
  m["scene.dipole"] = fmt(dipole);
  m["scene.laser"] = fmt(laser);
  m["scene.detector1"] = fmt(detector1);
  m["scene.phi2"] = fmt(phi2);
  m["scene.phi2.start"] = fmt(phi2_start);
  m["scene.phi2.stop"] = fmt(phi2_stop);
  m["scene.phi2.steps"] = std::to_string(phi2_steps);
  m["trap.mass_kg"] = fmt(species.mass_kg);
  m["trap.charge_e"] = fmt(species.charge_c / si::elementary_charge);
  m["trap.wavelength_m"] = fmt(species.wavelength_m);
  m["trap.jitter_cap_lambda"] = fmt(jitter_cap_lambda);
  m["mc.samples"] = std::to_string(mc_samples);
  if (seed) m["mc.seed"] = std::to_string(*seed);
  m["mc.distribution"] = distribution == JitterDistribution::Uniform ? "uniform" : "tgauss";
  m["mc.jitter_scale"] = fmt(jitter_scale);
  m["opt.gamma_min_lambda"] = fmt(gamma_min_lambda);
  m["opt.gamma_max_lambda"] = fmt(resolved_gamma_max());
  m["random.box_lambda"] = fmt(box_lambda);
  m["random.samples"] = std::to_string(random_samples);
  m["threshold.n"] = fmt_list(threshold_n);
  m["threshold.gamma2"] = fmt_list(threshold_gamma2);
  m["threshold.detuning"] = fmt_list(threshold_detuning);
  return m;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw Error(ErrorCode::ConfigInvalid, "duplicate key " + key);
    cfg.apply(key, line.substr(eq + 1));
  }
  if (seen.count("atoms.rabi") && seen.count("atoms.target_ratio"))
    throw Error(ErrorCode::ConfigInvalid, "atoms.rabi and atoms.target_ratio are exclusive");
  if (seen.count("scene.trap") && cfg.trap && seen.count("scene.spacing_lambda"))
    throw Error(ErrorCode::ConfigInvalid, "scene.spacing_lambda and scene.trap=true are exclusive");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace resfluor
