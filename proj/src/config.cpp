#include "dlab/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "json.hpp"

namespace dlab {

namespace {

constexpr double pi = 3.14159265358979323846;

using json = nlohmann::json;

double to_extended(const json& v, const std::string& key) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "Infinity") return inf_p;
    throw config_error("config key '" + key + "': expected number or \"inf\"");
  }
  if (!v.is_number()) throw config_error("config key '" + key + "' must be numeric");
  return v.get<double>();
}

std::vector<int> to_int_vec(const json& v, const std::string& key) {
  std::vector<int> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<int>());
    return out;
  }
  if (!v.is_array()) throw config_error("config key '" + key + "' must be int or array");
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw config_error("config key '" + key + "' must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> to_double_vec(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array()) throw config_error("config key '" + key + "' must be number or array");
  for (const auto& e : v) {
    if (!e.is_number())
      throw config_error("config key '" + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// single place that knows every key; JSON and CLI overrides both land here
void apply_json_key(ExperimentConfig& c, const std::string& key, const json& v) {
  static const std::map<std::string, std::function<void(ExperimentConfig&, const json&, const std::string&)>>
      table = {
          {"scenario", [](auto& c, const json& v, auto&) { c.scenario = v.template get<std::string>(); }},
          {"family", [](auto& c, const json& v, auto&) { c.family = v.template get<std::string>(); }},
          {"d", [](auto& c, const json& v, auto&) { c.d = v.template get<int>(); }},
          {"k", [](auto& c, const json& v, auto&) { c.k = v.template get<int>(); }},
          {"sign", [](auto& c, const json& v, auto&) { c.sign = v.template get<std::string>(); }},
          {"coupling", [](auto& c, const json& v, auto& k) { c.coupling = to_extended(v, k); }},
          {"n", [](auto& c, const json& v, auto& k) { c.n = to_int_vec(v, k); }},
          {"L", [](auto& c, const json& v, auto& k) { c.L = to_double_vec(v, k); }},
          {"L_over_pi", [](auto& c, const json& v, auto& k) {
             c.L = to_double_vec(v, k);
             for (auto& x : c.L) x *= pi;
           }},
          {"data_family", [](auto& c, const json& v, auto&) { c.data_family = v.template get<std::string>(); }},
          {"amplitude", [](auto& c, const json& v, auto& k) { c.amplitude = to_extended(v, k); }},
          {"amplitude_scale", [](auto& c, const json& v, auto& k) { c.amplitude_scale = to_extended(v, k); }},
          {"sigma", [](auto& c, const json& v, auto& k) { c.sigma = to_extended(v, k); }},
          {"width", [](auto& c, const json& v, auto& k) { c.width = to_extended(v, k); }},
          {"center_frac", [](auto& c, const json& v, auto& k) { c.center_frac = to_double_vec(v, k); }},
          {"bump_outer", [](auto& c, const json& v, auto& k) { c.bump_outer = to_extended(v, k); }},
          {"bump_inner", [](auto& c, const json& v, auto& k) { c.bump_inner = to_extended(v, k); }},
          {"band_lo", [](auto& c, const json& v, auto& k) { c.band_lo = to_extended(v, k); }},
          {"band_hi", [](auto& c, const json& v, auto& k) { c.band_hi = to_extended(v, k); }},
          {"band_perp", [](auto& c, const json& v, auto& k) { c.band_perp = to_extended(v, k); }},
          {"normalize_hhalf", [](auto& c, const json& v, auto& k) { c.normalize_hhalf = to_extended(v, k); }},
          {"t1", [](auto& c, const json& v, auto& k) { c.t1 = to_extended(v, k); }},
          {"snap_t0", [](auto& c, const json& v, auto& k) { c.snap_t0 = to_extended(v, k); }},
          {"snapshots", [](auto& c, const json& v, auto&) { c.snapshots = v.template get<int>(); }},
          {"dt_override", [](auto& c, const json& v, auto& k) { c.dt_override = to_extended(v, k); }},
          {"kato_dt", [](auto& c, const json& v, auto& k) { c.kato_dt = to_extended(v, k); }},
          {"kato_T", [](auto& c, const json& v, auto& k) { c.kato_T = to_extended(v, k); }},
          {"guard_threshold", [](auto& c, const json& v, auto& k) { c.guard_threshold = to_extended(v, k); }},
          {"guard_buffer", [](auto& c, const json& v, auto& k) { c.guard_buffer = to_extended(v, k); }},
          {"mass_drift_tol", [](auto& c, const json& v, auto& k) { c.mass_drift_tol = to_extended(v, k); }},
          {"energy_drift_tol", [](auto& c, const json& v, auto& k) { c.energy_drift_tol = to_extended(v, k); }},
          {"max_fields", [](auto& c, const json& v, auto&) { c.max_fields = v.template get<int>(); }},
          {"r_target", [](auto& c, const json& v, auto& k) { c.r_target = to_extended(v, k); }},
          {"window0", [](auto& c, const json& v, auto& k) { c.window0 = to_extended(v, k); }},
          {"window1", [](auto& c, const json& v, auto& k) { c.window1 = to_extended(v, k); }},
          {"target_exponent", [](auto& c, const json& v, auto& k) { c.target_exponent = to_extended(v, k); }},
          {"tolerance", [](auto& c, const json& v, auto& k) { c.tolerance = to_extended(v, k); }},
          {"seed", [](auto& c, const json& v, auto&) { c.seed = v.template get<std::uint64_t>(); }},
          {"calibration_seed", [](auto& c, const json& v, auto&) { c.calibration_seed = v.template get<std::uint64_t>(); }},
          {"corpus_size", [](auto& c, const json& v, auto&) { c.corpus_size = v.template get<int>(); }},
          {"calibration_size", [](auto& c, const json& v, auto&) { c.calibration_size = v.template get<int>(); }},
          {"violation_cap_factor", [](auto& c, const json& v, auto& k) { c.violation_cap_factor = to_extended(v, k); }},
          {"threads", [](auto& c, const json& v, auto&) { c.threads = v.template get<int>(); }},
          {"outdir", [](auto& c, const json& v, auto&) { c.outdir = v.template get<std::string>(); }},
          {"long_running", [](auto& c, const json& v, auto&) { c.long_running = v.template get<bool>(); }},
          {"dry_run", [](auto& c, const json& v, auto&) { c.dry_run = v.template get<bool>(); }},
      };
  const auto it = table.find(key);
  if (it == table.end()) throw config_error("unknown config key '" + key + "'");
  try {
    it->second(c, v, key);
  } catch (const json::exception& e) {
    throw config_error("config key '" + key + "': " + e.what());
  }
}

void fill_grid(ExperimentConfig& c, int d, int n_iso, double L_iso) {
  c.d = d;
  c.n.assign(static_cast<size_t>(d), n_iso);
  c.L.assign(static_cast<size_t>(d), L_iso);
}

}  // namespace

ExperimentConfig scenario_defaults(const std::string& scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  if (scenario == "simulate") {
    fill_grid(c, 1, 8192, 400.0 * pi);
    c.center_frac = {0.72};
    c.tolerance = 0.0;  // no rate gate; pass = clean completion
  } else if (scenario == "linear_decay_kdv") {
    fill_grid(c, 1, 8192, 400.0 * pi);
    c.center_frac = {0.72};
    c.r_target = 4.0;
    c.snap_t0 = 5.0;
    c.t1 = 50.0;
    c.snapshots = 25;
    c.window0 = 5.0;
    c.window1 = 50.0;
    c.target_exponent = -1.0 / 3.0;
    c.tolerance = 0.03;
  } else if (scenario == "kato_identity") {
    fill_grid(c, 1, 8192, 400.0 * pi);
    c.data_family = "spectral_bump";
    c.bump_inner = 0.5;
    c.bump_outer = 2.0;
    // packet centered on the probe point so the +/-T window captures the
    // whole transit; off-center data never crosses x* inside the window
    c.center_frac = {0.0};
    c.kato_T = 30.0;
    c.kato_dt = 0.01;
    c.tolerance = 0.01;
  } else if (scenario == "nonlinear_decay_gkdv") {
    fill_grid(c, 1, 8192, 400.0 * pi);
    c.family = "airy";
    c.k = 4;
    c.center_frac = {0.72};
    c.normalize_hhalf = 0.1;
    c.guard_threshold = 1e-3;
    c.snap_t0 = 5.0;
    c.t1 = 50.0;
    c.snapshots = 25;
    c.window0 = 5.0;
    c.window1 = 50.0;
    c.target_exponent = -1.0 / 3.0;
    c.tolerance = 0.05;
  } else if (scenario == "linear_decay_zk2d") {
    c.family = "zk";
    fill_grid(c, 2, 1024, 384.0 * pi);
    c.data_family = "spectral_bump";
    c.bump_outer = 2.5;
    c.center_frac = {0.72, 0.5};
    c.r_target = 8.0;
    c.snap_t0 = 4.0;
    c.t1 = 40.0;
    c.snapshots = 13;
    c.window0 = 4.0;
    c.window1 = 40.0;
    c.target_exponent = -2.0 / 3.0;
    c.tolerance = 0.05;
  } else if (scenario == "nonlinear_decay_zk2d") {
    c.family = "zk";
    c.k = 3;
    fill_grid(c, 2, 1024, 192.0 * pi);
    c.data_family = "spectral_bump";
    c.bump_outer = 2.0;
    c.center_frac = {0.72, 0.5};
    c.guard_threshold = 1e-4;
    c.snap_t0 = 5.0;
    c.t1 = 35.0;
    c.snapshots = 11;
    c.window0 = 5.0;
    c.window1 = 35.0;
    c.target_exponent = -2.0 / 3.0;
    c.tolerance = 0.08;
  } else if (scenario == "linear_decay_zk3d") {
    c.family = "zk";
    fill_grid(c, 3, 192, 96.0 * pi);
    c.data_family = "spectral_bump";
    c.bump_inner = 0.5;
    c.bump_outer = 2.0;
    c.center_frac = {0.7, 0.5, 0.5};
    c.snap_t0 = 2.0;
    c.t1 = 12.0;
    c.snapshots = 11;
    c.window0 = 2.0;
    c.window1 = 12.0;
    c.target_exponent = -1.0;
    c.tolerance = 0.1;
  } else if (scenario == "nonlinear_decay_zk3d") {
    // data band must sit inside the degree-5 dealias window: n=128, L=32pi
    // keeps |xi| <= 1.3125, so the annulus tops out at 1.2
    c.family = "zk";
    c.k = 4;
    fill_grid(c, 3, 128, 32.0 * pi);
    c.data_family = "spectral_bump";
    c.bump_inner = 0.5;
    c.bump_outer = 1.2;
    c.center_frac = {0.7, 0.5, 0.5};
    c.guard_threshold = 1.5e-3;
    c.snap_t0 = 2.0;
    c.t1 = 16.0;
    c.snapshots = 9;
    c.window0 = 5.0;
    c.window1 = 16.0;
    c.target_exponent = -1.0;
    c.tolerance = 0.35;
    c.long_running = true;
  } else if (scenario == "anisotropic_zk4d") {
    c.family = "zk";
    fill_grid(c, 4, 48, 32.0 * pi);
    c.data_family = "spectral_band";
    c.band_lo = 0.5;
    c.band_hi = 1.4;
    c.band_perp = 1.4;
    c.center_frac = {0.7, 0.5, 0.5, 0.5};
    c.snap_t0 = 1.5;
    c.t1 = 10.0;
    c.snapshots = 9;
    c.window0 = 1.5;
    c.window1 = 10.0;
    c.target_exponent = -1.0;
    c.tolerance = 0.15;
    c.long_running = true;
  } else if (scenario == "strichartz_scan") {
    fill_grid(c, 1, 8192, 400.0 * pi);
    c.center_frac = {0.5};
    c.amplitude = 1.0;
    c.snap_t0 = 0.5;
    c.t1 = 16.0;
    c.snapshots = 17;
    c.window0 = 0.5;
    c.window1 = 16.0;
    c.corpus_size = 50;
    c.tolerance = 0.02;  // lambda-rescale invariance budget
  } else if (scenario == "commutator_corpus") {
    fill_grid(c, 1, 1024, 100.0);
    c.corpus_size = 200;
  } else if (scenario == "lorentz_unit") {
    fill_grid(c, 1, 4096, 100.0);
    c.corpus_size = 100;
  } else {
    throw config_error("unknown scenario '" + scenario + "'");
  }
  return c;
}

std::vector<std::string> scenario_names() {
  return {"simulate",
          "linear_decay_kdv",
          "kato_identity",
          "nonlinear_decay_gkdv",
          "linear_decay_zk2d",
          "nonlinear_decay_zk2d",
          "linear_decay_zk3d",
          "nonlinear_decay_zk3d",
          "anisotropic_zk4d",
          "strichartz_scan",
          "commutator_corpus",
          "lorentz_unit"};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be a JSON object");

  const std::string scen =
      j.contains("scenario") ? j["scenario"].get<std::string>() : "simulate";
  ExperimentConfig cfg = scenario_defaults(scen);
  for (const auto& [key, val] : j.items()) {
    if (key == "scenario") continue;
    if (key == "grid" && val.is_object()) {
      for (const auto& [gk, gv] : val.items()) apply_json_key(cfg, gk, gv);
      continue;
    }
    apply_json_key(cfg, key, val);
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("override must be key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json v;
  try {
    v = json::parse(raw);
  } catch (const json::parse_error&) {
    v = raw;  // bare words are strings
  }
  if (key == "scenario") {
    // switching scenario re-bases onto its defaults
    cfg = scenario_defaults(v.get<std::string>());
    return;
  }
  apply_json_key(cfg, key, v);
}

void validate_config(const ExperimentConfig& c) {
  if (c.family != "airy" && c.family != "zk")
    throw config_error("family must be 'airy' or 'zk'");
  if (c.d < 1 || c.d > 4) throw config_error("dimension d must be in 1..4");
  if (c.family == "airy" && c.d != 1)
    throw config_error("airy family is one-dimensional");
  if (c.family == "zk" && c.d < 2)
    throw config_error("zk family needs d >= 2");
  if (c.k < 1) throw config_error("nonlinearity power k must be >= 1");
  if (c.sign != "focusing" && c.sign != "defocusing")
    throw config_error("sign must be 'focusing' or 'defocusing'");
  if (!(c.amplitude > 0.0))
    throw config_error("degenerate data: amplitude must be > 0");
  if (!(c.amplitude_scale > 0.0))
    throw config_error("amplitude_scale must be > 0");
  // length 1 is isotropic shorthand, broadcast when the grid is built
  if (!c.n.empty() && c.n.size() != 1 && static_cast<int>(c.n.size()) != c.d)
    throw config_error("grid n has wrong rank for d");
  if (!c.L.empty() && c.L.size() != 1 && static_cast<int>(c.L.size()) != c.d)
    throw config_error("grid L has wrong rank for d");
  for (double Lx : c.L)
    if (!(Lx > 0.0)) throw config_error("box length L must be > 0");
  if (!c.center_frac.empty() && c.center_frac.size() != 1 &&
      static_cast<int>(c.center_frac.size()) != c.d)
    throw config_error("center_frac has wrong rank for d");
  if (c.snapshots < 2) throw config_error("snapshots must be >= 2");
  if (!(c.t1 > 0.0) || !(c.snap_t0 > 0.0) || c.snap_t0 >= c.t1)
    throw config_error("need 0 < snap_t0 < t1");
  if (!(c.window0 > 0.0) || c.window0 >= c.window1)
    throw config_error("need 0 < window0 < window1");
  if (!(c.guard_buffer > 0.0 && c.guard_buffer < 0.5))
    throw config_error("guard_buffer must lie in (0, 1/2)");
  if (!(c.guard_threshold > 0.0))
    throw config_error("guard_threshold must be > 0");
  if (!(c.r_target >= 1.0)) throw config_error("r_target must be >= 1");
  if (c.corpus_size < 1) throw config_error("corpus_size must be >= 1");
  if (c.calibration_size < 1)
    throw config_error("calibration_size must be >= 1");
  if (c.threads < 1) throw config_error("threads must be >= 1");
  if (!(c.violation_cap_factor >= 1.0))
    throw config_error("violation_cap_factor must be >= 1");
  if (c.seed == c.calibration_seed)
    throw config_error("run seed must differ from calibration_seed");
}

std::string config_json(const ExperimentConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["family"] = c.family;
  j["d"] = c.d;
  j["k"] = c.k;
  j["sign"] = c.sign;
  j["coupling"] = c.coupling;
  j["n"] = c.n;
  j["L"] = c.L;
  j["data_family"] = c.data_family;
  j["amplitude"] = c.amplitude;
  j["amplitude_scale"] = c.amplitude_scale;
  j["sigma"] = c.sigma;
  j["width"] = c.width;
  j["center_frac"] = c.center_frac;
  j["bump_outer"] = c.bump_outer;
  j["bump_inner"] = c.bump_inner;
  j["band_lo"] = c.band_lo;
  j["band_hi"] = c.band_hi;
  j["band_perp"] = c.band_perp;
  j["normalize_hhalf"] = c.normalize_hhalf;
  j["t1"] = c.t1;
  j["snap_t0"] = c.snap_t0;
  j["snapshots"] = c.snapshots;
  j["dt_override"] = c.dt_override;
  j["kato_dt"] = c.kato_dt;
  j["kato_T"] = c.kato_T;
  j["guard_threshold"] = c.guard_threshold;
  j["guard_buffer"] = c.guard_buffer;
  j["mass_drift_tol"] = c.mass_drift_tol;
  j["energy_drift_tol"] = c.energy_drift_tol;
  j["max_fields"] = c.max_fields;
  j["r_target"] = std::isinf(c.r_target) ? json("inf") : json(c.r_target);
  j["window0"] = c.window0;
  j["window1"] = c.window1;
  j["target_exponent"] = c.target_exponent;
  j["tolerance"] = c.tolerance;
  j["seed"] = c.seed;
  j["calibration_seed"] = c.calibration_seed;
  j["corpus_size"] = c.corpus_size;
  j["calibration_size"] = c.calibration_size;
  j["violation_cap_factor"] = c.violation_cap_factor;
  j["threads"] = c.threads;
  j["outdir"] = c.outdir;
  j["long_running"] = c.long_running;
  j["dry_run"] = c.dry_run;
  return j.dump(2);
}

}  // namespace dlab
