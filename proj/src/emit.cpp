#include "dlab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlab/sha256.hpp"
#include "json.hpp"

namespace dlab {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

NormRow norm_row(double t, const Field& u, const EquationSpec& spec,
                 double r_target, double guard_buffer) {
  NormRow row;
  row.t = t;
  const Field up = u.rep == Rep::physical ? u : to_physical(u);
  row.L2 = l2(up);
  row.Linf = linf(up);
  row.Lr = std::isinf(r_target) ? row.Linf
                                : norm(up, NormSpec::Lebesgue(r_target));
  row.Hhalf = norm(up, NormSpec::Sobolev(0.5));
  const auto me = conserved(up, spec);
  row.mass = me.first;
  row.energy = me.second;
  row.bfrac = wraparound_guard(up, guard_buffer);
  return row;
}

std::vector<NormRow> rows_from_trajectory(const Trajectory& traj,
                                          double r_target,
                                          double guard_buffer) {
  std::vector<NormRow> rows;
  rows.reserve(traj.fields.size());
  for (size_t j = 0; j < traj.fields.size(); ++j) {
    const size_t si = static_cast<size_t>(traj.field_index[j]);
    NormRow row = norm_row(traj.times[si], traj.fields[j], traj.spec, r_target,
                           guard_buffer);
    // the ledger carries the stepper's own conserved values at this time
    rows.push_back(row);
  }
  return rows;
}

void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows) {
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << "t, L2, Linf, Lr_target, Hhalf, mass, energy, boundary_mass_fraction\n";
  for (const NormRow& r : rows) {
    out << fmt17(r.t) << ", " << fmt17(r.L2) << ", " << fmt17(r.Linf) << ", "
        << fmt17(r.Lr) << ", " << fmt17(r.Hhalf) << ", " << fmt17(r.mass)
        << ", " << fmt17(r.energy) << ", " << fmt17(r.bfrac) << "\n";
  }
  if (!out) throw usage_error("write failed: " + path);
}

std::vector<NormRow> read_norms_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw usage_error("empty csv: " + path);
  std::vector<NormRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    NormRow r;
    if (!(ss >> r.t >> r.L2 >> r.Linf >> r.Lr >> r.Hhalf >> r.mass >>
          r.energy >> r.bfrac))
      throw usage_error("malformed csv row in " + path + ": " + line);
    rows.push_back(r);
  }
  return rows;
}

namespace {

json fit_to_json(const FitRecord& rec) {
  json j;
  j["label"] = rec.label;
  j["window"] = {rec.fit.w0, rec.fit.w1};
  j["exponent"] = rec.fit.exponent;
  j["stderr"] = rec.fit.stderr_slope;
  j["amplitude"] = rec.fit.amplitude;
  j["r_squared"] = rec.fit.r_squared;
  j["weight"] = rec.fit.weight;
  j["weighted_sup"] = rec.fit.weighted_sup;
  j["nsamples"] = rec.fit.nsamples;
  j["target"] = rec.target;
  j["tolerance"] = rec.tolerance;
  j["gated"] = rec.gated;
  j["pass"] = rec.pass;
  return j;
}

}  // namespace

void write_fit_json(const std::string& path, const std::vector<FitRecord>& fits) {
  json j;
  j["fits"] = json::array();
  for (const auto& f : fits) j["fits"].push_back(fit_to_json(f));
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_inequality_csv(const std::string& path,
                          const std::vector<InequalityEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << "sample_id, form, s, p, lhs, rhs, ratio\n";
  for (const auto& e : entries) {
    out << e.sample_id << ", " << e.form << ", " << fmt17(e.s) << ", "
        << fmt17(e.p) << ", " << fmt17(e.lhs) << ", " << fmt17(e.rhs) << ", "
        << fmt17(e.ratio) << "\n";
  }
  if (!out) throw usage_error("write failed: " + path);
}

bool evaluate_fit(FitRecord& rec) {
  rec.pass = std::isfinite(rec.fit.exponent) &&
             std::abs(rec.fit.exponent - rec.target) <= rec.tolerance;
  return rec.pass;
}

bool evaluate_ratio(RatioRecord& rec) {
  const double scale = std::max(std::abs(rec.target), 1e-300);
  rec.pass = std::isfinite(rec.value) &&
             std::abs(rec.value - rec.target) / scale <= rec.tolerance;
  return rec.pass;
}

void write_manifest(const std::string& outdir, RunManifest& m) {
  for (auto& [name, hash] : m.files)
    hash = sha256_file((fs::path(outdir) / name).string());

  json j;
  j["artifact_version"] = "1.0.0";
  j["scenario"] = m.scenario;
  j["pass"] = m.pass;
  j["wall_seconds"] = m.wall_seconds;
  j["steps"] = m.steps;
  j["dt_used"] = m.dt_used;
  j["dt_halvings"] = m.dt_halvings;
  j["wrap_time"] = m.wrap_time;
  j["blowup_time"] = m.blowup_time;
  j["mass_drift"] = m.mass_drift;
  j["energy_drift"] = m.energy_drift;
  j["fits"] = json::array();
  for (const auto& f : m.fits) j["fits"].push_back(fit_to_json(f));
  j["ratios"] = json::array();
  for (const auto& r : m.ratios) {
    json e;
    e["label"] = r.label;
    e["value"] = r.value;
    e["target"] = r.target;
    e["tolerance"] = r.tolerance;
    e["gated"] = r.gated;
    e["pass"] = r.pass;
    j["ratios"].push_back(e);
  }
  j["notes"] = m.notes;
  j["files"] = json::object();
  for (const auto& [name, hash] : m.files) j["files"][name] = hash;
  j["config"] = json::parse(m.config_echo.empty() ? "{}" : m.config_echo);

  std::ofstream out(fs::path(outdir) / "manifest.json");
  if (!out) throw usage_error("cannot write manifest in " + outdir);
  out << j.dump(2) << "\n";
}

}  // namespace dlab
