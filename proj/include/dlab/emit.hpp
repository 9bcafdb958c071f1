#pragma once
#include <string>
#include <vector>

#include "dlab/analysis.hpp"
#include "dlab/config.hpp"

namespace dlab {

// one norms.csv row per snapshot
struct NormRow {
  double t = 0.0;
  double L2 = 0.0;
  double Linf = 0.0;
  double Lr = 0.0;     // the scenario's target exponent r
  double Hhalf = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double bfrac = 0.0;
};

// full norm set for one snapshot; Lr and mass/energy per the equation spec
NormRow norm_row(double t, const Field& u, const EquationSpec& spec,
                 double r_target, double guard_buffer);

std::vector<NormRow> rows_from_trajectory(const Trajectory& traj,
                                          double r_target,
                                          double guard_buffer);

struct FitRecord {
  std::string label;  // which norm the fit tracks
  DecayFit fit;
  double target = 0.0;
  double tolerance = 0.0;
  bool gated = true;  // counts toward the manifest verdict
  bool pass = true;
};

struct RatioRecord {
  std::string label;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;  // relative
  bool gated = true;
  bool pass = true;
};

struct RunManifest {
  std::string scenario;
  bool pass = true;
  double wall_seconds = 0.0;
  int steps = 0;
  double dt_used = 0.0;
  int dt_halvings = 0;
  double wrap_time = -1.0;  // -1 = never tripped
  double blowup_time = -1.0;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  std::vector<FitRecord> fits;
  std::vector<RatioRecord> ratios;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::string>> files;  // name -> sha256
  std::string config_echo;  // JSON text
};

std::string fmt17(double v);

void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows);
std::vector<NormRow> read_norms_csv(const std::string& path);

void write_fit_json(const std::string& path, const std::vector<FitRecord>& fits);

void write_inequality_csv(const std::string& path,
                          const std::vector<InequalityEntry>& entries);

// hashes every file already recorded in m.files (by re-reading them from
// outdir), then writes outdir/manifest.json
void write_manifest(const std::string& outdir, RunManifest& m);

bool evaluate_fit(FitRecord& rec);      // sets pass from |exp - target| <= tol
bool evaluate_ratio(RatioRecord& rec);  // relative comparison

}  // namespace dlab
