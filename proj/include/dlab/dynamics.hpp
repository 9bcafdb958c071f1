#pragma once
#include <optional>
#include <vector>

#include "dlab/multiplier.hpp"

namespace dlab {

enum class Sign { focusing, defocusing };

// u_t + (dispersion) + sign * d/dx (u^{k+1}) = 0
//   airy: dispersion = u_xxx (d=1); zk: dispersion = d/dx Laplacian u.
// coupling in [0,1] scales the nonlinear term; 0 = pure linear flow.
struct EquationSpec {
  Family family = Family::airy;
  int d = 1;
  int k = 4;
  Sign sign = Sign::defocusing;
  double coupling = 1.0;

  double s_c() const { return 0.5 * d - 2.0 / k; }
  double sgn() const { return sign == Sign::focusing ? 1.0 : -1.0; }
};

struct ConservedLedger {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  double max_mass_drift = 0.0;
  double max_energy_drift = 0.0;
};

struct SnapshotSchedule {
  // geometric times t0 * ratio^j capped at t1, plus t=0 when include_zero
  double t0 = 1.0;
  double t1 = 50.0;
  double ratio = 1.1;
  bool include_zero = true;
  std::vector<double> times() const;
  static SnapshotSchedule geometric(double t0, double t1, int npts);
};

struct Trajectory {
  EquationSpec spec;
  GridPtr grid;
  std::vector<double> times;
  std::vector<Field> fields;          // thinned to <= max_fields snapshots
  std::vector<int> field_index;       // snapshot index of each stored field
  ConservedLedger ledger;
  std::vector<double> sup_norms;      // per snapshot
  std::vector<double> boundary_frac;  // per snapshot
  std::optional<double> wrap_time;
  std::optional<double> blowup_time;
  int steps_taken = 0;
  double dt_used = 0.0;
  int dt_halvings = 0;
};

struct EvolveOptions {
  double dt_override = 0.0;      // 0 = use CFL rule
  double guard_threshold = 1e-6; // boundary mass fraction halting evolve
  double guard_buffer = 0.05;
  double mass_drift_tol = 1e-10; // exceeded => halve dt and restart (<=4x)
  int max_fields = 64;
  bool ledger_every_step = true;
};

// -sign * coupling * d/dx(u^{k+1}) with degree-(k+1) dealiasing both sides
Field nonlinearity(const Field& u, const EquationSpec& spec);

// one IFRK4 step; dt of either sign (negative = reverse time)
Field step(const Field& u, double t, double dt, const EquationSpec& spec);

Trajectory evolve(const Field& u0, const EquationSpec& spec, double T,
                  const SnapshotSchedule& schedule,
                  const EvolveOptions& opts = {});

// (mass, energy): M = sum u^2 cell, E = 1/2 sum |grad u|^2 cell
//                 - sgn/(k+2) sum u^{k+2} cell
std::pair<double, double> conserved(const Field& u, const EquationSpec& spec);

// mass fraction in the two outer x-slabs of width buffer_fraction*L
double wraparound_guard(const Field& u, double buffer_fraction);

// default CFL: dt = 0.5 dx / (max(1, sup|u|)^k (k+1))
double default_dt(const Field& u0, const EquationSpec& spec);

}  // namespace dlab
