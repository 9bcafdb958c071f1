#include "dlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "dlab/fft.hpp"

namespace dlab {

std::vector<double> SnapshotSchedule::times() const {
  if (!(t0 > 0.0) || !(t1 >= t0) || !(ratio > 1.0))
    throw usage_error("SnapshotSchedule: need 0 < t0 <= t1, ratio > 1");
  std::vector<double> ts;
  if (include_zero) ts.push_back(0.0);
  for (double t = t0; t <= t1 * (1.0 + 1e-12); t *= ratio) ts.push_back(t);
  return ts;
}

SnapshotSchedule SnapshotSchedule::geometric(double t0, double t1, int npts) {
  if (npts < 2) throw usage_error("SnapshotSchedule: need >= 2 points");
  SnapshotSchedule s;
  s.t0 = t0;
  s.t1 = t1;
  s.ratio = std::pow(t1 / t0, 1.0 / (npts - 1));
  // shave so accumulation lands exactly on npts samples
  s.ratio = std::nextafter(s.ratio, 0.0);
  s.include_zero = true;
  return s;
}

struct blowup_error : numeric_error {
  double sup;
  explicit blowup_error(double s)
      : numeric_error("nonlinear power overflow, sup=" + std::to_string(s)),
        sup(s) {}
};

double default_dt(const Field& u0, const EquationSpec& spec) {
  const double sup = std::max(1.0, linf(u0));
  return 0.5 * u0.grid->dx[0] / (std::pow(sup, spec.k) * (spec.k + 1));
}

// ---------------------------------------------------------------------------
// integrating-factor RK4 workspace; spectral state in raw FFT units

namespace {

struct Stepper {
  GridPtr grid;
  EquationSpec spec;
  std::size_t ntot;
  double inv_ntot;
  std::vector<double> omega;   // dispersion rate (0 at x-Nyquist)
  std::vector<double> xi1;     // x-wavenumber (0 at x-Nyquist)
  std::vector<double> k2;      // |xi|^2
  std::vector<float> mask;     // dealias 0/1
  std::vector<cplx> Eh, Ef;    // half/full-step integrating factors
  double dt_cached = 0.0;
  // work buffers
  std::vector<cplx> w, p, n1, n2, n3, n4, u2;

  Stepper(GridPtr g, const EquationSpec& s) : grid(std::move(g)), spec(s) {
    const Grid& gr = *grid;
    ntot = gr.size();
    inv_ntot = 1.0 / static_cast<double>(ntot);
    omega.resize(ntot);
    xi1.resize(ntot);
    k2.resize(ntot);
    mask.resize(ntot);
    Multiplier dm = dealias_mask(gr, spec.k + 1);
    ModePoint pt;
    pt.d = gr.d;
    for_each_mode(gr, [&](std::size_t i, const std::array<double, 4>& xi,
                          const std::array<bool, 4>& nyq) {
      pt.xi = xi;
      pt.nyq = nyq;
      double a2 = 0.0;
      for (int a = 0; a < gr.d; ++a) a2 += xi[a] * xi[a];
      k2[i] = a2;
      xi1[i] = nyq[0] ? 0.0 : xi[0];
      omega[i] = nyq[0] ? 0.0
                        : (spec.family == Family::airy
                               ? xi[0] * xi[0] * xi[0]
                               : xi[0] * a2);
      mask[i] = static_cast<float>(dm.symbol(pt).real());
    });
    w.resize(ntot);
    p.resize(ntot);
    n1.resize(ntot);
    n2.resize(ntot);
    n3.resize(ntot);
    n4.resize(ntot);
    u2.resize(ntot);
  }

  void set_dt(double dt) {
    if (dt == dt_cached && !Eh.empty()) return;
    Eh.resize(ntot);
    Ef.resize(ntot);
    for (std::size_t i = 0; i < ntot; ++i) {
      Eh[i] = std::polar(1.0, 0.5 * dt * omega[i]);
      Ef[i] = Eh[i] * Eh[i];
    }
    dt_cached = dt;
  }

  // N(uh) = -sgn*coupling * i xi1 * mask * F[(F^-1[mask*uh])^{k+1}]
  void nonlin(const std::vector<cplx>& uh, std::vector<cplx>& out) {
    const Grid& gr = *grid;
    for (std::size_t i = 0; i < ntot; ++i)
      w[i] = uh[i] * static_cast<double>(mask[i]);
    raw_dft(gr, w.data(), p.data(), +1);
    const int kp1 = spec.k + 1;
    for (std::size_t i = 0; i < ntot; ++i) {
      double v = p[i].real() * inv_ntot;
      // negated comparison also trips on NaN, which std::max would swallow
      if (!(std::abs(v) <= 1e150)) throw blowup_error(std::abs(v));
      double acc = v;
      for (int j = 1; j < kp1; ++j) acc *= v;
      p[i] = acc;
    }
    raw_dft(gr, p.data(), w.data(), -1);
    const double c = -spec.sgn() * spec.coupling;
    for (std::size_t i = 0; i < ntot; ++i)
      out[i] = cplx(0.0, c * xi1[i] * mask[i]) * w[i];
  }

  // one IFRK4 step of the spectral state (dt from set_dt)
  void advance(std::vector<cplx>& uh) {
    const double dt = dt_cached;
    nonlin(uh, n1);
    for (std::size_t i = 0; i < ntot; ++i)
      u2[i] = Eh[i] * (uh[i] + 0.5 * dt * n1[i]);
    nonlin(u2, n2);
    for (std::size_t i = 0; i < ntot; ++i)
      u2[i] = Eh[i] * uh[i] + 0.5 * dt * n2[i];
    nonlin(u2, n3);
    for (std::size_t i = 0; i < ntot; ++i)
      u2[i] = Ef[i] * uh[i] + dt * Eh[i] * n3[i];
    nonlin(u2, n4);
    const double w6 = dt / 6.0;
    for (std::size_t i = 0; i < ntot; ++i)
      uh[i] = Ef[i] * uh[i] +
              w6 * (Ef[i] * n1[i] + 2.0 * Eh[i] * (n2[i] + n3[i]) + n4[i]);
  }

  // mass/energy from raw spectral state; one inverse FFT for the power term
  std::pair<double, double> conserved_raw(const std::vector<cplx>& uh) {
    const Grid& gr = *grid;
    double dxi = 1.0;
    for (int a = 0; a < gr.d; ++a) dxi *= 2.0 * M_PI / gr.L[a];
    const double sym2 =
        gr.cell() * gr.cell() / std::pow(2.0 * M_PI, gr.d) * dxi;
    double m = 0.0, grad = 0.0;
    for (std::size_t i = 0; i < ntot; ++i) {
      const double a = std::norm(uh[i]);
      m += a;
      grad += k2[i] * a;
    }
    m *= sym2;
    grad *= sym2;
    double pw = 0.0;
    raw_dft(gr, uh.data(), p.data(), +1);
    const int kp2 = spec.k + 2;
    for (std::size_t i = 0; i < ntot; ++i) {
      double v = p[i].real() * inv_ntot;
      double acc = v;
      for (int j = 1; j < kp2; ++j) acc *= v;
      pw += acc;
    }
    pw *= gr.cell();
    const double e =
        0.5 * grad - spec.sgn() * spec.coupling / kp2 * pw;
    return {m, e};
  }
};

}  // namespace

Field nonlinearity(const Field& u, const EquationSpec& spec) {
  if (u.rep != Rep::physical || !u.real_flag)
    throw usage_error("nonlinearity: physical real field required");
  Stepper st(u.grid, spec);
  std::vector<cplx> uh(u.size()), out(u.size());
  raw_dft(*u.grid, u.data.data(), uh.data(), -1);
  st.nonlin(uh, out);
  Field r(u.grid, Rep::physical, true);
  raw_dft(*u.grid, out.data(), r.data.data(), +1);
  for (auto& v : r.data) v *= st.inv_ntot;
  return r;
}

Field step(const Field& u, double /*t*/, double dt, const EquationSpec& spec) {
  if (u.rep != Rep::physical)
    throw usage_error("step: physical rep required");
  if (dt == 0.0 || !std::isfinite(dt)) throw usage_error("step: bad dt");
  Stepper st(u.grid, spec);
  st.set_dt(dt);
  std::vector<cplx> uh(u.size());
  raw_dft(*u.grid, u.data.data(), uh.data(), -1);
  st.advance(uh);
  Field r(u.grid, Rep::physical, u.real_flag);
  raw_dft(*u.grid, uh.data(), r.data.data(), +1);
  for (auto& v : r.data) v *= st.inv_ntot;
  return r;
}

std::pair<double, double> conserved(const Field& u, const EquationSpec& spec) {
  if (u.rep != Rep::physical || !u.real_flag)
    throw usage_error("conserved: physical real field required");
  const Grid& g = *u.grid;
  const double cell = g.cell();
  double m = 0.0, pw = 0.0;
  const int kp2 = spec.k + 2;
  for (const auto& z : u.data) {
    const double v = z.real();
    m += v * v;
    double acc = v;
    for (int j = 1; j < kp2; ++j) acc *= v;
    pw += acc;
  }
  Field s = transform(u, Rep::spectral);
  double dxi = 1.0;
  for (int a = 0; a < g.d; ++a) dxi *= 2.0 * M_PI / g.L[a];
  double grad = 0.0;
  for_each_mode(g, [&](std::size_t i, const std::array<double, 4>& xi,
                       const std::array<bool, 4>&) {
    double a2 = 0.0;
    for (int a = 0; a < g.d; ++a) a2 += xi[a] * xi[a];
    grad += a2 * std::norm(s.data[i]);
  });
  const double energy = 0.5 * grad * dxi -
                        spec.sgn() * spec.coupling / kp2 * pw * cell;
  return {m * cell, energy};
}

double wraparound_guard(const Field& u, double buffer_fraction) {
  if (!(buffer_fraction > 0.0 && buffer_fraction < 0.5))
    throw usage_error("wraparound_guard: buffer fraction must be in (0,1/2)");
  if (u.rep != Rep::physical)
    throw usage_error("wraparound_guard: physical rep required");
  const Grid& g = *u.grid;
  const int n0 = g.n[0];
  const int nb = static_cast<int>(buffer_fraction * n0);
  if (nb == 0) return 0.0;
  // x is axis 0 (slowest); each x-slice is a contiguous block
  std::size_t slice = 1;
  for (int a = 1; a < g.d; ++a) slice *= static_cast<std::size_t>(g.n[a]);
  double total = 0.0, buf = 0.0;
  for (int i = 0; i < n0; ++i) {
    double s = 0.0;
    const cplx* row = u.data.data() + slice * static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < slice; ++j) s += std::norm(row[j]);
    total += s;
    if (i < nb || i >= n0 - nb) buf += s;
  }
  return total > 0.0 ? buf / total : 0.0;
}

Trajectory evolve(const Field& u0, const EquationSpec& spec, double T,
                  const SnapshotSchedule& schedule, const EvolveOptions& opts) {
  if (u0.rep != Rep::physical)
    throw usage_error("evolve: physical initial data required");
  if (!std::isfinite(l2(u0))) throw usage_error("evolve: data norm not finite");
  std::vector<double> snaps = schedule.times();
  while (!snaps.empty() && snaps.back() > T * (1.0 + 1e-12)) snaps.pop_back();
  if (snaps.empty() || snaps.front() != 0.0) snaps.insert(snaps.begin(), 0.0);

  double dt0 = opts.dt_override > 0.0 ? opts.dt_override
                                      : default_dt(u0, spec);
  Stepper st(u0.grid, spec);
  const Grid& g = *u0.grid;
  const std::size_t ntot = g.size();

  for (int halving = 0;; ++halving) {
    const double dt = dt0 * std::pow(0.5, halving);
    Trajectory traj;
    traj.spec = spec;
    traj.grid = u0.grid;
    traj.dt_used = dt;
    traj.dt_halvings = halving;

    std::vector<cplx> uh(ntot);
    raw_dft(g, u0.data.data(), uh.data(), -1);

    const auto me0 = st.conserved_raw(uh);
    const double m0 = me0.first, e0 = me0.second;
    bool drift_violation = false;

    auto record_ledger = [&](double t) {
      const auto me = st.conserved_raw(uh);
      const double m = me.first, e = me.second;
      traj.ledger.times.push_back(t);
      traj.ledger.mass.push_back(m);
      traj.ledger.energy.push_back(e);
      const double md = m0 != 0.0 ? std::abs(m - m0) / std::abs(m0) : 0.0;
      const double ed = e0 != 0.0 ? std::abs(e - e0) / std::abs(e0) : 0.0;
      traj.ledger.max_mass_drift = std::max(traj.ledger.max_mass_drift, md);
      traj.ledger.max_energy_drift =
          std::max(traj.ledger.max_energy_drift, ed);
      if (md > opts.mass_drift_tol) drift_violation = true;
    };

    auto record_snapshot = [&](double t) {
      Field f(u0.grid, Rep::physical, u0.real_flag);
      raw_dft(g, uh.data(), f.data.data(), +1);
      for (auto& v : f.data) v *= st.inv_ntot;
      traj.times.push_back(t);
      traj.sup_norms.push_back(linf(f));
      traj.boundary_frac.push_back(wraparound_guard(f, opts.guard_buffer));
      const int snap_idx = static_cast<int>(traj.times.size()) - 1;
      if (static_cast<int>(traj.fields.size()) < opts.max_fields) {
        traj.fields.push_back(std::move(f));
        traj.field_index.push_back(snap_idx);
      }
      return traj.boundary_frac.back();
    };

    record_ledger(0.0);
    if (record_snapshot(0.0) > opts.guard_threshold) {
      traj.wrap_time = 0.0;
      return traj;
    }

    bool done = true;
    try {
      double t = 0.0;
      for (std::size_t si = 1; si < snaps.size(); ++si) {
        const double target = snaps[si];
        const double delta = target - t;
        const int nsub =
            std::max(1, static_cast<int>(std::ceil(delta / dt - 1e-12)));
        const double h = delta / nsub;
        st.set_dt(h);
        for (int j = 0; j < nsub; ++j) {
          st.advance(uh);
          traj.steps_taken++;
          if (opts.ledger_every_step)
            record_ledger(t + h * (j + 1));
        }
        t = target;
        if (!opts.ledger_every_step) record_ledger(t);
        const double frac = record_snapshot(t);
        if (drift_violation) break;
        if (frac > opts.guard_threshold) {
          traj.wrap_time = t;
          break;
        }
      }
    } catch (const blowup_error&) {
      traj.blowup_time =
          traj.ledger.times.empty() ? 0.0 : traj.ledger.times.back();
      return traj;  // blow-up is reported, never retried
    }

    if (drift_violation && halving < 4) continue;
    (void)done;
    return traj;
  }
}

}  // namespace dlab
