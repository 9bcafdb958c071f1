#include "dlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dlab/multiplier.hpp"

namespace dlab {

NormSpec NormSpec::Lebesgue(double p) {
  if (!(p >= 1.0)) throw usage_error("Lebesgue exponent must satisfy p >= 1");
  NormSpec s;
  s.variant = Variant::lebesgue;
  s.p = p;
  return s;
}

NormSpec NormSpec::Lorentz(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0))
    throw usage_error("Lorentz exponents must be positive");
  NormSpec s;
  s.variant = Variant::lorentz;
  s.p = p;
  s.q = q;
  return s;
}

NormSpec NormSpec::Sobolev(double s, bool homogeneous) {
  NormSpec n;
  n.variant = Variant::sobolev;
  n.s = s;
  n.homogeneous = homogeneous;
  return n;
}

NormSpec NormSpec::MixedXT(double p_x, double q_t, bool x_outer) {
  NormSpec n;
  n.variant = Variant::mixed_xt;
  n.p = p_x;
  n.q = q_t;
  n.x_outer = x_outer;
  return n;
}

NormSpec NormSpec::AnisotropicYX(double p_y, double p_x) {
  NormSpec n;
  n.variant = Variant::anisotropic_yx;
  n.p = p_y;
  n.q = p_x;
  return n;
}

namespace {

// L^p of |f| over the grid with cell measure; p may be inf
double lebesgue_norm(const Field& f, double p) {
  const Field g = f.rep == Rep::physical ? f : to_physical(f);
  if (std::isinf(p)) return linf(g);
  const double cell = g.grid->cell();
  double acc = 0.0;
  for (const cplx& z : g.data) acc += std::pow(std::abs(z), p);
  return std::pow(acc * cell, 1.0 / p);
}

}  // namespace

double lorentz_quasinorm(std::vector<std::pair<double, double>> vm, double p,
                         double q) {
  // drop zero-measure and zero-value entries, sort values descending
  std::erase_if(vm, [](const auto& e) { return e.second <= 0.0 || e.first <= 0.0; });
  if (vm.empty()) return 0.0;
  std::sort(vm.begin(), vm.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  if (std::isinf(q)) {
    // sup_j v_j * W_j^{1/p} with W_j the cumulative measure through level j
    double W = 0.0, best = 0.0;
    for (const auto& [v, m] : vm) {
      W += m;
      best = std::max(best, v * std::pow(W, 1.0 / p));
    }
    return best;
  }
  // layer-cake: ||f||^q = (p/q) * sum_j W_j^{q/p} (v_j^q - v_{j+1}^q),
  // exact for step functions (Abel summation of the distribution integral)
  double W = 0.0, acc = 0.0;
  for (size_t j = 0; j < vm.size(); ++j) {
    W += vm[j].second;
    const double vq = std::pow(vm[j].first, q);
    const double vq_next = (j + 1 < vm.size()) ? std::pow(vm[j + 1].first, q) : 0.0;
    acc += std::pow(W, q / p) * (vq - vq_next);
  }
  return std::pow(acc * (p / q), 1.0 / q);
}

double norm(const Field& f, const NormSpec& spec) {
  switch (spec.variant) {
    case NormSpec::Variant::lebesgue:
      return lebesgue_norm(f, spec.p);
    case NormSpec::Variant::lorentz: {
      const Field g = f.rep == Rep::physical ? f : to_physical(f);
      const double cell = g.grid->cell();
      std::vector<std::pair<double, double>> vm;
      vm.reserve(g.data.size());
      for (const cplx& z : g.data) vm.emplace_back(std::abs(z), cell);
      return lorentz_quasinorm(std::move(vm), spec.p, spec.q);
    }
    case NormSpec::Variant::sobolev: {
      const Field g = f.rep == Rep::spectral ? f : to_spectral(f);
      const double s = spec.s;
      double acc = 0.0;
      double dmeas = 1.0;
      for (int a = 0; a < g.grid->d; ++a) dmeas *= g.grid->dxi(a);
      for_each_mode(*g.grid, [&](std::size_t flat,
                                 const std::array<double, 4>& xi,
                                 const std::array<bool, 4>&) {
        double k2 = 0.0;
        for (int a = 0; a < g.grid->d; ++a) k2 += xi[a] * xi[a];
        if (spec.homogeneous && k2 == 0.0) return;  // |0|^s convention: no DC
        const double w = spec.homogeneous ? std::pow(k2, s) : std::pow(1.0 + k2, s);
        acc += w * std::norm(g.data[flat]);
      });
      return std::sqrt(acc * dmeas);
    }
    default:
      throw usage_error("norm(): mixed/anisotropic specs need mixed_norm or a trajectory");
  }
}

namespace {

// L^{p_x}_x of the slice of f over axis 0, at fixed transverse index; here we
// need the opposite split: inner L^{q}_x over axis 0, outer L^{p}_y over the
// rest.  Axis 0 is the slowest axis (row-major), so fixed-y slices are strided.
double anisotropic_yx(const Field& f, double p_y, double p_x) {
  const Field g = f.rep == Rep::physical ? f : to_physical(f);
  const Grid& gr = *g.grid;
  if (gr.d < 2) throw usage_error("anisotropic norm requires d >= 2");
  std::size_t ny = 1;
  for (int a = 1; a < gr.d; ++a) ny *= static_cast<std::size_t>(gr.n[a]);
  const std::size_t nx = static_cast<std::size_t>(gr.n[0]);
  const double dx = gr.dx[0];
  double cell_y = 1.0;
  for (int a = 1; a < gr.d; ++a) cell_y *= gr.dx[a];
  double acc_y = 0.0, sup_y = 0.0;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    double inner;
    if (std::isinf(p_x)) {
      double m = 0.0;
      for (std::size_t ix = 0; ix < nx; ++ix)
        m = std::max(m, std::abs(g.data[ix * ny + iy]));
      inner = m;
    } else {
      double a = 0.0;
      for (std::size_t ix = 0; ix < nx; ++ix)
        a += std::pow(std::abs(g.data[ix * ny + iy]), p_x);
      inner = std::pow(a * dx, 1.0 / p_x);
    }
    if (std::isinf(p_y))
      sup_y = std::max(sup_y, inner);
    else
      acc_y += std::pow(inner, p_y);
  }
  return std::isinf(p_y) ? sup_y : std::pow(acc_y * cell_y, 1.0 / p_y);
}

}  // namespace

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  const size_t n = t.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) {
    if (n == 1) w[0] = 1.0;
    return w;
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double mixed_norm(const Trajectory& traj, const NormSpec& spec, double w0,
                  double w1) {
  if (spec.variant == NormSpec::Variant::anisotropic_yx) {
    // single-time norm applied to the latest snapshot is not meaningful here;
    // reject to keep the API honest
    throw usage_error("anisotropic norm applies to a single field; use norm_anisotropic");
  }
  if (spec.variant != NormSpec::Variant::mixed_xt)
    throw usage_error("mixed_norm requires a MixedXT spec");
  if (traj.wrap_time && w1 > *traj.wrap_time + 1e-12)
    throw usage_error("mixed_norm window extends past wrap_time");

  // collect stored snapshots inside the window
  std::vector<double> times;
  std::vector<const Field*> fields;
  for (size_t j = 0; j < traj.fields.size(); ++j) {
    const double t = traj.times[static_cast<size_t>(traj.field_index[j])];
    if (t < w0 - 1e-12 || t > w1 + 1e-12) continue;
    times.push_back(t);
    fields.push_back(&traj.fields[j]);
  }
  if (times.size() < 2)
    throw usage_error("mixed_norm: fewer than two stored snapshots in window");
  const std::vector<double> tw = trapezoid_weights(times);

  const double p = spec.p, q = spec.q;
  if (spec.x_outer) {
    // L^p_x L^q_t: inner time integral at each grid point, then spatial L^p
    std::vector<Field> phys;
    phys.reserve(fields.size());
    for (const Field* f : fields)
      phys.push_back(f->rep == Rep::physical ? *f : to_physical(*f));
    const Grid& gr = *phys.front().grid;
    const std::size_t ntot = gr.size();
    const double cell = gr.cell();
    double acc = 0.0, sup = 0.0;
    for (std::size_t j = 0; j < ntot; ++j) {
      double it = 0.0, mx = 0.0;
      for (size_t s = 0; s < phys.size(); ++s) {
        const double v = std::abs(phys[s].data[j]);
        if (std::isinf(q))
          mx = std::max(mx, v);
        else
          it += tw[s] * std::pow(v, q);
      }
      const double inner = std::isinf(q) ? mx : std::pow(it, 1.0 / q);
      if (std::isinf(p))
        sup = std::max(sup, inner);
      else
        acc += std::pow(inner, p);
    }
    return std::isinf(p) ? sup : std::pow(acc * cell, 1.0 / p);
  }

  // t-outer: spatial norm per snapshot, then L^q_t (optionally Lorentz L^{q,2}_t)
  std::vector<double> sn(times.size());
  const NormSpec xs = NormSpec::Lebesgue(p);
  for (size_t s = 0; s < times.size(); ++s) sn[s] = norm(*fields[s], xs);
  if (spec.lorentz_time) {
    std::vector<std::pair<double, double>> vm;
    for (size_t s = 0; s < times.size(); ++s) vm.emplace_back(sn[s], tw[s]);
    return lorentz_quasinorm(std::move(vm), q, 2.0);
  }
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : sn) m = std::max(m, v);
    return m;
  }
  double acc = 0.0;
  for (size_t s = 0; s < times.size(); ++s) acc += tw[s] * std::pow(sn[s], q);
  return std::pow(acc, 1.0 / q);
}

double norm_anisotropic(const Field& f, double p_y, double p_x) {
  return anisotropic_yx(f, p_y, p_x);
}

}  // namespace dlab
