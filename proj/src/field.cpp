#include "dlab/field.hpp"

#include <algorithm>
#include <cmath>

#include "dlab/fft.hpp"

namespace dlab {

Field transform(const Field& f, Rep direction) {
  if (f.rep == direction)
    throw usage_error("transform: field already in requested rep");
  const Grid& g = *f.grid;
  Field out(f.grid, direction, f.real_flag);
  if (direction == Rep::spectral) {
    raw_dft(g, f.data.data(), out.data.data(), -1);
    const double scale = g.cell() / std::pow(2.0 * M_PI, 0.5 * g.d);
    for (auto& v : out.data) v *= scale;
  } else {
    raw_dft(g, f.data.data(), out.data.data(), +1);
    const double scale = std::pow(2.0 * M_PI, 0.5 * g.d) / g.volume();
    for (auto& v : out.data) v *= scale;
  }
  return out;
}

Field to_physical(const Field& f) {
  return f.rep == Rep::physical ? f : transform(f, Rep::physical);
}

Field to_spectral(const Field& f) {
  return f.rep == Rep::spectral ? f : transform(f, Rep::spectral);
}

static double sup_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  bool bad = false;
  for (const auto& z : v) {
    const double a = std::abs(z);
    if (!std::isfinite(a)) bad = true;
    m = std::max(m, a);
  }
  // report broken fields as +inf rather than letting NaN vanish under max
  return bad ? std::numeric_limits<double>::infinity() : m;
}

double linf(const Field& f) {
  if (f.rep == Rep::physical) return sup_abs(f.data);
  return sup_abs(transform(f, Rep::physical).data);
}

double l2(const Field& f) {
  // Plancherel-exact in either rep
  double s = 0.0;
  for (const auto& v : f.data) s += std::norm(v);
  const Grid& g = *f.grid;
  if (f.rep == Rep::physical) return std::sqrt(s * g.cell());
  double dxi = 1.0;
  for (int a = 0; a < g.d; ++a) dxi *= 2.0 * M_PI / g.L[a];
  return std::sqrt(s * dxi);
}

double spectral_sup(const Field& f) {
  if (f.rep == Rep::spectral) return sup_abs(f.data);
  return sup_abs(transform(f, Rep::spectral).data);
}

}  // namespace dlab
