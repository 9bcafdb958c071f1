#include "dlab/multiplier.hpp"

#include <cmath>
#include <sstream>

namespace dlab {

Field apply_multiplier(const Field& f, const Multiplier& m, bool hermitian) {
  const bool phys_in = (f.rep == Rep::physical);
  Field s = phys_in ? transform(f, Rep::spectral) : f;
  const Grid& g = *f.grid;
  ModePoint pt;
  pt.d = g.d;
  bool bad = false;
  std::array<double, 4> bad_xi{};
  for_each_mode(g, [&](std::size_t i, const std::array<double, 4>& xi,
                       const std::array<bool, 4>& nyq) {
    pt.xi = xi;
    pt.nyq = nyq;
    const cplx v = m.symbol(pt);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      if (!bad) bad_xi = xi;
      bad = true;
      return;
    }
    s.data[i] *= v;
  });
  if (bad) {
    std::ostringstream os;
    os << "apply_multiplier[" << m.label << "]: symbol not finite at xi=(";
    for (int a = 0; a < g.d; ++a) os << (a ? "," : "") << bad_xi[a];
    os << ")";
    throw numeric_error(os.str());
  }
  s.real_flag = f.real_flag && hermitian;
  return phys_in ? transform(s, Rep::physical) : s;
}

Field fractional_derivative(const Field& f, double s, DerivKind kind) {
  if (!std::isfinite(s)) throw usage_error("fractional_derivative: bad order");
  const bool homogeneous = (kind != DerivKind::inhomogeneous);
  if (homogeneous && s < 0.0) {
    // |xi|^{-|s|} undefined at DC; require no mass there
    Field sp = to_spectral(f);
    const double sup = spectral_sup(sp);
    if (std::abs(sp.data[0]) > 1e-12 * sup && sup > 0.0)
      throw numeric_error(
          "fractional_derivative: negative homogeneous order on field with "
          "DC mass");
  }
  Multiplier m;
  std::ostringstream lbl;
  switch (kind) {
    case DerivKind::homogeneous:
    case DerivKind::laplacian:
      lbl << (kind == DerivKind::homogeneous ? "D^" : "(-Delta)^s/2, s=") << s;
      m.symbol = [s](const ModePoint& p) -> cplx {
        const double r2 = p.abs2();
        if (r2 == 0.0) return s > 0.0 ? 0.0 : (s == 0.0 ? 1.0 : 0.0);
        return std::pow(r2, 0.5 * s);
      };
      break;
    case DerivKind::inhomogeneous:
      lbl << "J^" << s;
      m.symbol = [s](const ModePoint& p) -> cplx {
        return std::pow(1.0 + p.abs2(), 0.5 * s);
      };
      break;
    case DerivKind::x_only:
      lbl << "D_x^" << s;
      m.symbol = [s](const ModePoint& p) -> cplx {
        const double ax = std::abs(p.xi[0]);
        if (ax == 0.0) return s > 0.0 ? 0.0 : (s == 0.0 ? 1.0 : 0.0);
        return std::pow(ax, s);
      };
      break;
  }
  m.label = lbl.str();
  return apply_multiplier(f, m);
}

// ---- Littlewood-Paley ----------------------------------------------------
// psi(x) = exp(-1/x) for x>0; h = psi(2-x)/(psi(2-x)+psi(x-1)) is 1 on
// (-inf,1], 0 on [2,inf). chi(r) = h(r) - h(2r) is supported in [1/2,2] and
// sum_{j in Z} chi(2^-j r) telescopes to 1 for r>0. chi1 = h(r) covers the
// low block, so chi1(r) + sum_{N=2,4,...} chi(r/N) = 1 exactly.

static double psi_(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

static double lp_h(double x) {
  const double a = psi_(2.0 - x);
  const double b = psi_(x - 1.0);
  return a + b == 0.0 ? (x <= 1.0 ? 1.0 : 0.0) : a / (a + b);
}

double lp_chi(double r) { return lp_h(r) - lp_h(2.0 * r); }
double lp_chi1(double r) { return lp_h(r); }

Field littlewood_paley(const Field& f, double N) {
  if (N < 1.0 || std::abs(N - std::exp2(std::round(std::log2(N)))) > 1e-12)
    throw usage_error("littlewood_paley: N must be 1 or a power of two");
  Multiplier m;
  std::ostringstream lbl;
  lbl << "P_" << N;
  m.label = lbl.str();
  if (N == 1.0) {
    m.symbol = [](const ModePoint& p) -> cplx {
      return lp_chi1(std::sqrt(p.abs2()));
    };
  } else {
    m.symbol = [N](const ModePoint& p) -> cplx {
      return lp_chi(std::sqrt(p.abs2()) / N);
    };
  }
  return apply_multiplier(f, m);
}

// ---- linear propagators ---------------------------------------------------

Multiplier propagator_multiplier(double t, Family family, int d) {
  Multiplier m;
  std::ostringstream lbl;
  if (family == Family::airy) {
    lbl << "exp(i t xi^3), t=" << t;
    m.symbol = [t](const ModePoint& p) -> cplx {
      if (p.nyq[0]) return 1.0;  // keep the unpaired mode fixed
      const double x = p.xi[0];
      return std::polar(1.0, t * x * x * x);
    };
  } else {
    lbl << "exp(i t xi1 |xi|^2), t=" << t;
    m.symbol = [t, d](const ModePoint& p) -> cplx {
      if (p.nyq[0]) return 1.0;
      return std::polar(1.0, t * p.xi[0] * p.abs2());
    };
  }
  m.label = lbl.str();
  return m;
}

Field linear_propagator(const Field& f, double t, Family family) {
  if (!std::isfinite(t)) throw usage_error("linear_propagator: t not finite");
  const int d = f.grid->d;
  if (family == Family::airy && d != 1)
    throw usage_error("linear_propagator: airy requires d=1");
  if (family == Family::zk && d < 2)
    throw usage_error("linear_propagator: zk requires d>=2");
  return apply_multiplier(f, propagator_multiplier(t, family, d));
}

// ---- dealiasing ------------------------------------------------------------

int dealias_keep(int n, int degree) {
  // strict no-alias bound: k*(degree+1) < n  =>  k_max = floor((n-1)/(m+1))
  return (n - 1) / (degree + 1);
}

Multiplier dealias_mask(const Grid& g, int degree) {
  if (degree < 2) throw usage_error("dealias_mask: degree must be >= 2");
  std::array<double, 4> dxi{};
  std::array<int, 4> keep{};
  for (int a = 0; a < g.d; ++a) {
    dxi[a] = 2.0 * M_PI / g.L[a];
    keep[a] = dealias_keep(g.n[a], degree);
  }
  Multiplier m;
  std::ostringstream lbl;
  lbl << "dealias(m=" << degree << ")";
  m.label = lbl.str();
  const int d = g.d;
  m.symbol = [dxi, keep, d](const ModePoint& p) -> cplx {
    for (int a = 0; a < d; ++a) {
      const long idx = std::lround(p.xi[a] / dxi[a]);
      if (std::labs(idx) > keep[a]) return 0.0;
    }
    return 1.0;
  };
  return m;
}

}  // namespace dlab
