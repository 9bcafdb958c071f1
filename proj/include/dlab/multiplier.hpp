#pragma once
#include <functional>
#include <string>

#include "dlab/field.hpp"

namespace dlab {

// Point on the wavenumber lattice handed to symbol functions.
struct ModePoint {
  std::array<double, 4> xi;   // lattice values, axis 0 is x
  std::array<bool, 4> nyq;    // per-axis Nyquist flag
  int d;
  double abs2() const {
    double s = 0;
    for (int a = 0; a < d; ++a) s += xi[a] * xi[a];
    return s;
  }
};

struct Multiplier {
  std::string label;
  std::function<cplx(const ModePoint&)> symbol;
};

// Applies m pointwise to the spectrum. Physical input is auto-transformed
// and the result returned in the input's rep. real_flag preserved only if
// the symbol has Hermitian symmetry (caller-declared via hermitian).
Field apply_multiplier(const Field& f, const Multiplier& m,
                       bool hermitian = true);

enum class DerivKind { homogeneous, inhomogeneous, x_only, laplacian };

// |xi|^s, (1+|xi|^2)^{s/2}, |xi_1|^s, |xi|^s (laplacian = (-Delta)^{s/2}).
// Homogeneous kinds with s<0 require vanishing DC mode (<1e-12 of sup).
Field fractional_derivative(const Field& f, double s, DerivKind kind);

// Fixed C^inf bump chi supported in [1/2,2] built from exp(-1/x); the
// dyadic sum telescopes exactly: chi1(r) + sum_{N>=2} chi(r/N) = 1.
double lp_chi(double r);
double lp_chi1(double r);

// N=1 gives the low block chi1(|xi|); N in 2^N gives chi(|xi|/N).
Field littlewood_paley(const Field& f, double N);

enum class Family { airy, zk };

// e^{i t xi^3} (airy, d=1) / e^{i t xi1 |xi|^2} (zk, d>=2); phase forced to
// 1 on Nyquist-in-x so the map stays an exact bijection on real fields.
Field linear_propagator(const Field& f, double t, Family family);
Multiplier propagator_multiplier(double t, Family family, int d);

// 0/1 mask keeping |signed index| <= floor((n-1)/(degree+1)) per axis:
// degree-m products of kept modes cannot alias back onto kept modes.
Multiplier dealias_mask(const Grid& g, int degree);
int dealias_keep(int n, int degree);

}  // namespace dlab
