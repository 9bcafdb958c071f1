#pragma once
#include <limits>
#include <vector>

#include "dlab/dynamics.hpp"

namespace dlab {

struct NormSpec {
  enum class Variant { lebesgue, lorentz, sobolev, mixed_xt, anisotropic_yx };
  Variant variant = Variant::lebesgue;
  double p = 2.0;       // lebesgue p / lorentz p / mixed p_x / aniso p_y
  double q = 2.0;       // lorentz q / mixed q_t / aniso p_x
  double s = 0.0;       // sobolev order
  bool homogeneous = false;
  bool x_outer = false;  // mixed: L^p_x L^q_t (x outer) vs L^q_t L^p_x
  bool lorentz_time = false;  // mixed t-outer uses L^{q,2}_t rearrangement

  static NormSpec Lebesgue(double p);
  static NormSpec Lorentz(double p, double q);
  static NormSpec Sobolev(double s, bool homogeneous = false);
  static NormSpec MixedXT(double p_x, double q_t, bool x_outer);
  static NormSpec AnisotropicYX(double p_y, double p_x);
};

double norm(const Field& f, const NormSpec& spec);

// L^{p,q} of nonnegative samples with attached measures (layer cake on the
// induced step function; exact for step functions)
double lorentz_quasinorm(std::vector<std::pair<double, double>> val_meas,
                         double p, double q);

// trapezoid weights for arbitrary sample times
std::vector<double> trapezoid_weights(const std::vector<double>& t);

// mixed space-time norm over trajectory snapshots within [w0,w1]
double mixed_norm(const Trajectory& traj, const NormSpec& spec, double w0,
                  double w1);

// L^{p_y}_y L^{p_x}_x with the inner norm over axis 0
double norm_anisotropic(const Field& f, double p_y, double p_x);

}  // namespace dlab
