#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "dlab/norms.hpp"

namespace dlab {

struct DecayFit {
  double w0 = 0.0, w1 = 0.0;   // fit window
  double exponent = 0.0;       // slope of log value vs log t
  double amplitude = 0.0;      // exp(intercept)
  double stderr_slope = 0.0;
  double r_squared = 0.0;
  double weight = 0.0;         // w used for weighted_sup
  double weighted_sup = 0.0;   // sup over window of t^w * value
  int nsamples = 0;
};

// least squares on (log t, log value) over samples with t in [w0, w1];
// weight = NaN means use -exponent for the weighted sup
DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& values, double w0, double w1,
                   double weight = std::numeric_limits<double>::quiet_NaN());

struct StrichartzPair {
  double theta = 0.0;  // in [0,1]
  double alpha = 0.0;  // in [0,1/2]

  double q() const { return theta == 0.0 ? inf_p : 6.0 / (theta * (alpha + 1.0)); }
  double p() const { return theta == 1.0 ? inf_p : 2.0 / (1.0 - theta); }
  double gain() const { return 0.5 * theta * alpha; }
  void validate() const;
};

// || D^s U(t)u0 ||_{L^r} * t^rho / || u0 ||_{L^{r'}} with rho the dimension's
// dispersive rate: (s + theta)/3 in 1D with an |xi|^s gain, (s + 2 theta)/3 in
// 2D with an x-only gain, theta = 1 - 2/r in d >= 3 with a (-Delta)^{(d-3)
// theta/2} weight moved onto u0 (no gain on the left).
double dispersive_ratio(const Field& u0, Family family, double t, double r,
                        double gain);

struct KatoResult {
  double ratio = 0.0;          // ||d_x U(t)u0 (x*)||_{L^2_t} / ||u0||_{L^2_x}
  double tail_fraction = 0.0;  // endpoint |v|^2 relative to its max
  bool accuracy_warning = false;
};

// direct oscillatory sum over the spectral lattice at a fixed probe point
KatoResult kato_smoothing_ratio(const Field& u0, double x_star,
                                const std::vector<double>& tgrid);

// || D^{theta alpha/2} u ||_{L^q_t L^p_x} over [w0,w1] divided by ||u0||_{L^2};
// lorentz_time switches the outer norm to L^{q,2}_t
double strichartz_ratio(const Field& u0, const StrichartzPair& pair,
                        const Trajectory& traj, double w0, double w1,
                        bool lorentz_time = false);

// spectral d/dx (signed symbol i xi_1, zero on the x-Nyquist bin)
Field x_derivative(const Field& f);

enum class CommForm { kato_ponce, leibniz_frac, leibniz_endpoint };

const char* comm_form_name(CommForm form);

struct InequalityEntry {
  int sample_id = 0;
  std::string form;
  double s = 0.0, p = 0.0;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

// LHS/RHS of the named commutator/Leibniz estimate on concrete samples:
//   kato_ponce       ||J^s(fg) - f J^s g||_p
//                      vs ||g||_inf ||J^s f||_p + ||d_x f||_inf ||J^{s-1} g||_p
//   leibniz_frac     ||D^s(fg) - f D^s g - g D^s f||_p vs ||g||_inf ||D^s f||_p
//   leibniz_endpoint ||D^s(fg)||_1 vs ||g D^s f||_1 + ||f||_2 ||D^s g||_2
InequalityEntry commutator_check(const Field& f, const Field& g, double s,
                                 double p, CommForm form);

struct InequalityReport {
  std::string form;
  std::uint64_t seed = 0;
  double cap = 0.0;  // violation threshold for the ratio
  std::vector<InequalityEntry> entries;

  double max_ratio() const;
  double median_ratio() const;
  int violations() const;  // entries with ratio > cap
};

}  // namespace dlab
