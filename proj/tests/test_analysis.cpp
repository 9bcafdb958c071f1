#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "dlab/analysis.hpp"

using namespace dlab;

namespace {

constexpr double pi = 3.14159265358979323846;

Field random_real(GridPtr g, std::uint64_t seed, bool mean_zero = false) {
  Field f(g, Rep::physical, true);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double mean = 0.0;
  for (auto& v : f.data) {
    v = nd(rng);
    mean += v.real();
  }
  if (mean_zero) {
    mean /= static_cast<double>(f.size());
    for (auto& v : f.data) v -= mean;
  }
  return f;
}

Field annulus_data(GridPtr g, double lo, double hi) {
  Field uh(g, Rep::spectral, false);
  for_each_mode(*g, [&](std::size_t flat, const std::array<double, 4>& xi,
                        const std::array<bool, 4>&) {
    double r2 = 0.0;
    for (int a = 0; a < g->d; ++a) r2 += xi[a] * xi[a];
    const double r = std::sqrt(r2);
    const double s = (2.0 * r - (hi + lo)) / (hi - lo);
    const double s2 = s * s;
    uh.data[flat] = s2 < 1.0 ? std::exp(-s2 / (1.0 - s2)) : 0.0;
  });
  Field f = to_physical(uh);
  for (auto& v : f.data) v = cplx(v.real(), 0.0);
  f.real_flag = true;
  return f;
}

Field gaussian_1d(GridPtr g, double width, double center, double amp = 1.0) {
  Field f(g, Rep::physical, true);
  for (int i = 0; i < g->n[0]; ++i) {
    const double z = (i * g->dx[0] - center) / width;
    f.data[static_cast<size_t>(i)] = amp * std::exp(-z * z);
  }
  return f;
}

Trajectory free_trajectory(const Field& u0, const std::vector<double>& times) {
  Trajectory traj;
  traj.spec.coupling = 0.0;
  traj.grid = u0.grid;
  const Field uh = to_spectral(u0);
  for (double t : times) {
    Field ut = to_physical(linear_propagator(uh, t, Family::airy));
    for (auto& v : ut.data) v = cplx(v.real(), 0.0);
    traj.times.push_back(t);
    traj.sup_norms.push_back(linf(ut));
    traj.boundary_frac.push_back(0.0);
    traj.field_index.push_back(static_cast<int>(traj.times.size()) - 1);
    traj.fields.push_back(std::move(ut));
  }
  return traj;
}

}  // namespace

TEST_CASE("log-log fits recover exact power laws") {
  std::vector<double> t, v, w;
  for (int j = 1; j <= 40; ++j) {
    t.push_back(0.5 * j);
    v.push_back(2.7 * std::pow(0.5 * j, -0.75));
    w.push_back(3.0 / (0.5 * j));
  }
  DecayFit f = decay_fit(t, v, 1.0, 20.0);
  CHECK(f.exponent == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.amplitude == doctest::Approx(2.7).epsilon(1e-12));
  CHECK(f.stderr_slope < 1e-12);
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.weighted_sup == doctest::Approx(2.7).epsilon(1e-10));
  CHECK(f.nsamples == 39);

  DecayFit h = decay_fit(t, w, 1.0, 20.0);
  CHECK(h.exponent == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(h.amplitude == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("degenerate fit inputs are rejected") {
  std::vector<double> t{1, 2, 3, 4, 5, 6}, v{1, 2, 0.0, 4, 5, 6};
  CHECK_THROWS_AS(decay_fit(t, v, 1.0, 6.0), usage_error);
  std::vector<double> ok{1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(decay_fit(t, ok, 1.0, 4.0), usage_error);   // 4 samples
  CHECK_THROWS_AS(decay_fit(t, ok, 6.0, 1.0), usage_error);   // inverted window
  std::vector<double> neg{1, 2, -3, 4, 5, 6};
  CHECK_THROWS_AS(decay_fit(t, neg, 1.0, 6.0), usage_error);
}

TEST_CASE("dispersive ratio is exactly one at r = 2") {
  GridPtr g = make_grid(1, 512, 100.0);
  Field u0 = annulus_data(g, 0.5, 2.0);
  CHECK(dispersive_ratio(u0, Family::airy, 7.3, 2.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  GridPtr g2 = make_grid(2, 64, 50.0);
  Field v0 = annulus_data(g2, 0.5, 2.0);
  CHECK(dispersive_ratio(v0, Family::zk, 4.1, 2.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the sup-norm dispersive ratio is flat in time for mean-bearing data") {
  // t^{-1/3} is the Airy-caustic rate; it needs \hat u(0) != 0.  Band-limited
  // data decays at the stationary-phase rate t^{-1/2} instead, so use a
  // Gaussian here and keep the fast components well clear of the box edge.
  GridPtr g = make_grid(1, 8192, 400 * pi);
  Field u0 = gaussian_1d(g, 1.42, 0.72 * 400 * pi);
  const double r1 = dispersive_ratio(u0, Family::airy, 20.0, inf_p, 0.0);
  const double r2 = dispersive_ratio(u0, Family::airy, 40.0, inf_p, 0.0);
  CHECK(std::isfinite(r1));
  CHECK(std::abs(std::log(r2 / r1) / std::log(2.0)) < 0.05);

  // the same weight applied to band-limited data drifts at about t^{-1/6}
  GridPtr gb = make_grid(1, 4096, 200 * pi);
  Field b0 = annulus_data(gb, 0.5, 2.0);
  const double b1 = dispersive_ratio(b0, Family::airy, 20.0, inf_p, 0.0);
  const double b2 = dispersive_ratio(b0, Family::airy, 40.0, inf_p, 0.0);
  CHECK(std::log(b2 / b1) / std::log(2.0) ==
        doctest::Approx(-1.0 / 6.0).epsilon(0.2));
}

TEST_CASE("dispersive ratio validates family and dimension") {
  GridPtr g = make_grid(2, 32, 10.0);
  Field u0 = annulus_data(g, 0.5, 2.0);
  CHECK_THROWS_AS(dispersive_ratio(u0, Family::airy, 1.0, 4.0, 0.0),
                  usage_error);
  CHECK_THROWS_AS(dispersive_ratio(u0, Family::zk, 1.0, 1.5, 0.0), usage_error);
}

TEST_CASE("local smoothing ratio hits 1/sqrt(3) and ignores the probe point") {
  GridPtr g = make_grid(1, 8192, 400 * pi);
  Field u0 = annulus_data(g, 0.5, 2.0);
  std::vector<double> tg;
  for (int j = -3000; j <= 3000; ++j) tg.push_back(0.01 * j);
  KatoResult a = kato_smoothing_ratio(u0, 0.0, tg);
  KatoResult b = kato_smoothing_ratio(u0, 10.0, tg);
  const double c0 = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(a.ratio - c0) / c0 < 0.01);
  CHECK(std::abs(a.ratio - b.ratio) < 1e-3);
  CHECK_FALSE(a.accuracy_warning);

  // scaling the annulus by two leaves the ratio invariant
  Field u2 = annulus_data(g, 1.0, 4.0);
  KatoResult c = kato_smoothing_ratio(u2, 0.0, tg);
  CHECK(std::abs(c.ratio - a.ratio) / a.ratio < 0.01);
}

TEST_CASE("theta = 0 pairs collapse to the L2 isometry") {
  GridPtr g = make_grid(1, 1024, 200.0);
  Field u0 = gaussian_1d(g, 1.42, 100.0);
  const double n0 = l2(u0);
  for (auto& v : u0.data) v /= n0;
  std::vector<double> times{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  Trajectory traj = free_trajectory(u0, times);
  StrichartzPair pair{0.0, 0.25};
  CHECK(strichartz_ratio(u0, pair, traj, 0.5, 8.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pair.q() == inf_p);
  CHECK(pair.p() == 2.0);
}

TEST_CASE("strichartz ratios stay finite and stable under grid-in-time refinement") {
  GridPtr g = make_grid(1, 2048, 400.0);
  Field u0 = gaussian_1d(g, 1.42, 200.0);
  const double n0 = l2(u0);
  for (auto& v : u0.data) v /= n0;

  auto times_of = [](int npts) {
    std::vector<double> t{0.0};
    const double t0 = 0.5, t1 = 8.0;
    for (int j = 0; j < npts; ++j)
      t.push_back(t0 * std::pow(t1 / t0, static_cast<double>(j) / (npts - 1)));
    return t;
  };
  Trajectory coarse = free_trajectory(u0, times_of(9));
  Trajectory fine = free_trajectory(u0, times_of(17));
  StrichartzPair pair{0.4, 0.5};  // q = 10, p = 10/3, gain 1/10
  CHECK(pair.q() == doctest::Approx(10.0));
  CHECK(pair.p() == doctest::Approx(10.0 / 3.0));
  CHECK(pair.gain() == doctest::Approx(0.1));
  const double rc = strichartz_ratio(u0, pair, coarse, 0.5, 8.0);
  const double rf = strichartz_ratio(u0, pair, fine, 0.5, 8.0);
  CHECK(std::isfinite(rc));
  CHECK(std::abs(rf - rc) / rc < 0.02);

  CHECK_THROWS_AS((StrichartzPair{1.5, 0.0}.validate()), usage_error);
  CHECK_THROWS_AS((StrichartzPair{0.5, 0.7}.validate()), usage_error);
}

TEST_CASE("commutators vanish when one factor is constant") {
  GridPtr g = make_grid(1, 512, 25.0);
  Field c(g, Rep::physical, true);
  for (auto& v : c.data) v = 2.0;
  Field h = gaussian_1d(g, 1.0, 12.5);

  InequalityEntry kp = commutator_check(c, h, 0.8, 2.0, CommForm::kato_ponce);
  CHECK(kp.lhs < 1e-11 * kp.rhs);
  // for the pure-power form the bound reads ||g||_inf ||D^s f||_p, so the
  // constant has to sit in the g slot for the right side to stay positive
  InequalityEntry lf = commutator_check(h, c, 0.5, 2.0, CommForm::leibniz_frac);
  CHECK(lf.rhs > 0.0);
  CHECK(lf.lhs < 1e-11 * lf.rhs);
}

TEST_CASE("endpoint Leibniz entries are positive and finite on gaussians") {
  GridPtr g = make_grid(1, 512, 25.0);
  Field f = gaussian_1d(g, 1.0, 10.0);
  Field h = gaussian_1d(g, 2.0, 14.0);
  InequalityEntry e = commutator_check(f, h, 0.5, 1.0, CommForm::leibniz_endpoint);
  CHECK(e.lhs > 0.0);
  CHECK(e.rhs > 0.0);
  CHECK(std::isfinite(e.ratio));
  CHECK(e.p == 1.0);

  InequalityEntry same = commutator_check(f, f, 0.3, 1.0, CommForm::leibniz_endpoint);
  CHECK(std::isfinite(same.ratio));
}

TEST_CASE("commutator forms validate their stated ranges") {
  GridPtr g = make_grid(1, 256, 10.0);
  Field f = gaussian_1d(g, 1.0, 5.0);
  CHECK_THROWS_AS(commutator_check(f, f, -0.1, 2.0, CommForm::kato_ponce),
                  usage_error);
  CHECK_THROWS_AS(commutator_check(f, f, 0.5, 1.0, CommForm::kato_ponce),
                  usage_error);
  CHECK_THROWS_AS(commutator_check(f, f, 1.2, 2.0, CommForm::leibniz_frac),
                  usage_error);
  CHECK_THROWS_AS(commutator_check(f, f, 0.0, 2.0, CommForm::leibniz_frac),
                  usage_error);
  CHECK_THROWS_AS(commutator_check(f, f, 1.0, 1.0, CommForm::leibniz_endpoint),
                  usage_error);
}

TEST_CASE("x derivative differentiates and kills the Nyquist bin") {
  GridPtr g = make_grid(1, 64, 2 * pi);
  Field s3(g, Rep::physical, true);
  for (int i = 0; i < 64; ++i)
    s3.data[static_cast<size_t>(i)] = std::sin(3 * i * g->dx[0]);
  Field d = x_derivative(s3);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i)
    worst = std::max(worst, std::abs(d.data[static_cast<size_t>(i)].real() -
                                     3 * std::cos(3 * i * g->dx[0])));
  CHECK(worst < 1e-12);

  GridPtr g8 = make_grid(1, 8, 2 * pi);
  Field ny(g8, Rep::physical, true);
  for (int i = 0; i < 8; ++i)
    ny.data[static_cast<size_t>(i)] = std::cos(4 * i * g8->dx[0]);
  CHECK(linf(x_derivative(ny)) < 1e-14);
}

TEST_CASE("inequality reports aggregate ratios") {
  InequalityReport rep;
  rep.cap = 2.0;
  for (int i = 0; i < 5; ++i) {
    InequalityEntry e;
    e.sample_id = i;
    e.ratio = 0.5 * (i + 1);  // 0.5 .. 2.5
    rep.entries.push_back(e);
  }
  CHECK(rep.max_ratio() == doctest::Approx(2.5));
  CHECK(rep.median_ratio() == doctest::Approx(1.5));
  CHECK(rep.violations() == 1);
}

TEST_CASE("lorentz norms of indicators and two-step functions in closed form") {
  GridPtr g = make_grid(1, 4096, 100.0);
  Field ind(g, Rep::physical, true);
  const int cells = 300;
  for (int i = 0; i < cells; ++i) ind.data[static_cast<size_t>(i + 512)] = 1.0;
  const double a = cells * g->dx[0];
  const double grid_pq[][2] = {{2, 1}, {2, 2}, {3, 1.5}, {1.5, 3}, {2, inf_p}};
  for (const auto& e : grid_pq) {
    const double p = e[0], q = e[1];
    const double want = std::isinf(q)
                            ? std::pow(a, 1 / p)
                            : std::pow(p / q, 1 / q) * std::pow(a, 1 / p);
    CHECK(norm(ind, NormSpec::Lorentz(p, q)) ==
          doctest::Approx(want).epsilon(1e-9));
  }

  // f = 3 on measure m1, 1 on measure m2: layer-cake sum by hand at (2,1)
  Field two(g, Rep::physical, true);
  const int c1 = 100, c2 = 500;
  for (int i = 0; i < c1; ++i) two.data[static_cast<size_t>(i)] = 3.0;
  for (int i = 0; i < c2; ++i) two.data[static_cast<size_t>(1000 + i)] = 1.0;
  const double m1 = c1 * g->dx[0], m2 = c2 * g->dx[0];
  const double want21 = 2.0 * (std::sqrt(m1) * (3.0 - 1.0) +
                               std::sqrt(m1 + m2) * 1.0);
  CHECK(norm(two, NormSpec::Lorentz(2, 1)) ==
        doctest::Approx(want21).epsilon(1e-12));
}

TEST_CASE("L^{p,p} agrees with L^p across a random corpus") {
  GridPtr g = make_grid(1, 512, 37.0);
  for (int i = 0; i < 100; ++i) {
    Field f = random_real(g, 1000 + static_cast<unsigned>(i));
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      const double lp = norm(f, NormSpec::Lebesgue(p));
      CHECK(norm(f, NormSpec::Lorentz(p, p)) ==
            doctest::Approx(lp).epsilon(1e-9));
    }
  }
}

TEST_CASE("lorentz norms are rearrangement invariant") {
  GridPtr g = make_grid(1, 512, 10.0);
  Field f = random_real(g, 4);
  Field shuf = f;
  std::mt19937_64 rng(9);
  std::shuffle(shuf.data.begin(), shuf.data.end(), rng);
  CHECK(norm(f, NormSpec::Lorentz(2.5, 1.5)) ==
        doctest::Approx(norm(shuf, NormSpec::Lorentz(2.5, 1.5))).epsilon(1e-12));
}

TEST_CASE("sobolev norms collapse to L2 at s = 0 and scale on single modes") {
  GridPtr g = make_grid(1, 256, 2 * pi);
  Field f = random_real(g, 88, /*mean_zero=*/true);
  CHECK(norm(f, NormSpec::Sobolev(0.0)) == doctest::Approx(l2(f)).epsilon(1e-12));
  CHECK(norm(f, NormSpec::Sobolev(0.0, true)) ==
        doctest::Approx(l2(f)).epsilon(1e-12));

  Field s3(g, Rep::physical, true);
  for (int i = 0; i < 256; ++i)
    s3.data[static_cast<size_t>(i)] = std::sin(3 * i * g->dx[0]);
  // homogeneous H^s of sin(3x) on [0,2pi): 3^s sqrt(pi)
  CHECK(norm(s3, NormSpec::Sobolev(0.5, true)) ==
        doctest::Approx(std::sqrt(3.0) * std::sqrt(pi)).epsilon(1e-12));
  CHECK(norm(s3, NormSpec::Sobolev(1.0)) ==
        doctest::Approx(std::sqrt(10.0) * std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("mixed norms integrate constants exactly and vanish on zero data") {
  GridPtr g = make_grid(1, 256, 50.0);
  Field u0 = gaussian_1d(g, 2.0, 25.0);
  std::vector<double> times{0.0, 1.0, 1.7, 2.9, 4.0, 5.5, 7.0};
  Trajectory traj;
  traj.grid = g;
  for (double t : times) {
    traj.times.push_back(t);
    traj.sup_norms.push_back(linf(u0));
    traj.boundary_frac.push_back(0.0);
    traj.field_index.push_back(static_cast<int>(traj.times.size()) - 1);
    traj.fields.push_back(u0);  // frozen in time
  }
  const double w0 = 1.0, w1 = 7.0;
  const double span = w1 - w0;
  const double p = 5.0, q = 10.0;
  const double want = std::pow(span, 1 / q) * norm(u0, NormSpec::Lebesgue(p));
  CHECK(mixed_norm(traj, NormSpec::MixedXT(p, q, true), w0, w1) ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(mixed_norm(traj, NormSpec::MixedXT(p, q, false), w0, w1) ==
        doctest::Approx(want).epsilon(1e-12));

  Trajectory zero = traj;
  for (auto& f : zero.fields)
    for (auto& v : f.data) v = 0.0;
  CHECK(mixed_norm(zero, NormSpec::MixedXT(p, q, true), w0, w1) == 0.0);
}

TEST_CASE("anisotropic norms: L2 consistency and separable closed form") {
  GridPtr g = make_grid(2, 64, 30.0);
  Field f = random_real(g, 77);
  CHECK(norm_anisotropic(f, 2.0, 2.0) == doctest::Approx(l2(f)).epsilon(1e-12));

  // separable u(x,y) = a(x) b(y): ||u||_{L^py_y L^px_x} = ||a||_px ||b||_py
  Field sep(g, Rep::physical, true);
  auto a = [&](double x) { return std::exp(-(x - 15) * (x - 15) / 4.0); };
  auto b = [&](double y) { return 1.0 / (1.0 + (y - 15) * (y - 15)); };
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      sep.data[static_cast<size_t>(i * 64 + j)] =
          a(i * g->dx[0]) * b(j * g->dx[1]);
  double na4 = 0.0, nb6 = 0.0;
  for (int i = 0; i < 64; ++i) {
    na4 += std::pow(std::abs(a(i * g->dx[0])), 4.0) * g->dx[0];
    nb6 += std::pow(std::abs(b(i * g->dx[1])), 6.0) * g->dx[1];
  }
  const double want = std::pow(na4, 0.25) * std::pow(nb6, 1.0 / 6.0);
  CHECK(norm_anisotropic(sep, 6.0, 4.0) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("lorentz quasinorm handles edge cases directly") {
  CHECK(lorentz_quasinorm({}, 2.0, 1.0) == 0.0);
  CHECK(lorentz_quasinorm({{0.0, 1.0}}, 2.0, 1.0) == 0.0);
  // single block of height v, measure W: (p/q)^{1/q} W^{1/p} v
  const double v = 2.5, W = 0.4;
  CHECK(lorentz_quasinorm({{v, W}}, 2.0, 1.0) ==
        doctest::Approx(2.0 * std::sqrt(W) * v).epsilon(1e-13));
  CHECK(lorentz_quasinorm({{v, W}}, 3.0, inf_p) ==
        doctest::Approx(v * std::pow(W, 1.0 / 3.0)).epsilon(1e-13));
}
