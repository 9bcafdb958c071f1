#include "dlab/corpus.hpp"

#include <cmath>
#include <random>

namespace dlab {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t sample_seed(std::uint64_t corpus_seed, int sample_id) {
  std::uint64_t s =
      corpus_seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(sample_id + 1));
  const std::uint64_t z = splitmix64_next(s);
  return z ? z : 0x9e3779b97f4a7c15ULL;
}

namespace {

void normalize_l2(Field& f) {
  const double n2 = l2(f);
  if (n2 > 0.0)
    for (auto& v : f.data) v /= n2;
}

}  // namespace

Field corpus_gaussian_poly(GridPtr g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ucen(0.35, 0.65);
  std::uniform_real_distribution<double> uwid(0.02, 0.06);
  std::uniform_real_distribution<double> ucoef(-1.0, 1.0);
  std::uniform_real_distribution<double> uhead(0.5, 1.5);

  // separable factors: per-axis 1D profiles G(z) * P(z), z = (x - c)/w
  std::array<std::vector<double>, 4> fac;
  for (int a = 0; a < g->d; ++a) {
    const double L = g->L[a];
    const double c = ucen(rng) * L;
    const double w = uwid(rng) * L;
    double coef[5];
    coef[0] = (ucoef(rng) < 0.0 ? -1.0 : 1.0) * uhead(rng);
    for (int j = 1; j <= 4; ++j) coef[j] = ucoef(rng);
    fac[a].resize(static_cast<size_t>(g->n[a]));
    for (int i = 0; i < g->n[a]; ++i) {
      const double z = (i * g->dx[a] - c) / w;
      double poly = 0.0;
      for (int j = 4; j >= 0; --j) poly = poly * z + coef[j];
      fac[a][static_cast<size_t>(i)] = poly * std::exp(-0.5 * z * z);
    }
  }

  Field f(g, Rep::physical, true);
  std::array<int, 4> idx{};
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    double v = 1.0;
    for (int a = 0; a < g->d; ++a) v *= fac[a][static_cast<size_t>(idx[a])];
    f.data[flat] = v;
    for (int a = g->d - 1; a >= 0; --a) {
      if (++idx[a] < g->n[a]) break;
      idx[a] = 0;
    }
  }
  normalize_l2(f);
  return f;
}

Field corpus_random_sobolev(GridPtr g, double sigma, std::uint64_t seed,
                            double cutoff_frac, double xi_cut) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * M_PI);

  double ximax = inf_p;
  for (int a = 0; a < g->d; ++a)
    ximax = std::min(ximax, g->dxi(a) * (g->n[a] / 2));
  const double cut = xi_cut > 0.0 ? xi_cut : cutoff_frac * ximax;

  Field uh(g, Rep::spectral, false);
  for_each_mode(*g, [&](std::size_t flat, const std::array<double, 4>& xi,
                        const std::array<bool, 4>& nyq) {
    bool edge = false;
    for (int a = 0; a < g->d; ++a) edge = edge || nyq[a];
    double r2 = 0.0;
    for (int a = 0; a < g->d; ++a) r2 += xi[a] * xi[a];
    const double r = std::sqrt(r2);
    // rng consumed in lattice order for determinism regardless of the cut
    const double phase = uphase(rng);
    if (edge || r == 0.0 || r > cut) {
      uh.data[flat] = 0.0;
      return;
    }
    uh.data[flat] = std::polar(std::pow(r, -sigma), phase);
  });

  // real part in physical space Hermitian-symmetrizes the spectrum
  Field f = to_physical(uh);
  for (auto& v : f.data) v = cplx(v.real(), 0.0);
  f.real_flag = true;
  normalize_l2(f);
  return f;
}

Field corpus_sample(GridPtr g, int sample_id, std::uint64_t corpus_seed,
                    double xi_cut) {
  const std::uint64_t seed = sample_seed(corpus_seed, sample_id);
  if (sample_id % 2 == 0) return corpus_gaussian_poly(g, seed);
  std::mt19937_64 rng(seed ^ 0x51c3a5f0e2ULL);
  std::uniform_real_distribution<double> usig(1.0, 3.0);
  return corpus_random_sobolev(g, usig(rng), seed, 0.66, xi_cut);
}

}  // namespace dlab
