#include "dlab/grid.hpp"

#include <cmath>
#include <string>

namespace dlab {

GridPtr make_grid(int d, const std::vector<int>& n,
                  const std::vector<double>& L) {
  if (d < 1 || d > 4)
    throw config_error("make_grid: dimension must be 1..4, got " +
                       std::to_string(d));
  if (static_cast<int>(n.size()) != d || static_cast<int>(L.size()) != d)
    throw config_error("make_grid: n/L must have one entry per axis");
  auto g = std::make_shared<Grid>();
  g->d = d;
  for (int a = 0; a < d; ++a) {
    // even so the Nyquist bin is unambiguous; FFTW takes any composite size
    if (n[a] < 8 || n[a] % 2 != 0)
      throw config_error("make_grid: n[" + std::to_string(a) +
                         "]=" + std::to_string(n[a]) +
                         " must be even and >= 8");
    if (!(L[a] > 0.0))
      throw config_error("make_grid: L[" + std::to_string(a) +
                         "] must be positive");
    g->n[a] = n[a];
    g->L[a] = L[a];
    g->dx[a] = L[a] / n[a];
    g->xi[a].resize(n[a]);
    const double dxi = 2.0 * M_PI / L[a];
    for (int j = 0; j < n[a]; ++j) {
      const int m = j < n[a] / 2 ? j : j - n[a];
      g->xi[a][j] = dxi * m;
    }
  }
  return g;
}

GridPtr make_grid(int d, int n, double L) {
  return make_grid(d, std::vector<int>(d, n), std::vector<double>(d, L));
}

}  // namespace dlab
