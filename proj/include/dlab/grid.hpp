#pragma once
#include <array>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace dlab {

constexpr double inf_p = std::numeric_limits<double>::infinity();

// Error taxonomy shared by all modules. Exit-code mapping lives in the CLI.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Periodic box [0,L) per axis, power-of-two sampling, wavenumber lattice
// xi = 2*pi*m/L with m in FFT order {0,1,...,n/2-1, -n/2,...,-1}.
struct Grid {
  int d = 1;
  std::array<int, 4> n{};
  std::array<double, 4> L{};
  std::array<double, 4> dx{};
  std::array<std::vector<double>, 4> xi;

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n[a]);
    return s;
  }
  double cell() const {
    double c = 1.0;
    for (int a = 0; a < d; ++a) c *= dx[a];
    return c;
  }
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= L[a];
    return v;
  }
  double dxi(int axis) const { return xi[axis][1] - xi[axis][0]; }
  bool is_nyquist(int axis, int idx) const { return idx == n[axis] / 2; }
  // signed index m for lattice position j (FFT order)
  int signed_index(int axis, int j) const {
    return j < n[axis] / 2 ? j : j - n[axis];
  }
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int d, const std::vector<int>& n,
                  const std::vector<double>& L);

// convenience: isotropic box
GridPtr make_grid(int d, int n, double L);

}  // namespace dlab
