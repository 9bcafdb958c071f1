#pragma once
#include <complex>
#include <vector>

#include "dlab/grid.hpp"

namespace dlab {

enum class Rep { physical, spectral };

using cplx = std::complex<double>;

// One scalar state on a grid; complex storage in either representation.
struct Field {
  GridPtr grid;
  Rep rep = Rep::physical;
  bool real_flag = true;
  std::vector<cplx> data;

  Field() = default;
  Field(GridPtr g, Rep r, bool real = true)
      : grid(std::move(g)), rep(r), real_flag(real), data(grid->size()) {}

  std::size_t size() const { return data.size(); }
};

// Forward: uhat = raw_fft(u) * prod(dx) / (2pi)^{d/2}
// Inverse: u = raw_ifft(uhat) * (2pi)^{d/2} / prod(L)
// This symmetric-per-axis convention makes the discrete Plancherel identity
// sum |u|^2 prod(dx) = sum |uhat|^2 prod(dxi) exact.
Field transform(const Field& f, Rep direction);

Field to_physical(const Field& f);
Field to_spectral(const Field& f);

double linf(const Field& f);           // max |f| (physical rep)
double l2(const Field& f);             // cell-weighted, either rep
double spectral_sup(const Field& f);   // max |uhat|

// iterate the wavenumber lattice; cb(flat_index, xi[4], nyquist[4]);
// last axis contiguous (row-major, matching FFTW layout)
template <typename F>
void for_each_mode(const Grid& g, F&& cb) {
  std::array<int, 4> idx{};
  std::array<double, 4> x{};
  std::array<bool, 4> nyq{};
  for (int a = 0; a < g.d; ++a) {
    x[a] = g.xi[a][0];
    nyq[a] = g.is_nyquist(a, 0);
  }
  const std::size_t total = g.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    cb(flat, x, nyq);
    for (int a = g.d - 1; a >= 0; --a) {
      if (++idx[a] < g.n[a]) {
        x[a] = g.xi[a][idx[a]];
        nyq[a] = g.is_nyquist(a, idx[a]);
        break;
      }
      idx[a] = 0;
      x[a] = g.xi[a][0];
      nyq[a] = g.is_nyquist(a, 0);
    }
  }
}

}  // namespace dlab
