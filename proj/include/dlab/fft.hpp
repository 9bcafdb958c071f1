#pragma once
#include <complex>
#include <vector>

#include "dlab/grid.hpp"

namespace dlab {

// Unnormalized c2c DFT (FFTW backend, plan cache keyed by shape+sign).
// sign = -1 forward (FFTW_FORWARD), +1 backward. out may alias in.
void raw_dft(const Grid& g, const std::complex<double>* in,
             std::complex<double>* out, int sign);

}  // namespace dlab
