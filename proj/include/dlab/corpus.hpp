#pragma once
#include <cstdint>

#include "dlab/field.hpp"

namespace dlab {

std::uint64_t splitmix64_next(std::uint64_t& state);

// deterministic per-sample seed derived from the corpus seed
std::uint64_t sample_seed(std::uint64_t corpus_seed, int sample_id);

// separable Gaussian bells modulated by random polynomials of degree <= 4,
// random centers in the middle of the box and widths well below L; L2 = 1
Field corpus_gaussian_poly(GridPtr g, std::uint64_t seed);

// random-phase field with |xi|^{-sigma} spectral decay, cut at cutoff_frac of
// the Nyquist wavenumber (or at xi_cut if positive); L2 = 1
Field corpus_random_sobolev(GridPtr g, double sigma, std::uint64_t seed,
                            double cutoff_frac = 0.66, double xi_cut = 0.0);

// alternates the two families; sigma drawn in [1,3] for the spectral family
Field corpus_sample(GridPtr g, int sample_id, std::uint64_t corpus_seed,
                    double xi_cut = 0.0);

}  // namespace dlab
