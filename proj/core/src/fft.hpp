#pragma once

// In-place discrete Fourier transforms backed by FFTW (double and quad).

#include <vector>

#include "multspec/common.hpp"

namespace multspec::detail {

/// Unnormalized DFT with kernel exp(sign * 2 pi i jk / N); sign is -1 or +1.
void dft(std::vector<Complex<double>>& data, int sign);
void dft(std::vector<Complex<Quad>>& data, int sign);

}  // namespace multspec::detail
