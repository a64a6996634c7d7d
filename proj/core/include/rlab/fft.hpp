#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rlab/grid.hpp"

namespace rlab::fft {

using Complex = std::complex<double>;

/// In-place unnormalized DFT over the grid: X[k] = sum_j x[j] exp(-2 pi i <k, j> / N).
void forward(std::span<Complex> data, const GridShape& shape);

/// In-place unnormalized inverse DFT (positive exponent, no 1/N^dim factor).
void inverse(std::span<Complex> data, const GridShape& shape);

std::vector<Complex> forward_real(std::span<const double> values, const GridShape& shape);

/// Plain circular convolution (c[t] = sum_s a[s] b[t - s]) of two real grids.
std::vector<double> circular_convolve(std::span<const double> a, std::span<const double> b, const GridShape& shape);

/// Circular convolution of complex grids.
std::vector<Complex> circular_convolve(std::span<const Complex> a, std::span<const Complex> b,
                                       const GridShape& shape);

}  // namespace rlab::fft
