#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rlab/exponent.hpp"
#include "rlab/measure.hpp"

namespace rlab {

using Complex = std::complex<double>;

/// Fourier coefficients on the truncated dual lattice [-K, K]^dim.
class Spectrum {
 public:
  Spectrum(int dim, std::int64_t truncation);

  int dim() const { return dim_; }
  std::int64_t truncation() const { return truncation_; }
  std::int64_t side() const { return 2 * truncation_ + 1; }
  std::size_t size() const { return coefficients_.size(); }

  Complex& at(std::int64_t k0, std::int64_t k1 = 0) { return coefficients_[offset(k0, k1)]; }
  const Complex& at(std::int64_t k0, std::int64_t k1 = 0) const { return coefficients_[offset(k0, k1)]; }

  /// Frequency of the i-th stored coefficient.
  Index frequency(std::size_t i) const;

  std::vector<Complex>& coefficients() { return coefficients_; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }

 private:
  std::size_t offset(std::int64_t k0, std::int64_t k1) const;

  int dim_;
  std::int64_t truncation_;
  std::vector<Complex> coefficients_;
};

enum class Method { automatic, fft, direct };

/// mu^(k) = sum_j w_j exp(-2 pi i <k, j/N>) for k in [-K, K]^dim. The FFT path
/// requires K <= N/2; the direct path evaluates the exponential sums exactly.
Spectrum fourier(const DiscreteMeasure& mu, std::int64_t truncation, Method method = Method::automatic);

/// Circular convolution of two measures on the same grid.
DiscreteMeasure convolve(const DiscreteMeasure& a, const DiscreteMeasure& b, Method method = Method::automatic);

/// Circular n-fold convolution power. The FFT route raises the transform to
/// the n-th power; the direct route convolves sparse atom lists and is exact
/// for dyadic weights. Negative FFT round-off beyond 1e-8 throws PrecisionError.
DiscreteMeasure convolve_power(const DiscreteMeasure& mu, int n, Method method = Method::automatic);

/// mu * reflect(mu).
DiscreteMeasure autocorrelation(const DiscreteMeasure& mu, Method method = Method::automatic);

/// L^r norm of the atom weights viewed as a density W_j N^dim on cells of
/// volume N^-dim. A finite-resolution proxy for ||mu||_r.
double density_norm(const DiscreteMeasure& mu, const Exponent& r);

/// L^r norm of a dense density on the normalized grid.
double density_norm(const std::vector<double>& density, const GridShape& shape, const Exponent& r);

struct Flatness {
  double max_offzero = 0.0;
  double mean_offzero = 0.0;
  double ratio = 0.0;  ///< max / mean, 0 when there is no off-zero mass
};

/// Statistics of mu * reflect(mu) away from the zero site.
Flatness flatness(const DiscreteMeasure& mu);

}  // namespace rlab
