#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "rlab/errors.hpp"
#include "rlab/spectral.hpp"

using namespace rlab;

namespace {

// mu^(k) by summing exponentials in long double
Complex naive_fourier(const DiscreteMeasure& mu, std::int64_t k0, std::int64_t k1) {
  std::complex<long double> acc{0.0L, 0.0L};
  const long double n = static_cast<long double>(mu.resolution());
  for (const auto& a : mu.atoms()) {
    const auto c = mu.coords(a);
    const long double phase = -2.0L * std::numbers::pi_v<long double> * (k0 * c[0] + k1 * c[1]) / n;
    acc += static_cast<long double>(a.weight) * std::complex<long double>(std::cos(phase), std::sin(phase));
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::map<std::int64_t, double> dense_convolve(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::map<std::int64_t, double> out;
  const auto& s = a.shape();
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) {
      const auto cx = a.coords(x);
      const auto cy = b.coords(y);
      out[s.linear(s.wrap({cx[0] + cy[0], cx[1] + cy[1]}))] += x.weight * y.weight;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("fourier of simple measures") {
  const auto d = dirac(1, 64, {0, 0});
  const auto sd = fourier(d, 32);
  for (const auto& c : sd.coefficients()) CHECK(std::abs(c - Complex{1.0, 0.0}) <= 1e-14);

  const auto two = DiscreteMeasure(GridShape{1, 64}, {{0, 0.5}, {32, 0.5}});
  const auto s2 = fourier(two, 20, Method::direct);
  for (std::int64_t k = -20; k <= 20; ++k) {
    const double expected = (1.0 + (k % 2 == 0 ? 1.0 : -1.0)) / 2.0;
    CHECK(std::abs(s2.at(k) - Complex{expected, 0.0}) <= 1e-14);
  }
}

TEST_CASE("cantor transform is a product over scales") {
  const auto mu = cantor({4, {0, 3}, 6});
  const auto spec = fourier(mu, 300, Method::direct);
  for (std::int64_t k = -300; k <= 300; k += 7) {
    Complex prod{1.0, 0.0};
    double scale = 4096.0;
    for (int j = 0; j < 6; ++j) {
      scale /= 4.0;
      const double phase = -2.0 * std::numbers::pi * 3.0 * static_cast<double>(k) * scale / 4096.0;
      prod *= (Complex{1.0, 0.0} + std::polar(1.0, phase)) / 2.0;
    }
    CHECK(std::abs(spec.at(k) - prod) <= 1e-10);
  }
}

TEST_CASE("fft and direct paths agree") {
  for (const auto& mu : {random_flat({1024, 60, 3, 6.0, 50}), cantor({4, {0, 1, 3}, 4}), circle(64, 0.3)}) {
    const std::int64_t K = mu.resolution() / 2;
    const auto a = fourier(mu, K, Method::fft);
    const auto b = fourier(mu, K, Method::direct);
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a.coefficients()[i] - b.coefficients()[i]));
    CHECK(err <= 1e-10);
    CHECK(std::abs(a.at(0) - Complex{1.0, 0.0}) <= 1e-10);
    for (std::size_t i = 0; i < a.size(); i += 37) {
      const auto k = a.frequency(i);
      CHECK(std::abs(a.coefficients()[i] - naive_fourier(mu, k[0], k[1])) <= 1e-10);
      CHECK(std::abs(a.at(k[0], k[1]) - std::conj(a.at(-k[0], -k[1]))) <= 1e-12);
    }
  }
  CHECK_THROWS(fourier(cantor({4, {0, 3}, 2}), 9, Method::fft));
}

TEST_CASE("convolution powers") {
  SUBCASE("binomial") {
    const auto mu = DiscreteMeasure(GridShape{1, 16}, {{0, 0.5}, {1, 0.5}});
    for (auto m : {Method::direct, Method::fft, Method::automatic}) {
      const auto c = convolve_power(mu, 2, m);
      CHECK(c.weight_at(0) == doctest::Approx(0.25).epsilon(1e-15));
      CHECK(c.weight_at(1) == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(c.weight_at(2) == doctest::Approx(0.25).epsilon(1e-15));
    }
    const auto exact = convolve_power(mu, 2, Method::direct);
    CHECK(exact.weight_at(0) == 0.25);
    CHECK(exact.weight_at(1) == 0.5);
    CHECK(exact.weight_at(2) == 0.25);
  }
  SUBCASE("diracs add") {
    const auto c = convolve(dirac(1, 32, {30, 0}), dirac(1, 32, {5, 0}));
    REQUIRE(c.size() == 1);
    CHECK(c.atoms()[0].index == 3);
  }
  SUBCASE("n = 1 is the identity") {
    const auto mu = random_flat({512, 40, 9, 6.0, 50});
    CHECK(convolve_power(mu, 1) == mu);
  }
  SUBCASE("autocorrelation matches pairwise differences") {
    const auto mu = random_flat({1024, 50, 4, 6.0, 50});
    const auto ac = autocorrelation(mu, Method::fft);
    const auto oracle = dense_convolve(mu, reflect(mu));
    double err = 0.0;
    for (const auto& [i, w] : oracle) err = std::max(err, std::abs(ac.weight_at(i) - w));
    CHECK(err <= 1e-10);
    CHECK(ac.weight_at(0) == doctest::Approx(1.0 / 50.0));
  }
  SUBCASE("fourier of power equals power of fourier") {
    for (const auto& mu : {cantor({4, {0, 3}, 5}), random_flat({256, 30, 2, 6.0, 50}), circle(32, 0.25)}) {
      const auto p3 = convolve_power(mu, 3);
      const auto a = fourier(p3, mu.resolution() / 2);
      const auto b = fourier(mu, mu.resolution() / 2);
      double err = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        err = std::max(err, std::abs(a.coefficients()[i] - std::pow(b.coefficients()[i], 3)));
      }
      CHECK(err <= 1e-8);
    }
  }
  CHECK_THROWS(convolve_power(cantor({4, {0, 3}, 2}), 0));
}

TEST_CASE("density norms") {
  const auto u = uniform(1, 256);
  for (const auto& r : {Exponent(1), Exponent(2), Exponent(Rational(7, 3)), Exponent::infinity()}) {
    CHECK(density_norm(u, r) == doctest::Approx(1.0));
  }
  CHECK(density_norm(dirac(1, 256, {3, 0}), Exponent::infinity()) == 256.0);
  CHECK(density_norm(dirac(2, 16, {3, 1}), Exponent::infinity()) == 256.0);
  for (int k = 2; k <= 6; ++k) {
    const auto p = convolve_power(cantor({4, {0, 3}, k}), 2);
    CHECK(density_norm(p, Exponent::infinity()) == std::ldexp(1.0, k));
  }
  SUBCASE("monotone in r when the max density exceeds 1") {
    for (const auto& mu : {cantor({4, {0, 3}, 4}), random_flat({1024, 60, 5, 6.0, 50}), circle(64, 0.3)}) {
      double prev = 0.0;
      for (const auto& r : {Exponent(1), Exponent(Rational(3, 2)), Exponent(2), Exponent(4), Exponent::infinity()}) {
        const double v = density_norm(mu, r);
        CHECK(v >= prev * (1.0 - 1e-12));
        prev = v;
      }
    }
  }
  SUBCASE("parseval") {
    const auto mu = random_flat({256, 30, 8, 6.0, 50});
    const auto spec = fourier(mu, 128);
    double sum = 0.0;
    for (std::int64_t k = -127; k <= 128; ++k) sum += std::norm(spec.at(k));
    CHECK(sum == doctest::Approx(density_norm(mu, Exponent(2)) * density_norm(mu, Exponent(2))).epsilon(1e-8));
  }
}

TEST_CASE("flatness") {
  CHECK(flatness(uniform(1, 64)).ratio == doctest::Approx(1.0));
  CHECK(flatness(dirac(1, 64, {0, 0})).ratio == 0.0);
  const auto mu = random_flat({4096, 185, 1, 4.0, 200});
  const auto f = flatness(mu);
  const auto& p = mu.descriptor().params;
  CHECK(f.max_offzero * 185.0 * 185.0 == doctest::Approx(p["max_offzero_count"].get<double>()));
  CHECK(p["flatness_ratio"].get<double>() <= 4.0);
}
