#include <doctest.h>

#include <cmath>

#include "rlab/regularity.hpp"
#include "rlab/spectral.hpp"

using namespace rlab;

namespace {

// max over centers of the mass within floor(rN) cells, one window at a time
double brute_max_ball(const DiscreteMeasure& mu, double r) {
  const auto n = mu.resolution();
  const auto rc = static_cast<std::int64_t>(std::floor(r * static_cast<double>(n) + 1e-9));
  const auto w = mu.dense();
  double best = 0.0;
  for (std::int64_t c = 0; c < n; ++c) {
    double m = 0.0;
    for (std::int64_t t = -rc; t <= rc; ++t) m += w[static_cast<std::size_t>(((c + t) % n + n) % n)];
    best = std::max(best, m);
  }
  return best;
}

std::vector<double> powers_of_quarter(int from, int to) {
  std::vector<double> out;
  for (int j = from; j <= to; ++j) out.push_back(std::pow(4.0, -j));
  return out;
}

}  // namespace

TEST_CASE("ball masses match window sums") {
  const auto mu = random_flat({1024, 60, 5, 6.0, 50});
  for (double r : {1.0 / 512, 1.0 / 64, 0.1, 0.25}) {
    const auto m = ball_masses(mu, r);
    CHECK(*std::max_element(m.begin(), m.end()) == doctest::Approx(brute_max_ball(mu, r)).epsilon(1e-12));
    CHECK(ball_mass(mu, {7, 0}, r) == doctest::Approx(m[7]).epsilon(1e-12));
  }
  const auto c = circle(64, 0.25);
  const auto m2 = ball_masses(c, 0.1);
  for (std::int64_t i = 0; i < 64 * 64; i += 97) {
    CHECK(m2[static_cast<std::size_t>(i)] == doctest::Approx(ball_mass(c, c.shape().coords(i), 0.1)).epsilon(1e-9));
  }
}

TEST_CASE("alpha") {
  const auto scales = geometric_scales(4096);
  CHECK(ahlfors_alpha(uniform(1, 4096), scales).estimate == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(ahlfors_alpha(dirac(1, 4096, {5, 0}), scales).estimate) <= 0.02);
  const auto c8 = cantor({4, {0, 3}, 8});
  const auto rep = ahlfors_alpha(c8, powers_of_quarter(1, 6));
  CHECK(std::abs(rep.estimate - 0.5) <= 0.05);
  for (const auto& p : rep.points) CHECK(p.value <= 2.0 * std::sqrt(p.scale) + 1e-12);
  CHECK(ahlfors_alpha(circle(1024, 0.25), geometric_scales(1024)).estimate == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS(ahlfors_alpha(c8, std::vector<double>{0.25, 0.125}));
  CHECK_THROWS(ahlfors_alpha(c8, std::vector<double>{0.5, 0.25, 0.125}));
  CHECK_THROWS(ahlfors_alpha(cantor({4, {0, 3}, 2}), std::vector<double>{0.25, 0.125, 1.0 / 32}));
}

TEST_CASE("beta") {
  const auto half = interval(4096, 0, 2048);
  CHECK(fourier_beta(fourier(half, 1024)).sup.estimate == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(fourier_beta(fourier(dirac(1, 256, {3, 0}), 64)).sup.estimate) <= 0.01);
  const auto circ = circle(1024, 0.25);
  const auto b = fourier_beta(fourier(circ, 128, Method::direct));
  CHECK(std::abs(b.sup.estimate - 1.0) <= 0.15);
  CHECK_THROWS(fourier_beta(fourier(half, 8)));
  CHECK_THROWS_AS(fourier_beta(fourier(uniform(1, 64), 32)), std::domain_error);
}

TEST_CASE("gamma") {
  const auto d = billingsley_gamma(dirac(1, 4096, {77, 0}), geometric_scales(4096));
  CHECK(d.center[0] == 77);
  CHECK(std::abs(d.fit.estimate) <= 1e-12);
  const auto c8 = cantor({4, {0, 3}, 8});
  const auto g = billingsley_gamma(c8, powers_of_quarter(1, 6));
  CHECK(std::abs(g.fit.estimate - 0.5) <= 0.05);
  CHECK(c8.weight_at(g.center[0]) > 0.0);
  CHECK(std::abs(g.fit.estimate - ahlfors_alpha(c8, powers_of_quarter(1, 6)).estimate) <= 0.05);
  CHECK(billingsley_gamma(uniform(1, 4096), geometric_scales(4096)).fit.estimate == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("scale windows") {
  const auto s = geometric_scales(1024);
  CHECK(s.front() == doctest::Approx(0.25));
  CHECK(s.back() > 1.0 / 1024);
  CHECK(s.size() == 8);
}
