#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "rlab/errors.hpp"
#include "rlab/restriction.hpp"

using namespace rlab;

namespace {

double svd_norm(const ExtensionOperator& op) {
  // ||f^||_{L^2(mu)} = || W^{1/2} E^H f ||_2
  const Eigen::MatrixXcd m = op.weights().cwiseSqrt().asDiagonal() * op.matrix().adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

ProbeOptions precise(std::uint64_t seed) {
  ProbeOptions o;
  o.restarts = 4;
  o.max_iters = 5000;
  o.tol = 1e-15;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("operator shape") {
  const auto mu = cantor({4, {0, 3}, 2});
  const ExtensionOperator op(mu, 8);
  CHECK(op.lattice_size() == 17);
  CHECK(op.atom_count() == 4);
  CHECK((op.matrix().cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-15);
  const ExtensionOperator op2(circle(32, 0.25), 3);
  CHECK(op2.lattice_size() == 49);
  CHECK_THROWS_AS(ExtensionOperator(mu, 1000, 100.0), BudgetExceeded);
}

TEST_CASE("restriction is the transform on the atoms") {
  const auto mu = dirac(1, 64, {5, 0});
  const ExtensionOperator op(mu, 4);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(9);
  f[4 + 2] = {1.0, 0.0};  // delta at x = 2
  const auto u = op.apply_restriction(f);
  REQUIRE(u.size() == 1);
  const double phase = -2.0 * 3.14159265358979323846 * 2.0 * 5.0 / 64.0;
  CHECK(std::abs(u[0] - std::polar(1.0, phase)) <= 1e-14);
}

TEST_CASE("p = q = 2 matches the singular value") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto mu = random_flat({512, 30 + 10 * static_cast<std::int64_t>(seed), seed, 8.0, 50});
    const ExtensionOperator op(mu, 16 + 8 * static_cast<std::int64_t>(seed));
    const auto r = restriction_norm(op, Exponent(2), Exponent(2), precise(seed));
    CHECK(std::abs(r.norm_lower_bound - svd_norm(op)) <= 1e-8);
    CHECK(r.norm_lower_bound == doctest::Approx(rayleigh_quotient(op, r.witness, Exponent(2), Exponent(2))).epsilon(1e-12));
  }
}

TEST_CASE("p = 1 has norm one") {
  const auto mu = random_flat({1024, 40, 3, 8.0, 50});
  const ExtensionOperator op(mu, 32);
  for (const auto& q : {Exponent(1), Exponent(2), Exponent(4), Exponent::infinity()}) {
    const auto r = restriction_norm(op, Exponent(1), q, ProbeOptions{});
    CHECK(std::abs(r.norm_lower_bound - 1.0) <= 1e-12);
  }
}

TEST_CASE("dirac closed form") {
  const auto mu = dirac(1, 256, {17, 0});
  for (const auto& p : {Exponent(Rational(4, 3)), Exponent(2), Exponent(4)}) {
    const ExtensionOperator op(mu, 20);
    const auto r = restriction_norm(op, p, Exponent(2), ProbeOptions{});
    const double expected = std::pow(41.0, 1.0 / p.conjugate().to_double());
    CHECK(r.norm_lower_bound == doctest::Approx(expected).epsilon(1e-9));
  }
  const auto d2 = dirac(2, 64, {3, 9});
  const ExtensionOperator op2(d2, 5);
  const auto r2 = restriction_norm(op2, Exponent(2), Exponent(3), ProbeOptions{});
  CHECK(r2.norm_lower_bound == doctest::Approx(11.0).epsilon(1e-9));
}

TEST_CASE("growth exponents") {
  const std::vector<std::int64_t> radii{16, 32, 64, 128};
  for (const auto& p : {Exponent(1), Exponent(Rational(4, 3)), Exponent(2)}) {
    const auto g = growth_exponent(dirac(1, 1024, {3, 0}), p, Exponent(2), radii, ProbeOptions{});
    const double expected = p == Exponent(1) ? 0.0 : 1.0 / p.conjugate().to_double();
    CHECK(std::abs(g.fit.slope - expected) <= 0.02);
  }
  const auto u = growth_exponent(uniform(1, 1024), Exponent(2), Exponent(2), radii, ProbeOptions{});
  CHECK(std::abs(u.fit.slope) <= 0.05);
  const auto mu = random_flat({2048, 100, 2, 6.0, 50});
  const auto g = growth_exponent(mu, Exponent(Rational(8, 5)), Exponent(2), radii, ProbeOptions{});
  for (std::size_t i = 1; i < g.norms.size(); ++i) CHECK(g.norms[i] >= g.norms[i - 1] * (1.0 - 1e-12));
  for (std::size_t i = 0; i < g.probes.size(); ++i) {
    const ExtensionOperator op(mu, g.radii[i]);
    CHECK(std::abs(rayleigh_quotient(op, g.probes[i].witness, g.probes[i].p, g.probes[i].q) - g.norms[i]) <= 1e-10);
  }
  CHECK_THROWS(growth_exponent(mu, Exponent(2), Exponent(2), std::vector<std::int64_t>{8, 16, 32}, ProbeOptions{}));
}

TEST_CASE("probes are reproducible") {
  const auto mu = random_flat({1024, 50, 6, 6.0, 50});
  const ExtensionOperator op(mu, 40);
  ProbeOptions o;
  o.seed = 99;
  const auto a = restriction_norm(op, Exponent(Rational(4, 3)), Exponent(4), o);
  const auto b = restriction_norm(op, Exponent(Rational(4, 3)), Exponent(4), o);
  CHECK(a.norm_lower_bound == b.norm_lower_bound);
  CHECK(a.witness == b.witness);
}

TEST_CASE("norm helpers") {
  Eigen::VectorXcd f(3);
  f << std::complex<double>{3.0, 4.0}, std::complex<double>{0.0, 0.0}, std::complex<double>{0.0, -12.0};
  CHECK(lattice_norm(f, Exponent(1)) == doctest::Approx(17.0));
  CHECK(lattice_norm(f, Exponent(2)) == doctest::Approx(13.0));
  CHECK(lattice_norm(f, Exponent::infinity()) == doctest::Approx(12.0));
  Eigen::VectorXd w(3);
  w << 0.5, 0.25, 0.25;
  CHECK(measure_norm(f, w, Exponent(1)) == doctest::Approx(2.5 + 3.0));
  CHECK(measure_norm(f, w, Exponent::infinity()) == doctest::Approx(12.0));
}
