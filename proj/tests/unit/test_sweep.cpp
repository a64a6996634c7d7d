#include <doctest.h>

#include "rlab/sweep.hpp"

using namespace rlab;

TEST_CASE("classification thresholds") {
  CHECK(classify(0.01, 0.05, 0.10) == Classification::bounded);
  CHECK(classify(0.07, 0.05, 0.10) == Classification::inconclusive);
  CHECK(classify(0.2, 0.05, 0.10) == Classification::growing);
  CHECK(classification_from_string(to_string(Classification::growing)) == Classification::growing);
  CHECK_THROWS(classification_from_string("huge"));
}

TEST_CASE("exponent grids") {
  const auto g = parse_exponent_grid("1:2:1/4");
  REQUIRE(g.size() == 5);
  CHECK(g[1] == Exponent(Rational(5, 4)));
  CHECK(g[4] == Exponent(2));
  const auto l = parse_exponent_grid("4/3, 2,inf");
  REQUIRE(l.size() == 3);
  CHECK(l[2].is_infinite());
  CHECK_THROWS(parse_exponent_grid("1:2"));
  CHECK_THROWS(parse_exponent_grid("2:1:1/4"));
  CHECK_THROWS(parse_exponent_grid("1:2:0"));
  CHECK_THROWS(parse_exponent_grid(""));
}

TEST_CASE("small sweep and CSV round trip") {
  const auto mu = dirac(1, 1024, {0, 0});
  SweepConfig c;
  c.p_grid = {Exponent(1), Exponent(2)};
  c.q_grid = {Exponent(2)};
  c.radii = {8, 16, 32, 64};
  c.restarts = 2;
  c.seed = 4;
  const auto grid = sweep(mu, c);
  REQUIRE(grid.cells.size() == 2);
  CHECK(grid.cells[0].cls == Classification::bounded);
  CHECK(grid.cells[1].cls == Classification::growing);
  CHECK(grid.cells[1].slope == doctest::Approx(0.5).epsilon(0.04));
  CHECK(grid.cells[0].in_theorem_region);
  CHECK_FALSE(grid.cells[1].in_theorem_region);

  const auto csv = to_csv(grid, {"seed=4"});
  CHECK(csv.find("p,q,norm_X8,norm_X16,norm_X32,norm_X64,slope,residual,class,in_theorem_region,in_knapp_region") !=
        std::string::npos);
  const auto back = sweep_from_csv(csv);
  REQUIRE(back.cells.size() == 2);
  CHECK(back.radii == grid.radii);
  CHECK(back.cells[1].p == Exponent(2));
  CHECK(back.cells[1].cls == grid.cells[1].cls);
  CHECK(back.cells[1].slope == doctest::Approx(grid.cells[1].slope).epsilon(1e-10));
  CHECK(to_csv(back, {"seed=4"}) == csv);

  c.threads = 3;
  CHECK(to_csv(sweep(mu, c), {"seed=4"}) == csv);
}

TEST_CASE("malformed CSV") {
  CHECK_THROWS(sweep_from_csv(""));
  CHECK_THROWS(sweep_from_csv("p,q,slope\n"));
  CHECK_THROWS(sweep_from_csv("p,q,norm_X8,slope,residual,class,in_theorem_region,in_knapp_region\n1,2,0.5\n"));
  CHECK_THROWS(sweep_from_csv("p,q,norm_X8,slope,residual,class,in_theorem_region,in_knapp_region\n1,2,x,0,0,bounded,1,1\n"));
  const auto empty = sweep_from_csv("p,q,norm_X8,slope,residual,class,in_theorem_region,in_knapp_region\n");
  CHECK(empty.cells.empty());
}
