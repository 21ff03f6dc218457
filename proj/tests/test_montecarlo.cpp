#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "classc/fixtures.hpp"
#include "classc/montecarlo.hpp"
#include "classc/trail_enum.hpp"

using namespace classc;

TEST_CASE("single-loop mean trace matches the Haar-moment values", "[mc]") {
  const NetworkGraph g = single_loop_graph();
  const RngStream rng(1001);
  {
    // inside the unit circle: 2 - z^2
    const MeanGreenResult r = mean_green_mc(g, 0, 0, {0.5, 0.0}, 40000, rng.split(0));
    REQUIRE(std::abs(r.mean_trace - Complex{1.75, 0.0}) <= 3.0 * r.stderr_trace);
    // off-diagonal entries vanish on average
    REQUIRE(std::abs(r.mean(0, 1)) <= 3.0 * r.stderrors(0, 1));
    REQUIRE(std::abs(r.mean(1, 0)) <= 3.0 * r.stderrors(1, 0));
  }
  {
    // outside: z^-2
    const MeanGreenResult r = mean_green_mc(g, 0, 0, {2.0, 0.0}, 40000, rng.split(1));
    REQUIRE(std::abs(r.mean_trace - Complex{0.25, 0.0}) <= 3.0 * r.stderr_trace);
  }
}

TEST_CASE("standard errors shrink on the Monte Carlo schedule", "[mc]") {
  const NetworkGraph g = single_loop_graph();
  const RngStream rng(1002);
  const MeanGreenResult small = mean_green_mc(g, 0, 0, {0.6, 0.0}, 10000, rng.split(7));
  const MeanGreenResult big = mean_green_mc(g, 0, 0, {0.6, 0.0}, 40000, rng.split(8));
  const double ratio = small.stderr_trace / big.stderr_trace;
  REQUIRE(ratio >= 1.6);  // expected 2 within 20%
  REQUIRE(ratio <= 2.4);
}

TEST_CASE("results are independent of the worker count", "[mc]") {
  RngStream rng(1003);
  const NetworkGraph g = random_closed_graph(rng, 8, 3);
  const RngStream mc = rng.split(5);
  const MeanGreenResult w1 = mean_green_mc(g, 0, 0, {0.6, 0.0}, 8192, mc, 1);
  const MeanGreenResult w3 = mean_green_mc(g, 0, 0, {0.6, 0.0}, 8192, mc, 3);
  const MeanGreenResult w7 = mean_green_mc(g, 0, 0, {0.6, 0.0}, 8192, mc, 7);
  REQUIRE(w1.mean == w3.mean);
  REQUIRE(w3.mean == w7.mean);
  REQUIRE(w1.stderrors == w3.stderrors);
  REQUIRE(w1.mean_det == w3.mean_det);
  REQUIRE(w1.mean_trace == w7.mean_trace);
}

TEST_CASE("mean point conductance agrees with the open-trail sum", "[mc]") {
  const double theta = 0.7;
  const CutFixture f = two_node_cut_fixture(theta);
  const double classical = classical_mean_conductance(f.graph, f.e_in, f.e_out);
  REQUIRE(classical == Catch::Approx(2.0 * std::cos(theta) * std::cos(theta)).margin(1e-12));
  const RngStream rng(1004);
  const MeanValueResult mc = mean_conductance_mc(f.graph, f.e_in, f.e_out, 40000, rng, 2);
  REQUIRE(std::abs(mc.mean - classical) <= 3.0 * mc.stderror);
}

TEST_CASE("parameter guards", "[mc]") {
  const NetworkGraph g = single_loop_graph();
  const RngStream rng(1005);
  REQUIRE_THROWS_AS(mean_green_mc(g, 0, 0, {0.5, 0.0}, 1, rng), ParamError);
}
