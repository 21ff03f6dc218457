#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "classc/fixtures.hpp"
#include "classc/trail_enum.hpp"
#include "classc/trails.hpp"

using namespace classc;

TEST_CASE("node weights on the N=2 rotation", "[trails]") {
  const double theta = 0.6;
  const MatX s = rotation2(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);

  REQUIRE(omega(s, {{1, 1}}).omega == Catch::Approx(c2).margin(1e-15));
  REQUIRE(omega(s, {{1, 2}}).omega == Catch::Approx(s2).margin(1e-15));
  REQUIRE(omega(s, {{2, 2}}).omega == Catch::Approx(c2).margin(1e-15));
  REQUIRE(omega(s, {{2, 1}}).omega == Catch::Approx(s2).margin(1e-15));

  // both full pairings; they sum to one
  const double w_id = omega(s, {{1, 1}, {2, 2}}).omega;
  const double w_cross = omega(s, {{1, 2}, {2, 1}}).omega;
  REQUIRE(w_id == Catch::Approx(c2).margin(1e-14));
  REQUIRE(w_cross == Catch::Approx(s2).margin(1e-14));
  REQUIRE(w_id + w_cross == Catch::Approx(1.0).margin(1e-14));

  const MatX id3 = MatX::Identity(3, 3);
  REQUIRE(omega(id3, {{2, 2}}).omega == 1.0);
  REQUIRE(omega(id3, {{2, 3}}).omega == 0.0);
  REQUIRE(omega(id3, {}).omega == 1.0);
  REQUIRE_THROWS_AS(omega(id3, {{1, 1}, {1, 2}}), ParamError);
  REQUIRE_THROWS_AS(omega(id3, {{4, 1}}), ParamError);
}

TEST_CASE("conditional weights", "[trails]") {
  const double theta = 0.8;
  const MatX s = rotation2(theta);
  // a second passage through an N=2 node is forced and unweighted
  REQUIRE(conditional_weight(s, {{1, 1}}, 2, 2) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(conditional_weight(s, {{1, 2}}, 2, 1) == Catch::Approx(1.0).margin(1e-14));
  // first passages are squared amplitudes
  for (int j = 1; j <= 2; ++j)
    for (int i = 1; i <= 2; ++i)
      REQUIRE(conditional_weight(s, {}, j, i) ==
              Catch::Approx(s(i - 1, j - 1) * s(i - 1, j - 1)).margin(1e-15));

  // vanishing prefix
  MatX anti(2, 2);
  anti << 0.0, 1.0, -1.0, 0.0;
  REQUIRE_THROWS_AS(conditional_weight(anti, {{1, 1}}, 2, 2), DegeneratePrefixError);
}

TEST_CASE("normalization of conditional weights", "[trails]") {
  RngStream rng(401);
  // empty history: column orthonormality
  for (int c = 0; c < 20; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(5));
    const MatX s = random_orthogonal(n, cr);
    for (int j = 1; j <= n; ++j)
      REQUIRE(normalization_sum(s, {}, j) == Catch::Approx(1.0).margin(1e-12));
  }
  // single remaining channel on N=2
  const MatX rot = rotation2(0.5);
  REQUIRE(normalization_sum(rot, {{1, 1}}, 2) == Catch::Approx(1.0).margin(1e-13));

  // random admissible histories
  double worst = 0.0;
  for (int c = 0; c < 300; ++c) {
    RngStream cr = rng.split(1000 + static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(5));
    const MatX s = random_orthogonal(n, cr);
    std::vector<int> js(static_cast<std::size_t>(n)), is(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) js[static_cast<std::size_t>(x)] = is[static_cast<std::size_t>(x)] = x + 1;
    shuffle_in_place(js, cr);
    shuffle_in_place(is, cr);
    const int p = static_cast<int>(cr.uniform_index(static_cast<std::uint64_t>(n)));
    std::vector<std::pair<int, int>> prior;
    for (int k = 0; k < p; ++k) prior.emplace_back(js[static_cast<std::size_t>(k)], is[static_cast<std::size_t>(k)]);
    if (!prior.empty() && omega(s, prior).omega == 0.0) continue;
    worst = std::max(worst,
                     std::abs(normalization_sum(s, prior, js[static_cast<std::size_t>(p)]) - 1.0));
  }
  REQUIRE(worst <= 1e-10);

  REQUIRE_THROWS_AS(normalization_sum(rotation2(0.1), {{1, 1}}, 1), ParamError);
}

TEST_CASE("chain rule telescopes to the full weight", "[trails]") {
  RngStream rng(402);
  for (int c = 0; c < 200; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(4));
    const MatX s = random_orthogonal(n, cr);
    std::vector<int> js(static_cast<std::size_t>(n)), is(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) js[static_cast<std::size_t>(x)] = is[static_cast<std::size_t>(x)] = x + 1;
    shuffle_in_place(js, cr);
    shuffle_in_place(is, cr);
    std::vector<std::pair<int, int>> seq;
    double product = 1.0;
    for (int k = 0; k < n; ++k) {
      product *= conditional_weight(s, seq, js[static_cast<std::size_t>(k)], is[static_cast<std::size_t>(k)]);
      seq.emplace_back(js[static_cast<std::size_t>(k)], is[static_cast<std::size_t>(k)]);
    }
    REQUIRE(product == Catch::Approx(omega(s, seq).omega).margin(1e-12));
    // the report's factors agree
    const WeightReport rep = omega(s, seq);
    REQUIRE(rep.conditional_factors.size() == seq.size());
    double rep_product = 1.0;
    for (const double f : rep.conditional_factors) rep_product *= f;
    REQUIRE(rep_product == Catch::Approx(rep.omega).margin(1e-12));
  }
}

TEST_CASE("closed-trail enumeration on the bundled fixtures", "[trails]") {
  {
    const auto trails = enumerate_closed_trails(single_loop_graph(), 0);
    REQUIRE(trails.size() == 1);
    REQUIRE(trails[0].trail.edges == std::vector<int>{0});
    REQUIRE(trails[0].weight == 1.0);
    // S = (-1) squares away
    const auto neg = enumerate_closed_trails(single_loop_graph(-1.0), 0);
    REQUIRE(neg.size() == 1);
    REQUIRE(neg[0].weight == 1.0);
  }
  {
    const double ta = 0.7, tb = 1.1;
    const auto trails = enumerate_closed_trails(two_node_fixture(ta, tb), 0);
    REQUIRE(trails.size() == 4);
    const double ca = std::cos(ta) * std::cos(ta), sa = std::sin(ta) * std::sin(ta);
    const double cb = std::cos(tb) * std::cos(tb), sb = std::sin(tb) * std::sin(tb);
    // length 2: a1 b1 and a1 b2; length 4: a1 b1 a2 b2 and a1 b2 a2 b1
    REQUIRE(trails[0].trail.edges == std::vector<int>{0, 2});
    REQUIRE(trails[0].weight == Catch::Approx(cb * ca).margin(1e-14));
    REQUIRE(trails[1].trail.edges == std::vector<int>{0, 3});
    REQUIRE(trails[1].weight == Catch::Approx(sb * sa).margin(1e-14));
    REQUIRE(trails[2].trail.edges == std::vector<int>{0, 2, 1, 3});
    REQUIRE(trails[2].weight == Catch::Approx(cb * sa).margin(1e-14));
    REQUIRE(trails[3].trail.edges == std::vector<int>{0, 3, 1, 2});
    REQUIRE(trails[3].weight == Catch::Approx(sb * ca).margin(1e-14));
    double sum = 0.0;
    for (const auto& t : trails) sum += t.weight;
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-14));
  }
  {
    // straight-through identity nodes leave exactly one trail
    const auto trails = enumerate_closed_trails(two_node_fixture(0.0, 0.0), 0);
    REQUIRE(trails.size() == 1);
    REQUIRE(trails[0].trail.edges == std::vector<int>{0, 2});
    REQUIRE(trails[0].weight == 1.0);
  }
}

TEST_CASE("closed-trail weights always sum to one", "[trails]") {
  RngStream rng(403);
  for (int c = 0; c < 40; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int max_degree = c % 2 == 0 ? 2 : 3;  // signed weights occur at degree 3
    const NetworkGraph g = random_closed_graph(cr, 9, max_degree);
    const int root = static_cast<int>(cr.uniform_index(g.num_edges()));
    double sum = 0.0;
    for (const auto& t : enumerate_closed_trails(g, root)) sum += t.weight;
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("trail-sum resolvent trace", "[trails]") {
  const NetworkGraph loop = single_loop_graph();
  REQUIRE(classical_mean_trace_green(loop, 0, {0.5, 0.0}).real() == Catch::Approx(1.75));
  REQUIRE(classical_mean_trace_green(loop, 0, {2.0, 0.0}).real() == Catch::Approx(0.25));
  REQUIRE_THROWS_AS(classical_mean_trace_green(loop, 0, {1.0, 0.0}), ParamError);

  const NetworkGraph two = two_node_fixture(M_PI / 4.0, M_PI / 4.0);
  REQUIRE(classical_mean_trace_green(two, 0, {0.5, 0.0}).real() ==
          Catch::Approx(2.0 - 0.033203125).margin(1e-12));
}

TEST_CASE("open-trail enumeration and conductance", "[trails]") {
  {
    const NetworkGraph chain = chain_open_graph(3);
    const auto trails = enumerate_open_trails(chain, 0, 3);
    REQUIRE(trails.size() == 1);
    REQUIRE(trails[0].weight == 1.0);
    REQUIRE(classical_mean_conductance(chain, 0, 3) == 2.0);
  }
  {
    const double theta = 0.9;
    const NetworkGraph node = one_node_open_fixture(theta);
    const auto trails = enumerate_open_trails(node, 0, 2);
    REQUIRE(trails.size() == 1);
    REQUIRE(trails[0].weight == Catch::Approx(std::cos(theta) * std::cos(theta)));
    REQUIRE(classical_mean_conductance(node, 0, 2) ==
            Catch::Approx(2.0 * std::cos(theta) * std::cos(theta)));
  }
  {
    // disconnected leads: two separate nodes, no path between them
    Node a, b;
    a.id = 0;
    a.scattering = MatX::Identity(1, 1);
    b.id = 1;
    b.scattering = MatX::Identity(1, 1);
    std::vector<Edge> edges(4);
    edges[0] = Edge{0, std::nullopt, EdgeEndpoint{0, 1}};  // lead into a
    edges[1] = Edge{1, EdgeEndpoint{0, 1}, std::nullopt};  // lead out of a
    edges[2] = Edge{2, std::nullopt, EdgeEndpoint{1, 1}};  // lead into b
    edges[3] = Edge{3, EdgeEndpoint{1, 1}, std::nullopt};  // lead out of b
    const NetworkGraph g = NetworkGraph::build({a, b}, edges);
    REQUIRE(enumerate_open_trails(g, 0, 3).empty());
    REQUIRE(classical_mean_conductance(g, 0, 3) == 0.0);
  }
  {
    // the cut fixture's surviving trail goes once through the theta node
    const double theta = 0.6;
    const CutFixture f = two_node_cut_fixture(theta);
    REQUIRE(classical_mean_conductance(f.graph, f.e_in, f.e_out) ==
            Catch::Approx(2.0 * std::cos(theta) * std::cos(theta)).margin(1e-12));
  }
}

TEST_CASE("summing the weight over all pairings squares the minor", "[trails]") {
  RngStream rng(404);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    RngStream cr = rng.split(static_cast<std::uint64_t>(c));
    const int n = 2 + static_cast<int>(cr.uniform_index(4));
    const MatX s = random_orthogonal(n, cr);
    const int k = 1 + static_cast<int>(cr.uniform_index(static_cast<std::uint64_t>(n)));
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) all[static_cast<std::size_t>(x)] = x + 1;
    auto js = all, is = all;
    shuffle_in_place(js, cr);
    shuffle_in_place(is, cr);
    js.resize(static_cast<std::size_t>(k));
    is.resize(static_cast<std::size_t>(k));
    std::sort(js.begin(), js.end());
    std::sort(is.begin(), is.end());
    double sum = 0.0;
    std::vector<int> perm = is;
    do {
      std::vector<std::pair<int, int>> visits;
      for (std::size_t v = 0; v < js.size(); ++v) visits.emplace_back(js[v], perm[v]);
      sum += omega(s, visits).omega;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double minor = minor_det(s, ChannelSubset::of(is), ChannelSubset::of(js));
    worst = std::max(worst, std::abs(sum - minor * minor));
  }
  REQUIRE(worst <= 1e-10);
}

TEST_CASE("enumeration resource ceiling", "[trails]") {
  const NetworkGraph g = two_node_fixture(0.4, 0.9);
  REQUIRE_THROWS_AS(enumerate_closed_trails(g, 0, /*ceiling=*/2), ResourceError);
}

TEST_CASE("trail CSV", "[trails]") {
  const auto trails = enumerate_closed_trails(two_node_fixture(0.3, 0.4), 0);
  const std::string csv = trails_to_csv(trails);
  REQUIRE(csv.rfind("trail_id,length,weight,edge_sequence\n", 0) == 0);
  REQUIRE(csv.find("0,2,") != std::string::npos);
  REQUIRE(csv.find("0 2") != std::string::npos);
}
