#include <cmath>

#include "doctest.h"
#include "hyperspec/csrh.hpp"
#include "hyperspec/oracles.hpp"

using namespace hyperspec;
using doctest::Approx;

TEST_CASE("beta-star generator") {
  const auto g = gen_beta_star(6, 5);
  CHECK(g.num_vertices() == 26);
  CHECK(g.num_edges() == 5);
  const auto e = gen_beta_star(2, 1);
  CHECK(e.num_vertices() == 2);
  CHECK(e.num_edges() == 1);
  const auto s = gen_beta_star(3, 2);
  REQUIRE(s.num_edges() == 2);
  CHECK(std::vector<VertexId>(s.edge(0).vertices.begin(), s.edge(0).vertices.end()) == std::vector<VertexId>{0, 1, 2});
  CHECK(std::vector<VertexId>(s.edge(1).vertices.begin(), s.edge(1).vertices.end()) == std::vector<VertexId>{0, 3, 4});
  CHECK(validate(g).empty());
}

TEST_CASE("loose-path generator") {
  CHECK(gen_loose_path(6, 4).num_vertices() == 21);
  const auto t = gen_loose_path(3, 1);
  CHECK(t.num_vertices() == 3);
  CHECK(t.num_edges() == 1);
  const auto p = gen_loose_path(4, 3);
  REQUIRE(p.num_edges() == 3);
  CHECK(p.edge(1).vertices[0] == 3);
  CHECK(p.edge(2).vertices[0] == 6);
}

TEST_CASE("complete generator") {
  CHECK(gen_complete(4, 3).num_edges() == 4);
  CHECK(gen_complete(5, 5).num_edges() == 1);
  CHECK(gen_complete(5, 3).num_edges() == 10);
  CHECK(gen_complete(10, 3).num_edges() == 120);
  CHECK(gen_complete(6, 3).is_canonical());
}

TEST_CASE("beta-star closed form") {
  CHECK(beta_star_value(3, 10, 3).value == Approx(4.30886938).epsilon(1e-9));
  CHECK(beta_star_value(3, 10, 3).value == Approx(2.0 * std::cbrt(10.0)).epsilon(1e-15));
  CHECK(beta_star_value(6, 4, 4).value == Approx(48.98979486).epsilon(1e-9));
  CHECK(beta_star_value(3, 10, 2).value == Approx(1.15470054).epsilon(1e-8));
  CHECK(beta_star_value(3, 500, 2).value == Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("loose-path closed form") {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(loose_path_value(4, 3).value == Approx(6.0 * std::sqrt(phi)).epsilon(1e-15));
  CHECK(loose_path_value(4, 3).value == Approx(7.6321179).epsilon(1e-8));
  CHECK(loose_path_value(4, 4).value == Approx(7.8964441).epsilon(1e-8));
  CHECK(loose_path_value(6, 4).value == Approx(144.112435).epsilon(1e-8));
  CHECK_THROWS(loose_path_value(3, 3));
  CHECK_THROWS(loose_path_value(4, 5));
}

TEST_CASE("complete-graph Lagrangian") {
  CHECK(complete_lagrangian(4, 3).value == 0.0625);
  CHECK(complete_lagrangian(10, 3).value == Approx(0.12).epsilon(1e-15));
  CHECK(complete_lagrangian(4, 4).value == 1.0 / 256.0);
  CHECK(binomial(10, 3) == 120.0);
}

TEST_CASE("brute force") {
  CHECK(brute_force_radius(gen_complete(4, 3), 2.0) == Approx(3.0).epsilon(1e-4));
  Hypergraph edge(2, 2);
  edge.add_edge({0, 1});
  CHECK(brute_force_radius(edge, 2.0) == Approx(1.0).epsilon(1e-6));

  Hypergraph g(5, 3);
  g.add_edge({0, 1, 2}, 1.0);
  g.add_edge({1, 2, 3}, 0.7);
  g.add_edge({0, 3, 4}, 1.3);
  g.add_edge({2, 3, 4}, 0.9);
  SolverConfig cfg;
  cfg.p = 3.0;
  const double solver = solve_multistart(g, cfg).best.lambda;
  CHECK(brute_force_radius(g, 3.0) == Approx(solver).epsilon(1e-4));

  const auto res = brute_force_search(g, 3.0, 200);
  CHECK(res.weighting.size() == 5);
  CHECK(objective(g, res.weighting, 3.0).f == Approx(res.value).epsilon(1e-12));

  CHECK_THROWS(brute_force_radius(gen_beta_star(3, 5), 2.0));
}
