#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hyperspec/hypergraph.hpp"
#include "hyperspec/oracles.hpp"

using namespace hyperspec;

namespace {
bool has_violation(const Hypergraph& g, const std::string& needle) {
  const auto v = validate(g);
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}
}  // namespace

TEST_CASE("parse: two triples on four vertices") {
  const auto g = parse_edge_list("3 4\n1 2 3 1.0\n2 3 4 1.0");
  CHECK(g.num_vertices() == 4);
  CHECK(g.rank() == 3);
  REQUIRE(g.num_edges() == 2);
  CHECK(std::vector<VertexId>(g.edge(0).vertices.begin(), g.edge(0).vertices.end()) == std::vector<VertexId>{0, 1, 2});
  CHECK(std::vector<VertexId>(g.edge(1).vertices.begin(), g.edge(1).vertices.end()) == std::vector<VertexId>{1, 2, 3});
}

TEST_CASE("parse: omitted weight defaults to one") {
  const auto g = parse_edge_list("2 2\n1 2");
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0).weight == 1.0);
}

TEST_CASE("parse: duplicate edges merge by summing weights") {
  const auto g = parse_edge_list("3 4\n1 2 3 1\n1 2 3 0.5");
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0).weight == 1.5);
  CHECK(parse_edge_list("3 4\n3 2 1 1\n1 3 2 0.5").edge(0).weight == 1.5);
}

TEST_CASE("parse: comments and blank lines") {
  const auto g = parse_edge_list("# header\n\n2 3\n# an edge\n1 2\n\n2 3 2.5\n");
  CHECK(g.num_edges() == 2);
  CHECK(g.edge(1).weight == 2.5);
}

TEST_CASE("parse: errors carry line numbers") {
  auto line_of = [](std::string_view text) {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("3 4\n1 2 5") == 2);
  CHECK(line_of("3 4\n1 2 3\n1 2") == 3);
  CHECK(line_of("3 4\n1 2 3 0") == 2);
  CHECK(line_of("3 4\n1 2 3 -1") == 2);
  CHECK(line_of("3 4\n1 2 x") == 2);
  CHECK(line_of("1 4\n1") == 1);
  CHECK(line_of("") == 1);
  CHECK_THROWS_AS(parse_edge_list("3 4\n1 2 3 nan"), ParseError);
}

TEST_CASE("parse and serialize round trip") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick_r(2, 5), pick_n(5, 12), pick_m(0, 20);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = pick_r(rng), n = pick_n(rng);
    std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(n - 1));
    Hypergraph g(n, r);
    const int m = pick_m(rng);
    for (int e = 0; e < m; ++e) {
      std::vector<VertexId> slots(r);
      for (auto& s : slots) s = vertex(rng);
      g.add_edge(slots, weight(rng));
    }
    const auto canon = g.canonical();
    CHECK(parse_edge_list(serialize_edge_list(canon)) == canon);
  }
}

TEST_CASE("validate") {
  CHECK(validate(gen_complete(4, 3)).empty());

  Hypergraph zero(4, 3);
  zero.add_edge({0, 1, 2}, 0.0);
  CHECK(has_violation(zero, "nonpositive weight"));

  Hypergraph out_of_range(4, 3);
  out_of_range.add_edge({0, 1, 4});
  CHECK(has_violation(out_of_range, "vertex out of range"));

  CHECK(has_violation(Hypergraph(0, 3), "vertex count"));
  CHECK(has_violation(Hypergraph(3, 1), "cardinality"));
  CHECK_THROWS_AS(make_hypergraph(4, 3, {Edge{{0, 1, 7}, 1.0}}), std::invalid_argument);
}

TEST_CASE("add_edge checks the edge size") {
  Hypergraph g(4, 3);
  CHECK_THROWS_AS(g.add_edge({0, 1}), std::invalid_argument);
}

TEST_CASE("canonical form") {
  Hypergraph g(5, 2);
  g.add_edge({3, 4}, 1.0);
  g.add_edge({1, 0}, 2.0);
  g.add_edge({0, 1}, 0.5);
  CHECK_FALSE(g.is_canonical());
  const auto c = g.canonical();
  CHECK(c.is_canonical());
  REQUIRE(c.num_edges() == 2);
  CHECK(c.edge(0).weight == 2.5);
}

TEST_CASE("degree") {
  CHECK(degree(gen_complete(4, 3), 0) == 3.0);
  CHECK(degree(gen_beta_star(3, 10), 0) == 10.0);
  Hypergraph isolated(4, 2);
  isolated.add_edge({0, 1});
  CHECK(degree(isolated, 3) == 0.0);
  Hypergraph multi(3, 3);
  multi.add_edge({0, 0, 1}, 2.0);
  CHECK(degree(multi, 0) == 2.0);
  CHECK_THROWS_AS(degree(isolated, 4), std::out_of_range);
}

TEST_CASE("incidence index") {
  Hypergraph single(3, 3);
  single.add_edge({0, 1, 2});
  const auto inc = build_incidence(single);
  REQUIRE(inc.incident(0).size() == 1);
  CHECK(inc.incident(0)[0].edge == 0);
  CHECK(inc.incident(0)[0].multiplicity == 1);

  Hypergraph multi(2, 3);
  multi.add_edge({0, 0, 1});
  const auto inc2 = build_incidence(multi);
  REQUIRE(inc2.incident(0).size() == 1);
  CHECK(inc2.incident(0)[0].multiplicity == 2);
  CHECK(inc2.incident(0)[0].slot == 0);
  CHECK(inc2.incident(1)[0].slot == 2);

  CHECK(build_incidence(gen_complete(4, 3)).total_multiplicity() == 12);
}

TEST_CASE("write_edge_list uses one-based ids") {
  Hypergraph g(3, 2);
  g.add_edge({0, 2}, 0.25);
  CHECK(serialize_edge_list(g) == "2 3\n1 3 0.25\n");
}
