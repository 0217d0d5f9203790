#include <cmath>
#include <numeric>

#include "doctest.h"
#include "hyperspec/csrh.hpp"
#include "hyperspec/oracles.hpp"

using namespace hyperspec;
using doctest::Approx;

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}
double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

IterateState state_at(const SpectralObjective& obj, std::vector<double> x) {
  IterateState s;
  const auto gv = obj.gradient(x);
  s.x = std::move(x);
  s.f = gv.f;
  s.g = gv.g;
  return s;
}

Hypergraph two_edge_graph() {
  Hypergraph g(6, 3);
  g.add_edge({0, 1, 2}, 1.0);
  g.add_edge({3, 4, 5}, 1.5);
  return g;
}
}  // namespace

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto bad = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.p = 1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.c1 = 0.6; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.tau = 0.25; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.eps = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.runs = 0; }).validate(), std::invalid_argument);
  CHECK(cfg.ascent_constant() == 0.5);
}

TEST_CASE("random_unit_sphere") {
  auto rng = run_rng(1, 0);
  const auto one = random_unit_sphere(1, rng);
  CHECK(std::abs(one[0]) == 1.0);
  for (std::size_t n : {2, 7, 100, 1000}) CHECK(norm(random_unit_sphere(n, rng)) == Approx(1.0).epsilon(1e-14));
  auto a = run_rng(42, 3), b = run_rng(42, 3);
  CHECK(random_unit_sphere(10, a) == random_unit_sphere(10, b));
  auto c = run_rng(42, 4);
  auto d = run_rng(42, 3);
  CHECK(random_unit_sphere(10, c) != random_unit_sphere(10, d));
  CHECK_THROWS(random_unit_sphere(0, rng));
}

TEST_CASE("cg_direction") {
  SolverConfig cfg;
  const std::vector<double> g{1.0, 0.0};
  CHECK(cg_direction(g, {}, {}, cfg) == g);

  // beta~ = 0 in the hand-worked case
  CHECK(cg_direction(g, std::vector<double>{0, 1}, std::vector<double>{0, 1}, cfg) == std::vector<double>{1, 0});

  // d orthogonal to y: safeguard branch
  CHECK(cg_direction(g, std::vector<double>{1, 0}, std::vector<double>{0, 1}, cfg) == g);

  // positive beta: p = g + beta d
  const std::vector<double> g2{1.0, 1.0}, d{1.0, 0.0}, y{-1.0, 0.5};
  // d'y = -1, ||y||^2 = 1.25, d'g = 1, y'g = -0.5
  // beta~ = (0.5 * 1 * 1.25 / -1 - (-0.5)) / -1 = 0.125
  const auto p = cg_direction(g2, d, y, cfg);
  CHECK(p[0] == Approx(1.125));
  CHECK(p[1] == Approx(1.0));
  CHECK(dot(p, g2) >= cfg.ascent_constant() * dot(g2, g2));
}

TEST_CASE("cayley_step") {
  const std::vector<double> x{0.6, 0.8};
  CHECK(cayley_step(x, std::vector<double>{0.3, -0.2}, 0.0) == x);
  for (double alpha : {0.1, 1.0, 10.0}) {
    const auto xn = cayley_step(x, x, alpha);
    CHECK(xn[0] == Approx(0.6).epsilon(1e-15));
    CHECK(xn[1] == Approx(0.8).epsilon(1e-15));
  }
  const std::vector<double> e1{1, 0}, e2{0, 1};
  const auto xn = cayley_step(e1, e2, 2.0);
  CHECK(std::abs(xn[0]) <= 1e-16);
  CHECK(xn[1] == Approx(1.0).epsilon(1e-15));
  CHECK(cayley_step_length(e1, e2, 2.0) == Approx(std::sqrt(2.0)).epsilon(1e-15));

  // closed-form length against the iterate for a general direction
  const std::vector<double> u{0.48, 0.6, 0.64}, dir{0.2, -1.0, 0.5};
  for (double alpha : {0.01, 0.5, 3.0}) {
    const auto next = cayley_step(u, dir, alpha);
    std::vector<double> diff(3);
    for (int i = 0; i < 3; ++i) diff[i] = next[i] - u[i];
    CHECK(norm(next) == Approx(1.0).epsilon(1e-15));
    CHECK(norm(diff) == Approx(cayley_step_length(u, dir, alpha)).epsilon(1e-12));
  }
}

TEST_CASE("line search satisfies both Wolfe conditions") {
  Hypergraph edge(2, 2);
  edge.add_edge({0, 1});
  SolverConfig cfg;
  const SpectralObjective obj(edge, 2.0);
  const auto state = state_at(obj, {0.6, 0.8});
  const auto ls = line_search_wolfe(obj, cfg, state, state.g);
  REQUIRE(ls.ok);
  const double slope = dot(state.g, state.g);
  CHECK(ls.alpha > 0.0);
  CHECK(ls.eval.f - state.f >= cfg.c1 * ls.alpha * slope);
  CHECK(dot(ls.eval.g, state.g) <= cfg.c2 * slope);
  CHECK(ls.eval.f == obj.value(ls.x).f);
}

TEST_CASE("line search accepts the first trial on a concave stretch") {
  // With a unit direction the first trial is alpha = 1; from this start both
  // conditions already hold there.
  const auto g = gen_beta_star(3, 2);
  const SpectralObjective obj(g, 3.0);
  SolverConfig cfg;
  cfg.p = 3.0;
  auto rng = run_rng(5, 0);
  const auto state = state_at(obj, random_unit_sphere(g.num_vertices(), rng));
  std::vector<double> p = state.g;
  const double ng = norm(p);
  for (auto& v : p) v /= ng;
  const auto ls = line_search_wolfe(obj, cfg, state, p);
  REQUIRE(ls.ok);
  CHECK(ls.alpha == 1.0);
  CHECK(ls.evaluations == 1);
  const double slope = dot(state.g, p);
  CHECK(obj.delta(state.x, ls.x) >= cfg.c1 * slope);
  CHECK(dot(ls.eval.g, p) <= cfg.c2 * slope);
}

TEST_CASE("solve_single") {
  SolverConfig cfg;
  cfg.p = 3.0;
  const auto star = gen_beta_star(3, 10);
  auto rng = run_rng(0, 0);
  const auto res = solve_single(star, cfg, random_unit_sphere(star.num_vertices(), rng));
  CHECK(res.converged);
  CHECK(res.lambda == Approx(4.3088693800637672).epsilon(1e-8));
  CHECK(res.grad_norm <= cfg.grad_tol);

  SolverConfig z;
  const auto k43 = gen_complete(4, 3);
  const auto stationary = solve_single(k43, z, std::vector<double>(4, 0.5));
  CHECK(stationary.iterations == 0);
  CHECK(stationary.converged);
  CHECK(stationary.lambda == objective(k43, std::vector<double>(4, 0.5), 2.0).f);

  CHECK_THROWS_AS(solve_single(k43, z, std::vector<double>(4, 1.0)), std::invalid_argument);
}

TEST_CASE("solve_single trace is strictly increasing") {
  SolverConfig cfg;
  cfg.p = 4.0;
  cfg.record_trace = true;
  const auto path = gen_loose_path(4, 4);
  for (std::size_t run = 0; run < 5; ++run) {
    auto rng = run_rng(17, run);
    const auto res = solve_single(path, cfg, random_unit_sphere(path.num_vertices(), rng));
    REQUIRE(!res.trace.empty());
    for (const auto& rec : res.trace) {
      CHECK(rec.delta_f > 0.0);
      CHECK(rec.norm_drift <= 1e-12);
      CHECK(rec.slope >= cfg.ascent_constant() * rec.grad_norm * rec.grad_norm);
    }
    // Stored values carry a few ulps of evaluation error; the strict increase
    // is carried by delta_f.
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
      CHECK(res.trace[k].f >= res.trace[k - 1].f * (1.0 - 1e-14));
    }
  }
}

TEST_CASE("multistart") {
  SolverConfig cfg;
  cfg.runs = 100;
  cfg.reference = 3.0;
  const auto k43 = gen_complete(4, 3);
  const auto ms = solve_multistart(k43, cfg);
  CHECK(ms.best.lambda == Approx(3.0).epsilon(1e-8));
  CHECK(ms.all_lambdas.size() == 100);
  REQUIRE(ms.accuracy_rate.has_value());
  CHECK(*ms.accuracy_rate > 0.0);
  for (double w : ms.best.weighting) CHECK(w >= 0.0);

  SolverConfig one;
  one.runs = 1;
  one.seed = 9;
  const SpectralObjective obj(k43, 2.0);
  const auto single = solve_run(obj, one, 0);
  const auto multi = solve_multistart(k43, one);
  CHECK(multi.best.lambda == single.lambda);
  CHECK(multi.best.weighting == single.weighting);
  CHECK(multi.best_run == 0);
}

TEST_CASE("multistart is independent of the thread count") {
  SolverConfig cfg;
  cfg.p = 2.5;
  cfg.runs = 40;
  cfg.seed = 123;
  cfg.deterministic = true;
  const auto g = gen_loose_path(4, 4);
  cfg.threads = 1;
  const auto a = solve_multistart(g, cfg);
  cfg.threads = 4;
  const auto b = solve_multistart(g, cfg);
  CHECK(a.all_lambdas == b.all_lambdas);
  CHECK(a.best.weighting == b.best.weighting);
  CHECK(a.best_run == b.best_run);
  CHECK(a.total_iterations == b.total_iterations);
}

TEST_CASE("near ties are flagged on a disconnected graph") {
  // Two identical disjoint edges: the maximizers sit on either edge.
  Hypergraph g(6, 3);
  g.add_edge({0, 1, 2});
  g.add_edge({3, 4, 5});
  SolverConfig cfg;
  cfg.p = 1.5;
  cfg.runs = 20;
  const auto ms = solve_multistart(g, cfg);
  CHECK(ms.near_ties > 0);
}

TEST_CASE("lagrangian schedule") {
  CHECK(lagrangian_p(1) == Approx(4.0 / 3.0));
  CHECK(lagrangian_p(3) == Approx(8.0 / 7.0));

  SolverConfig cfg;
  cfg.runs = 20;
  const auto k43 = gen_complete(4, 3);
  const auto res = lagrangian_approx(k43, cfg, 10);
  REQUIRE(res.steps.size() == 10);
  // uniform weighting at every p by symmetry: lambda/r! = C(4,3) 4^{-3/p}
  for (const auto& s : res.steps) {
    CHECK(s.scaled == Approx(4.0 * std::pow(4.0, -3.0 / s.p)).epsilon(1e-8));
    CHECK(s.simplex_value == Approx(0.0625).epsilon(1e-8));
  }
  for (std::size_t i = 1; i < res.steps.size(); ++i) CHECK(res.steps[i].scaled <= res.steps[i - 1].scaled);
  CHECK(res.estimate == res.steps.back().scaled);

  Hypergraph edge(2, 2);
  edge.add_edge({0, 1});
  const auto single = lagrangian_approx(edge, cfg, 10);
  CHECK(single.estimate == Approx(std::pow(2.0, -2.0 / lagrangian_p(10))).epsilon(1e-8));
  CHECK(single.steps.back().simplex_value == Approx(0.25).epsilon(1e-8));
}

TEST_CASE("status strings") {
  CHECK(to_string(SolveStatus::converged) == "converged");
  CHECK(to_string(SolveStatus::line_search_failure) == "line_search_failure");
}
