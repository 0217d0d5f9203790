#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hyperspec/hypergraph.hpp"
#include "hyperspec/tensor_ops.hpp"

namespace hyperspec {

/// Parameters of the conjugate-gradient / Cayley-transform ascent.
struct SolverConfig {
  double p = 2.0;
  double c1 = 1e-4;   // sufficient increase
  double c2 = 0.5;    // curvature
  double tau = 0.5;   // beta formula, in (1/4, 1)
  double eps = 1e-6;  // beta safeguard
  double grad_tol = 1e-8;
  std::size_t max_iter = 1000;
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  bool deterministic = false;
  std::size_t max_linesearch_steps = 60;
  unsigned threads = 1;

  /// Known optimum: stops a run once |lambda - reference| <= 1e-12 and
  /// enables the per-run accuracy rate of a multistart.
  std::optional<double> reference;

  bool record_trace = false;
  /// Also store x_k and p_k in every trace record (small problems only).
  bool record_iterates = false;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Sufficient-ascent constant 1 - 1/(4 tau).
  double ascent_constant() const { return 1.0 - 1.0 / (4.0 * tau); }
  /// Direction bound M0 = 1 + 1/eps + tau/eps^2.
  double direction_bound() const { return 1.0 + 1.0 / eps + tau / (eps * eps); }
};

/// State of the iteration at x_k on the unit sphere.
struct IterateState {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> g;
  std::vector<double> d_prev;  // x_k - x_{k-1}; empty at k = 0
  std::vector<double> g_prev;  // gradient at x_{k-1}; empty at k = 0
  std::size_t k = 0;
};

/// One accepted step x_k -> x_{k+1}.
struct TraceRecord {
  std::size_t k = 0;
  double f = 0.0;           // f(x_k)
  double delta_f = 0.0;     // f(x_{k+1}) - f(x_k), difference-accurate
  double grad_norm = 0.0;   // ||g_k||
  double alpha = 0.0;
  double slope = 0.0;       // g_k^T p_k
  double direction_norm = 0.0;
  double curvature = 0.0;   // g_{k+1}^T p_k
  double step_length = 0.0; // ||x_{k+1} - x_k||
  double norm_drift = 0.0;  // | ||x_{k+1}|| - 1 |
  bool restarted = false;   // steepest-ascent fallback used
  std::vector<double> x;          // x_k, with record_iterates
  std::vector<double> direction;  // p_k, with record_iterates
};

enum class SolveStatus { converged, reference_reached, max_iterations, line_search_failure, numerical_failure };

std::string to_string(SolveStatus status);

struct SolveResult {
  double lambda = 0.0;
  std::vector<double> weighting;  // unit 2-norm
  std::size_t iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  double grad_norm = 0.0;
  std::size_t evaluations = 0;
  std::vector<TraceRecord> trace;
};

struct MultistartResult {
  SolveResult best;
  std::size_t best_run = 0;
  std::vector<double> all_lambdas;
  std::vector<SolveStatus> statuses;
  std::optional<double> accuracy_rate;  // with a reference value
  std::size_t total_iterations = 0;
  /// Other runs within 1e-10 relative of the best value whose weighting
  /// differs from the best one by more than 1e-6.
  std::size_t near_ties = 0;
};

/// Normalized vector of independent standard normals.
std::vector<double> random_unit_sphere(std::size_t n, std::mt19937_64& rng);

/// Generator for run `run_index` of a multistart seeded with `seed`.
std::mt19937_64 run_rng(std::uint64_t seed, std::size_t run_index);

/// Hager-Zhang type ascent direction p = g + max(0, beta) d_prev. An empty
/// history gives p = g, and so does any direction failing the sufficient-ascent
/// or boundedness guarantees in floating point.
std::vector<double> cg_direction(std::span<const double> g, std::span<const double> d_prev,
                                 std::span<const double> y_prev, const SolverConfig& cfg);

/// The Cayley-transform iterate x(alpha) on the unit sphere, renormalized.
std::vector<double> cayley_step(std::span<const double> x, std::span<const double> p, double alpha);

/// Closed-form ||x(alpha) - x|| for a unit x.
double cayley_step_length(std::span<const double> x, std::span<const double> p, double alpha);

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  std::vector<double> x;
  GradientValue eval;
  double delta_f = 0.0;
  double curvature = 0.0;
  std::size_t evaluations = 0;
};

/// Curvilinear search along x(alpha) for a step meeting both Wolfe
/// conditions: f(x(a)) >= f(x) + c1 a g^T p and g(x(a))^T p <= c2 g^T p.
LineSearchResult line_search_wolfe(const SpectralObjective& objective, const SolverConfig& cfg,
                                   const IterateState& state, std::span<const double> p);

/// Single solver run from a unit vector x0. Reports lambda = f(x_final).
SolveResult solve_single(const SpectralObjective& objective, const SolverConfig& cfg,
                         std::span<const double> x0);
SolveResult solve_single(const Hypergraph& graph, const SolverConfig& cfg, std::span<const double> x0);

/// One multistart trial: a seeded random start (redrawn if exactly
/// stationary), a solver run, then the weighting replaced by |x| and lambda by
/// f(|x|).
SolveResult solve_run(const SpectralObjective& objective, const SolverConfig& cfg, std::size_t run_index);

/// cfg.runs independent trials, best value kept. Throws std::runtime_error if
/// every run fails numerically.
MultistartResult solve_multistart(const Hypergraph& graph, const SolverConfig& cfg);

/// p_theta = 1 + 1/(2 theta + 1).
double lagrangian_p(std::size_t theta);

struct LagrangianStep {
  std::size_t theta = 0;
  double p = 0.0;
  double lambda = 0.0;
  double scaled = 0.0;         // lambda / r!
  double simplex_value = 0.0;  // w(|x| / ||x||_1) at the best weighting
  bool converged = false;
};

struct LagrangianResult {
  std::vector<LagrangianStep> steps;
  double estimate = 0.0;  // scaled value at the last theta
};

/// Multistart solves along p_theta, theta = 1..schedule_length.
LagrangianResult lagrangian_approx(const Hypergraph& graph, const SolverConfig& cfg, std::size_t schedule_length);

}  // namespace hyperspec
