#include "hyperspec/csrh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hyperspec {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be a finite number greater than 1");
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw std::invalid_argument("Wolfe constants need 0 < c1 < c2 < 1");
  if (!(tau > 0.25 && tau < 1.0)) throw std::invalid_argument("tau must lie in (1/4, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  if (max_linesearch_steps == 0) throw std::invalid_argument("max_linesearch_steps must be positive");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::reference_reached: return "reference_reached";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::line_search_failure: return "line_search_failure";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

std::vector<double> random_unit_sphere(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw std::invalid_argument("random_unit_sphere: dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  double nrm = 0.0;
  do {
    for (auto& v : x) v = normal(rng);
    nrm = norm2(x);
  } while (!(nrm > 0.0));
  for (auto& v : x) v /= nrm;
  return x;
}

std::mt19937_64 run_rng(std::uint64_t seed, std::size_t run_index) {
  const auto run = static_cast<std::uint64_t>(run_index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> cg_direction(std::span<const double> g, std::span<const double> d_prev,
                                 std::span<const double> y_prev, const SolverConfig& cfg) {
  std::vector<double> p(g.begin(), g.end());
  if (d_prev.empty() || y_prev.empty()) return p;

  const double dy = dot(d_prev, y_prev);
  const double d_norm = norm2(d_prev);
  const double y_norm = norm2(y_prev);
  if (!(std::abs(dy) >= cfg.eps * d_norm * y_norm) || dy == 0.0) return p;

  // beta~ = (tau d ||y||^2 / (d^T y) - y)^T g / (d^T y)
  const double beta_raw = (cfg.tau * dot(d_prev, g) * y_norm * y_norm / dy - dot(y_prev, g)) / dy;
  if (!std::isfinite(beta_raw)) return p;
  const double beta = std::max(0.0, beta_raw);
  if (beta == 0.0) return p;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += beta * d_prev[i];

  const double gg = dot(g, g);
  if (!(dot(p, g) >= cfg.ascent_constant() * gg) || !(norm2(p) <= cfg.direction_bound() * std::sqrt(gg))) {
    p.assign(g.begin(), g.end());
  }
  return p;
}

std::vector<double> cayley_step(std::span<const double> x, std::span<const double> p, double alpha) {
  const double a = alpha * dot(x, p);
  const double b2 = alpha * alpha * dot(p, p);
  const double denom = 4.0 + b2 - a * a;
  if (!(denom > 0.0)) throw std::domain_error("cayley_step: nonpositive denominator");
  const double cx = ((2.0 - a) * (2.0 - a) - b2) / denom;
  const double cp = 4.0 * alpha / denom;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = cx * x[i] + cp * p[i];
  const double nrm = norm2(out);
  for (auto& v : out) v /= nrm;
  return out;
}

double cayley_step_length(std::span<const double> x, std::span<const double> p, double alpha) {
  const double a = alpha * dot(x, p);
  const double b2 = alpha * alpha * dot(p, p);
  const double tangential = std::max(0.0, b2 - a * a);
  return 2.0 * std::sqrt(tangential / (4.0 + tangential));
}

LineSearchResult line_search_wolfe(const SpectralObjective& objective, const SolverConfig& cfg,
                                   const IterateState& state, std::span<const double> p) {
  LineSearchResult out;
  const double slope = dot(state.g, p);
  if (!(slope > 0.0)) return out;

  // Bracket [lo, hi]; phi values are increments over f(x_k).
  double lo = 0.0;
  double phi_lo = 0.0;
  double dphi_lo = slope;
  double hi = std::numeric_limits<double>::infinity();
  double phi_hi = 0.0;
  double alpha = 2.0 / (1.0 + norm2(p));

  for (std::size_t step = 0; step < cfg.max_linesearch_steps; ++step) {
    auto x_trial = cayley_step(state.x, p, alpha);
    auto eval = objective.gradient(x_trial);
    ++out.evaluations;

    double delta = -std::numeric_limits<double>::infinity();
    double curvature = 0.0;
    double dphi = 0.0;
    if (std::isfinite(eval.f) && all_finite(eval.g)) {
      delta = objective.delta(state.x, x_trial);
      curvature = dot(eval.g, p);
      // alpha f'(alpha) = -g(x(alpha))^T x_k, and g(x(alpha))^T x(alpha) = 0.
      dphi = dot(eval.g, difference(x_trial, state.x)) / alpha;
    }

    const bool sufficient = delta >= cfg.c1 * alpha * slope && delta > 0.0;
    if (!sufficient || delta <= phi_lo) {
      hi = alpha;
      phi_hi = delta;
    } else if (curvature <= cfg.c2 * slope) {
      out.ok = true;
      out.alpha = alpha;
      out.x = std::move(x_trial);
      out.eval = std::move(eval);
      out.delta_f = delta;
      out.curvature = curvature;
      return out;
    } else if (dphi > 0.0) {
      lo = alpha;
      phi_lo = delta;
      dphi_lo = dphi;
    } else {
      hi = alpha;
      phi_hi = delta;
    }

    if (!std::isfinite(hi)) {
      alpha *= 2.0;
      continue;
    }
    const double width = hi - lo;
    if (!(width > 1e-15 * hi)) break;
    double next = 0.5 * (lo + hi);
    if (std::isfinite(phi_hi)) {
      // Maximizer of the quadratic through (lo, phi_lo, dphi_lo) and (hi, phi_hi).
      const double curv = phi_hi - phi_lo - dphi_lo * width;
      if (curv < 0.0) next = lo - dphi_lo * width * width / (2.0 * curv);
    }
    alpha = std::clamp(next, lo + 0.1 * width, hi - 0.1 * width);
  }
  return out;
}

SolveResult solve_single(const SpectralObjective& objective, const SolverConfig& cfg, std::span<const double> x0) {
  cfg.validate();
  if (std::abs(objective.p() - cfg.p) > 0.0) throw std::invalid_argument("objective and config disagree on p");
  if (x0.size() != objective.dimension()) throw std::invalid_argument("start vector has wrong dimension");
  const double x0_norm = norm2(x0);
  if (!(std::abs(x0_norm - 1.0) <= 1e-10)) throw std::invalid_argument("start vector must have unit 2-norm");

  SolveResult result;
  IterateState state;
  state.x.assign(x0.begin(), x0.end());
  auto eval = objective.gradient(state.x);
  ++result.evaluations;
  state.f = eval.f;
  state.g = std::move(eval.g);

  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.converged = status == SolveStatus::converged || status == SolveStatus::reference_reached;
    result.iterations = state.k;
    result.lambda = state.f;
    result.grad_norm = norm2(state.g);
    result.weighting = std::move(state.x);
    return result;
  };

  while (true) {
    if (!std::isfinite(state.f) || !all_finite(state.g)) return finish(SolveStatus::numerical_failure);
    const double grad_norm = norm2(state.g);
    if (grad_norm <= cfg.grad_tol) return finish(SolveStatus::converged);
    if (cfg.reference && std::abs(state.f - *cfg.reference) <= 1e-12) {
      return finish(SolveStatus::reference_reached);
    }
    if (state.k >= cfg.max_iter) return finish(SolveStatus::max_iterations);

    std::vector<double> y_prev;
    if (!state.g_prev.empty()) y_prev = difference(state.g, state.g_prev);
    auto p = cg_direction(state.g, state.d_prev, y_prev, cfg);
    bool restarted = false;
    auto ls = line_search_wolfe(objective, cfg, state, p);
    result.evaluations += ls.evaluations;
    if (!ls.ok && p != state.g) {
      p = state.g;
      restarted = true;
      ls = line_search_wolfe(objective, cfg, state, p);
      result.evaluations += ls.evaluations;
    }
    if (!ls.ok) return finish(SolveStatus::line_search_failure);

    auto d = difference(ls.x, state.x);
    if (cfg.record_trace) {
      TraceRecord rec;
      rec.k = state.k;
      rec.f = state.f;
      rec.delta_f = ls.delta_f;
      rec.grad_norm = grad_norm;
      rec.alpha = ls.alpha;
      rec.slope = dot(state.g, p);
      rec.direction_norm = norm2(p);
      rec.curvature = ls.curvature;
      rec.step_length = norm2(d);
      rec.norm_drift = std::abs(norm2(ls.x) - 1.0);
      rec.restarted = restarted;
      if (cfg.record_iterates) {
        rec.x = state.x;
        rec.direction = p;
      }
      result.trace.push_back(std::move(rec));
    }

    state.d_prev = std::move(d);
    state.g_prev = std::move(state.g);
    state.x = std::move(ls.x);
    state.g = std::move(ls.eval.g);
    state.f = ls.eval.f;
    ++state.k;
  }
}

SolveResult solve_single(const Hypergraph& graph, const SolverConfig& cfg, std::span<const double> x0) {
  const SpectralObjective objective(graph, cfg.p);
  return solve_single(objective, cfg, x0);
}

SolveResult solve_run(const SpectralObjective& objective, const SolverConfig& cfg, std::size_t run_index) {
  auto rng = run_rng(cfg.seed, run_index);
  auto x0 = random_unit_sphere(objective.dimension(), rng);
  // A start that is exactly stationary is redrawn a few times before accepted.
  for (int attempt = 0; attempt < 5; ++attempt) {
    const auto eval = objective.gradient(x0);
    if (norm2(eval.g) > std::numeric_limits<double>::min()) break;
    x0 = random_unit_sphere(objective.dimension(), rng);
  }

  auto result = solve_single(objective, cfg, x0);
  if (result.status == SolveStatus::numerical_failure) return result;
  for (auto& v : result.weighting) v = std::abs(v);
  result.lambda = objective.value(result.weighting).f;
  return result;
}

MultistartResult solve_multistart(const Hypergraph& graph, const SolverConfig& cfg) {
  cfg.validate();
  const SpectralObjective objective(graph, cfg.p);
  const std::size_t runs = cfg.runs;

  MultistartResult out;
  out.all_lambdas.assign(runs, 0.0);
  out.statuses.assign(runs, SolveStatus::numerical_failure);
  std::vector<std::size_t> iterations(runs, 0);

  // Only runs that could end up within the tie tolerance of the best keep
  // their full result.
  constexpr double kTieTol = 1e-10;
  std::mutex mutex;
  double best_so_far = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, SolveResult>> leaders;

  auto within_tie = [](double value, double best) { return value >= best - kTieTol * std::abs(best); };

  auto do_run = [&](std::size_t run) {
    auto result = solve_run(objective, cfg, run);
    out.all_lambdas[run] = result.lambda;
    out.statuses[run] = result.status;
    iterations[run] = result.iterations;
    if (result.status == SolveStatus::numerical_failure) return;
    std::lock_guard lock(mutex);
    if (!within_tie(result.lambda, best_so_far)) return;
    best_so_far = std::max(best_so_far, result.lambda);
    leaders.emplace_back(run, std::move(result));
    std::erase_if(leaders, [&](const auto& entry) { return !within_tie(entry.second.lambda, best_so_far); });
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(runs)));
  if (workers == 1) {
    for (std::size_t run = 0; run < runs; ++run) do_run(run);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t run = next++; run < runs; run = next++) do_run(run);
      });
    }
  }

  if (leaders.empty()) throw std::runtime_error("all runs failed numerically");

  std::sort(leaders.begin(), leaders.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t best_index = 0;
  for (std::size_t i = 1; i < leaders.size(); ++i) {
    if (leaders[i].second.lambda > leaders[best_index].second.lambda) best_index = i;
  }
  const auto& best_weighting = leaders[best_index].second.weighting;
  for (std::size_t i = 0; i < leaders.size(); ++i) {
    if (i == best_index) continue;
    if (norm2(difference(leaders[i].second.weighting, best_weighting)) > 1e-6) ++out.near_ties;
  }
  out.best_run = leaders[best_index].first;
  out.best = std::move(leaders[best_index].second);

  for (const auto it : iterations) out.total_iterations += it;
  if (cfg.reference) {
    const double ref = *cfg.reference;
    std::size_t hits = 0;
    for (std::size_t run = 0; run < runs; ++run) {
      if (out.statuses[run] != SolveStatus::numerical_failure &&
          std::abs(out.all_lambdas[run] - ref) <= 1e-8 * std::abs(ref)) {
        ++hits;
      }
    }
    out.accuracy_rate = static_cast<double>(hits) / static_cast<double>(runs);
  }
  return out;
}

double lagrangian_p(std::size_t theta) { return 1.0 + 1.0 / (2.0 * static_cast<double>(theta) + 1.0); }

LagrangianResult lagrangian_approx(const Hypergraph& graph, const SolverConfig& cfg, std::size_t schedule_length) {
  if (schedule_length == 0) throw std::invalid_argument("schedule length must be at least 1");
  const double r_factorial = factorial(graph.rank());
  LagrangianResult out;
  for (std::size_t theta = 1; theta <= schedule_length; ++theta) {
    SolverConfig step_cfg = cfg;
    step_cfg.p = lagrangian_p(theta);
    const auto ms = solve_multistart(graph, step_cfg);

    std::vector<double> simplex = ms.best.weighting;
    double total = 0.0;
    for (const double v : simplex) total += v;
    for (auto& v : simplex) v /= total;

    LagrangianStep step;
    step.theta = theta;
    step.p = step_cfg.p;
    step.lambda = ms.best.lambda;
    step.scaled = ms.best.lambda / r_factorial;
    step.simplex_value = weight_poly(graph, simplex);
    step.converged = ms.best.converged;
    out.steps.push_back(step);
  }
  out.estimate = out.steps.back().scaled;
  return out;
}

}  // namespace hyperspec
