#include "selftest.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include "hyperspec/hyperspec.hpp"

namespace hyperspec::selftest {

namespace {

using Clock = std::chrono::steady_clock;

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_err(double value, double ref) { return std::abs(value - ref) / std::abs(ref); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Random r-graph on n vertices: each r-subset kept with probability 1/2,
/// weights in [0.5, 1.5).
Hypergraph random_graph(std::size_t n, std::size_t r, std::mt19937_64& rng) {
  const auto complete = gen_complete(n, r);
  std::bernoulli_distribution keep(0.5);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  Hypergraph out(n, r);
  for (std::size_t e = 0; e < complete.num_edges(); ++e) {
    if (keep(rng)) out.add_edge(complete.edge(e).vertices, weight(rng));
  }
  if (out.num_edges() == 0) out.add_edge(complete.edge(0).vertices, weight(rng));
  return out;
}

// 1. Beta-star closed forms.
CaseResult beta_star_case() {
  CaseResult res{"beta-star", true, 0.0, {}};
  struct Instance {
    std::size_t r, m;
    double p;
  };
  for (const auto& inst : {Instance{3, 10, 3.0}, Instance{3, 200, 3.0}, Instance{6, 4, 4.0}, Instance{3, 10, 2.0}}) {
    const auto t0 = Clock::now();
    const auto graph = gen_beta_star(inst.r, inst.m);
    const double ref = beta_star_value(inst.r, inst.m, inst.p).value;
    SolverConfig cfg;
    cfg.p = inst.p;
    cfg.runs = 100;
    cfg.reference = ref;
    const auto ms = solve_multistart(graph, cfg);
    const double err = rel_err(ms.best.lambda, ref);
    const double secs = seconds_since(t0);
    const bool ok = err <= 1e-8 && secs <= 30.0;
    res.passed = res.passed && ok;
    res.details.push_back(format("(r=%zu, m=%zu, p=%g) lambda=%.15g ref=%.15g rel.err=%.2e accu=%.2f time=%.2fs %s",
                                 inst.r, inst.m, inst.p, ms.best.lambda, ref, err, *ms.accuracy_rate, secs,
                                 ok ? "ok" : "FAIL"));
  }
  return res;
}

// 2. Loose paths.
CaseResult loose_path_case() {
  CaseResult res{"loose-path", true, 0.0, {}};
  for (const std::size_t m : {3, 4}) {
    const auto graph = gen_loose_path(4, m);
    const double ref = loose_path_value(4, m).value;
    SolverConfig cfg;
    cfg.p = 4.0;
    cfg.runs = 100;
    cfg.reference = ref;
    const auto ms = solve_multistart(graph, cfg);
    const double err = rel_err(ms.best.lambda, ref);
    const bool ok = err <= 1e-8 && *ms.accuracy_rate >= 0.30;
    res.passed = res.passed && ok;
    res.details.push_back(format("(r=4, m=%zu) lambda=%.15g ref=%.15g rel.err=%.2e accu=%.2f (>= 0.30) %s", m,
                                 ms.best.lambda, ref, err, *ms.accuracy_rate, ok ? "ok" : "FAIL"));
  }
  return res;
}

// 3. Tetrahedron largest Z-eigenvalue and the success-frequency curve.
CaseResult tetrahedron_case() {
  CaseResult res{"tetrahedron-z", true, 0.0, {}};
  const auto graph = gen_complete(4, 3);
  const double ref = 3.0;
  SolverConfig cfg;
  cfg.p = 2.0;
  cfg.runs = 100;
  cfg.reference = ref;
  const auto ms = solve_multistart(graph, cfg);
  const bool best_ok = std::abs(ms.best.lambda - ref) <= 3e-8;
  res.details.push_back(format("best-of-100 lambda^(2)=%.15g vs reference %.1f (|err|=%.2e, tol 3e-8), accu=%.2f %s",
                               ms.best.lambda, ref, std::abs(ms.best.lambda - ref), *ms.accuracy_rate,
                               best_ok ? "ok" : "FAIL"));

  // Each experiment counts single-run trials until one reaches the reference.
  constexpr std::size_t kExperiments = 1000;
  constexpr std::size_t kMaxTrials = 1000;
  const SpectralObjective objective(graph, 2.0);
  std::vector<std::size_t> occurrences(kMaxTrials + 1, 0);
  for (std::size_t e = 0; e < kExperiments; ++e) {
    SolverConfig trial_cfg = cfg;
    trial_cfg.seed = 1'000'000 + e;
    for (std::size_t t = 1; t <= kMaxTrials; ++t) {
      const auto run = solve_run(objective, trial_cfg, t - 1);
      if (rel_err(run.lambda, ref) <= 1e-8) {
        ++occurrences[t];
        break;
      }
    }
  }
  std::vector<double> freq(kMaxTrials + 1, 0.0);
  std::size_t cumulative = 0;
  bool monotone = true;
  for (std::size_t i = 1; i <= kMaxTrials; ++i) {
    cumulative += occurrences[i];
    freq[i] = static_cast<double>(cumulative) / kExperiments;
    if (freq[i] < freq[i - 1]) monotone = false;
  }
  std::size_t first_above = 0;
  for (std::size_t i = 1; i <= kMaxTrials; ++i) {
    if (freq[i] > 0.99) {
      first_above = i;
      break;
    }
  }
  const bool curve_ok = monotone && first_above > 0 && first_above <= 40;
  res.details.push_back(format("success frequency over %zu experiments: nu_1=%.3f nu_5=%.3f nu_10=%.3f nu_40=%.3f; "
                               "non-decreasing=%s, first trial count with nu > 0.99: %zu (<= 40) %s",
                               kExperiments, freq[1], freq[5], freq[10], freq[40], monotone ? "yes" : "no",
                               first_above, curve_ok ? "ok" : "FAIL"));
  res.passed = best_ok && curve_ok;
  return res;
}

// 4. Lagrangian approximation along p_theta.
CaseResult lagrangian_case() {
  CaseResult res{"lagrangian", true, 0.0, {}};
  for (const std::size_t n : {4, 10}) {
    const auto graph = gen_complete(n, 3);
    const double lagrangian = complete_lagrangian(n, 3).value;
    SolverConfig cfg;
    cfg.runs = 100;
    const auto approx = lagrangian_approx(graph, cfg, 10);
    auto err_at = [&](std::size_t theta) { return std::abs(approx.steps[theta - 1].scaled - lagrangian); };
    const double e1 = err_at(1), e4 = err_at(4), e10 = err_at(10);
    const bool monotone = e4 <= e1 && e10 <= e4;
    const bool close = e10 <= 1e-2;
    res.passed = res.passed && monotone && close;
    res.details.push_back(format("C(%zu,3): lagrangian=%.6g; |lambda/r! - L| at theta=1,4,10: %.5f, %.5f, %.5f; "
                                 "nonincreasing=%s; theta=10 error <= 1e-2: %s; simplex-normalized value=%.8f",
                                 n, lagrangian, e1, e4, e10, monotone ? "yes" : "no", close ? "yes" : "NO",
                                 approx.steps.back().simplex_value));
  }
  return res;
}

// 5. Gradient against central finite differences.
CaseResult gradient_fd_case() {
  CaseResult res{"gradient-fd", true, 0.0, {}};
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<std::size_t> pick_n(3, 10);
  std::uniform_int_distribution<std::size_t> pick_r(2, 4);
  std::uniform_real_distribution<double> magnitude(0.2, 1.0);
  std::bernoulli_distribution negative(0.3);
  const double ps[] = {1.5, 2.0, 3.0, 8.0};
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (int probe = 0; probe < 100; ++probe) {
    const std::size_t n = pick_n(rng);
    const std::size_t r = std::min(pick_r(rng), n);
    const auto graph = random_graph(n, r, rng);
    const double p = ps[probe % 4];
    std::vector<double> x(n);
    for (auto& v : x) v = negative(rng) ? -magnitude(rng) : magnitude(rng);

    const auto grad = objective_grad(graph, x, p);
    std::vector<double> fd(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (objective(graph, xp, p).f - objective(graph, xm, p).f) / (2.0 * h);
    }
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = grad.g[i] - fd[i];
    const double err = norm(diff) / norm(grad.g);
    worst = std::max(worst, err);
  }
  res.passed = worst <= 1e-6;
  res.details.push_back(format("100 probes (n <= 10, p in {1.5, 2, 3, 8}), h=1e-6: max relative error %.2e (tol 1e-6)",
                               worst));
  return res;
}

// 6. Per-iteration invariants, re-derived from stored iterates.
CaseResult iteration_invariants_case() {
  CaseResult res{"iteration-invariants", true, 0.0, {}};
  struct Instance {
    std::string name;
    Hypergraph graph;
    double p;
  };
  std::mt19937_64 rng(77);
  std::vector<Instance> instances;
  instances.push_back({"beta-star(3,10) p=3", gen_beta_star(3, 10), 3.0});
  instances.push_back({"beta-star(6,4) p=4", gen_beta_star(6, 4), 4.0});
  instances.push_back({"loose-path(4,3) p=4", gen_loose_path(4, 3), 4.0});
  instances.push_back({"complete(4,3) p=2", gen_complete(4, 3), 2.0});
  instances.push_back({"complete(5,3) p=1.5", gen_complete(5, 3), 1.5});
  instances.push_back({"random(7,3) p=2.5", random_graph(7, 3, rng), 2.5});
  instances.push_back({"random(6,4) p=5", random_graph(6, 4, rng), 5.0});

  std::size_t steps_checked = 0;
  for (const auto& inst : instances) {
    SolverConfig cfg;
    cfg.p = inst.p;
    cfg.record_trace = true;
    cfg.record_iterates = true;
    const double ascent = cfg.ascent_constant();
    const double bound = cfg.direction_bound();
    std::size_t failures = 0;
    double worst_drift = 0.0, worst_len = 0.0;
    std::string first_failure;
    auto fail = [&](std::size_t k, const std::string& what) {
      if (failures++ == 0) first_failure = format("k=%zu: ", k) + what;
    };

    for (std::size_t start = 0; start < 5; ++start) {
      auto start_rng = run_rng(99, start);
      const auto x0 = random_unit_sphere(inst.graph.num_vertices(), start_rng);
      const auto run = solve_single(inst.graph, cfg, x0);
      const auto& trace = run.trace;
      for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto& rec = trace[k];
        const auto& xk = rec.x;
        const auto& pk = rec.direction;
        const auto& xnext = (k + 1 < trace.size()) ? trace[k + 1].x : run.weighting;
        const auto gk = objective_grad(inst.graph, xk, inst.p).g;
        const auto gnext = objective_grad(inst.graph, xnext, inst.p).g;
        const double gg = dot(gk, gk);
        const double slope = dot(gk, pk);

        const double drift = std::max(std::abs(norm(xk) - 1.0), std::abs(norm(xnext) - 1.0));
        worst_drift = std::max(worst_drift, drift);
        if (drift > 1e-12) fail(k, format("unit-norm drift %.2e", drift));
        if (!(slope >= ascent * gg)) fail(k, "sufficient ascent violated");
        if (!(norm(pk) <= bound * std::sqrt(gg))) fail(k, "direction bound violated");
        const double delta = objective_delta(inst.graph, xk, xnext, inst.p);
        if (!(delta >= cfg.c1 * rec.alpha * slope)) fail(k, "sufficient increase violated");
        if (!(dot(gnext, pk) <= cfg.c2 * slope)) fail(k, "curvature condition violated");
        if (!(delta > 0.0)) fail(k, format("f not strictly increasing (delta %.3e)", delta));
        std::vector<double> d(xk.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = xnext[i] - xk[i];
        const double len_err = std::abs(norm(d) - cayley_step_length(xk, pk, rec.alpha));
        worst_len = std::max(worst_len, len_err);
        if (len_err > 1e-10) fail(k, format("step length mismatch %.2e", len_err));
        ++steps_checked;
      }
    }
    res.passed = res.passed && failures == 0;
    res.details.push_back(format("%s: 5 runs, %zu violations, max drift %.1e, max step-length error %.1e%s%s",
                                 inst.name.c_str(), failures, worst_drift, worst_len, failures ? "; first: " : "",
                                 first_failure.c_str()));
  }
  res.details.push_back(format("%zu accepted steps checked", steps_checked));
  return res;
}

// 7. Brute-force oracle agreement.
CaseResult brute_force_case() {
  CaseResult res{"brute-force", true, 0.0, {}};
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::size_t> pick_n(4, 6);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto graph = random_graph(pick_n(rng), 3, rng);
    for (const double p : {2.0, 3.0}) {
      SolverConfig cfg;
      cfg.p = p;
      cfg.seed = static_cast<std::uint64_t>(k);
      const double solver = solve_multistart(graph, cfg).best.lambda;
      const double oracle = brute_force_radius(graph, p, 2000, 1000 + static_cast<std::uint64_t>(k));
      worst = std::max(worst, std::abs(solver - oracle));
    }
  }
  res.passed = worst <= 1e-4;
  res.details.push_back(format("20 random 3-graphs (n in 4..6) x p in {2, 3}: max |multistart - brute force| = %.2e "
                               "(tol 1e-4)",
                               worst));
  return res;
}

long peak_rss_kib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

CaseResult scale_case(std::size_t m, double time_limit, const std::string& name) {
  CaseResult res{name, true, 0.0, {}};
  const long rss_before = peak_rss_kib();
  const auto t0 = Clock::now();
  const auto graph = gen_beta_star(3, m);
  const std::size_t n = graph.num_vertices();
  SolverConfig cfg;
  cfg.p = 3.0;
  const SpectralObjective objective(graph, cfg.p);
  const auto run = solve_run(objective, cfg, 0);
  const double secs = seconds_since(t0);
  const double ref = beta_star_value(3, m, 3.0).value;
  const long rss_growth_kib = peak_rss_kib() - rss_before;
  // Generous linear budget: 1 KiB per stored vertex or edge slot.
  const double budget_kib = static_cast<double>(n + 3 * m);
  const bool ok = run.converged && run.grad_norm <= 1e-8 && run.iterations <= 1000 && secs <= time_limit &&
                  static_cast<double>(rss_growth_kib) <= budget_kib;
  res.passed = ok;
  res.details.push_back(format("beta-star r=3, n=%zu, p=3: status=%s, ||g||=%.2e, iterations=%zu, time=%.2fs "
                               "(<= %.0fs), lambda rel.err=%.2e, peak RSS growth %ld KiB (budget %.0f KiB)",
                               n, to_string(run.status).c_str(), run.grad_norm, run.iterations, secs, time_limit,
                               rel_err(run.lambda, ref), rss_growth_kib, budget_kib));
  return res;
}

// 9. Ranking on two disjoint weighted edges.
CaseResult ranking_case() {
  CaseResult res{"ranking", true, 0.0, {}};
  Hypergraph graph(6, 3);
  graph.add_edge({0, 1, 2}, 1.0);
  graph.add_edge({3, 4, 5}, 1.5);

  {
    SolverConfig cfg;
    cfg.p = 4.0 / 3.0;
    cfg.runs = 10;
    const auto report = rank_vertices(graph, cfg, 0);
    std::set<std::size_t> top;
    for (std::size_t i = 0; i < 3; ++i) top.insert(report.entries[i].vertex);
    const double ratio = report.entries[2].impact_factor / report.entries[3].impact_factor;
    const auto oracle = brute_force_search(graph, cfg.p, 200);
    const auto oracle_rank = make_ranking(oracle.weighting, 0);
    std::set<std::size_t> oracle_top;
    for (std::size_t i = 0; i < 3; ++i) oracle_top.insert(oracle_rank.entries[i].vertex);
    const bool ok = top == std::set<std::size_t>{4, 5, 6} && ratio >= 1e4 && oracle_top == top &&
                    std::abs(report.lambda - oracle.value) <= 1e-6;
    res.passed = res.passed && ok;
    res.details.push_back(format("p=4/3: top-3 = {%zu, %zu, %zu}, factor ratio top3/rest = %.2e (>= 1e4), "
                                 "brute-force top-3 agrees: %s, lambda %.12g vs oracle %.12g %s",
                                 report.entries[0].vertex, report.entries[1].vertex, report.entries[2].vertex, ratio,
                                 oracle_top == top ? "yes" : "no", report.lambda, oracle.value, ok ? "ok" : "FAIL"));
  }
  {
    SolverConfig cfg;
    cfg.p = 16.0;
    cfg.runs = 10;
    const auto report = rank_vertices(graph, cfg, 0);
    const double hi = report.entries.front().impact_factor;
    const double lo = report.entries.back().impact_factor;
    const auto ms = solve_multistart(graph, cfg);
    const auto oracle = brute_force_search(graph, cfg.p, 200);
    std::vector<double> diff(6);
    for (std::size_t i = 0; i < 6; ++i) diff[i] = ms.best.weighting[i] - oracle.weighting[i];
    const bool ok = lo >= 0.8 * hi && norm(diff) <= 1e-4;
    res.passed = res.passed && ok;
    res.details.push_back(format("p=16: factors in [%.4f, %.4f], spread %.1f%% (<= 20%%), "
                                 "||weighting - brute-force weighting|| = %.1e %s",
                                 lo, hi, 100.0 * (hi - lo) / hi, norm(diff), ok ? "ok" : "FAIL"));
  }
  return res;
}

}  // namespace

const std::vector<Case>& all_cases() {
  static const std::vector<Case> cases = {
      {"beta-star", "1. beta-star closed forms, best of 100 runs, rel. err <= 1e-8", true, beta_star_case},
      {"loose-path", "2. loose paths, rel. err <= 1e-8, per-run success >= 0.30", true, loose_path_case},
      {"tetrahedron-z", "3. tetrahedron Z-case and success-frequency curve", true, tetrahedron_case},
      {"lagrangian", "4. Lagrangian approximation along p_theta", true, lagrangian_case},
      {"gradient-fd", "5. gradient vs central finite differences", true, gradient_fd_case},
      {"iteration-invariants", "6. per-iteration invariants on tracked runs", true, iteration_invariants_case},
      {"brute-force", "7. multistart vs brute-force oracle", true, brute_force_case},
      {"scale", "8. beta-star with 20,001 vertices, single run", true,
       [] { return scale_case(10'000, 60.0, "scale"); }},
      {"ranking", "9. ranking on two disjoint weighted edges", true, ranking_case},
      {"scale-long", "optional: beta-star with 200,001 vertices, single run", false,
       [] { return scale_case(100'000, 1800.0, "scale-long"); }},
  };
  return cases;
}

bool run_cases(const std::vector<std::string>& names, std::ostream& out, bool verbose) {
  std::vector<const Case*> selected;
  if (names.empty()) {
    for (const auto& c : all_cases()) {
      if (c.in_default_suite) selected.push_back(&c);
    }
  } else {
    for (const auto& name : names) {
      auto it = std::find_if(all_cases().begin(), all_cases().end(), [&](const Case& c) { return c.name == name; });
      if (it == all_cases().end()) throw std::invalid_argument("unknown self-test case \"" + name + "\"");
      selected.push_back(&*it);
    }
  }

  bool all_passed = true;
  std::size_t passed = 0;
  for (const auto* c : selected) {
    const auto t0 = Clock::now();
    auto result = c->run();
    result.seconds = seconds_since(t0);
    all_passed = all_passed && result.passed;
    passed += result.passed ? 1 : 0;
    out << (result.passed ? "[PASS] " : "[FAIL] ") << c->summary << format(" (%.2fs)", result.seconds) << '\n';
    if (verbose) {
      for (const auto& line : result.details) out << "       " << line << '\n';
    }
    out.flush();
  }
  out << passed << '/' << selected.size() << " cases passed\n";
  return all_passed;
}

}  // namespace hyperspec::selftest
