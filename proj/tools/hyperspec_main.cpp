// hyperspec: p-spectral radius solver front end.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperspec/hyperspec.hpp"
#include "selftest.hpp"

using nlohmann::ordered_json;
using namespace hyperspec;

namespace {

struct CommonOptions {
  std::string p_text = "2";
  std::size_t runs = 100;
  double tol = 1e-8;
  std::size_t max_iter = 1000;
  std::uint64_t seed = 0;
  bool deterministic = false;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
  std::optional<double> reference;
};

unsigned default_threads() {
  if (const char* env = std::getenv("HYPERSPEC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void add_solver_flags(CLI::App* cmd, CommonOptions& o, bool with_p, std::size_t default_runs) {
  o.runs = default_runs;
  if (with_p) cmd->add_option("--p", o.p_text, "norm exponent p > 1, decimal or a/b")->capture_default_str();
  cmd->add_option("--runs", o.runs, "random starts")->capture_default_str();
  cmd->add_option("--tol", o.tol, "gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "iterations per run")->capture_default_str();
  cmd->add_option("--seed", o.seed, "base seed")->capture_default_str();
  cmd->add_flag("--deterministic", o.deterministic, "omit wall time so output bytes are reproducible");
  cmd->add_option("--threads", o.threads, "worker threads (default $HYPERSPEC_THREADS or 1)")
      ->default_val(default_threads());
  cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
  cmd->add_option("--format", o.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--reference", o.reference, "known optimum; stops runs that reach it and reports the accuracy rate");
}

SolverConfig make_config(const CommonOptions& o) {
  SolverConfig cfg;
  cfg.p = parse_real_or_fraction(o.p_text);
  cfg.runs = o.runs;
  cfg.grad_tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.seed = o.seed;
  cfg.deterministic = o.deterministic;
  cfg.threads = o.threads;
  cfg.reference = o.reference;
  cfg.validate();
  return cfg;
}

void emit(const CommonOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw std::runtime_error("cannot open output file: " + o.out);
  file << text;
}

std::string to_csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

int cmd_solve(const std::string& path, const CommonOptions& o, bool emit_weighting) {
  const auto graph = read_edge_list_file(path);
  const auto cfg = make_config(o);
  const auto t0 = std::chrono::steady_clock::now();
  const auto ms = solve_multistart(graph, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::size_t converged_runs = 0;
  std::size_t failed_runs = 0;
  for (const auto s : ms.statuses) {
    if (s == SolveStatus::converged || s == SolveStatus::reference_reached) ++converged_runs;
    if (s == SolveStatus::line_search_failure || s == SolveStatus::numerical_failure) ++failed_runs;
  }

  if (o.format == "json") {
    ordered_json j;
    j["lambda"] = ms.best.lambda;
    j["p"] = cfg.p;
    j["r"] = graph.rank();
    j["n"] = graph.num_vertices();
    j["m"] = graph.num_edges();
    j["runs"] = cfg.runs;
    j["best_run"] = ms.best_run;
    j["converged"] = ms.best.converged;
    j["iterations"] = ms.best.iterations;
    j["status"] = to_string(ms.best.status);
    j["grad_norm"] = ms.best.grad_norm;
    j["converged_runs"] = converged_runs;
    j["failed_runs"] = failed_runs;
    j["total_iterations"] = ms.total_iterations;
    j["near_ties"] = ms.near_ties;
    if (ms.accuracy_rate) j["accuracy_rate"] = *ms.accuracy_rate;
    if (!cfg.deterministic) j["wall_time_s"] = secs;
    if (emit_weighting) j["weighting"] = ms.best.weighting;
    emit(o, j.dump(2) + "\n");
  } else if (o.format == "csv") {
    std::ostringstream s;
    s << "run,lambda,status\n";
    for (std::size_t i = 0; i < ms.all_lambdas.size(); ++i) {
      s << i << ',' << to_csv_number(ms.all_lambdas[i]) << ',' << to_string(ms.statuses[i]) << '\n';
    }
    emit(o, s.str());
  } else {
    std::ostringstream s;
    s << std::setprecision(15);
    s << "lambda      " << ms.best.lambda << '\n'
      << "p           " << cfg.p << '\n'
      << "graph       r=" << graph.rank() << " n=" << graph.num_vertices() << " m=" << graph.num_edges() << '\n'
      << "runs        " << cfg.runs << " (" << converged_runs << " converged, " << failed_runs << " failed)\n"
      << "best run    " << ms.best_run << ", " << ms.best.iterations << " iterations, "
      << to_string(ms.best.status) << '\n';
    if (ms.accuracy_rate) s << "accuracy    " << *ms.accuracy_rate << '\n';
    if (ms.near_ties > 0) s << "near ties   " << ms.near_ties << '\n';
    if (!cfg.deterministic) s << "wall time   " << secs << " s\n";
    emit(o, s.str());
  }
  return 0;
}

int cmd_rank(const std::string& path, const CommonOptions& o, std::size_t top) {
  const auto graph = read_edge_list_file(path);
  const auto cfg = make_config(o);
  const auto report = rank_vertices(graph, cfg, top);

  if (o.format == "json") {
    ordered_json j;
    j["p"] = report.p;
    j["lambda"] = report.lambda;
    j["runs"] = report.runs;
    j["near_ties"] = report.near_ties;
    auto& arr = j["ranking"] = ordered_json::array();
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      arr.push_back({{"rank", i + 1}, {"vertex", report.entries[i].vertex},
                     {"impact_factor", report.entries[i].impact_factor}});
    }
    emit(o, j.dump(2) + "\n");
  } else if (o.format == "csv") {
    std::ostringstream s;
    s << "rank,vertex,impact_factor\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      s << i + 1 << ',' << report.entries[i].vertex << ',' << to_csv_number(report.entries[i].impact_factor) << '\n';
    }
    emit(o, s.str());
  } else {
    std::ostringstream s;
    s << std::setprecision(10) << "p = " << report.p << ", lambda = " << report.lambda << ", runs = " << report.runs
      << '\n';
    if (report.near_ties > 0) s << "warning: " << report.near_ties << " distinct near-tied weightings\n";
    s << "rank  vertex  impact factor\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      s << std::setw(4) << i + 1 << "  " << std::setw(6) << report.entries[i].vertex << "  "
        << report.entries[i].impact_factor << '\n';
    }
    emit(o, s.str());
  }
  return 0;
}

int cmd_lagrangian(const std::string& path, const CommonOptions& o, std::size_t schedule) {
  const auto graph = read_edge_list_file(path);
  const auto cfg = make_config(o);
  const auto result = lagrangian_approx(graph, cfg, schedule);

  if (o.format == "json") {
    ordered_json j;
    auto& arr = j["steps"] = ordered_json::array();
    for (const auto& s : result.steps) {
      arr.push_back({{"theta", s.theta}, {"p", s.p}, {"lambda", s.lambda}, {"scaled", s.scaled},
                     {"simplex_value", s.simplex_value}, {"converged", s.converged}});
    }
    j["estimate"] = result.estimate;
    emit(o, j.dump(2) + "\n");
  } else if (o.format == "csv") {
    std::ostringstream s;
    s << "theta,p,lambda,scaled,simplex_value\n";
    for (const auto& st : result.steps) {
      s << st.theta << ',' << to_csv_number(st.p) << ',' << to_csv_number(st.lambda) << ','
        << to_csv_number(st.scaled) << ',' << to_csv_number(st.simplex_value) << '\n';
    }
    emit(o, s.str());
  } else {
    std::ostringstream s;
    s << std::setprecision(10) << "theta  p             lambda        lambda/r!     simplex value\n";
    for (const auto& st : result.steps) {
      s << std::setw(5) << st.theta << "  " << std::setw(12) << st.p << "  " << std::setw(12) << st.lambda << "  "
        << std::setw(12) << st.scaled << "  " << st.simplex_value << '\n';
    }
    s << "estimate " << result.estimate << '\n';
    emit(o, s.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-spectral radius of uniform hypergraphs"};
  app.require_subcommand(1);

  std::string graph_path;
  CommonOptions solve_opts, rank_opts, lag_opts;
  bool emit_weighting = false;
  std::size_t top = 0;
  std::size_t schedule = 10;

  auto* solve = app.add_subcommand("solve", "best-of-runs p-spectral radius");
  solve->add_option("graph", graph_path, "edge-list file")->required()->check(CLI::ExistingFile);
  add_solver_flags(solve, solve_opts, true, 100);
  solve->add_flag("--emit-weighting", emit_weighting, "include the best weighting in JSON output");

  auto* rank = app.add_subcommand("rank", "vertex ranking by impact factor");
  rank->add_option("graph", graph_path, "edge-list file")->required()->check(CLI::ExistingFile);
  add_solver_flags(rank, rank_opts, true, 10);
  rank->add_option("--top", top, "number of vertices to report (0 = all)")->capture_default_str();

  auto* lag = app.add_subcommand("lagrangian", "Lagrangian estimate along p_theta = 1 + 1/(2 theta + 1)");
  lag->add_option("graph", graph_path, "edge-list file")->required()->check(CLI::ExistingFile);
  add_solver_flags(lag, lag_opts, false, 100);
  lag->add_option("--V", schedule, "schedule length")->check(CLI::PositiveNumber)->capture_default_str();

  auto* gen = app.add_subcommand("gen", "write a generated hypergraph");
  std::string family;
  std::size_t gen_r = 3, gen_m = 1, gen_n = 0;
  std::string gen_out;
  gen->add_option("family", family, "beta-star, loose-path or complete")
      ->required()
      ->check(CLI::IsMember({"beta-star", "loose-path", "complete"}));
  gen->add_option("--r", gen_r, "edge size")->capture_default_str();
  gen->add_option("--m", gen_m, "number of edges (beta-star, loose-path)")->capture_default_str();
  gen->add_option("--n", gen_n, "number of vertices (complete)");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  auto* self = app.add_subcommand("selftest", "oracle-vs-solver acceptance suite");
  std::vector<std::string> cases;
  bool list_cases = false;
  self->add_option("--case", cases, "run only these cases");
  self->add_flag("--list", list_cases, "list the available cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(graph_path, solve_opts, emit_weighting);
    if (rank->parsed()) return cmd_rank(graph_path, rank_opts, top);
    if (lag->parsed()) return cmd_lagrangian(graph_path, lag_opts, schedule);
    if (gen->parsed()) {
      Hypergraph graph;
      if (family == "beta-star") {
        graph = gen_beta_star(gen_r, gen_m);
      } else if (family == "loose-path") {
        graph = gen_loose_path(gen_r, gen_m);
      } else {
        if (gen_n == 0) throw std::invalid_argument("complete needs --n");
        graph = gen_complete(gen_n, gen_r);
      }
      if (gen_out.empty()) {
        write_edge_list(std::cout, graph);
      } else {
        std::ofstream file(gen_out);
        if (!file) throw std::runtime_error("cannot open output file: " + gen_out);
        write_edge_list(file, graph);
      }
      return 0;
    }
    if (self->parsed()) {
      if (list_cases) {
        for (const auto& c : selftest::all_cases()) {
          std::cout << c.name << (c.in_default_suite ? "" : " (optional)") << "  " << c.summary << '\n';
        }
        return 0;
      }
      return selftest::run_cases(cases, std::cout) ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << graph_path << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
