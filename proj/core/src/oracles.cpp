#include "hyperspec/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hyperspec {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double fact(std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 2; i <= k; ++i) out *= static_cast<double>(i);
  return out;
}

}  // namespace

Hypergraph gen_beta_star(std::size_t r, std::size_t m) {
  require(r >= 2 && m >= 1, "beta-star needs r >= 2 and m >= 1");
  Hypergraph graph(m * (r - 1) + 1, r);
  std::vector<VertexId> edge(r);
  for (std::size_t e = 0; e < m; ++e) {
    edge[0] = 0;
    for (std::size_t j = 1; j < r; ++j) edge[j] = static_cast<VertexId>(1 + e * (r - 1) + (j - 1));
    graph.add_edge(edge);
  }
  return graph;
}

Hypergraph gen_loose_path(std::size_t r, std::size_t m) {
  require(r >= 2 && m >= 1, "loose path needs r >= 2 and m >= 1");
  Hypergraph graph(m * (r - 1) + 1, r);
  std::vector<VertexId> edge(r);
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t j = 0; j < r; ++j) edge[j] = static_cast<VertexId>(e * (r - 1) + j);
    graph.add_edge(edge);
  }
  return graph;
}

Hypergraph gen_complete(std::size_t n, std::size_t r) {
  require(r >= 2 && n >= r, "complete hypergraph needs n >= r >= 2");
  Hypergraph graph(n, r);
  std::vector<VertexId> edge(r);
  for (std::size_t j = 0; j < r; ++j) edge[j] = static_cast<VertexId>(j);
  while (true) {
    graph.add_edge(edge);
    // Next r-combination in lexicographic order.
    std::size_t j = r;
    while (j > 0 && edge[j - 1] == n - r + (j - 1)) --j;
    if (j == 0) break;
    ++edge[j - 1];
    for (std::size_t k = j; k < r; ++k) edge[k] = edge[k - 1] + 1;
  }
  return graph;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(out);
}

ClosedForm beta_star_value(std::size_t r, std::size_t m, double p) {
  require(r >= 2 && m >= 1 && p > 0.0, "beta_star_value needs r >= 2, m >= 1, p > 0");
  const double rd = static_cast<double>(r);
  const double md = static_cast<double>(m);
  double value = 0.0;
  if (p > rd - 1.0) {
    value = fact(r) * std::pow(rd, -rd / p) * std::pow(md, 1.0 - (rd - 1.0) / p);
  } else if (p < rd - 1.0) {
    value = fact(r) * std::pow(rd, -rd / p);
  } else {
    value = fact(r - 1) * std::pow(rd, -1.0 / (rd - 1.0));
  }
  return {value, ClosedFormSource::beta_star, r, m, p};
}

ClosedForm loose_path_value(std::size_t r, std::size_t m) {
  require(r >= 2 && r % 2 == 0, "loose_path_value needs an even r");
  require(m == 3 || m == 4, "loose_path_value supports only m = 3 or m = 4");
  const double rd = static_cast<double>(r);
  const double h_eigenvalue = (m == 3) ? std::pow(std::numbers::phi, 2.0 / rd) : std::pow(3.0, 1.0 / rd);
  return {fact(r - 1) * h_eigenvalue, ClosedFormSource::loose_path, r, m, rd};
}

ClosedForm complete_lagrangian(std::size_t n, std::size_t r) {
  require(r >= 2 && n >= r, "complete_lagrangian needs n >= r >= 2");
  return {binomial(n, r) / std::pow(static_cast<double>(n), static_cast<double>(r)),
          ClosedFormSource::complete_lagrangian, r, n, 1.0};
}

namespace {

// Dense evaluation of F(x) = r! w(x) / ||x||_p^r and its gradient, written
// independently of the sparse kernels.
class DenseObjective {
 public:
  DenseObjective(const Hypergraph& graph, double p) : p_(p), r_(graph.rank()), rfact_(fact(graph.rank())) {
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      const auto view = graph.edge(e);
      edges_.push_back({std::vector<std::size_t>(view.vertices.begin(), view.vertices.end()), view.weight});
    }
    n_ = graph.num_vertices();
  }

  double value(const std::vector<double>& x, std::vector<double>* grad) const {
    double w = 0.0;
    std::vector<double> dw(n_, 0.0);
    for (const auto& e : edges_) {
      double prod = e.weight;
      for (auto v : e.vertices) prod *= x[v];
      w += prod;
      if (grad) {
        for (std::size_t j = 0; j < r_; ++j) {
          double partial = e.weight;
          for (std::size_t l = 0; l < r_; ++l) {
            if (l != j) partial *= x[e.vertices[l]];
          }
          dw[e.vertices[j]] += partial;
        }
      }
    }
    double s = 0.0;
    for (double xi : x) s += std::pow(std::abs(xi), p_);
    const double norm_r = std::pow(s, static_cast<double>(r_) / p_);
    const double f = rfact_ * w / norm_r;
    if (grad) {
      grad->assign(n_, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        const double sp = (x[i] == 0.0) ? 0.0 : std::copysign(std::pow(std::abs(x[i]), p_ - 1.0), x[i]);
        (*grad)[i] = rfact_ / norm_r * dw[i] - f * static_cast<double>(r_) / s * sp;
      }
    }
    return f;
  }

  std::size_t dimension() const { return n_; }

 private:
  struct DenseEdge {
    std::vector<std::size_t> vertices;
    double weight;
  };
  std::vector<DenseEdge> edges_;
  double p_;
  std::size_t r_;
  std::size_t n_ = 0;
  double rfact_;
};

void normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  for (double& v : x) v /= s;
}

}  // namespace

BruteForceResult brute_force_search(const Hypergraph& graph, double p, std::size_t budget, std::uint64_t seed) {
  require(graph.num_vertices() <= 8, "brute_force_radius supports at most 8 vertices");
  require(p > 1.0, "brute_force_radius needs p > 1");
  require(budget >= 1, "brute_force_radius needs a positive budget");

  const DenseObjective objective(graph, p);
  const std::size_t n = objective.dimension();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  BruteForceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<double> x(n);
  std::vector<double> grad;
  std::vector<double> trial(n);
  std::vector<double> trial_grad;
  for (std::size_t start = 0; start < budget; ++start) {
    for (auto& v : x) v = normal(rng);
    normalize(x);
    double f = objective.value(x, &grad);
    double step = 0.1;
    for (int it = 0; it < 20000; ++it) {
      double gnorm = 0.0;
      for (double v : grad) gnorm += v * v;
      gnorm = std::sqrt(gnorm);
      if (gnorm <= 1e-6 || step < 1e-18) break;
      // Normalized step along the gradient, halved until f increases.
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * grad[i] / gnorm;
      normalize(trial);
      const double f_trial = objective.value(trial, &trial_grad);
      if (f_trial > f) {
        x.swap(trial);
        grad.swap(trial_grad);
        f = f_trial;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    std::vector<double> abs_x(n);
    for (std::size_t i = 0; i < n; ++i) abs_x[i] = std::abs(x[i]);
    const double f_abs = objective.value(abs_x, nullptr);
    if (f_abs > best.value) {
      best.value = f_abs;
      best.weighting = abs_x;
    }
  }
  return best;
}

double brute_force_radius(const Hypergraph& graph, double p, std::size_t budget, std::uint64_t seed) {
  return brute_force_search(graph, p, budget, seed).value;
}

}  // namespace hyperspec
