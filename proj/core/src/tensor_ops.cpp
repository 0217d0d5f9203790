#include "hyperspec/tensor_ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyperspec {

double factorial(std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 2; i <= k; ++i) out *= static_cast<double>(i);
  return out;
}

namespace {

void require_dimension(const Hypergraph& graph, std::span<const double> x) {
  if (x.size() != graph.num_vertices()) {
    throw std::invalid_argument("vector has dimension " + std::to_string(x.size()) + ", hypergraph has " +
                                std::to_string(graph.num_vertices()) + " vertices");
  }
}

double power_sum(std::span<const double> x, double p) {
  double total = 0.0;
  if (p == 2.0) {
    for (const double xi : x) total += xi * xi;
  } else {
    for (const double xi : x) total += std::pow(std::abs(xi), p);
  }
  return total;
}

// |b|^p - |a|^p without cancellation when a and b are close.
double power_difference(double a, double b, double p) {
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_a == 0.0) return std::pow(abs_b, p);
  const double gap = (a * b > 0.0) ? (a > 0.0 ? b - a : a - b) : abs_b - abs_a;
  return std::pow(abs_a, p) * std::expm1(p * std::log1p(gap / abs_a));
}

}  // namespace

double weight_poly(const Hypergraph& graph, std::span<const double> x) {
  require_dimension(graph, x);
  double total = 0.0;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto view = graph.edge(e);
    double prod = view.weight;
    for (const auto v : view.vertices) prod *= x[v];
    total += prod;
  }
  return total;
}

std::vector<double> signed_power(std::span<const double> x, double q) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) {
      out[i] = 0.0;
    } else if (q == 1.0) {
      out[i] = xi;
    } else {
      out[i] = std::copysign(std::pow(std::abs(xi), q), xi);
    }
  }
  return out;
}

SpectralObjective::SpectralObjective(const Hypergraph& graph, double p)
    : graph_(&graph), incidence_(graph), p_(p), r_factorial_(factorial(graph.rank())) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::domain_error("p must be a finite number greater than 1");
  }
}

void SpectralObjective::check_dimension(std::span<const double> x) const { require_dimension(*graph_, x); }

TensorProducts SpectralObjective::apply(std::span<const double> x) const {
  check_dimension(x);
  const Hypergraph& graph = *graph_;
  const std::size_t r = graph.rank();
  const std::size_t m = graph.num_edges();
  const auto slots = graph.slots();
  const auto weights = graph.weights();

  // Per-slot contribution s(e) * prod of the other slots, via prefix/suffix
  // products so zeros in x need no special casing.
  std::vector<double> contrib(m * r);
  std::vector<double> suffix(r + 1);
  for (std::size_t e = 0; e < m; ++e) {
    const VertexId* vs = slots.data() + e * r;
    suffix[r] = 1.0;
    for (std::size_t j = r; j-- > 0;) suffix[j] = suffix[j + 1] * x[vs[j]];
    double prefix = weights[e];
    for (std::size_t j = 0; j < r; ++j) {
      contrib[e * r + j] = prefix * suffix[j + 1];
      prefix *= x[vs[j]];
    }
  }

  TensorProducts out;
  out.axr1.assign(graph.num_vertices(), 0.0);
  for (std::size_t i = 0; i < graph.num_vertices(); ++i) {
    double acc = 0.0;
    for (const auto& entry : incidence_.incident(static_cast<VertexId>(i))) {
      acc += static_cast<double>(entry.multiplicity) * contrib[entry.edge * r + entry.slot];
    }
    out.axr1[i] = acc;
  }
  double axr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) axr += x[i] * out.axr1[i];
  out.axr = axr;
  return out;
}

ObjectiveValue SpectralObjective::value(std::span<const double> x) const {
  const auto products = apply(x);
  const double psum = power_sum(x, p_);
  if (psum == 0.0) throw std::domain_error("objective undefined at the zero vector");
  const double r = static_cast<double>(graph_->rank());
  ObjectiveValue out;
  out.w = products.axr / r;
  out.pnorm = std::pow(psum, 1.0 / p_);
  out.f = r_factorial_ / r * products.axr * std::pow(psum, -r / p_);
  return out;
}

GradientValue SpectralObjective::gradient(std::span<const double> x) const {
  auto products = apply(x);
  const double psum = power_sum(x, p_);
  if (psum == 0.0) throw std::domain_error("gradient undefined at the zero vector");
  const double r = static_cast<double>(graph_->rank());
  const double scale = r_factorial_ * std::pow(psum, -r / p_);
  const double coef = products.axr / psum;

  GradientValue out;
  out.g.resize(x.size());
  const auto xp = signed_power(x, p_ - 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.g[i] = scale * (products.axr1[i] - coef * xp[i]);
  }
  out.axr = products.axr;
  out.axr1 = std::move(products.axr1);
  out.f = scale / r * out.axr;
  out.pnorm = std::pow(psum, 1.0 / p_);
  return out;
}

double SpectralObjective::delta(std::span<const double> x, std::span<const double> x_next) const {
  check_dimension(x);
  check_dimension(x_next);
  const Hypergraph& graph = *graph_;
  const std::size_t r = graph.rank();
  const auto slots = graph.slots();
  const auto weights = graph.weights();

  // w(x_next) - w(x) telescoped over the slots of each edge.
  std::vector<double> suffix(r + 1);
  double dw = 0.0;
  double w_old = 0.0;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const VertexId* vs = slots.data() + e * r;
    suffix[r] = 1.0;
    for (std::size_t j = r; j-- > 0;) suffix[j] = suffix[j + 1] * x[vs[j]];
    double prefix_new = 1.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      acc += prefix_new * (x_next[vs[j]] - x[vs[j]]) * suffix[j + 1];
      prefix_new *= x_next[vs[j]];
    }
    dw += weights[e] * acc;
    w_old += weights[e] * suffix[0];
  }

  const double psum = power_sum(x, p_);
  double dpsum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dpsum += power_difference(x[i], x_next[i], p_);
  if (psum == 0.0 || psum + dpsum <= 0.0) throw std::domain_error("objective undefined at the zero vector");

  const double exponent = -static_cast<double>(r) / p_;
  const double scale_old = std::pow(psum, exponent);
  const double scale_gap = scale_old * std::expm1(exponent * std::log1p(dpsum / psum));
  return r_factorial_ * (dw * (scale_old + scale_gap) + w_old * scale_gap);
}

TensorProducts tensor_apply(const Hypergraph& graph, std::span<const double> x) {
  require_dimension(graph, x);
  return SpectralObjective(graph, 2.0).apply(x);
}

ObjectiveValue objective(const Hypergraph& graph, std::span<const double> x, double p) {
  return SpectralObjective(graph, p).value(x);
}

GradientValue objective_grad(const Hypergraph& graph, std::span<const double> x, double p) {
  return SpectralObjective(graph, p).gradient(x);
}

double objective_delta(const Hypergraph& graph, std::span<const double> x, std::span<const double> x_next,
                       double p) {
  return SpectralObjective(graph, p).delta(x, x_next);
}

}  // namespace hyperspec
