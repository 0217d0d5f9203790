#pragma once

#include <span>
#include <vector>

#include "hyperspec/hypergraph.hpp"

namespace hyperspec {

/// Objective value at a point: f = r! * w / pnorm^r.
struct ObjectiveValue {
  double f = 0.0;
  double w = 0.0;      // weight polynomial
  double pnorm = 0.0;  // ||x||_p
};

/// Objective value and gradient at a point, with the tensor products they
/// were formed from.
struct GradientValue {
  std::vector<double> g;     // gradient of f
  double axr = 0.0;          // A x^r
  std::vector<double> axr1;  // A x^{r-1}
  double f = 0.0;
  double pnorm = 0.0;
};

/// Products of the adjacency tensor with x.
struct TensorProducts {
  double axr = 0.0;
  std::vector<double> axr1;
};

/// Sum over edges of s(e) times the product of x over the edge slots.
double weight_poly(const Hypergraph& graph, std::span<const double> x);

/// A x^{r-1} (the partial derivatives of the weight polynomial, multiplicity
/// included) and A x^r = x^T (A x^{r-1}).
TensorProducts tensor_apply(const Hypergraph& graph, std::span<const double> x);

/// Componentwise |x_i|^q sgn(x_i).
std::vector<double> signed_power(std::span<const double> x, double q);

ObjectiveValue objective(const Hypergraph& graph, std::span<const double> x, double p);
GradientValue objective_grad(const Hypergraph& graph, std::span<const double> x, double p);

/// f(x_next) - f(x), evaluated from the differences x_next - x so that the
/// result keeps relative accuracy when the two values agree to all digits.
double objective_delta(const Hypergraph& graph, std::span<const double> x, std::span<const double> x_next,
                       double p);

/// The p-spectral objective of one hypergraph with its incidence index built
/// once. Holds a reference to the hypergraph, which must outlive it. Const
/// member functions are safe to call concurrently.
class SpectralObjective {
 public:
  SpectralObjective(const Hypergraph& graph, double p);

  const Hypergraph& graph() const { return *graph_; }
  double p() const { return p_; }
  std::size_t dimension() const { return graph_->num_vertices(); }

  TensorProducts apply(std::span<const double> x) const;
  ObjectiveValue value(std::span<const double> x) const;
  GradientValue gradient(std::span<const double> x) const;
  double delta(std::span<const double> x, std::span<const double> x_next) const;

 private:
  void check_dimension(std::span<const double> x) const;

  const Hypergraph* graph_;
  IncidenceIndex incidence_;
  double p_;
  double r_factorial_;
};

double factorial(std::size_t k);

}  // namespace hyperspec
