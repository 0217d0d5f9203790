#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hyperspec/hypergraph.hpp"

namespace hyperspec {

/// Hypergraph whose m edges share vertex 1 and are otherwise disjoint.
Hypergraph gen_beta_star(std::size_t r, std::size_t m);
/// Hypergraph whose consecutive edges share exactly one vertex.
Hypergraph gen_loose_path(std::size_t r, std::size_t m);
/// All C(n, r) r-subsets of n vertices.
Hypergraph gen_complete(std::size_t n, std::size_t r);

enum class ClosedFormSource { beta_star, loose_path, complete_lagrangian };

struct ClosedForm {
  double value = 0.0;
  ClosedFormSource source = ClosedFormSource::beta_star;
  std::size_t r = 0;
  std::size_t size = 0;  // m for beta-stars and loose paths, n for complete graphs
  double p = 0.0;
};

/// p-spectral radius of an r-uniform beta-star with m edges.
ClosedForm beta_star_value(std::size_t r, std::size_t m, double p);

/// r-spectral radius of an r-uniform loose path with m in {3, 4} edges, r even.
ClosedForm loose_path_value(std::size_t r, std::size_t m);

/// Lagrangian C(n, r) / n^r of the complete r-graph on n vertices.
ClosedForm complete_lagrangian(std::size_t n, std::size_t r);

double binomial(std::size_t n, std::size_t k);

struct BruteForceResult {
  double value = 0.0;
  std::vector<double> weighting;  // |x| of the best start, unit 2-norm
};

/// Dense multistart projected gradient ascent on the sphere for n <= 8.
/// Evaluates the objective with its own code, shares nothing with the
/// solver. Throws std::invalid_argument when n > 8 or p <= 1.
BruteForceResult brute_force_search(const Hypergraph& graph, double p, std::size_t budget = 2000,
                                    std::uint64_t seed = 12345);
double brute_force_radius(const Hypergraph& graph, double p, std::size_t budget = 2000, std::uint64_t seed = 12345);

}  // namespace hyperspec
