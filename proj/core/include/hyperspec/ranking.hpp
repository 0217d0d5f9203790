#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hyperspec/csrh.hpp"

namespace hyperspec {

/// Vertices ordered by impact factor |x_i| of the best weighting.
struct RankingReport {
  struct Entry {
    std::size_t vertex;  // 1-based
    double impact_factor;
  };
  std::vector<Entry> entries;  // nonincreasing impact factor, ties by ascending id
  double p = 0.0;
  double lambda = 0.0;
  std::size_t runs = 0;
  std::size_t near_ties = 0;
};

/// Sorts |weighting| descending and keeps the first top_k entries
/// (all of them when top_k is 0). Throws if top_k exceeds the dimension.
RankingReport make_ranking(std::span<const double> weighting, std::size_t top_k);

/// Multistart solve followed by make_ranking on the best weighting.
RankingReport rank_vertices(const Hypergraph& graph, const SolverConfig& cfg, std::size_t top_k);

/// Parses a decimal ("1.5") or a fraction literal ("4/3").
double parse_real_or_fraction(std::string_view text);

}  // namespace hyperspec
