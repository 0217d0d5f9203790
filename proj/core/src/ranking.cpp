#include "hyperspec/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hyperspec {

RankingReport make_ranking(std::span<const double> weighting, std::size_t top_k) {
  if (top_k > weighting.size()) {
    throw std::invalid_argument("top " + std::to_string(top_k) + " exceeds vertex count " +
                                std::to_string(weighting.size()));
  }
  RankingReport report;
  report.entries.reserve(weighting.size());
  for (std::size_t i = 0; i < weighting.size(); ++i) report.entries.push_back({i + 1, std::abs(weighting[i])});
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return a.impact_factor > b.impact_factor; });
  if (top_k > 0) report.entries.resize(top_k);
  return report;
}

RankingReport rank_vertices(const Hypergraph& graph, const SolverConfig& cfg, std::size_t top_k) {
  const auto ms = solve_multistart(graph, cfg);
  auto report = make_ranking(ms.best.weighting, top_k);
  report.p = cfg.p;
  report.lambda = ms.best.lambda;
  report.runs = cfg.runs;
  report.near_ties = ms.near_ties;
  return report;
}

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument("not a number: \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

double parse_real_or_fraction(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_double(text);
  const double num = parse_double(text.substr(0, slash));
  const double den = parse_double(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
  return num / den;
}

}  // namespace hyperspec
