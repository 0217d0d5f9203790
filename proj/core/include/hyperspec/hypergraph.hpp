#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperspec {

using VertexId = std::uint32_t;

/// An owned edge: r vertex slots (0-based ids, repeats allowed) and a weight.
struct Edge {
  std::vector<VertexId> vertices;
  double weight = 1.0;
};

/// Read-only view of an edge stored inside a Hypergraph.
struct EdgeView {
  std::span<const VertexId> vertices;
  double weight;
};

/// Uniform weighted (multi-)hypergraph with flat edge storage.
///
/// Vertex ids are 0-based internally; the text format and every report use
/// 1-based ids. Slots of each edge are kept sorted. Range and weight checks
/// are not enforced on insertion; call validate() or build through
/// make_hypergraph() / parse_edge_list() for a checked, canonical graph.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(std::size_t num_vertices, std::size_t rank);

  /// Appends an edge. Throws std::invalid_argument if vertices.size() != rank().
  void add_edge(std::span<const VertexId> vertices, double weight = 1.0);
  void add_edge(std::initializer_list<VertexId> vertices, double weight = 1.0);

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t rank() const { return rank_; }
  std::size_t num_edges() const { return weights_.size(); }

  EdgeView edge(std::size_t e) const {
    return {std::span<const VertexId>(slots_).subspan(e * rank_, rank_), weights_[e]};
  }
  std::span<const VertexId> slots() const { return slots_; }
  std::span<const double> weights() const { return weights_; }

  /// Edges sorted lexicographically, identical edges merged by summing weights.
  Hypergraph canonical() const;
  bool is_canonical() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::size_t num_vertices_ = 0;
  std::size_t rank_ = 0;
  std::vector<VertexId> slots_;
  std::vector<double> weights_;
};

/// Per-vertex incidence lists in CSR layout.
///
/// Each entry names an edge containing the vertex, how many slots of that edge
/// the vertex occupies, and the first such slot. Entries of a vertex are in
/// ascending edge order.
class IncidenceIndex {
 public:
  struct Entry {
    std::uint32_t edge;
    std::uint32_t multiplicity;
    std::uint32_t slot;
  };

  IncidenceIndex() = default;
  explicit IncidenceIndex(const Hypergraph& graph);

  std::span<const Entry> incident(VertexId v) const {
    return std::span<const Entry>(entries_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t total_multiplicity() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

IncidenceIndex build_incidence(const Hypergraph& graph);

/// Every invariant violation of `graph`; empty means valid.
std::vector<std::string> validate(const Hypergraph& graph);

/// Canonicalizes `edges` and throws std::invalid_argument listing the
/// violations if the result is not a valid hypergraph.
Hypergraph make_hypergraph(std::size_t num_vertices, std::size_t rank, const std::vector<Edge>& edges);

/// Sum of s(e) over edges containing `v`, each edge counted once.
double degree(const Hypergraph& graph, VertexId v);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the edge-list text format: '#' comment lines, a header "r n", then one
/// edge per line as r 1-based vertex ids and an optional weight (default 1).
Hypergraph parse_edge_list(std::istream& in);
Hypergraph parse_edge_list(std::string_view text);
Hypergraph read_edge_list_file(const std::string& path);

/// Writes the edge-list format with explicit weights, edges in stored order.
void write_edge_list(std::ostream& out, const Hypergraph& graph);
std::string serialize_edge_list(const Hypergraph& graph);

}  // namespace hyperspec
