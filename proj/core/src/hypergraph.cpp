#include "hyperspec/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace hyperspec {

Hypergraph::Hypergraph(std::size_t num_vertices, std::size_t rank)
    : num_vertices_(num_vertices), rank_(rank) {}

void Hypergraph::add_edge(std::span<const VertexId> vertices, double weight) {
  if (vertices.size() != rank_) {
    throw std::invalid_argument("edge has " + std::to_string(vertices.size()) +
                                " vertex slots, expected " + std::to_string(rank_));
  }
  const auto first = slots_.size();
  slots_.insert(slots_.end(), vertices.begin(), vertices.end());
  std::sort(slots_.begin() + static_cast<std::ptrdiff_t>(first), slots_.end());
  weights_.push_back(weight);
}

void Hypergraph::add_edge(std::initializer_list<VertexId> vertices, double weight) {
  add_edge(std::span<const VertexId>(vertices.begin(), vertices.size()), weight);
}

Hypergraph Hypergraph::canonical() const {
  std::vector<std::size_t> order(num_edges());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [this](std::size_t a, std::size_t b) {
    auto ea = edge(a).vertices;
    auto eb = edge(b).vertices;
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  };
  std::stable_sort(order.begin(), order.end(), less);

  Hypergraph out(num_vertices_, rank_);
  out.slots_.reserve(slots_.size());
  out.weights_.reserve(weights_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto e = edge(order[i]);
    if (i > 0) {
      const auto prev = edge(order[i - 1]).vertices;
      if (std::equal(prev.begin(), prev.end(), e.vertices.begin())) {
        out.weights_.back() += e.weight;
        continue;
      }
    }
    out.slots_.insert(out.slots_.end(), e.vertices.begin(), e.vertices.end());
    out.weights_.push_back(e.weight);
  }
  return out;
}

bool Hypergraph::is_canonical() const {
  for (std::size_t e = 1; e < num_edges(); ++e) {
    const auto a = edge(e - 1).vertices;
    const auto b = edge(e).vertices;
    if (!std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) return false;
  }
  return true;
}

IncidenceIndex::IncidenceIndex(const Hypergraph& graph) {
  const std::size_t n = graph.num_vertices();
  const std::size_t r = graph.rank();
  offsets_.assign(n + 1, 0);

  // Count distinct vertices per edge; slots are sorted so repeats are adjacent.
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto vs = graph.edge(e).vertices;
    for (std::size_t j = 0; j < r; ++j) {
      if (j == 0 || vs[j] != vs[j - 1]) ++offsets_[vs[j] + 1];
    }
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  entries_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto vs = graph.edge(e).vertices;
    std::size_t j = 0;
    while (j < r) {
      std::size_t k = j;
      while (k < r && vs[k] == vs[j]) ++k;
      entries_[cursor[vs[j]]++] = {static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(k - j),
                                   static_cast<std::uint32_t>(j)};
      j = k;
    }
  }
}

std::size_t IncidenceIndex::total_multiplicity() const {
  std::size_t total = 0;
  for (const auto& entry : entries_) total += entry.multiplicity;
  return total;
}

IncidenceIndex build_incidence(const Hypergraph& graph) { return IncidenceIndex(graph); }

std::vector<std::string> validate(const Hypergraph& graph) {
  std::vector<std::string> violations;
  if (graph.num_vertices() == 0) violations.emplace_back("vertex count must be positive");
  if (graph.rank() < 2) violations.emplace_back("edge cardinality must be at least 2");
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto view = graph.edge(e);
    const std::string where = "edge " + std::to_string(e + 1) + ": ";
    for (const auto v : view.vertices) {
      if (v >= graph.num_vertices()) {
        violations.push_back(where + "vertex out of range (" + std::to_string(v + 1) + " > " +
                             std::to_string(graph.num_vertices()) + ")");
        break;
      }
    }
    if (!(view.weight > 0.0) || !std::isfinite(view.weight)) {
      violations.push_back(where + "nonpositive weight");
    }
    if (!std::is_sorted(view.vertices.begin(), view.vertices.end())) {
      violations.push_back(where + "vertex slots not sorted");
    }
  }
  return violations;
}

Hypergraph make_hypergraph(std::size_t num_vertices, std::size_t rank, const std::vector<Edge>& edges) {
  Hypergraph graph(num_vertices, rank);
  for (const auto& edge : edges) graph.add_edge(edge.vertices, edge.weight);
  graph = graph.canonical();
  if (auto violations = validate(graph); !violations.empty()) {
    std::string msg = "invalid hypergraph:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  return graph;
}

double degree(const Hypergraph& graph, VertexId v) {
  if (v >= graph.num_vertices()) {
    throw std::out_of_range("vertex " + std::to_string(v + 1) + " out of range");
  }
  double total = 0.0;
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto view = graph.edge(e);
    if (std::binary_search(view.vertices.begin(), view.vertices.end(), v)) total += view.weight;
  }
  return total;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Hypergraph parse_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t rank = 0;
  std::size_t n = 0;
  Hypergraph graph;
  std::vector<VertexId> ids;

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;

    if (!have_header) {
      if (fields.size() != 2 || !parse_number(fields[0], rank) || !parse_number(fields[1], n)) {
        throw ParseError(line_no, "malformed header, expected \"r n\"");
      }
      if (rank < 2) throw ParseError(line_no, "edge cardinality r must be at least 2");
      if (n == 0) throw ParseError(line_no, "vertex count n must be positive");
      graph = Hypergraph(n, rank);
      have_header = true;
      continue;
    }

    if (fields.size() != rank && fields.size() != rank + 1) {
      throw ParseError(line_no, "inconsistent edge size: expected " + std::to_string(rank) +
                                    " vertex ids and an optional weight, got " +
                                    std::to_string(fields.size()) + " fields");
    }
    ids.clear();
    for (std::size_t j = 0; j < rank; ++j) {
      unsigned long long id = 0;
      if (!parse_number(fields[j], id)) {
        throw ParseError(line_no, "malformed vertex id \"" + std::string(fields[j]) + "\"");
      }
      if (id < 1 || id > n) {
        throw ParseError(line_no, "vertex id " + std::string(fields[j]) + " out of range [1, " +
                                      std::to_string(n) + "]");
      }
      ids.push_back(static_cast<VertexId>(id - 1));
    }
    double weight = 1.0;
    if (fields.size() == rank + 1) {
      if (!parse_number(fields[rank], weight) || !std::isfinite(weight)) {
        throw ParseError(line_no, "malformed weight \"" + std::string(fields[rank]) + "\"");
      }
      if (!(weight > 0.0)) throw ParseError(line_no, "nonpositive weight " + std::string(fields[rank]));
    }
    graph.add_edge(ids, weight);
  }
  if (!have_header) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header line \"r n\"");
  return graph.canonical();
}

Hypergraph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

Hypergraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const Hypergraph& graph) {
  out << graph.rank() << ' ' << graph.num_vertices() << '\n';
  char buf[64];
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const auto view = graph.edge(e);
    for (const auto v : view.vertices) out << (v + 1) << ' ';
    // Shortest representation that round-trips.
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), view.weight);
    out.write(buf, ptr - buf);
    out << '\n';
  }
}

std::string serialize_edge_list(const Hypergraph& graph) {
  std::ostringstream out;
  write_edge_list(out, graph);
  return out.str();
}

}  // namespace hyperspec
