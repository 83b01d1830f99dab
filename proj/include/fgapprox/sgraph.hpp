#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgapprox/letters.hpp"

namespace fgapprox {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr EdgeId no_edge = UINT32_MAX;
inline constexpr VertexId no_vertex = UINT32_MAX;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Serre graph with an E-labelling. Edges come in pairs: 2i is the positive edge, 2i+1 its
// formal inverse, so inv(e) = e ^ 1 and label(2i+1) is label(2i) inverted.
class LabelledGraph {
 public:
  LabelledGraph() = default;

  [[nodiscard]] std::size_t vertex_count() const { return vertex_count_; }
  [[nodiscard]] std::size_t edge_count() const { return 2 * src_.size(); }
  [[nodiscard]] std::size_t positive_edge_count() const { return src_.size(); }
  [[nodiscard]] std::size_t alphabet_size() const { return alphabet_; }

  static constexpr EdgeId inv(EdgeId e) { return e ^ 1U; }
  static constexpr bool is_positive(EdgeId e) { return (e & 1U) == 0; }
  static constexpr EdgeId positive_edge(std::size_t i) { return static_cast<EdgeId>(2 * i); }

  [[nodiscard]] VertexId alpha(EdgeId e) const { return is_positive(e) ? src_[e / 2] : dst_[e / 2]; }
  [[nodiscard]] VertexId omega(EdgeId e) const { return is_positive(e) ? dst_[e / 2] : src_[e / 2]; }
  [[nodiscard]] SignedLetter label(EdgeId e) const { return {letter_[e / 2], !is_positive(e)}; }

  [[nodiscard]] std::span<const EdgeId> out_edges(VertexId v) const {
    return {out_list_.data() + out_offset_[v], out_list_.data() + out_offset_[v + 1]};
  }
  // The outgoing edge with label s, or no_edge. In a non-E-graph the least such edge.
  [[nodiscard]] EdgeId out_edge(VertexId v, SignedLetter s) const {
    return table_[static_cast<std::size_t>(v) * 2 * alphabet_ + s.code()];
  }
  [[nodiscard]] VertexId follow(VertexId v, SignedLetter s) const {
    EdgeId e = out_edge(v, s);
    return e == no_edge ? no_vertex : omega(e);
  }

  [[nodiscard]] bool is_e_graph() const { return e_graph_; }

  [[nodiscard]] const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  [[nodiscard]] const std::vector<std::string>& letter_names() const { return letter_names_; }
  [[nodiscard]] std::string vertex_name(VertexId v) const;
  [[nodiscard]] std::optional<VertexId> find_vertex(const std::string& name) const;
  [[nodiscard]] std::optional<Letter> find_letter(const std::string& name) const;

 private:
  friend class GraphBuilder;
  std::size_t vertex_count_ = 0;
  std::size_t alphabet_ = 0;
  std::vector<VertexId> src_, dst_;
  std::vector<Letter> letter_;
  std::vector<std::uint32_t> out_offset_{0};
  std::vector<EdgeId> out_list_;
  std::vector<EdgeId> table_;
  bool e_graph_ = true;
  std::vector<std::string> vertex_names_;
  std::vector<std::string> letter_names_;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t alphabet_size) : alphabet_(alphabet_size) {}

  VertexId add_vertex(std::string name = {});
  VertexId add_vertices(std::size_t n);
  // Returns the positive edge id.
  EdgeId add_edge(VertexId src, VertexId dst, Letter a);
  void set_letter_names(std::vector<std::string> names) { letter_names_ = std::move(names); }
  [[nodiscard]] std::size_t vertex_count() const { return vertex_count_; }
  [[nodiscard]] std::size_t alphabet_size() const { return alphabet_; }

  [[nodiscard]] LabelledGraph build() &&;

 private:
  std::size_t alphabet_;
  std::size_t vertex_count_ = 0;
  std::vector<VertexId> src_, dst_;
  std::vector<Letter> letter_;
  std::vector<std::string> vertex_names_;
  bool named_ = false;
  std::vector<std::string> letter_names_;
};

struct InputEdge {
  std::string id;
  std::string src;
  std::string dst;
};

// Oriented input graph: every positive edge is labelled by its own letter, in input order.
LabelledGraph build_graph(const std::vector<std::string>& vertices, const std::vector<InputEdge>& edges);

struct Path {
  VertexId start = 0;
  std::vector<EdgeId> edges;
};

VertexId path_end(const LabelledGraph& g, const Path& p);
Word path_label(const LabelledGraph& g, const Path& p);
std::optional<Path> path_from(const LabelledGraph& g, VertexId v, const Word& p);

// Vertices and positive edges of a subgraph, both sorted.
struct Selection {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> positive_edges;
};

// A graph cut out of a host graph, with the origin of every vertex and positive edge.
struct Extracted {
  LabelledGraph graph;
  std::vector<VertexId> vertex_origin;
  std::vector<EdgeId> edge_origin;
};

// Partition of the vertex set into A-components.
struct Partition {
  std::vector<std::uint32_t> class_of;
  std::size_t count = 0;
};

Selection component_selection(const LabelledGraph& g, VertexId v, LetterSet a);
Partition component_partition(const LabelledGraph& g, LetterSet a);
// Smallest subgraph containing the given vertices and edges (closure under alpha and inv).
Selection span_closure(const LabelledGraph& g, std::span<const VertexId> vertices, std::span<const EdgeId> edges);
Extracted extract(const LabelledGraph& g, const Selection& s);
Extracted component(const LabelledGraph& g, VertexId v, LetterSet a);
bool is_connected(const LabelledGraph& g);

bool is_complete(const LabelledGraph& g);
bool is_weakly_complete(const LabelledGraph& g);
LabelledGraph trivial_completion(const LabelledGraph& g);

struct DisjointUnion {
  LabelledGraph graph;
  std::vector<VertexId> vertex_offset;
  std::vector<EdgeId> edge_offset;
};
DisjointUnion disjoint_union(std::span<const LabelledGraph* const> parts);

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n = 0);
  std::size_t add();
  std::size_t find(std::size_t x);
  bool unite(std::size_t x, std::size_t y);
  [[nodiscard]] std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// A partition of vertices and edges compatible with alpha, inv and the labelling.
class GraphCongruence {
 public:
  // Throws GraphError naming the violated compatibility condition.
  GraphCongruence(const LabelledGraph& g, std::vector<std::uint32_t> vertex_class, std::vector<std::uint32_t> edge_class);
  static GraphCongruence identity(const LabelledGraph& g);

  [[nodiscard]] std::uint32_t vertex_class(VertexId v) const { return vertex_class_[v]; }
  [[nodiscard]] std::uint32_t edge_class(EdgeId e) const { return edge_class_[e]; }
  [[nodiscard]] std::size_t vertex_class_count() const { return vertex_classes_; }

 private:
  std::vector<std::uint32_t> vertex_class_;
  std::vector<std::uint32_t> edge_class_;
  std::size_t vertex_classes_ = 0;
};

struct Quotient {
  LabelledGraph graph;
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
};
Quotient quotient(const LabelledGraph& g, const GraphCongruence& theta);

struct Isomorphism {
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
};
// Label- and orientation-respecting isomorphism search.
std::optional<Isomorphism> labelled_isomorphic(const LabelledGraph& g1, const LabelledGraph& g2);

// Canonical form of a connected E-graph: equal codes iff labelled-isomorphic.
std::vector<std::uint32_t> canonical_code(const LabelledGraph& g);
// All base points b of g2 such that sending `base1` to b extends to an isomorphism of connected E-graphs.
std::vector<Isomorphism> e_graph_isomorphisms(const LabelledGraph& g1, VertexId base1, const LabelledGraph& g2);

// Morphism checks used by tests and diagnostics.
bool is_morphism(const LabelledGraph& src, const LabelledGraph& dst, std::span<const VertexId> vmap,
                 std::span<const EdgeId> emap);
void check_well_formed(const LabelledGraph& g);

}  // namespace fgapprox
