#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fgapprox/egroup.hpp"
#include "fgapprox/sgraph.hpp"

namespace fgapprox {

using ElemId = std::uint32_t;

// Interned elements of an ambient E-group with cached subgroup and coset lookups.
// Single owner; not thread-safe.
class Ambient {
 public:
  Ambient(std::shared_ptr<const EGroup> group, Budget budget);

  [[nodiscard]] const EGroup& group() const { return *group_; }
  [[nodiscard]] const std::shared_ptr<const EGroup>& group_ptr() const { return group_; }
  [[nodiscard]] const Budget& budget() const { return budget_; }
  [[nodiscard]] std::size_t letter_count() const { return group_->letter_count(); }

  static constexpr ElemId one = 0;
  ElemId intern(std::span<const std::uint32_t> images);
  [[nodiscard]] std::span<const std::uint32_t> element(ElemId x) const { return pool_[x]; }
  [[nodiscard]] std::size_t size() const { return pool_.size(); }
  ElemId step(ElemId x, SignedLetter s);
  ElemId product(ElemId x, ElemId y);
  ElemId inverse(ElemId x);
  ElemId eval(const Word& p);

  const Subgroup& sub(LetterSet b);
  // Elements of the left coset x.G[B] in the subgroup's enumeration order (x first).
  const std::vector<ElemId>& coset(ElemId x, LetterSet b);
  bool in_subgroup(ElemId x, LetterSet b);

 private:
  std::shared_ptr<const EGroup> group_;
  Budget budget_;
  ElementPool pool_;
  std::vector<ElemId> steps_;
  std::map<std::uint64_t, std::shared_ptr<const Subgroup>> subs_;
  std::map<std::pair<ElemId, std::uint64_t>, std::vector<ElemId>> cosets_;
};

// A graph whose vertices carry ambient group elements along a label-respecting map into the Cayley graph.
struct ElementGraph {
  LabelledGraph graph;
  std::vector<ElemId> element;
};

// Builds a subgraph of the Cayley graph as a union of pieces, identifying by element.
class ElementGraphBuilder {
 public:
  ElementGraphBuilder(Ambient& ambient) : ambient_(&ambient) {}
  VertexId vertex(ElemId x);
  void edge(ElemId x, Letter a);
  void coset(ElemId x, LetterSet b);
  [[nodiscard]] ElementGraph build() const;

 private:
  Ambient* ambient_;
  std::unordered_map<ElemId, VertexId> index_;
  std::vector<ElemId> element_;
  std::vector<std::pair<ElemId, Letter>> edges_;
  std::unordered_map<std::uint64_t, char> edge_seen_;
};

// Members of P that are contained in another member are dropped; the result is sorted.
std::vector<LetterSet> normalize_family(std::vector<LetterSet> p);
// Nonempty antichains of proper subsets of A, each sorted, in a fixed order.
std::vector<std::vector<LetterSet>> proper_antichains(LetterSet a);

struct Cluster {
  LetterSet a;
  std::vector<LetterSet> p;
  ElementGraph graph;
  std::vector<VertexId> core;
};

// Union of the cosets G[B], B in P, inside the Cayley graph of G[A].
Cluster cluster(Ambient& ambient, LetterSet a, const std::vector<LetterSet>& p);
// Same cluster assembled as the quotient of the disjoint union of the G[B] by coincidence in G[B n C].
ElementGraph cluster_by_assembly(Ambient& ambient, const std::vector<LetterSet>& p);
// CL(G[A],P) u v.G[B] inside the Cayley graph of G[A]; v is a vertex of the cluster graph.
ElementGraph augmented_cluster(Ambient& ambient, const Cluster& cl, VertexId v, LetterSet b);

struct AdmissibilityWitness {
  LetterSet b, b1, b2;
  VertexId v1 = 0, v2 = 0;
  ElemId common = 0;
};
std::optional<AdmissibilityWitness> admissibility_violation(Ambient& ambient, const ElementGraph& k, LetterSet a);
bool is_admissible(Ambient& ambient, const ElementGraph& k, LetterSet a);

// For every B, C: each nonempty intersection of a B-component and a C-component is one (B n C)-component.
std::optional<std::string> components_meet_connected(const LabelledGraph& g, LetterSet a);

struct Membership {
  LetterSet b;
  std::uint32_t component = 0;  // index of the B-component of the skeleton
  friend auto operator<=>(const Membership&, const Membership&) = default;
};

struct Support {
  LetterSet b;
  VertexId v = 0;  // least skeleton vertex of the supporting component
  std::size_t size = 0;
  friend bool operator==(const Support&, const Support&) = default;
};

class CosetExtension {
 public:
  [[nodiscard]] LetterSet letters() const { return a_; }
  [[nodiscard]] const std::vector<LetterSet>& family() const { return p_; }
  [[nodiscard]] const LabelledGraph& graph() const { return graph_; }
  [[nodiscard]] const std::vector<ElemId>& element() const { return element_; }
  [[nodiscard]] const ElementGraph& skeleton() const { return skeleton_; }
  [[nodiscard]] VertexId skeleton_vertex(VertexId k) const { return skeleton_vertex_[k]; }
  [[nodiscard]] bool on_skeleton(VertexId x) const { return on_skeleton_[x] != 0; }
  [[nodiscard]] const std::vector<Membership>& memberships(VertexId x) const { return memberships_[x]; }
  // Skeleton components for every subset of A that occurs as a member or an intersection of members.
  [[nodiscard]] const Partition& skeleton_components(LetterSet b) const { return components_.at(b); }
  [[nodiscard]] VertexId component_base(LetterSet b, std::uint32_t c) const { return bases_.at(b)[c]; }
  // Bitmask over family() indices: which CE(K;B) images contain the vertex / positive edge.
  [[nodiscard]] std::uint64_t vertex_in(VertexId x) const { return vertex_in_[x]; }
  [[nodiscard]] std::uint64_t edge_in(EdgeId e) const { return edge_in_[e / 2]; }

 private:
  friend CosetExtension coset_extension_full(Ambient&, const ElementGraph&, LetterSet, const std::vector<LetterSet>&);
  friend class CeMutator;
  LetterSet a_;
  std::vector<LetterSet> p_;
  ElementGraph skeleton_;
  LabelledGraph graph_;
  std::vector<ElemId> element_;
  std::vector<VertexId> skeleton_vertex_;
  std::vector<char> on_skeleton_;
  std::vector<std::vector<Membership>> memberships_;
  std::map<LetterSet, Partition> components_;
  std::map<LetterSet, std::vector<VertexId>> bases_;
  std::vector<std::uint64_t> vertex_in_;
  std::vector<std::uint64_t> edge_in_;
};

class InadmissibleSkeleton : public std::runtime_error {
 public:
  explicit InadmissibleSkeleton(AdmissibilityWitness w)
      : std::runtime_error("skeleton is not admissible for coset extension"), witness(w) {}
  AdmissibilityWitness witness;
};

// CE(G,K;B) for a single B.
CosetExtension coset_extension(Ambient& ambient, const ElementGraph& k, LetterSet a, LetterSet b);
// CE(G,K;P); with P empty uses all proper subsets of A (the full extension).
CosetExtension coset_extension_full(Ambient& ambient, const ElementGraph& k, LetterSet a,
                                    const std::vector<LetterSet>& p = {});

struct CeMorphism {
  std::vector<ElemId> vertex_image;
  bool is_morphism = true;
  bool injective = true;
  std::optional<std::pair<VertexId, VertexId>> collision;
};
CeMorphism ce_morphism(Ambient& ambient, const CosetExtension& ce);

std::optional<Support> minimal_support(const CosetExtension& ce, std::span<const VertexId> j);

// Invariants of a built extension; each returns a description of the first failure.
std::optional<std::string> check_intersection_law(const CosetExtension& ce);
std::optional<std::string> check_constituent_disjointness(const CosetExtension& ce);

enum class ShapeKind { coset, cluster, augmented_cluster, other };
std::string to_string(ShapeKind k);

struct Shape {
  ShapeKind kind = ShapeKind::other;
  std::vector<LetterSet> p;      // cluster family
  LetterSet augment;             // augmenting set for augmented clusters
};

// Catalog of B-graph shapes over an ambient group, built by explicit reconstruction.
class ShapeCatalog {
 public:
  explicit ShapeCatalog(Ambient& ambient) : ambient_(&ambient) {}
  // Classify a connected B-graph (edges labelled in B).
  Shape classify(const LabelledGraph& component, LetterSet b);
  // Clusters over G[B] (and the full coset, as P = {B}) whose canonical code matches.
  std::optional<Cluster> matching_cluster(const LabelledGraph& component, LetterSet b);

 private:
  struct Entry {
    std::vector<std::uint32_t> code;
    Shape shape;
  };
  const std::vector<Entry>& entries(LetterSet b);
  const std::vector<Entry>& augmented_entries(LetterSet b);
  Ambient* ambient_;
  std::map<LetterSet, std::vector<Entry>> entries_;
  std::map<LetterSet, std::vector<Entry>> augmented_;
};

struct ClusterPropertyResult {
  bool holds = true;
  std::string reason;
  LetterSet b;
  std::vector<VertexId> witness;
};
ClusterPropertyResult has_cluster_property(Ambient& ambient, ShapeCatalog& catalog, const CosetExtension& ce);

struct BridgeFreeResult {
  bool holds = true;
  std::string reason;
  LetterSet b;
  std::optional<std::pair<VertexId, VertexId>> witness;
};
BridgeFreeResult is_bridge_free(Ambient& ambient, const CosetExtension& ce);

// B-component n C-component is a (B n C)-component in the built extension (full P_A only).
std::optional<std::string> check_component_intersections(const CosetExtension& ce);

// CE glued with v.G[B] along the B-component of v.
ElementGraph augmented_ce(Ambient& ambient, const CosetExtension& ce, VertexId v, LetterSet b);
ElementGraph augment(Ambient& ambient, const ElementGraph& g, VertexId v, LetterSet b);

}  // namespace fgapprox
