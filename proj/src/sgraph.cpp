#include "fgapprox/sgraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

namespace fgapprox {

std::string LabelledGraph::vertex_name(VertexId v) const {
  if (v < vertex_names_.size() && !vertex_names_[v].empty()) return vertex_names_[v];
  return std::to_string(v);
}

std::optional<VertexId> LabelledGraph::find_vertex(const std::string& name) const {
  auto it = std::find(vertex_names_.begin(), vertex_names_.end(), name);
  if (it == vertex_names_.end()) return std::nullopt;
  return static_cast<VertexId>(it - vertex_names_.begin());
}

std::optional<Letter> LabelledGraph::find_letter(const std::string& name) const {
  auto it = std::find(letter_names_.begin(), letter_names_.end(), name);
  if (it == letter_names_.end()) return std::nullopt;
  return static_cast<Letter>(it - letter_names_.begin());
}

VertexId GraphBuilder::add_vertex(std::string name) {
  if (!name.empty()) named_ = true;
  vertex_names_.push_back(std::move(name));
  return static_cast<VertexId>(vertex_count_++);
}

VertexId GraphBuilder::add_vertices(std::size_t n) {
  auto first = static_cast<VertexId>(vertex_count_);
  vertex_count_ += n;
  vertex_names_.resize(vertex_count_);
  return first;
}

EdgeId GraphBuilder::add_edge(VertexId src, VertexId dst, Letter a) {
  if (src >= vertex_count_ || dst >= vertex_count_) throw GraphError("edge endpoint out of range");
  if (a >= alphabet_) throw GraphError("edge label outside alphabet");
  src_.push_back(src);
  dst_.push_back(dst);
  letter_.push_back(a);
  return LabelledGraph::positive_edge(src_.size() - 1);
}

LabelledGraph GraphBuilder::build() && {
  LabelledGraph g;
  g.vertex_count_ = vertex_count_;
  g.alphabet_ = alphabet_;
  g.src_ = std::move(src_);
  g.dst_ = std::move(dst_);
  g.letter_ = std::move(letter_);
  if (named_) g.vertex_names_ = std::move(vertex_names_);
  g.letter_names_ = std::move(letter_names_);

  const std::size_t n = g.vertex_count_;
  const std::size_t m = g.edge_count();
  std::vector<std::uint32_t> degree(n + 1, 0);
  for (EdgeId e = 0; e < m; ++e) ++degree[g.alpha(e) + 1];
  g.out_offset_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.out_offset_[v + 1] = g.out_offset_[v] + degree[v + 1];
  g.out_list_.resize(m);
  std::vector<std::uint32_t> fill(g.out_offset_.begin(), g.out_offset_.end() - 1);
  for (EdgeId e = 0; e < m; ++e) g.out_list_[fill[g.alpha(e)]++] = e;

  g.table_.assign(n * 2 * g.alphabet_, no_edge);
  for (EdgeId e = 0; e < m; ++e) {
    auto& slot = g.table_[static_cast<std::size_t>(g.alpha(e)) * 2 * g.alphabet_ + g.label(e).code()];
    if (slot == no_edge)
      slot = e;
    else
      g.e_graph_ = false;
  }
  return g;
}

LabelledGraph build_graph(const std::vector<std::string>& vertices, const std::vector<InputEdge>& edges) {
  GraphBuilder b(edges.size());
  std::unordered_map<std::string, VertexId> index;
  for (const auto& name : vertices) {
    if (!index.emplace(name, b.vertex_count()).second) throw GraphError("duplicate vertex id '" + name + "'");
    b.add_vertex(name);
  }
  std::vector<std::string> names;
  std::unordered_map<std::string, int> seen;
  for (const auto& e : edges) {
    if (!seen.emplace(e.id, 0).second) throw GraphError("duplicate edge id '" + e.id + "'");
    auto s = index.find(e.src);
    auto d = index.find(e.dst);
    if (s == index.end()) throw GraphError("edge '" + e.id + "' has dangling endpoint '" + e.src + "'");
    if (d == index.end()) throw GraphError("edge '" + e.id + "' has dangling endpoint '" + e.dst + "'");
    b.add_edge(s->second, d->second, static_cast<Letter>(names.size()));
    names.push_back(e.id);
  }
  b.set_letter_names(std::move(names));
  return std::move(b).build();
}

VertexId path_end(const LabelledGraph& g, const Path& p) {
  return p.edges.empty() ? p.start : g.omega(p.edges.back());
}

Word path_label(const LabelledGraph& g, const Path& p) {
  Word w;
  w.reserve(p.edges.size());
  for (EdgeId e : p.edges) w.push_back(g.label(e));
  return w;
}

std::optional<Path> path_from(const LabelledGraph& g, VertexId v, const Word& p) {
  Path path{v, {}};
  path.edges.reserve(p.size());
  for (SignedLetter s : p) {
    if (s.letter >= g.alphabet_size()) return std::nullopt;
    EdgeId e = g.out_edge(v, s);
    if (e == no_edge) return std::nullopt;
    path.edges.push_back(e);
    v = g.omega(e);
  }
  return path;
}

Selection component_selection(const LabelledGraph& g, VertexId v, LetterSet a) {
  if (v >= g.vertex_count()) throw GraphError("vertex not in graph");
  std::vector<char> seen(g.vertex_count(), 0);
  Selection s;
  std::vector<VertexId> stack{v};
  seen[v] = 1;
  while (!stack.empty()) {
    VertexId x = stack.back();
    stack.pop_back();
    s.vertices.push_back(x);
    for (EdgeId e : g.out_edges(x)) {
      if (!a.contains(g.label(e).letter)) continue;
      if (LabelledGraph::is_positive(e)) s.positive_edges.push_back(e);
      VertexId y = g.omega(e);
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  std::sort(s.vertices.begin(), s.vertices.end());
  std::sort(s.positive_edges.begin(), s.positive_edges.end());
  return s;
}

Partition component_partition(const LabelledGraph& g, LetterSet a) {
  Partition p;
  p.class_of.assign(g.vertex_count(), UINT32_MAX);
  std::vector<VertexId> stack;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (p.class_of[v] != UINT32_MAX) continue;
    auto c = static_cast<std::uint32_t>(p.count++);
    p.class_of[v] = c;
    stack.push_back(v);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (EdgeId e : g.out_edges(x)) {
        if (!a.contains(g.label(e).letter)) continue;
        VertexId y = g.omega(e);
        if (p.class_of[y] == UINT32_MAX) {
          p.class_of[y] = c;
          stack.push_back(y);
        }
      }
    }
  }
  return p;
}

Selection span_closure(const LabelledGraph& g, std::span<const VertexId> vertices, std::span<const EdgeId> edges) {
  Selection s;
  s.vertices.assign(vertices.begin(), vertices.end());
  for (EdgeId e : edges) {
    s.positive_edges.push_back(e & ~1U);
    s.vertices.push_back(g.alpha(e));
    s.vertices.push_back(g.omega(e));
  }
  std::sort(s.vertices.begin(), s.vertices.end());
  s.vertices.erase(std::unique(s.vertices.begin(), s.vertices.end()), s.vertices.end());
  std::sort(s.positive_edges.begin(), s.positive_edges.end());
  s.positive_edges.erase(std::unique(s.positive_edges.begin(), s.positive_edges.end()), s.positive_edges.end());
  return s;
}

Extracted extract(const LabelledGraph& g, const Selection& s) {
  Extracted out;
  GraphBuilder b(g.alphabet_size());
  b.set_letter_names(g.letter_names());
  std::unordered_map<VertexId, VertexId> local;
  for (VertexId v : s.vertices) {
    local.emplace(v, b.add_vertex(v < g.vertex_names().size() ? g.vertex_names()[v] : std::string{}));
    out.vertex_origin.push_back(v);
  }
  for (EdgeId e : s.positive_edges) {
    auto a = local.find(g.alpha(e));
    auto w = local.find(g.omega(e));
    if (a == local.end() || w == local.end()) throw GraphError("selection is not closed under alpha");
    b.add_edge(a->second, w->second, g.label(e).letter);
    out.edge_origin.push_back(e);
  }
  out.graph = std::move(b).build();
  return out;
}

Extracted component(const LabelledGraph& g, VertexId v, LetterSet a) { return extract(g, component_selection(g, v, a)); }

bool is_connected(const LabelledGraph& g) {
  if (g.vertex_count() == 0) return true;
  return component_partition(g, LetterSet::first_n(g.alphabet_size())).count == 1;
}

bool is_complete(const LabelledGraph& g) {
  if (!g.is_e_graph()) return false;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (std::uint32_t c = 0; c < 2 * g.alphabet_size(); ++c)
      if (g.out_edge(v, SignedLetter::from_code(c)) == no_edge) return false;
  return true;
}

bool is_weakly_complete(const LabelledGraph& g) {
  if (!g.is_e_graph()) return false;
  // Each letter's partial map must be a permutation of its domain: out-edge iff in-edge.
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (Letter a = 0; a < g.alphabet_size(); ++a)
      if ((g.out_edge(v, pos(a)) == no_edge) != (g.out_edge(v, neg(a)) == no_edge)) return false;
  return true;
}

LabelledGraph trivial_completion(const LabelledGraph& g) {
  if (!is_weakly_complete(g)) throw GraphError("trivial completion needs a weakly complete graph");
  GraphBuilder b(g.alphabet_size());
  b.set_letter_names(g.letter_names());
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    b.add_vertex(v < g.vertex_names().size() ? g.vertex_names()[v] : std::string{});
  for (std::size_t i = 0; i < g.positive_edge_count(); ++i) {
    EdgeId e = LabelledGraph::positive_edge(i);
    b.add_edge(g.alpha(e), g.omega(e), g.label(e).letter);
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (Letter a = 0; a < g.alphabet_size(); ++a)
      if (g.out_edge(v, pos(a)) == no_edge) b.add_edge(v, v, a);
  return std::move(b).build();
}


DisjointUnion disjoint_union(std::span<const LabelledGraph* const> parts) {
  std::size_t alphabet = 0;
  const std::vector<std::string>* names = nullptr;
  for (const auto* p : parts) {
    if (p->alphabet_size() >= alphabet) {
      alphabet = p->alphabet_size();
      names = &p->letter_names();
    }
  }
  GraphBuilder b(alphabet);
  if (names != nullptr) b.set_letter_names(*names);
  DisjointUnion u;
  for (const auto* p : parts) {
    VertexId off = b.add_vertices(p->vertex_count());
    u.vertex_offset.push_back(off);
  }
  std::size_t edges = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = *parts[i];
    u.edge_offset.push_back(static_cast<EdgeId>(2 * edges));
    for (std::size_t j = 0; j < p.positive_edge_count(); ++j) {
      EdgeId e = LabelledGraph::positive_edge(j);
      b.add_edge(u.vertex_offset[i] + p.alpha(e), u.vertex_offset[i] + p.omega(e), p.label(e).letter);
    }
    edges += p.positive_edge_count();
  }
  u.graph = std::move(b).build();
  return u;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::add() {
  parent_.push_back(parent_.size());
  rank_.push_back(0);
  return parent_.size() - 1;
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (rank_[x] < rank_[y]) std::swap(x, y);
  parent_[y] = x;
  if (rank_[x] == rank_[y]) ++rank_[x];
  return true;
}

namespace {
std::size_t normalize_classes(std::vector<std::uint32_t>& cls) {
  std::unordered_map<std::uint32_t, std::uint32_t> renumber;
  for (auto& c : cls) c = renumber.emplace(c, static_cast<std::uint32_t>(renumber.size())).first->second;
  return renumber.size();
}
}  // namespace

GraphCongruence::GraphCongruence(const LabelledGraph& g, std::vector<std::uint32_t> vertex_class,
                                 std::vector<std::uint32_t> edge_class)
    : vertex_class_(std::move(vertex_class)), edge_class_(std::move(edge_class)) {
  if (vertex_class_.size() != g.vertex_count() || edge_class_.size() != g.edge_count())
    throw GraphError("congruence size mismatch");
  vertex_classes_ = normalize_classes(vertex_class_);
  normalize_classes(edge_class_);
  // representative edge per class; every member must agree with it
  std::unordered_map<std::uint32_t, EdgeId> rep;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [it, fresh] = rep.emplace(edge_class_[e], e);
    if (fresh) continue;
    EdgeId f = it->second;
    if (g.label(e) != g.label(f))
      throw GraphError("congruence identifies edges " + std::to_string(e) + " and " + std::to_string(f) +
                       " with different labels");
    if (vertex_class_[g.alpha(e)] != vertex_class_[g.alpha(f)])
      throw GraphError("congruence is not compatible with alpha at edges " + std::to_string(e) + ", " +
                       std::to_string(f));
    if (edge_class_[LabelledGraph::inv(e)] != edge_class_[LabelledGraph::inv(f)])
      throw GraphError("congruence is not compatible with inv at edges " + std::to_string(e) + ", " +
                       std::to_string(f));
  }
}

GraphCongruence GraphCongruence::identity(const LabelledGraph& g) {
  std::vector<std::uint32_t> v(g.vertex_count()), e(g.edge_count());
  std::iota(v.begin(), v.end(), 0U);
  std::iota(e.begin(), e.end(), 0U);
  return GraphCongruence(g, std::move(v), std::move(e));
}

Quotient quotient(const LabelledGraph& g, const GraphCongruence& theta) {
  Quotient q;
  GraphBuilder b(g.alphabet_size());
  b.set_letter_names(g.letter_names());
  b.add_vertices(theta.vertex_class_count());
  q.vertex_map.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) q.vertex_map[v] = theta.vertex_class(v);
  q.edge_map.assign(g.edge_count(), no_edge);
  std::unordered_map<std::uint32_t, EdgeId> made;
  for (EdgeId e = 0; e < g.edge_count(); e += 2) {
    auto it = made.find(theta.edge_class(e));
    if (it == made.end()) {
      EdgeId ne = b.add_edge(theta.vertex_class(g.alpha(e)), theta.vertex_class(g.omega(e)), g.label(e).letter);
      it = made.emplace(theta.edge_class(e), ne).first;
    }
    q.edge_map[e] = it->second;
    q.edge_map[e + 1] = LabelledGraph::inv(it->second);
  }
  q.graph = std::move(b).build();
  return q;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return h ^ x;
}

// Isomorphism-invariant vertex colours by iterated neighbourhood hashing.
std::vector<std::uint64_t> refine_colours(const LabelledGraph& g, int rounds) {
  std::vector<std::uint64_t> colour(g.vertex_count(), 1);
  std::vector<std::uint64_t> next(g.vertex_count());
  std::vector<std::uint64_t> items;
  for (int r = 0; r < rounds; ++r) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      items.clear();
      for (EdgeId e : g.out_edges(v)) {
        std::uint64_t loop = g.omega(e) == v ? 1 : 0;
        items.push_back(mix(mix(g.label(e).code(), colour[g.omega(e)]), loop));
      }
      std::sort(items.begin(), items.end());
      std::uint64_t h = mix(colour[v], items.size());
      for (auto x : items) h = mix(h, x);
      next[v] = h;
    }
    colour.swap(next);
  }
  return colour;
}

struct IsoSearch {
  const LabelledGraph& g1;
  const LabelledGraph& g2;
  std::vector<std::uint64_t> c1, c2;
  std::vector<VertexId> order;
  std::vector<VertexId> fwd, bwd;

  bool consistent(VertexId u, VertexId w) {
    if (c1[u] != c2[w]) return false;
    // compare multisets of (label, mapped target) over edges into the mapped part
    std::map<std::pair<std::uint32_t, VertexId>, int> bal;
    for (EdgeId e : g1.out_edges(u)) {
      VertexId t = g1.omega(e);
      VertexId ft = t == u ? w : fwd[t];
      if (ft != no_vertex) ++bal[{g1.label(e).code(), ft}];
    }
    for (EdgeId e : g2.out_edges(w)) {
      VertexId t = g2.omega(e);
      bool mapped = t == w || bwd[t] != no_vertex;
      if (mapped) --bal[{g2.label(e).code(), t}];
    }
    return std::all_of(bal.begin(), bal.end(), [](const auto& kv) { return kv.second == 0; });
  }

  std::vector<VertexId> candidates(VertexId u) {
    for (EdgeId e : g1.out_edges(u)) {
      VertexId x = g1.omega(e);
      if (x == u || fwd[x] == no_vertex) continue;
      // u is reached from x by inv(e); candidates are the matching neighbours of fwd[x]
      SignedLetter s = g1.label(LabelledGraph::inv(e));
      std::vector<VertexId> out;
      for (EdgeId f : g2.out_edges(fwd[x]))
        if (g2.label(f) == s && bwd[g2.omega(f)] == no_vertex) out.push_back(g2.omega(f));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    std::vector<VertexId> out;
    for (VertexId w = 0; w < g2.vertex_count(); ++w)
      if (bwd[w] == no_vertex && c2[w] == c1[u]) out.push_back(w);
    return out;
  }

  bool search(std::size_t i) {
    if (i == order.size()) return true;
    VertexId u = order[i];
    for (VertexId w : candidates(u)) {
      if (!consistent(u, w)) continue;
      fwd[u] = w;
      bwd[w] = u;
      if (search(i + 1)) return true;
      fwd[u] = no_vertex;
      bwd[w] = no_vertex;
    }
    return false;
  }
};

}  // namespace

std::optional<Isomorphism> labelled_isomorphic(const LabelledGraph& g1, const LabelledGraph& g2) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() ||
      g1.alphabet_size() != g2.alphabet_size())
    return std::nullopt;
  IsoSearch s{g1, g2, refine_colours(g1, 4), refine_colours(g2, 4), {}, {}, {}};
  {
    auto a = s.c1, b = s.c2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  // breadth-first order so that every vertex after a component root has a mapped neighbour
  std::vector<char> seen(g1.vertex_count(), 0);
  for (VertexId r = 0; r < g1.vertex_count(); ++r) {
    if (seen[r]) continue;
    std::deque<VertexId> q{r};
    seen[r] = 1;
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      s.order.push_back(x);
      for (EdgeId e : g1.out_edges(x))
        if (!seen[g1.omega(e)]) {
          seen[g1.omega(e)] = 1;
          q.push_back(g1.omega(e));
        }
    }
  }
  s.fwd.assign(g1.vertex_count(), no_vertex);
  s.bwd.assign(g2.vertex_count(), no_vertex);
  if (!s.search(0)) return std::nullopt;

  Isomorphism iso;
  iso.vertex_map = s.fwd;
  iso.edge_map.assign(g1.edge_count(), no_edge);
  std::vector<char> used(g2.edge_count(), 0);
  for (EdgeId e = 0; e < g1.edge_count(); e += 2) {
    VertexId a = s.fwd[g1.alpha(e)], w = s.fwd[g1.omega(e)];
    for (EdgeId f : g2.out_edges(a)) {
      if (!LabelledGraph::is_positive(f) || used[f] || g2.label(f) != g1.label(e) || g2.omega(f) != w) continue;
      used[f] = 1;
      iso.edge_map[e] = f;
      iso.edge_map[e + 1] = LabelledGraph::inv(f);
      break;
    }
    if (iso.edge_map[e] == no_edge) return std::nullopt;
  }
  return iso;
}

namespace {

// Breadth-first numbering from `base`; returns the transition table in that numbering.
std::vector<std::uint32_t> code_from(const LabelledGraph& g, VertexId base, std::vector<std::uint32_t>& number,
                                     std::vector<VertexId>& order) {
  const std::size_t sl = 2 * g.alphabet_size();
  std::fill(number.begin(), number.end(), UINT32_MAX);
  order.clear();
  number[base] = 0;
  order.push_back(base);
  std::vector<std::uint32_t> code;
  code.reserve(2 + g.vertex_count() * sl);
  code.push_back(static_cast<std::uint32_t>(g.vertex_count()));
  code.push_back(static_cast<std::uint32_t>(g.alphabet_size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    VertexId x = order[i];
    for (std::uint32_t c = 0; c < sl; ++c) {
      VertexId y = g.follow(x, SignedLetter::from_code(c));
      if (y == no_vertex) {
        code.push_back(0);
        continue;
      }
      if (number[y] == UINT32_MAX) {
        number[y] = static_cast<std::uint32_t>(order.size());
        order.push_back(y);
      }
      code.push_back(number[y] + 1);
    }
  }
  return code;
}

}  // namespace

std::vector<std::uint32_t> canonical_code(const LabelledGraph& g) {
  if (!g.is_e_graph()) throw GraphError("canonical code needs an E-graph");
  if (g.vertex_count() == 0) return {0, static_cast<std::uint32_t>(g.alphabet_size())};
  auto colour = refine_colours(g, 3);
  std::uint64_t best_colour = *std::min_element(colour.begin(), colour.end());
  std::vector<std::uint32_t> number(g.vertex_count());
  std::vector<VertexId> order;
  std::vector<std::uint32_t> best;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (colour[v] != best_colour) continue;
    auto code = code_from(g, v, number, order);
    if (order.size() != g.vertex_count()) throw GraphError("canonical code needs a connected graph");
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

std::vector<Isomorphism> e_graph_isomorphisms(const LabelledGraph& g1, VertexId base1, const LabelledGraph& g2) {
  std::vector<Isomorphism> out;
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() ||
      g1.alphabet_size() != g2.alphabet_size() || !g1.is_e_graph() || !g2.is_e_graph())
    return out;
  std::vector<std::uint32_t> n1(g1.vertex_count()), n2(g2.vertex_count());
  std::vector<VertexId> o1, o2;
  auto code1 = code_from(g1, base1, n1, o1);
  if (o1.size() != g1.vertex_count()) throw GraphError("isomorphism search needs a connected graph");
  for (VertexId b = 0; b < g2.vertex_count(); ++b) {
    if (code_from(g2, b, n2, o2) != code1) continue;
    Isomorphism iso;
    iso.vertex_map.resize(g1.vertex_count());
    for (std::size_t i = 0; i < o1.size(); ++i) iso.vertex_map[o1[i]] = o2[i];
    iso.edge_map.resize(g1.edge_count());
    for (EdgeId e = 0; e < g1.edge_count(); ++e) iso.edge_map[e] = g2.out_edge(iso.vertex_map[g1.alpha(e)], g1.label(e));
    out.push_back(std::move(iso));
  }
  return out;
}

bool is_morphism(const LabelledGraph& src, const LabelledGraph& dst, std::span<const VertexId> vmap,
                 std::span<const EdgeId> emap) {
  if (vmap.size() != src.vertex_count() || emap.size() != src.edge_count()) return false;
  for (EdgeId e = 0; e < src.edge_count(); ++e) {
    EdgeId f = emap[e];
    if (f == no_edge || f >= dst.edge_count()) return false;
    if (dst.label(f) != src.label(e)) return false;
    if (dst.alpha(f) != vmap[src.alpha(e)]) return false;
    if (emap[LabelledGraph::inv(e)] != LabelledGraph::inv(f)) return false;
  }
  return true;
}

void check_well_formed(const LabelledGraph& g) {
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    EdgeId f = LabelledGraph::inv(e);
    if (f == e || LabelledGraph::inv(f) != e) throw GraphError("inv is not a fixed-point-free involution");
    if (g.alpha(f) != g.omega(e) || g.omega(f) != g.alpha(e)) throw GraphError("alpha(inv e) != omega(e)");
    if (g.label(f) != g.label(e).inverted()) throw GraphError("label(inv e) != label(e)^-1");
    if (g.alpha(e) >= g.vertex_count() || g.omega(e) >= g.vertex_count()) throw GraphError("dangling edge");
    if (g.label(e).letter >= g.alphabet_size()) throw GraphError("label outside alphabet");
  }
}

}  // namespace fgapprox
