#pragma once

// Small input graphs and naive reference implementations shared by the tests.

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "fgapprox/egroup.hpp"
#include "fgapprox/sgraph.hpp"

namespace fgtest {

using namespace fgapprox;

inline std::shared_ptr<const LabelledGraph> make_graph(const std::vector<std::string>& vertices,
                                                       const std::vector<InputEdge>& edges) {
  return std::make_shared<const LabelledGraph>(build_graph(vertices, edges));
}

inline auto single_edge() { return make_graph({"u", "v"}, {{"a", "u", "v"}}); }
inline auto single_loop() { return make_graph({"u"}, {{"a", "u", "u"}}); }
inline auto path2() { return make_graph({"u", "v", "w"}, {{"a", "u", "v"}, {"b", "v", "w"}}); }
// a: u -> v, b: w -> v; swapping a and b (and u, w) is an orientation-preserving automorphism.
inline auto path2_symmetric() { return make_graph({"u", "v", "w"}, {{"a", "u", "v"}, {"b", "w", "v"}}); }
inline auto double_edge() { return make_graph({"u", "v"}, {{"a", "u", "v"}, {"b", "u", "v"}}); }
inline auto edge_and_loop() { return make_graph({"u", "v"}, {{"a", "u", "v"}, {"b", "v", "v"}}); }
inline auto path3() {
  return make_graph({"p0", "p1", "p2", "p3"}, {{"a", "p0", "p1"}, {"b", "p1", "p2"}, {"c", "p2", "p3"}});
}

using Images = std::vector<std::uint32_t>;

inline Images compose(const Images& x, const Images& y) {
  Images z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = y[x[i]];
  return z;
}

inline Images images_of(const Permutation& p) { return {p.images().begin(), p.images().end()}; }

inline Images identity_images(std::size_t n) {
  Images id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<std::uint32_t>(i);
  return id;
}

// G[A] by plain breadth-first closure over std::set.
inline std::set<Images> naive_subgroup(const EGroup& g, LetterSet a) {
  std::set<Images> seen{identity_images(g.degree())};
  std::deque<Images> queue{identity_images(g.degree())};
  while (!queue.empty()) {
    Images x = queue.front();
    queue.pop_front();
    for (Letter l : a)
      for (bool inv : {false, true}) {
        Images y = compose(x, images_of(g.gen({l, inv})));
        if (seen.insert(y).second) queue.push_back(y);
      }
  }
  return seen;
}

// Exact retractability of G[A]: the letter deletions are well defined on every edge of the Cayley graph.
inline bool naive_retractable(const EGroup& g, LetterSet a) {
  for (Letter x : a) {
    auto del = [&](SignedLetter s) { return s.letter == x ? identity_images(g.degree()) : images_of(g.gen(s)); };
    std::map<Images, Images> image{{identity_images(g.degree()), identity_images(g.degree())}};
    std::deque<Images> queue{identity_images(g.degree())};
    while (!queue.empty()) {
      Images v = queue.front();
      queue.pop_front();
      for (Letter l : a)
        for (bool inv : {false, true}) {
          SignedLetter s{l, inv};
          Images w = compose(v, images_of(g.gen(s)));
          Images target = compose(image.at(v), del(s));
          auto [it, fresh] = image.emplace(w, target);
          if (fresh) {
            queue.push_back(w);
          } else if (it->second != target) {
            return false;
          }
        }
    }
  }
  return true;
}

// Elements reachable by words over A of length at most `depth`.
inline std::set<Images> ball(const EGroup& g, LetterSet a, std::size_t depth) {
  std::set<Images> seen{identity_images(g.degree())};
  std::vector<Images> layer{identity_images(g.degree())};
  for (std::size_t d = 0; d < depth && !layer.empty(); ++d) {
    std::vector<Images> next;
    for (const auto& x : layer)
      for (Letter l : a)
        for (bool inv : {false, true}) {
          Images y = compose(x, images_of(g.gen({l, inv})));
          if (seen.insert(y).second) next.push_back(y);
        }
    layer = std::move(next);
  }
  return seen;
}

// Content by exhaustive search: the least letter set whose words of length <= depth reach [p],
// or nullopt if the sets reaching [p] have no least element.
inline std::optional<LetterSet> naive_content(const EGroup& g, const Word& p, std::size_t depth = 8) {
  Images target = images_of(g.eval(p));
  std::vector<LetterSet> reaching;
  for (LetterSet c : all_subsets(g.alphabet()))
    if (ball(g, c, depth).count(target)) reaching.push_back(c);
  if (reaching.empty()) return std::nullopt;
  LetterSet meet = reaching.front();
  for (LetterSet c : reaching) meet = meet & c;
  if (std::find(reaching.begin(), reaching.end(), meet) == reaching.end()) return std::nullopt;
  return meet;
}

// Vertices of the A-component of v, by breadth-first search over out_edges.
inline std::set<VertexId> naive_component(const LabelledGraph& g, VertexId v, LetterSet a) {
  std::set<VertexId> seen{v};
  std::deque<VertexId> queue{v};
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    for (EdgeId e : g.out_edges(x))
      if (a.contains(g.label(e).letter) && seen.insert(g.omega(e)).second) queue.push_back(g.omega(e));
  }
  return seen;
}

// A random E-graph on n vertices with m edges over `letters` letters (not necessarily an E-graph).
inline LabelledGraph random_graph(std::size_t n, std::size_t m, std::size_t letters, std::mt19937_64& rng) {
  GraphBuilder b(letters);
  b.add_vertices(n);
  std::uniform_int_distribution<VertexId> vd(0, static_cast<VertexId>(n - 1));
  std::uniform_int_distribution<Letter> ld(0, static_cast<Letter>(letters - 1));
  for (std::size_t i = 0; i < m; ++i) b.add_edge(vd(rng), vd(rng), ld(rng));
  return std::move(b).build();
}

inline Permutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  Images img = identity_images(n);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(std::move(img));
}

inline std::shared_ptr<EGroup> random_group(std::size_t degree, std::size_t letters, std::mt19937_64& rng) {
  std::vector<Permutation> gens;
  for (std::size_t i = 0; i < letters; ++i) gens.push_back(random_permutation(degree, rng));
  return std::make_shared<EGroup>(degree, std::move(gens));
}

}  // namespace fgtest
