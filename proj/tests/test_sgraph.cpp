#include <doctest.h>

#include <numeric>
#include <random>

#include "fgapprox/io.hpp"
#include "fgapprox/sgraph.hpp"
#include "test_support.hpp"

using namespace fgapprox;
using namespace fgtest;

TEST_CASE("letter sets: graded order and subset enumeration") {
  LetterSet ab{0, 1};
  LetterSet c{2};
  CHECK(c < ab);  // smaller sets first
  CHECK(LetterSet{0} < LetterSet{1});
  CHECK(ab.size() == 2);
  CHECK((ab | c) == LetterSet::first_n(3));
  CHECK((ab - LetterSet{0}) == LetterSet{1});

  auto all = all_subsets(LetterSet::first_n(4));
  CHECK(all.size() == 16);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(subsets_of_size(LetterSet::first_n(5), 2).size() == 10);
  CHECK(proper_subsets(ab).size() == 3);
}

TEST_CASE("words: reduction, inversion and deletion") {
  Word p{pos(0), pos(1), neg(1), neg(0), pos(2)};
  CHECK(free_reduce(p) == Word{pos(2)});
  CHECK(inverse(Word{pos(0), neg(1)}) == Word{pos(1), neg(0)});
  CHECK(delete_letters(p, LetterSet{1}) == Word{pos(0), neg(0), pos(2)});
  CHECK(letters_of(p) == LetterSet{0, 1, 2});
  CHECK(render_word(Word{pos(0), neg(1)}, {"a", "b"}) == "a b^-1");
}

TEST_CASE("input graph: one letter per edge, paths follow orientation") {
  auto g = path2();
  CHECK(g->vertex_count() == 3);
  CHECK(g->positive_edge_count() == 2);
  CHECK(g->alphabet_size() == 2);
  VertexId u = *g->find_vertex("u"), v = *g->find_vertex("v"), w = *g->find_vertex("w");
  CHECK(g->follow(u, pos(0)) == v);
  CHECK(g->follow(v, neg(0)) == u);
  CHECK(g->follow(u, pos(1)) == no_vertex);
  auto path = path_from(*g, u, Word{pos(0), pos(1)});
  REQUIRE(path);
  CHECK(path_end(*g, *path) == w);
  CHECK(path_label(*g, *path) == Word{pos(0), pos(1)});
  CHECK_FALSE(path_from(*g, u, Word{pos(1)}));
}

TEST_CASE("completeness and trivial completion") {
  auto g = single_edge();
  CHECK_FALSE(is_complete(*g));
  CHECK_FALSE(is_weakly_complete(*g));  // a leaves u but never enters it

  GraphBuilder b(2);
  b.add_vertices(2);
  b.add_edge(0, 1, 0);
  b.add_edge(1, 0, 0);
  LabelledGraph cyc = std::move(b).build();
  CHECK(is_weakly_complete(cyc));
  CHECK_FALSE(is_complete(cyc));
  LabelledGraph done = trivial_completion(cyc);
  CHECK(is_complete(done));
  CHECK(done.positive_edge_count() == 4);
  CHECK(done.follow(0, pos(1)) == 0);
}

TEST_CASE("property: component partition agrees with breadth-first search") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    LabelledGraph g = random_graph(12, 14, 3, rng);
    for (LetterSet a : all_subsets(LetterSet::first_n(3))) {
      Partition p = component_partition(g, a);
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto naive = naive_component(g, v, a);
        Selection s = component_selection(g, v, a);
        CHECK(std::set<VertexId>(s.vertices.begin(), s.vertices.end()) == naive);
        for (VertexId x = 0; x < g.vertex_count(); ++x)
          CHECK((p.class_of[x] == p.class_of[v]) == (naive.count(x) == 1));
      }
    }
  }
}

TEST_CASE("property: canonical code is invariant under vertex relabelling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    // random connected E-graph: a permutation per letter on n points, restricted to one orbit
    const std::size_t n = 7;
    GraphBuilder b(2);
    b.add_vertices(n);
    for (Letter a = 0; a < 2; ++a) {
      Permutation p = random_permutation(n, rng);
      for (VertexId v = 0; v < n; ++v) b.add_edge(v, p[v], a);
    }
    LabelledGraph g = std::move(b).build();
    if (!is_connected(g)) continue;

    std::vector<VertexId> relabel(n);
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    GraphBuilder b2(2);
    b2.add_vertices(n);
    for (std::size_t i = 0; i < g.positive_edge_count(); ++i) {
      EdgeId e = LabelledGraph::positive_edge(i);
      b2.add_edge(relabel[g.alpha(e)], relabel[g.omega(e)], g.label(e).letter);
    }
    LabelledGraph h = std::move(b2).build();
    CHECK(canonical_code(g) == canonical_code(h));
    auto iso = labelled_isomorphic(g, h);
    REQUIRE(iso);
    CHECK(is_morphism(g, h, iso->vertex_map, iso->edge_map));
  }
}

TEST_CASE("quotient by a congruence and rejection of incompatible partitions") {
  // two parallel a-edges between 0 -> 1 and 2 -> 3; identify 0~2, 1~3 and the edges
  GraphBuilder b(1);
  b.add_vertices(4);
  b.add_edge(0, 1, 0);
  b.add_edge(2, 3, 0);
  LabelledGraph g = std::move(b).build();
  GraphCongruence theta(g, {0, 1, 0, 1}, {0, 1, 0, 1});
  Quotient q = quotient(g, theta);
  CHECK(q.graph.vertex_count() == 2);
  CHECK(q.graph.positive_edge_count() == 1);
  CHECK(is_morphism(g, q.graph, q.vertex_map, q.edge_map));

  CHECK_THROWS_AS(GraphCongruence(g, {0, 1, 2, 3}, {0, 1, 0, 1}), GraphError);  // edges glued, sources not
}

TEST_CASE("disjoint union offsets") {
  GraphBuilder b(2);
  b.add_vertices(2);
  b.add_edge(0, 1, 0);
  LabelledGraph edge = std::move(b).build();
  LabelledGraph path = *path2();
  std::vector<const LabelledGraph*> parts{&edge, &path};
  DisjointUnion u = disjoint_union(parts);
  CHECK(u.graph.vertex_count() == 5);
  CHECK(u.graph.positive_edge_count() == 3);
  CHECK(u.vertex_offset[1] == 2);
  CHECK(component_partition(u.graph, LetterSet::first_n(2)).count == 2);
}

TEST_CASE("graph files: round trip and errors with line and column") {
  const char* text =
      "sgraph 1\n"
      "# comment\n"
      "v u\n"
      "v v\n"
      "e a u v\n"
      "e b v v\n";
  LabelledGraph g = parse_graph(std::string_view(text));
  CHECK(g.vertex_count() == 2);
  CHECK(g.letter_names() == std::vector<std::string>{"a", "b"});
  LabelledGraph h = parse_graph(std::string_view(write_graph(g)));
  CHECK(canonical_code(g) == canonical_code(h));

  auto error_at = [](const char* bad) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_graph(std::string_view(bad));
    } catch (const ParseError& e) {
      return {e.line, e.column};
    }
    return {0, 0};
  };
  CHECK(error_at("sgraph 1\nv u\ne a u x\n") == std::pair<std::size_t, std::size_t>{3, 7});
  CHECK(error_at("sgraph 1\nv u\nv u\n") == std::pair<std::size_t, std::size_t>{3, 3});
  CHECK(error_at("sgraph 2\n") == std::pair<std::size_t, std::size_t>{1, 8});
  CHECK(error_at("sgraph 1\n  edge a\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(error_at("graph 1\n") == std::pair<std::size_t, std::size_t>{1, 1});
}
