#include <doctest.h>

#include <random>

#include "fgapprox/tower.hpp"
#include "test_support.hpp"

using namespace fgapprox;
using namespace fgtest;

TEST_CASE("closing edges into cycles") {
  auto se = single_edge();
  LabelledGraph x2 = build_x1(*se, 2);
  CHECK(x2.vertex_count() == 2);
  CHECK(is_complete(x2));
  LabelledGraph x3 = build_x1(*se, 3);
  CHECK(x3.vertex_count() == 3);
  CHECK(is_complete(x3));
  // loops stay loops
  LabelledGraph xl = build_x1(*single_loop(), 4);
  CHECK(xl.vertex_count() == 1);
  CHECK(xl.follow(0, pos(0)) == 0);
  CHECK_THROWS_AS(build_x1(*se, 1), std::invalid_argument);

  GraphBuilder b(1);
  b.add_vertices(3);
  b.add_edge(0, 1, 0);
  b.add_edge(1, 2, 0);
  LabelledGraph closed = close_paths(std::move(b).build());
  CHECK(is_weakly_complete(closed));
  CHECK(closed.vertex_count() == 3);
}

TEST_CASE("single edge and single loop") {
  Tower se = build_chain(single_edge());
  CHECK(se.complete());
  CHECK(se.levels().size() == 1);
  CHECK(se.levels()[0].g_order == 2);
  const Permutation& a = se.group().gen(pos(0));
  CHECK_FALSE(a.is_identity());
  CHECK(a.then(a).is_identity());

  Tower sl = build_chain(single_loop());
  CHECK(sl.complete());
  CHECK(sl.levels()[0].g_order == 1);
}

TEST_CASE("two-edge path: full chain with all conditions") {
  Tower t = build_chain(path2());
  REQUIRE(t.complete());
  CHECK_FALSE(t.check_failed());
  CHECK_FALSE(t.truncated());
  CHECK(t.certified_grade() == 2);
  const auto& lv = t.levels();
  REQUIRE(lv.size() == 2);
  CHECK(lv[0].g_order == 6);
  CHECK(lv[0].h_order == 12);
  CHECK(lv[1].g_order == 120);
  REQUIRE(lv[1].cond);
  CHECK(lv[1].cond->passed());
  CHECK(lv[1].cond->covers.size() == 3);

  CondReport again = verify_cond(t.input(), lv[1].g, *lv[0].h, 2, {});
  CHECK(again.passed());
  CHECK(again.covers.size() == lv[1].cond->covers.size());
}

TEST_CASE("other two-edge inputs complete") {
  for (auto input : {path2_symmetric(), double_edge(), edge_and_loop()}) {
    Tower t = build_chain(input);
    CHECK(t.complete());
    CHECK_FALSE(t.check_failed());
    CHECK(run_main_lemma(t).passed());
  }
}

TEST_CASE("budget and level limits truncate honestly") {
  TowerOptions small;
  small.budget.elements = 50;
  Tower t = build_chain(path2(), small);
  CHECK(t.truncated());
  CHECK_FALSE(t.check_failed());
  CHECK(t.certified_grade() == 1);
  CHECK(t.truncation_reason().find("budget") != std::string::npos);

  TowerOptions one;
  one.max_level = 1;
  Tower u = build_chain(path2(), one);
  CHECK(u.truncated());
  CHECK(u.certified_grade() == 1);
  CHECK_FALSE(u.complete());

  // a truncated tower still rewrites words of small content, and refuses larger ones
  MainLemmaOptions lo;
  lo.samples = 100;
  CHECK(run_main_lemma(u, lo).passed());
  auto input = path2();
  VertexId start = *input->find_vertex("u");
  CHECK_THROWS_AS(rewrite_to_content_path(u, start, Word{pos(0), pos(1)}), RewriteError);
}

TEST_CASE("disconnected input is rejected") {
  auto g = make_graph({"u", "v", "x", "y"}, {{"a", "u", "v"}, {"b", "x", "y"}});
  CHECK_THROWS_AS(build_chain(g), GraphError);
}

TEST_CASE("property: relations are closed under deletion of letters") {
  Tower t = build_chain(path2());
  const EGroup& g = t.group();
  auto sub = g.subgroup(g.alphabet(), {});
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    Word p = random_word(g.alphabet(), 1 + i % 12, rng);
    Word q = sub->word(*sub->index_of(g.eval(p).images()));
    Word r = concat(p, inverse(q));
    REQUIRE(g.eval(r).is_identity());
    for (LetterSet d : all_subsets(g.alphabet())) CHECK(g.eval(delete_letters(r, d)).is_identity());
  }
}

TEST_CASE("property: rewritten words are paths with the same ends, value and content") {
  Tower t = build_chain(path2());
  const LabelledGraph& input = t.input();
  const EGroup& g = t.group();
  std::mt19937_64 rng(23);
  std::size_t empty = 0;
  for (int i = 0; i < 300; ++i) {
    VertexId u = static_cast<VertexId>(i % input.vertex_count());
    Word p = random_path_word(input, u, 1 + i % 12, rng);
    Word q = rewrite_to_content_path(t, u, p);
    LetterSet co = content(g, p);
    CHECK(follow_input(input, u, q) == follow_input(input, u, p));
    CHECK(g.eval(q) == g.eval(p));
    CHECK(letters_of(q).subset_of(co));
    if (co.empty()) {
      ++empty;
      CHECK(follow_input(input, u, p) == u);
    }
  }
  CHECK(empty > 0);
}

TEST_CASE("main lemma suite on the two-edge path") {
  Tower t = build_chain(path2());
  MainLemmaOptions o;
  o.samples = 500;
  MainLemmaReport r = run_main_lemma(t, o);
  CHECK(r.passed());
  CHECK(r.rewrites == 500);
  CHECK(r.relations > 0);
}

TEST_CASE("coset extension diagnostics in the final group") {
  auto input = path2();
  Tower t = build_chain(input);
  auto ds = diagnose_extensions(*input, t.group_ptr(), 1, 2, {});
  CHECK(ds.size() == 3);
  for (const auto& d : ds) {
    CHECK(d.passed());
    for (const auto& [kind, n] : d.shapes) CHECK(kind.find("other") == std::string::npos);
  }
}

TEST_CASE("longer cycles also give a verified chain") {
  TowerOptions o;
  o.cycle_len = 3;
  Tower t = build_chain(single_edge(), o);
  CHECK(t.complete());
  CHECK(t.levels()[0].g_order == 3);
}

TEST_CASE("lean mode runs and reports") {
  TowerOptions o;
  o.lean = true;
  Tower t = build_chain(path2(), o);
  CHECK(t.certified_grade() >= 1);
}
