#include <doctest.h>

#include <random>

#include "fgapprox/egroup.hpp"
#include "fgapprox/io.hpp"
#include "fgapprox/tower.hpp"
#include "test_support.hpp"

using namespace fgapprox;
using namespace fgtest;

TEST_CASE("permutations compose in action order") {
  Permutation p({1, 2, 0});
  Permutation q({1, 0, 2});
  Permutation pq = p.then(q);
  for (std::uint32_t x = 0; x < 3; ++x) CHECK(pq[x] == q[p[x]]);
  CHECK(p.then(p.inverse()).is_identity());
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
}

TEST_CASE("transition group of the closed single edge is a transposition") {
  auto x1 = std::make_shared<const LabelledGraph>(build_x1(*single_edge()));
  auto g = transition_group(x1);
  CHECK(g->order({}) == 2);
  const Permutation& a = g->gen(pos(0));
  CHECK(a[0] == 1);
  CHECK(a[1] == 0);
}

TEST_CASE("property: subgroup enumeration matches naive closure") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_group(5, 3, rng);
    for (LetterSet a : all_subsets(g->alphabet())) {
      auto naive = naive_subgroup(*g, a);
      auto sub = g->subgroup(a, {});
      CHECK(sub->order() == naive.size());
      for (std::uint32_t i = 0; i < sub->order(); ++i) {
        CHECK(naive.count(images_of(sub->permutation(i))) == 1);
        CHECK(g->eval(sub->word(i)) == sub->permutation(i));
      }
    }
  }
}

TEST_CASE("property: covering criterion for retractability agrees with the exact word-level oracle") {
  std::mt19937_64 rng(5);
  std::size_t yes = 0, no = 0;
  auto check = [&](const EGroup& g) {
    for (LetterSet a : all_subsets(g.alphabet())) {
      bool naive = naive_retractable(g, a);
      CHECK(is_retractable_on(g, a, {}) == naive);
      auto sampled = sampled_retractability_violation(g, a, 1000, 12, rng, {});
      if (naive) CHECK_FALSE(sampled);
      (naive ? yes : no) += 1;
    }
  };
  for (int trial = 0; trial < 25; ++trial) check(*random_group(4, 2, rng));
  check(*abelian_p_group(3, 2));
  auto tower = build_chain(path2());
  for (const auto& lv : tower.levels()) {
    check(*lv.g);
    if (lv.h) check(*lv.h);
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

TEST_CASE("elementary abelian groups are retractable and acyclic") {
  auto g = abelian_p_group(3, 2);
  CHECK(g->order({}) == 8);
  CHECK(is_retractable(*g, {}));
  GroupTable t(*g, {});
  CHECK_FALSE(two_acyclicity_violation(t, g->alphabet()));
  CHECK_FALSE(three_acyclicity_violation(t, g->alphabet()));
}

TEST_CASE("symmetric group on two transpositions is not retractable") {
  // a = (0 1), b = (1 2): (ab)^3 = 1 but deleting b leaves a^3 = a
  auto g = std::make_shared<EGroup>(3, std::vector<Permutation>{Permutation({1, 0, 2}), Permutation({0, 2, 1})});
  CHECK(g->order({}) == 6);
  CHECK_FALSE(is_retractable(*g, {}));
  CHECK(is_k_retractable(*g, 1, {}));
}

TEST_CASE("content by single-letter deletion agrees with exhaustive search on small tower groups") {
  auto tower = build_chain(path2());
  std::mt19937_64 rng(9);
  std::size_t checked = 0;
  for (const auto& lv : tower.levels()) {
    if (!lv.g_order || *lv.g_order > 24) continue;
    if (!is_retractable(*lv.g, {})) continue;
    for (int i = 0; i < 60; ++i) {
      Word p = random_word(lv.g->alphabet(), 1 + i % 10, rng);
      auto naive = naive_content(*lv.g, p);
      REQUIRE(naive);
      CHECK(content(*lv.g, p) == *naive);
      ++checked;
    }
  }
  auto ab = abelian_p_group(3, 2);
  for (int i = 0; i < 60; ++i) {
    Word p = random_word(ab->alphabet(), 1 + i % 10, rng);
    CHECK(content(*ab, p) == *naive_content(*ab, p));
    ++checked;
  }
  CHECK(checked >= 60);
}

TEST_CASE("2- and 3-acyclicity on the final group of the two-edge path") {
  auto tower = build_chain(path2());
  REQUIRE(tower.complete());
  const EGroup& g = tower.group();
  REQUIRE(is_retractable(g, {}));
  GroupTable t(g, {});
  CHECK(t.order() == 120);
  CHECK_FALSE(two_acyclicity_violation(t, g.alphabet()));
  CHECK_FALSE(three_acyclicity_violation(t, g.alphabet()));
  // the table agrees with the subgroup enumeration
  for (LetterSet a : all_subsets(g.alphabet())) CHECK(t.elements(a).size() == g.subgroup(a, {})->order());
}

TEST_CASE("expansion H1 onto G1 is 1-stable for the two-edge path") {
  auto tower = build_chain(path2());
  const auto& lv = tower.levels().at(0);
  REQUIRE(lv.h);
  Expansion exp = Expansion::prefix(*lv.h, *lv.g);
  CHECK(is_k_stable(exp, 1, {}));
  CHECK(is_k_retractable(*lv.h, 1, {}));
}

TEST_CASE("graph automorphisms extend to the tower group and commute with evaluation") {
  auto input = path2_symmetric();
  auto auts = oriented_automorphisms(*input);
  CHECK(auts.size() == 2);
  auto tower = build_chain(input);
  REQUIRE(tower.complete());
  const EGroup& g = tower.group();
  std::mt19937_64 rng(13);
  for (const auto& aut : auts) {
    auto ext = extend_automorphism(g, aut.letter_map);
    REQUIRE(ext);
    for (int i = 0; i < 200; ++i) {
      Word p = random_word(g.alphabet(), i % 13, rng);
      CHECK((*ext)(g.eval(p)) == g.eval(apply_letter_map(p, aut.letter_map)));
    }
  }
  // the plain path has no nontrivial orientation-preserving automorphism
  CHECK(oriented_automorphisms(*path2()).size() == 1);
}

TEST_CASE("group serialization round trip") {
  auto tower = build_chain(path2());
  const EGroup& g = tower.g(1);
  auto back = parse_egroup_json(write_egroup_json(g));
  CHECK(back->degree() == g.degree());
  for (Letter a = 0; a < g.letter_count(); ++a) CHECK(back->gen(pos(a)) == g.gen(pos(a)));
  CHECK_THROWS_AS(parse_egroup_json("{\"format\": \"egroup\", \"version\": 1, \"degree\": 2, \"generators\": [[0, 0]]}"),
                  ParseError);
  CHECK_THROWS_AS(parse_egroup_json("{\"format\": \"egroup\",\n \"version\": }"), ParseError);
}

TEST_CASE("budget overrun is reported, not silently truncated") {
  auto g = std::make_shared<EGroup>(6, std::vector<Permutation>{Permutation({1, 2, 3, 4, 5, 0}),
                                                                 Permutation({1, 0, 2, 3, 4, 5})});
  Budget tiny;
  tiny.elements = 100;
  CHECK_THROWS_AS((void)g->order(tiny), BudgetExceeded);
  CHECK(g->order({}) == 720);
}
