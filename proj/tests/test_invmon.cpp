#include <doctest.h>

#include <random>

#include "fgapprox/invmon.hpp"
#include "fgapprox/io.hpp"
#include "test_support.hpp"

using namespace fgapprox;
using namespace fgtest;

namespace {

// B2 with an identity: 1, 0 and the matrix units e_ij with e_ij e_kl = e_il if j = k, else 0.
MonoidTable brandt_with_identity() {
  const std::vector<std::string> names{"1", "0", "e11", "e12", "e21", "e22"};
  auto mul = [&](int x, int y) -> int {
    if (x == 0) return y;
    if (y == 0) return x;
    if (x == 1 || y == 1) return 1;
    int i = (x - 2) / 2, j = (x - 2) % 2, k = (y - 2) / 2, l = (y - 2) % 2;
    return j == k ? 2 + 2 * i + l : 1;
  };
  MonoidTable t;
  t.size = 6;
  t.names = names;
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) t.mul.push_back(static_cast<MonoidElem>(mul(x, y)));
  t.inv = {0, 1, 2, 4, 3, 5};
  t.one = 0;
  return t;
}

MonoidTable cyclic_table(std::uint32_t n) {
  MonoidTable t;
  t.size = n;
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) t.mul.push_back((x + y) % n);
  for (std::uint32_t x = 0; x < n; ++x) t.inv.push_back((n - x) % n);
  return t;
}

// chain 1 > e > f > 0 of idempotents
MonoidTable chain_semilattice(std::uint32_t n) {
  MonoidTable t;
  t.size = n;
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) t.mul.push_back(std::max(x, y));
  for (std::uint32_t x = 0; x < n; ++x) t.inv.push_back(x);
  return t;
}

// Connected edge sets of the Cayley graph containing 1 and g, by direct search over all edge subsets.
std::size_t naive_mm_count(const FiniteGroup& q) {
  const LabelledGraph& c = q.cayley();
  const std::size_t m = c.positive_edge_count();
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::set<VertexId> reach{0};
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (!((mask >> i) & 1U)) continue;
        EdgeId e = LabelledGraph::positive_edge(i);
        bool in_a = reach.count(c.alpha(e)), in_o = reach.count(c.omega(e));
        if (in_a != in_o) {
          reach.insert(c.alpha(e));
          reach.insert(c.omega(e));
          grew = true;
        }
      }
    }
    bool connected = true;
    for (std::size_t i = 0; i < m; ++i)
      if (((mask >> i) & 1U) && !reach.count(c.alpha(LabelledGraph::positive_edge(i)))) connected = false;
    if (connected) count += reach.size();
  }
  return count;
}

}  // namespace

TEST_CASE("law checks reject broken tables with a witness") {
  MonoidTable t = cyclic_table(3);
  t.mul[1 * 3 + 1] = 0;  // 1 + 1 = 0 breaks associativity
  try {
    (void)validate(t);
    FAIL("expected a law violation");
  } catch (const MonoidError& e) {
    CHECK_FALSE(e.witness.empty());
  }
  MonoidTable u = cyclic_table(3);
  u.inv = {0, 1, 2};
  CHECK_THROWS_AS((void)validate(u), MonoidError);
}

TEST_CASE("Brandt monoid: idempotents, order and the F-inverse failure") {
  InverseMonoid m = validate(brandt_with_identity());
  CHECK(m.idempotents().size() == 4);
  CHECK(m.leq(2, 0));       // e11 <= 1
  CHECK(m.leq(1, 3));       // 0 <= e12
  CHECK_FALSE(m.leq(3, 0)); // e12 is not below 1
  CHECK(natural_leq(m, 2, 0));

  Partition sigma = sigma_classes(m);
  CHECK(sigma.count == 1);
  CHECK(is_group_congruence(m, sigma));

  FInverseResult f = is_f_inverse(m);
  CHECK_FALSE(f.holds);
  std::vector<std::string> maximal;
  for (auto x : f.maximal) maximal.push_back(m.name(x));
  std::sort(maximal.begin(), maximal.end());
  CHECK(maximal == std::vector<std::string>{"1", "e12", "e21"});
}

TEST_CASE("groups and chains are F-inverse") {
  InverseMonoid g = validate(cyclic_table(5));
  CHECK(g.idempotents().size() == 1);
  CHECK(sigma_classes(g).count == 5);
  CHECK(is_f_inverse(g).holds);

  InverseMonoid c = validate(chain_semilattice(4));
  CHECK(c.idempotents().size() == 4);
  CHECK(sigma_classes(c).count == 1);
  FInverseResult f = is_f_inverse(c);
  CHECK(f.holds);
  CHECK(f.greatest.at(0) == c.one());
}

TEST_CASE("property: generated congruences are congruences and quotients are inverse monoids") {
  InverseMonoid m = validate(brandt_with_identity());
  for (MonoidElem x = 0; x < m.size(); ++x)
    for (MonoidElem y = 0; y < m.size(); ++y) {
      Partition p = generated_congruence(m, x, y);
      CHECK(p.class_of[x] == p.class_of[y]);
      CHECK_FALSE(congruence_violation(m, p));
      CHECK_NOTHROW((void)validate(quotient_table(m, p)));
    }
}

TEST_CASE("Wagner-Preston rendering lists one partial bijection per element") {
  InverseMonoid m = validate(brandt_with_identity());
  std::string wp = wagner_preston(m);
  CHECK(std::count(wp.begin(), wp.end(), '\n') == 6);
  CHECK(wp.find("e12: {") != std::string::npos);
}

TEST_CASE("monoid tables: round trip and parse errors") {
  MonoidTable t = brandt_with_identity();
  MonoidTable back = parse_monoid(std::string_view(write_monoid(t)));
  CHECK(back.mul == t.mul);
  CHECK(back.inv == t.inv);
  CHECK(back.names == t.names);
  try {
    (void)parse_monoid(std::string_view("monoid 1\nsize 2\nmul 0 1\nmul 1 7\ninv 0 1\none 0\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
    CHECK(e.column == 7);
  }
  CHECK_THROWS_AS((void)parse_monoid(std::string_view("monoid 1\nsize 2\nmul 0 1\n")), ParseError);
}

TEST_CASE("property: Margolis-Meakin expansion size matches direct subgraph search") {
  for (std::uint32_t n = 1; n <= 6; ++n) {
    FiniteGroup q(cyclic_group(n), 12);
    MMExpansion mm(q, 20000);
    CHECK(mm.monoid().size() == naive_mm_count(q));
    CHECK(mm.monoid().size() == count_mm_elements(q));
  }
  FiniteGroup c2(cyclic_group(2), 12);
  CHECK(MMExpansion(c2, 100).monoid().size() == 7);
  FiniteGroup c1(cyclic_group(1), 12);
  CHECK(MMExpansion(c1, 100).monoid().size() == 2);
}

TEST_CASE("property: expansion values of words multiply and invert") {
  FiniteGroup q(cyclic_group(3), 12);
  MMExpansion mm(q, 20000);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    Word p = random_word(LetterSet{0}, i % 9, rng);
    Word r = random_word(LetterSet{0}, i % 7, rng);
    CHECK(mm.find(mm.value(p)) == mm.eval(p));
    CHECK(mm.product(mm.value(p), mm.value(r)) == mm.value(concat(p, r)));
    CHECK(mm.inverse(mm.value(p)) == mm.value(inverse(p)));
    CHECK(mm.is_valid(mm.value(p)));
  }
}

TEST_CASE("F-inverse cover pipeline for the trivial group and the group of order two") {
  FCoverResult trivial = run_fcover(cyclic_group(1));
  CHECK(trivial.passed());
  CHECK(trivial.mm_order == 2);
  REQUIRE(trivial.cover);
  CHECK(trivial.cover->t_order == trivial.cover->s_order);

  FCoverResult c2 = run_fcover(cyclic_group(2));
  CHECK(c2.passed());
  CHECK(c2.mm_order == 7);
  CHECK(c2.mm_brute_force == 7);
  REQUIRE(c2.premorphism);
  CHECK(c2.premorphism->passed());
  REQUIRE(c2.cover);
  CHECK(c2.cover->t_equals_s);
  CHECK(c2.cover->f_inverse);
  CHECK(c2.cover->idempotent_separating);
  CHECK(c2.cover->surjective);
}

TEST_CASE("oversized Q is refused") {
  CHECK_THROWS_AS(FiniteGroup(cyclic_group(20), 12), BudgetExceeded);
}
