#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fgapprox/egroup.hpp"
#include "fgapprox/letters.hpp"
#include "fgapprox/sgraph.hpp"
#include "fgapprox/tower.hpp"

namespace fgapprox {

using MonoidElem = std::uint32_t;

class MonoidError : public std::runtime_error {
 public:
  MonoidError(const std::string& what, std::vector<MonoidElem> witness)
      : std::runtime_error(what), witness(std::move(witness)) {}
  std::vector<MonoidElem> witness;
};

struct MonoidTable {
  std::size_t size = 0;
  std::vector<MonoidElem> mul;  // row-major, mul[x * size + y] = xy
  std::vector<MonoidElem> inv;
  MonoidElem one = 0;
  std::vector<std::string> names;  // optional, for rendering
};

// Finite inverse monoid on dense integer elements. Construct through validate().
class InverseMonoid {
 public:
  [[nodiscard]] std::size_t size() const { return t_.size; }
  [[nodiscard]] MonoidElem one() const { return t_.one; }
  [[nodiscard]] MonoidElem mul(MonoidElem x, MonoidElem y) const { return t_.mul[x * t_.size + y]; }
  [[nodiscard]] MonoidElem inv(MonoidElem x) const { return t_.inv[x]; }
  [[nodiscard]] const MonoidTable& table() const { return t_; }
  [[nodiscard]] std::string name(MonoidElem x) const;

  [[nodiscard]] bool is_idempotent(MonoidElem x) const { return mul(x, x) == x; }
  [[nodiscard]] const std::vector<MonoidElem>& idempotents() const { return idempotents_; }
  // x <= y iff x = y e for some idempotent e.
  [[nodiscard]] bool leq(MonoidElem x, MonoidElem y) const { return leq_[x * t_.size + y] != 0; }

 private:
  friend InverseMonoid validate(MonoidTable t);
  MonoidTable t_;
  std::vector<MonoidElem> idempotents_;
  std::vector<char> leq_;
};

// Checks associativity, the identity and the inverse-monoid laws; throws MonoidError with a witness.
InverseMonoid validate(MonoidTable t);

std::vector<MonoidElem> idempotents(const InverseMonoid& m);
bool natural_leq(const InverseMonoid& m, MonoidElem x, MonoidElem y);
// x sigma y iff xe = ye for some idempotent e.
Partition sigma_classes(const InverseMonoid& m);
// The partition is a congruence whose quotient is a group.
bool is_group_congruence(const InverseMonoid& m, const Partition& p);
// Least congruence containing the pair.
Partition generated_congruence(const InverseMonoid& m, MonoidElem x, MonoidElem y);
std::optional<std::string> congruence_violation(const InverseMonoid& m, const Partition& p);
MonoidTable quotient_table(const InverseMonoid& m, const Partition& p);

struct FInverseResult {
  bool holds = true;
  std::vector<std::optional<MonoidElem>> greatest;  // per sigma class
  std::optional<std::uint32_t> failing_class;
  std::vector<MonoidElem> maximal;  // maximal elements of the failing class
};
FInverseResult is_f_inverse(const InverseMonoid& m);

// Every element x rendered as the partial bijection m |-> m x with domain M x x^-1.
std::string wagner_preston(const InverseMonoid& m);

// A finite A-generated group Q read off its elements, with a full multiplication table.
class FiniteGroup {
 public:
  FiniteGroup(std::shared_ptr<const EGroup> q, std::size_t max_order);

  [[nodiscard]] const EGroup& egroup() const { return *q_; }
  [[nodiscard]] std::size_t order() const { return order_; }
  [[nodiscard]] std::size_t letter_count() const { return q_->letter_count(); }
  static constexpr std::uint32_t one = 0;
  [[nodiscard]] std::uint32_t mul(std::uint32_t x, std::uint32_t y) const { return mul_[x * order_ + y]; }
  [[nodiscard]] std::uint32_t inv(std::uint32_t x) const { return inv_[x]; }
  [[nodiscard]] std::uint32_t gen(SignedLetter s) const { return gen_[s.code()]; }
  [[nodiscard]] std::uint32_t eval(const Word& p) const;

  // Cayley graph as an oriented input graph: positive edge (g,a) has letter g * |A| + a.
  [[nodiscard]] const LabelledGraph& cayley() const { return cayley_; }
  [[nodiscard]] Letter edge_letter(std::uint32_t g, Letter a) const {
    return static_cast<Letter>(g * letter_count() + a);
  }
  // The edge of the Cayley graph read when s is applied at g, as a signed letter over E = Q x A.
  [[nodiscard]] SignedLetter edge_step(std::uint32_t g, SignedLetter s) const;
  // pi_1(p): the label over E of the path from 1 labelled p.
  [[nodiscard]] Word path_word(const Word& p) const;
  // Letter permutation of E induced by left multiplication with q.
  [[nodiscard]] std::vector<Letter> translation(std::uint32_t q) const;

 private:
  std::shared_ptr<const EGroup> q_;
  std::size_t order_ = 0;
  std::vector<std::uint32_t> mul_, inv_, gen_;
  LabelledGraph cayley_;
};

std::shared_ptr<EGroup> cyclic_group(std::uint32_t n);

// Element of M(Q): a connected subgraph of the Cayley graph, as its set of positive edges, containing 1 and g.
struct MMElement {
  LetterSet edges;
  std::uint32_t g = 0;
  friend auto operator<=>(const MMElement&, const MMElement&) = default;
};

class MMExpansion {
 public:
  MMExpansion(const FiniteGroup& q, std::size_t max_size);

  [[nodiscard]] const InverseMonoid& monoid() const { return monoid_; }
  [[nodiscard]] const MMElement& element(MonoidElem x) const { return elements_[x]; }
  [[nodiscard]] std::optional<MonoidElem> find(const MMElement& m) const;
  [[nodiscard]] MonoidElem gen(SignedLetter s) const { return gen_[s.code()]; }
  [[nodiscard]] MonoidElem eval(const Word& p) const;
  [[nodiscard]] std::string render(MonoidElem x) const;

  [[nodiscard]] MMElement product(const MMElement& x, const MMElement& y) const;
  [[nodiscard]] MMElement inverse(const MMElement& x) const;
  [[nodiscard]] LetterSet translate(LetterSet edges, std::uint32_t q) const;
  // (<pi_1(p)>, [p]_Q)
  [[nodiscard]] MMElement value(const Word& p) const;
  [[nodiscard]] MMElement spanned(LetterSet edges, std::uint32_t g) const;
  // The edge set is connected and contains 1 and g.
  [[nodiscard]] bool is_valid(const MMElement& m) const;

 private:
  const FiniteGroup* q_;
  std::vector<MMElement> elements_;
  std::map<MMElement, MonoidElem> index_;
  std::vector<MonoidElem> gen_;
  InverseMonoid monoid_;
};

// Brute-force count of connected edge sets of the Cayley graph containing 1 and g, over all g.
std::size_t count_mm_elements(const FiniteGroup& q);

// Action of Q on the tower group G over E = Q x A, each q extended from the edge translation.
class QAction {
 public:
  QAction(const FiniteGroup& q, std::shared_ptr<const EGroup> g);
  [[nodiscard]] const GroupAutomorphism& operator[](std::uint32_t q) const { return auts_[q]; }
  [[nodiscard]] Permutation apply(std::uint32_t q, const Permutation& x) const { return auts_[q](x); }

 private:
  std::vector<GroupAutomorphism> auts_;
};

class ActionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SemidirectElement {
  Permutation gamma;
  std::uint32_t q = 0;
  friend bool operator==(const SemidirectElement&, const SemidirectElement&) = default;
};

// H = <([(1,a)]_G, [a]_Q)> inside G x| Q, enumerated with its multiplication table.
class SemidirectH {
 public:
  SemidirectH(const FiniteGroup& q, std::shared_ptr<const EGroup> g, const QAction& action, const Budget& budget);

  [[nodiscard]] std::size_t order() const { return elems_.size(); }
  [[nodiscard]] std::size_t letter_count() const { return gen_.size() / 2; }
  [[nodiscard]] const SemidirectElement& element(std::uint32_t i) const { return elems_[i]; }
  // Shortest word over A reaching element i.
  [[nodiscard]] const Word& word(std::uint32_t i) const { return words_[i]; }
  [[nodiscard]] std::uint32_t mul(std::uint32_t x, std::uint32_t y) const { return mul_[x * elems_.size() + y]; }
  [[nodiscard]] std::uint32_t inv(std::uint32_t x) const { return inv_[x]; }
  [[nodiscard]] std::uint32_t gen(SignedLetter s) const { return gen_[s.code()]; }
  [[nodiscard]] std::optional<std::uint32_t> find(const SemidirectElement& x) const;
  [[nodiscard]] std::uint32_t eval(const Word& p) const;

  // (gamma, g)(eta, h) = (gamma . g-eta, gh)
  [[nodiscard]] SemidirectElement product(const SemidirectElement& x, const SemidirectElement& y) const;
  [[nodiscard]] SemidirectElement inverse(const SemidirectElement& x) const;
  // ([pi_1(p)]_G, [p]_Q)
  [[nodiscard]] SemidirectElement value(const Word& p) const;

 private:
  const FiniteGroup* q_;
  std::shared_ptr<const EGroup> g_;
  const QAction* action_;
  std::vector<SemidirectElement> elems_;
  std::vector<Word> words_;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint32_t> mul_, inv_, gen_;
};

struct PsiValue {
  std::optional<MonoidElem> m;  // absent when the content does not give an element of M(Q)
  LetterSet content;
};

// psi(gamma, g) = (<C(gamma)>, g), psi(1) = 1.
std::vector<PsiValue> compute_psi(const SemidirectH& h, const FiniteGroup& q, const EGroup& g,
                                  const MMExpansion& mm);

struct PremorphismReport {
  bool defined = true;     // every psi(h) lies in M(Q)
  bool unit = true;        // psi(1) = 1
  bool inverse = true;     // psi(h^-1) = psi(h)^-1
  bool subproduct = true;  // psi(h) psi(h') <= psi(h h')
  bool coverage = true;    // every m lies below some psi(h)
  std::size_t pairs_checked = 0;
  std::vector<std::string> witnesses;
  [[nodiscard]] bool passed() const { return defined && unit && inverse && subproduct && coverage; }
};
PremorphismReport verify_premorphism(const SemidirectH& h, const InverseMonoid& m, std::span<const PsiValue> psi);
// The same laws for psi composed with the projection onto a quotient monoid.
PremorphismReport verify_premorphism(const SemidirectH& h, const InverseMonoid& target,
                                     std::span<const std::optional<MonoidElem>> psi);

struct CoverReport {
  std::size_t h_order = 0;
  std::size_t m_order = 0;
  std::size_t t_order = 0;
  std::size_t s_order = 0;
  bool t_equals_s = false;
  bool inverse_monoid = false;
  bool f_inverse = false;
  bool surjective = false;
  bool subdirect = false;
  bool idempotent_separating = false;
  std::size_t sigma_classes = 0;
  std::vector<std::pair<std::uint32_t, MonoidElem>> class_maxima;  // (h, m) of each greatest element
  std::uint64_t separation_digest = 0;
  std::vector<std::string> witnesses;
  [[nodiscard]] bool passed() const {
    return t_equals_s && inverse_monoid && f_inverse && surjective && subdirect && idempotent_separating;
  }
};

// T generated by ([a]_H, [a]_M) versus S = {(h,m) : m <= psi(h)}.
CoverReport f_inverse_cover(const SemidirectH& h, const MMExpansion& mm, std::span<const PsiValue> psi);

struct FCoverOptions {
  TowerOptions tower;
  MainLemmaOptions lemma;
  std::size_t max_q_order = 12;
  std::size_t max_monoid = 20'000;
  std::size_t samples = 200;
  std::uint64_t seed = 0x5eed;
};

struct FCoverResult {
  std::size_t q_order = 0;
  std::shared_ptr<Tower> tower;
  std::optional<MainLemmaReport> lemma;
  std::size_t mm_order = 0;
  std::size_t mm_brute_force = 0;
  std::size_t h_order = 0;
  bool value_formula = true;   // Eq. value of words in H and M(Q) agrees with enumeration
  bool action_homomorphism = true;
  bool content_equivariant = true;
  bool quotient_check = true;  // premorphism survives composition with a quotient map
  std::optional<PremorphismReport> premorphism;
  std::optional<CoverReport> cover;
  std::vector<std::string> witnesses;
  [[nodiscard]] bool passed() const;
};

FCoverResult run_fcover(std::shared_ptr<const EGroup> q, const FCoverOptions& options = {});

}  // namespace fgapprox
