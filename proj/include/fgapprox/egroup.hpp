#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgapprox/letters.hpp"
#include "fgapprox/sgraph.hpp"

namespace fgapprox {

struct Budget {
  std::size_t elements = 200'000;
  // Cap on the size of any graph the tower materializes (and on group carriers).
  std::size_t vertices = 2'000'000;
  // Cap on elements x degree held by one enumeration; keeps memory bounded on large carriers.
  std::size_t cells = 120'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string what_kind, std::size_t count)
      : std::runtime_error("budget exceeded: " + what_kind + " (" + std::to_string(count) + ")"),
        kind(std::move(what_kind)),
        count(count) {}
  std::string kind;
  std::size_t count;
};

class Permutation {
 public:
  Permutation() = default;
  // Throws std::invalid_argument unless `images` is a bijection of {0..n-1}.
  explicit Permutation(std::vector<std::uint32_t> images);
  static Permutation identity(std::size_t n);
  static Permutation from_span(std::span<const std::uint32_t> images);

  [[nodiscard]] std::size_t degree() const { return img_.size(); }
  [[nodiscard]] std::uint32_t operator[](std::size_t x) const { return img_[x]; }
  [[nodiscard]] std::span<const std::uint32_t> images() const { return img_; }
  // Action order: x . (p.then(q)) = (x . p) . q
  [[nodiscard]] Permutation then(const Permutation& q) const;
  [[nodiscard]] Permutation inverse() const;
  [[nodiscard]] bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<std::uint32_t> images, Unchecked) : img_(std::move(images)) {}
  std::vector<std::uint32_t> img_;
};

std::size_t hash_images(std::span<const std::uint32_t> images);

// Interning store for permutations of one fixed degree.
class ElementPool {
 public:
  explicit ElementPool(std::size_t degree) : degree_(degree) {}
  // Returns the id and whether it was new.
  std::pair<std::uint32_t, bool> intern(std::span<const std::uint32_t> images);
  [[nodiscard]] std::optional<std::uint32_t> find(std::span<const std::uint32_t> images) const;
  [[nodiscard]] std::span<const std::uint32_t> operator[](std::uint32_t id) const {
    return {data_.data() + static_cast<std::size_t>(id) * degree_, degree_};
  }
  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] std::size_t degree() const { return degree_; }

 private:
  void grow();
  std::size_t degree_;
  std::size_t count_ = 0;
  std::vector<std::uint32_t> data_;
  std::vector<std::uint32_t> slots_;
};

// Breadth-first enumeration of G[A] with right-multiplication table and a spanning tree of shortest words.
class Subgroup {
 public:
  [[nodiscard]] LetterSet letters() const { return letters_; }
  [[nodiscard]] std::size_t order() const { return pool_.size(); }
  [[nodiscard]] std::span<const std::uint32_t> element(std::uint32_t i) const { return pool_[i]; }
  [[nodiscard]] Permutation permutation(std::uint32_t i) const { return Permutation::from_span(pool_[i]); }
  [[nodiscard]] std::optional<std::uint32_t> index_of(std::span<const std::uint32_t> images) const {
    return pool_.find(images);
  }
  // Index of element(i) . s; s must carry a letter of letters().
  [[nodiscard]] std::uint32_t step(std::uint32_t i, SignedLetter s) const { return step_[i * stride_ + s.code()]; }
  [[nodiscard]] Word word(std::uint32_t i) const;

 private:
  friend class EGroup;
  explicit Subgroup(std::size_t degree) : pool_(degree) {}
  LetterSet letters_;
  ElementPool pool_;
  std::size_t stride_ = 0;
  std::vector<std::uint32_t> step_;
  std::vector<std::uint32_t> parent_;
  std::vector<SignedLetter> parent_letter_;
};

// Finite E-generated permutation group: one permutation per letter over a carrier.
class EGroup {
 public:
  EGroup(std::size_t degree, std::vector<Permutation> generators, std::vector<std::string> letter_names = {});
  EGroup(const EGroup&) = delete;
  EGroup& operator=(const EGroup&) = delete;

  [[nodiscard]] std::size_t letter_count() const { return gens_.size() / 2; }
  [[nodiscard]] LetterSet alphabet() const { return LetterSet::first_n(letter_count()); }
  [[nodiscard]] std::size_t degree() const { return degree_; }
  [[nodiscard]] const Permutation& gen(SignedLetter s) const { return gens_[s.code()]; }
  [[nodiscard]] const std::vector<std::string>& letter_names() const { return letter_names_; }

  // Right multiplication in place: images becomes images . s
  void multiply(std::span<std::uint32_t> images, SignedLetter s) const;
  [[nodiscard]] Permutation eval(const Word& p) const;

  // G[A], enumerated once and cached. Throws BudgetExceeded.
  [[nodiscard]] std::shared_ptr<const Subgroup> subgroup(LetterSet a, const Budget& budget) const;
  [[nodiscard]] std::size_t order(const Budget& budget) const { return subgroup(alphabet(), budget)->order(); }

  // The complete E-graph this group was read off from, when known.
  [[nodiscard]] const LabelledGraph* defining_graph() const { return defining_.get(); }
  void set_defining_graph(std::shared_ptr<const LabelledGraph> g) { defining_ = std::move(g); }

 private:
  std::size_t degree_;
  std::vector<Permutation> gens_;
  std::vector<std::string> letter_names_;
  std::shared_ptr<const LabelledGraph> defining_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::uint64_t, std::shared_ptr<const Subgroup>> cache_;
};

// Transition group of a complete E-graph (gen(a): v -> v.a).
std::shared_ptr<EGroup> transition_group(std::shared_ptr<const LabelledGraph> g);
std::shared_ptr<EGroup> transition_group(const LabelledGraph& g);

std::vector<Permutation> subgroup_elements(const EGroup& g, LetterSet a, const Budget& budget);
// Cayley graph of G[A]: vertex i is element i of the subgroup enumeration, alphabet is all of E.
LabelledGraph cayley_graph(const EGroup& g, LetterSet a, const Budget& budget);
LabelledGraph cayley_graph(const Subgroup& s, std::size_t alphabet_size);

struct CanonicalMorphism {
  VertexId base = 0;
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
};
// The morphism determined by 0 |-> base, or absent on a clash. `source` is a Cayley graph with 1 at vertex 0.
std::optional<CanonicalMorphism> find_canonical_morphism(const LabelledGraph& source, const LabelledGraph& target,
                                                         VertexId base);
// Table form: does the Cayley graph of `src` (an A-group) cover the completion of the Cayley graph of `tgt`?
bool covers_completion(const Subgroup& src, const Subgroup& tgt);

// G[A] is retractable as an A-group.
bool is_retractable_on(const EGroup& g, LetterSet a, const Budget& budget);
bool is_retractable(const EGroup& g, const Budget& budget);
bool is_k_retractable(const EGroup& g, std::size_t k, const Budget& budget);

// Word-level check of retractability on G[A]: for sampled words p over A and q the stored shortest word of
// [p], [p_{a->1}] = [q_{a->1}] for every a. Returns a violating p.
std::optional<Word> sampled_retractability_violation(const EGroup& g, LetterSet a, std::size_t samples,
                                                     std::size_t max_length, std::mt19937_64& rng,
                                                     const Budget& budget);

// Index-level view of a small group: full multiplication table and membership in every G[A].
class GroupTable {
 public:
  GroupTable(const EGroup& g, const Budget& budget);
  [[nodiscard]] std::size_t order() const { return order_; }
  [[nodiscard]] std::uint32_t mul(std::uint32_t x, std::uint32_t y) const { return mul_[x * order_ + y]; }
  [[nodiscard]] std::uint32_t inv(std::uint32_t x) const { return inv_[x]; }
  [[nodiscard]] bool in(std::uint32_t x, LetterSet a) const { return member_[a.bits()][x] != 0; }
  [[nodiscard]] const std::vector<std::uint32_t>& elements(LetterSet a) const { return elements_[a.bits()]; }

 private:
  std::size_t order_ = 0;
  std::vector<std::uint32_t> mul_, inv_;
  std::vector<std::vector<char>> member_;
  std::vector<std::vector<std::uint32_t>> elements_;
};

// G[A] n G[B] = G[A n B] for all A, B.
std::optional<std::string> two_acyclicity_violation(const GroupTable& t, LetterSet alphabet);
// For all A, B, C and g = 1, h in G[A], k in G[C] with h^-1 k in G[B]:
// hG[A n B] n kG[B n C] n G[C n A] is nonempty.
std::optional<std::string> three_acyclicity_violation(const GroupTable& t, LetterSet alphabet);

// Content by the single-letter deletion criterion; defined when g is retractable.
LetterSet content(const EGroup& g, const Word& p);

// A surjection H ->> G that respects generators.
class Expansion {
 public:
  using Projection = std::function<Permutation(std::span<const std::uint32_t>)>;
  // Throws std::invalid_argument if generators are not respected.
  Expansion(const EGroup& source, const EGroup& target, Projection project);
  // H acts on a carrier whose first target.degree() points form G's carrier.
  static Expansion prefix(const EGroup& source, const EGroup& target);

  [[nodiscard]] const EGroup& source() const { return *source_; }
  [[nodiscard]] const EGroup& target() const { return *target_; }
  [[nodiscard]] Permutation operator()(std::span<const std::uint32_t> h) const { return project_(h); }

 private:
  const EGroup* source_;
  const EGroup* target_;
  Projection project_;
};

bool is_stable(const Expansion& exp, LetterSet a, const Budget& budget);
bool is_k_stable(const Expansion& exp, std::size_t k, const Budget& budget);

std::shared_ptr<EGroup> abelian_p_group(std::size_t letters, std::uint32_t p);

// Orientation-preserving automorphism of an oriented input graph.
struct GraphAutomorphism {
  std::vector<VertexId> vertex_map;
  std::vector<Letter> letter_map;
};
std::vector<GraphAutomorphism> oriented_automorphisms(const LabelledGraph& g, std::size_t limit = 10'000);

// [p]_G |-> [gamma p]_G realized as conjugation by a lift of gamma to the defining graph.
class GroupAutomorphism {
 public:
  GroupAutomorphism(Permutation lift, std::vector<Letter> letter_map)
      : lift_(std::move(lift)), lift_inv_(lift_.inverse()), letter_map_(std::move(letter_map)) {}
  [[nodiscard]] Permutation operator()(const Permutation& g) const;
  [[nodiscard]] const Permutation& lift() const { return lift_; }
  [[nodiscard]] const std::vector<Letter>& letter_map() const { return letter_map_; }

 private:
  Permutation lift_;
  Permutation lift_inv_;
  std::vector<Letter> letter_map_;
};

Word apply_letter_map(const Word& p, const std::vector<Letter>& letter_map);
std::optional<GroupAutomorphism> extend_automorphism(const EGroup& g, const std::vector<Letter>& letter_map);

}  // namespace fgapprox
