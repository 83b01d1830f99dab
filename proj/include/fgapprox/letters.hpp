#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fgapprox {

using Letter = std::uint32_t;

// A letter of E or its formal inverse. Encoded densely as 2*letter + inverse.
struct SignedLetter {
  Letter letter = 0;
  bool inverse = false;

  [[nodiscard]] constexpr SignedLetter inverted() const { return {letter, !inverse}; }
  [[nodiscard]] constexpr std::uint32_t code() const { return 2 * letter + (inverse ? 1 : 0); }
  static constexpr SignedLetter from_code(std::uint32_t c) { return {c / 2, (c & 1) != 0}; }

  friend constexpr auto operator<=>(SignedLetter, SignedLetter) = default;
};

constexpr SignedLetter pos(Letter a) { return {a, false}; }
constexpr SignedLetter neg(Letter a) { return {a, true}; }

inline constexpr std::size_t max_letters = 64;

// Finite set of letters, stored as a bitmask. Iteration is in increasing letter order.
class LetterSet {
 public:
  constexpr LetterSet() = default;
  constexpr explicit LetterSet(std::uint64_t bits) : bits_(bits) {}
  LetterSet(std::initializer_list<Letter> letters) {
    for (Letter a : letters) insert(a);
  }

  static constexpr LetterSet first_n(std::size_t n) {
    return LetterSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
  [[nodiscard]] constexpr bool contains(Letter a) const { return a < 64 && ((bits_ >> a) & 1U) != 0; }
  constexpr void insert(Letter a) { bits_ |= std::uint64_t{1} << a; }
  constexpr void erase(Letter a) { bits_ &= ~(std::uint64_t{1} << a); }
  [[nodiscard]] constexpr LetterSet with(Letter a) const { return LetterSet(bits_ | (std::uint64_t{1} << a)); }
  [[nodiscard]] constexpr LetterSet without(Letter a) const { return LetterSet(bits_ & ~(std::uint64_t{1} << a)); }
  [[nodiscard]] constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr bool subset_of(LetterSet o) const { return (bits_ & ~o.bits_) == 0; }
  [[nodiscard]] constexpr bool proper_subset_of(LetterSet o) const { return subset_of(o) && bits_ != o.bits_; }

  friend constexpr LetterSet operator&(LetterSet x, LetterSet y) { return LetterSet(x.bits_ & y.bits_); }
  friend constexpr LetterSet operator|(LetterSet x, LetterSet y) { return LetterSet(x.bits_ | y.bits_); }
  friend constexpr LetterSet operator-(LetterSet x, LetterSet y) { return LetterSet(x.bits_ & ~y.bits_); }
  friend constexpr bool operator==(LetterSet, LetterSet) = default;
  // Size first, then lexicographic on sorted letters; this is the graded order used everywhere.
  friend std::strong_ordering operator<=>(LetterSet x, LetterSet y);

  [[nodiscard]] std::vector<Letter> letters() const;

  class iterator {
   public:
    using value_type = Letter;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr Letter operator*() const { return static_cast<Letter>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };
  [[nodiscard]] constexpr iterator begin() const { return iterator(bits_); }
  [[nodiscard]] constexpr iterator end() const { return iterator(0); }

 private:
  std::uint64_t bits_ = 0;
};

// All subsets of `universe` with exactly k elements, lexicographic over sorted letters.
std::vector<LetterSet> subsets_of_size(LetterSet universe, std::size_t k);
// All subsets of `universe`, graded by size then lexicographic.
std::vector<LetterSet> all_subsets(LetterSet universe);
// All proper subsets of `a` (including the empty set), graded.
std::vector<LetterSet> proper_subsets(LetterSet a);

using Word = std::vector<SignedLetter>;

Word inverse(const Word& p);
Word concat(const Word& p, const Word& q);
Word free_reduce(const Word& p);
// p with every occurrence of letters in `d` (and their inverses) removed.
Word delete_letters(const Word& p, LetterSet d);
// co(p): the set of letters occurring in p.
LetterSet letters_of(const Word& p);

// Letter names are used only for rendering; `names` may be empty, then letters print as e<i>.
std::string render_word(const Word& p, const std::vector<std::string>& names = {});
std::string render_set(LetterSet s, const std::vector<std::string>& names = {});

}  // namespace fgapprox

template <>
struct std::hash<fgapprox::LetterSet> {
  std::size_t operator()(fgapprox::LetterSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
