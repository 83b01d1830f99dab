#include "fgapprox/letters.hpp"

#include <algorithm>

namespace fgapprox {

std::strong_ordering operator<=>(LetterSet x, LetterSet y) {
  if (auto c = x.size() <=> y.size(); c != 0) return c;
  return x.letters() <=> y.letters();
}

std::vector<Letter> LetterSet::letters() const { return {begin(), end()}; }

std::vector<LetterSet> subsets_of_size(LetterSet universe, std::size_t k) {
  std::vector<Letter> pool = universe.letters();
  std::vector<LetterSet> out;
  if (k > pool.size()) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    LetterSet s;
    for (std::size_t i : idx) s.insert(pool[i]);
    out.push_back(s);
    // advance the combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<LetterSet> all_subsets(LetterSet universe) {
  std::vector<LetterSet> out;
  for (std::size_t k = 0; k <= universe.size(); ++k) {
    auto layer = subsets_of_size(universe, k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<LetterSet> proper_subsets(LetterSet a) {
  auto out = all_subsets(a);
  out.pop_back();
  return out;
}

Word inverse(const Word& p) {
  Word q;
  q.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) q.push_back(it->inverted());
  return q;
}

Word concat(const Word& p, const Word& q) {
  Word r = p;
  r.insert(r.end(), q.begin(), q.end());
  return r;
}

Word free_reduce(const Word& p) {
  Word out;
  for (SignedLetter s : p) {
    if (!out.empty() && out.back() == s.inverted())
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

Word delete_letters(const Word& p, LetterSet d) {
  Word out;
  std::copy_if(p.begin(), p.end(), std::back_inserter(out), [d](SignedLetter s) { return !d.contains(s.letter); });
  return out;
}

LetterSet letters_of(const Word& p) {
  LetterSet s;
  for (SignedLetter x : p) s.insert(x.letter);
  return s;
}

namespace {
std::string letter_name(Letter a, const std::vector<std::string>& names) {
  return a < names.size() ? names[a] : "e" + std::to_string(a);
}
}  // namespace

std::string render_word(const Word& p, const std::vector<std::string>& names) {
  if (p.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ' ';
    out += letter_name(p[i].letter, names);
    if (p[i].inverse) out += "^-1";
  }
  return out;
}

std::string render_set(LetterSet s, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (Letter a : s) {
    if (!first) out += ',';
    out += letter_name(a, names);
    first = false;
  }
  return out + "}";
}

}  // namespace fgapprox
