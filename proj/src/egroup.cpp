#include "fgapprox/egroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace fgapprox {

Permutation::Permutation(std::vector<std::uint32_t> images) : img_(std::move(images)) {
  std::vector<char> hit(img_.size(), 0);
  for (auto x : img_) {
    if (x >= img_.size() || hit[x]) throw std::invalid_argument("not a permutation");
    hit[x] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0U);
  return {std::move(img), Unchecked{}};
}

Permutation Permutation::from_span(std::span<const std::uint32_t> images) {
  return Permutation(std::vector<std::uint32_t>(images.begin(), images.end()));
}

Permutation Permutation::then(const Permutation& q) const {
  std::vector<std::uint32_t> img(img_.size());
  for (std::size_t x = 0; x < img_.size(); ++x) img[x] = q.img_[img_[x]];
  return {std::move(img), Unchecked{}};
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> img(img_.size());
  for (std::size_t x = 0; x < img_.size(); ++x) img[img_[x]] = static_cast<std::uint32_t>(x);
  return {std::move(img), Unchecked{}};
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < img_.size(); ++x)
    if (img_[x] != x) return false;
  return true;
}

std::size_t hash_images(std::span<const std::uint32_t> images) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : images) {
    h ^= x;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

void ElementPool::grow() {
  std::size_t cap = slots_.empty() ? 64 : slots_.size() * 2;
  std::vector<std::uint32_t> fresh(cap, 0);
  for (std::uint32_t id = 0; id < count_; ++id) {
    std::size_t i = hash_images((*this)[id]) & (cap - 1);
    while (fresh[i] != 0) i = (i + 1) & (cap - 1);
    fresh[i] = id + 1;
  }
  slots_.swap(fresh);
}

std::pair<std::uint32_t, bool> ElementPool::intern(std::span<const std::uint32_t> images) {
  if (images.size() != degree_) throw std::invalid_argument("element degree mismatch");
  if (2 * (count_ + 1) > slots_.size()) grow();
  std::size_t mask = slots_.size() - 1;
  std::size_t i = hash_images(images) & mask;
  while (slots_[i] != 0) {
    auto other = (*this)[slots_[i] - 1];
    if (std::equal(other.begin(), other.end(), images.begin())) return {slots_[i] - 1, false};
    i = (i + 1) & mask;
  }
  auto id = static_cast<std::uint32_t>(count_++);
  data_.insert(data_.end(), images.begin(), images.end());
  slots_[i] = id + 1;
  return {id, true};
}

std::optional<std::uint32_t> ElementPool::find(std::span<const std::uint32_t> images) const {
  if (slots_.empty() || images.size() != degree_) return std::nullopt;
  std::size_t mask = slots_.size() - 1;
  std::size_t i = hash_images(images) & mask;
  while (slots_[i] != 0) {
    auto other = (*this)[slots_[i] - 1];
    if (std::equal(other.begin(), other.end(), images.begin())) return slots_[i] - 1;
    i = (i + 1) & mask;
  }
  return std::nullopt;
}

Word Subgroup::word(std::uint32_t i) const {
  Word w;
  while (parent_[i] != UINT32_MAX) {
    w.push_back(parent_letter_[i]);
    i = parent_[i];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

EGroup::EGroup(std::size_t degree, std::vector<Permutation> generators, std::vector<std::string> letter_names)
    : degree_(degree), letter_names_(std::move(letter_names)) {
  if (generators.size() > max_letters) throw std::invalid_argument("too many letters");
  for (auto& p : generators) {
    if (p.degree() != degree) throw std::invalid_argument("generator degree mismatch");
    Permutation q = p.inverse();
    gens_.push_back(std::move(p));
    gens_.push_back(std::move(q));
  }
}

void EGroup::multiply(std::span<std::uint32_t> images, SignedLetter s) const {
  const auto& g = gens_[s.code()];
  for (auto& x : images) x = g[x];
}

Permutation EGroup::eval(const Word& p) const {
  std::vector<std::uint32_t> img(degree_);
  std::iota(img.begin(), img.end(), 0U);
  for (SignedLetter s : p) {
    if (s.letter >= letter_count()) throw std::invalid_argument("foreign letter in word");
    multiply(img, s);
  }
  return Permutation::from_span(img);
}

std::shared_ptr<const Subgroup> EGroup::subgroup(LetterSet a, const Budget& budget) const {
  if (!a.subset_of(alphabet())) throw std::invalid_argument("letter set outside alphabet");
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(a.bits()); it != cache_.end()) return it->second;
  }
  std::shared_ptr<Subgroup> sg(new Subgroup(degree_));
  sg->letters_ = a;
  sg->stride_ = 2 * letter_count();
  std::vector<std::uint32_t> current(degree_), next(degree_);
  std::iota(current.begin(), current.end(), 0U);
  sg->pool_.intern(current);
  sg->parent_.push_back(UINT32_MAX);
  sg->parent_letter_.push_back({});
  std::vector<SignedLetter> steps;
  for (Letter x : a) {
    steps.push_back(pos(x));
    steps.push_back(neg(x));
  }
  for (std::uint32_t i = 0; i < sg->pool_.size(); ++i) {
    auto cur = sg->pool_[i];
    current.assign(cur.begin(), cur.end());
    sg->step_.resize(sg->pool_.size() * sg->stride_, UINT32_MAX);
    for (SignedLetter s : steps) {
      const auto& g = gens_[s.code()];
      for (std::size_t x = 0; x < degree_; ++x) next[x] = g[current[x]];
      auto [id, fresh] = sg->pool_.intern(next);
      if (fresh) {
        if (sg->pool_.size() > budget.elements) throw BudgetExceeded("elements", sg->pool_.size());
        if (sg->pool_.size() * std::max<std::size_t>(degree_, 1) > budget.cells)
          throw BudgetExceeded("element cells", sg->pool_.size() * degree_);
        sg->parent_.push_back(i);
        sg->parent_letter_.push_back(s);
      }
      sg->step_[static_cast<std::size_t>(i) * sg->stride_ + s.code()] = id;
    }
  }
  sg->step_.resize(sg->pool_.size() * sg->stride_, UINT32_MAX);
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(a.bits(), std::move(sg)).first->second;
}

std::shared_ptr<EGroup> transition_group(std::shared_ptr<const LabelledGraph> g) {
  auto group = transition_group(*g);
  group->set_defining_graph(std::move(g));
  return group;
}

std::shared_ptr<EGroup> transition_group(const LabelledGraph& g) {
  if (!is_complete(g)) throw GraphError("transition group needs a complete E-graph");
  std::vector<Permutation> gens;
  for (Letter a = 0; a < g.alphabet_size(); ++a) {
    std::vector<std::uint32_t> img(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) img[v] = g.follow(v, pos(a));
    gens.emplace_back(std::move(img));
  }
  return std::make_shared<EGroup>(g.vertex_count(), std::move(gens), g.letter_names());
}

std::vector<Permutation> subgroup_elements(const EGroup& g, LetterSet a, const Budget& budget) {
  auto sg = g.subgroup(a, budget);
  std::vector<Permutation> out;
  out.reserve(sg->order());
  for (std::uint32_t i = 0; i < sg->order(); ++i) out.push_back(sg->permutation(i));
  return out;
}

LabelledGraph cayley_graph(const Subgroup& s, std::size_t alphabet_size) {
  GraphBuilder b(alphabet_size);
  b.add_vertices(s.order());
  for (std::uint32_t i = 0; i < s.order(); ++i)
    for (Letter a : s.letters()) b.add_edge(i, s.step(i, pos(a)), a);
  return std::move(b).build();
}

LabelledGraph cayley_graph(const EGroup& g, LetterSet a, const Budget& budget) {
  auto s = g.subgroup(a, budget);
  if (s->order() > budget.vertices) throw BudgetExceeded("cayley graph vertices", s->order());
  auto graph = cayley_graph(*s, g.letter_count());
  return graph;
}

std::optional<CanonicalMorphism> find_canonical_morphism(const LabelledGraph& source, const LabelledGraph& target,
                                                         VertexId base) {
  if (source.vertex_count() == 0 || base >= target.vertex_count()) return std::nullopt;
  CanonicalMorphism m;
  m.base = base;
  m.vertex_map.assign(source.vertex_count(), no_vertex);
  m.edge_map.assign(source.edge_count(), no_edge);
  m.vertex_map[0] = base;
  std::deque<VertexId> queue{0};
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    for (EdgeId e : source.out_edges(x)) {
      EdgeId f = target.out_edge(m.vertex_map[x], source.label(e));
      if (f == no_edge) return std::nullopt;
      VertexId y = source.omega(e);
      if (m.vertex_map[y] == no_vertex) {
        m.vertex_map[y] = target.omega(f);
        queue.push_back(y);
      } else if (m.vertex_map[y] != target.omega(f)) {
        return std::nullopt;
      }
      m.edge_map[e] = f;
    }
  }
  if (std::find(m.vertex_map.begin(), m.vertex_map.end(), no_vertex) != m.vertex_map.end()) return std::nullopt;
  return m;
}

bool covers_completion(const Subgroup& src, const Subgroup& tgt) {
  if (!tgt.letters().subset_of(src.letters())) throw std::invalid_argument("target letters must be a subset");
  std::vector<std::uint32_t> phi(src.order(), UINT32_MAX);
  phi[0] = 0;
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    std::uint32_t i = queue.front();
    queue.pop_front();
    for (Letter a : src.letters()) {
      for (SignedLetter s : {pos(a), neg(a)}) {
        std::uint32_t j = src.step(i, s);
        std::uint32_t t = tgt.letters().contains(a) ? tgt.step(phi[i], s) : phi[i];
        if (phi[j] == UINT32_MAX) {
          phi[j] = t;
          queue.push_back(j);
        } else if (phi[j] != t) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_retractable_on(const EGroup& g, LetterSet a, const Budget& budget) {
  auto src = g.subgroup(a, budget);
  for (LetterSet b : proper_subsets(a)) {
    if (b.empty()) continue;
    if (!covers_completion(*src, *g.subgroup(b, budget))) return false;
  }
  return true;
}

bool is_retractable(const EGroup& g, const Budget& budget) { return is_retractable_on(g, g.alphabet(), budget); }

bool is_k_retractable(const EGroup& g, std::size_t k, const Budget& budget) {
  if (k >= g.letter_count()) return is_retractable(g, budget);
  for (LetterSet a : subsets_of_size(g.alphabet(), k))
    if (!is_retractable_on(g, a, budget)) return false;
  return true;
}

std::optional<Word> sampled_retractability_violation(const EGroup& g, LetterSet a, std::size_t samples,
                                                     std::size_t max_length, std::mt19937_64& rng,
                                                     const Budget& budget) {
  auto sg = g.subgroup(a, budget);
  std::vector<Letter> letters = a.letters();
  if (letters.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, 2 * letters.size() - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    Word p;
    for (std::size_t n = len(rng); n > 0; --n) {
      std::size_t r = pick(rng);
      p.push_back({letters[r / 2], (r & 1U) != 0});
    }
    auto idx = sg->index_of(g.eval(p).images());
    if (!idx) return p;
    Word q = sg->word(*idx);
    for (Letter x : letters)
      if (g.eval(delete_letters(p, LetterSet{x})) != g.eval(delete_letters(q, LetterSet{x}))) return p;
  }
  return std::nullopt;
}

GroupTable::GroupTable(const EGroup& g, const Budget& budget) {
  auto full = g.subgroup(g.alphabet(), budget);
  order_ = full->order();
  mul_.resize(order_ * order_);
  inv_.resize(order_);
  std::vector<Permutation> perms;
  for (std::uint32_t i = 0; i < order_; ++i) perms.push_back(full->permutation(i));
  for (std::uint32_t i = 0; i < order_; ++i) {
    inv_[i] = *full->index_of(perms[i].inverse().images());
    for (std::uint32_t j = 0; j < order_; ++j) mul_[i * order_ + j] = *full->index_of(perms[i].then(perms[j]).images());
  }
  const std::size_t subsets = std::size_t{1} << g.letter_count();
  member_.assign(subsets, std::vector<char>(order_, 0));
  elements_.resize(subsets);
  for (std::size_t bits = 0; bits < subsets; ++bits) {
    auto sg = g.subgroup(LetterSet(bits), budget);
    for (std::uint32_t i = 0; i < sg->order(); ++i) {
      std::uint32_t x = *full->index_of(sg->element(i));
      member_[bits][x] = 1;
      elements_[bits].push_back(x);
    }
  }
}

std::optional<std::string> two_acyclicity_violation(const GroupTable& t, LetterSet alphabet) {
  auto subsets = all_subsets(alphabet);
  for (LetterSet a : subsets)
    for (LetterSet b : subsets)
      for (std::uint32_t x : t.elements(a))
        if (t.in(x, b) && !t.in(x, a & b))
          return "element " + std::to_string(x) + " lies in G[" + render_set(a) + "] and G[" + render_set(b) +
                 "] but not in their intersection subgroup";
  return std::nullopt;
}

std::optional<std::string> three_acyclicity_violation(const GroupTable& t, LetterSet alphabet) {
  auto subsets = all_subsets(alphabet);
  for (LetterSet a : subsets)
    for (LetterSet b : subsets)
      for (LetterSet c : subsets)
        for (std::uint32_t h : t.elements(a)) {
          std::uint32_t hi = t.inv(h);
          for (std::uint32_t k : t.elements(c)) {
            if (!t.in(t.mul(hi, k), b)) continue;
            std::uint32_t ki = t.inv(k);
            bool met = false;
            for (std::uint32_t x : t.elements(c & a))
              if (t.in(t.mul(hi, x), a & b) && t.in(t.mul(ki, x), b & c)) {
                met = true;
                break;
              }
            if (!met)
              return "cosets for A=" + render_set(a) + ", B=" + render_set(b) + ", C=" + render_set(c) + " at h=" +
                     std::to_string(h) + ", k=" + std::to_string(k) + " have empty triple intersection";
          }
        }
  return std::nullopt;
}

LetterSet content(const EGroup& g, const Word& p) {
  Permutation value = g.eval(p);
  LetterSet c;
  for (Letter a : letters_of(p))
    if (g.eval(delete_letters(p, LetterSet{a})) != value) c.insert(a);
  return c;
}

Expansion::Expansion(const EGroup& source, const EGroup& target, Projection project)
    : source_(&source), target_(&target), project_(std::move(project)) {
  if (source.letter_count() != target.letter_count()) throw std::invalid_argument("expansion alphabet mismatch");
  for (Letter a = 0; a < source.letter_count(); ++a)
    if (project_(source.gen(pos(a)).images()) != target.gen(pos(a)))
      throw std::invalid_argument("expansion does not respect generators");
}

Expansion Expansion::prefix(const EGroup& source, const EGroup& target) {
  std::size_t d = target.degree();
  if (d > source.degree()) throw std::invalid_argument("target carrier is not a prefix");
  return Expansion(source, target, [d](std::span<const std::uint32_t> h) { return Permutation::from_span(h.first(d)); });
}

bool is_stable(const Expansion& exp, LetterSet a, const Budget& budget) {
  return exp.source().subgroup(a, budget)->order() == exp.target().subgroup(a, budget)->order();
}

bool is_k_stable(const Expansion& exp, std::size_t k, const Budget& budget) {
  for (LetterSet a : subsets_of_size(exp.source().alphabet(), k))
    if (!is_stable(exp, a, budget)) return false;
  return true;
}

std::shared_ptr<EGroup> abelian_p_group(std::size_t letters, std::uint32_t p) {
  if (p < 2) throw std::invalid_argument("p must be prime");
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("p must be prime");
  std::size_t n = 1;
  for (std::size_t i = 0; i < letters; ++i) {
    n *= p;
    if (n > 10'000'000) throw BudgetExceeded("abelian carrier", n);
  }
  std::vector<Permutation> gens;
  std::size_t stride = 1;
  for (std::size_t a = 0; a < letters; ++a, stride *= p) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t digit = (x / stride) % p;
      img[x] = static_cast<std::uint32_t>(x - digit * stride + ((digit + 1) % p) * stride);
    }
    gens.emplace_back(std::move(img));
  }
  return std::make_shared<EGroup>(n, std::move(gens));
}

namespace {

struct AutoSearch {
  const LabelledGraph& g;
  std::size_t limit;
  std::vector<VertexId> order;
  std::vector<VertexId> fwd, bwd;
  std::vector<GraphAutomorphism> found;

  std::size_t count_between(VertexId u, VertexId x) const {
    std::size_t c = 0;
    for (EdgeId e : g.out_edges(u))
      if (LabelledGraph::is_positive(e) && g.omega(e) == x) ++c;
    return c;
  }

  bool consistent(VertexId u, VertexId w) const {
    if (g.out_edges(u).size() != g.out_edges(w).size()) return false;
    if (count_between(u, u) != count_between(w, w)) return false;
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
      if (fwd[x] == no_vertex) continue;
      if (count_between(u, x) != count_between(w, fwd[x])) return false;
      if (count_between(x, u) != count_between(fwd[x], w)) return false;
    }
    return true;
  }

  void edges(std::size_t i, std::vector<Letter>& lmap, std::vector<char>& used) {
    if (found.size() >= limit) return;
    if (i == g.positive_edge_count()) {
      found.push_back({fwd, lmap});
      return;
    }
    EdgeId e = LabelledGraph::positive_edge(i);
    VertexId s = fwd[g.alpha(e)], t = fwd[g.omega(e)];
    for (EdgeId f : g.out_edges(s)) {
      if (!LabelledGraph::is_positive(f) || g.omega(f) != t || used[f / 2]) continue;
      used[f / 2] = 1;
      lmap[g.label(e).letter] = g.label(f).letter;
      edges(i + 1, lmap, used);
      used[f / 2] = 0;
    }
  }

  void vertices(std::size_t i) {
    if (found.size() >= limit) return;
    if (i == order.size()) {
      std::vector<Letter> lmap(g.alphabet_size());
      std::vector<char> used(g.positive_edge_count(), 0);
      edges(0, lmap, used);
      return;
    }
    VertexId u = order[i];
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
      if (bwd[w] != no_vertex || !consistent(u, w)) continue;
      fwd[u] = w;
      bwd[w] = u;
      vertices(i + 1);
      fwd[u] = no_vertex;
      bwd[w] = no_vertex;
    }
  }
};

}  // namespace

std::vector<GraphAutomorphism> oriented_automorphisms(const LabelledGraph& g, std::size_t limit) {
  AutoSearch s{g, limit, {}, {}, {}, {}};
  std::vector<char> seen(g.vertex_count(), 0);
  for (VertexId r = 0; r < g.vertex_count(); ++r) {
    if (seen[r]) continue;
    std::deque<VertexId> q{r};
    seen[r] = 1;
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      s.order.push_back(x);
      for (EdgeId e : g.out_edges(x))
        if (!seen[g.omega(e)]) {
          seen[g.omega(e)] = 1;
          q.push_back(g.omega(e));
        }
    }
  }
  s.fwd.assign(g.vertex_count(), no_vertex);
  s.bwd.assign(g.vertex_count(), no_vertex);
  s.vertices(0);
  return s.found;
}

Permutation GroupAutomorphism::operator()(const Permutation& g) const { return lift_inv_.then(g).then(lift_); }

Word apply_letter_map(const Word& p, const std::vector<Letter>& letter_map) {
  Word q;
  q.reserve(p.size());
  for (SignedLetter s : p) q.push_back({letter_map.at(s.letter), s.inverse});
  return q;
}

std::optional<GroupAutomorphism> extend_automorphism(const EGroup& group, const std::vector<Letter>& letter_map) {
  const LabelledGraph* d = group.defining_graph();
  if (d == nullptr) return std::nullopt;
  const std::size_t n = d->vertex_count();
  const std::size_t letters = group.letter_count();
  if (letter_map.size() != letters) return std::nullopt;
  {
    std::vector<char> hit(letters, 0);
    for (Letter a : letter_map) {
      if (a >= letters || hit[a]) return std::nullopt;
      hit[a] = 1;
    }
  }
  // per-vertex cycle lengths give a cheap filter on candidate images
  std::vector<std::vector<std::uint32_t>> cycle(letters, std::vector<std::uint32_t>(n, 0));
  for (Letter a = 0; a < letters; ++a) {
    for (VertexId v = 0; v < n; ++v) {
      if (cycle[a][v] != 0) continue;
      std::vector<VertexId> orbit{v};
      for (VertexId x = d->follow(v, pos(a)); x != v; x = d->follow(x, pos(a))) orbit.push_back(x);
      for (VertexId x : orbit) cycle[a][x] = static_cast<std::uint32_t>(orbit.size());
    }
  }
  auto parts = component_partition(*d, LetterSet::first_n(letters));
  std::vector<std::size_t> part_size(parts.count, 0);
  for (auto c : parts.class_of) ++part_size[c];

  std::vector<VertexId> sigma(n, no_vertex), image_of(n, no_vertex);
  std::vector<char> part_done(parts.count, 0);
  std::vector<VertexId> touched;
  for (VertexId base = 0; base < n; ++base) {
    if (part_done[parts.class_of[base]]) continue;
    part_done[parts.class_of[base]] = 1;
    bool placed = false;
    for (VertexId y = 0; y < n && !placed; ++y) {
      if (image_of[y] != no_vertex || part_size[parts.class_of[y]] != part_size[parts.class_of[base]]) continue;
      bool ok = true;
      for (Letter a = 0; a < letters && ok; ++a) ok = cycle[a][base] == cycle[letter_map[a]][y];
      if (!ok) continue;
      touched.clear();
      sigma[base] = y;
      image_of[y] = base;
      touched.push_back(base);
      std::deque<VertexId> queue{base};
      while (!queue.empty() && ok) {
        VertexId v = queue.front();
        queue.pop_front();
        for (Letter a = 0; a < letters && ok; ++a) {
          for (bool inv : {false, true}) {
            VertexId w = d->follow(v, {a, inv});
            VertexId t = d->follow(sigma[v], {letter_map[a], inv});
            if (sigma[w] == no_vertex) {
              if (image_of[t] != no_vertex) {
                ok = false;
                break;
              }
              sigma[w] = t;
              image_of[t] = w;
              touched.push_back(w);
              queue.push_back(w);
            } else if (sigma[w] != t) {
              ok = false;
              break;
            }
          }
        }
      }
      if (ok) {
        placed = true;
      } else {
        for (VertexId v : touched) {
          image_of[sigma[v]] = no_vertex;
          sigma[v] = no_vertex;
        }
      }
    }
    if (!placed) return std::nullopt;
  }
  GroupAutomorphism phi(Permutation(sigma), letter_map);
  for (Letter a = 0; a < letters; ++a)
    if (phi(group.gen(pos(a))) != group.gen(pos(letter_map[a]))) return std::nullopt;
  return phi;
}

}  // namespace fgapprox
