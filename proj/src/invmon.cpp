#include "fgapprox/invmon.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace fgapprox {

namespace {

Partition partition_from(DisjointSets& ds, std::size_t n) {
  Partition p;
  p.class_of.assign(n, 0);
  std::vector<std::uint32_t> id(n, UINT32_MAX);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = ds.find(x);
    if (id[r] == UINT32_MAX) id[r] = static_cast<std::uint32_t>(p.count++);
    p.class_of[x] = id[r];
  }
  return p;
}

std::uint64_t fnv(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string InverseMonoid::name(MonoidElem x) const {
  if (x < t_.names.size() && !t_.names[x].empty()) return t_.names[x];
  return std::to_string(x);
}

InverseMonoid validate(MonoidTable t) {
  const std::size_t n = t.size;
  if (n == 0) throw MonoidError("monoid is empty", {});
  if (t.mul.size() != n * n || t.inv.size() != n) throw MonoidError("table dimensions do not match the size", {});
  for (MonoidElem x : t.mul)
    if (x >= n) throw MonoidError("product outside the element range", {x});
  for (MonoidElem x : t.inv)
    if (x >= n) throw MonoidError("inverse outside the element range", {x});
  if (t.one >= n) throw MonoidError("identity outside the element range", {t.one});
  InverseMonoid m;
  m.t_ = std::move(t);
  for (MonoidElem x = 0; x < n; ++x)
    if (m.mul(m.one(), x) != x || m.mul(x, m.one()) != x) throw MonoidError("identity is not neutral", {x});
  for (MonoidElem x = 0; x < n; ++x)
    for (MonoidElem y = 0; y < n; ++y) {
      MonoidElem xy = m.mul(x, y);
      for (MonoidElem z = 0; z < n; ++z)
        if (m.mul(xy, z) != m.mul(x, m.mul(y, z))) throw MonoidError("multiplication is not associative", {x, y, z});
    }
  for (MonoidElem x = 0; x < n; ++x) {
    MonoidElem xi = m.inv(x);
    if (m.inv(xi) != x) throw MonoidError("(x^-1)^-1 != x", {x});
    if (m.mul(m.mul(x, xi), x) != x) throw MonoidError("x x^-1 x != x", {x});
    for (MonoidElem y = 0; y < n; ++y) {
      if (m.inv(m.mul(x, y)) != m.mul(m.inv(y), xi)) throw MonoidError("(xy)^-1 != y^-1 x^-1", {x, y});
      MonoidElem e = m.mul(x, xi), f = m.mul(y, m.inv(y));
      if (m.mul(e, f) != m.mul(f, e)) throw MonoidError("x x^-1 and y y^-1 do not commute", {x, y});
    }
  }
  for (MonoidElem x = 0; x < n; ++x)
    if (m.is_idempotent(x)) m.idempotents_.push_back(x);
  m.leq_.assign(n * n, 0);
  for (MonoidElem y = 0; y < n; ++y)
    for (MonoidElem e : m.idempotents_) m.leq_[m.mul(y, e) * n + y] = 1;
  return m;
}

std::vector<MonoidElem> idempotents(const InverseMonoid& m) { return m.idempotents(); }

bool natural_leq(const InverseMonoid& m, MonoidElem x, MonoidElem y) { return m.leq(x, y); }

Partition sigma_classes(const InverseMonoid& m) {
  const std::size_t n = m.size();
  DisjointSets ds(n);
  std::vector<MonoidElem> first(n);
  for (MonoidElem e : m.idempotents()) {
    std::fill(first.begin(), first.end(), UINT32_MAX);
    for (MonoidElem x = 0; x < n; ++x) {
      MonoidElem xe = m.mul(x, e);
      if (first[xe] == UINT32_MAX) first[xe] = x;
      else ds.unite(first[xe], x);
    }
  }
  return partition_from(ds, n);
}

std::optional<std::string> congruence_violation(const InverseMonoid& m, const Partition& p) {
  const std::size_t n = m.size();
  std::vector<MonoidElem> rep(p.count, UINT32_MAX);
  for (MonoidElem x = 0; x < n; ++x)
    if (rep[p.class_of[x]] == UINT32_MAX) rep[p.class_of[x]] = x;
  for (MonoidElem x = 0; x < n; ++x) {
    MonoidElem r = rep[p.class_of[x]];
    if (r == x) continue;
    for (MonoidElem c = 0; c < n; ++c) {
      if (p.class_of[m.mul(x, c)] != p.class_of[m.mul(r, c)])
        return "classes of " + m.name(x) + " and " + m.name(r) + " split under right multiplication by " + m.name(c);
      if (p.class_of[m.mul(c, x)] != p.class_of[m.mul(c, r)])
        return "classes of " + m.name(x) + " and " + m.name(r) + " split under left multiplication by " + m.name(c);
    }
  }
  return std::nullopt;
}

MonoidTable quotient_table(const InverseMonoid& m, const Partition& p) {
  const std::size_t n = m.size();
  std::vector<MonoidElem> rep(p.count, UINT32_MAX);
  for (MonoidElem x = 0; x < n; ++x)
    if (rep[p.class_of[x]] == UINT32_MAX) rep[p.class_of[x]] = x;
  MonoidTable t;
  t.size = p.count;
  t.mul.resize(p.count * p.count);
  t.inv.resize(p.count);
  for (std::size_t i = 0; i < p.count; ++i) {
    t.inv[i] = p.class_of[m.inv(rep[i])];
    t.names.push_back("[" + m.name(rep[i]) + "]");
    for (std::size_t j = 0; j < p.count; ++j) t.mul[i * p.count + j] = p.class_of[m.mul(rep[i], rep[j])];
  }
  t.one = p.class_of[m.one()];
  return t;
}

bool is_group_congruence(const InverseMonoid& m, const Partition& p) {
  if (congruence_violation(m, p)) return false;
  for (MonoidElem x = 0; x < m.size(); ++x)
    if (p.class_of[m.mul(x, m.inv(x))] != p.class_of[m.one()]) return false;
  return true;
}

Partition generated_congruence(const InverseMonoid& m, MonoidElem x, MonoidElem y) {
  const std::size_t n = m.size();
  DisjointSets ds(n);
  std::deque<std::pair<MonoidElem, MonoidElem>> work{{x, y}};
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    if (!ds.unite(a, b)) continue;
    for (MonoidElem c = 0; c < n; ++c) {
      work.emplace_back(m.mul(a, c), m.mul(b, c));
      work.emplace_back(m.mul(c, a), m.mul(c, b));
    }
  }
  return partition_from(ds, n);
}

FInverseResult is_f_inverse(const InverseMonoid& m) {
  Partition sigma = sigma_classes(m);
  std::vector<std::vector<MonoidElem>> classes(sigma.count);
  for (MonoidElem x = 0; x < m.size(); ++x) classes[sigma.class_of[x]].push_back(x);
  FInverseResult r;
  for (std::uint32_t c = 0; c < sigma.count; ++c) {
    const auto& cls = classes[c];
    std::optional<MonoidElem> top;
    for (MonoidElem y : cls)
      if (std::all_of(cls.begin(), cls.end(), [&](MonoidElem x) { return m.leq(x, y); })) top = y;
    r.greatest.push_back(top);
    if (!top && r.holds) {
      r.holds = false;
      r.failing_class = c;
      for (MonoidElem y : cls)
        if (std::none_of(cls.begin(), cls.end(), [&](MonoidElem z) { return z != y && m.leq(y, z); }))
          r.maximal.push_back(y);
    }
  }
  return r;
}

std::string wagner_preston(const InverseMonoid& m) {
  std::ostringstream out;
  for (MonoidElem x = 0; x < m.size(); ++x) {
    MonoidElem e = m.mul(x, m.inv(x));
    out << m.name(x) << ": {";
    bool first = true;
    for (MonoidElem y = 0; y < m.size(); ++y) {
      if (m.mul(y, e) != y) continue;
      out << (first ? "" : ", ") << m.name(y) << "->" << m.name(m.mul(y, x));
      first = false;
    }
    out << "}\n";
  }
  return out.str();
}

FiniteGroup::FiniteGroup(std::shared_ptr<const EGroup> q, std::size_t max_order) : q_(std::move(q)) {
  Budget b;
  b.elements = max_order;
  auto sg = q_->subgroup(q_->alphabet(), b);
  order_ = sg->order();
  const std::size_t na = letter_count();
  if (order_ * na > max_letters) throw std::invalid_argument("Cayley graph of Q has more than 64 edges");
  mul_.resize(order_ * order_);
  inv_.resize(order_);
  std::vector<Permutation> perms;
  for (std::uint32_t i = 0; i < order_; ++i) perms.push_back(sg->permutation(i));
  for (std::uint32_t i = 0; i < order_; ++i) {
    inv_[i] = *sg->index_of(perms[i].inverse().images());
    for (std::uint32_t j = 0; j < order_; ++j) mul_[i * order_ + j] = *sg->index_of(perms[i].then(perms[j]).images());
  }
  for (std::uint32_t c = 0; c < 2 * na; ++c) gen_.push_back(sg->step(0, SignedLetter::from_code(c)));

  std::vector<std::string> names = q_->letter_names();
  names.resize(na);
  for (Letter a = 0; a < na; ++a)
    if (names[a].empty()) names[a] = std::string(1, static_cast<char>('a' + a % 26));
  std::vector<std::string> vertices;
  for (std::uint32_t i = 0; i < order_; ++i) {
    Word w = sg->word(i);
    vertices.push_back(w.empty() ? "1" : render_word(w, names));
  }
  std::vector<InputEdge> edges;
  for (std::uint32_t g = 0; g < order_; ++g)
    for (Letter a = 0; a < na; ++a)
      edges.push_back({"(" + vertices[g] + "," + names[a] + ")", vertices[g], vertices[mul(g, gen(pos(a)))]});
  cayley_ = build_graph(vertices, edges);
}

std::uint32_t FiniteGroup::eval(const Word& p) const {
  std::uint32_t x = one;
  for (SignedLetter s : p) x = mul(x, gen(s));
  return x;
}

SignedLetter FiniteGroup::edge_step(std::uint32_t g, SignedLetter s) const {
  if (!s.inverse) return pos(edge_letter(g, s.letter));
  return neg(edge_letter(mul(g, gen(s)), s.letter));
}

Word FiniteGroup::path_word(const Word& p) const {
  Word out;
  std::uint32_t g = one;
  for (SignedLetter s : p) {
    out.push_back(edge_step(g, s));
    g = mul(g, gen(s));
  }
  return out;
}

std::vector<Letter> FiniteGroup::translation(std::uint32_t q) const {
  std::vector<Letter> map(order_ * letter_count());
  for (std::uint32_t g = 0; g < order_; ++g)
    for (Letter a = 0; a < letter_count(); ++a) map[edge_letter(g, a)] = edge_letter(mul(q, g), a);
  return map;
}

std::shared_ptr<EGroup> cyclic_group(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group of order 0");
  std::vector<std::uint32_t> img(n);
  for (std::uint32_t i = 0; i < n; ++i) img[i] = (i + 1) % n;
  return std::make_shared<EGroup>(n, std::vector<Permutation>{Permutation(img)}, std::vector<std::string>{"a"});
}

MMExpansion::MMExpansion(const FiniteGroup& q, std::size_t max_size) : q_(&q) {
  elements_.push_back({LetterSet{}, FiniteGroup::one});
  index_.emplace(elements_[0], 0);
  const std::size_t na = q.letter_count();
  std::vector<std::vector<MonoidElem>> step;
  for (MonoidElem i = 0; i < elements_.size(); ++i) {
    step.emplace_back(2 * na);
    for (std::uint32_t c = 0; c < 2 * na; ++c) {
      SignedLetter s = SignedLetter::from_code(c);
      MMElement x = elements_[i];
      x.edges.insert(q.edge_step(x.g, s).letter);
      x.g = q.mul(x.g, q.gen(s));
      auto [it, fresh] = index_.emplace(x, static_cast<MonoidElem>(elements_.size()));
      if (fresh) {
        elements_.push_back(x);
        if (elements_.size() > max_size) throw BudgetExceeded("Margolis-Meakin elements", elements_.size());
      }
      step[i][c] = it->second;
    }
  }
  for (std::uint32_t c = 0; c < 2 * na; ++c) gen_.push_back(step[0][c]);

  MonoidTable t;
  const std::size_t n = elements_.size();
  t.size = n;
  t.mul.resize(n * n);
  t.inv.resize(n);
  t.one = 0;
  for (MonoidElem x = 0; x < n; ++x) {
    auto xi = find(inverse(elements_[x]));
    if (!xi) throw std::logic_error("Margolis-Meakin expansion not closed under inversion");
    t.inv[x] = *xi;
    for (MonoidElem y = 0; y < n; ++y) {
      auto xy = find(product(elements_[x], elements_[y]));
      if (!xy) throw std::logic_error("Margolis-Meakin expansion not closed under multiplication");
      t.mul[x * n + y] = *xy;
    }
  }
  for (MonoidElem x = 0; x < n; ++x) t.names.push_back(render(x));
  monoid_ = validate(std::move(t));
}

std::optional<MonoidElem> MMExpansion::find(const MMElement& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MonoidElem MMExpansion::eval(const Word& p) const {
  MonoidElem x = monoid_.one();
  for (SignedLetter s : p) x = monoid_.mul(x, gen(s));
  return x;
}

std::string MMExpansion::render(MonoidElem x) const {
  const MMElement& m = elements_[x];
  const auto& names = q_->cayley().letter_names();
  std::string s = "({";
  bool first = true;
  for (Letter e : m.edges) {
    s += (first ? "" : " ") + (e < names.size() ? names[e] : "e" + std::to_string(e));
    first = false;
  }
  return s + "}," + q_->cayley().vertex_name(m.g) + ")";
}

LetterSet MMExpansion::translate(LetterSet edges, std::uint32_t q) const {
  const std::size_t na = q_->letter_count();
  LetterSet out;
  for (Letter e : edges) out.insert(q_->edge_letter(q_->mul(q, e / na), e % na));
  return out;
}

MMElement MMExpansion::product(const MMElement& x, const MMElement& y) const {
  return {x.edges | translate(y.edges, x.g), q_->mul(x.g, y.g)};
}

MMElement MMExpansion::inverse(const MMElement& x) const {
  std::uint32_t gi = q_->inv(x.g);
  return {translate(x.edges, gi), gi};
}

MMElement MMExpansion::value(const Word& p) const {
  Word path = q_->path_word(p);
  return {letters_of(path), q_->eval(p)};
}

MMElement MMExpansion::spanned(LetterSet edges, std::uint32_t g) const { return {edges, g}; }

bool MMExpansion::is_valid(const MMElement& m) const {
  const LabelledGraph& c = q_->cayley();
  std::vector<char> seen(c.vertex_count(), 0);
  std::deque<VertexId> queue{FiniteGroup::one};
  seen[FiniteGroup::one] = 1;
  LetterSet reached;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : c.out_edges(v)) {
      if (!m.edges.contains(c.label(e).letter)) continue;
      reached.insert(c.label(e).letter);
      VertexId w = c.omega(e);
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return reached == m.edges && seen[m.g];
}

std::size_t count_mm_elements(const FiniteGroup& q) {
  const LabelledGraph& c = q.cayley();
  const std::size_t ne = c.positive_edge_count();
  if (ne > 24) throw std::invalid_argument("too many edges for brute-force enumeration");
  std::size_t total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ne); ++mask) {
    DisjointSets ds(c.vertex_count());
    std::vector<char> touched(c.vertex_count(), 0);
    touched[0] = 1;
    for (std::size_t i = 0; i < ne; ++i) {
      if (!((mask >> i) & 1U)) continue;
      EdgeId e = LabelledGraph::positive_edge(i);
      ds.unite(c.alpha(e), c.omega(e));
      touched[c.alpha(e)] = touched[c.omega(e)] = 1;
    }
    std::size_t root = ds.find(0), vertices = 0;
    bool connected = true;
    for (VertexId v = 0; v < c.vertex_count(); ++v) {
      if (!touched[v]) continue;
      if (ds.find(v) != root) connected = false;
      ++vertices;
    }
    if (connected) total += vertices;
  }
  return total;
}

QAction::QAction(const FiniteGroup& q, std::shared_ptr<const EGroup> g) {
  for (std::uint32_t x = 0; x < q.order(); ++x) {
    auto aut = extend_automorphism(*g, q.translation(x));
    if (!aut) throw ActionError("translation by " + q.cayley().vertex_name(x) + " does not extend to G");
    auts_.push_back(std::move(*aut));
  }
}

namespace {
std::size_t semidirect_hash(const SemidirectElement& x) {
  return hash_images(x.gamma.images()) ^ (static_cast<std::size_t>(x.q) * 0x9e3779b97f4a7c15ULL);
}
}  // namespace

SemidirectH::SemidirectH(const FiniteGroup& q, std::shared_ptr<const EGroup> g, const QAction& action,
                         const Budget& budget)
    : q_(&q), g_(std::move(g)), action_(&action) {
  const std::size_t na = q.letter_count();
  auto intern = [&](SemidirectElement x, const Word& w) -> std::uint32_t {
    if (auto f = find(x)) return *f;
    auto id = static_cast<std::uint32_t>(elems_.size());
    buckets_[semidirect_hash(x)].push_back(id);
    elems_.push_back(std::move(x));
    words_.push_back(w);
    if (elems_.size() > budget.elements) throw BudgetExceeded("elements of H", elems_.size());
    return id;
  };
  intern({Permutation::identity(g_->degree()), FiniteGroup::one}, {});
  std::vector<std::uint32_t> step;
  for (std::uint32_t i = 0; i < elems_.size(); ++i) {
    for (std::uint32_t c = 0; c < 2 * na; ++c) {
      SignedLetter s = SignedLetter::from_code(c);
      const SemidirectElement& x = elems_[i];
      SemidirectElement y{x.gamma.then(g_->gen(q.edge_step(x.q, s))), q.mul(x.q, q.gen(s))};
      Word w = words_[i];
      w.push_back(s);
      step.push_back(intern(std::move(y), w));
    }
  }
  for (std::uint32_t c = 0; c < 2 * na; ++c) gen_.push_back(step[c]);
  const std::size_t n = elems_.size();
  mul_.resize(n * n);
  inv_.resize(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    auto xi = find(inverse(elems_[x]));
    if (!xi) throw ActionError("H is not closed under semidirect inversion");
    inv_[x] = *xi;
    for (std::uint32_t y = 0; y < n; ++y) {
      auto xy = find(product(elems_[x], elems_[y]));
      if (!xy) throw ActionError("H is not closed under the semidirect product");
      mul_[x * n + y] = *xy;
    }
  }
}

std::optional<std::uint32_t> SemidirectH::find(const SemidirectElement& x) const {
  auto it = buckets_.find(semidirect_hash(x));
  if (it == buckets_.end()) return std::nullopt;
  for (std::uint32_t id : it->second)
    if (elems_[id] == x) return id;
  return std::nullopt;
}

std::uint32_t SemidirectH::eval(const Word& p) const {
  std::uint32_t x = 0;
  for (SignedLetter s : p) x = mul(x, gen(s));
  return x;
}

SemidirectElement SemidirectH::product(const SemidirectElement& x, const SemidirectElement& y) const {
  return {x.gamma.then(action_->apply(x.q, y.gamma)), q_->mul(x.q, y.q)};
}

SemidirectElement SemidirectH::inverse(const SemidirectElement& x) const {
  std::uint32_t qi = q_->inv(x.q);
  return {action_->apply(qi, x.gamma.inverse()), qi};
}

SemidirectElement SemidirectH::value(const Word& p) const {
  return {g_->eval(q_->path_word(p)), q_->eval(p)};
}

std::vector<PsiValue> compute_psi(const SemidirectH& h, const FiniteGroup& q, const EGroup& g,
                                  const MMExpansion& mm) {
  std::vector<PsiValue> out(h.order());
  for (std::uint32_t i = 0; i < h.order(); ++i) {
    if (i == 0) {
      out[i].m = mm.monoid().one();
      continue;
    }
    LetterSet c = content(g, q.path_word(h.word(i)));
    out[i].content = c;
    MMElement m = mm.spanned(c, h.element(i).q);
    if (c.empty() || !mm.is_valid(m)) continue;
    out[i].m = mm.find(m);
  }
  return out;
}

PremorphismReport verify_premorphism(const SemidirectH& h, const InverseMonoid& m,
                                     std::span<const std::optional<MonoidElem>> psi) {
  PremorphismReport r;
  auto word = [&](std::uint32_t i) { return "h" + std::to_string(i) + "=[" + render_word(h.word(i)) + "]"; };
  for (std::uint32_t i = 0; i < h.order(); ++i)
    if (!psi[i]) {
      r.defined = false;
      r.witnesses.push_back("psi undefined at " + word(i));
    }
  if (!r.defined) return r;
  if (*psi[0] != m.one()) {
    r.unit = false;
    r.witnesses.push_back("psi(1) = " + m.name(*psi[0]));
  }
  for (std::uint32_t i = 0; i < h.order(); ++i) {
    if (*psi[h.inv(i)] != m.inv(*psi[i]) && r.inverse) {
      r.inverse = false;
      r.witnesses.push_back("psi(h^-1) != psi(h)^-1 at " + word(i));
    }
    for (std::uint32_t j = 0; j < h.order(); ++j) {
      ++r.pairs_checked;
      if (!m.leq(m.mul(*psi[i], *psi[j]), *psi[h.mul(i, j)]) && r.subproduct) {
        r.subproduct = false;
        r.witnesses.push_back("psi(h)psi(h') not below psi(hh') at " + word(i) + ", " + word(j));
      }
    }
  }
  std::vector<char> covered(m.size(), 0);
  for (std::uint32_t i = 0; i < h.order(); ++i)
    for (MonoidElem x = 0; x < m.size(); ++x)
      if (m.leq(x, *psi[i])) covered[x] = 1;
  for (MonoidElem x = 0; x < m.size(); ++x)
    if (!covered[x]) {
      r.coverage = false;
      r.witnesses.push_back("no psi(h) above " + m.name(x));
      break;
    }
  return r;
}

PremorphismReport verify_premorphism(const SemidirectH& h, const InverseMonoid& m, std::span<const PsiValue> psi) {
  std::vector<std::optional<MonoidElem>> values;
  for (const auto& v : psi) values.push_back(v.m);
  return verify_premorphism(h, m, std::span<const std::optional<MonoidElem>>(values));
}

CoverReport f_inverse_cover(const SemidirectH& h, const MMExpansion& mm, std::span<const PsiValue> psi) {
  const InverseMonoid& m = mm.monoid();
  CoverReport r;
  r.h_order = h.order();
  r.m_order = m.size();
  const std::size_t nm = m.size();
  auto key = [&](std::uint32_t x, MonoidElem y) { return static_cast<std::uint64_t>(x) * nm + y; };

  std::vector<std::pair<std::uint32_t, MonoidElem>> t{{0, m.one()}};
  std::unordered_map<std::uint64_t, std::uint32_t> index{{key(0, m.one()), 0}};
  const std::uint32_t codes = static_cast<std::uint32_t>(2 * h.letter_count());
  for (std::uint32_t i = 0; i < t.size(); ++i) {
    for (std::uint32_t c = 0; c < codes; ++c) {
      SignedLetter s = SignedLetter::from_code(c);
      std::pair<std::uint32_t, MonoidElem> y{h.mul(t[i].first, h.gen(s)), m.mul(t[i].second, mm.gen(s))};
      if (index.emplace(key(y.first, y.second), static_cast<std::uint32_t>(t.size())).second) t.push_back(y);
    }
  }
  r.t_order = t.size();

  bool t_in_s = true;
  for (auto [x, y] : t)
    if (!psi[x].m || !m.leq(y, *psi[x].m)) {
      t_in_s = false;
      r.witnesses.push_back("(h" + std::to_string(x) + ", " + m.name(y) + ") lies in T but not in S");
      break;
    }
  bool s_in_t = true;
  for (std::uint32_t x = 0; x < h.order(); ++x) {
    if (!psi[x].m) continue;
    for (MonoidElem y = 0; y < nm; ++y) {
      if (!m.leq(y, *psi[x].m)) continue;
      ++r.s_order;
      if (!index.count(key(x, y)) && s_in_t) {
        s_in_t = false;
        r.witnesses.push_back("(h" + std::to_string(x) + ", " + m.name(y) + ") lies in S but not in T");
      }
    }
  }
  r.t_equals_s = t_in_s && s_in_t && r.s_order == r.t_order;

  const std::size_t n = t.size();
  MonoidTable table;
  table.size = n;
  table.mul.resize(n * n);
  table.inv.resize(n);
  table.one = 0;
  bool closed = true;
  for (std::uint32_t i = 0; i < n && closed; ++i) {
    auto [hx, mx] = t[i];
    auto inv_it = index.find(key(h.inv(hx), m.inv(mx)));
    if (inv_it == index.end()) {
      closed = false;
      break;
    }
    table.inv[i] = inv_it->second;
    table.names.push_back("(h" + std::to_string(hx) + "," + m.name(mx) + ")");
    for (std::uint32_t j = 0; j < n; ++j) {
      auto [hy, my] = t[j];
      auto it = index.find(key(h.mul(hx, hy), m.mul(mx, my)));
      if (it == index.end()) {
        closed = false;
        break;
      }
      table.mul[i * n + j] = it->second;
    }
  }
  if (!closed) {
    r.witnesses.push_back("T is not closed under the operations of H x M(Q)");
    return r;
  }
  std::optional<InverseMonoid> tm;
  try {
    tm = validate(std::move(table));
    r.inverse_monoid = true;
  } catch (const MonoidError& e) {
    r.witnesses.push_back(std::string("T: ") + e.what());
    return r;
  }
  FInverseResult fi = is_f_inverse(*tm);
  r.f_inverse = fi.holds;
  r.sigma_classes = fi.greatest.size();
  for (const auto& g : fi.greatest)
    if (g) r.class_maxima.push_back(t[*g]);
  if (!fi.holds) r.witnesses.push_back("sigma class of T without a greatest element");

  std::vector<char> hit_m(nm, 0), hit_h(h.order(), 0);
  for (auto [x, y] : t) {
    hit_m[y] = 1;
    hit_h[x] = 1;
  }
  r.surjective = std::all_of(hit_m.begin(), hit_m.end(), [](char c) { return c != 0; });
  r.subdirect = r.surjective && std::all_of(hit_h.begin(), hit_h.end(), [](char c) { return c != 0; });

  r.idempotent_separating = true;
  std::unordered_map<MonoidElem, std::uint32_t> image_of;
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  for (MonoidElem e : tm->idempotents()) {
    MonoidElem y = t[e].second;
    digest = fnv(fnv(digest, e), y);
    auto [it, fresh] = image_of.emplace(y, e);
    if (!fresh && r.idempotent_separating) {
      r.idempotent_separating = false;
      r.witnesses.push_back("idempotents " + tm->name(it->second) + " and " + tm->name(e) + " have the same image");
    }
  }
  r.separation_digest = digest;
  return r;
}

bool FCoverResult::passed() const {
  return tower && tower->complete() && !tower->check_failed() && lemma && lemma->passed() &&
         mm_order == mm_brute_force && value_formula && action_homomorphism && content_equivariant &&
         quotient_check && premorphism && premorphism->passed() && cover && cover->passed();
}

FCoverResult run_fcover(std::shared_ptr<const EGroup> qgroup, const FCoverOptions& options) {
  FCoverResult r;
  FiniteGroup q(std::move(qgroup), options.max_q_order);
  r.q_order = q.order();
  auto input = std::make_shared<const LabelledGraph>(q.cayley());
  r.tower = std::make_shared<Tower>(build_chain(input, options.tower));
  if (r.tower->check_failed()) {
    r.witnesses.push_back(r.tower->failure());
    return r;
  }
  if (!r.tower->complete()) return r;
  r.lemma = run_main_lemma(*r.tower, options.lemma);

  MMExpansion mm(q, options.max_monoid);
  r.mm_order = mm.monoid().size();
  r.mm_brute_force = count_mm_elements(q);
  if (r.mm_order != r.mm_brute_force)
    r.witnesses.push_back("M(Q) has " + std::to_string(r.mm_order) + " elements, brute force finds " +
                          std::to_string(r.mm_brute_force));

  std::shared_ptr<const EGroup> g = r.tower->group_ptr();
  std::optional<QAction> action;
  try {
    action.emplace(q, g);
  } catch (const ActionError& e) {
    r.action_homomorphism = false;
    r.witnesses.push_back(e.what());
    return r;
  }
  for (std::uint32_t x = 0; x < q.order() && r.action_homomorphism; ++x)
    for (std::uint32_t y = 0; y < q.order() && r.action_homomorphism; ++y)
      for (Letter a = 0; a < g->letter_count(); ++a) {
        const Permutation& gen = g->gen(pos(a));
        if (action->apply(q.mul(x, y), gen) != action->apply(x, action->apply(y, gen))) {
          r.action_homomorphism = false;
          r.witnesses.push_back("action of " + q.cayley().vertex_name(x) + " * " + q.cayley().vertex_name(y) +
                                " differs from the composite on letter " + std::to_string(a));
          break;
        }
      }

  SemidirectH h(q, g, *action, options.tower.budget);
  r.h_order = h.order();

  std::mt19937_64 rng(options.seed);
  LetterSet a_letters = q.egroup().alphabet();
  std::uniform_int_distribution<std::size_t> len(0, 12);
  for (std::size_t i = 0; i < options.samples; ++i) {
    Word p = random_word(a_letters, len(rng), rng);
    auto hv = h.find(h.value(p));
    if (!hv || *hv != h.eval(p)) {
      r.value_formula = false;
      r.witnesses.push_back("value of " + render_word(p) + " in H differs from the enumeration");
      break;
    }
    auto mv = mm.find(mm.value(p));
    if (!mv || *mv != mm.eval(p)) {
      r.value_formula = false;
      r.witnesses.push_back("value of " + render_word(p) + " in M(Q) differs from the enumeration");
      break;
    }
    Word path = q.path_word(p);
    LetterSet c = content(*g, path);
    for (std::uint32_t x = 0; x < q.order(); ++x) {
      auto map = q.translation(x);
      LetterSet moved;
      for (Letter e : c) moved.insert(map[e]);
      if (content(*g, apply_letter_map(path, map)) != moved) {
        r.content_equivariant = false;
        r.witnesses.push_back("content of the translate of " + render_word(p) + " by " +
                              q.cayley().vertex_name(x) + " is not the translated content");
        break;
      }
    }
  }

  auto psi = compute_psi(h, q, *g, mm);
  r.premorphism = verify_premorphism(h, mm.monoid(), psi);
  if (!r.premorphism->passed()) {
    for (const auto& w : r.premorphism->witnesses) r.witnesses.push_back(w);
    return r;
  }

  const InverseMonoid& m = mm.monoid();
  std::vector<Partition> congruences{sigma_classes(m)};
  std::uniform_int_distribution<MonoidElem> pick(0, static_cast<MonoidElem>(m.size() - 1));
  for (int i = 0; i < 3; ++i) congruences.push_back(generated_congruence(m, pick(rng), pick(rng)));
  for (const auto& theta : congruences) {
    InverseMonoid quotient = validate(quotient_table(m, theta));
    std::vector<std::optional<MonoidElem>> composed;
    for (const auto& v : psi) composed.push_back(theta.class_of[*v.m]);
    auto rep = verify_premorphism(h, quotient, std::span<const std::optional<MonoidElem>>(composed));
    if (!rep.passed()) {
      r.quotient_check = false;
      r.witnesses.push_back("composition with a quotient of M(Q) with " + std::to_string(theta.count) +
                            " classes is not a covering premorphism");
    }
  }

  r.cover = f_inverse_cover(h, mm, psi);
  for (const auto& w : r.cover->witnesses) r.witnesses.push_back(w);
  return r;
}

}  // namespace fgapprox
