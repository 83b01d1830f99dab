#include "fgapprox/cosetext.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace fgapprox {

Ambient::Ambient(std::shared_ptr<const EGroup> group, Budget budget)
    : group_(std::move(group)), budget_(budget), pool_(group_->degree()) {
  std::vector<std::uint32_t> id(group_->degree());
  std::iota(id.begin(), id.end(), 0U);
  intern(id);
}

ElemId Ambient::intern(std::span<const std::uint32_t> images) {
  auto [id, fresh] = pool_.intern(images);
  if (fresh) {
    if (pool_.size() > budget_.vertices) throw BudgetExceeded("vertices", pool_.size());
    if (pool_.size() * std::max<std::size_t>(pool_.degree(), 1) > budget_.cells)
      throw BudgetExceeded("element cells", pool_.size() * pool_.degree());
    steps_.resize(pool_.size() * 2 * letter_count(), UINT32_MAX);
  }
  return id;
}

ElemId Ambient::step(ElemId x, SignedLetter s) {
  std::size_t slot = static_cast<std::size_t>(x) * 2 * letter_count() + s.code();
  if (steps_[slot] != UINT32_MAX) return steps_[slot];
  std::vector<std::uint32_t> img(element(x).begin(), element(x).end());
  group_->multiply(img, s);
  ElemId y = intern(img);
  steps_[slot] = y;
  steps_[static_cast<std::size_t>(y) * 2 * letter_count() + s.inverted().code()] = x;
  return y;
}

ElemId Ambient::product(ElemId x, ElemId y) {
  auto ex = element(x);
  auto ey = element(y);
  std::vector<std::uint32_t> z(ex.size());
  for (std::size_t p = 0; p < z.size(); ++p) z[p] = ey[ex[p]];
  return intern(z);
}

ElemId Ambient::inverse(ElemId x) {
  auto ex = element(x);
  std::vector<std::uint32_t> z(ex.size());
  for (std::size_t p = 0; p < z.size(); ++p) z[ex[p]] = static_cast<std::uint32_t>(p);
  return intern(z);
}

ElemId Ambient::eval(const Word& p) {
  ElemId x = one;
  for (SignedLetter s : p) x = step(x, s);
  return x;
}

const Subgroup& Ambient::sub(LetterSet b) {
  auto it = subs_.find(b.bits());
  if (it == subs_.end()) it = subs_.emplace(b.bits(), group_->subgroup(b, budget_)).first;
  return *it->second;
}

const std::vector<ElemId>& Ambient::coset(ElemId x, LetterSet b) {
  auto key = std::pair{x, b.bits()};
  if (auto it = cosets_.find(key); it != cosets_.end()) return it->second;
  const Subgroup& h = sub(b);
  std::vector<ElemId> out;
  out.reserve(h.order());
  std::vector<std::uint32_t> z(group_->degree());
  for (std::uint32_t i = 0; i < h.order(); ++i) {
    auto ex = element(x);
    auto eh = h.element(i);
    for (std::size_t p = 0; p < z.size(); ++p) z[p] = eh[ex[p]];
    out.push_back(intern(z));
  }
  return cosets_.emplace(key, std::move(out)).first->second;
}

bool Ambient::in_subgroup(ElemId x, LetterSet b) { return sub(b).index_of(element(x)).has_value(); }

VertexId ElementGraphBuilder::vertex(ElemId x) {
  auto [it, fresh] = index_.try_emplace(x, static_cast<VertexId>(element_.size()));
  if (fresh) element_.push_back(x);
  return it->second;
}

void ElementGraphBuilder::edge(ElemId x, Letter a) {
  std::uint64_t key = static_cast<std::uint64_t>(x) * max_letters + a;
  if (!edge_seen_.try_emplace(key, 1).second) return;
  vertex(x);
  vertex(ambient_->step(x, pos(a)));
  edges_.emplace_back(x, a);
}

void ElementGraphBuilder::coset(ElemId x, LetterSet b) {
  for (ElemId h : ambient_->coset(x, b)) {
    vertex(h);
    for (Letter a : b) edge(h, a);
  }
}

ElementGraph ElementGraphBuilder::build() const {
  GraphBuilder gb(ambient_->letter_count());
  gb.add_vertices(element_.size());
  for (auto [x, a] : edges_) gb.add_edge(index_.at(x), index_.at(ambient_->step(x, pos(a))), a);
  return {std::move(gb).build(), element_};
}

std::vector<LetterSet> normalize_family(std::vector<LetterSet> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  std::vector<LetterSet> out;
  for (LetterSet b : p) {
    bool dominated = std::any_of(p.begin(), p.end(), [&](LetterSet c) { return b.proper_subset_of(c); });
    if (!dominated) out.push_back(b);
  }
  return out;
}

std::vector<std::vector<LetterSet>> proper_antichains(LetterSet a) {
  auto subs = proper_subsets(a);
  if (subs.size() > 20) throw std::invalid_argument("too many letters to enumerate antichains");
  std::vector<std::vector<LetterSet>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << subs.size()); ++mask) {
    std::vector<LetterSet> fam;
    for (std::size_t i = 0; i < subs.size(); ++i)
      if ((mask >> i) & 1U) fam.push_back(subs[i]);
    bool antichain = true;
    for (std::size_t i = 0; i < fam.size() && antichain; ++i)
      for (std::size_t j = 0; j < fam.size(); ++j)
        if (i != j && fam[i].subset_of(fam[j])) {
          antichain = false;
          break;
        }
    if (antichain) out.push_back(std::move(fam));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

Cluster cluster(Ambient& ambient, LetterSet a, const std::vector<LetterSet>& p) {
  auto fam = normalize_family(p);
  if (fam.empty()) throw std::invalid_argument("cluster family is empty");
  ElementGraphBuilder b(ambient);
  b.vertex(Ambient::one);
  LetterSet meet = a;
  for (LetterSet c : fam) {
    if (!c.subset_of(a)) throw std::invalid_argument("cluster member outside A");
    b.coset(Ambient::one, c);
    meet = meet & c;
  }
  Cluster cl{a, fam, b.build(), {}};
  for (VertexId v = 0; v < cl.graph.element.size(); ++v)
    if (ambient.in_subgroup(cl.graph.element[v], meet)) cl.core.push_back(v);
  return cl;
}

ElementGraph cluster_by_assembly(Ambient& ambient, const std::vector<LetterSet>& p) {
  auto fam = normalize_family(p);
  if (fam.empty()) throw std::invalid_argument("cluster family is empty");
  std::vector<LabelledGraph> parts;
  for (LetterSet c : fam) parts.push_back(cayley_graph(ambient.sub(c), ambient.letter_count()));
  std::vector<const LabelledGraph*> ptrs;
  for (const auto& g : parts) ptrs.push_back(&g);
  DisjointUnion du = disjoint_union(ptrs);
  const auto& g = du.graph;

  DisjointSets vs(g.vertex_count());
  DisjointSets es(g.positive_edge_count());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      LetterSet d = fam[i] & fam[j];
      const Subgroup& sd = ambient.sub(d);
      const Subgroup& si = ambient.sub(fam[i]);
      const Subgroup& sj = ambient.sub(fam[j]);
      for (std::uint32_t x = 0; x < sd.order(); ++x) {
        VertexId vi = du.vertex_offset[i] + *si.index_of(sd.element(x));
        VertexId vj = du.vertex_offset[j] + *sj.index_of(sd.element(x));
        vs.unite(vi, vj);
        for (Letter b : d) {
          EdgeId ei = g.out_edge(vi, pos(b));
          EdgeId ej = g.out_edge(vj, pos(b));
          es.unite(ei / 2, ej / 2);
        }
      }
    }
  }
  std::vector<std::uint32_t> vclass(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) vclass[v] = static_cast<std::uint32_t>(vs.find(v));
  std::vector<std::uint32_t> eclass(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    eclass[e] = static_cast<std::uint32_t>(2 * es.find(e / 2) + (e & 1U));
  GraphCongruence theta(g, std::move(vclass), std::move(eclass));
  Quotient q = quotient(g, theta);

  ElementGraph out{std::move(q.graph), {}};
  out.element.assign(out.graph.vertex_count(), Ambient::one);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const Subgroup& si = ambient.sub(fam[i]);
    for (std::uint32_t x = 0; x < si.order(); ++x)
      out.element[q.vertex_map[du.vertex_offset[i] + x]] = ambient.intern(si.element(x));
  }
  return out;
}

ElementGraph augmented_cluster(Ambient& ambient, const Cluster& cl, VertexId v, LetterSet b) {
  if (!b.proper_subset_of(cl.a)) throw std::invalid_argument("augmenting set must be a proper subset of A");
  ElementGraphBuilder builder(ambient);
  for (ElemId x : cl.graph.element) builder.vertex(x);
  for (EdgeId e = 0; e < cl.graph.graph.edge_count(); e += 2)
    builder.edge(cl.graph.element[cl.graph.graph.alpha(e)], cl.graph.graph.label(e).letter);
  builder.coset(cl.graph.element.at(v), b);
  return builder.build();
}

namespace {

struct ComponentIndex {
  Partition part;
  std::vector<VertexId> base;  // least vertex per component
};

ComponentIndex index_components(const LabelledGraph& g, LetterSet b) {
  ComponentIndex ci{component_partition(g, b), {}};
  ci.base.assign(ci.part.count, no_vertex);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto& slot = ci.base[ci.part.class_of[v]];
    if (slot == no_vertex) slot = v;
  }
  return ci;
}

// Element -> components of `b` whose coset contains it.
using OwnerMap = std::unordered_map<ElemId, std::vector<std::uint32_t>>;

OwnerMap coset_owners(Ambient& ambient, const ElementGraph& k, LetterSet b, const ComponentIndex& ci) {
  OwnerMap owners;
  for (std::uint32_t c = 0; c < ci.part.count; ++c)
    for (ElemId h : ambient.coset(k.element[ci.base[c]], b)) owners[h].push_back(c);
  return owners;
}

std::unordered_map<ElemId, VertexId> element_index(const ElementGraph& k) {
  std::unordered_map<ElemId, VertexId> idx;
  for (VertexId v = 0; v < k.element.size(); ++v)
    if (!idx.emplace(k.element[v], v).second) throw GraphError("skeleton vertices carry equal elements");
  return idx;
}

void check_inside_cayley(Ambient& ambient, const ElementGraph& k, LetterSet a) {
  const auto& g = k.graph;
  if (k.element.size() != g.vertex_count()) throw GraphError("element labelling has wrong length");
  element_index(k);
  for (EdgeId e = 0; e < g.edge_count(); e += 2) {
    SignedLetter s = g.label(e);
    if (!a.contains(s.letter)) throw GraphError("skeleton edge label outside A");
    if (ambient.step(k.element[g.alpha(e)], s) != k.element[g.omega(e)])
      throw GraphError("skeleton edge does not follow the Cayley graph");
  }
}

}  // namespace

std::optional<AdmissibilityWitness> admissibility_violation(Ambient& ambient, const ElementGraph& k, LetterSet a) {
  auto subs = proper_subsets(a);
  std::map<LetterSet, ComponentIndex> comps;
  for (LetterSet c : subs) comps.emplace(c, index_components(k.graph, c));
  std::map<LetterSet, OwnerMap> owners;
  for (LetterSet c : subs)
    if (c.size() + 2 <= a.size()) owners.emplace(c, coset_owners(ambient, k, c, comps.at(c)));

  for (LetterSet b : subs) {
    const auto& cb = comps.at(b);
    for (LetterSet b1 : proper_subsets(b)) {
      const auto& c1 = comps.at(b1);
      const auto& own1 = owners.at(b1);
      for (LetterSet b2 : proper_subsets(b)) {
        const auto& c2 = comps.at(b2);
        std::set<std::pair<std::uint32_t, std::uint32_t>> meet;
        for (VertexId x = 0; x < k.graph.vertex_count(); ++x)
          meet.emplace(c1.part.class_of[x], c2.part.class_of[x]);
        for (std::uint32_t j2 = 0; j2 < c2.part.count; ++j2) {
          VertexId r2 = c2.base[j2];
          std::uint32_t bcomp = cb.part.class_of[r2];
          for (ElemId h : ambient.coset(k.element[r2], b2)) {
            auto it = own1.find(h);
            if (it == own1.end()) continue;
            for (std::uint32_t j1 : it->second) {
              if (cb.part.class_of[c1.base[j1]] != bcomp) continue;
              if (meet.contains({j1, j2})) continue;
              return AdmissibilityWitness{b, b1, b2, c1.base[j1], r2, h};
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

bool is_admissible(Ambient& ambient, const ElementGraph& k, LetterSet a) {
  return !admissibility_violation(ambient, k, a).has_value();
}

std::optional<std::string> components_meet_connected(const LabelledGraph& g, LetterSet a) {
  auto subs = all_subsets(a);
  std::map<LetterSet, Partition> parts;
  for (LetterSet c : subs) parts.emplace(c, component_partition(g, c));
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = i + 1; j < subs.size(); ++j) {
      const auto& pb = parts.at(subs[i]).class_of;
      const auto& pc = parts.at(subs[j]).class_of;
      const auto& pd = parts.at(subs[i] & subs[j]).class_of;
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
      for (VertexId x = 0; x < g.vertex_count(); ++x) {
        auto [it, fresh] = seen.try_emplace({pb[x], pc[x]}, pd[x]);
        if (!fresh && it->second != pd[x]) {
          std::ostringstream os;
          os << "components for " << render_set(subs[i], g.letter_names()) << " and "
             << render_set(subs[j], g.letter_names()) << " meet in more than one component at vertex " << x;
          return os.str();
        }
      }
    }
  }
  return std::nullopt;
}

CosetExtension coset_extension(Ambient& ambient, const ElementGraph& k, LetterSet a, LetterSet b) {
  return coset_extension_full(ambient, k, a, {b});
}

CosetExtension coset_extension_full(Ambient& ambient, const ElementGraph& k, LetterSet a,
                                    const std::vector<LetterSet>& p_in) {
  std::vector<LetterSet> fam = p_in.empty() ? proper_subsets(a) : p_in;
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  if (fam.size() > 64) throw std::invalid_argument("family too large");
  for (LetterSet b : fam)
    if (!b.proper_subset_of(a)) throw std::invalid_argument("family member is not a proper subset of A");
  check_inside_cayley(ambient, k, a);
  if (auto w = admissibility_violation(ambient, k, a)) throw InadmissibleSkeleton(*w);

  const auto& kg = k.graph;
  auto elem_vertex = element_index(k);

  std::set<LetterSet> needed(fam.begin(), fam.end());
  for (LetterSet b : fam)
    for (LetterSet c : fam) needed.insert(b & c);
  std::map<LetterSet, ComponentIndex> comps;
  for (LetterSet c : needed) comps.emplace(c, index_components(kg, c));
  std::map<LetterSet, OwnerMap> owners;
  for (LetterSet c : needed) owners.emplace(c, coset_owners(ambient, k, c, comps.at(c)));

  // Vertex items: skeleton vertices, copies (B, i, h) off the skeleton, and gluing keys (C, j, h).
  DisjointSets vs(kg.vertex_count());
  std::vector<ElemId> v_elem(k.element);
  std::vector<std::uint64_t> v_bits(kg.vertex_count(), 0);
  std::map<std::tuple<std::uint64_t, std::uint32_t, ElemId>, std::size_t> v_keys;
  auto vertex_key = [&](LetterSet c, std::uint32_t j, ElemId h) {
    auto [it, fresh] = v_keys.try_emplace({c.bits(), j, h}, 0);
    if (fresh) {
      it->second = vs.add();
      v_elem.push_back(h);
      v_bits.push_back(0);
      auto sk = elem_vertex.find(h);
      if (sk != elem_vertex.end() && comps.at(c).part.class_of[sk->second] == j) vs.unite(it->second, sk->second);
    }
    return it->second;
  };

  DisjointSets es(kg.positive_edge_count());
  struct EdgeItem {
    std::size_t src, dst;
    Letter a;
  };
  std::vector<EdgeItem> e_items;
  std::vector<std::uint64_t> e_bits(kg.positive_edge_count(), 0);
  for (EdgeId e = 0; e < kg.edge_count(); e += 2)
    e_items.push_back({kg.alpha(e), kg.omega(e), kg.label(e).letter});
  std::map<std::tuple<std::uint64_t, std::uint32_t, ElemId, Letter>, std::size_t> e_keys;
  auto edge_key = [&](LetterSet c, std::uint32_t j, ElemId h, Letter b) {
    auto [it, fresh] = e_keys.try_emplace({c.bits(), j, h, b}, 0);
    if (fresh) {
      it->second = es.add();
      e_items.push_back({SIZE_MAX, SIZE_MAX, b});
      e_bits.push_back(0);
    }
    return it->second;
  };

  std::uint64_t all_bits = fam.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << fam.size()) - 1;
  for (auto& bits : v_bits) bits = all_bits;
  for (auto& bits : e_bits) bits = all_bits;

  // The (B n B')-component inside the B-component i whose coset holds h, if any; its copy of h is shared.
  auto glue_component = [&](LetterSet c, std::uint32_t b_comp, const ComponentIndex& cb, ElemId h) {
    std::optional<std::uint32_t> found;
    auto it = owners.at(c).find(h);
    if (it != owners.at(c).end()) {
      const auto& cc = comps.at(c);
      for (std::uint32_t j : it->second) {
        if (cb.part.class_of[cc.base[j]] != b_comp) continue;
        if (found) throw GraphError("two gluing components for one coset element");
        found = j;
      }
    }
    return found;
  };

  for (std::size_t bi = 0; bi < fam.size(); ++bi) {
    LetterSet b = fam[bi];
    const auto& cb = comps.at(b);
    std::uint64_t bit = std::uint64_t{1} << bi;
    std::vector<LetterSet> glue_sets;
    for (LetterSet other : fam)
      if (other != b) glue_sets.push_back(b & other);
    std::sort(glue_sets.begin(), glue_sets.end());
    glue_sets.erase(std::unique(glue_sets.begin(), glue_sets.end()), glue_sets.end());

    for (std::uint32_t i = 0; i < cb.part.count; ++i) {
      const auto& coset = ambient.coset(k.element[cb.base[i]], b);
      std::unordered_map<ElemId, std::size_t> local;
      for (ElemId h : coset) {
        std::size_t node;
        auto sk = elem_vertex.find(h);
        if (sk != elem_vertex.end() && cb.part.class_of[sk->second] == i) {
          node = sk->second;
        } else {
          node = vs.add();
          v_elem.push_back(h);
          v_bits.push_back(bit);
          for (LetterSet c : glue_sets)
            if (auto j = glue_component(c, i, cb, h)) vs.unite(node, vertex_key(c, *j, h));
        }
        local.emplace(h, node);
      }
      for (ElemId h : coset) {
        std::size_t src = local.at(h);
        for (Letter x : b) {
          if (src < kg.vertex_count() && kg.out_edge(static_cast<VertexId>(src), pos(x)) != no_edge) continue;
          std::size_t node = es.add();
          e_items.push_back({src, local.at(ambient.step(h, pos(x))), x});
          e_bits.push_back(bit);
          for (LetterSet c : glue_sets)
            if (c.contains(x))
              if (auto j = glue_component(c, i, cb, h)) es.unite(node, edge_key(c, *j, h, x));
        }
      }
    }
  }

  // Key items carry no endpoints of their own; take them from any copy in their class.
  std::vector<std::size_t> v_root(vs.size());
  for (std::size_t n = 0; n < vs.size(); ++n) v_root[n] = vs.find(n);
  std::vector<std::uint32_t> v_id(vs.size(), UINT32_MAX);
  std::uint32_t v_count = 0;
  for (std::size_t n = 0; n < vs.size(); ++n) {
    auto& slot = v_id[v_root[n]];
    if (slot == UINT32_MAX) slot = v_count++;
  }

  CosetExtension ce;
  ce.a_ = a;
  ce.p_ = fam;
  ce.skeleton_ = k;
  ce.element_.assign(v_count, Ambient::one);
  ce.vertex_in_.assign(v_count, 0);
  ce.on_skeleton_.assign(v_count, 0);
  std::vector<char> elem_set(v_count, 0);
  for (std::size_t n = 0; n < vs.size(); ++n) {
    std::uint32_t id = v_id[v_root[n]];
    if (elem_set[id] && ce.element_[id] != v_elem[n]) throw GraphError("gluing identifies distinct elements");
    ce.element_[id] = v_elem[n];
    elem_set[id] = 1;
    ce.vertex_in_[id] |= v_bits[n];
  }
  for (VertexId x = 0; x < kg.vertex_count(); ++x) {
    ce.skeleton_vertex_.push_back(v_id[v_root[x]]);
    ce.on_skeleton_[v_id[v_root[x]]] = 1;
  }

  std::vector<std::size_t> e_root(es.size());
  for (std::size_t n = 0; n < es.size(); ++n) e_root[n] = es.find(n);
  std::vector<std::uint32_t> e_id(es.size(), UINT32_MAX);
  std::vector<std::size_t> e_rep;
  for (std::size_t n = 0; n < es.size(); ++n) {
    if (e_items[n].src == SIZE_MAX) continue;
    auto& slot = e_id[e_root[n]];
    if (slot == UINT32_MAX) {
      slot = static_cast<std::uint32_t>(e_rep.size());
      e_rep.push_back(n);
    }
  }
  ce.edge_in_.assign(e_rep.size(), 0);
  for (std::size_t n = 0; n < es.size(); ++n) {
    std::uint32_t id = e_id[e_root[n]];
    if (id == UINT32_MAX) throw GraphError("gluing key without an edge");
    ce.edge_in_[id] |= e_bits[n];
    if (e_items[n].src == SIZE_MAX) continue;
    const auto& rep = e_items[e_rep[id]];
    const auto& cur = e_items[n];
    if (v_root[rep.src] != v_root[cur.src] || v_root[rep.dst] != v_root[cur.dst] || rep.a != cur.a)
      throw GraphError("gluing is not a graph congruence");
  }

  GraphBuilder gb(kg.alphabet_size());
  gb.add_vertices(v_count);
  gb.set_letter_names(kg.letter_names());
  for (std::size_t n : e_rep) gb.add_edge(v_id[v_root[e_items[n].src]], v_id[v_root[e_items[n].dst]], e_items[n].a);
  ce.graph_ = std::move(gb).build();

  ce.memberships_.assign(v_count, {});
  for (LetterSet c : needed) {
    ce.components_.emplace(c, comps.at(c).part);
    ce.bases_.emplace(c, comps.at(c).base);
  }
  for (VertexId x = 0; x < kg.vertex_count(); ++x)
    for (LetterSet b : fam) ce.memberships_[ce.skeleton_vertex_[x]].push_back({b, comps.at(b).part.class_of[x]});
  // Off-skeleton memberships: walk the B-components of the built graph from their skeleton part.
  for (LetterSet b : fam) {
    Partition part = component_partition(ce.graph_, b);
    std::vector<std::uint32_t> label(part.count, UINT32_MAX);
    for (VertexId x = 0; x < kg.vertex_count(); ++x) label[part.class_of[ce.skeleton_vertex_[x]]] = comps.at(b).part.class_of[x];
    std::size_t bi = static_cast<std::size_t>(std::find(fam.begin(), fam.end(), b) - fam.begin());
    for (VertexId v = 0; v < v_count; ++v) {
      if (ce.on_skeleton_[v] || !((ce.vertex_in_[v] >> bi) & 1U)) continue;
      std::uint32_t c = label[part.class_of[v]];
      if (c == UINT32_MAX) throw GraphError("copy of a coset is detached from the skeleton");
      ce.memberships_[v].push_back({b, c});
    }
  }
  for (auto& m : ce.memberships_) std::sort(m.begin(), m.end());
  return ce;
}

CeMorphism ce_morphism(Ambient& ambient, const CosetExtension& ce) {
  CeMorphism m;
  m.vertex_image = ce.element();
  const auto& g = ce.graph();
  for (EdgeId e = 0; e < g.edge_count(); e += 2)
    if (ambient.step(ce.element()[g.alpha(e)], g.label(e)) != ce.element()[g.omega(e)]) m.is_morphism = false;
  std::unordered_map<ElemId, VertexId> seen;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto [it, fresh] = seen.emplace(ce.element()[v], v);
    if (!fresh && m.injective) {
      m.injective = false;
      m.collision = std::pair{it->second, v};
    }
  }
  if (!g.is_e_graph()) m.injective = false;
  return m;
}

// The least support among all supports of vertices of j, if one exists.
std::optional<Support> minimal_support(const CosetExtension& ce, std::span<const VertexId> j) {
  if (j.empty()) throw std::invalid_argument("support of an empty vertex set");
  std::vector<Membership> all;
  for (VertexId x : j) {
    const auto& m = ce.memberships(x);
    all.insert(all.end(), m.begin(), m.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (const Membership& cand : all) {
    VertexId base = ce.component_base(cand.b, cand.component);
    bool least = std::all_of(all.begin(), all.end(), [&](const Membership& o) {
      return cand.b.subset_of(o.b) && ce.skeleton_components(o.b).class_of[base] == o.component;
    });
    if (least) {
      const auto& part = ce.skeleton_components(cand.b);
      std::size_t size = static_cast<std::size_t>(
          std::count(part.class_of.begin(), part.class_of.end(), cand.component));
      return Support{cand.b, base, size};
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_intersection_law(const CosetExtension& ce) {
  const auto& fam = ce.family();
  const auto& g = ce.graph();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i; j < fam.size(); ++j) {
      auto it = std::find(fam.begin(), fam.end(), fam[i] & fam[j]);
      if (it == fam.end()) continue;
      std::size_t m = static_cast<std::size_t>(it - fam.begin());
      auto law = [&](std::uint64_t bits) { return (((bits >> i) & (bits >> j)) & 1U) == ((bits >> m) & 1U); };
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (!law(ce.vertex_in(v))) return "vertex " + std::to_string(v) + " breaks the intersection law";
      for (EdgeId e = 0; e < g.edge_count(); e += 2)
        if (!law(ce.edge_in(e))) return "edge " + std::to_string(e / 2) + " breaks the intersection law";
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_constituent_disjointness(const CosetExtension& ce) {
  for (VertexId v = 0; v < ce.graph().vertex_count(); ++v) {
    const auto& m = ce.memberships(v);
    for (std::size_t i = 1; i < m.size(); ++i)
      if (m[i].b == m[i - 1].b) return "vertex " + std::to_string(v) + " lies in two copies for one letter set";
  }
  return std::nullopt;
}

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::coset:
      return "coset";
    case ShapeKind::cluster:
      return "cluster";
    case ShapeKind::augmented_cluster:
      return "augmented_cluster";
    case ShapeKind::other:
      break;
  }
  return "other";
}

const std::vector<ShapeCatalog::Entry>& ShapeCatalog::entries(LetterSet b) {
  if (auto it = entries_.find(b); it != entries_.end()) return it->second;
  std::vector<Entry> out;
  std::set<std::vector<std::uint32_t>> seen;
  auto add = [&](const LabelledGraph& g, Shape s) {
    auto code = canonical_code(g);
    if (seen.insert(code).second) out.push_back({std::move(code), std::move(s)});
  };
  add(cluster(*ambient_, b, {b}).graph.graph, {ShapeKind::coset, {b}, {}});
  for (const auto& p : proper_antichains(b)) add(cluster(*ambient_, b, p).graph.graph, {ShapeKind::cluster, p, {}});
  return entries_.emplace(b, std::move(out)).first->second;
}

const std::vector<ShapeCatalog::Entry>& ShapeCatalog::augmented_entries(LetterSet b) {
  if (auto it = augmented_.find(b); it != augmented_.end()) return it->second;
  std::vector<Entry> out;
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& e : entries(b)) seen.insert(e.code);
  for (const auto& p : proper_antichains(b)) {
    Cluster cl = cluster(*ambient_, b, p);
    for (VertexId v = 0; v < cl.graph.element.size(); ++v)
      for (LetterSet c : proper_subsets(b)) {
        auto code = canonical_code(augmented_cluster(*ambient_, cl, v, c).graph);
        if (seen.insert(code).second) out.push_back({std::move(code), {ShapeKind::augmented_cluster, cl.p, c}});
      }
  }
  return augmented_.emplace(b, std::move(out)).first->second;
}

Shape ShapeCatalog::classify(const LabelledGraph& component, LetterSet b) {
  auto code = canonical_code(component);
  for (const auto& e : entries(b))
    if (e.code == code) return e.shape;
  for (const auto& e : augmented_entries(b))
    if (e.code == code) return e.shape;
  return {};
}

std::optional<Cluster> ShapeCatalog::matching_cluster(const LabelledGraph& component, LetterSet b) {
  auto code = canonical_code(component);
  for (const auto& e : entries(b))
    if (e.code == code) return cluster(*ambient_, b, e.shape.p);
  return std::nullopt;
}

ClusterPropertyResult has_cluster_property(Ambient& ambient, ShapeCatalog& catalog, const CosetExtension& ce) {
  (void)ambient;
  const auto& g = ce.graph();
  for (LetterSet b : proper_subsets(ce.letters())) {
    Partition part = component_partition(g, b);
    std::vector<char> touches(part.count, 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (ce.on_skeleton(v)) touches[part.class_of[v]] = 1;
    std::vector<char> done(part.count, 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      std::uint32_t c = part.class_of[v];
      if (touches[c] || done[c]) continue;
      done[c] = 1;
      Extracted comp = component(g, v, b);
      auto cl = catalog.matching_cluster(comp.graph, b);
      if (!cl) return {false, "component is neither a coset nor a cluster", b, comp.vertex_origin};
      auto sup = minimal_support(ce, comp.vertex_origin);
      if (!sup) return {false, "component has no unique minimal support", b, comp.vertex_origin};
      bool attained = false;
      for (const auto& iso : e_graph_isomorphisms(cl->graph.graph, 0, comp.graph)) {
        for (VertexId x : cl->core) {
          VertexId host = comp.vertex_origin[iso.vertex_map[x]];
          auto own = minimal_support(ce, std::span<const VertexId>(&host, 1));
          if (own && *own == *sup) {
            attained = true;
            break;
          }
        }
        if (attained) break;
      }
      if (!attained) return {false, "minimal support is not attained in the cluster core", b, comp.vertex_origin};
    }
  }
  return {};
}

BridgeFreeResult is_bridge_free(Ambient& ambient, const CosetExtension& ce) {
  CeMorphism m = ce_morphism(ambient, ce);
  if (!m.is_morphism) return {false, "element labelling is not a morphism", {}, std::nullopt};
  if (!m.injective) return {false, "extension does not embed in the Cayley graph", {}, m.collision};
  const auto& g = ce.graph();
  std::unordered_map<ElemId, VertexId> where;
  for (VertexId v = 0; v < g.vertex_count(); ++v) where.emplace(ce.element()[v], v);
  for (LetterSet b : proper_subsets(ce.letters())) {
    Partition part = component_partition(g, b);
    std::vector<char> done(part.count, 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      std::uint32_t c = part.class_of[v];
      if (done[c]) continue;
      done[c] = 1;
      for (ElemId h : ambient.coset(ce.element()[v], b)) {
        auto it = where.find(h);
        if (it != where.end() && part.class_of[it->second] != c)
          return {false, "a coset meets two components", b, std::pair{v, it->second}};
      }
    }
  }
  return {};
}

std::optional<std::string> check_component_intersections(const CosetExtension& ce) {
  return components_meet_connected(ce.graph(), ce.letters());
}

ElementGraph augment(Ambient& ambient, const ElementGraph& g, VertexId v, LetterSet b) {
  Selection comp = component_selection(g.graph, v, b);
  ElemId x0 = g.element.at(v);
  std::unordered_map<ElemId, VertexId> where;
  for (VertexId y : comp.vertices)
    if (!where.emplace(g.element[y], y).second) throw GraphError("component does not embed in its coset");

  GraphBuilder gb(g.graph.alphabet_size());
  gb.set_letter_names(g.graph.letter_names());
  gb.add_vertices(g.graph.vertex_count());
  for (EdgeId e = 0; e < g.graph.edge_count(); e += 2) gb.add_edge(g.graph.alpha(e), g.graph.omega(e), g.graph.label(e).letter);
  std::vector<ElemId> elem = g.element;
  const auto& coset = ambient.coset(x0, b);
  for (ElemId h : coset) {
    if (where.contains(h)) continue;
    where.emplace(h, gb.add_vertex());
    elem.push_back(h);
  }
  std::size_t old_n = g.graph.vertex_count();
  for (ElemId h : coset) {
    VertexId x = where.at(h);
    for (Letter a : b) {
      if (x < old_n && g.graph.out_edge(x, pos(a)) != no_edge) continue;
      gb.add_edge(x, where.at(ambient.step(h, pos(a))), a);
    }
  }
  return {std::move(gb).build(), std::move(elem)};
}

ElementGraph augmented_ce(Ambient& ambient, const CosetExtension& ce, VertexId v, LetterSet b) {
  return augment(ambient, ElementGraph{ce.graph(), ce.element()}, v, b);
}

}  // namespace fgapprox
