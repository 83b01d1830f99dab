#include "fgapprox/tower.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fgapprox {

LabelledGraph build_x1(const LabelledGraph& input, std::size_t cycle_len) {
  if (cycle_len < 2) throw std::invalid_argument("cycle length must be at least 2");
  if (!is_connected(input)) throw GraphError("input graph is not connected");
  GraphBuilder b(input.alphabet_size());
  b.set_letter_names(input.letter_names());
  for (VertexId v = 0; v < input.vertex_count(); ++v) b.add_vertex(input.vertex_name(v));
  for (EdgeId e = 0; e < input.edge_count(); e += 2) {
    VertexId u = input.alpha(e), v = input.omega(e);
    Letter a = input.label(e).letter;
    b.add_edge(u, v, a);
    if (u == v) continue;
    VertexId prev = v;
    for (std::size_t i = 0; i + 2 < cycle_len; ++i) {
      VertexId mid = b.add_vertex();
      b.add_edge(prev, mid, a);
      prev = mid;
    }
    b.add_edge(prev, u, a);
  }
  return trivial_completion(std::move(b).build());
}

std::optional<VertexId> follow_input(const LabelledGraph& input, VertexId u, const Word& p) {
  VertexId v = u;
  for (SignedLetter s : p) {
    v = input.follow(v, s);
    if (v == no_vertex) return std::nullopt;
  }
  return v;
}

std::vector<Selection> span_components(const LabelledGraph& input, LetterSet a) {
  std::vector<Selection> out;
  std::vector<char> seen(input.vertex_count(), 0);
  for (EdgeId e = 0; e < input.edge_count(); e += 2) {
    if (!a.contains(input.label(e).letter) || seen[input.alpha(e)]) continue;
    Selection s = component_selection(input, input.alpha(e), a);
    for (VertexId v : s.vertices) seen[v] = 1;
    out.push_back(std::move(s));
  }
  return out;
}

ElementGraph cover_at(Ambient& ambient, const LabelledGraph& input, const Selection& component, VertexId base) {
  ElementGraphBuilder builder(ambient);
  builder.vertex(Ambient::one);
  std::unordered_set<ElemId> seen{Ambient::one};
  std::deque<ElemId> queue{Ambient::one};
  while (!queue.empty()) {
    ElemId h = queue.front();
    queue.pop_front();
    VertexId at = ambient.element(h)[base];
    for (EdgeId e : component.positive_edges) {
      Letter a = input.label(e).letter;
      if (input.alpha(e) == at) {
        ElemId y = ambient.step(h, pos(a));
        builder.edge(h, a);
        if (seen.insert(y).second) queue.push_back(y);
      }
      if (input.omega(e) == at) {
        ElemId y = ambient.step(h, neg(a));
        builder.edge(y, a);
        if (seen.insert(y).second) queue.push_back(y);
      }
    }
  }
  return builder.build();
}

std::vector<Cover> enumerate_covers(Ambient& ambient, const LabelledGraph& input, const Selection& component,
                                    std::size_t* found) {
  std::vector<Cover> out;
  std::set<std::vector<std::uint32_t>> seen;
  for (VertexId c : component.vertices) {
    ElementGraph g = cover_at(ambient, input, component, c);
    if (seen.insert(canonical_code(g.graph)).second) out.push_back({std::move(g), c});
  }
  if (found) *found = component.vertices.size();
  return out;
}

LabelledGraph close_paths(const LabelledGraph& g) {
  GraphBuilder b(g.alphabet_size());
  b.set_letter_names(g.letter_names());
  b.add_vertices(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); e += 2) b.add_edge(g.alpha(e), g.omega(e), g.label(e).letter);
  for (Letter a = 0; a < g.alphabet_size(); ++a) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (g.out_edge(v, pos(a)) == no_edge || g.out_edge(v, neg(a)) != no_edge) continue;
      VertexId w = v;
      while (g.out_edge(w, pos(a)) != no_edge) w = g.follow(w, pos(a));
      b.add_edge(w, v, a);
    }
  }
  return std::move(b).build();
}

namespace {

// Appends complete components to a growing complete graph, skipping isomorphic repeats.
class ComponentAssembler {
 public:
  ComponentAssembler(const LabelledGraph& first, const Budget& budget, std::size_t dedup_limit)
      : builder_(first.alphabet_size()), budget_(budget), dedup_limit_(dedup_limit) {
    builder_.set_letter_names(first.letter_names());
    for (VertexId v = 0; v < first.vertex_count(); ++v) builder_.add_vertex(first.vertex_name(v));
    copy_edges(first, 0);
    Partition part = component_partition(first, LetterSet::first_n(first.alphabet_size()));
    std::vector<char> done(part.count, 0);
    for (VertexId v = 0; v < first.vertex_count(); ++v) {
      if (done[part.class_of[v]]) continue;
      done[part.class_of[v]] = 1;
      Extracted c = component(first, v, LetterSet::first_n(first.alphabet_size()));
      if (c.graph.vertex_count() <= dedup_limit_) seen_.insert(canonical_code(c.graph));
    }
  }

  bool add(const LabelledGraph& g) {
    if (g.vertex_count() <= dedup_limit_ && !seen_.insert(canonical_code(g)).second) return false;
    std::size_t offset = builder_.vertex_count();
    if (offset + g.vertex_count() > budget_.vertices) throw BudgetExceeded("vertices", offset + g.vertex_count());
    builder_.add_vertices(g.vertex_count());
    copy_edges(g, static_cast<VertexId>(offset));
    return true;
  }

  LabelledGraph build() && { return std::move(builder_).build(); }

 private:
  void copy_edges(const LabelledGraph& g, VertexId offset) {
    for (EdgeId e = 0; e < g.edge_count(); e += 2)
      builder_.add_edge(offset + g.alpha(e), offset + g.omega(e), g.label(e).letter);
  }
  GraphBuilder builder_;
  Budget budget_;
  std::size_t dedup_limit_;
  std::set<std::vector<std::uint32_t>> seen_;
};

std::optional<std::size_t> try_order(const EGroup& g, const Budget& budget) {
  try {
    return g.order(budget);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

std::string describe_set(LetterSet a, const LabelledGraph& input) { return render_set(a, input.letter_names()); }

}  // namespace

LabelledGraph build_y(const LabelledGraph& x, const EGroup& g, std::size_t k, const Budget& budget,
                      std::size_t dedup_limit) {
  ComponentAssembler out(x, budget, dedup_limit);
  for (LetterSet a : subsets_of_size(g.alphabet(), k)) {
    const Subgroup& s = *g.subgroup(a, budget);
    if (s.order() > budget.vertices) throw BudgetExceeded("vertices", s.order());
    out.add(trivial_completion(cayley_graph(s, g.letter_count())));
  }
  return std::move(out).build();
}

std::vector<LabelledGraph> build_z(const LabelledGraph& input, std::shared_ptr<const EGroup> h, std::size_t k,
                                   const TowerOptions& options, ZStats* stats) {
  Ambient ambient(h, options.budget);
  ShapeCatalog catalog(ambient);
  ZStats local;
  std::vector<LabelledGraph> items;
  std::set<std::vector<std::uint32_t>> seen;
  std::size_t total = 0;
  auto add = [&](const LabelledGraph& g, bool cluster_item) {
    ++local.items;
    ++(cluster_item ? local.cluster_items : local.extension_items);
    if (!is_weakly_complete(g)) throw CheckFailed("a component of Z is not weakly complete");
    if (g.vertex_count() <= options.dedup_limit && !seen.insert(canonical_code(g)).second) return;
    total += g.vertex_count();
    if (total > options.budget.vertices) throw BudgetExceeded("vertices", total);
    items.push_back(g);
  };

  for (LetterSet a : subsets_of_size(h->alphabet(), k + 1)) {
    auto proper = proper_subsets(a);
    if (!options.lean) {
      for (const auto& p : proper_antichains(a)) {
        Cluster cl = cluster(ambient, a, p);
        add(cl.graph.graph, true);
        for (VertexId v = 0; v < cl.graph.element.size(); ++v)
          for (LetterSet b : proper) {
            if (b.empty()) continue;
            ElementGraph aug = augmented_cluster(ambient, cl, v, b);
            if (aug.graph.vertex_count() != cl.graph.graph.vertex_count()) add(aug.graph, true);
          }
      }
    }
    for (const Selection& comp : span_components(input, a)) {
      std::size_t found = 0;
      auto covers = enumerate_covers(ambient, input, comp, &found);
      local.covers_found += found;
      local.covers_distinct += covers.size();
      for (const Cover& cover : covers) {
        if (options.lean) {
          for (Letter x : a) {
            CosetExtension ce = coset_extension(ambient, cover.graph, a, a.without(x));
            add(close_paths(ce.graph()), false);
          }
          continue;
        }
        std::optional<CosetExtension> ce;
        try {
          ce = coset_extension_full(ambient, cover.graph, a);
        } catch (const InadmissibleSkeleton& e) {
          std::ostringstream os;
          os << "cover over " << describe_set(a, input) << " is not admissible: components at vertices "
             << e.witness.v1 << ", " << e.witness.v2 << " for " << describe_set(e.witness.b, input);
          throw CheckFailed(os.str());
        }
        auto cp = has_cluster_property(ambient, catalog, *ce);
        if (!cp.holds) {
          std::ostringstream os;
          os << "extension over " << describe_set(a, input) << " lacks the cluster property ("
             << cp.reason << ") for " << describe_set(cp.b, input);
          throw CheckFailed(os.str());
        }
        add(ce->graph(), false);
        ElementGraph base{ce->graph(), ce->element()};
        for (VertexId v = 0; v < ce->graph().vertex_count(); ++v)
          for (LetterSet b : proper) {
            if (b.empty()) continue;
            ElementGraph aug = augment(ambient, base, v, b);
            if (aug.graph.vertex_count() != base.graph.vertex_count()) add(aug.graph, false);
          }
      }
    }
  }
  local.distinct = items.size();
  local.vertices = total;
  if (stats) *stats = local;
  return items;
}

bool CondReport::passed() const {
  return g_retractable && h_retractable && stable &&
         std::all_of(covers.begin(), covers.end(), [](const CoverCheck& c) { return c.passed(); });
}

CondReport verify_cond(const LabelledGraph& input, std::shared_ptr<const EGroup> g, const EGroup& h_prev,
                       std::size_t k, const Budget& budget) {
  CondReport r;
  r.k = k;
  LetterSet all = g->alphabet();
  r.g_retractable = true;
  r.h_retractable = true;
  for (LetterSet a : subsets_of_size(all, std::min(k, all.size()))) {
    r.g_retractable = r.g_retractable && is_retractable_on(*g, a, budget);
    r.h_retractable = r.h_retractable && is_retractable_on(h_prev, a, budget);
  }
  r.stable = true;
  for (std::size_t size = 1; size + 1 <= k; ++size)
    for (LetterSet a : subsets_of_size(all, size)) {
      std::size_t above = g->subgroup(a, budget)->order();
      std::size_t below = h_prev.subgroup(a, budget)->order();
      if (above != below) {
        r.stable = false;
        r.stability_witness.push_back(describe_set(a, input) + ": " + std::to_string(above) + " vs " +
                                      std::to_string(below));
      }
    }

  Ambient ambient(g, budget);
  for (std::size_t size = 1; size <= std::min(k, all.size()); ++size) {
    for (LetterSet b : subsets_of_size(all, size)) {
      auto comps = span_components(input, b);
      for (std::uint32_t ci = 0; ci < comps.size(); ++ci) {
        auto covers = enumerate_covers(ambient, input, comps[ci]);
        for (std::size_t i = 0; i < covers.size(); ++i) {
          CoverCheck c;
          c.a = b;
          c.component = ci;
          c.cover = i;
          c.vertices = covers[i].graph.graph.vertex_count();
          auto w = admissibility_violation(ambient, covers[i].graph, b);
          c.admissible = !w.has_value();
          if (w) {
            c.witness = "inadmissible at vertices " + std::to_string(w->v1) + ", " + std::to_string(w->v2);
          } else {
            CosetExtension ce = coset_extension_full(ambient, covers[i].graph, b);
            c.ce_vertices = ce.graph().vertex_count();
            CeMorphism m = ce_morphism(ambient, ce);
            c.embeds = m.is_morphism && m.injective;
            auto bf = is_bridge_free(ambient, ce);
            c.bridge_free = bf.holds;
            if (!c.embeds && m.collision)
              c.witness = "vertices " + std::to_string(m.collision->first) + " and " +
                          std::to_string(m.collision->second) + " share an element";
            else if (!bf.holds && bf.witness)
              c.witness = bf.reason + ": vertices " + std::to_string(bf.witness->first) + ", " +
                          std::to_string(bf.witness->second);
          }
          r.covers.push_back(std::move(c));
        }
      }
    }
  }
  return r;
}

std::vector<CeDiagnosis> diagnose_extensions(const LabelledGraph& input, std::shared_ptr<const EGroup> group,
                                             std::size_t min_size, std::size_t max_size, const Budget& budget) {
  Ambient ambient(group, budget);
  ShapeCatalog catalog(ambient);
  std::vector<CeDiagnosis> out;
  LetterSet all = group->alphabet();
  for (std::size_t size = std::max<std::size_t>(min_size, 1); size <= std::min(max_size, all.size()); ++size) {
    for (LetterSet a : subsets_of_size(all, size)) {
      auto comps = span_components(input, a);
      for (std::uint32_t ci = 0; ci < comps.size(); ++ci) {
        auto covers = enumerate_covers(ambient, input, comps[ci]);
        for (std::size_t i = 0; i < covers.size(); ++i) {
          CeDiagnosis d;
          d.a = a;
          d.component = ci;
          d.cover = i;
          const ElementGraph& k = covers[i].graph;
          d.skeleton_vertices = k.graph.vertex_count();
          auto w = admissibility_violation(ambient, k, a);
          d.admissible = !w.has_value();
          if (w) {
            d.witnesses.push_back("inadmissible at vertices " + std::to_string(w->v1) + ", " + std::to_string(w->v2));
            out.push_back(std::move(d));
            continue;
          }
          auto meet = components_meet_connected(k.graph, a);
          d.skeleton_meets_connected = !meet.has_value();
          if (meet) d.witnesses.push_back("skeleton: " + *meet);
          CosetExtension ce = coset_extension_full(ambient, k, a);
          d.ce_vertices = ce.graph().vertex_count();
          auto law = check_intersection_law(ce);
          d.intersection_law = !law.has_value();
          if (law) d.witnesses.push_back(*law);
          auto disjoint = check_constituent_disjointness(ce);
          d.constituents_disjoint = !disjoint.has_value();
          if (disjoint) d.witnesses.push_back(*disjoint);
          auto cp = has_cluster_property(ambient, catalog, ce);
          d.cluster_property = cp.holds;
          if (!cp.holds) d.witnesses.push_back(cp.reason + " for " + describe_set(cp.b, input));
          if (cp.holds) {
            auto ci_law = check_component_intersections(ce);
            d.component_intersections = !ci_law.has_value();
            if (ci_law) d.witnesses.push_back(*ci_law);
          }
          for (LetterSet b : proper_subsets(a)) {
            Partition part = component_partition(ce.graph(), b);
            std::vector<char> skip(part.count, 0);
            for (VertexId v = 0; v < ce.graph().vertex_count(); ++v)
              if (ce.on_skeleton(v)) skip[part.class_of[v]] = 1;
            for (VertexId v = 0; v < ce.graph().vertex_count(); ++v) {
              if (skip[part.class_of[v]]) continue;
              skip[part.class_of[v]] = 1;
              Shape shape = catalog.classify(component(ce.graph(), v, b).graph, b);
              ++d.shapes[describe_set(b, input) + ":" + to_string(shape.kind)];
            }
          }
          CeMorphism m = ce_morphism(ambient, ce);
          d.embeds = m.is_morphism && m.injective;
          if (!d.embeds && m.collision)
            d.witnesses.push_back("vertices " + std::to_string(m.collision->first) + " and " +
                                  std::to_string(m.collision->second) + " share an element");
          auto bf = is_bridge_free(ambient, ce);
          d.bridge_free = bf.holds;
          if (!bf.holds) d.witnesses.push_back(bf.reason);
          out.push_back(std::move(d));
        }
      }
    }
  }
  return out;
}

Tower build_chain(std::shared_ptr<const LabelledGraph> input, const TowerOptions& options) {
  if (input->positive_edge_count() == 0) throw GraphError("input graph has no edges");
  Tower t;
  t.input_ = input;
  t.options_ = options;
  std::size_t letters = input->alphabet_size();
  std::size_t top = options.max_level == 0 ? letters : std::min(options.max_level, letters);

  TowerLevel first;
  first.k = 1;
  first.x = std::make_shared<const LabelledGraph>(build_x1(*input, options.cycle_len));
  first.g = transition_group(first.x);
  first.g_order = try_order(*first.g, options.budget);
  t.levels_.push_back(std::move(first));
  t.grade_ = 1;

  for (std::size_t k = 1; k < top; ++k) {
    TowerLevel& cur = t.levels_.back();
    try {
      cur.y = std::make_shared<const LabelledGraph>(build_y(*cur.x, *cur.g, k, options.budget, options.dedup_limit));
      cur.h = transition_group(cur.y);
      cur.h_order = try_order(*cur.h, options.budget);
      auto z = build_z(*input, cur.h, k, options, &cur.z);

      ComponentAssembler next(*cur.y, options.budget, options.dedup_limit);
      for (const auto& item : z) next.add(trivial_completion(item));
      TowerLevel lvl;
      lvl.k = k + 1;
      lvl.x = std::make_shared<const LabelledGraph>(std::move(next).build());
      lvl.g = transition_group(lvl.x);
      lvl.g_order = try_order(*lvl.g, options.budget);
      lvl.cond = verify_cond(*input, lvl.g, *cur.h, k + 1, options.budget);
      bool ok = lvl.cond->passed();
      t.levels_.push_back(std::move(lvl));
      if (!ok) {
        t.failure_ = "conditions fail at level " + std::to_string(k + 1);
        break;
      }
      t.grade_ = k + 1;
    } catch (const BudgetExceeded& e) {
      t.truncated_ = true;
      t.truncation_reason_ = "level " + std::to_string(k + 1) + ": " + e.what();
      break;
    } catch (const CheckFailed& e) {
      t.failure_ = "level " + std::to_string(k + 1) + ": " + e.what();
      break;
    }
  }
  if (!t.truncated_ && t.failure_.empty() && t.grade_ < letters) {
    t.truncated_ = true;
    t.truncation_reason_ = "stopped at max level " + std::to_string(top);
  }
  return t;
}

namespace {

class RewriteContext {
 public:
  explicit RewriteContext(const Tower& tower) : tower_(&tower) {}

  Ambient& ambient(std::size_t k) {
    auto it = ambients_.find(k);
    if (it == ambients_.end()) {
      std::shared_ptr<const EGroup> h(tower_->levels().at(k - 1).h);
      it = ambients_.emplace(k, std::make_unique<Ambient>(h, tower_->options().budget)).first;
    }
    return *it->second;
  }

  Word rewrite(VertexId u, const Word& p) {
    const LabelledGraph& input = tower_->input();
    auto end = follow_input(input, u, p);
    if (!end) throw RewriteError("word is not a path in the input graph");
    const EGroup& g = tower_->group();
    Permutation target = g.eval(p);
    Word cur = p;
    while (true) {
      LetterSet a = letters_of(cur);
      if (a.empty()) break;
      if (a.size() > tower_->certified_grade())
        throw RewriteError("word uses " + std::to_string(a.size()) + " letters beyond the certified grade");
      std::optional<Letter> drop;
      for (Letter x : a)
        if (g.eval(delete_letters(cur, LetterSet{x})) == target) {
          drop = x;
          break;
        }
      if (!drop) break;
      LetterSet b = a.without(*drop);
      if (b.empty()) {
        cur.clear();
        break;
      }
      cur = connect_in_cover(u, cur, a, b);
    }
    if (g.eval(cur) != target) throw RewriteError("rewritten word changes the group element");
    if (follow_input(input, u, cur) != end) throw RewriteError("rewritten word is not a path with the same ends");
    return cur;
  }

 private:
  // A B-path in the H_k cover of <A> from 1 to the endpoint of p's lift.
  Word connect_in_cover(VertexId u, const Word& p, LetterSet a, LetterSet b) {
    const LabelledGraph& input = tower_->input();
    std::size_t k = a.size() - 1;
    if (!tower_->has_h(k)) throw RewriteError("tower has no group H_" + std::to_string(k));
    Ambient& amb = ambient(k);
    ElemId goal = amb.eval(p);
    Selection comp = component_selection(input, u, a);
    std::unordered_map<ElemId, std::pair<ElemId, SignedLetter>> parent;
    parent.emplace(Ambient::one, std::pair{Ambient::one, SignedLetter{}});
    std::deque<ElemId> queue{Ambient::one};
    while (!queue.empty() && !parent.contains(goal)) {
      ElemId h = queue.front();
      queue.pop_front();
      VertexId at = amb.element(h)[u];
      for (EdgeId e : comp.positive_edges) {
        Letter x = input.label(e).letter;
        if (!b.contains(x)) continue;
        for (SignedLetter s : {pos(x), neg(x)}) {
          VertexId from = s.inverse ? input.omega(e) : input.alpha(e);
          if (from != at) continue;
          ElemId y = amb.step(h, s);
          if (parent.try_emplace(y, std::pair{h, s}).second) queue.push_back(y);
        }
      }
    }
    if (!parent.contains(goal))
      throw RewriteError("endpoint of the lift is not " + render_set(b, input.letter_names()) +
                         "-connected to 1 in the cover");
    Word q;
    for (ElemId x = goal; x != Ambient::one; x = parent.at(x).first) q.push_back(parent.at(x).second);
    std::reverse(q.begin(), q.end());
    return q;
  }

  const Tower* tower_;
  std::map<std::size_t, std::unique_ptr<Ambient>> ambients_;
};

}  // namespace

Word rewrite_to_content_path(const Tower& tower, VertexId u, const Word& p) {
  RewriteContext ctx(tower);
  return ctx.rewrite(u, p);
}

Word random_path_word(const LabelledGraph& input, VertexId start, std::size_t length, std::mt19937_64& rng,
                      LetterSet allowed) {
  Word w;
  VertexId v = start;
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<EdgeId> options;
    for (EdgeId e : input.out_edges(v))
      if (allowed.contains(input.label(e).letter)) options.push_back(e);
    if (options.empty()) break;
    EdgeId e = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    w.push_back(input.label(e));
    v = input.omega(e);
  }
  return w;
}

Word random_word(LetterSet letters, std::size_t length, std::mt19937_64& rng) {
  auto pool = letters.letters();
  Word w;
  if (pool.empty()) return w;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::bernoulli_distribution invert(0.5);
  for (std::size_t i = 0; i < length; ++i) w.push_back({pool[pick(rng)], invert(rng)});
  return w;
}

MainLemmaReport run_main_lemma(const Tower& tower, const MainLemmaOptions& options) {
  MainLemmaReport r;
  const LabelledGraph& input = tower.input();
  const EGroup& g = tower.group();
  const auto& names = input.letter_names();
  std::size_t grade = options.max_content == 0 ? tower.certified_grade()
                                               : std::min(options.max_content, tower.certified_grade());
  const Budget& budget = tower.options().budget;
  std::mt19937_64 rng(options.seed);
  auto fail = [&](std::string property, const Word& w, std::string detail) {
    r.failures.push_back({std::move(property), render_word(w, names), std::move(detail)});
  };
  auto random_letters = [&](std::size_t max_size) {
    auto all = g.alphabet().letters();
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::min(max_size, all.size()))(rng);
    LetterSet s;
    for (std::size_t i = 0; i < n; ++i) s.insert(all[i]);
    return s;
  };
  std::uniform_int_distribution<std::size_t> length(1, std::max<std::size_t>(options.max_length, 1));

  for (EdgeId e = 0; e < input.edge_count(); e += 2) {
    if (input.alpha(e) != input.omega(e)) continue;
    ++r.loop_letters;
    if (!g.gen(input.label(e)).is_identity()) fail("loop-identity", {input.label(e)}, "loop letter acts nontrivially");
  }

  for (std::size_t i = 0; i < options.samples; ++i) {
    Word p = random_word(random_letters(grade), length(rng), rng);
    LetterSet co = letters_of(p);
    auto sub = g.subgroup(co, budget);
    Word rep = sub->word(*sub->index_of(g.eval(p).images()));
    Word rel = concat(p, inverse(rep));
    ++r.relations;
    if (!g.eval(rel).is_identity()) {
      fail("relation", rel, "relation does not evaluate to 1");
      continue;
    }
    for (Letter a : letters_of(rel)) {
      ++r.deletions_checked;
      if (!g.eval(delete_letters(rel, LetterSet{a})).is_identity())
        fail("deletion-closed", rel, "deleting " + render_set(LetterSet{a}, names) + " breaks the relation");
    }
  }

  RewriteContext ctx(tower);
  std::uniform_int_distribution<VertexId> start(0, static_cast<VertexId>(input.vertex_count() - 1));
  for (std::size_t i = 0; i < options.samples; ++i) {
    VertexId u = start(rng);
    Word p = random_path_word(input, u, length(rng), rng, random_letters(grade));
    ++r.paths;
    VertexId v = *follow_input(input, u, p);
    LetterSet content_p = content(g, p);
    if (content_p.empty()) {
      ++r.empty_content;
      if (u != v) fail("empty-content-closed", p, "path with empty content is not closed");
    }
    try {
      Word q = ctx.rewrite(u, p);
      ++r.rewrites;
      if (follow_input(input, u, q) != std::optional<VertexId>(v)) fail("rewrite-path", p, "result is not a path u -> v");
      if (g.eval(q) != g.eval(p)) fail("rewrite-value", p, "result evaluates differently");
      if (!letters_of(q).subset_of(content_p))
        fail("rewrite-content", p, "result uses " + render_set(letters_of(q), names) + " outside the content " +
                                       render_set(content_p, names));
      if (content_p.empty() && !q.empty()) fail("rewrite-empty", p, "empty content but nonempty result");
    } catch (const RewriteError& e) {
      fail("rewrite", p, e.what());
    }
  }
  return r;
}

}  // namespace fgapprox
