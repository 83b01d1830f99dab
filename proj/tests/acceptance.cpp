// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli_runner.hpp"
#include "fgapprox/cosetext.hpp"
#include "fgapprox/invmon.hpp"
#include "fgapprox/tower.hpp"
#include "test_support.hpp"

using namespace fgapprox;
using namespace fgtest;

namespace {

class Criterion {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  [[nodiscard]] bool passed() const { return failures_.empty(); }
  [[nodiscard]] std::string text() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + std::string("failed: ") + f;
    return out;
  }

 private:
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

bool is_transposition(const Permutation& p) {
  std::size_t moved = 0;
  for (std::size_t x = 0; x < p.degree(); ++x) moved += p[x] != x;
  return moved == 2 && p.then(p).is_identity();
}

// Covering criterion against sampled words, both directions, on every subset.
std::size_t retractability_disagreements(const EGroup& g, std::mt19937_64& rng, std::size_t& subsets) {
  std::size_t bad = 0;
  for (LetterSet a : all_subsets(g.alphabet())) {
    if (a.empty()) continue;
    ++subsets;
    bool covering = is_retractable_on(g, a, {});
    bool violated = sampled_retractability_violation(g, a, 1000, 12, rng, {}).has_value();
    bad += covering == violated;
  }
  return bad;
}

// Deletion content against exhaustive search over words of length <= 8; g must be retractable.
std::size_t content_disagreements(const EGroup& g, std::mt19937_64& rng, std::size_t words, std::size_t& checked) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < words; ++i, ++checked) {
    Word p = random_word(g.alphabet(), 1 + i % 10, rng);
    auto naive = naive_content(g, p, 8);
    bad += !naive || *naive != content(g, p);
  }
  return bad;
}

// G[A] as an A-generated group in its own right.
std::shared_ptr<EGroup> restrict_letters(const EGroup& g, LetterSet a) {
  std::vector<Permutation> gens;
  for (Letter x : a) gens.push_back(g.gen(pos(x)));
  return std::make_shared<EGroup>(g.degree(), std::move(gens));
}

struct Run {
  std::string name;
  Tower tower;
};

Criterion criterion1() {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  Tower se = build_chain(single_edge());
  Tower sl = build_chain(single_loop());
  double s = seconds_since(t0);
  c.require(se.complete() && se.levels().size() == 1, "single edge chain ends at level 1");
  c.require(se.levels()[0].g_order == 2, "single edge group has order 2");
  c.require(is_transposition(se.group().gen(pos(0))), "generator is a transposition");
  c.require(sl.complete() && sl.levels()[0].g_order == 1, "single loop group is trivial");
  c.require(s < 1.0, "runtime under 1 s");
  c.note("single edge |G|=" + std::to_string(se.levels()[0].g_order.value_or(0)) + " (transposition), single loop |G|=" +
         std::to_string(sl.levels()[0].g_order.value_or(0)) + ", " + fmt_seconds(s));
  return c;
}

Criterion criterion2(const Tower& p2, double build_seconds) {
  Criterion c;
  c.require(p2.complete() && !p2.check_failed(), "chain G1 <- H1 <- G2 complete");
  const auto& lv = p2.levels();
  c.require(lv.size() == 2 && lv[0].h, "H1 built");
  if (lv.size() == 2 && lv[1].cond) {
    const CondReport& cond = *lv[1].cond;
    c.require(cond.g_retractable, "G2 retractable");
    c.require(cond.h_retractable, "H1 retractable");
    c.require(cond.stable, "H1 -> G1 1-stable");
    std::size_t ok = 0;
    for (const auto& cc : cond.covers) ok += cc.admissible && cc.embeds && cc.bridge_free;
    c.require(ok == cond.covers.size() && !cond.covers.empty(), "admissible, embedding, bridge-free covers");
    c.note("|G1|=" + std::to_string(lv[0].g_order.value_or(0)) + ", |H1|=" + std::to_string(lv[0].h_order.value_or(0)) +
           ", |G2|=" + std::to_string(lv[1].g_order.value_or(0)) + ", Cond_2 " + std::to_string(ok) + "/" +
           std::to_string(cond.covers.size()) + " covers pass");
  } else {
    c.require(false, "Cond_2 report present");
  }
  c.require(build_seconds < 60.0, "runtime under 60 s");
  c.note(fmt_seconds(build_seconds));
  return c;
}

Criterion criterion3(const Tower& p2) {
  Criterion c;
  MainLemmaOptions o;
  o.samples = 500;
  o.max_length = 12;
  MainLemmaReport r = run_main_lemma(p2, o);
  c.require(r.passed(), "library suite: " + std::to_string(r.failures.size()) + " failures");

  // independent re-verification of the constructive rewriting
  const LabelledGraph& input = p2.input();
  const EGroup& g = p2.group();
  auto sub = g.subgroup(g.alphabet(), {});
  std::mt19937_64 rng(31);
  std::size_t bad = 0, empty = 0, deletions = 0;
  for (int i = 0; i < 500; ++i) {
    VertexId u = static_cast<VertexId>(i % input.vertex_count());
    Word p = random_path_word(input, u, 1 + i % 12, rng);
    Word q = rewrite_to_content_path(p2, u, p);
    LetterSet co = content(g, p);
    bad += follow_input(input, u, q) != follow_input(input, u, p);
    bad += g.eval(q) != g.eval(p);
    bad += !letters_of(q).subset_of(co);
    if (co.empty()) {
      ++empty;
      bad += follow_input(input, u, p) != u;
    }
    Word any = random_word(g.alphabet(), 1 + i % 12, rng);
    Word rel = concat(any, inverse(sub->word(*sub->index_of(g.eval(any).images()))));
    for (LetterSet d : all_subsets(g.alphabet())) {
      ++deletions;
      bad += !g.eval(delete_letters(rel, d)).is_identity();
    }
  }
  c.require(bad == 0, "independent re-verification: " + std::to_string(bad) + " failures");
  c.note(std::to_string(o.samples) + " sampled words, " + std::to_string(r.rewrites) + " rewrites, " +
         std::to_string(r.relations) + " relations; re-verified 500 rewrites (" + std::to_string(empty) +
         " with empty content) and " + std::to_string(deletions) + " deletions; 0 failures expected, " +
         std::to_string(r.failures.size() + bad) + " found");
  return c;
}

Criterion criterion4(const std::vector<Run>& runs) {
  Criterion c;
  std::mt19937_64 rng(41);
  std::size_t groups = 0, subsets = 0, retr_bad = 0, content_groups = 0, content_words = 0, content_bad = 0;
  for (const auto& run : runs) {
    for (const auto& lv : run.tower.levels()) {
      for (auto [grp, order] : {std::pair{lv.g, lv.g_order}, std::pair{lv.h, lv.h_order}}) {
        if (!grp || !order || *order > 200) continue;
        ++groups;
        retr_bad += retractability_disagreements(*grp, rng, subsets);
        if (*order <= 24 && is_retractable(*grp, {})) {
          ++content_groups;
          content_bad += content_disagreements(*grp, rng, 100, content_words);
        }
      }
    }
  }
  c.require(retr_bad == 0, std::to_string(retr_bad) + " retractability disagreements");
  c.require(content_bad == 0, std::to_string(content_bad) + " content disagreements");
  c.note(std::to_string(groups) + " groups of order <= 200, " + std::to_string(subsets) +
         " letter subsets x 1000 words, " + std::to_string(retr_bad) + " disagreements; content on " +
         std::to_string(content_groups) + " retractable groups of order <= 24, " + std::to_string(content_words) + " words, " +
         std::to_string(content_bad) + " disagreements");
  return c;
}

Criterion criterion5(const std::vector<Run>& runs, const Tower& p2) {
  Criterion c;
  std::size_t acyclic_groups = 0, extensions = 0, bad = 0;
  for (const auto& run : runs) {
    const auto& input = run.tower.input();
    for (const auto& lv : run.tower.levels()) {
      // 2-/3-acyclicity on retractable groups of desk scale
      for (auto [grp, order] : {std::pair{lv.g, lv.g_order}, std::pair{lv.h, lv.h_order}}) {
        if (!grp || !order || *order > 200 || !is_retractable(*grp, {})) continue;
        ++acyclic_groups;
        GroupTable t(*grp, {});
        if (auto w = two_acyclicity_violation(t, grp->alphabet())) {
          ++bad;
          c.require(false, run.name + " 2-acyclicity: " + *w);
        }
        if (auto w = three_acyclicity_violation(t, grp->alphabet())) {
          ++bad;
          c.require(false, run.name + " 3-acyclicity: " + *w);
        }
      }
      // every coset extension the construction and its checks build: covers in G_k (|A| <= k) and in H_k
      std::vector<CeDiagnosis> ds;
      if (lv.g && (!lv.g_order || *lv.g_order <= 200) && lv.k <= run.tower.certified_grade()) {
        auto d = diagnose_extensions(input, lv.g, 1, lv.k, {});
        ds.insert(ds.end(), d.begin(), d.end());
      }
      if (lv.h && lv.h_order && *lv.h_order <= 2000 && lv.k + 1 <= input.alphabet_size()) {
        auto d = diagnose_extensions(input, lv.h, lv.k + 1, lv.k + 1, {});
        ds.insert(ds.end(), d.begin(), d.end());
      }
      for (const auto& d : ds) {
        ++extensions;
        bool ok = d.intersection_law && d.skeleton_meets_connected && d.component_intersections && d.structural();
        for (const auto& [kind, n] : d.shapes) ok = ok && kind.find("other") == std::string::npos;
        if (!ok) {
          ++bad;
          c.require(false, run.name + " extension over {" + render_set(d.a, input.letter_names()) + "}" +
                               (d.witnesses.empty() ? "" : ": " + d.witnesses.front()));
        }
      }
    }
  }

  // every B-component of every Z1 component over H1 of the two-edge path is a recognised shape
  const auto& lv1 = p2.levels().at(0);
  Ambient amb(lv1.h, {});
  ShapeCatalog catalog(amb);
  TowerOptions opts;
  auto z = build_z(p2.input(), lv1.h, 1, opts);
  std::size_t classified = 0;
  std::map<std::string, std::size_t> kinds;
  for (const auto& comp : z) {
    LetterSet letters;
    for (std::size_t i = 0; i < comp.positive_edge_count(); ++i) {
      EdgeId e = LabelledGraph::positive_edge(i);
      if (comp.alpha(e) != comp.omega(e)) letters.insert(comp.label(e).letter);
    }
    for (LetterSet b : proper_subsets(letters)) {
      Partition part = component_partition(comp, b);
      std::vector<bool> seen(part.count, false);
      for (VertexId v = 0; v < comp.vertex_count(); ++v) {
        if (seen[part.class_of[v]]) continue;
        seen[part.class_of[v]] = true;
        Extracted bc = component(comp, v, b);
        ShapeKind kind = catalog.classify(bc.graph, b).kind;
        ++kinds[to_string(kind)];
        ++classified;
        if (kind == ShapeKind::other) {
          ++bad;
          c.require(false, "Z1 component with unrecognised " + render_set(b, p2.input().letter_names()) + "-component");
        }
      }
    }
  }
  std::string kinds_text;
  for (const auto& [k, n] : kinds) kinds_text += (kinds_text.empty() ? "" : ", ") + k + " " + std::to_string(n);
  c.note(std::to_string(acyclic_groups) + " retractable groups 2-/3-acyclic, " + std::to_string(extensions) +
         " coset extensions checked, " + std::to_string(z.size()) + " Z1 components with " +
         std::to_string(classified) + " B-components classified (" + kinds_text + "), " + std::to_string(bad) +
         " failures");
  return c;
}

Criterion criterion6() {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> parts;
  for (std::uint32_t n : {1u, 2u}) {
    FCoverResult r = run_fcover(cyclic_group(n));
    std::size_t expected = n == 1 ? 2 : 7;
    std::string q = n == 1 ? "trivial Q" : "Q=C2";
    c.require(r.mm_order == expected, q + ": |M(Q)| = " + std::to_string(r.mm_order));
    c.require(r.mm_brute_force == expected, q + ": brute force finds " + std::to_string(r.mm_brute_force));
    c.require(r.premorphism && r.premorphism->passed(), q + ": premorphism and coverage");
    c.require(r.cover && r.cover->t_equals_s, q + ": T = S");
    c.require(r.cover && r.cover->f_inverse, q + ": T is F-inverse");
    c.require(r.cover && r.cover->surjective && r.cover->idempotent_separating,
              q + ": T -> M(Q) idempotent-separating onto");
    c.require(r.passed(), q + ": full suite");
    parts.push_back(q + " |M(Q)|=" + std::to_string(r.mm_order) + " (brute force " +
                    std::to_string(r.mm_brute_force) + "), |H|=" + std::to_string(r.h_order) +
                    ", |T|=|S|=" + std::to_string(r.cover ? r.cover->t_order : 0));
  }
  double s = seconds_since(t0);
  c.require(s < 300.0, "runtime under 5 min");
  for (const auto& p : parts) c.note(p);
  c.note(fmt_seconds(s));
  return c;
}

Criterion criterion7(const Tower& sym) {
  Criterion c;
  const EGroup& g = sym.group();
  c.require(sym.complete(), "symmetric chain complete");
  auto auts = oriented_automorphisms(sym.input());
  std::size_t swaps = 0, words = 0, bad = 0;
  std::mt19937_64 rng(71);
  for (const auto& aut : auts) {
    if (aut.letter_map == std::vector<Letter>{0, 1}) continue;
    ++swaps;
    auto ext = extend_automorphism(g, aut.letter_map);
    c.require(ext.has_value(), "automorphism extends to G");
    if (!ext) continue;
    for (int i = 0; i < 200; ++i) {
      Word p = random_word(g.alphabet(), 1 + i % 12, rng);
      ++words;
      bad += (*ext)(g.eval(p)) != g.eval(apply_letter_map(p, aut.letter_map));
    }
  }
  c.require(swaps == 1, "exactly one nontrivial automorphism (a <-> b)");
  c.require(bad == 0, std::to_string(bad) + " words where the extension does not commute");
  c.note(std::to_string(swaps) + " swap automorphism extended, " + std::to_string(words) + " words, " +
         std::to_string(bad) + " failures");
  return c;
}

Criterion criterion8() {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  CliRun run = run_cli("tower --format json " + data_file("path3.sg"));
  double s = seconds_since(t0);
  c.require(run.exit_code == 2, "exit code " + std::to_string(run.exit_code) + ", expected truncation code 2");
  nlohmann::json j;
  try {
    j = run.report();
  } catch (const std::exception& e) {
    c.require(false, std::string("report is not JSON: ") + e.what());
    return c;
  }
  std::size_t m = j["tower"]["certified_grade"].get<std::size_t>();
  c.require(m >= 1 && m < 3, "certified grade " + std::to_string(m) + " reported");
  c.require(j["main_lemma"]["passed"] == true, "main lemma restricted to content <= m");
  c.require(j["retractability"]["passed"] == true, "retractability cross-check");
  c.require(!j["witnesses"].empty(), "truncation witness present");

  // content restricted to at most m letters: retractable subgroups G_k[A], |A| <= m, of order <= 24
  TowerOptions o;
  o.max_level = m;
  Tower t = build_chain(path3(), o);
  std::mt19937_64 rng(81);
  std::size_t words = 0, bad = 0, subgroups = 0;
  for (const auto& lv : t.levels())
    for (LetterSet a : all_subsets(lv.g->alphabet())) {
      if (a.empty() || a.size() > m) continue;
      auto sub = restrict_letters(*lv.g, a);
      if (sub->order({}) > 24 || !is_retractable(*sub, {})) continue;
      ++subgroups;
      bad += content_disagreements(*sub, rng, 100, words);
    }
  c.require(bad == 0, std::to_string(bad) + " content disagreements");
  c.note("3-edge path: exit " + std::to_string(run.exit_code) + ", certified grade " + std::to_string(m) + " (" +
         j["tower"]["truncation_reason"].get<std::string>() + "), main lemma " +
         std::to_string(j["main_lemma"]["failures"].size()) + " failures, retractability " +
         std::to_string(j["retractability"]["disagreements"].size()) + " disagreements, content on " +
         std::to_string(subgroups) + " subgroups " + std::to_string(words) + " words " + std::to_string(bad) +
         " disagreements, " + fmt_seconds(s));
  return c;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  Tower p2 = build_chain(path2());
  double p2_seconds = seconds_since(t0);

  std::vector<Run> runs;
  runs.push_back({"single edge", build_chain(single_edge())});
  runs.push_back({"single loop", build_chain(single_loop())});
  runs.push_back({"two-edge path", build_chain(path2())});
  runs.push_back({"symmetric two-edge path", build_chain(path2_symmetric())});
  runs.push_back({"double edge", build_chain(double_edge())});
  runs.push_back({"edge and loop", build_chain(edge_and_loop())});
  {
    FiniteGroup c2(cyclic_group(2), 12);
    runs.push_back({"Cayley graph of C2", build_chain(std::make_shared<const LabelledGraph>(c2.cayley()))});
  }
  {
    TowerOptions o;
    o.max_level = 1;
    runs.push_back({"three-edge path, level 1", build_chain(path3(), o)});
  }
  const Tower& sym = runs[3].tower;

  std::vector<std::pair<int, std::function<Criterion()>>> criteria{
      {1, [] { return criterion1(); }},
      {2, [&] { return criterion2(p2, p2_seconds); }},
      {3, [&] { return criterion3(p2); }},
      {4, [&] { return criterion4(runs); }},
      {5, [&] { return criterion5(runs, p2); }},
      {6, [] { return criterion6(); }},
      {7, [&] { return criterion7(sym); }},
      {8, [] { return criterion8(); }},
  };
  int failed = 0;
  for (auto& [n, run] : criteria) {
    Criterion c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << n << ": " << (c.passed() ? "PASS" : "FAIL") << " - " << c.text() << std::endl;
    failed += !c.passed();
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria pass") << std::endl;
  return failed ? 1 : 0;
}
