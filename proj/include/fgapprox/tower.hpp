#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fgapprox/cosetext.hpp"
#include "fgapprox/egroup.hpp"
#include "fgapprox/sgraph.hpp"

namespace fgapprox {

// X1: every non-loop edge closed to an n-cycle, then trivially completed. Input vertices keep their ids.
LabelledGraph build_x1(const LabelledGraph& input, std::size_t cycle_len = 2);

// A path read in the oriented input graph: e goes alpha e -> omega e, e^-1 the other way.
std::optional<VertexId> follow_input(const LabelledGraph& input, VertexId u, const Word& p);

// Connected components of the subgraph spanned by the edges A (vertices with no A-edge are skipped).
std::vector<Selection> span_components(const LabelledGraph& input, LetterSet a);

// Every vertex of `input` is carrier point of the same id in the ambient group, so h |-> h[c] is the
// canonical morphism to X1 with 1 |-> c.
struct Cover {
  ElementGraph graph;
  VertexId base = 0;  // input vertex c with 1 |-> c
};
// The component containing 1 of the preimage of `component` under 1 |-> base.
ElementGraph cover_at(Ambient& ambient, const LabelledGraph& input, const Selection& component, VertexId base);
// Covers of one component up to labelled isomorphism; `found` receives the count before deduplication.
std::vector<Cover> enumerate_covers(Ambient& ambient, const LabelledGraph& input, const Selection& component,
                                    std::size_t* found = nullptr);

// Close every maximal non-cyclic monochromatic path into a cycle; the result is weakly complete.
LabelledGraph close_paths(const LabelledGraph& g);

// A construction invariant failed; the message carries the witness.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TowerOptions {
  std::size_t max_level = 0;  // 0: up to |E|
  std::size_t cycle_len = 2;
  Budget budget;
  bool lean = false;
  std::size_t dedup_limit = 5000;  // components above this size are not deduplicated
};

struct CoverCheck {
  LetterSet a;
  std::uint32_t component = 0;
  std::size_t cover = 0;
  std::size_t vertices = 0;
  std::size_t ce_vertices = 0;
  bool admissible = false;
  bool embeds = false;
  bool bridge_free = false;
  std::string witness;
  [[nodiscard]] bool passed() const { return admissible && embeds && bridge_free; }
};

struct CondReport {
  std::size_t k = 0;
  bool g_retractable = false;
  bool h_retractable = false;
  bool stable = false;
  std::vector<std::string> stability_witness;
  std::vector<CoverCheck> covers;
  [[nodiscard]] bool passed() const;
};

struct ZStats {
  std::size_t items = 0;
  std::size_t distinct = 0;
  std::size_t cluster_items = 0;
  std::size_t extension_items = 0;
  std::size_t covers_found = 0;
  std::size_t covers_distinct = 0;
  std::size_t vertices = 0;
};

struct TowerLevel {
  std::size_t k = 0;
  std::shared_ptr<const LabelledGraph> x;
  std::shared_ptr<EGroup> g;
  std::optional<std::size_t> g_order;
  std::shared_ptr<const LabelledGraph> y;  // absent on the last level
  std::shared_ptr<EGroup> h;
  std::optional<std::size_t> h_order;
  ZStats z;  // statistics of the step from this level to the next
  std::optional<CondReport> cond;
};

class Tower {
 public:
  [[nodiscard]] const LabelledGraph& input() const { return *input_; }
  [[nodiscard]] std::size_t letter_count() const { return input_->alphabet_size(); }
  [[nodiscard]] const std::vector<TowerLevel>& levels() const { return levels_; }
  [[nodiscard]] const TowerOptions& options() const { return options_; }
  // Highest k for which G_k is built and its conditions hold.
  [[nodiscard]] std::size_t certified_grade() const { return grade_; }
  [[nodiscard]] bool complete() const { return grade_ == letter_count(); }
  [[nodiscard]] bool truncated() const { return truncated_; }
  [[nodiscard]] const std::string& truncation_reason() const { return truncation_reason_; }
  [[nodiscard]] bool check_failed() const { return !failure_.empty(); }
  [[nodiscard]] const std::string& failure() const { return failure_; }

  // G_m for the certified grade m.
  [[nodiscard]] const EGroup& group() const { return *levels_.at(grade_ - 1).g; }
  [[nodiscard]] std::shared_ptr<EGroup> group_ptr() const { return levels_.at(grade_ - 1).g; }
  [[nodiscard]] const EGroup& g(std::size_t k) const { return *levels_.at(k - 1).g; }
  [[nodiscard]] const EGroup& h(std::size_t k) const { return *levels_.at(k - 1).h; }
  [[nodiscard]] bool has_h(std::size_t k) const { return k >= 1 && k <= levels_.size() && levels_[k - 1].h; }

 private:
  friend Tower build_chain(std::shared_ptr<const LabelledGraph> input, const TowerOptions& options);
  std::shared_ptr<const LabelledGraph> input_;
  TowerOptions options_;
  std::vector<TowerLevel> levels_;
  std::size_t grade_ = 0;
  bool truncated_ = false;
  std::string truncation_reason_;
  std::string failure_;
};

// Disjoint union of X_k and the completed Cayley graphs of G_k[A], |A| = k.
LabelledGraph build_y(const LabelledGraph& x, const EGroup& g, std::size_t k, const Budget& budget,
                      std::size_t dedup_limit = 5000);
// Components of Z_k over H_k, each already weakly complete.
std::vector<LabelledGraph> build_z(const LabelledGraph& input, std::shared_ptr<const EGroup> h, std::size_t k,
                                   const TowerOptions& options, ZStats* stats = nullptr);

// Conditions for the pair (G_k, H_{k-1}), k >= 2.
CondReport verify_cond(const LabelledGraph& input, std::shared_ptr<const EGroup> g, const EGroup& h_prev,
                       std::size_t k, const Budget& budget);

Tower build_chain(std::shared_ptr<const LabelledGraph> input, const TowerOptions& options = {});

// Structural diagnostics of the full coset extension of one cover.
struct CeDiagnosis {
  LetterSet a;
  std::uint32_t component = 0;
  std::size_t cover = 0;
  std::size_t skeleton_vertices = 0;
  std::size_t ce_vertices = 0;
  bool admissible = false;
  bool skeleton_meets_connected = false;
  bool intersection_law = false;
  bool constituents_disjoint = false;
  bool cluster_property = false;
  bool component_intersections = false;
  bool embeds = false;
  bool bridge_free = false;
  std::map<std::string, std::size_t> shapes;  // "B:kind" -> count over off-skeleton B-components
  std::vector<std::string> witnesses;
  [[nodiscard]] bool structural() const {
    return admissible && skeleton_meets_connected && intersection_law && constituents_disjoint && cluster_property &&
           component_intersections;
  }
  [[nodiscard]] bool passed() const { return structural() && embeds && bridge_free; }
};
// Every cover of every component of <A>, min_size <= |A| <= max_size, inside the Cayley graph of `group`.
std::vector<CeDiagnosis> diagnose_extensions(const LabelledGraph& input, std::shared_ptr<const EGroup> group,
                                             std::size_t min_size, std::size_t max_size, const Budget& budget);

class RewriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A word q with [q]_G = [p]_G that forms a path u -> v in the input and uses only letters of the G-content
// of p. Throws RewriteError if p is not a path or the tower does not reach |co(p)|.
Word rewrite_to_content_path(const Tower& tower, VertexId u, const Word& p);

// Random walk in the oriented input graph along edges in `allowed`; stops early at a vertex with no such edge.
Word random_path_word(const LabelledGraph& input, VertexId start, std::size_t length, std::mt19937_64& rng,
                      LetterSet allowed = LetterSet(~std::uint64_t{0}));
Word random_word(LetterSet letters, std::size_t length, std::mt19937_64& rng);

struct MainLemmaOptions {
  std::size_t samples = 500;
  std::size_t max_length = 12;
  std::uint64_t seed = 0x5eed;
  std::size_t max_content = 0;  // 0: the tower's certified grade
};

struct MainLemmaFailure {
  std::string property;
  std::string word;
  std::string detail;
};

struct MainLemmaReport {
  std::size_t relations = 0;
  std::size_t deletions_checked = 0;
  std::size_t paths = 0;
  std::size_t empty_content = 0;
  std::size_t rewrites = 0;
  std::size_t loop_letters = 0;
  std::vector<MainLemmaFailure> failures;
  [[nodiscard]] bool passed() const { return failures.empty(); }
};

MainLemmaReport run_main_lemma(const Tower& tower, const MainLemmaOptions& options = {});

}  // namespace fgapprox
