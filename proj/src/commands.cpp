#include "fgapprox/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fgapprox/io.hpp"
#include "fgapprox/tower.hpp"

namespace fgapprox {

using nlohmann::json;

namespace {

constexpr const char* schema_name = "fgapprox-report";
constexpr int schema_version = 1;

class Stopwatch {
 public:
  [[nodiscard]] double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json header(const std::string& command, const RunConfig& c) {
  json j;
  j["schema"] = schema_name;
  j["version"] = schema_version;
  j["command"] = command;
  j["config"] = {{"input", c.input.string()},
                 {"max_level", c.max_level},
                 {"cycle_len", c.cycle_len},
                 {"budget", {{"elements", c.budget.elements}, {"vertices", c.budget.vertices}, {"cells", c.budget.cells}}},
                 {"samples", c.samples},
                 {"seed", c.seed},
                 {"lean", c.lean}};
  return j;
}

const char* status_name(int code) {
  switch (code) {
    case exit_verified: return "verified";
    case exit_truncated: return "truncated";
    case exit_check_failed: return "check failed";
    default: return "input error";
  }
}

CommandResult finish(json report, std::ostringstream& summary, int code) {
  report["status"] = status_name(code);
  report["exit_code"] = code;
  if (code != exit_verified && report.contains("witnesses") && !report["witnesses"].empty()) {
    const auto& w = report["witnesses"];
    for (std::size_t i = 0; i < std::min<std::size_t>(w.size(), 5); ++i)
      summary << "witness: " << w[i].get<std::string>() << "\n";
    if (w.size() > 5) summary << "(" << w.size() - 5 << " more witnesses in the JSON report)\n";
  }
  summary << "status: " << status_name(code) << "\n";
  return {code, report.dump(2) + "\n", summary.str()};
}

json optional_size(const std::optional<std::size_t>& n) { return n ? json(*n) : json(nullptr); }

TowerOptions tower_options(const RunConfig& c) {
  TowerOptions o;
  o.max_level = c.max_level;
  o.cycle_len = c.cycle_len;
  o.budget = c.budget;
  o.lean = c.lean;
  return o;
}

json cond_json(const CondReport& cond, const std::vector<std::string>& names, std::vector<std::string>& witnesses) {
  json failed = json::array();
  for (const auto& cc : cond.covers) {
    if (cc.passed()) continue;
    std::string w = "cover " + std::to_string(cc.cover) + " of component " + std::to_string(cc.component) + " of <" +
                    render_set(cc.a, names) + ">: " + cc.witness;
    failed.push_back({{"a", render_set(cc.a, names)},
                      {"component", cc.component},
                      {"cover", cc.cover},
                      {"admissible", cc.admissible},
                      {"embeds", cc.embeds},
                      {"bridge_free", cc.bridge_free},
                      {"witness", cc.witness}});
    witnesses.push_back(std::move(w));
  }
  for (const auto& w : cond.stability_witness) witnesses.push_back("stability: " + w);
  if (!cond.g_retractable) witnesses.push_back("G_" + std::to_string(cond.k) + " is not retractable");
  if (!cond.h_retractable) witnesses.push_back("H_" + std::to_string(cond.k - 1) + " is not retractable");
  return {{"k", cond.k},
          {"g_retractable", cond.g_retractable},
          {"h_retractable", cond.h_retractable},
          {"stable", cond.stable},
          {"stability_witness", cond.stability_witness},
          {"covers_checked", cond.covers.size()},
          {"covers_failed", failed},
          {"passed", cond.passed()}};
}

json tower_json(const Tower& t, std::vector<std::string>& witnesses, std::ostringstream& summary) {
  const auto& names = t.input().letter_names();
  json levels = json::array();
  for (const auto& lv : t.levels()) {
    json l = {{"k", lv.k},
              {"x_vertices", lv.x ? json(lv.x->vertex_count()) : json(nullptr)},
              {"g_degree", lv.g ? json(lv.g->degree()) : json(nullptr)},
              {"g_order", optional_size(lv.g_order)},
              {"y_vertices", lv.y ? json(lv.y->vertex_count()) : json(nullptr)},
              {"h_degree", lv.h ? json(lv.h->degree()) : json(nullptr)},
              {"h_order", optional_size(lv.h_order)}};
    if (lv.h)
      l["z"] = {{"items", lv.z.items},
                {"distinct", lv.z.distinct},
                {"cluster_items", lv.z.cluster_items},
                {"extension_items", lv.z.extension_items},
                {"covers_found", lv.z.covers_found},
                {"covers_distinct", lv.z.covers_distinct},
                {"vertices", lv.z.vertices}};
    if (lv.cond) l["cond"] = cond_json(*lv.cond, names, witnesses);
    levels.push_back(std::move(l));

    summary << "level " << lv.k << ": X " << (lv.x ? std::to_string(lv.x->vertex_count()) : "-") << " vertices, G order "
            << (lv.g_order ? std::to_string(*lv.g_order) : "unknown");
    if (lv.h)
      summary << ", H order " << (lv.h_order ? std::to_string(*lv.h_order) : "unknown") << ", Z " << lv.z.vertices
              << " vertices";
    if (lv.cond)
      summary << "; Cond_" << lv.cond->k << " " << (lv.cond->passed() ? "pass" : "FAIL") << " ("
              << lv.cond->covers.size() << " covers)";
    summary << "\n";
  }
  if (t.check_failed()) witnesses.push_back(t.failure());
  return {{"levels", levels},
          {"letters", t.letter_count()},
          {"certified_grade", t.certified_grade()},
          {"complete", t.complete()},
          {"truncated", t.truncated()},
          {"truncation_reason", t.truncation_reason()},
          {"failure", t.failure()}};
}

json lemma_json(const MainLemmaReport& r, std::size_t samples, std::vector<std::string>& witnesses) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"property", f.property}, {"word", f.word}, {"detail", f.detail}});
    witnesses.push_back("main lemma " + f.property + " on " + f.word + ": " + f.detail);
  }
  return {{"samples", samples},
          {"relations", r.relations},
          {"deletions_checked", r.deletions_checked},
          {"paths", r.paths},
          {"empty_content", r.empty_content},
          {"rewrites", r.rewrites},
          {"loop_letters", r.loop_letters},
          {"failures", failures},
          {"passed", r.passed()}};
}

// Automorphisms of the input extended to the top group, compared with evaluation on sampled words.
json symmetry_check(const Tower& t, std::size_t samples, std::uint64_t seed, std::vector<std::string>& witnesses,
                    bool& ok) {
  const EGroup& g = t.group();
  const auto& names = t.input().letter_names();
  auto auts = oriented_automorphisms(t.input(), 64);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  std::size_t nontrivial = 0, extended = 0, words = 0;
  json failures = json::array();
  for (const auto& aut : auts) {
    bool identity = true;
    for (Letter a = 0; a < aut.letter_map.size(); ++a) identity = identity && aut.letter_map[a] == a;
    if (identity) continue;
    ++nontrivial;
    std::string map;
    for (Letter a = 0; a < aut.letter_map.size(); ++a)
      map += (a ? " " : "") + names[a] + "->" + names[aut.letter_map[a]];
    auto ext = extend_automorphism(g, aut.letter_map);
    if (!ext) {
      failures.push_back({{"automorphism", map}, {"detail", "does not extend to the group"}});
      witnesses.push_back("automorphism " + map + " does not extend to the group");
      continue;
    }
    ++extended;
    for (std::size_t i = 0; i < samples; ++i) {
      Word p = random_word(g.alphabet(), len(rng), rng);
      ++words;
      if ((*ext)(g.eval(p)) != g.eval(apply_letter_map(p, aut.letter_map))) {
        std::string w = render_word(p, names);
        failures.push_back({{"automorphism", map}, {"word", w}, {"detail", "extension does not commute with evaluation"}});
        witnesses.push_back("automorphism " + map + " fails on " + w);
        break;
      }
    }
  }
  ok = failures.empty();
  return {{"automorphisms", nontrivial},
          {"extended", extended},
          {"words_checked", words},
          {"failures", failures},
          {"passed", ok}};
}

// Covering criterion against sampled word-level retractability, on every small group of the tower.
json retractability_check(const Tower& t, std::size_t max_order, std::uint64_t seed, const Budget& budget,
                          std::vector<std::string>& witnesses, bool& ok) {
  std::mt19937_64 rng(seed ^ 0x7f4a7c15ULL);
  const auto& names = t.input().letter_names();
  std::size_t groups = 0, subsets = 0;
  json disagreements = json::array();
  auto check = [&](const EGroup& g, const std::string& label) {
    ++groups;
    for (LetterSet a : all_subsets(g.alphabet())) {
      if (a.empty()) continue;
      ++subsets;
      bool covering = is_retractable_on(g, a, budget);
      auto violation = sampled_retractability_violation(g, a, 1000, 12, rng, budget);
      if (covering == !violation.has_value()) continue;
      std::string detail = covering ? "covering criterion holds but word " + render_word(*violation, names) +
                                          " violates retraction"
                                    : "covering criterion fails but no sampled word violates retraction";
      disagreements.push_back({{"group", label}, {"a", render_set(a, names)}, {"detail", detail}});
      witnesses.push_back(label + " on {" + render_set(a, names) + "}: " + detail);
    }
  };
  for (const auto& lv : t.levels()) {
    if (lv.g && lv.g_order && *lv.g_order <= max_order) check(*lv.g, "G_" + std::to_string(lv.k));
    if (lv.h && lv.h_order && *lv.h_order <= max_order) check(*lv.h, "H_" + std::to_string(lv.k));
  }
  ok = disagreements.empty();
  return {{"max_order", max_order},
          {"groups_checked", groups},
          {"subsets_checked", subsets},
          {"samples_per_subset", 1000},
          {"disagreements", disagreements},
          {"passed", ok}};
}

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

json monoid_elems(const InverseMonoid& m, const std::vector<MonoidElem>& xs) {
  json a = json::array();
  for (auto x : xs) a.push_back(m.name(x));
  return a;
}

}  // namespace

std::size_t default_element_budget() {
  if (const char* env = std::getenv("FGAPPROX_BUDGET_ELEMENTS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return Budget{}.elements;
}

CommandResult cmd_tower(const RunConfig& config) {
  Stopwatch total;
  auto input = std::make_shared<const LabelledGraph>(read_graph_file(config.input));
  json report = header("tower", config);
  std::ostringstream summary;
  std::vector<std::string> witnesses;
  report["input"] = {{"vertices", input->vertex_count()},
                     {"edges", input->positive_edge_count()},
                     {"letters", input->letter_names()}};
  summary << "tower: " << config.input.string() << " (" << input->vertex_count() << " vertices, "
          << input->positive_edge_count() << " edges)\n";

  Stopwatch build;
  Tower t = build_chain(input, tower_options(config));
  report["tower"] = tower_json(t, witnesses, summary);
  json timing = {{"build", build.ms()}};
  summary << "certified grade: " << t.certified_grade() << " of " << t.letter_count();
  if (t.truncated()) summary << " (" << t.truncation_reason() << ")";
  summary << "\n";

  bool failed = t.check_failed();
  for (const auto& lv : t.levels()) failed = failed || (lv.cond && !lv.cond->passed());

  if (t.certified_grade() >= 1 && !t.check_failed()) {
    Stopwatch lemma_time;
    MainLemmaOptions lo;
    lo.samples = config.samples;
    lo.seed = config.seed;
    MainLemmaReport lemma = run_main_lemma(t, lo);
    report["main_lemma"] = lemma_json(lemma, config.samples, witnesses);
    timing["main_lemma"] = lemma_time.ms();
    summary << "main lemma: " << config.samples << " samples, " << lemma.rewrites << " rewrites, "
            << lemma.failures.size() << " failures\n";
    failed = failed || !lemma.passed();

    bool sym_ok = true;
    Stopwatch sym_time;
    report["symmetry"] = symmetry_check(t, std::min<std::size_t>(config.samples, 200), config.seed, witnesses, sym_ok);
    timing["symmetry"] = sym_time.ms();
    summary << "symmetry: " << report["symmetry"]["automorphisms"] << " automorphisms, "
            << report["symmetry"]["words_checked"] << " words, " << (sym_ok ? "pass" : "FAIL") << "\n";
    failed = failed || !sym_ok;

    bool retr_ok = true;
    Stopwatch retr_time;
    report["retractability"] = retractability_check(t, 200, config.seed, config.budget, witnesses, retr_ok);
    timing["retractability"] = retr_time.ms();
    summary << "retractability cross-check: " << report["retractability"]["subsets_checked"] << " subsets on "
            << report["retractability"]["groups_checked"] << " groups, "
            << report["retractability"]["disagreements"].size() << " disagreements\n";
    failed = failed || !retr_ok;
  }

  int code = failed ? exit_check_failed : t.complete() ? exit_verified : exit_truncated;
  if (code == exit_truncated) witnesses.push_back("certified grade " + std::to_string(t.certified_grade()) + ": " +
                                                  t.truncation_reason());
  report["witnesses"] = witnesses;
  timing["total"] = total.ms();
  report["timing_ms"] = timing;
  return finish(std::move(report), summary, code);
}

std::shared_ptr<EGroup> group_from_table(const MonoidTable& table, const std::vector<std::string>& generators) {
  InverseMonoid m = validate(table);
  if (m.idempotents().size() != 1) throw std::invalid_argument("monoid table is not a group");
  const std::size_t n = m.size();
  auto element = [&](const std::string& token) -> MonoidElem {
    for (MonoidElem x = 0; x < n; ++x)
      if (m.name(x) == token) return x;
    char* end = nullptr;
    unsigned long v = std::strtoul(token.c_str(), &end, 10);
    if (!token.empty() && end && *end == '\0' && v < n) return static_cast<MonoidElem>(v);
    throw std::invalid_argument("unknown generator '" + token + "'");
  };
  std::vector<MonoidElem> gens;
  for (const auto& s : generators) gens.push_back(element(s));
  if (gens.empty()) {
    std::vector<char> reached(n, 0);
    reached[m.one()] = 1;
    std::size_t count = 1;
    for (MonoidElem x = 0; x < n && count < n; ++x) {
      if (reached[x]) continue;
      gens.push_back(x);
      // closure of the generated subgroup
      std::vector<MonoidElem> frontier;
      for (MonoidElem y = 0; y < n; ++y)
        if (reached[y]) frontier.push_back(y);
      while (!frontier.empty()) {
        MonoidElem y = frontier.back();
        frontier.pop_back();
        for (MonoidElem g : gens) {
          MonoidElem z = m.mul(y, g);
          if (!reached[z]) {
            reached[z] = 1;
            ++count;
            frontier.push_back(z);
          }
        }
      }
    }
  }
  std::vector<Permutation> perms;
  std::vector<std::string> names;
  for (MonoidElem g : gens) {
    std::vector<std::uint32_t> img(n);
    for (MonoidElem y = 0; y < n; ++y) img[y] = m.mul(y, g);
    perms.emplace_back(std::move(img));
    names.push_back(m.name(g));
  }
  return std::make_shared<EGroup>(n, std::move(perms), std::move(names));
}

std::shared_ptr<EGroup> load_q(const RunConfig& config) {
  if (config.cyclic) return cyclic_group(*config.cyclic);
  std::ifstream in(config.input);
  if (!in) throw ParseError(config.input.string(), 0, 0, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_egroup_json(text, config.input.string());
  return group_from_table(parse_monoid(std::string_view(text), config.input.string()), config.generators);
}

CommandResult cmd_fcover(const RunConfig& config) {
  Stopwatch total;
  auto q = load_q(config);
  json report = header("fcover", config);
  report["config"]["max_q_order"] = config.max_q_order;
  if (config.cyclic) report["config"]["cyclic"] = *config.cyclic;
  std::ostringstream summary;
  std::vector<std::string> witnesses;

  FCoverOptions o;
  o.tower = tower_options(config);
  o.lemma.samples = config.samples;
  o.lemma.seed = config.seed;
  o.max_q_order = config.max_q_order;
  o.samples = config.samples;
  o.seed = config.seed;
  FCoverResult r = run_fcover(q, o);

  report["q"] = {{"order", r.q_order}, {"generators", q->letter_names()}};
  summary << "fcover: Q of order " << r.q_order << " on " << q->letter_count() << " generators\n";
  if (r.tower) {
    report["tower"] = tower_json(*r.tower, witnesses, summary);
    summary << "certified grade: " << r.tower->certified_grade() << " of " << r.tower->letter_count() << "\n";
  }
  if (r.lemma) report["main_lemma"] = lemma_json(*r.lemma, config.samples, witnesses);
  report["mm"] = {{"order", r.mm_order}, {"brute_force", r.mm_brute_force}};
  report["h_order"] = r.h_order;
  report["checks"] = {{"value_formula", r.value_formula},
                      {"action_homomorphism", r.action_homomorphism},
                      {"content_equivariant", r.content_equivariant},
                      {"quotient", r.quotient_check}};
  if (r.premorphism) {
    const auto& p = *r.premorphism;
    report["premorphism"] = {{"defined", p.defined},       {"unit", p.unit},
                             {"inverse", p.inverse},       {"subproduct", p.subproduct},
                             {"coverage", p.coverage},     {"pairs_checked", p.pairs_checked},
                             {"witnesses", p.witnesses},   {"passed", p.passed()}};
    for (const auto& w : p.witnesses) witnesses.push_back("premorphism: " + w);
  }
  if (r.cover) {
    const auto& c = *r.cover;
    json maxima = json::array();
    for (auto [h, m] : c.class_maxima) maxima.push_back({h, m});
    report["cover"] = {{"h_order", c.h_order},
                       {"m_order", c.m_order},
                       {"t_order", c.t_order},
                       {"s_order", c.s_order},
                       {"t_equals_s", c.t_equals_s},
                       {"inverse_monoid", c.inverse_monoid},
                       {"f_inverse", c.f_inverse},
                       {"surjective", c.surjective},
                       {"subdirect", c.subdirect},
                       {"idempotent_separating", c.idempotent_separating},
                       {"sigma_classes", c.sigma_classes},
                       {"class_maxima", maxima},
                       {"separation_digest", hex(c.separation_digest)},
                       {"witnesses", c.witnesses},
                       {"passed", c.passed()}};
    for (const auto& w : c.witnesses) witnesses.push_back("cover: " + w);
    summary << "M(Q): " << r.mm_order << " elements (brute force " << r.mm_brute_force << "), H: " << r.h_order
            << " elements, T: " << c.t_order << " elements, S: " << c.s_order << " elements\n";
    summary << "T = S: " << (c.t_equals_s ? "yes" : "no") << "; F-inverse: " << (c.f_inverse ? "yes" : "no")
            << "; idempotent-separating onto M(Q): " << (c.idempotent_separating && c.surjective ? "yes" : "no")
            << "\n";
  }
  for (const auto& w : r.witnesses) witnesses.push_back(w);

  int code = exit_verified;
  if (r.passed()) {
    code = exit_verified;
  } else if (r.tower && !r.tower->check_failed() && !r.tower->complete()) {
    code = exit_truncated;
    witnesses.push_back("tower on the Cayley graph of Q reaches grade " + std::to_string(r.tower->certified_grade()) +
                        ": " + r.tower->truncation_reason());
  } else {
    code = exit_check_failed;
    if (witnesses.empty()) witnesses.push_back("verification suite failed");
  }
  report["witnesses"] = witnesses;
  report["timing_ms"] = {{"total", total.ms()}};
  return finish(std::move(report), summary, code);
}

CommandResult cmd_check_monoid(const RunConfig& config) {
  MonoidTable table = read_monoid_file(config.input);
  json report = header("check-monoid", config);
  std::ostringstream summary;
  std::optional<InverseMonoid> mon;
  try {
    mon.emplace(validate(std::move(table)));
  } catch (const MonoidError& e) {
    report["inverse_monoid"] = false;
    report["law_violation"] = {{"law", e.what()}, {"elements", e.witness}};
    std::string w = std::string(e.what()) + " at (";
    for (std::size_t i = 0; i < e.witness.size(); ++i) w += (i ? ", " : "") + std::to_string(e.witness[i]);
    report["witnesses"] = {w + ")"};
    summary << "inverse monoid: no (" << w << "))\n";
    return finish(std::move(report), summary, exit_check_failed);
  }
  const InverseMonoid& m = *mon;
  std::vector<std::string> witnesses;
  report["inverse_monoid"] = true;
  report["size"] = m.size();
  report["idempotents"] = monoid_elems(m, m.idempotents());
  report["group"] = m.idempotents().size() == 1;

  Partition sigma = sigma_classes(m);
  std::vector<std::vector<MonoidElem>> classes(sigma.count);
  for (MonoidElem x = 0; x < m.size(); ++x) classes[sigma.class_of[x]].push_back(x);
  json cls = json::array();
  for (const auto& c : classes) cls.push_back(monoid_elems(m, c));
  bool sigma_ok = is_group_congruence(m, sigma);
  report["sigma"] = {{"classes", cls}, {"group_congruence", sigma_ok}};
  if (!sigma_ok) witnesses.push_back("sigma is not a group congruence");

  FInverseResult f = is_f_inverse(m);
  json greatest = json::array();
  for (const auto& g : f.greatest) greatest.push_back(g ? json(m.name(*g)) : json(nullptr));
  report["f_inverse"] = {{"holds", f.holds}, {"greatest", greatest}};
  if (!f.holds) {
    report["f_inverse"]["failing_class"] = monoid_elems(m, classes[*f.failing_class]);
    report["f_inverse"]["maximal"] = monoid_elems(m, f.maximal);
  }
  if (config.wagner_preston) report["wagner_preston"] = wagner_preston(m);

  summary << "inverse monoid: yes; F-inverse: " << (f.holds ? "yes" : "no") << "\n";
  summary << m.size() << " elements, " << m.idempotents().size() << " idempotents, " << sigma.count
          << " sigma-classes\n";
  if (!f.holds) {
    auto list = [](const json& xs) {
      std::string s;
      for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x.get<std::string>();
      return s;
    };
    summary << "sigma-class {" << list(report["f_inverse"]["failing_class"]) << "} has maximal elements {"
            << list(report["f_inverse"]["maximal"]) << "}\n";
  }
  if (config.wagner_preston) summary << "Wagner-Preston representation:\n" << wagner_preston(m);
  report["witnesses"] = witnesses;
  return finish(std::move(report), summary, sigma_ok ? exit_verified : exit_check_failed);
}

CommandResult cmd_diagnose_ce(const RunConfig& config) {
  Stopwatch total;
  auto input = std::make_shared<const LabelledGraph>(read_graph_file(config.input));
  json report = header("diagnose-ce", config);
  report["config"]["level"] = config.level;
  std::ostringstream summary;
  std::vector<std::string> witnesses;
  RunConfig tc = config;
  tc.max_level = config.level;
  Tower t = build_chain(input, tower_options(tc));
  report["tower"] = tower_json(t, witnesses, summary);
  const auto& names = input->letter_names();
  const std::size_t k = std::min(config.level, t.certified_grade());
  summary << "coset extensions in G_" << k << ":\n";

  bool failed = t.check_failed();
  json diag = json::array();
  if (k >= 1 && !t.check_failed()) {
    auto ds = diagnose_extensions(*input, t.group_ptr(), 1, k, config.budget);
    std::size_t passed = 0;
    for (const auto& d : ds) {
      json shapes = json::object();
      for (const auto& [kind, n] : d.shapes) shapes[kind] = n;
      diag.push_back({{"a", render_set(d.a, names)},
                      {"component", d.component},
                      {"cover", d.cover},
                      {"skeleton_vertices", d.skeleton_vertices},
                      {"ce_vertices", d.ce_vertices},
                      {"admissible", d.admissible},
                      {"skeleton_meets_connected", d.skeleton_meets_connected},
                      {"intersection_law", d.intersection_law},
                      {"constituents_disjoint", d.constituents_disjoint},
                      {"cluster_property", d.cluster_property},
                      {"component_intersections", d.component_intersections},
                      {"embeds", d.embeds},
                      {"bridge_free", d.bridge_free},
                      {"shapes", shapes},
                      {"witnesses", d.witnesses},
                      {"passed", d.passed()}});
      if (d.passed()) {
        ++passed;
      } else {
        failed = true;
        for (const auto& w : d.witnesses)
          witnesses.push_back("<" + render_set(d.a, names) + "> cover " + std::to_string(d.cover) + ": " + w);
      }
      summary << "  <" << render_set(d.a, names) << "> component " << d.component << " cover " << d.cover << ": "
              << d.skeleton_vertices << " -> " << d.ce_vertices << " vertices, cluster property "
              << (d.cluster_property ? "yes" : "no") << ", bridge-free " << (d.bridge_free ? "yes" : "no") << "\n";
    }
    summary << passed << " of " << ds.size() << " coset extensions pass\n";
  }
  report["extensions"] = diag;
  int code = failed ? exit_check_failed : k < config.level ? exit_truncated : exit_verified;
  if (code == exit_truncated)
    witnesses.push_back("tower reaches grade " + std::to_string(t.certified_grade()) + ": " + t.truncation_reason());
  report["witnesses"] = witnesses;
  report["timing_ms"] = {{"total", total.ms()}};
  return finish(std::move(report), summary, code);
}

CommandResult run_command(const RunConfig& config) {
  auto error = [&](int code, const std::string& kind, const std::string& message) {
    json report = header(config.command, config);
    report["error"] = {{"kind", kind}, {"message", message}};
    report["witnesses"] = {message};
    std::ostringstream summary;
    summary << kind << ": " << message << "\n";
    return finish(std::move(report), summary, code);
  };
  try {
    if (config.command == "tower") return cmd_tower(config);
    if (config.command == "fcover") return cmd_fcover(config);
    if (config.command == "check-monoid") return cmd_check_monoid(config);
    if (config.command == "diagnose-ce") return cmd_diagnose_ce(config);
    return error(exit_input_error, "usage error", "unknown command '" + config.command + "'");
  } catch (const ParseError& e) {
    return error(exit_input_error, "parse error", e.what());
  } catch (const GraphError& e) {
    return error(exit_input_error, "invalid graph", e.what());
  } catch (const MonoidError& e) {
    return error(exit_input_error, "invalid table", e.what());
  } catch (const std::invalid_argument& e) {
    return error(exit_input_error, "invalid input", e.what());
  } catch (const BudgetExceeded& e) {
    return error(exit_truncated, "budget", e.what());
  } catch (const CheckFailed& e) {
    return error(exit_check_failed, "check failed", e.what());
  }
}

}  // namespace fgapprox
