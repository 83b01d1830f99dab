#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fgapprox/commands.hpp"

using namespace fgapprox;

int main(int argc, char** argv) {
  CLI::App app{"Finite approximations of free groups and F-inverse covers"};
  app.require_subcommand(1);
  RunConfig config;
  config.budget.elements = default_element_budget();
  std::string format = "text";
  std::string out;

  auto common = [&](CLI::App* sub, bool graph_input) {
    sub->add_option("--budget-elements", config.budget.elements, "element budget per group enumeration")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-vertices", config.budget.vertices, "vertex budget per graph")->check(CLI::PositiveNumber);
    sub->add_option("--budget-cells", config.budget.cells, "budget on elements x degree")->check(CLI::PositiveNumber);
    sub->add_option("--samples", config.samples, "sampled words per randomized check")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "seed for randomized checks");
    sub->add_option("--out", out, "write the JSON report to this file");
    sub->add_option("--format", format, "standard output format")->check(CLI::IsMember({"text", "json"}));
    if (graph_input) {
      sub->add_option("--max-level", config.max_level, "highest tower level (0: number of edges)");
      sub->add_option("--cycle-len", config.cycle_len, "length of the cycles closing each edge")
          ->check(CLI::Range(std::size_t{2}, std::size_t{64}));
      sub->add_flag("--lean", config.lean, "experimental: build Z from coset extensions only (unverified variant)");
    }
  };

  auto* tower = app.add_subcommand("tower", "build the group tower for a graph and verify it");
  tower->add_option("input", config.input, "graph file")->required();
  common(tower, true);

  auto* fcover = app.add_subcommand("fcover", "build and verify an F-inverse cover of M(Q)");
  auto* input_opt = fcover->add_option("input", config.input, "Q as egroup JSON or a group table");
  auto* cyclic_opt = fcover->add_option("--cyclic", config.cyclic, "use the cyclic group of this order on one generator")
                         ->check(CLI::PositiveNumber);
  input_opt->excludes(cyclic_opt);
  fcover->add_option("--generators", config.generators, "generators of a table-defined group (names or indices)");
  fcover->add_option("--max-q-order", config.max_q_order, "largest accepted order of Q")->check(CLI::PositiveNumber);
  common(fcover, true);

  auto* check = app.add_subcommand("check-monoid", "check the inverse-monoid laws and the F-inverse property");
  check->add_option("input", config.input, "monoid table file")->required();
  check->add_flag("--wagner-preston", config.wagner_preston, "print the Wagner-Preston representation");
  common(check, false);

  auto* diagnose = app.add_subcommand("diagnose-ce", "structural diagnostics of coset extensions in the tower");
  diagnose->add_option("input", config.input, "graph file")->required();
  diagnose->add_option("--level", config.level, "tower level whose group hosts the extensions")
      ->check(CLI::PositiveNumber);
  common(diagnose, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_input_error;
  }
  if (fcover->parsed() && !config.cyclic && config.input.empty()) {
    std::cerr << "fcover: give an input file or --cyclic n\n";
    return exit_input_error;
  }

  config.command = app.get_subcommands().front()->get_name();
  config.format = format == "json" ? ReportFormat::json : ReportFormat::text;
  if (!out.empty()) config.out = out;

  CommandResult r = run_command(config);
  if (config.out) {
    std::ofstream f(*config.out);
    if (!f) {
      std::cerr << "cannot write " << config.out->string() << "\n";
      return exit_input_error;
    }
    f << r.report;
  }
  if (config.format == ReportFormat::json)
    std::cout << r.report;
  else
    std::cout << r.summary;
  return r.exit_code;
}
