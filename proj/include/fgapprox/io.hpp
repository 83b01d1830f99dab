#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fgapprox/egroup.hpp"
#include "fgapprox/invmon.hpp"
#include "fgapprox/sgraph.hpp"

namespace fgapprox {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        source(std::move(source)),
        line(line),
        column(column) {}
  std::string source;
  std::size_t line;
  std::size_t column;
};

// Graph files:
//   sgraph 1
//   v <id>
//   e <id> <src> <dst>
// Blank lines and lines starting with '#' are ignored. Every edge becomes its own letter.
LabelledGraph parse_graph(std::istream& in, const std::string& source = "<input>");
LabelledGraph parse_graph(std::string_view text, const std::string& source = "<input>");
LabelledGraph read_graph_file(const std::filesystem::path& path);
// Writes an oriented input graph (one letter per positive edge) back in the same format.
std::string write_graph(const LabelledGraph& g);

// Monoid tables:
//   monoid 1
//   size <n>
//   names <n tokens>          (optional)
//   mul <n indices>           (n rows, row x lists the products x*y)
//   inv <n indices>
//   one <index>
MonoidTable parse_monoid(std::istream& in, const std::string& source = "<input>");
MonoidTable parse_monoid(std::string_view text, const std::string& source = "<input>");
MonoidTable read_monoid_file(const std::filesystem::path& path);
std::string write_monoid(const MonoidTable& t);

// {"format": "egroup", "version": 1, "degree": n, "letters": [...], "generators": [[images], ...]}
std::string write_egroup_json(const EGroup& g);
std::shared_ptr<EGroup> parse_egroup_json(std::string_view text, const std::string& source = "<input>");
std::shared_ptr<EGroup> read_egroup_file(const std::filesystem::path& path);

}  // namespace fgapprox
