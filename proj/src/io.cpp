#include "fgapprox/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace fgapprox {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(&in), source_(std::move(source)) {}

  // Next non-blank, non-comment line split into tokens; false at end of input.
  bool next(std::vector<Token>& tokens) {
    std::string line;
    while (std::getline(*in_, line)) {
      ++line_;
      tokens.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        if (line[i] == '#') break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(source_, line_, column, message);
  }
  [[noreturn]] void fail(const Token& t, const std::string& message) const { fail(t.column, message); }
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] const std::string& source() const { return source_; }

  void expect_header(const std::string& keyword) {
    std::vector<Token> t;
    if (!next(t)) fail(1, "empty input, expected '" + keyword + " 1'");
    if (t[0].text != keyword) fail(t[0], "expected header '" + keyword + " 1'");
    if (t.size() != 2) fail(t[0], "header takes exactly one version number");
    if (t[1].text != "1") fail(t[1], "unsupported " + keyword + " version '" + t[1].text + "'");
  }

  std::size_t number(const Token& t, std::size_t bound, const std::string& what) const {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t, "expected " + what + ", got '" + t.text + "'");
    if (v >= bound) fail(t, what + " " + t.text + " out of range (must be below " + std::to_string(bound) + ")");
    return v;
  }

 private:
  std::istream* in_;
  std::string source_;
  std::size_t line_ = 0;
};

}  // namespace

LabelledGraph parse_graph(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.expect_header("sgraph");
  std::vector<std::string> vertices;
  std::vector<InputEdge> edges;
  std::unordered_set<std::string> vertex_ids, edge_ids;
  std::vector<Token> t;
  while (r.next(t)) {
    if (t[0].text == "v") {
      if (t.size() != 2) r.fail(t[0], "vertex line takes one id: v <id>");
      if (!vertex_ids.insert(t[1].text).second) r.fail(t[1], "duplicate vertex id '" + t[1].text + "'");
      vertices.push_back(t[1].text);
    } else if (t[0].text == "e") {
      if (t.size() != 4) r.fail(t[0], "edge line takes three fields: e <id> <src> <dst>");
      if (!edge_ids.insert(t[1].text).second) r.fail(t[1], "duplicate edge id '" + t[1].text + "'");
      for (int i : {2, 3})
        if (!vertex_ids.count(t[i].text)) r.fail(t[i], "dangling endpoint '" + t[i].text + "' (declare it first)");
      edges.push_back({t[1].text, t[2].text, t[3].text});
    } else {
      r.fail(t[0], "unknown directive '" + t[0].text + "'");
    }
  }
  if (edges.size() > max_letters) throw ParseError(source, r.line(), 1, "more than 64 edges");
  return build_graph(vertices, edges);
}

LabelledGraph parse_graph(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  return parse_graph(in, source);
}

LabelledGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return parse_graph(in, path.string());
}

std::string write_graph(const LabelledGraph& g) {
  std::ostringstream out;
  out << "sgraph 1\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << "v " << g.vertex_name(v) << "\n";
  const auto& names = g.letter_names();
  for (std::size_t i = 0; i < g.positive_edge_count(); ++i) {
    EdgeId e = LabelledGraph::positive_edge(i);
    Letter a = g.label(e).letter;
    out << "e " << (a < names.size() ? names[a] : "e" + std::to_string(a)) << " " << g.vertex_name(g.alpha(e)) << " "
        << g.vertex_name(g.omega(e)) << "\n";
  }
  return out.str();
}

MonoidTable parse_monoid(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.expect_header("monoid");
  MonoidTable t;
  std::vector<Token> tok;
  if (!r.next(tok) || tok[0].text != "size" || tok.size() != 2)
    r.fail(tok.empty() ? 1 : tok[0].column, "expected 'size <n>'");
  t.size = r.number(tok[1], 1'000'000, "size");
  if (t.size == 0) r.fail(tok[1], "size must be positive");
  const std::size_t n = t.size;
  bool have_inv = false, have_one = false;
  std::size_t rows = 0;
  auto indices = [&](const std::vector<Token>& line, std::vector<MonoidElem>& out) {
    if (line.size() != n + 1)
      r.fail(line[0], "'" + line[0].text + "' needs " + std::to_string(n) + " entries, got " +
                          std::to_string(line.size() - 1));
    for (std::size_t i = 1; i <= n; ++i) out.push_back(static_cast<MonoidElem>(r.number(line[i], n, "element index")));
  };
  while (r.next(tok)) {
    const std::string& kw = tok[0].text;
    if (kw == "names") {
      if (!t.names.empty()) r.fail(tok[0], "duplicate 'names' line");
      if (tok.size() != n + 1) r.fail(tok[0], "'names' needs " + std::to_string(n) + " entries");
      for (std::size_t i = 1; i <= n; ++i) t.names.push_back(tok[i].text);
    } else if (kw == "mul") {
      if (rows == n) r.fail(tok[0], "more than " + std::to_string(n) + " 'mul' rows");
      indices(tok, t.mul);
      ++rows;
    } else if (kw == "inv") {
      if (have_inv) r.fail(tok[0], "duplicate 'inv' line");
      indices(tok, t.inv);
      have_inv = true;
    } else if (kw == "one") {
      if (have_one) r.fail(tok[0], "duplicate 'one' line");
      if (tok.size() != 2) r.fail(tok[0], "'one' takes one index");
      t.one = static_cast<MonoidElem>(r.number(tok[1], n, "element index"));
      have_one = true;
    } else {
      r.fail(tok[0], "unknown directive '" + kw + "'");
    }
  }
  if (rows != n) r.fail(1, "expected " + std::to_string(n) + " 'mul' rows, got " + std::to_string(rows));
  if (!have_inv) r.fail(1, "missing 'inv' line");
  if (!have_one) r.fail(1, "missing 'one' line");
  return t;
}

MonoidTable parse_monoid(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  return parse_monoid(in, source);
}

MonoidTable read_monoid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return parse_monoid(in, path.string());
}

std::string write_monoid(const MonoidTable& t) {
  std::ostringstream out;
  out << "monoid 1\nsize " << t.size << "\n";
  if (!t.names.empty()) {
    out << "names";
    for (const auto& s : t.names) out << " " << s;
    out << "\n";
  }
  for (std::size_t x = 0; x < t.size; ++x) {
    out << "mul";
    for (std::size_t y = 0; y < t.size; ++y) out << " " << t.mul[x * t.size + y];
    out << "\n";
  }
  out << "inv";
  for (auto x : t.inv) out << " " << x;
  out << "\none " << t.one << "\n";
  return out.str();
}

std::string write_egroup_json(const EGroup& g) {
  nlohmann::json j;
  j["format"] = "egroup";
  j["version"] = 1;
  j["degree"] = g.degree();
  j["letters"] = g.letter_names();
  nlohmann::json gens = nlohmann::json::array();
  for (Letter a = 0; a < g.letter_count(); ++a) {
    auto img = g.gen(pos(a)).images();
    gens.push_back(std::vector<std::uint32_t>(img.begin(), img.end()));
  }
  j["generators"] = std::move(gens);
  return j.dump(2) + "\n";
}

std::shared_ptr<EGroup> parse_egroup_json(std::string_view text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset only; recover line and column from it
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source, line, col, "malformed JSON");
  }
  auto fail = [&](const std::string& m) -> ParseError { return ParseError(source, 1, 1, m); };
  if (!j.is_object() || j.value("format", "") != "egroup") throw fail("expected an object with format \"egroup\"");
  if (j.value("version", 0) != 1) throw fail("unsupported egroup version");
  if (!j.contains("degree") || !j["degree"].is_number_unsigned()) throw fail("missing degree");
  std::size_t degree = j["degree"].get<std::size_t>();
  if (!j.contains("generators") || !j["generators"].is_array()) throw fail("missing generators");
  std::vector<Permutation> gens;
  for (const auto& g : j["generators"]) {
    if (!g.is_array() || g.size() != degree) throw fail("generator " + std::to_string(gens.size()) + " has wrong length");
    std::vector<std::uint32_t> img;
    for (const auto& x : g) {
      if (!x.is_number_unsigned()) throw fail("generator entries must be non-negative integers");
      img.push_back(x.get<std::uint32_t>());
    }
    try {
      gens.emplace_back(std::move(img));
    } catch (const std::invalid_argument&) {
      throw fail("generator " + std::to_string(gens.size()) + " is not a permutation");
    }
  }
  std::vector<std::string> letters;
  if (j.contains("letters")) letters = j["letters"].get<std::vector<std::string>>();
  if (!letters.empty() && letters.size() != gens.size()) throw fail("letters and generators differ in number");
  return std::make_shared<EGroup>(degree, std::move(gens), std::move(letters));
}

std::shared_ptr<EGroup> read_egroup_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_egroup_json(buf.str(), path.string());
}

}  // namespace fgapprox
