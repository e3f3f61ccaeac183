#include "fbne/bif.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "fbne/errors.hpp"

namespace fbne {

namespace {

struct Token {
  std::string text;
  int line;
};

// Splits into words, numbers and single-char punctuation; strips
// // and # comments.
std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size()) {
      const char ch = line[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      if (ch == '#' || (ch == '/' && i + 1 < line.size() &&
                        line[i + 1] == '/')) {
        break;
      }
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
          ch == '.' || ch == '-' || ch == '+') {
        std::size_t j = i;
        while (j < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[j])) ||
                line[j] == '_' || line[j] == '.' || line[j] == '-' ||
                line[j] == '+')) {
          ++j;
        }
        tokens.push_back({line.substr(i, j - i), line_no});
        i = j;
      } else {
        tokens.push_back({std::string(1, ch), line_no});
        ++i;
      }
    }
  }
  return tokens;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string source)
      : tokens_(std::move(tokens)), source_(std::move(source)) {}

  BayesianNetwork parse() {
    expect("network");
    next();  // network name
    skip_block();

    std::vector<Variable> vars;
    std::map<std::string, int> var_index;
    struct RawCpt {
      int child;
      std::vector<int> parents;
      std::vector<std::vector<double>> rows;
      int line;
    };
    std::vector<RawCpt> raw;
    std::map<int, bool> has_cpt;

    while (!at_end()) {
      const Token& t = peek();
      if (t.text == "variable") {
        next();
        Variable v = parse_variable();
        if (var_index.count(v.name)) {
          fail("duplicate variable '" + v.name + "'", t.line);
        }
        var_index[v.name] = static_cast<int>(vars.size());
        vars.push_back(std::move(v));
      } else if (t.text == "probability") {
        next();
        RawCpt c;
        c.line = t.line;
        parse_probability(var_index, vars, &c.child, &c.parents, &c.rows);
        if (has_cpt[c.child]) {
          fail("duplicate probability block for '" + vars[c.child].name + "'",
               t.line);
        }
        has_cpt[c.child] = true;
        raw.push_back(std::move(c));
      } else {
        fail("unexpected token '" + t.text + "'", t.line);
      }
    }

    std::vector<Cpt> cpts(vars.size());
    for (auto& rc : raw) {
      Cpt c;
      c.child = rc.child;
      c.parents = std::move(rc.parents);
      c.rows = std::move(rc.rows);
      cpts[rc.child] = std::move(c);
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!has_cpt[static_cast<int>(i)]) {
        throw FormatError(source_ + ": variable '" + vars[i].name +
                          "' has no probability block");
      }
    }
    try {
      return BayesianNetwork(std::move(vars), std::move(cpts));
    } catch (const Error& e) {
      throw FormatError(source_ + ": " + e.what());
    }
  }

 private:
  Variable parse_variable() {
    Variable v;
    v.name = next().text;
    expect("{");
    expect("type");
    expect("discrete");
    expect("[");
    const Token card_tok = next();
    const int declared = std::atoi(card_tok.text.c_str());
    expect("]");
    expect("{");
    while (peek().text != "}") {
      v.states.push_back(next().text);
      if (peek().text == ",") next();
    }
    expect("}");
    expect(";");
    expect("}");
    if (declared != static_cast<int>(v.states.size())) {
      fail("variable '" + v.name + "' declares " + card_tok.text +
               " states but lists " + std::to_string(v.states.size()),
           card_tok.line);
    }
    return v;
  }

  void parse_probability(const std::map<std::string, int>& var_index,
                         const std::vector<Variable>& vars, int* child,
                         std::vector<int>* parents,
                         std::vector<std::vector<double>>* rows) {
    expect("(");
    const Token child_tok = next();
    *child = lookup(var_index, child_tok);
    if (peek().text == "|") {
      next();
      while (peek().text != ")") {
        parents->push_back(lookup(var_index, next()));
        if (peek().text == ",") next();
      }
    }
    expect(")");
    expect("{");

    const int child_card = vars[*child].cardinality();
    long long n_configs = 1;
    std::vector<int> parent_cards;
    for (int p : *parents) {
      parent_cards.push_back(vars[p].cardinality());
      n_configs *= vars[p].cardinality();
    }
    rows->assign(n_configs, {});

    std::vector<bool> seen(n_configs, false);
    while (peek().text != "}") {
      const Token& row_tok = peek();
      if (row_tok.text == "table") {
        next();
        // Flat list: child state varies slowest, parent configurations
        // fastest (last parent fastest).
        std::vector<double> flat;
        while (peek().text != ";") {
          flat.push_back(parse_prob(next()));
          if (peek().text == ",") next();
        }
        expect(";");
        if (static_cast<long long>(flat.size()) != n_configs * child_card) {
          fail("table lists " + std::to_string(flat.size()) +
                   " values, expected " +
                   std::to_string(n_configs * child_card),
               row_tok.line);
        }
        for (long long j = 0; j < n_configs; ++j) {
          auto& row = (*rows)[j];
          row.resize(child_card);
          for (int k = 0; k < child_card; ++k) {
            row[k] = flat[k * n_configs + j];
          }
          seen[j] = true;
        }
      } else if (row_tok.text == "(") {
        next();
        std::vector<int> config;
        for (std::size_t pi = 0; pi < parents->size(); ++pi) {
          const Token state_tok = next();
          const int s = vars[(*parents)[pi]].state_index(state_tok.text);
          if (s < 0) {
            fail("unknown state '" + state_tok.text + "' for parent '" +
                     vars[(*parents)[pi]].name + "'",
                 state_tok.line);
          }
          config.push_back(s);
          if (peek().text == ",") next();
        }
        expect(")");
        int j = 0;
        for (std::size_t pi = 0; pi < config.size(); ++pi) {
          j = j * parent_cards[pi] + config[pi];
        }
        if (seen[j]) fail("duplicate parent configuration row", row_tok.line);
        std::vector<double> row;
        while (peek().text != ";") {
          row.push_back(parse_prob(next()));
          if (peek().text == ",") next();
        }
        expect(";");
        if (static_cast<int>(row.size()) != child_card) {
          fail("row lists " + std::to_string(row.size()) +
                   " values, expected " + std::to_string(child_card),
               row_tok.line);
        }
        (*rows)[j] = std::move(row);
        seen[j] = true;
      } else {
        fail("unexpected token '" + row_tok.text + "' in probability block",
             row_tok.line);
      }
    }
    expect("}");

    for (long long j = 0; j < n_configs; ++j) {
      if (!seen[j]) {
        throw FormatError(source_ + ": probability block for '" +
                          vars[*child].name +
                          "' misses a parent configuration");
      }
      double sum = 0.0;
      for (double v : (*rows)[j]) sum += v;
      if (std::abs(sum - 1.0) > 1e-6) {
        throw FormatError(source_ + ": CPT row for '" + vars[*child].name +
                          "' sums to " + std::to_string(sum));
      }
      // Tidy residue in the 1e-6..1e-9 band so network validation
      // (which demands 1e-9) accepts the file; exact rows untouched.
      if (std::abs(sum - 1.0) > 1e-9) {
        for (double& v : (*rows)[j]) v /= sum;
      }
    }
  }

  double parse_prob(const Token& t) {
    char* end = nullptr;
    const double v = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size()) {
      fail("expected a number, got '" + t.text + "'", t.line);
    }
    return v;
  }

  int lookup(const std::map<std::string, int>& var_index, const Token& t) {
    const auto it = var_index.find(t.text);
    if (it == var_index.end()) {
      fail("unknown variable '" + t.text + "'", t.line);
    }
    return it->second;
  }

  void skip_block() {
    expect("{");
    int depth = 1;
    while (depth > 0) {
      const Token t = next();
      if (t.text == "{") ++depth;
      if (t.text == "}") --depth;
    }
  }

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() {
    if (at_end()) {
      throw FormatError(source_ + ": unexpected end of file");
    }
    return tokens_[pos_];
  }

  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }

  void expect(const std::string& text) {
    const Token t = next();
    if (t.text != text) {
      fail("expected '" + text + "', got '" + t.text + "'", t.line);
    }
  }

  [[noreturn]] void fail(const std::string& msg, int line) {
    throw FormatError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  std::vector<Token> tokens_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace

BayesianNetwork parse_bif(std::istream& in, const std::string& source_name) {
  return Parser(tokenize(in), source_name).parse();
}

BayesianNetwork load_bif(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse_bif(in, path);
}

std::string write_bif(const BayesianNetwork& net) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "network exported {\n}\n";
  for (int i = 0; i < net.node_count(); ++i) {
    const Variable& v = net.variable(i);
    out << "variable " << v.name << " {\n  type discrete [ "
        << v.cardinality() << " ] { ";
    for (int s = 0; s < v.cardinality(); ++s) {
      out << (s ? ", " : "") << v.states[s];
    }
    out << " };\n}\n";
  }
  for (int i = 0; i < net.node_count(); ++i) {
    const Cpt& c = net.cpt(i);
    out << "probability ( " << net.variable(i).name;
    if (!c.parents.empty()) {
      out << " |";
      for (std::size_t p = 0; p < c.parents.size(); ++p) {
        out << (p ? ", " : " ") << net.variable(c.parents[p]).name;
      }
    }
    out << " ) {\n";
    if (c.parents.empty()) {
      out << "  table ";
      for (std::size_t k = 0; k < c.rows[0].size(); ++k) {
        out << (k ? ", " : "") << c.rows[0][k];
      }
      out << ";\n";
    } else {
      const std::vector<int> cards = net.parent_cards(i);
      std::vector<int> config(c.parents.size(), 0);
      for (const auto& row : c.rows) {
        out << "  (";
        for (std::size_t p = 0; p < config.size(); ++p) {
          out << (p ? ", " : "")
              << net.variable(c.parents[p]).states[config[p]];
        }
        out << ") ";
        for (std::size_t k = 0; k < row.size(); ++k) {
          out << (k ? ", " : "") << row[k];
        }
        out << ";\n";
        for (int d = static_cast<int>(config.size()) - 1; d >= 0; --d) {
          if (++config[d] < cards[d]) break;
          config[d] = 0;
        }
      }
    }
    out << "}\n";
  }
  return out.str();
}

void write_bif_file(const BayesianNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_bif(net);
}

namespace {

Variable yes_no(const std::string& name) { return Variable{name, {"yes", "no"}}; }

}  // namespace

BayesianNetwork builtin_asia() {
  std::vector<Variable> vars = {yes_no("asia"),   yes_no("tub"),
                                yes_no("smoke"),  yes_no("lung"),
                                yes_no("bronc"),  yes_no("either"),
                                yes_no("xray"),   yes_no("dysp")};
  enum { kAsia, kTub, kSmoke, kLung, kBronc, kEither, kXray, kDysp };
  std::vector<Cpt> cpts(8);
  cpts[kAsia] = {kAsia, {}, {{0.01, 0.99}}};
  cpts[kTub] = {kTub, {kAsia}, {{0.05, 0.95}, {0.01, 0.99}}};
  cpts[kSmoke] = {kSmoke, {}, {{0.5, 0.5}}};
  cpts[kLung] = {kLung, {kSmoke}, {{0.1, 0.9}, {0.01, 0.99}}};
  cpts[kBronc] = {kBronc, {kSmoke}, {{0.6, 0.4}, {0.3, 0.7}}};
  cpts[kEither] = {kEither,
                   {kLung, kTub},
                   {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
  cpts[kXray] = {kXray, {kEither}, {{0.98, 0.02}, {0.05, 0.95}}};
  cpts[kDysp] = {kDysp,
                 {kBronc, kEither},
                 {{0.9, 0.1}, {0.8, 0.2}, {0.7, 0.3}, {0.1, 0.9}}};
  return BayesianNetwork(std::move(vars), std::move(cpts));
}

}  // namespace fbne
